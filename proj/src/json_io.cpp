#include "scaled/json_io.hpp"

#include <fstream>
#include <sstream>

#include "scaled/errors.hpp"

namespace scaled {

json ref_to_json(const FiniteSimplicialSet& x, Simplex s) {
  return json{{"word", degeneracy::word(s.repeats)}, {"target", x.id(s.cell)}};
}

Simplex ref_from_json(const FiniteSimplicialSet& x, const json& j) {
  if (j.is_string()) return {x.at(j.get<std::string>()), 0};
  if (!j.is_object() || !j.contains("target")) throw FormatError("simplex reference needs a target");
  CellIndex c = x.at(j.at("target").get<std::string>());
  std::vector<int> w;
  if (j.contains("word")) w = j.at("word").get<std::vector<int>>();
  return {c, degeneracy::from_word(w, x.dim(c))};
}

json complex_to_json(const FiniteSimplicialSet& x) {
  json cells = json::object();
  json faces = json::object();
  for (int d = 0; d <= x.max_dim(); ++d) {
    json ids = json::array();
    for (CellIndex c = x.begin_of_dim(d); c < x.end_of_dim(d); ++c) {
      ids.push_back(x.id(c));
      if (d > 0) {
        json fl = json::array();
        for (auto f : x.faces(c)) fl.push_back(ref_to_json(x, f));
        faces[x.id(c)] = fl;
      }
    }
    cells[std::to_string(d)] = ids;
  }
  json j{{"schema", kSchema}, {"dims", x.max_dim()}, {"cells", cells}, {"faces", faces}};
  if (x.coskeletal0()) j["coskeletal0"] = true;
  return j;
}

ComplexPtr complex_from_json(const json& j) {
  try {
    if (!j.is_object() || !j.contains("cells")) throw FormatError("complex document needs 'cells'");
    ComplexBuilder b;
    int dims = j.value("dims", -1);
    const json& cells = j.at("cells");
    const json faces = j.value("faces", json::object());
    int maxd = -1;
    for (auto it = cells.begin(); it != cells.end(); ++it) maxd = std::max(maxd, std::stoi(it.key()));
    if (dims >= 0 && maxd > dims) throw FormatError("'dims' is smaller than the largest cell dimension");
    for (int d = 0; d <= maxd; ++d) {
      auto key = std::to_string(d);
      if (!cells.contains(key)) continue;
      for (const auto& idj : cells.at(key)) {
        std::string id = idj.get<std::string>();
        std::vector<ComplexBuilder::Ref> fl;
        if (d > 0) {
          if (!faces.contains(id)) throw FormatError("cell '" + id + "' has no face list");
          for (const auto& r : faces.at(id)) {
            int h = b.handle_of(r.at("target").get<std::string>());
            std::vector<int> w = r.value("word", std::vector<int>{});
            fl.push_back({h, degeneracy::from_word(w, b.dim(h))});
          }
        }
        b.add_cell(id, d, fl);
      }
    }
    b.set_coskeletal0(j.value("coskeletal0", false));
    auto x = b.finish_shared();
    if (auto err = check_simplicial_identities(*x)) throw FormatError("simplicial identity violated: " + *err);
    return x;
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed complex: ") + e.what());
  } catch (const ReferenceError& e) {
    throw FormatError(std::string("malformed complex: ") + e.what());
  } catch (const ConstraintError& e) {
    throw FormatError(std::string("malformed complex: ") + e.what());
  } catch (const ParameterError& e) {
    throw FormatError(std::string("malformed complex: ") + e.what());
  }
}

json decoration_to_json(const Decorated& d) {
  json marks = json::object();
  const auto& x = d.complex();
  for (int n = 1; n <= x.max_dim(); ++n) {
    auto cells = d.marked_cells(n);
    if (cells.empty()) continue;
    json ids = json::array();
    for (auto c : cells) ids.push_back(x.id(c));
    marks[std::to_string(n)] = ids;
  }
  return json{{"schema", kSchema}, {"complex", complex_to_json(x)}, {"marks", marks}, {"kind", kind_name(d.kind())}};
}

Decorated decoration_from_json(const json& j) {
  try {
    auto x = complex_from_json(j.at("complex"));
    Decorated d(x, parse_kind(j.at("kind").get<std::string>()));
    if (j.contains("marks"))
      for (auto it = j.at("marks").begin(); it != j.at("marks").end(); ++it) {
        int n = std::stoi(it.key());
        for (const auto& idj : it.value()) {
          CellIndex c = x->at(idj.get<std::string>());
          if (x->dim(c) != n) throw FormatError("marked cell listed under the wrong dimension");
          d.mark(c);
        }
      }
    return d;
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed decoration: ") + e.what());
  } catch (const ReferenceError& e) {
    throw FormatError(std::string("malformed decoration: ") + e.what());
  } catch (const DecorationError& e) {
    throw FormatError(std::string("malformed decoration: ") + e.what());
  }
}

Decorated decorated_from_any(const json& j) {
  if (j.is_object() && j.contains("complex")) return decoration_from_json(j);
  return Decorated(complex_from_json(j), Kind::plain);
}

json assignment_to_json(const FiniteSimplicialSet& source, const FiniteSimplicialSet& target, const Assignment& a) {
  json out = json::object();
  for (CellIndex c = 0; c < source.size(); ++c) out[source.id(c)] = ref_to_json(target, a[std::size_t(c)]);
  return out;
}

Assignment assignment_from_json(const FiniteSimplicialSet& source, const FiniteSimplicialSet& target, const json& j) {
  try {
    Assignment a(std::size_t(source.size()));
    std::vector<char> seen(std::size_t(source.size()), 0);
    for (auto it = j.begin(); it != j.end(); ++it) {
      CellIndex c = source.at(it.key());
      a[std::size_t(c)] = ref_from_json(target, it.value());
      seen[std::size_t(c)] = 1;
    }
    for (CellIndex c = 0; c < source.size(); ++c)
      if (!seen[std::size_t(c)]) throw FormatError("assignment misses cell '" + source.id(c) + "'");
    return a;
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed assignment: ") + e.what());
  } catch (const ReferenceError& e) {
    throw FormatError(std::string("malformed assignment: ") + e.what());
  } catch (const ParameterError& e) {
    throw FormatError(std::string("malformed assignment: ") + e.what());
  }
}

json map_to_json(const DecoratedMap& f) {
  return json{{"schema", kSchema},
              {"source", decoration_to_json(f.source)},
              {"target", decoration_to_json(f.target)},
              {"assign", assignment_to_json(f.source.complex(), f.target.complex(), f.assign)}};
}

DecoratedMap map_from_json(const json& j) {
  try {
    DecoratedMap f;
    f.source = decorated_from_any(j.at("source"));
    f.target = decorated_from_any(j.at("target"));
    f.assign = assignment_from_json(f.source.complex(), f.target.complex(), j.at("assign"));
    return f;
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed map: ") + e.what());
  }
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw FormatError("'" + path + "' is not valid JSON: " + e.what());
  }
}

void write_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write '" + path + "'");
  out << j.dump(2) << "\n";
}

}  // namespace scaled
