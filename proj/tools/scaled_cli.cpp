#include <CLI11.hpp>

#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "scaled/constructions.hpp"
#include "scaled/decompose.hpp"
#include "scaled/errors.hpp"
#include "scaled/generators.hpp"
#include "scaled/homotopy.hpp"
#include "scaled/json_io.hpp"
#include "scaled/lifting.hpp"
#include "scaled/strat.hpp"
#include "scaled/twocat.hpp"

using namespace scaled;

namespace {

// Exit statuses.
constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kUsage = 2;

struct Globals {
  std::string out;
  int jobs = 1;
};

int emit(const Globals& g, const json& j, bool pass = true) {
  const std::string text = j.dump(2) + "\n";
  if (g.out.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(g.out);
    if (!f) throw FormatError("cannot write '" + g.out + "'");
    f << text;
  }
  return pass ? kPass : kFail;
}

Decorated load_decorated(const std::string& path) { return decorated_from_any(read_json_file(path)); }
DecoratedMap load_map(const std::string& path) { return map_from_json(read_json_file(path)); }

// A report in the common shape for a failure found while running an algorithm.
json failure_report(const std::string& check, const std::string& detail) {
  return json{{"schema", kSchema}, {"check", check}, {"verdict", "fail"}, {"detail", detail}};
}

CellIndex vertex_arg(const Decorated& x, const std::string& id) {
  CellIndex c = x.complex().at(id);
  if (x.complex().dim(c) != 0) throw ParameterError("'" + id + "' is not a vertex");
  return c;
}

// Detects the document type by its fields.
std::string document_type(const json& j) {
  if (!j.is_object()) throw FormatError("document must be a JSON object");
  if (j.contains("type") && j["type"].is_string()) return j["type"].get<std::string>();
  if (j.contains("source") && j.contains("target")) return "map";
  if (j.contains("marks")) return "decoration";
  if (j.contains("cells")) return "complex";
  throw FormatError("unrecognized document");
}

json counts_of(const FiniteSimplicialSet& x) {
  json c = json::array();
  for (int d = 0; d <= x.max_dim(); ++d) c.push_back(x.count(d));
  return c;
}

FaceSet face_set_from_json(int n, const json& j) {
  if (!j.is_array()) throw FormatError("face sets are lists of vertex lists");
  std::vector<std::uint32_t> subsets;
  for (const auto& face : j) {
    std::uint32_t s = 0;
    for (const auto& v : face) {
      int i = v.get<int>();
      if (i < 0 || i > n) throw ParameterError("vertex " + std::to_string(i) + " outside [" + std::to_string(n) + "]");
      s |= 1u << i;
    }
    if (s == 0) throw FormatError("empty face");
    subsets.push_back(s);
  }
  return FaceSet::generated(n, subsets);
}

json face_set_to_json(const FaceSet& f) {
  json out = json::array();
  for (auto s : f.maximal()) {
    json face = json::array();
    for (int v = 0; v <= f.n; ++v)
      if ((s >> v) & 1u) face.push_back(v);
    out.push_back(face);
  }
  return out;
}

// ---- subcommands ------------------------------------------------------------------

int run_validate(const Globals& g, const std::string& path) {
  json j = read_json_file(path);
  json report{{"schema", kSchema}, {"check", "validate"}};
  try {
    std::string type = document_type(j);
    report["type"] = type;
    if (type == "complex") {
      auto x = complex_from_json(j);
      report["counts"] = counts_of(*x);
    } else if (type == "decoration") {
      auto x = decoration_from_json(j);
      report["counts"] = counts_of(x.complex());
      report["kind"] = kind_name(x.kind());
    } else if (type == "map") {
      auto f = map_from_json(j);
      if (auto err = validate(f)) throw ConstraintError(*err);
      report["mono"] = is_mono(f);
    } else if (type == "certificate") {
      auto c = Certificate::from_json(j);
      report["steps"] = c.steps.size();
    } else if (type == "two-category") {
      auto c = two_category_from_json(j);
      if (auto err = check_two_category(c)) throw ConstraintError(*err);
      report["objects"] = c.object_count();
    } else {
      throw FormatError("cannot validate documents of type '" + type + "'");
    }
  } catch (const Error& e) {
    report["verdict"] = "fail";
    report["detail"] = e.what();
    return emit(g, report, false);
  }
  report["verdict"] = "pass";
  return emit(g, report);
}

int run_construct_product(const Globals& g, const std::string& a, const std::string& b) {
  auto x = load_decorated(a), y = load_decorated(b);
  auto p = product_scaled(x, y);
  json j{{"schema", kSchema}, {"type", "product"}, {"object", decoration_to_json(p.object)}};
  return emit(g, j);
}

int run_construct_gray(const Globals& g, const std::string& a, const std::string& b) {
  auto x = load_decorated(a), y = load_decorated(b);
  if (x.kind() != Kind::plain || y.kind() != Kind::plain) throw DecorationError("the Gray product takes plain simplicial sets");
  auto p = gray_product(x.carrier(), y.carrier());
  return emit(g, json{{"schema", kSchema}, {"type", "gray-product"}, {"object", decoration_to_json(p.object)}});
}

int run_construct_join(const Globals& g, const std::string& a, const std::string& b) {
  auto x = load_decorated(a), y = load_decorated(b);
  Decorated object;
  if (x.kind() == Kind::stratified && y.kind() == Kind::stratified) {
    object = join_stratified(x, y).object;
  } else if ((x.kind() == Kind::marked_scaled || x.kind() == Kind::marked) && y.kind() == Kind::scaled) {
    object = join_marked_scaled(x.kind() == Kind::marked ? x.with_kind(Kind::marked_scaled) : x, y).object;
  } else if (x.kind() == Kind::plain && y.kind() == Kind::plain) {
    object = Decorated(join(x.carrier(), y.carrier()).complex, Kind::plain);
  } else {
    throw DecorationError("join takes two stratified sets, a marked-scaled set and a scaled set, or two plain sets");
  }
  return emit(g, json{{"schema", kSchema}, {"type", "join"}, {"object", decoration_to_json(object)}});
}

int run_construct_pushout(const Globals& g, const std::string& f_path, const std::string& g_path) {
  auto f = load_map(f_path), h = load_map(g_path);
  auto p = pushout(f, h);
  return emit(g, json{{"schema", kSchema},
                      {"type", "pushout"},
                      {"object", decoration_to_json(p.object)},
                      {"from_x", map_to_json(p.from_x)},
                      {"from_y", map_to_json(p.from_y)}});
}

int run_construct_slice(const Globals& g, const std::string& path, const std::string& vertex, int max_dim) {
  auto x = load_decorated(path);
  auto s = slice_at(x, vertex_arg(x, vertex), max_dim);
  return emit(g, json{{"schema", kSchema},
                      {"type", "slice"},
                      {"object", decoration_to_json(s.object)},
                      {"projection", map_to_json(s.projection)}});
}

int run_construct_hom(const Globals& g, const std::string& path, const std::string& from, const std::string& to,
                      const std::string& model, int max_dim) {
  auto c = load_decorated(path);
  CellIndex x = vertex_arg(c, from), y = vertex_arg(c, to);
  if (model == "gray") {
    auto h = hom_gray(c, x, y, max_dim);
    return emit(g, json{{"schema", kSchema}, {"type", "hom"}, {"model", model}, {"object", decoration_to_json(h.object)}});
  }
  if (model == "slice") {
    auto h = hom_slice(c, x, y, max_dim);
    return emit(g, json{{"schema", kSchema}, {"type", "hom"}, {"model", model}, {"object", decoration_to_json(h.object)}});
  }
  if (model == "compare") {
    auto cmp = hom_comparison(c, x, y, max_dim);
    bool ok = !cmp.problem && cmp.vertex_bijective && cmp.detects_marked_edges;
    json j{{"schema", kSchema},
           {"type", "hom-comparison"},
           {"verdict", ok ? "pass" : "fail"},
           {"problem", cmp.problem ? json(*cmp.problem) : json(nullptr)},
           {"vertex_bijective", cmp.vertex_bijective},
           {"detects_marked_edges", cmp.detects_marked_edges},
           {"map", map_to_json(cmp.map)}};
    return emit(g, j, ok);
  }
  throw ParameterError("unknown hom model '" + model + "' (gray, slice, compare)");
}

int run_construct_pushout_product(const Globals& g, const std::string& i_path, const std::string& j_path) {
  auto pp = pushout_product(load_map(i_path), load_map(j_path));
  return emit(g, json{{"schema", kSchema}, {"type", "pushout-product"}, {"map", map_to_json(pp.map)}});
}

int run_generators(const Globals& g, const std::string& fam, int nmax, bool with_maps) {
  json members = json::array();
  for (const auto& inst : family(fam, nmax)) {
    if (with_maps) members.push_back(json{{"name", inst.name}, {"map", map_to_json(inst.map)}});
    else members.push_back(inst.name);
  }
  return emit(g, json{{"schema", kSchema}, {"type", "family"}, {"family", fam}, {"nmax", nmax}, {"members", members}});
}

int run_check(const Globals& g, const std::string& path, const std::string& cls, int nmax) {
  auto r = classify(load_decorated(path), cls, CheckOptions{nmax, g.jobs});
  return emit(g, r.to_json(), r.pass);
}

int run_check_map(const Globals& g, const std::vector<std::string>& files, const std::string& assign, const std::string& cls,
                  int nmax) {
  DecoratedMap p;
  if (files.size() == 1) {
    if (!assign.empty()) throw ParameterError("--assign needs separate source and target files");
    p = load_map(files[0]);
  } else {
    auto src = load_decorated(files[0]), tgt = load_decorated(files[1]);
    if (!assign.empty()) {
      p = DecoratedMap{src, tgt, assignment_from_json(src.complex(), tgt.complex(), read_json_file(assign))};
    } else {
      auto maps = enumerate_maps(src, tgt);
      if (maps.size() != 1) throw ParameterError("no unique map between the files; pass --assign");
      p = maps[0];
    }
  }
  if (auto err = validate(p)) throw ConstraintError("not a map: " + *err);
  auto r = classify_map(p, cls, CheckOptions{nmax, g.jobs});
  return emit(g, r.to_json(), r.pass);
}

int run_eq_edges(const Globals& g, const std::string& path) {
  auto x = load_decorated(path);
  json edges = json::array();
  for (auto e : equivalence_edges(x, g.jobs)) edges.push_back(ref_to_json(x.complex(), e));
  return emit(g, json{{"schema", kSchema}, {"type", "equivalence-edges"}, {"edges", edges}});
}

int run_core(const Globals& g, const std::string& path) {
  auto x = load_decorated(path);
  auto sub = core(x);
  return emit(g, json{{"schema", kSchema}, {"type", "core"}, {"object", decoration_to_json(restrict_decoration(x, sub))}});
}

int run_replace(const Globals& g, const std::string& path) {
  auto r = fibrant_replacement(load_decorated(path), g.jobs);
  return emit(g, decoration_to_json(r));
}

int run_decompose(const Globals& g, const std::string& path, const std::string& fam, int budget, int nmax, std::size_t max_cells) {
  SearchBudget b;
  b.max_steps = budget;
  b.nmax = nmax;
  b.max_cells = max_cells;
  b.jobs = g.jobs;
  auto r = search_certificate(load_map(path), fam, b);
  return emit(g, r.to_json(), r.certificate.has_value());
}

int run_verify_cert(const Globals& g, const std::string& goal_path, const std::string& cert_path, const std::string& fam) {
  auto goal = load_map(goal_path);
  auto cert = Certificate::from_json(read_json_file(cert_path));
  auto v = verify_certificate(goal, cert, fam);
  return emit(g, v.to_json(), v.pass);
}

int run_prism(const Globals& g, int n, const std::string& variant, const std::vector<int>& rho) {
  auto f = prism_filtration(n, parse_prism_variant(variant), rho);
  return emit(g, f.certificate.to_json());
}

// Data: { "rho": [..], "a": [[vertices], ..], "b": [[vertices], ..],
//         "end": { subset id of B: ref }, "g": { prism cell id: ref } }.
// "end" gives g on {1} x B and "g" any further prism values.
int run_move(const Globals& g, const std::string& c_path, const std::string& data_path) {
  auto c = load_decorated(c_path);
  json d = read_json_file(data_path);
  if (!d.is_object() || !d.contains("rho") || !d.contains("b")) throw FormatError("move data needs 'rho' and 'b'");
  auto sr = sigma_rho(d["rho"].get<std::vector<int>>());
  const int n = sr.n;
  auto a = d.contains("a") ? face_set_from_json(n, d["a"]) : FaceSet::none(n);
  auto b = face_set_from_json(n, d["b"]);
  auto p = make_prism(n);
  const auto& px = *p.product.complex;
  PartialAssignment values(std::size_t(px.size()));
  auto set = [&](CellIndex cell, const json& ref) {
    Simplex s = ref_from_json(c.complex(), ref);
    if (values[std::size_t(cell)] && *values[std::size_t(cell)] != s) throw ConstraintError("conflicting values on " + px.id(cell));
    values[std::size_t(cell)] = s;
  };
  if (d.contains("end"))
    for (const auto& [id, ref] : d["end"].items()) {
      std::uint32_t s = 0;
      for (char ch : id) {
        if (ch < '0' || ch > '9' || ch - '0' > n) throw FormatError("bad subset id '" + id + "'");
        s |= 1u << (ch - '0');
      }
      set(p.cell(s << (n + 1)), ref);
    }
  if (d.contains("g"))
    for (const auto& [id, ref] : d["g"].items()) set(px.at(id), ref);
  // Faces of given values are determined.
  for (CellIndex cell = px.size() - 1; cell >= 0; --cell) {
    if (!values[std::size_t(cell)]) continue;
    for (int f = 0; px.dim(cell) > 0 && f <= px.dim(cell); ++f) {
      Simplex face = px.face({cell, 0}, f);
      if (face.degenerate()) continue;
      Simplex v = c.complex().face(*values[std::size_t(cell)], f);
      if (!values[std::size_t(face.cell)]) values[std::size_t(face.cell)] = v;
      else if (*values[std::size_t(face.cell)] != v) throw ConstraintError("values are not simplicial at " + px.id(face.cell));
    }
  }
  json report{{"schema", kSchema}, {"type", "transformation"}, {"rho", sr.rho}, {"a", face_set_to_json(a)}, {"b", face_set_to_json(b)}};
  PartialAssignment h;
  try {
    h = extend_sigma_rho_transformation(c, sr, a, b, p, values);
  } catch (const FibrancyError& e) {
    report["verdict"] = "fail";
    report["detail"] = e.what();
    return emit(g, report, false);
  }
  auto check = check_transformation(c, sr, b, p, h);
  json assignment = json::object();
  for (CellIndex cell = 0; cell < px.size(); ++cell)
    if (h[std::size_t(cell)]) assignment[px.id(cell)] = ref_to_json(c.complex(), *h[std::size_t(cell)]);
  json conditions = json::array();
  for (const auto& why : check.conditions) conditions.push_back(why ? json(*why) : json(nullptr));
  report["verdict"] = check.ok() ? "pass" : "fail";
  report["conditions"] = conditions;
  report["assignment"] = assignment;
  return emit(g, report, check.ok());
}

int run_nerve2(const Globals& g, const std::string& path, int nmax) {
  auto d = two_category_from_json(read_json_file(path));
  return emit(g, decoration_to_json(nerve2(d, nmax).object));
}

int run_oriental(const Globals& g, int n, bool t) {
  if (t && n != 2) throw ParameterError("the invertible oriental is only defined for n = 2");
  return emit(g, two_category_to_json(t ? oriental2_t() : oriental2(n)));
}

int run_ho2(const Globals& g, const std::string& path) {
  auto p = ho2_presentation(load_decorated(path));
  auto j = p.to_json();
  auto err = check_presentation(p);
  j["check"] = err ? json(*err) : json(nullptr);
  return emit(g, j, !err);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite scaled, marked and stratified simplicial sets"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--out", g.out, "Write the report to a file instead of stdout");
  app.add_option("--jobs", g.jobs, "Worker threads")->check(CLI::PositiveNumber);

  std::string file, file2, cls, fam, variant, vertex, from, to, model = "compare", assign;
  std::vector<std::string> files;
  std::vector<int> rho;
  int nmax = 0, n = 0, budget = 0, max_dim = -1, search_nmax = -1;
  std::size_t max_cells = 4096;
  bool with_maps = false, t = false;
  std::function<int()> action;

  auto* validate_cmd = app.add_subcommand("validate", "Parse and check a document");
  validate_cmd->add_option("file", file)->required();
  validate_cmd->callback([&] { action = [&] { return run_validate(g, file); }; });

  auto* construct = app.add_subcommand("construct", "Build a derived object");
  construct->require_subcommand(1);
  auto two_files = [&](CLI::App* sub) {
    sub->add_option("first", file)->required();
    sub->add_option("second", file2)->required();
  };
  auto* c_product = construct->add_subcommand("product", "Cartesian product of two decorated sets");
  two_files(c_product);
  c_product->callback([&] { action = [&] { return run_construct_product(g, file, file2); }; });
  auto* c_join = construct->add_subcommand("join", "Stratified or marked-scaled join");
  two_files(c_join);
  c_join->callback([&] { action = [&] { return run_construct_join(g, file, file2); }; });
  auto* c_gray = construct->add_subcommand("gray", "Gray product of plain simplicial sets");
  two_files(c_gray);
  c_gray->callback([&] { action = [&] { return run_construct_gray(g, file, file2); }; });
  auto* c_pushout = construct->add_subcommand("pushout", "Pushout of two maps with a common source");
  two_files(c_pushout);
  c_pushout->callback([&] { action = [&] { return run_construct_pushout(g, file, file2); }; });
  auto* c_slice = construct->add_subcommand("slice", "Slice over a vertex");
  c_slice->add_option("file", file)->required();
  c_slice->add_option("--vertex", vertex)->required();
  c_slice->add_option("--max-dim", max_dim);
  c_slice->callback([&] { action = [&] { return run_construct_slice(g, file, vertex, max_dim); }; });
  auto* c_hom = construct->add_subcommand("hom", "Mapping spaces and their comparison");
  c_hom->add_option("file", file)->required();
  c_hom->add_option("--from", from)->required();
  c_hom->add_option("--to", to)->required();
  c_hom->add_option("--model", model, "gray, slice or compare");
  c_hom->add_option("--max-dim", max_dim);
  c_hom->callback([&] { action = [&] { return run_construct_hom(g, file, from, to, model, max_dim); }; });
  auto* c_pp = construct->add_subcommand("pushout-product", "Pushout-product of two monos");
  two_files(c_pp);
  c_pp->callback([&] { action = [&] { return run_construct_pushout_product(g, file, file2); }; });

  auto* gens = app.add_subcommand("generators", "List a generating family");
  gens->add_option("family", fam)->required();
  gens->add_option("--nmax", nmax)->required();
  gens->add_flag("--maps", with_maps, "Include the maps");
  gens->callback([&] { action = [&] { return run_generators(g, fam, nmax, with_maps); }; });

  auto* check = app.add_subcommand("check", "Bounded fibrancy check of an object");
  check->add_option("file", file)->required();
  check->add_option("--class", cls)->required();
  check->add_option("--nmax", nmax)->required();
  check->callback([&] { action = [&] { return run_check(g, file, cls, nmax); }; });

  auto* check_map = app.add_subcommand("check-map", "Bounded check of a map class");
  check_map->add_option("files", files, "A map document, or source and target")->required()->expected(1, 2);
  check_map->add_option("--assign", assign, "Assignment file when source and target are given");
  check_map->add_option("--class", cls)->required();
  check_map->add_option("--nmax", nmax)->required();
  check_map->callback([&] { action = [&] { return run_check_map(g, files, assign, cls, nmax); }; });

  auto* eq = app.add_subcommand("eq-edges", "Edges admitting an equivalence witness");
  eq->add_option("file", file)->required();
  eq->callback([&] { action = [&] { return run_eq_edges(g, file); }; });

  auto* core_cmd = app.add_subcommand("core", "Largest subcomplex with every triangle thin");
  core_cmd->add_option("file", file)->required();
  core_cmd->callback([&] { action = [&] { return run_core(g, file); }; });

  auto* replace = app.add_subcommand("replace", "Fibrant replacement");
  replace->add_option("file", file)->required();
  replace->callback([&] { action = [&] { return run_replace(g, file); }; });

  auto* decompose = app.add_subcommand("decompose", "Search for a certificate");
  decompose->add_option("goal", file)->required();
  decompose->add_option("--family", fam)->required();
  decompose->add_option("--budget", budget, "Maximum number of steps")->required();
  decompose->add_option("--nmax", search_nmax, "Generator dimension bound");
  decompose->add_option("--max-cells", max_cells);
  decompose->callback([&] { action = [&] { return run_decompose(g, file, fam, budget, search_nmax, max_cells); }; });

  auto* verify = app.add_subcommand("verify-cert", "Replay and check a certificate");
  verify->add_option("goal", file)->required();
  verify->add_option("cert", file2)->required();
  verify->add_option("--family", fam);
  verify->callback([&] { action = [&] { return run_verify_cert(g, file, file2, fam); }; });

  auto* prism = app.add_subcommand("prism", "Certificate of a prism filtration");
  prism->add_option("--n", n)->required();
  prism->add_option("--variant", variant)->required();
  prism->add_option("--rho", rho)->delimiter(',');
  prism->callback([&] { action = [&] { return run_prism(g, n, variant, rho); }; });

  auto* move = app.add_subcommand("move", "Extend a transformation by the moving lemma");
  move->add_option("target", file)->required();
  move->add_option("data", file2)->required();
  move->callback([&] { action = [&] { return run_move(g, file, file2); }; });

  auto* nerve = app.add_subcommand("nerve2", "Scaled 2-nerve of a 2-category");
  nerve->add_option("file", file)->required();
  nerve->add_option("--nmax", nmax)->required();
  nerve->callback([&] { action = [&] { return run_nerve2(g, file, nmax); }; });

  auto* oriental = app.add_subcommand("oriental", "Truncated oriental as a 2-category");
  oriental->add_option("--n", n)->required();
  oriental->add_flag("--t", t, "The n = 2 oriental with its 2-cell inverted");
  oriental->callback([&] { action = [&] { return run_oriental(g, n, t); }; });

  auto* ho2 = app.add_subcommand("ho2", "Presentation of the homotopy 2-category");
  ho2->add_option("file", file)->required();
  ho2->callback([&] { action = [&] { return run_ho2(g, file); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }
  try {
    return action();
  } catch (const FibrancyError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return emit(g, failure_report(app.get_subcommands().front()->get_name(), e.what()), false);
  } catch (const ConstraintError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return emit(g, failure_report(app.get_subcommands().front()->get_name(), e.what()), false);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
}
