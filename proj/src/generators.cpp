#include "scaled/generators.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

#include "scaled/constructions.hpp"
#include "scaled/errors.hpp"
#include "scaled/strat.hpp"

namespace scaled {

std::uint32_t subset_of(std::initializer_list<int> vertices) {
  std::uint32_t s = 0;
  for (int v : vertices) s |= 1u << v;
  return s;
}

Decorated simplex_with(int n, Kind kind, const std::vector<std::uint32_t>& subsets) {
  auto x = standard_simplex(n);
  Decorated d(x, kind);
  for (auto s : subsets) {
    auto c = find_subset(*x, s, n);
    if (!c) throw ParameterError("face outside the simplex");
    d.mark(*c);
  }
  return d;
}

DecoratedMap inclusion_of(const Decorated& ambient, const std::vector<char>& keep) {
  auto sub = subcomplex(ambient.carrier(), keep);
  return DecoratedMap{restrict_decoration(ambient, sub), ambient, sub.inclusion.assign};
}

namespace {

// ---- names ------------------------------------------------------------------

struct ParsedName {
  std::string head;
  std::vector<std::pair<std::string, int>> params;

  int get(const std::string& key) const {
    for (const auto& [k, v] : params)
      if (k == key) return v;
    throw ParameterError("generator name lacks parameter '" + key + "'");
  }
};

ParsedName parse_name(const std::string& name) {
  ParsedName p;
  auto colon = name.rfind(':');
  if (colon == std::string::npos || name.find('=', colon) == std::string::npos) {
    p.head = name;
    return p;
  }
  p.head = name.substr(0, colon);
  std::stringstream ss(name.substr(colon + 1));
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) throw ParameterError("malformed generator parameter '" + item + "'");
    try {
      std::size_t used = 0;
      int v = std::stoi(item.substr(eq + 1), &used);
      if (used != item.size() - eq - 1) throw std::invalid_argument("trailing");
      p.params.emplace_back(item.substr(0, eq), v);
    } catch (const std::logic_error&) {
      throw ParameterError("malformed generator parameter '" + item + "'");
    }
  }
  return p;
}

std::string make_name(const std::string& head, const std::vector<std::pair<std::string, int>>& params) {
  std::string s = head;
  for (std::size_t a = 0; a < params.size(); ++a) {
    s += a == 0 ? ":" : ",";
    s += params[a].first + "=" + std::to_string(params[a].second);
  }
  return s;
}

std::string normalize_family(std::string f) {
  std::replace(f.begin(), f.end(), '-', '_');
  return f;
}

// ---- shapes -------------------------------------------------------------------

std::uint32_t full_set(int n) { return (1u << (n + 1)) - 1u; }

bool contains(std::uint32_t s, std::uint32_t required) { return (s & required) == required; }

// Marks of Delta^n chosen by a subset predicate (positive, tracked dims only).
Decorated simplex_marked_by(int n, Kind kind, const std::function<bool(std::uint32_t)>& pred) {
  auto x = standard_simplex(n);
  Decorated d(x, kind);
  for (std::uint32_t s = 1; s <= full_set(n); ++s) {
    int dim = std::popcount(s) - 1;
    if (!tracks(kind, dim) || !pred(s)) continue;
    d.mark(*find_subset(*x, s, n));
  }
  return d;
}

std::vector<char> horn_cells(const FiniteSimplicialSet& x, int n, int i) {
  std::uint32_t full = full_set(n), opposite = full & ~(1u << i);
  std::vector<char> keep(std::size_t(x.size()), 0);
  for (std::uint32_t s = 1; s <= full; ++s)
    if (s != full && s != opposite) keep[std::size_t(*find_subset(x, s, n))] = 1;
  return keep;
}

DecoratedMap horn_inclusion(const Decorated& simplex, int n, int i) {
  return inclusion_of(simplex, horn_cells(simplex.complex(), n, i));
}

// Delta^n with the edge {a, a+1} collapsed to a point, as a pushout; the
// source is the image of the horn at `horn`, `marked` lists faces to mark.
DecoratedMap collapsed_horn(int n, int a, int horn, Kind kind, const std::vector<std::uint32_t>& marked) {
  auto dn = standard_simplex(n);
  auto edge = simplex_operator(1, n, {a, a + 1});
  SimplicialMap to_point{edge.source, standard_point(), {}};
  for (CellIndex c = 0; c < edge.source->size(); ++c) to_point.assign.push_back(c == 0 || c == 1 ? Simplex{0, 0} : Simplex{0, 1u << 1});
  auto p = pushout(edge, to_point);
  Decorated target(p.object.carrier(), kind);
  for (auto s : marked) {
    Simplex img = p.from_x.assign[std::size_t(*find_subset(*dn, s, n))];
    if (!img.degenerate() && tracks(kind, p.object.complex().dim(img.cell))) target.mark(img.cell);
  }
  auto in_horn = horn_cells(*dn, n, horn);
  std::vector<char> keep(std::size_t(target.complex().size()), 0);
  for (CellIndex c = 0; c < dn->size(); ++c)
    if (in_horn[std::size_t(c)]) keep[std::size_t(p.from_x.assign[std::size_t(c)].cell)] = 1;
  return inclusion_of(target, keep);
}

DecoratedMap identity_on(const Decorated& source, const Decorated& target) {
  DecoratedMap m{source, target, {}};
  for (CellIndex c = 0; c < source.complex().size(); ++c) m.assign.push_back({c, 0});
  return m;
}

DecoratedMap remark(const Decorated& source, const std::vector<char>& target_marks) {
  return identity_on(source, Decorated(source.carrier(), source.kind(), target_marks));
}

DecoratedMap mark_map(int n, Kind kind, const std::function<bool(std::uint32_t)>& before,
                      const std::function<bool(std::uint32_t)>& after) {
  auto a = simplex_marked_by(n, kind, before);
  auto b = simplex_marked_by(n, kind, after);
  return remark(a, b.marks());
}

std::uint32_t window(int n, int i) {
  std::uint32_t s = 0;
  for (int v = i - 1; v <= i + 1; ++v)
    if (v >= 0 && v <= n) s |= 1u << v;
  return s;
}

// Faces opposite the listed vertices.
bool is_facet_opposite(std::uint32_t s, int n, int v) { return v >= 0 && v <= n && s == (full_set(n) & ~(1u << v)); }

Decorated delta3_eq() {
  return simplex_marked_by(3, Kind::stratified, [](std::uint32_t s) {
    return std::popcount(s) >= 3 || s == subset_of({0, 2}) || s == subset_of({1, 3});
  });
}

Decorated interval_decorated(int n, bool sharp_triangles) {
  auto j = interval_complex(n);
  return sharp_triangles ? sharp(j, Kind::scaled) : flat(j, Kind::scaled);
}

// ---- instances ----------------------------------------------------------------

void require(bool ok, const std::string& what) {
  if (!ok) throw ParameterError("illegal generator parameters: " + what);
}

struct Built {
  std::string family;
  DecoratedMap map;
};

Built build(const ParsedName& p) {
  const std::string& h = p.head;
  if (h == "scaled-S:inner" || h == "AS:inner") {
    int n = p.get("n"), i = p.get("i");
    require(n >= 2 && 0 < i && i < n, h);
    Kind kind = h == "AS:inner" ? Kind::marked_scaled : Kind::scaled;
    return {h == "AS:inner" ? "marked_scaled_AS" : "scaled_S", horn_inclusion(simplex_with(n, kind, {window(n, i)}), n, i)};
  }
  if (h == "scaled-S:delta4") {
    std::vector<std::uint32_t> t{subset_of({0, 2, 4}), subset_of({1, 2, 3}), subset_of({0, 1, 3}), subset_of({1, 3, 4}),
                                 subset_of({0, 1, 2})};
    auto a = simplex_with(4, Kind::scaled, t);
    t.push_back(subset_of({0, 3, 4}));
    t.push_back(subset_of({0, 1, 4}));
    return {"scaled_S", remark(a, simplex_with(4, Kind::scaled, t).marks())};
  }
  if (h == "scaled-S:collapsed") {
    int n = p.get("n");
    require(n >= 2, h);
    return {"scaled_S", collapsed_horn(n, 0, 0, Kind::scaled, {subset_of({0, 1, n})})};
  }
  if (h == "weak-fib:collapsed-last") {
    int n = p.get("n");
    require(n >= 2, h);
    return {"weak_fib", collapsed_horn(n, n - 1, n, Kind::scaled, {subset_of({0, n - 1, n})})};
  }
  if (h == "outer:collapsed-first" || h == "outer:collapsed-last") {
    int n = p.get("n");
    require(n >= 2, h);
    bool first = h == "outer:collapsed-first";
    return {"outer_collapsed", collapsed_horn(n, first ? 0 : n - 1, first ? 0 : n, Kind::plain, {})};
  }
  if (h == "AS:collapsed") {
    int n = p.get("n");
    require(n >= 2, h);
    return {"marked_scaled_AS", collapsed_horn(n, 0, 0, Kind::marked_scaled, {})};
  }
  if (h == "AS:last") {
    int n = p.get("n");
    require(n >= 1, h);
    return {"marked_scaled_AS", horn_inclusion(simplex_with(n, Kind::marked_scaled, {subset_of({n - 1, n})}), n, n)};
  }
  if (h == "AS:thin") {
    return {"marked_scaled_AS", remark(flat(standard_simplex(2), Kind::marked_scaled), sharp(standard_simplex(2), Kind::scaled).marks())};
  }
  if (h == "cartesian") {
    int n = p.get("n");
    require(n >= 2, h);
    return {"cartesian_horn", horn_inclusion(simplex_with(n, Kind::scaled, {subset_of({0, n - 1, n})}), n, n)};
  }
  if (h == "complicial") {
    int n = p.get("n"), i = p.get("i");
    require(n >= 1 && 0 <= i && i <= n, h);
    std::uint32_t w = window(n, i);
    return {"complicial_horn", horn_inclusion(simplex_marked_by(n, Kind::stratified, [w](std::uint32_t s) { return contains(s, w); }), n, i)};
  }
  if (h == "thinness") {
    int n = p.get("n"), i = p.get("i");
    require(n >= 2 && 0 <= i && i <= n, h);
    std::uint32_t w = window(n, i);
    auto m1 = [=](std::uint32_t s) {
      return contains(s, w) || is_facet_opposite(s, n, i - 1) || is_facet_opposite(s, n, i + 1);
    };
    auto m2 = [=](std::uint32_t s) { return contains(s, w) || std::popcount(s) == n; };
    return {"thinness", mark_map(n, Kind::stratified, m1, m2)};
  }
  if (h == "thinness-2") {
    int n = p.get("n"), i = p.get("i");
    require((n == 2 || n == 3) && 0 <= i && i <= n, h);
    std::uint32_t v = 1u << i;
    if (n == 2)
      return {"thinness_2trivial", mark_map(2, Kind::stratified, [v](std::uint32_t s) { return contains(s, v); },
                                            [](std::uint32_t) { return true; })};
    std::uint32_t extra = i == 0 ? subset_of({0, 1}) : i == 3 ? subset_of({2, 3}) : 0;
    std::uint32_t w = window(3, i);
    auto m = [=](std::uint32_t s) { return (std::popcount(s) >= 3 && contains(s, v)) || (extra && s == extra); };
    auto m2 = [=](std::uint32_t s) { return contains(s, w) || std::popcount(s) == 3; };
    return {"thinness_2trivial", mark_map(3, Kind::stratified, m, m2)};
  }
  if (h == "trivializer") {
    int k = p.get("k"), n = p.get("n");
    require(k >= 0 && n > k, h);
    auto a = flat(standard_simplex(n), Kind::stratified);
    return {"trivializer", remark(a, simplex_with(n, Kind::stratified, {full_set(n)}).marks())};
  }
  if (h == "saturation") {
    int n = p.get("n");
    require(n >= -1, h);
    if (n == -1) return {"saturation", remark(delta3_eq(), th(standard_simplex(3), 0).marks())};
    auto right = flat(standard_simplex(n), Kind::stratified);
    auto a = join_stratified(delta3_eq(), right);
    auto b = join_stratified(th(standard_simplex(3), 0), right);
    return {"saturation", remark(a.object, b.object.marks())};
  }
  if (h == "outer-anodyne") {
    int n = p.get("n");
    require(n >= 3, h);
    auto d = simplex_with(n, Kind::stratified, {subset_of({0, 1}), subset_of({0, 1, n})});
    return {"outer_anodyne", horn_inclusion(d, n, 0)};
  }
  if (h == "horn-T") {
    int n = p.get("n"), k = p.get("k"), hv = p.get("h");
    require(n >= 1 && 0 <= k && k < n && 0 <= hv && hv <= n, h);
    std::uint32_t e = subset_of({k, k + 1});
    return {"prism_horns", horn_inclusion(simplex_marked_by(n, Kind::scaled, [e](std::uint32_t s) { return contains(s, e); }), n, hv)};
  }
  if (h == "j") {
    int i = p.get("i");
    require(i == 1 || i == 2, h);
    std::uint32_t v = 1u << i;
    return {"j_maps", mark_map(3, Kind::scaled, [v](std::uint32_t s) { return contains(s, v); },
                               [](std::uint32_t) { return true; })};
  }
  if (h == "boundary") {
    int n = p.get("n");
    require(n >= 0, h);
    auto d = flat(standard_simplex(n), Kind::scaled);
    std::vector<char> keep(std::size_t(d.complex().size()), 0);
    for (CellIndex c = 0; c < d.complex().size(); ++c) keep[std::size_t(c)] = d.complex().dim(c) < n;
    return {"boundary_monos", inclusion_of(d, keep)};
  }
  if (h == "thin-triangle") {
    return {"boundary_monos", remark(flat(standard_simplex(2), Kind::scaled), sharp(standard_simplex(2)).marks())};
  }
  throw ParameterError("unknown generator '" + h + "'");
}

using Params = std::vector<std::pair<std::string, int>>;

void members(const std::string& fam_raw, int nmax, const std::function<void(const std::string&, const Params&)>& out) {
  std::string fam = normalize_family(fam_raw);
  auto inner = [&](const std::string& head) {
    for (int n = 2; n <= nmax; ++n)
      for (int i = 1; i < n; ++i) out(head, {{"n", n}, {"i", i}});
  };
  auto per_n = [&](const std::string& head, int from) {
    for (int n = from; n <= nmax; ++n) out(head, {{"n", n}});
  };
  if (fam == "scaled_S" || fam == "scaled_S_13") {
    inner("scaled-S:inner");
    if (fam == "scaled_S" && nmax >= 4) out("scaled-S:delta4", {});
    per_n("scaled-S:collapsed", 2);
  } else if (fam == "scaled_S_inner") {
    inner("scaled-S:inner");
  } else if (fam == "weak_fib") {
    inner("scaled-S:inner");
    per_n("scaled-S:collapsed", 2);
    per_n("weak-fib:collapsed-last", 2);
  } else if (fam == "outer_collapsed") {
    per_n("outer:collapsed-first", 2);
    per_n("outer:collapsed-last", 2);
  } else if (fam == "cartesian_horn") {
    per_n("cartesian", 2);
  } else if (fam == "complicial_horn") {
    for (int n = 1; n <= nmax; ++n)
      for (int i = 0; i <= n; ++i) out("complicial", {{"n", n}, {"i", i}});
  } else if (fam == "thinness") {
    for (int n = 2; n <= nmax; ++n)
      for (int i = 0; i <= n; ++i) out("thinness", {{"n", n}, {"i", i}});
  } else if (fam == "thinness_2trivial") {
    for (int n = 2; n <= std::min(nmax, 3); ++n)
      for (int i = 0; i <= n; ++i) out("thinness-2", {{"n", n}, {"i", i}});
  } else if (fam.rfind("trivializer", 0) == 0) {
    int k = -1;
    auto open = fam.find_first_of("(=");
    if (open != std::string::npos) k = std::atoi(fam.c_str() + open + 1);
    if (k < 0 || (fam != "trivializer(" + std::to_string(k) + ")" && fam != "trivializer:k=" + std::to_string(k)))
      throw ParameterError("unknown family '" + fam_raw + "'");
    for (int n = k + 1; n <= nmax; ++n) out("trivializer", {{"k", k}, {"n", n}});
  } else if (fam == "saturation") {
    for (int n = -1; n + 4 <= nmax; ++n) out("saturation", {{"n", n}});
  } else if (fam == "marked_scaled_AS") {
    inner("AS:inner");
    per_n("AS:last", 1);
    per_n("AS:collapsed", 2);
    if (nmax >= 2) out("AS:thin", {});
  } else if (fam == "outer_anodyne") {
    per_n("outer-anodyne", 3);
  } else if (fam == "prism_horns") {
    for (int n = 1; n <= nmax; ++n)
      for (int k = 0; k < n; ++k)
        for (int h : {k, k + 1}) out("horn-T", {{"n", n}, {"k", k}, {"h", h}});
  } else if (fam == "j_maps") {
    if (nmax >= 3)
      for (int i : {1, 2}) out("j", {{"i", i}});
  } else if (fam == "boundary_monos") {
    for (int n = 0; n <= nmax; ++n) out("boundary", {{"n", n}});
    if (nmax >= 2) out("thin-triangle", {});
  } else {
    throw ParameterError("unknown family '" + fam_raw + "'");
  }
}

}  // namespace

std::vector<std::string> family_names() {
  return {"scaled_S",          "scaled_S_inner",  "scaled_S_13",    "weak_fib",        "outer_collapsed",
          "cartesian_horn",    "complicial_horn", "thinness",       "thinness_2trivial", "trivializer(k)",
          "saturation",        "marked_scaled_AS", "outer_anodyne", "prism_horns",     "j_maps",
          "boundary_monos"};
}

std::vector<std::string> family_members(const std::string& fam, int nmax) {
  std::vector<std::string> names;
  members(fam, nmax, [&](const std::string& head, const Params& ps) { names.push_back(make_name(head, ps)); });
  return names;
}

std::vector<GeneratorInstance> family(const std::string& fam, int nmax) {
  std::vector<GeneratorInstance> out;
  for (const auto& name : family_members(fam, nmax)) {
    auto g = generator(name);
    g.family = normalize_family(fam);
    out.push_back(std::move(g));
  }
  return out;
}

GeneratorInstance generator(const std::string& name) {
  auto p = parse_name(name);
  auto b = build(p);
  GeneratorInstance g;
  g.family = b.family;
  g.name = make_name(p.head, p.params);
  for (const auto& kv : p.params) g.params.push_back(kv.second);
  g.map = std::move(b.map);
  return g;
}

bool in_family(const std::string& fam, const std::string& name) {
  GeneratorInstance g;
  try {
    g = generator(name);
  } catch (const ParameterError&) {
    return false;
  }
  auto names = family_members(fam, std::max(g.dimension(), 0));
  return std::find(names.begin(), names.end(), g.name) != names.end();
}

ComplexPtr interval_complex(int n) {
  if (n < 0 || n > kMaxDimension) throw ParameterError("interval truncation out of range");
  // Nondegenerate simplices are the alternating tuples; handle[d][b] is the one
  // of dimension d starting at b.
  ComplexBuilder builder;
  std::vector<std::array<int, 2>> handle(std::size_t(n) + 1);
  auto tuple_id = [](int d, int b) {
    std::string s;
    for (int a = 0; a <= d; ++a) s += char('0' + ((b + a) % 2));
    return s;
  };
  for (int d = 0; d <= n; ++d)
    for (int b = 0; b < 2; ++b) {
      std::vector<ComplexBuilder::Ref> faces;
      for (int i = 0; d > 0 && i <= d; ++i) {
        std::vector<int> t;
        for (int a = 0; a <= d; ++a)
          if (a != i) t.push_back((b + a) % 2);
        std::uint32_t mask = 0;
        int root = 0;
        for (std::size_t a = 1; a < t.size(); ++a) {
          if (t[a] == t[a - 1])
            mask |= 1u << a;
          else
            ++root;
        }
        faces.push_back({handle[std::size_t(root)][std::size_t(t[0])], mask});
      }
      handle[std::size_t(d)][std::size_t(b)] = builder.add_cell(tuple_id(d, b), d, faces);
    }
  builder.set_coskeletal0(true);
  return builder.finish_shared();
}

Decorated special_object(const std::string& name) {
  if (name == "delta3_eq") return delta3_eq();
  if (name == "E2") return flat(interval_complex(2), Kind::stratified);
  if (name == "th1_E2") return th(interval_complex(2), 1);
  auto arg = [&](const std::string& prefix) -> std::optional<int> {
    if (name.rfind(prefix + "(", 0) != 0 || name.back() != ')') return std::nullopt;
    try {
      return std::stoi(name.substr(prefix.size() + 1, name.size() - prefix.size() - 2));
    } catch (const std::logic_error&) {
      throw ParameterError("malformed object name '" + name + "'");
    }
  };
  if (auto n = arg("J_trunc")) return interval_decorated(*n, false);
  if (auto n = arg("J_sharp_trunc")) return interval_decorated(*n, true);
  throw ParameterError("unknown object '" + name + "'");
}

std::vector<GeneratorInstance> lambda_generators(const std::vector<GeneratorInstance>& seed, int depth, int nmax, Kind kind) {
  if (depth < 0) throw ParameterError("depth must be nonnegative");
  if (kind != Kind::scaled) throw ParameterError("the interval J_sharp is only available for scaled sets");
  if (depth == 0) return seed;
  auto j = interval_decorated(nmax + 1, true);
  auto ends = flat(interval_complex(0), Kind::scaled);
  DecoratedMap boundary{ends, j, {{0, 0}, {1, 0}}};

  std::vector<GeneratorInstance> out = seed, level = seed;
  auto box = [](const std::string& name, const DecoratedMap& cyl, const GeneratorInstance& f) {
    auto pp = pushout_product(cyl, f.map);
    GeneratorInstance g;
    g.family = "lambda";
    g.name = name;
    g.params = f.params;
    g.map = pp.map;
    return g;
  };
  for (int d = 1; d <= depth; ++d) {
    std::vector<GeneratorInstance> next;
    for (const auto& f : level) next.push_back(box("box(" + f.name + ")", boundary, f));
    out.insert(out.end(), next.begin(), next.end());
    level = std::move(next);
  }
  for (int eps = 0; eps < 2; ++eps) {
    DecoratedMap end{flat(standard_point(), Kind::scaled), j, {{CellIndex(eps), 0}}};
    for (const auto& i : family("boundary_monos", nmax))
      out.push_back(box("box" + std::to_string(eps) + "(" + i.name + ")", end, i));
  }
  return out;
}

}  // namespace scaled
