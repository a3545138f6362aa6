#include "scaled/twocat.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <mutex>

#include "scaled/errors.hpp"
#include "scaled/kernel.hpp"

namespace scaled {

// ---------------------------------------------------------------------------
// FiniteTwoCategory

void FiniteTwoCategory::grow(std::vector<int>& t, int old_n, int new_n) {
  std::vector<int> out(std::size_t(new_n) * std::size_t(new_n), -1);
  for (int a = 0; a < old_n; ++a)
    for (int b = 0; b < old_n; ++b)
      out[std::size_t(a) * std::size_t(new_n) + std::size_t(b)] = t[std::size_t(a) * std::size_t(old_n) + std::size_t(b)];
  t = std::move(out);
}

int FiniteTwoCategory::add_object(std::string id) {
  if (object_ids_.count(id)) throw FormatError("duplicate object id " + id);
  object_ids_[id] = object_count();
  objects_.push_back(std::move(id));
  identity1_.push_back(-1);
  return object_count() - 1;
}

int FiniteTwoCategory::add_one_cell(std::string id, int src, int tgt) {
  if (one_ids_.count(id)) throw FormatError("duplicate 1-cell id " + id);
  if (src < 0 || src >= object_count() || tgt < 0 || tgt >= object_count()) throw ReferenceError("1-cell " + id + " has unknown endpoints");
  one_ids_[id] = one_cell_count();
  one_.push_back({std::move(id), src, tgt});
  identity2_.push_back(-1);
  grow(comp1_, one_cell_count() - 1, one_cell_count());
  return one_cell_count() - 1;
}

int FiniteTwoCategory::add_two_cell(std::string id, int src, int tgt) {
  if (two_ids_.count(id)) throw FormatError("duplicate 2-cell id " + id);
  if (src < 0 || src >= one_cell_count() || tgt < 0 || tgt >= one_cell_count()) throw ReferenceError("2-cell " + id + " has unknown boundary");
  if (one_[std::size_t(src)].src != one_[std::size_t(tgt)].src || one_[std::size_t(src)].tgt != one_[std::size_t(tgt)].tgt)
    throw FormatError("2-cell " + id + " has non-parallel boundary");
  two_ids_[id] = two_cell_count();
  two_.push_back({std::move(id), src, tgt});
  grow(vert_, two_cell_count() - 1, two_cell_count());
  grow(horiz_, two_cell_count() - 1, two_cell_count());
  return two_cell_count() - 1;
}

void FiniteTwoCategory::set_compose1(int g, int f, int gf) {
  comp1_[std::size_t(g) * std::size_t(one_cell_count()) + std::size_t(f)] = gf;
}
void FiniteTwoCategory::set_vertical(int beta, int alpha, int result) {
  vert_[std::size_t(beta) * std::size_t(two_cell_count()) + std::size_t(alpha)] = result;
}
void FiniteTwoCategory::set_horizontal(int beta, int alpha, int result) {
  horiz_[std::size_t(beta) * std::size_t(two_cell_count()) + std::size_t(alpha)] = result;
}

void FiniteTwoCategory::complete_identities() {
  for (int f = 0; f < one_cell_count(); ++f) {
    const auto& c = one_cell(f);
    if (identity1(c.src) >= 0) set_compose1(f, identity1(c.src), f);
    if (identity1(c.tgt) >= 0) set_compose1(identity1(c.tgt), f, f);
  }
  for (int x = 0; x < two_cell_count(); ++x) {
    const auto& c = two_cell(x);
    if (identity2(c.src) >= 0) set_vertical(x, identity2(c.src), x);
    if (identity2(c.tgt) >= 0) set_vertical(identity2(c.tgt), x, x);
    int a = src_object(x), b = tgt_object(x);
    if (identity1(a) >= 0 && identity2(identity1(a)) >= 0) set_horizontal(x, identity2(identity1(a)), x);
    if (identity1(b) >= 0 && identity2(identity1(b)) >= 0) set_horizontal(identity2(identity1(b)), x, x);
  }
  for (int g = 0; g < one_cell_count(); ++g)
    for (int f = 0; f < one_cell_count(); ++f) {
      int gf = compose1(g, f);
      if (gf >= 0 && identity2(g) >= 0 && identity2(f) >= 0 && identity2(gf) >= 0) set_horizontal(identity2(g), identity2(f), identity2(gf));
    }
}

namespace {
std::optional<int> lookup(const std::unordered_map<std::string, int>& m, const std::string& id) {
  auto it = m.find(id);
  if (it == m.end()) return std::nullopt;
  return it->second;
}
}  // namespace

std::optional<int> FiniteTwoCategory::find_object(const std::string& id) const { return lookup(object_ids_, id); }
std::optional<int> FiniteTwoCategory::find_one_cell(const std::string& id) const { return lookup(one_ids_, id); }
std::optional<int> FiniteTwoCategory::find_two_cell(const std::string& id) const { return lookup(two_ids_, id); }

std::optional<int> FiniteTwoCategory::inverse(int x) const {
  const auto& c = two_cell(x);
  for (int y = 0; y < two_cell_count(); ++y) {
    if (two_cell(y).src != c.tgt || two_cell(y).tgt != c.src) continue;
    if (vertical(y, x) == identity2(c.src) && vertical(x, y) == identity2(c.tgt)) return y;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Law checker

std::optional<std::string> check_two_category(const FiniteTwoCategory& c) {
  const int n0 = c.object_count(), n1 = c.one_cell_count(), n2 = c.two_cell_count();
  auto one = [&](int f) { return c.one_cell(f).id; };
  auto two = [&](int x) { return c.two_cell(x).id; };
  auto s2 = [&](int x) { return c.two_cell(x).src; };
  auto t2 = [&](int x) { return c.two_cell(x).tgt; };

  for (int a = 0; a < n0; ++a) {
    int i = c.identity1(a);
    if (i < 0 || i >= n1 || c.one_cell(i).src != a || c.one_cell(i).tgt != a) return "object " + c.object(a) + " has no identity 1-cell";
  }
  for (int f = 0; f < n1; ++f) {
    int i = c.identity2(f);
    if (i < 0 || i >= n2 || s2(i) != f || t2(i) != f) return "1-cell " + one(f) + " has no identity 2-cell";
  }
  // Typing and totality.
  for (int g = 0; g < n1; ++g)
    for (int f = 0; f < n1; ++f) {
      int gf = c.compose1(g, f);
      bool composable = c.one_cell(f).tgt == c.one_cell(g).src;
      if (composable != (gf >= 0)) return "compose1(" + one(g) + ", " + one(f) + ") " + (composable ? "missing" : "defined");
      if (gf >= 0 && (c.one_cell(gf).src != c.one_cell(f).src || c.one_cell(gf).tgt != c.one_cell(g).tgt))
        return "compose1(" + one(g) + ", " + one(f) + ") has the wrong endpoints";
    }
  for (int b = 0; b < n2; ++b)
    for (int a = 0; a < n2; ++a) {
      int v = c.vertical(b, a);
      bool composable = t2(a) == s2(b);
      if (composable != (v >= 0)) return "vertical(" + two(b) + ", " + two(a) + ") " + (composable ? "missing" : "defined");
      if (v >= 0 && (s2(v) != s2(a) || t2(v) != t2(b))) return "vertical(" + two(b) + ", " + two(a) + ") has the wrong boundary";
      int h = c.horizontal(b, a);
      bool hcomp = c.tgt_object(a) == c.src_object(b);
      if (hcomp != (h >= 0)) return "horizontal(" + two(b) + ", " + two(a) + ") " + (hcomp ? "missing" : "defined");
      if (h >= 0 && (s2(h) != c.compose1(s2(b), s2(a)) || t2(h) != c.compose1(t2(b), t2(a))))
        return "horizontal(" + two(b) + ", " + two(a) + ") has the wrong boundary";
    }
  // Units.
  for (int f = 0; f < n1; ++f) {
    const auto& cf = c.one_cell(f);
    if (c.compose1(f, c.identity1(cf.src)) != f || c.compose1(c.identity1(cf.tgt), f) != f) return "unit law fails at " + one(f);
  }
  for (int x = 0; x < n2; ++x) {
    if (c.vertical(x, c.identity2(s2(x))) != x || c.vertical(c.identity2(t2(x)), x) != x) return "vertical unit law fails at " + two(x);
    int ia = c.identity2(c.identity1(c.src_object(x))), ib = c.identity2(c.identity1(c.tgt_object(x)));
    if (c.horizontal(x, ia) != x || c.horizontal(ib, x) != x) return "horizontal unit law fails at " + two(x);
  }
  for (int g = 0; g < n1; ++g)
    for (int f = 0; f < n1; ++f) {
      int gf = c.compose1(g, f);
      if (gf >= 0 && c.horizontal(c.identity2(g), c.identity2(f)) != c.identity2(gf))
        return "identity 2-cells do not compose at (" + one(g) + ", " + one(f) + ")";
    }
  // Associativity.
  for (int h = 0; h < n1; ++h)
    for (int g = 0; g < n1; ++g) {
      int hg = c.compose1(h, g);
      if (hg < 0) continue;
      for (int f = 0; f < n1; ++f) {
        int gf = c.compose1(g, f);
        if (gf >= 0 && c.compose1(hg, f) != c.compose1(h, gf)) return "compose1 is not associative at " + one(h) + ", " + one(g) + ", " + one(f);
      }
    }
  for (int z = 0; z < n2; ++z)
    for (int y = 0; y < n2; ++y) {
      int zy = c.vertical(z, y), hzy = c.horizontal(z, y);
      for (int x = 0; x < n2; ++x) {
        if (zy >= 0) {
          int yx = c.vertical(y, x);
          if (yx >= 0 && c.vertical(zy, x) != c.vertical(z, yx)) return "vertical composition is not associative at " + two(z) + ", " + two(y) + ", " + two(x);
        }
        if (hzy >= 0) {
          int hyx = c.horizontal(y, x);
          if (hyx >= 0 && c.horizontal(hzy, x) != c.horizontal(z, hyx))
            return "horizontal composition is not associative at " + two(z) + ", " + two(y) + ", " + two(x);
        }
      }
    }
  // Interchange: (b2 . b1) * (a2 . a1) = (b2 * a2) . (b1 * a1).
  for (int b1 = 0; b1 < n2; ++b1)
    for (int a1 = 0; a1 < n2; ++a1) {
      int h1 = c.horizontal(b1, a1);
      if (h1 < 0) continue;
      for (int b2 = 0; b2 < n2; ++b2) {
        int vb = c.vertical(b2, b1);
        if (vb < 0) continue;
        for (int a2 = 0; a2 < n2; ++a2) {
          int va = c.vertical(a2, a1);
          if (va < 0) continue;
          if (c.horizontal(vb, va) != c.vertical(c.horizontal(b2, a2), h1))
            return "interchange fails at " + two(b2) + ", " + two(b1) + ", " + two(a2) + ", " + two(a1);
        }
      }
    }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// JSON

json two_category_to_json(const FiniteTwoCategory& c) {
  json j;
  j["schema"] = kSchema;
  j["type"] = "two-category";
  j["objects"] = json::array();
  for (int a = 0; a < c.object_count(); ++a) j["objects"].push_back(c.object(a));
  j["one_cells"] = json::array();
  for (int f = 0; f < c.one_cell_count(); ++f) {
    const auto& x = c.one_cell(f);
    j["one_cells"].push_back({{"id", x.id}, {"src", c.object(x.src)}, {"tgt", c.object(x.tgt)}});
  }
  j["two_cells"] = json::array();
  for (int t = 0; t < c.two_cell_count(); ++t) {
    const auto& x = c.two_cell(t);
    j["two_cells"].push_back({{"id", x.id}, {"src", c.one_cell(x.src).id}, {"tgt", c.one_cell(x.tgt).id}});
  }
  j["identity1"] = json::object();
  for (int a = 0; a < c.object_count(); ++a)
    if (c.identity1(a) >= 0) j["identity1"][c.object(a)] = c.one_cell(c.identity1(a)).id;
  j["identity2"] = json::object();
  for (int f = 0; f < c.one_cell_count(); ++f)
    if (c.identity2(f) >= 0) j["identity2"][c.one_cell(f).id] = c.two_cell(c.identity2(f)).id;
  j["compose1"] = json::array();
  for (int g = 0; g < c.one_cell_count(); ++g)
    for (int f = 0; f < c.one_cell_count(); ++f)
      if (int gf = c.compose1(g, f); gf >= 0) j["compose1"].push_back({c.one_cell(g).id, c.one_cell(f).id, c.one_cell(gf).id});
  j["vertical"] = json::array();
  j["horizontal"] = json::array();
  for (int b = 0; b < c.two_cell_count(); ++b)
    for (int a = 0; a < c.two_cell_count(); ++a) {
      if (int v = c.vertical(b, a); v >= 0) j["vertical"].push_back({c.two_cell(b).id, c.two_cell(a).id, c.two_cell(v).id});
      if (int h = c.horizontal(b, a); h >= 0) j["horizontal"].push_back({c.two_cell(b).id, c.two_cell(a).id, c.two_cell(h).id});
    }
  return j;
}

FiniteTwoCategory two_category_from_json(const json& j) {
  try {
    if (!j.is_object() || j.value("type", "") != "two-category") throw FormatError("not a two-category document");
    FiniteTwoCategory c;
    auto obj = [&](const json& v) {
      auto r = c.find_object(v.get<std::string>());
      if (!r) throw ReferenceError("unknown object " + v.get<std::string>());
      return *r;
    };
    auto one = [&](const json& v) {
      auto r = c.find_one_cell(v.get<std::string>());
      if (!r) throw ReferenceError("unknown 1-cell " + v.get<std::string>());
      return *r;
    };
    auto two = [&](const json& v) {
      auto r = c.find_two_cell(v.get<std::string>());
      if (!r) throw ReferenceError("unknown 2-cell " + v.get<std::string>());
      return *r;
    };
    for (const auto& o : j.at("objects")) c.add_object(o.get<std::string>());
    for (const auto& f : j.at("one_cells")) c.add_one_cell(f.at("id").get<std::string>(), obj(f.at("src")), obj(f.at("tgt")));
    for (const auto& x : j.at("two_cells")) c.add_two_cell(x.at("id").get<std::string>(), one(x.at("src")), one(x.at("tgt")));
    for (const auto& [k, v] : j.at("identity1").items()) c.set_identity1(obj(json(k)), one(v));
    for (const auto& [k, v] : j.at("identity2").items()) c.set_identity2(one(json(k)), two(v));
    auto triple = [](const json& t) {
      if (!t.is_array() || t.size() != 3) throw FormatError("composition entries are [second, first, composite]");
    };
    for (const auto& t : j.at("compose1")) {
      triple(t);
      c.set_compose1(one(t[0]), one(t[1]), one(t[2]));
    }
    for (const auto& t : j.at("vertical")) {
      triple(t);
      c.set_vertical(two(t[0]), two(t[1]), two(t[2]));
    }
    for (const auto& t : j.at("horizontal")) {
      triple(t);
      c.set_horizontal(two(t[0]), two(t[1]), two(t[2]));
    }
    return c;
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed two-category: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// Orientals and fixtures

namespace {

int low_bit(std::uint32_t s) { return __builtin_ctz(s); }
int high_bit(std::uint32_t s) { return 31 - __builtin_clz(s); }

std::string pair_id(const std::string& s, const std::string& t) { return s + "<=" + t; }

// Adds identity 1-cells "1_a" and identity 2-cells "=f" for every object and
// 1-cell added so far.
void add_identity_cells(FiniteTwoCategory& c) {
  for (int a = 0; a < c.object_count(); ++a)
    if (c.identity1(a) < 0) c.set_identity1(a, c.add_one_cell("1_" + c.object(a), a, a));
  for (int f = 0; f < c.one_cell_count(); ++f)
    if (c.identity2(f) < 0) c.set_identity2(f, c.add_two_cell("=" + c.one_cell(f).id, f, f));
}

}  // namespace

FiniteTwoCategory oriental2(int n) {
  if (n < 0 || n > 8) throw ParameterError("oriental2 needs 0 <= n <= 8");
  FiniteTwoCategory c;
  for (int i = 0; i <= n; ++i) c.add_object(std::to_string(i));
  // Hom(i, j): subsets of [i, j] containing i and j.
  std::map<std::uint32_t, int> one;
  for (int i = 0; i <= n; ++i)
    for (int j = i; j <= n; ++j) {
      std::uint32_t ends = (1u << i) | (1u << j);
      for (std::uint32_t s = 0; s < (1u << (n + 1)); ++s)
        if ((s & ends) == ends && low_bit(s) == i && high_bit(s) == j) one[s] = c.add_one_cell(subset_id(s, n), i, j);
    }
  for (int i = 0; i <= n; ++i) c.set_identity1(i, one.at(1u << i));
  std::map<std::pair<std::uint32_t, std::uint32_t>, int> two;
  for (const auto& [s, fs] : one)
    for (const auto& [t, ft] : one)
      if ((s & t) == s && low_bit(s) == low_bit(t) && high_bit(s) == high_bit(t))
        two[{s, t}] = c.add_two_cell(pair_id(subset_id(s, n), subset_id(t, n)), fs, ft);
  for (const auto& [s, fs] : one) c.set_identity2(fs, two.at({s, s}));
  for (const auto& [s, fs] : one)
    for (const auto& [t, ft] : one)
      if (high_bit(s) == low_bit(t)) c.set_compose1(ft, fs, one.at(s | t));
  for (const auto& [a, xa] : two)
    for (const auto& [b, xb] : two) {
      // Vertical: a = (s <= t), b = (t <= u).
      if (a.second == b.first) c.set_vertical(xb, xa, two.at({a.first, b.second}));
      // Horizontal: a over i -> j, b over j -> k.
      if (high_bit(a.first) == low_bit(b.first)) c.set_horizontal(xb, xa, two.at({a.first | b.first, a.second | b.second}));
    }
  return c;
}

FiniteTwoCategory oriental2_t() {
  auto c = oriental2(2);
  int x = *c.find_two_cell("02<=012");
  int y = c.add_two_cell("(02<=012)^-1", c.two_cell(x).tgt, c.two_cell(x).src);
  c.set_vertical(y, x, c.identity2(c.two_cell(x).src));
  c.set_vertical(x, y, c.identity2(c.two_cell(x).tgt));
  c.complete_identities();
  return c;
}

FiniteTwoCategory poset_two_category(int n, const std::vector<std::pair<int, int>>& less) {
  if (n < 1) throw ParameterError("poset needs an object");
  std::vector<std::vector<char>> le(std::size_t(n), std::vector<char>(std::size_t(n), 0));
  for (int a = 0; a < n; ++a) le[std::size_t(a)][std::size_t(a)] = 1;
  for (auto [a, b] : less) {
    if (a < 0 || b < 0 || a >= n || b >= n) throw ParameterError("poset relation out of range");
    le[std::size_t(a)][std::size_t(b)] = 1;
  }
  for (int k = 0; k < n; ++k)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        if (le[std::size_t(a)][std::size_t(k)] && le[std::size_t(k)][std::size_t(b)]) le[std::size_t(a)][std::size_t(b)] = 1;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (a != b && le[std::size_t(a)][std::size_t(b)] && le[std::size_t(b)][std::size_t(a)]) throw ParameterError("relation is not antisymmetric");
  FiniteTwoCategory c;
  for (int a = 0; a < n; ++a) c.add_object(std::to_string(a));
  std::vector<std::vector<int>> cell(std::size_t(n), std::vector<int>(std::size_t(n), -1));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (le[std::size_t(a)][std::size_t(b)]) cell[std::size_t(a)][std::size_t(b)] = c.add_one_cell(std::to_string(a) + "-" + std::to_string(b), a, b);
  for (int a = 0; a < n; ++a) c.set_identity1(a, cell[std::size_t(a)][std::size_t(a)]);
  add_identity_cells(c);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int d = 0; d < n; ++d)
        if (cell[std::size_t(a)][std::size_t(b)] >= 0 && cell[std::size_t(b)][std::size_t(d)] >= 0)
          c.set_compose1(cell[std::size_t(b)][std::size_t(d)], cell[std::size_t(a)][std::size_t(b)], cell[std::size_t(a)][std::size_t(d)]);
  c.complete_identities();
  return c;
}

FiniteTwoCategory linear_order(int n) {
  std::vector<std::pair<int, int>> less;
  for (int a = 0; a < n; ++a) less.push_back({a, a + 1});
  return poset_two_category(n + 1, less);
}

FiniteTwoCategory walking_isomorphism() {
  FiniteTwoCategory c;
  int a = c.add_object("a"), b = c.add_object("b");
  int f = c.add_one_cell("f", a, b), g = c.add_one_cell("g", b, a);
  add_identity_cells(c);
  c.set_compose1(g, f, c.identity1(a));
  c.set_compose1(f, g, c.identity1(b));
  c.complete_identities();
  return c;
}

FiniteTwoCategory walking_two_cell() {
  FiniteTwoCategory c;
  int a = c.add_object("a"), b = c.add_object("b");
  int f = c.add_one_cell("f", a, b), g = c.add_one_cell("g", a, b);
  add_identity_cells(c);
  c.add_two_cell("alpha", f, g);
  c.complete_identities();
  return c;
}

FiniteTwoCategory walking_invertible_two_cell() {
  auto c = walking_two_cell();
  int x = *c.find_two_cell("alpha");
  const auto& cx = c.two_cell(x);
  int y = c.add_two_cell("alpha^-1", cx.tgt, cx.src);
  c.set_vertical(y, x, c.identity2(c.two_cell(x).src));
  c.set_vertical(x, y, c.identity2(c.two_cell(x).tgt));
  c.complete_identities();
  return c;
}

std::vector<std::pair<std::string, FiniteTwoCategory>> two_category_fixtures() {
  return {{"linear-order-2", linear_order(2)},
          {"poset-V", poset_two_category(3, {{0, 1}, {0, 2}})},
          {"walking-iso", walking_isomorphism()},
          {"walking-2-cell", walking_two_cell()},
          {"walking-invertible-2-cell", walking_invertible_two_cell()},
          {"oriental2-2", oriental2(2)},
          {"oriental2-t", oriental2_t()},
          {"oriental2-3", oriental2(3)}};
}

// ---------------------------------------------------------------------------
// 2-functors

std::optional<std::string> check_two_functor(const FiniteTwoCategory& c, const FiniteTwoCategory& d, const TwoFunctor& f) {
  if (int(f.objects.size()) != c.object_count() || int(f.one.size()) != c.one_cell_count() || int(f.two.size()) != c.two_cell_count())
    return "functor tables have the wrong size";
  for (int a = 0; a < c.object_count(); ++a) {
    if (f.objects[std::size_t(a)] < 0 || f.objects[std::size_t(a)] >= d.object_count()) return "object image out of range";
    if (f.one[std::size_t(c.identity1(a))] != d.identity1(f.objects[std::size_t(a)])) return "identity of " + c.object(a) + " not preserved";
  }
  for (int g = 0; g < c.one_cell_count(); ++g) {
    int fg = f.one[std::size_t(g)];
    if (fg < 0 || fg >= d.one_cell_count()) return "1-cell image out of range";
    if (d.one_cell(fg).src != f.objects[std::size_t(c.one_cell(g).src)] || d.one_cell(fg).tgt != f.objects[std::size_t(c.one_cell(g).tgt)])
      return "1-cell " + c.one_cell(g).id + " has the wrong endpoints";
    if (f.two[std::size_t(c.identity2(g))] != d.identity2(fg)) return "identity 2-cell of " + c.one_cell(g).id + " not preserved";
    for (int h = 0; h < c.one_cell_count(); ++h)
      if (int hg = c.compose1(h, g); hg >= 0 && d.compose1(f.one[std::size_t(h)], fg) != f.one[std::size_t(hg)])
        return "composite of " + c.one_cell(h).id + " and " + c.one_cell(g).id + " not preserved";
  }
  for (int x = 0; x < c.two_cell_count(); ++x) {
    int fx = f.two[std::size_t(x)];
    if (fx < 0 || fx >= d.two_cell_count()) return "2-cell image out of range";
    if (d.two_cell(fx).src != f.one[std::size_t(c.two_cell(x).src)] || d.two_cell(fx).tgt != f.one[std::size_t(c.two_cell(x).tgt)])
      return "2-cell " + c.two_cell(x).id + " has the wrong boundary";
    for (int y = 0; y < c.two_cell_count(); ++y) {
      if (int v = c.vertical(y, x); v >= 0 && d.vertical(f.two[std::size_t(y)], fx) != f.two[std::size_t(v)])
        return "vertical composite of " + c.two_cell(y).id + " and " + c.two_cell(x).id + " not preserved";
      if (int h = c.horizontal(y, x); h >= 0 && d.horizontal(f.two[std::size_t(y)], fx) != f.two[std::size_t(h)])
        return "horizontal composite of " + c.two_cell(y).id + " and " + c.two_cell(x).id + " not preserved";
    }
  }
  return std::nullopt;
}

TwoFunctor compose(const TwoFunctor& g, const TwoFunctor& f) {
  TwoFunctor out;
  for (int a : f.objects) out.objects.push_back(g.objects[std::size_t(a)]);
  for (int x : f.one) out.one.push_back(g.one[std::size_t(x)]);
  for (int x : f.two) out.two.push_back(g.two[std::size_t(x)]);
  return out;
}

namespace {

// A composition triple r = op(second, first) of one layer.
struct Triple {
  int second, first, result;
  bool horizontal;
};

// Placement order for one layer: identities, then cells with no decomposition
// into nontrivial factors, then composites once their factors are placed.
struct Layer {
  std::vector<int> order;
  std::vector<std::optional<Triple>> forced;  // by cell
  std::vector<std::vector<Triple>> due;       // by position in order
};

Layer plan_layer(int count, const std::vector<int>& identities, const std::vector<Triple>& triples,
                 const std::function<bool(const Triple&)>& proper) {
  Layer l;
  l.forced.assign(std::size_t(count), std::nullopt);
  std::vector<char> placed(std::size_t(count), 0);
  std::vector<char> decomposable(std::size_t(count), 0);
  for (const auto& t : triples)
    if (proper(t)) decomposable[std::size_t(t.result)] = 1;
  auto place = [&](int c) {
    placed[std::size_t(c)] = 1;
    l.order.push_back(c);
  };
  for (int c : identities)
    if (!placed[std::size_t(c)]) place(c);
  for (int c = 0; c < count; ++c)
    if (!placed[std::size_t(c)] && !decomposable[std::size_t(c)]) place(c);
  for (bool progress = true; progress;) {
    progress = false;
    for (const auto& t : triples) {
      if (placed[std::size_t(t.result)] || !placed[std::size_t(t.first)] || !placed[std::size_t(t.second)]) continue;
      if (!proper(t)) continue;
      l.forced[std::size_t(t.result)] = t;
      place(t.result);
      progress = true;
    }
  }
  for (int c = 0; c < count; ++c)
    if (!placed[std::size_t(c)]) place(c);
  std::vector<int> pos(std::size_t(count), 0);
  for (std::size_t k = 0; k < l.order.size(); ++k) pos[std::size_t(l.order[k])] = int(k);
  l.due.resize(std::size_t(count));
  for (const auto& t : triples)
    l.due[std::size_t(std::max({pos[std::size_t(t.first)], pos[std::size_t(t.second)], pos[std::size_t(t.result)]}))].push_back(t);
  return l;
}

}  // namespace

std::vector<TwoFunctor> enumerate_2functors(const FiniteTwoCategory& c, const FiniteTwoCategory& d) {
  const int n0 = c.object_count(), n1 = c.one_cell_count(), n2 = c.two_cell_count();
  std::vector<Triple> t1, t2;
  for (int g = 0; g < n1; ++g)
    for (int f = 0; f < n1; ++f)
      if (int r = c.compose1(g, f); r >= 0) t1.push_back({g, f, r, false});
  for (int b = 0; b < n2; ++b)
    for (int a = 0; a < n2; ++a) {
      if (int r = c.vertical(b, a); r >= 0) t2.push_back({b, a, r, false});
      if (int r = c.horizontal(b, a); r >= 0) t2.push_back({b, a, r, true});
    }
  std::vector<int> id1, id2;
  for (int a = 0; a < n0; ++a) id1.push_back(c.identity1(a));
  for (int f = 0; f < n1; ++f) id2.push_back(c.identity2(f));
  std::vector<char> is_id1(std::size_t(n1), 0), is_id2(std::size_t(n2), 0), is_unit2(std::size_t(n2), 0);
  for (int x : id1) is_id1[std::size_t(x)] = 1;
  for (int x : id2) is_id2[std::size_t(x)] = 1;
  for (int x : id1) is_unit2[std::size_t(c.identity2(x))] = 1;
  auto l1 = plan_layer(n1, id1, t1, [&](const Triple& t) { return !is_id1[std::size_t(t.first)] && !is_id1[std::size_t(t.second)]; });
  // Vertical factors are trivial when identities, horizontal ones when units.
  const auto& trivial = [&](const Triple& t) { return t.horizontal ? is_unit2 : is_id2; };
  auto l2 = plan_layer(n2, id2, t2, [&](const Triple& t) {
    const auto& tv = trivial(t);
    return !tv[std::size_t(t.first)] && !tv[std::size_t(t.second)];
  });

  std::map<std::pair<int, int>, std::vector<int>> d1, d2;
  for (int f = 0; f < d.one_cell_count(); ++f) d1[{d.one_cell(f).src, d.one_cell(f).tgt}].push_back(f);
  for (int x = 0; x < d.two_cell_count(); ++x) d2[{d.two_cell(x).src, d.two_cell(x).tgt}].push_back(x);
  const std::vector<int> none;
  auto cands = [&](const auto& m, int s, int t) -> const std::vector<int>& {
    auto it = m.find({s, t});
    return it == m.end() ? none : it->second;
  };

  TwoFunctor f;
  f.objects.assign(std::size_t(n0), -1);
  f.one.assign(std::size_t(n1), -1);
  f.two.assign(std::size_t(n2), -1);
  std::vector<TwoFunctor> out;

  auto ok1 = [&](std::size_t k) {
    for (const auto& t : l1.due[k])
      if (d.compose1(f.one[std::size_t(t.second)], f.one[std::size_t(t.first)]) != f.one[std::size_t(t.result)]) return false;
    return true;
  };
  auto ok2 = [&](std::size_t k) {
    for (const auto& t : l2.due[k]) {
      int b = f.two[std::size_t(t.second)], a = f.two[std::size_t(t.first)];
      if ((t.horizontal ? d.horizontal(b, a) : d.vertical(b, a)) != f.two[std::size_t(t.result)]) return false;
    }
    return true;
  };

  std::function<void(std::size_t)> two_layer = [&](std::size_t k) {
    if (k == l2.order.size()) {
      out.push_back(f);
      return;
    }
    int x = l2.order[k];
    const auto& cx = c.two_cell(x);
    auto attempt = [&](int v) {
      if (v < 0) return;
      f.two[std::size_t(x)] = v;
      if (d.two_cell(v).src == f.one[std::size_t(cx.src)] && d.two_cell(v).tgt == f.one[std::size_t(cx.tgt)] && ok2(k)) two_layer(k + 1);
    };
    if (is_id2[std::size_t(x)]) {
      attempt(d.identity2(f.one[std::size_t(cx.src)]));
    } else if (const auto& t = l2.forced[std::size_t(x)]) {
      int b = f.two[std::size_t(t->second)], a = f.two[std::size_t(t->first)];
      attempt(t->horizontal ? d.horizontal(b, a) : d.vertical(b, a));
    } else {
      for (int v : cands(d2, f.one[std::size_t(cx.src)], f.one[std::size_t(cx.tgt)])) attempt(v);
    }
    f.two[std::size_t(x)] = -1;
  };
  std::function<void(std::size_t)> one_layer = [&](std::size_t k) {
    if (k == l1.order.size()) {
      two_layer(0);
      return;
    }
    int g = l1.order[k];
    const auto& cg = c.one_cell(g);
    int s = f.objects[std::size_t(cg.src)], t = f.objects[std::size_t(cg.tgt)];
    auto attempt = [&](int v) {
      if (v < 0) return;
      f.one[std::size_t(g)] = v;
      if (d.one_cell(v).src == s && d.one_cell(v).tgt == t && ok1(k)) one_layer(k + 1);
    };
    if (is_id1[std::size_t(g)]) {
      attempt(d.identity1(s));
    } else if (const auto& tr = l1.forced[std::size_t(g)]) {
      attempt(d.compose1(f.one[std::size_t(tr->second)], f.one[std::size_t(tr->first)]));
    } else {
      for (int v : cands(d1, s, t)) attempt(v);
    }
    f.one[std::size_t(g)] = -1;
  };
  std::function<void(int)> objects = [&](int a) {
    if (a == n0) {
      one_layer(0);
      return;
    }
    for (int v = 0; v < d.object_count(); ++v) {
      f.objects[std::size_t(a)] = v;
      objects(a + 1);
    }
  };
  objects(0);
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

const FiniteTwoCategory& cached_oriental(int n) {
  static std::mutex mu;
  static std::map<int, std::unique_ptr<FiniteTwoCategory>> cache;
  std::lock_guard lock(mu);
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<FiniteTwoCategory>(oriental2(n));
  return *slot;
}

// Orientals up to 8 use single-digit ids.
std::uint32_t image_mask(const std::string& id, const std::vector<int>& theta) {
  std::uint32_t s = 0;
  for (char ch : id) s |= 1u << theta[std::size_t(ch - '0')];
  return s;
}

}  // namespace

TwoFunctor oriental_map(int m, int n, const std::vector<int>& theta) {
  if (int(theta.size()) != m + 1) throw ParameterError("oriental_map needs m + 1 values");
  for (std::size_t k = 0; k < theta.size(); ++k)
    if (theta[k] < 0 || theta[k] > n || (k && theta[k] < theta[k - 1])) throw ParameterError("oriental_map needs a monotone map");
  const auto& src = cached_oriental(m);
  const auto& dst = cached_oriental(n);
  TwoFunctor f;
  for (int v : theta) f.objects.push_back(v);
  for (int g = 0; g < src.one_cell_count(); ++g) f.one.push_back(*dst.find_one_cell(subset_id(image_mask(src.one_cell(g).id, theta), n)));
  for (int x = 0; x < src.two_cell_count(); ++x) {
    const auto& cx = src.two_cell(x);
    auto s = subset_id(image_mask(src.one_cell(cx.src).id, theta), n);
    auto t = subset_id(image_mask(src.one_cell(cx.tgt).id, theta), n);
    f.two.push_back(*dst.find_two_cell(pair_id(s, t)));
  }
  return f;
}

// ---------------------------------------------------------------------------
// The scaled 2-nerve

namespace {

Key encode_functor(const TwoFunctor& f) {
  Key k;
  for (int v : f.objects) k.push_back(v);
  for (int v : f.one) k.push_back(v);
  for (int v : f.two) k.push_back(v);
  return k;
}

TwoFunctor decode_functor(const Key& k, int n) {
  const auto& o = cached_oriental(n);
  TwoFunctor f;
  std::size_t p = 0;
  for (int a = 0; a < o.object_count(); ++a) f.objects.push_back(int(k[p++]));
  for (int a = 0; a < o.one_cell_count(); ++a) f.one.push_back(int(k[p++]));
  for (int a = 0; a < o.two_cell_count(); ++a) f.two.push_back(int(k[p++]));
  return f;
}

// Images of the edges {i, j} and the atomic 2-cells {i, k} <= {i, j, k}.
std::string nerve_id(const FiniteTwoCategory& d, const TwoFunctor& f, int n) {
  if (n == 0) return d.object(f.objects[0]);
  const auto& o = cached_oriental(n);
  if (n == 1) return d.one_cell(f.one[std::size_t(*o.find_one_cell("01"))]).id;
  std::string edges, cells;
  for (int i = 0; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j) {
      if (!edges.empty()) edges += ",";
      edges += d.one_cell(f.one[std::size_t(*o.find_one_cell(subset_id((1u << i) | (1u << j), n)))]).id;
      for (int k = j + 1; k <= n; ++k) {
        if (!cells.empty()) cells += ",";
        auto s = subset_id((1u << i) | (1u << k), n), t = subset_id((1u << i) | (1u << j) | (1u << k), n);
        cells += d.two_cell(f.two[std::size_t(*o.find_two_cell(pair_id(s, t)))]).id;
      }
    }
  return "[" + edges + "|" + cells + "]";
}

}  // namespace

TwoFunctor Nerve2::functor(CellIndex c) const { return decode_functor(presentation->key(c), presentation->complex()->dim(c)); }

Nerve2 nerve2(const FiniteTwoCategory& d, int n_max) {
  if (n_max < 0 || n_max > 7) throw ParameterError("nerve2 needs 0 <= n_max <= 7");
  if (auto err = check_two_category(d)) throw FormatError("not a 2-category: " + *err);
  auto dd = std::make_shared<FiniteTwoCategory>(d);
  using Maps = std::vector<std::vector<TwoFunctor>>;
  auto faces = std::make_shared<Maps>(std::size_t(n_max) + 2);
  auto degens = std::make_shared<Maps>(std::size_t(n_max) + 2);
  for (int n = 1; n <= n_max + 1; ++n)
    for (int i = 0; i <= n; ++i) {
      std::vector<int> theta;
      for (int k = 0; k < n; ++k) theta.push_back(k < i ? k : k + 1);
      (*faces)[std::size_t(n)].push_back(oriental_map(n - 1, n, theta));
    }
  for (int n = 0; n <= n_max; ++n)
    for (int j = 0; j <= n; ++j) {
      std::vector<int> theta;
      for (int k = 0; k <= n + 1; ++k) theta.push_back(k <= j ? k : k - 1);
      (*degens)[std::size_t(n)].push_back(oriental_map(n + 1, n, theta));
    }
  PresentationSpec spec;
  spec.max_dim = n_max;
  spec.simplices = [dd](int n) {
    std::vector<Key> keys;
    for (const auto& f : enumerate_2functors(cached_oriental(n), *dd)) keys.push_back(encode_functor(f));
    return keys;
  };
  spec.face = [faces](const Key& k, int n, int i) {
    return encode_functor(compose(decode_functor(k, n), (*faces)[std::size_t(n)][std::size_t(i)]));
  };
  spec.degeneracy = [degens](const Key& k, int n, int j) {
    return encode_functor(compose(decode_functor(k, n), (*degens)[std::size_t(n)][std::size_t(j)]));
  };
  spec.id = [dd](const Key& k, int n) { return nerve_id(*dd, decode_functor(k, n), n); };
  Nerve2 out;
  out.presentation = std::make_shared<Presentation>(spec);
  const auto& cx = *out.presentation->complex();
  Decorated obj(out.presentation->complex(), Kind::scaled);
  if (n_max >= 2) {
    int gen = *cached_oriental(2).find_two_cell("02<=012");
    for (CellIndex t = cx.begin_of_dim(2); t < cx.end_of_dim(2); ++t)
      if (d.invertible(out.functor(t).two[std::size_t(gen)])) obj.mark(t);
  }
  out.object = obj;
  return out;
}

// ---------------------------------------------------------------------------
// Homotopy 2-category presentation

namespace {

std::vector<std::string> word(const FiniteSimplicialSet& x, Simplex e) {
  if (e.degenerate()) return {};
  return {x.id(e.cell)};
}

std::vector<std::string> concat(std::vector<std::string> a, const std::vector<std::string>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

}  // namespace

Presentation2 ho2_presentation(const Decorated& x) {
  const auto& cx = x.complex();
  Presentation2 p;
  for (CellIndex v = cx.begin_of_dim(0); v < cx.end_of_dim(0); ++v) p.objects.push_back(cx.id(v));
  for (CellIndex e = cx.begin_of_dim(1); e < cx.end_of_dim(1); ++e) {
    auto vs = cx.vertices({e, 0});
    p.one.push_back({cx.id(e), cx.id(vs[0]), cx.id(vs[1])});
  }
  bool scaled = tracks(x.kind(), 2);
  for (CellIndex t = cx.begin_of_dim(2); t < cx.end_of_dim(2); ++t) {
    Simplex s{t, 0};
    p.two.push_back({cx.id(t), word(cx, cx.face(s, 1)), concat(word(cx, cx.face(s, 2)), word(cx, cx.face(s, 0)))});
    if (scaled && x.marked(t)) p.relations.push_back({"invertible", cx.id(t), "", {}, {}});
  }
  for (CellIndex q = cx.begin_of_dim(3); q < cx.end_of_dim(3); ++q) {
    Simplex s{q, 0};
    auto edge = [&](int i, int j) {
      std::vector<int> pos{i, j};
      return word(cx, cx.restrict(s, pos));
    };
    auto step = [&](int face, std::vector<std::string> before, std::vector<std::string> after, std::vector<Presentation2::Step>& out) {
      auto t = cx.face(s, face);
      if (!t.degenerate()) out.push_back({std::move(before), cx.id(t.cell), std::move(after)});
    };
    Presentation2::Relation r{"pasting", "", cx.id(q), {}, {}};
    // Through 013: alpha_013 then 01 whiskered with alpha_123.
    step(2, {}, {}, r.lhs);
    step(0, edge(0, 1), {}, r.lhs);
    // Through 023: alpha_023 then alpha_012 whiskered with 23.
    step(1, {}, {}, r.rhs);
    step(3, {}, edge(2, 3), r.rhs);
    p.relations.push_back(std::move(r));
  }
  return p;
}

std::optional<std::string> check_presentation(const Presentation2& p) {
  std::map<std::string, const Presentation2::Generator2*> gens;
  for (const auto& g : p.two) gens[g.id] = &g;
  using Boundary = std::pair<std::vector<std::string>, std::vector<std::string>>;
  auto fold = [&](const std::vector<Presentation2::Step>& steps, std::string& err) -> std::optional<Boundary> {
    std::optional<Boundary> acc;
    for (const auto& st : steps) {
      auto it = gens.find(st.cell);
      if (it == gens.end()) {
        err = "unknown 2-cell " + st.cell;
        return std::nullopt;
      }
      auto src = concat(concat(st.before, it->second->source), st.after);
      auto tgt = concat(concat(st.before, it->second->target), st.after);
      if (acc && acc->second != src) {
        err = "steps are not composable at " + st.cell;
        return std::nullopt;
      }
      acc = Boundary{acc ? acc->first : src, tgt};
    }
    return acc;
  };
  for (const auto& r : p.relations) {
    if (r.kind == "invertible") {
      if (!gens.count(r.cell)) return "invertibility of unknown 2-cell " + r.cell;
      continue;
    }
    if (r.kind != "pasting") return "unknown relation kind " + r.kind;
    std::string err;
    auto l = fold(r.lhs, err);
    if (!err.empty()) return err;
    auto rr = fold(r.rhs, err);
    if (!err.empty()) return err;
    bool ok = l && rr ? *l == *rr : l ? l->first == l->second : rr ? rr->first == rr->second : true;
    if (!ok) return "pasting relation of " + r.witness + " is not between parallel pastings";
  }
  return std::nullopt;
}

json Presentation2::to_json() const {
  json j;
  j["schema"] = kSchema;
  j["type"] = "ho2-presentation";
  j["objects"] = objects;
  j["one_cells"] = json::array();
  for (const auto& g : one) j["one_cells"].push_back({{"id", g.id}, {"src", g.src}, {"tgt", g.tgt}});
  j["two_cells"] = json::array();
  for (const auto& g : two) j["two_cells"].push_back({{"id", g.id}, {"source", g.source}, {"target", g.target}});
  auto steps = [](const std::vector<Step>& s) {
    json a = json::array();
    for (const auto& st : s) a.push_back({{"before", st.before}, {"cell", st.cell}, {"after", st.after}});
    return a;
  };
  j["relations"] = json::array();
  for (const auto& r : relations) {
    if (r.kind == "invertible")
      j["relations"].push_back({{"kind", r.kind}, {"cell", r.cell}});
    else
      j["relations"].push_back({{"kind", r.kind}, {"witness", r.witness}, {"lhs", steps(r.lhs)}, {"rhs", steps(r.rhs)}});
  }
  return j;
}

}  // namespace scaled
