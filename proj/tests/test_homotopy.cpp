#include <doctest.h>

#include "helpers.hpp"
#include "scaled/constructions.hpp"
#include "scaled/errors.hpp"
#include "scaled/generators.hpp"
#include "scaled/homotopy.hpp"
#include "scaled/lifting.hpp"
#include "scaled/strat.hpp"

using namespace scaled;

namespace {

std::vector<Simplex> degenerate_edges(const FiniteSimplicialSet& c) {
  std::vector<Simplex> out;
  for (CellIndex v = c.begin_of_dim(0); v < c.end_of_dim(0); ++v) out.push_back(c.degeneracy({v, 0}, 0));
  return out;
}

bool contains(const std::vector<Simplex>& v, Simplex s) { return std::find(v.begin(), v.end(), s) != v.end(); }

// Edge of the fiber of the slice over y at x whose top triangle is t.
std::optional<CellIndex> slice_edge(const MappingSpace& h, Simplex t) {
  const auto& hc = *h.presentation->complex();
  for (CellIndex e = hc.begin_of_dim(1); e < hc.end_of_dim(1); ++e)
    if (decode(h.presentation->key(e).back()) == t) return e;
  return std::nullopt;
}

}  // namespace

TEST_CASE("equivalence edges") {
  for (int n = 1; n <= 3; ++n) {
    auto x = flat(standard_simplex(n), Kind::scaled);
    CHECK(equivalence_edges(x) == degenerate_edges(x.complex()));
    auto s = sharp(standard_simplex(n));
    CHECK(equivalence_edges(s) == degenerate_edges(s.complex()));
  }
  // In J every edge v: a -> b has the witness w = ba with triangles aba, bab.
  auto j = special_object("J_sharp_trunc(3)");
  const auto& jc = j.complex();
  auto eq = equivalence_edges(j, 2);
  CHECK(eq.size() == jc.count(0) + jc.count(1));
  for (CellIndex e = jc.begin_of_dim(1); e < jc.end_of_dim(1); ++e) {
    const auto& id = jc.id(e);
    std::string a(1, id[0]), b(1, id[1]);
    auto w = special_object("E2").with_kind(Kind::scaled);
    DecoratedMap hand{special_object("th1_E2").with_kind(Kind::scaled), j, {}};
    const auto& ec = hand.source.complex();
    for (CellIndex c = 0; c < ec.size(); ++c) {
      std::string mapped;
      for (char ch : ec.id(c)) mapped += ch == '0' ? a : b;
      hand.assign.push_back({jc.at(mapped), 0});
    }
    CHECK_FALSE(validate(hand).has_value());
    CHECK(contains(eq, {e, 0}));
  }
  CHECK(equivalence_edges(special_object("J_trunc(3)")) == degenerate_edges(special_object("J_trunc(3)").complex()));
  CHECK(equivalence_edges(th(standard_simplex(2), 1)) == degenerate_edges(*standard_simplex(2)));
  CHECK_THROWS_AS(equivalence_edges(flat(standard_simplex(1), Kind::plain)), DecorationError);
  CHECK_THROWS_AS(equivalence_witness(j, {jc.at("010"), 0}), ParameterError);
}

TEST_CASE("equivalences are closed under thin triangles") {
  for (const auto& x : {sharp(standard_simplex(3)), special_object("J_sharp_trunc(3)")}) {
    const auto& cx = x.complex();
    auto eq = equivalence_edges(x);
    for (CellIndex t = cx.begin_of_dim(2); t < cx.end_of_dim(2); ++t) {
      if (!x.marked(t)) continue;
      int n = 0;
      for (int i = 0; i < 3; ++i) n += contains(eq, cx.face({t, 0}, i));
      CHECK(n != 2);
    }
  }
}

TEST_CASE("core") {
  auto d2 = standard_simplex(2);
  CHECK(core(sharp(d2)).complex->size() == d2->size());
  auto c = core(flat(d2, Kind::scaled));
  CHECK(testing_helpers::counts(*c.complex) == testing_helpers::Sizes{3, 3});
  // In (Delta^3, {012, 013, 023}) the 3-cell has a fat face.
  auto x = explicit_decoration(standard_simplex(3), Kind::scaled, {"012", "013", "023"});
  auto k = core(x);
  CHECK(testing_helpers::counts(*k.complex) == testing_helpers::Sizes{4, 6, 3});
  auto strat = th(standard_simplex(3), 1);
  CHECK(core(strat).complex->size() == standard_simplex(3)->size());
}

TEST_CASE("fibrant replacement") {
  auto s = sharp(standard_simplex(2));
  auto r = fibrant_replacement(s);
  CHECK(r.kind() == Kind::stratified);
  const auto& rc = r.complex();
  for (CellIndex c = 0; c < rc.size(); ++c) CHECK(r.marked(c) == (rc.dim(c) >= 2));

  auto e = fibrant_replacement(flat(standard_simplex(1), Kind::scaled));
  CHECK(e.mark_count() == 0);

  auto j = special_object("J_sharp_trunc(3)");
  auto rj = fibrant_replacement(j, 2);
  for (CellIndex c = 0; c < rj.complex().size(); ++c) CHECK(rj.marked(c) == (rj.complex().dim(c) >= 1));
  // The replacement only adds marks outside dimension 2.
  CHECK(same_marks(underlying_scaled(rj), j));
  // A truncation sk_N J has unfillable horns of dimension N + 1.
  CHECK_FALSE(classify(rj, "complicial2", CheckOptions{4, 1}).pass);
  CHECK(classify(fibrant_replacement(special_object("J_sharp_trunc(4)")), "complicial2", CheckOptions{4, 1}).pass);
  CHECK(classify(fibrant_replacement(sharp(standard_simplex(3))), "complicial2", CheckOptions{4, 1}).pass);
}

TEST_CASE("triangle normalization") {
  auto c = sharp(standard_simplex(3));
  const auto& cx = c.complex();
  // Degenerate triangles normalize to degenerate 3-cells.
  auto deg = cx.degeneracy({cx.at("01"), 0}, 0);
  auto nd = normalize_triangle(c, deg);
  CHECK(nd.upsilon.degenerate());
  CHECK(nd.alpha_hat == deg);

  for (CellIndex t = cx.begin_of_dim(2); t < cx.end_of_dim(2); ++t) {
    auto n = normalize_triangle(c, {t, 0});
    CHECK(cx.face(n.upsilon, 1) == Simplex{t, 0});
    CHECK(cx.face(n.upsilon, 3) == cx.degeneracy(cx.face({t, 0}, 2), 0));
    CHECK(c.distinguished(cx.face(n.upsilon, 0)));
    // The 01 edge of alpha-hat is degenerate, so it is an edge of the fiber.
    auto v = cx.vertices({t, 0});
    auto h = hom_slice(c, v[0], v[2]);
    auto e = slice_edge(h, n.alpha_hat);
    if (n.alpha_hat.degenerate()) continue;
    REQUIRE(e);
    CHECK(h.object.marked(*e) == c.marked(t));
  }
  // Without thin triangles the first filler is missing.
  auto fl = flat(standard_simplex(2), Kind::scaled);
  CHECK_THROWS_AS(normalize_triangle(fl, {fl.complex().at("012"), 0}), FibrancyError);
}
