#include <doctest.h>

#include <bit>
#include <map>
#include <set>

#include "helpers.hpp"
#include "scaled/errors.hpp"
#include "scaled/json_io.hpp"
#include "scaled/kernel.hpp"

using namespace scaled;
using testing_helpers::counts;

namespace {

using Sizes = std::vector<std::size_t>;

// Independent count of the nonempty subsets of [n] accepted by a predicate.
Sizes subset_counts(int n, bool (*keep)(std::uint32_t, int)) {
  Sizes out(std::size_t(n) + 1, 0);
  for (std::uint32_t s = 1; s < (1u << (n + 1)); ++s)
    if (keep(s, n)) ++out[std::size_t(std::popcount(s) - 1)];
  while (!out.empty() && out.back() == 0) out.pop_back();
  return out;
}

// Product poset [p] x [q].
Sizes grid_chains(int p, int q) {
  int size = (p + 1) * (q + 1);
  std::vector<std::vector<bool>> less(std::size_t(size), std::vector<bool>(std::size_t(size), false));
  for (int a = 0; a < size; ++a)
    for (int b = 0; b < size; ++b) {
      int a1 = a / (q + 1), a2 = a % (q + 1), b1 = b / (q + 1), b2 = b % (q + 1);
      less[std::size_t(a)][std::size_t(b)] = a != b && a1 <= b1 && a2 <= b2;
    }
  return testing_helpers::chain_counts(size, less);
}

}  // namespace

TEST_CASE("standard complexes have the expected face lattices") {
  CHECK(counts(*standard_simplex(2)) == Sizes{3, 3, 1});
  auto horn = standard_horn(2, 1);
  CHECK(counts(*horn) == Sizes{3, 2});
  CHECK(horn->find("01"));
  CHECK(horn->find("12"));
  CHECK_FALSE(horn->find("02"));
  auto bd = standard_boundary(3);
  CHECK(counts(*bd) == subset_counts(3, [](std::uint32_t s, int n) { return s != (1u << (n + 1)) - 1u; }));
  CHECK(counts(*bd) == Sizes{4, 6, 4});
  CHECK(counts(*standard_face(3, 0b1010)) == Sizes{2, 1});
  CHECK(counts(*standard_point()) == Sizes{1});
  CHECK_THROWS_AS(standard_horn(2, 3), ParameterError);
  CHECK_THROWS_AS(standard_face(2, 0), ParameterError);
}

TEST_CASE("faces and degeneracies of standard simplices") {
  auto d3 = standard_simplex(3);
  Simplex top{d3->at("0123"), 0};
  CHECK(d3->id(d3->face(top, 1).cell) == "023");
  auto s = d3->degeneracy(d3->face(top, 0), 1);  // s_1 of 123: vertices 1,2,2,3
  CHECK(d3->vertices(s) == std::vector<CellIndex>{d3->at("1"), d3->at("2"), d3->at("2"), d3->at("3")});
  CHECK(d3->face(s, 1) == Simplex{d3->at("123"), 0});
  CHECK(d3->face(s, 2) == Simplex{d3->at("123"), 0});
  CHECK(d3->face(s, 0) == d3->degeneracy(Simplex{d3->at("23"), 0}, 0));
  CHECK(degeneracy::word(s.repeats) == std::vector<int>{1});
  CHECK(degeneracy::from_word({2, 0}, 1) == ((1u << 3) | (1u << 1)));
  CHECK_THROWS_AS(degeneracy::from_word({0, 2}, 1), ParameterError);
  CHECK_THROWS_AS(degeneracy::from_word({3}, 1), ParameterError);
}

TEST_CASE("products agree with the chain oracle on grids") {
  for (int p = 0; p <= 3; ++p)
    for (int q = 0; q <= 2; ++q) {
      auto pr = product(standard_simplex(p), standard_simplex(q));
      CHECK(counts(*pr.complex) == grid_chains(p, q));
      CHECK_FALSE(check_simplicial_identities(*pr.complex));
      CHECK_FALSE(check_simplicial_map(pr.pr1));
      CHECK_FALSE(check_simplicial_map(pr.pr2));
    }
  CHECK(counts(*product(standard_simplex(1), standard_simplex(1)).complex) == Sizes{4, 5, 2});
  CHECK(product(standard_simplex(1), standard_simplex(2)).complex->count(3) == 3);
  auto x = standard_horn(3, 1);
  CHECK(counts(*product(standard_point(), x).complex) == counts(*x));
}

TEST_CASE("joins agree with the pair formula") {
  for (int p = 0; p <= 2; ++p)
    for (int q = 0; q <= 2; ++q) {
      auto j = join(standard_simplex(p), standard_simplex(q));
      CHECK(counts(*j.complex) == counts(*standard_simplex(p + q + 1)));
      CHECK_FALSE(check_simplicial_identities(*j.complex));
    }
  auto y = standard_horn(2, 0);
  CHECK(counts(*join(empty_complex(), y).complex) == counts(*y));
  CHECK(counts(*join(y, empty_complex()).complex) == counts(*y));
  // Pair formula for the boundary of an edge joined with a point: every
  // vertex on the left pairs with the cone point; there are no left edges.
  auto bd = standard_boundary(1);
  auto pt = standard_point();
  Sizes oracle{bd->count(0) + pt->count(0), bd->count(0) * pt->count(0)};
  auto j = join(bd, pt);
  CHECK(counts(*j.complex) == oracle);
  CHECK(counts(*j.complex) == Sizes{3, 2});
}

TEST_CASE("pushouts collapse and glue") {
  auto edge = standard_face(2, 0b011);
  auto horn = standard_horn(2, 0);
  auto pt = standard_point();
  SimplicialMap inc{edge, horn, {}};
  for (CellIndex c = 0; c < edge->size(); ++c) inc.assign.push_back({horn->at(edge->id(c)), 0});
  SimplicialMap collapse{edge, pt, {}};
  for (CellIndex c = 0; c < edge->size(); ++c)
    collapse.assign.push_back(edge->dim(c) == 0 ? Simplex{0, 0} : Simplex{0, 0b10});
  auto p = pushout(inc, collapse);
  CHECK(counts(p.object.complex()) == Sizes{2, 1});
  CHECK_FALSE(check_simplicial_identities(p.object.complex()));
  CHECK_FALSE(check_simplicial_map(p.from_x.underlying()));
  CHECK_FALSE(check_simplicial_map(p.from_y.underlying()));

  // Along an identity.
  auto y = standard_horn(3, 2);
  auto id = identity_map(y);
  CHECK(counts(pushout(id, id).object.complex()) == counts(*y));

  // Attaching a triangle to its own boundary.
  auto bd = standard_boundary(2);
  auto tri = standard_simplex(2);
  SimplicialMap b2t{bd, tri, {}};
  for (CellIndex c = 0; c < bd->size(); ++c) b2t.assign.push_back({tri->at(bd->id(c)), 0});
  auto q = pushout(b2t, identity_map(bd));
  CHECK(counts(q.object.complex()) == Sizes{3, 3, 1});
}

TEST_CASE("pushout universal property on a fixture") {
  // Lambda^2_0 glued to a point along Delta^{01}; compare cocones into Delta^1
  // with maps out of the pushout.
  auto edge = standard_face(2, 0b011);
  auto horn = standard_horn(2, 0);
  auto pt = standard_point();
  SimplicialMap inc{edge, horn, {}};
  for (CellIndex c = 0; c < edge->size(); ++c) inc.assign.push_back({horn->at(edge->id(c)), 0});
  SimplicialMap collapse{edge, pt, {}};
  for (CellIndex c = 0; c < edge->size(); ++c)
    collapse.assign.push_back(edge->dim(c) == 0 ? Simplex{0, 0} : Simplex{0, 0b10});
  auto p = pushout(inc, collapse);
  auto t = standard_simplex(1);
  std::size_t cocones = 0;
  for (const auto& u : enumerate_maps(horn, t))
    for (const auto& v : enumerate_maps(pt, t))
      if (compose(u, inc).assign == compose(v, collapse).assign) ++cocones;
  auto out = enumerate_maps(p.object.carrier(), t);
  CHECK(out.size() == cocones);
  std::set<Assignment> seen;
  for (const auto& m : out) {
    auto u = compose(m, p.from_x.underlying());
    auto v = compose(m, p.from_y.underlying());
    seen.insert(u.assign);
    CHECK(compose(u, inc).assign == compose(v, collapse).assign);
  }
  CHECK(seen.size() == out.size());
}

TEST_CASE("map enumeration counts") {
  auto d1 = standard_simplex(1), d2 = standard_simplex(2);
  CHECK(enumerate_maps(d1, d1).size() == 3);
  std::size_t pairs = 0;
  for (int i = 0; i <= 2; ++i)
    for (int j = i; j <= 2; ++j) ++pairs;
  CHECK(enumerate_maps(d1, d2).size() == pairs);
  auto horn = standard_horn(2, 1);
  auto pinned = partial_from_ids(*d2, *horn, {{"0", "0"}, {"1", "1"}, {"2", "2"}});
  CHECK(enumerate_maps(d2, horn, pinned).empty());
  // inconsistent: edge 01 pinned to 12 while vertex 0 pinned to 0
  auto bad = partial_from_ids(*d1, *d2, {{"01", "12"}, {"0", "0"}});
  CHECK_THROWS_AS(enumerate_maps(d1, d2, bad), ConstraintError);
  // canonical order is sorted and deterministic
  auto maps = enumerate_maps(d2, d2);
  CHECK(maps.size() == 10);
  for (std::size_t k = 1; k < maps.size(); ++k) CHECK(maps[k - 1].assign < maps[k].assign);
}

TEST_CASE("opposites") {
  for (int n = 0; n <= 4; ++n) {
    auto d = standard_simplex(n);
    auto op = opposite(d);
    CHECK_FALSE(check_simplicial_identities(*op));
    Decorated a(op, Kind::plain), b(d, Kind::plain);
    PartialAssignment pin(std::size_t(op->size()));
    for (int v = 0; v <= n; ++v) pin[std::size_t(op->at(std::to_string(v)))] = Simplex{d->at(std::to_string(n - v)), 0};
    CHECK(find_isomorphism(a, b, pin));
    CHECK(same_complex(*opposite(op), *d));
  }
  for (int n = 2; n <= 4; ++n) {
    Decorated a(opposite(standard_horn(n, 0)), Kind::plain), b(standard_horn(n, n), Kind::plain);
    CHECK(find_isomorphism(a, b));
  }
}

TEST_CASE("json round trip") {
  auto pr = product(standard_simplex(1), standard_horn(2, 1));
  auto j = complex_to_json(*pr.complex);
  auto back = complex_from_json(j);
  CHECK(same_complex(*back, *pr.complex));
  CHECK(complex_to_json(*back).dump() == j.dump());
  json broken = j;
  broken["faces"].begin()->at(0)["target"] = "nope";
  CHECK_THROWS_AS(complex_from_json(broken), FormatError);
}

TEST_CASE("random enumerations agree with the vertex-assignment oracle") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 40; ++trial) {
    auto x = testing_helpers::random_subcomplex(rng, 2 + int(rng() % 2), 2);
    auto y = testing_helpers::random_subcomplex(rng, 2 + int(rng() % 3), 3);
    auto oracle = testing_helpers::vertex_assignment_count(*x, *y);
    CHECK(enumerate_maps(x, y).size() == oracle);
  }
}
