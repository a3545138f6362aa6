#include <doctest.h>

#include <sstream>

#include "helpers.hpp"
#include "scaled/errors.hpp"
#include "scaled/strat.hpp"

using namespace scaled;
using testing_helpers::counts;
using testing_helpers::Sizes;

namespace {

std::vector<std::string> marked_ids(const Decorated& d) {
  std::vector<std::string> out;
  for (int n = 1; n <= d.complex().max_dim(); ++n)
    for (auto c : d.marked_cells(n)) out.push_back(d.complex().id(c));
  std::sort(out.begin(), out.end());
  return out;
}

// Splits a join id "x*y" into its two component ids.
std::pair<std::string, std::string> split_join_id(const std::string& id) {
  auto star = id.find('*');
  return {id.substr(0, star), id.substr(star + 1)};
}

Decorated random_stratified(std::mt19937& rng, int n) {
  auto x = testing_helpers::random_subcomplex(rng, n, 2);
  Decorated d(x, Kind::stratified);
  for (CellIndex c = x->begin_of_dim(1); c < x->size(); ++c)
    if (rng() % 2) d.mark(c);
  return d;
}

}  // namespace

TEST_CASE("decorate modes") {
  auto d2 = standard_simplex(2);
  auto s = sharp(d2);
  CHECK(s.mark_count() == 1);
  CHECK(s.marked(d2->at("012")));
  CHECK(flat(d2, Kind::scaled).mark_count() == 0);
  auto d3 = standard_simplex(3);
  CHECK(marked_ids(th(d3, 2)) == std::vector<std::string>{"0123"});
  auto base = explicit_decoration(d3, Kind::stratified, {"012"});
  CHECK(marked_ids(bold_th(base, 2)) == std::vector<std::string>{"012", "0123"});
  CHECK_THROWS_AS(explicit_decoration(d3, Kind::stratified, {"0124"}), ReferenceError);
  CHECK_THROWS_AS(explicit_decoration(d3, Kind::scaled, {"01"}), DecorationError);
  for (int k = 0; k <= 3; ++k) {
    CHECK(same_decoration(bold_th(th(d3, k), k), th(d3, k)));
    auto b = bold_th(base, k);
    for (CellIndex c = 0; c < d3->size(); ++c)
      if (base.marked(c)) CHECK(b.marked(c));
  }
}

TEST_CASE("iota and the underlying scaled set") {
  auto d2 = standard_simplex(2);
  auto s = sharp(d2);
  CHECK(same_decoration(underlying_scaled(iota(s)), s));
  auto d3 = standard_simplex(3);
  CHECK(underlying_scaled(th(d3, 2)).mark_count() == 0);
  CHECK(iota(flat(d3, Kind::scaled)).mark_count() == 0);
  std::mt19937 rng(3);
  for (int t = 0; t < 20; ++t) {
    auto x = random_stratified(rng, 3);
    auto u = iota(underlying_scaled(x));
    for (CellIndex c = 0; c < x.complex().size(); ++c)
      CHECK(u.marked(c) == (x.marked(c) && x.complex().dim(c) == 2));
  }
  std::ostringstream warn;
  CHECK(same_marks(s, iota(s), &warn));
  CHECK(warn.str().find("warning") != std::string::npos);
}

TEST_CASE("stratified joins follow the pair rule") {
  auto edge = explicit_decoration(standard_simplex(1), Kind::stratified, {"01"});
  auto pt = flat(standard_point(), Kind::stratified);
  auto j = join_stratified(edge, pt);
  CHECK(counts(j.object.complex()) == Sizes{3, 3, 1});
  CHECK(marked_ids(j.object) == std::vector<std::string>{"01*", "01*0"});

  auto y = explicit_decoration(standard_horn(2, 1), Kind::stratified, {"12"});
  auto unit = join_stratified(flat(empty_complex(), Kind::stratified), y);
  CHECK(counts(unit.object.complex()) == counts(y.complex()));
  CHECK(unit.object.mark_count() == 1);

  std::mt19937 rng(11);
  for (int t = 0; t < 30; ++t) {
    auto a = random_stratified(rng, 2);
    auto b = random_stratified(rng, 2);
    if (a.complex().size() + b.complex().size() > 20) continue;
    auto jab = join_stratified(a, b);
    const auto& jc = jab.object.complex();
    for (CellIndex c = 0; c < jc.size(); ++c) {
      auto [l, r] = split_join_id(jc.id(c));
      bool expect = (!l.empty() && a.marked(a.complex().at(l))) || (!r.empty() && b.marked(b.complex().at(r)));
      CHECK(jab.object.marked(c) == expect);
    }
  }
}

TEST_CASE("marked core") {
  auto d1 = standard_simplex(1);
  CHECK(counts(*marked_core(flat(d1, Kind::marked)).complex) == Sizes{2});
  CHECK(counts(*marked_core(sharp(d1, Kind::marked)).complex) == Sizes{2, 1});
  auto k = marked_core(explicit_decoration(standard_simplex(2), Kind::marked, {"01", "12"}));
  CHECK(counts(*k.complex) == Sizes{3, 2});
  CHECK(k.complex->find("01"));
  CHECK(k.complex->find("12"));
}

TEST_CASE("decorated map validation rejects decoration violations") {
  auto d1 = standard_simplex(1);
  auto f = identity_map(d1);
  auto m = sharp(d1, Kind::marked);
  auto fl = flat(d1, Kind::marked);
  CHECK_FALSE(check_simplicial_map(f));
  CHECK(validate(decorated(f, m, fl)).has_value());
  CHECK_FALSE(validate(decorated(f, fl, m)).has_value());
}
