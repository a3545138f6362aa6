#include <doctest.h>

#include <bit>
#include <random>

#include "helpers.hpp"
#include "moving.hpp"
#include "scaled/constructions.hpp"
#include "scaled/decompose.hpp"
#include "scaled/errors.hpp"
#include "scaled/generators.hpp"
#include "scaled/json_io.hpp"
#include "scaled/lifting.hpp"
#include "scaled/strat.hpp"
#include "scaled/twocat.hpp"

using namespace scaled;

namespace {

// The pushout of the Delta^4 generator along a degeneracy Delta^4 -> Delta^3.
Certificate collapse_certificate(const DecoratedMap& goal, const std::vector<int>& theta) {
  auto gen = generator("scaled-S:delta4");
  auto s = simplex_operator(4, 3, theta);
  Certificate c;
  c.goal = goal;
  c.family = "scaled_S";
  c.steps.push_back({gen.name, assignment_to_json(gen.map.source.complex(), goal.source.complex(), s.assign)});
  return c;
}

// Cells of Delta^1 x Delta^n in Z^k (upper) or Z_k (lower), from the chain
// description.
bool in_stage(const Prism& p, std::uint32_t chain, int k, bool upper) {
  const int n = p.n;
  const std::uint32_t full = (2u << n) - 1u;
  if (p.projection(chain) != full) return true;
  if (upper ? p.upper(chain) == 0 : p.lower(chain) == 0) return true;
  for (int i = upper ? k : 0; upper ? i <= n : i < k; ++i) {
    std::uint32_t tau = 0;
    for (int m = 0; m <= n + 1; ++m) tau |= m <= i ? Prism::vertex(0, m, n) : Prism::vertex(1, m - 1, n);
    if ((chain & tau) == chain) return true;
  }
  return false;
}

std::vector<char> image_of(const DecoratedMap& m) {
  std::vector<char> out(std::size_t(m.target.complex().size()), 0);
  for (auto s : m.assign) out[std::size_t(s.cell)] = 1;
  return out;
}

std::vector<std::pair<std::string, Decorated>> fibrant_targets() {
  return {{"sharp D2", sharp(standard_simplex(2))},
          {"sharp D3", sharp(standard_simplex(3))},
          {"J", special_object("J_sharp_trunc(4)")},
          {"N2 walking 2-cell", nerve2(walking_two_cell(), 4).object},
          {"N2 oriental 2", nerve2(oriental2(2), 4).object}};
}

}  // namespace

TEST_CASE("certificates for j1 and j2") {
  auto j1 = generator("j:i=1").map;
  auto j2 = generator("j:i=2").map;
  auto c1 = collapse_certificate(j1, {0, 1, 1, 2, 3});
  auto c2 = collapse_certificate(j2, {0, 1, 2, 2, 3});
  CHECK(verify_certificate(j1, c1).pass);
  CHECK(verify_certificate(j2, c2).pass);
  // Each collapse only works for its own map.
  CHECK_FALSE(verify_certificate(j1, collapse_certificate(j1, {0, 1, 2, 2, 3})).pass);
  // Round trip through JSON.
  auto back = Certificate::from_json(c1.to_json());
  CHECK(back.to_json() == c1.to_json());
  CHECK(verify_certificate(back.goal, back).pass);

  // One wrong vertex in the attaching map fails at step 1.
  auto bad = c1;
  bad.steps[0].attach["0"] = "1";
  auto r = verify_certificate(j1, bad);
  CHECK_FALSE(r.pass);
  CHECK(r.step == std::optional<int>(1));
  CHECK(r.to_json()["step"] == 1);
  // A generator outside the family.
  CHECK(verify_certificate(j1, c1, "scaled_S_inner").step == std::optional<int>(1));
  bad = c1;
  bad.steps[0].generator = "scaled-S:nope";
  CHECK(verify_certificate(j1, bad).step == std::optional<int>(1));

  // Search finds the same one-step certificates.
  for (const auto& [goal, theta] : {std::pair{j1, std::vector<int>{0, 1, 1, 2, 3}}, std::pair{j2, std::vector<int>{0, 1, 2, 2, 3}}}) {
    auto found = search_certificate(goal, "scaled_S", SearchBudget{2});
    REQUIRE(found.certificate);
    CHECK(found.certificate->steps.size() == 1);
    CHECK(found.certificate->steps[0].generator == "scaled-S:delta4");
    CHECK(verify_certificate(goal, *found.certificate).pass);
    auto attach = simplex_operator(4, 3, theta).assign;
    auto gen = generator("scaled-S:delta4");
    CHECK(found.certificate->steps[0].attach == assignment_to_json(gen.map.source.complex(), goal.source.complex(), attach));
  }
}

TEST_CASE("trivial certificates and search controls") {
  auto x = sharp(standard_simplex(2));
  auto id = identity_map(x);
  Certificate empty;
  empty.goal = id;
  empty.family = "scaled_S";
  CHECK(verify_certificate(id, empty).pass);
  auto s = search_certificate(id, "scaled_S");
  REQUIRE(s.certificate);
  CHECK(s.certificate->steps.empty());

  // An empty certificate for a proper inclusion fails at the end.
  auto g = generator("scaled-S:inner:n=2,i=1");
  empty.goal = g.map;
  auto r = verify_certificate(g.map, empty);
  CHECK_FALSE(r.pass);
  CHECK_FALSE(r.step.has_value());

  // A generator is a one-step certificate of itself.
  auto own = search_certificate(g.map, "scaled_S");
  REQUIRE(own.certificate);
  REQUIRE(own.certificate->steps.size() == 1);
  CHECK(own.certificate->steps[0].generator == g.name);
  CHECK(verify_certificate(g.map, *own.certificate).pass);

  // The flat boundary of Delta^1 is not reached.
  auto bd = generator("boundary:n=1").map;
  auto none = search_certificate(bd, "scaled_S", SearchBudget{3});
  CHECK_FALSE(none.certificate);
  CHECK(none.to_json()["verdict"] == "exhausted");

  // Retract data: the identity retract of the composite.
  auto j1 = generator("j:i=1").map;
  auto c = collapse_certificate(j1, {0, 1, 1, 2, 3});
  auto stages = replay_certificate(j1, c);
  REQUIRE(stages.size() == 2);
  auto iso = find_isomorphism(stages.back().object, j1.target);
  REQUIRE(iso);
  auto inv = find_isomorphism(j1.target, stages.back().object);
  REQUIRE(inv);
  c.retract = Certificate::Retract{assignment_to_json(j1.target.complex(), stages.back().object.complex(), *inv),
                                   assignment_to_json(stages.back().object.complex(), j1.target.complex(), *iso)};
  CHECK(verify_certificate(j1, c).pass);
  // The constant map at a vertex is a map but not a section.
  Assignment constant;
  const auto& tc = j1.target.complex();
  for (CellIndex x = 0; x < tc.size(); ++x)
    constant.push_back(tc.dim(x) == 0 ? Simplex{0, 0} : stages.back().object.complex().degenerate({0, 0}, (2u << tc.dim(x)) - 2u, tc.dim(x)));
  c.retract->section = assignment_to_json(tc, stages.back().object.complex(), constant);
  CHECK_FALSE(verify_certificate(j1, c).pass);
}

TEST_CASE("prism filtrations") {
  auto one = prism_filtration(1, PrismVariant::z_upper);
  REQUIRE(one.certificate.steps.size() == 2);
  CHECK(one.certificate.steps[0].generator == "horn-T:n=2,k=1,h=1");
  CHECK(one.certificate.steps[1].generator == "horn-T:n=2,k=0,h=0");
  auto low = prism_filtration(2, PrismVariant::z_lower);
  REQUIRE(low.certificate.steps.size() == 3);
  for (int k = 0; k < 3; ++k)
    CHECK(low.certificate.steps[std::size_t(k)].generator == "horn-T:n=3,k=" + std::to_string(k) + ",h=" + std::to_string(k + 1));

  for (int n = 1; n <= 4; ++n)
    for (auto v : {PrismVariant::z_upper, PrismVariant::z_lower, PrismVariant::scaled_l}) {
      if (v == PrismVariant::scaled_l && n < 2) {
        CHECK_THROWS_AS(prism_filtration(n, v), ParameterError);
        continue;
      }
      INFO(n, " ", prism_variant_name(v));
      auto f = prism_filtration(n, v);
      CHECK(verify_certificate(f.certificate.goal, f.certificate).pass);
      CHECK(f.certificate.steps.size() == std::size_t(n + 1));
      if (v == PrismVariant::scaled_l) continue;
      // Each stage is Z^k (or Z_k) as a subcomplex of the prism.
      auto p = make_prism(n);
      bool upper = v == PrismVariant::z_upper;
      for (std::size_t s = 0; s < f.stages.size(); ++s) {
        int k = upper ? n + 1 - int(s) : int(s);
        auto img = image_of(f.stages[s]);
        for (CellIndex c = 0; c < p.product.complex->size(); ++c)
          CHECK(bool(img[std::size_t(c)]) == in_stage(p, p.chain_of[std::size_t(c)], k, upper));
      }
    }
}

TEST_CASE("the L-scaled filtration is inner until its last step") {
  for (int n = 2; n <= 4; ++n) {
    auto f = prism_filtration(n, PrismVariant::scaled_l);
    const auto& steps = f.certificate.steps;
    for (std::size_t s = 0; s + 1 < steps.size(); ++s) CHECK(in_family("scaled_S_inner", steps[s].generator));
    CHECK_FALSE(in_family("scaled_S_inner", steps.back().generator));
    CHECK(steps.back().generator == "horn-T:n=" + std::to_string(n + 1) + ",k=0,h=0");
  }
  // A nontrivial rho scales fewer triangles and still filters.
  auto f = prism_filtration(3, PrismVariant::scaled_l, {0, 0, 1, 1});
  CHECK(verify_certificate(f.certificate.goal, f.certificate).pass);
  auto full = prism_filtration(3, PrismVariant::scaled_l);
  CHECK(f.certificate.goal.target.mark_count() < full.certificate.goal.target.mark_count());
}

TEST_CASE("prism filtration steps are pushout squares") {
  // Maps out of each new stage correspond to compatible pairs on the square.
  auto probe = sharp(standard_simplex(2));
  for (auto v : {PrismVariant::z_upper, PrismVariant::z_lower}) {
    auto f = prism_filtration(1, v);
    auto stages = replay_certificate(f.certificate.goal, f.certificate);
    for (std::size_t k = 0; k < f.certificate.steps.size(); ++k) {
      const auto& step = f.certificate.steps[k];
      auto gen = generator(step.generator);
      const auto& cur = stages[k].object;
      auto attach = assignment_from_json(gen.map.source.complex(), cur.complex(), step.attach);
      std::size_t pairs = 0;
      for (const auto& u : enumerate_maps(cur, probe)) {
        DecoratedMap ua = compose(u, DecoratedMap{gen.map.source, cur, attach});
        pairs += extensions(ua, gen.map).size();
      }
      CHECK(enumerate_maps(stages[k + 1].object, probe).size() == pairs);
    }
  }
}

TEST_CASE("pushout-joins of the marked-scaled generators") {
  // Case (1) with n = 0 is the scaled inner horn of Delta^3 at 1.
  auto one = pushout_join_cells(1, 2, 0, 1);
  CHECK_FALSE(one.isomorphism);
  REQUIRE(one.certificate);
  REQUIRE(one.certificate->steps.size() == 1);
  CHECK(one.certificate->steps[0].generator == "scaled-S:inner:n=3,i=1");
  CHECK(verify_certificate(one.goal, *one.certificate).pass);
  // Case (3) with n = 0 is a pushout of a collapsed horn.
  auto three = pushout_join_cells(3, 2, 0);
  REQUIRE(three.certificate);
  REQUIRE(three.certificate->steps.size() == 1);
  CHECK(three.certificate->steps[0].generator == "scaled-S:collapsed:n=3");
  // Case (4), and any case against the thin triangle, is an isomorphism.
  for (int n = 0; n <= 2; ++n) {
    auto four = pushout_join_cells(4, 2, n);
    CHECK(four.isomorphism);
    REQUIRE(four.certificate);
    CHECK(four.certificate->steps.empty());
    CHECK(verify_certificate(four.goal, *four.certificate).pass);
  }
  for (int which = 1; which <= 4; ++which) {
    auto t = pushout_join_cells(which, 2, 0, 1, true);
    CHECK(t.isomorphism);
    CHECK(verify_certificate(t.goal, *t.certificate).pass);
  }
  CHECK_THROWS_AS(pushout_join_cells(5, 2, 0), ParameterError);
}

TEST_CASE("moving lemma with identity rho is a degeneracy") {
  auto c = nerve2(walking_isomorphism(), 3).object;
  auto sr = sigma_rho({0, 1});
  auto p = make_prism(1);
  std::mt19937 rng(7);
  for (int trial = 0; trial < 4; ++trial) {
    auto end = testing_helpers::random_end_map(rng, c, FaceSet::full(1), p);
    REQUIRE(end);
    auto h = extend_sigma_rho_transformation(c, sr, FaceSet::none(1), FaceSet::full(1), p, *end);
    Simplex e = *(*end)[std::size_t(p.cell(3u << 2))];
    for (std::size_t cell = 0; cell < h.size(); ++cell) {
      std::vector<int> theta;
      std::uint32_t ch = p.chain_of[cell];
      for (int v = 0; v < 4; ++v)
        if ((ch >> v) & 1u) theta.push_back(v % 2);
      CHECK(*h[cell] == c.complex().apply(e, theta));
    }
  }
}

TEST_CASE("moving lemma on a collapsing rho and a boundary") {
  std::mt19937 rng(11);
  auto c = nerve2(walking_isomorphism(), 4).object;
  auto sr = sigma_rho({0, 1, 1});
  auto p = make_prism(2);
  for (int trial = 0; trial < 4; ++trial) {
    auto end = testing_helpers::random_end_map(rng, c, FaceSet::full(2), p);
    REQUIRE(end);
    auto h = extend_sigma_rho_transformation(c, sr, FaceSet::none(2), FaceSet::full(2), p, *end);
    CHECK(check_transformation(c, sr, FaceSet::full(2), p, h).ok());
    CHECK(testing_helpers::condition_violations(c, sr, FaceSet::full(2), p, h) == std::array<int, 3>{0, 0, 0});
    CHECK(testing_helpers::simplicial_on(c, FaceSet::full(2), p, h));
  }
  // From the boundary: first build g on Delta^1 x boundary, then extend.
  auto bd = FaceSet::boundary(2);
  auto j = special_object("J_sharp_trunc(4)");
  sr = sigma_rho({0, 1, 2});
  for (int trial = 0; trial < 4; ++trial) {
    auto end = testing_helpers::random_end_map(rng, j, FaceSet::full(2), p);
    REQUIRE(end);
    PartialAssignment on_bd(end->size());
    for (std::size_t cell = 0; cell < end->size(); ++cell)
      if (p.lower(p.chain_of[cell]) == 0 && bd.contains(p.upper(p.chain_of[cell]))) on_bd[cell] = (*end)[cell];
    auto h_bd = extend_sigma_rho_transformation(j, sr, FaceSet::none(2), bd, p, on_bd);
    PartialAssignment g = *end;
    for (std::size_t cell = 0; cell < g.size(); ++cell)
      if (bd.contains(p.projection(p.chain_of[cell]))) g[cell] = h_bd[cell];
    auto h = extend_sigma_rho_transformation(j, sr, bd, FaceSet::full(2), p, g);
    for (std::size_t cell = 0; cell < g.size(); ++cell)
      if (g[cell]) CHECK(h[cell] == g[cell]);
    CHECK(testing_helpers::condition_violations(j, sr, FaceSet::full(2), p, h) == std::array<int, 3>{0, 0, 0});
  }
}

TEST_CASE("moving lemma on random instances over fibrant targets") {
  std::mt19937 rng(2024);
  int done = 0;
  for (const auto& [name, c] : fibrant_targets())
    for (int n = 1; n <= 3; ++n)
      for (int trial = 0; trial < 3; ++trial) {
        INFO(name, " n=", n, " trial ", trial);
        auto inst = testing_helpers::random_moving_instance(rng, c, n);
        if (!inst) continue;
        auto h = extend_sigma_rho_transformation(c, inst->sr, inst->a, inst->b, inst->p, inst->g);
        for (std::size_t cell = 0; cell < h.size(); ++cell)
          if (inst->g[cell]) CHECK(h[cell] == inst->g[cell]);
        CHECK(check_transformation(c, inst->sr, inst->b, inst->p, h).ok());
        CHECK(testing_helpers::condition_violations(c, inst->sr, inst->b, inst->p, h) == std::array<int, 3>{0, 0, 0});
        CHECK(testing_helpers::simplicial_on(c, inst->b, inst->p, h));
        ++done;
      }
  CHECK(done >= 30);
}

TEST_CASE("moving lemma preconditions") {
  auto c = sharp(standard_simplex(2));
  auto p = make_prism(2);
  auto sr = sigma_rho({0, 1, 1});
  // Vertex 2 is not in the image of sigma, so {2} alone is not admissible.
  CHECK_FALSE(admissible(sr, FaceSet::generated(2, {4u})));
  CHECK(admissible(sr, FaceSet::full(2)));
  CHECK_FALSE(admissible(sr, FaceSet::generated(2, {5u})));
  PartialAssignment none(std::size_t(p.product.complex->size()));
  CHECK_THROWS_AS(extend_sigma_rho_transformation(c, sr, FaceSet::none(2), FaceSet::generated(2, {4u}), p, none),
                  PreconditionError);
  CHECK_THROWS_AS(extend_sigma_rho_transformation(c, sr, FaceSet::full(2), FaceSet::none(2), p, none), PreconditionError);
  // g must be given on {1} x B.
  CHECK_THROWS_AS(extend_sigma_rho_transformation(c, sr, FaceSet::none(2), FaceSet::full(2), p, none), PreconditionError);
  // A non-simplicial g.
  std::mt19937 rng(3);
  auto end = testing_helpers::random_end_map(rng, c, FaceSet::full(2), p);
  REQUIRE(end);
  auto broken = *end;
  broken[std::size_t(p.cell(Prism::vertex(1, 0, 2)))] = Simplex{2, 0};
  broken[std::size_t(p.cell(Prism::vertex(1, 2, 2)))] = Simplex{0, 0};
  if (broken != *end)
    CHECK_THROWS_AS(extend_sigma_rho_transformation(c, sr, FaceSet::none(2), FaceSet::full(2), p, broken), PreconditionError);
  // A flat target has no thin filler for the type (iii) triangles.
  auto flat2 = flat(standard_simplex(2), Kind::scaled);
  PartialAssignment up(std::size_t(p.product.complex->size()));
  for (std::uint32_t s = 1; s < 8; ++s) up[std::size_t(p.cell(s << 3))] = c.complex().restrict({c.complex().size() - 1, 0}, testing_helpers::positions(s));
  CHECK_THROWS_AS(extend_sigma_rho_transformation(flat2, sigma_rho({0, 0, 1}), FaceSet::none(2), FaceSet::full(2), p, up),
                  FibrancyError);
  CHECK_THROWS_AS(extend_sigma_rho_transformation(flat(standard_simplex(2), Kind::plain), sr, FaceSet::none(2), FaceSet::full(2), p, up),
                  DecorationError);
}

namespace {

// Edges of x lying over `base` with the given target that are p-cartesian.
std::vector<Simplex> cartesian_lifts(const DecoratedMap& p, Simplex base, Simplex target) {
  const auto& xc = p.source.complex();
  auto pm = p.underlying();
  std::vector<Simplex> out;
  std::vector<Simplex> edges{xc.degeneracy(target, 0)};
  for (CellIndex e = xc.begin_of_dim(1); e < xc.end_of_dim(1); ++e) edges.push_back({e, 0});
  for (auto e : edges)
    if (pm.apply(e) == base && xc.face(e, 0) == target && is_cartesian_edge(p, e, CheckOptions{3, 1}).pass) out.push_back(e);
  return out;
}

// A lifting problem over p with B = Delta^b, A = none or the vertices, and h
// the given map on the prism.  f on {1} x B is the first lift of h there.
std::optional<NaturalLiftProblem> lift_problem(const DecoratedMap& p, int b, bool vertices_in_a, const Assignment& h) {
  NaturalLiftProblem pr;
  pr.p = p;
  pr.b = standard_simplex(b);
  pr.prism = natural_prism(pr.b);
  pr.h = h;
  pr.a.assign(std::size_t(pr.b->size()), 0);
  if (vertices_in_a)
    for (CellIndex v = 0; v < pr.b->count(0); ++v) pr.a[std::size_t(v)] = 1;
  const auto& px = *pr.prism.complex;
  CellIndex one = *find_subset(*pr.prism.pr1.target, 2u, 1);
  // The end {1} x B as a map from Delta^b.
  auto end = flat(pr.b, Kind::scaled);
  MapSearch ms;
  ms.source = &end;
  ms.target = &p.source;
  ms.over = &p;
  ms.check_decorations = false;
  ms.fixed.assign(std::size_t(pr.b->size()), std::nullopt);
  auto end_of = [&](CellIndex y) {
    int d = pr.b->dim(y);
    return pr.prism.pair(pr.prism.pr1.target->degenerate({one, 0}, (2u << d) - 2u, d), {y, 0});
  };
  for (CellIndex y = 0; y < pr.b->size(); ++y) ms.over_required.push_back(h[std::size_t(end_of(y).cell)]);
  auto top = first_map(ms);
  if (!top) return std::nullopt;
  pr.f.assign(std::size_t(px.size()), std::nullopt);
  pr.lifts.assign(pr.b->count(0), std::nullopt);
  for (CellIndex y = 0; y < pr.b->size(); ++y) pr.f[std::size_t(end_of(y).cell)] = (*top)[std::size_t(y)];
  CellIndex unit = *find_subset(*pr.prism.pr1.target, 3u, 1), zero = *find_subset(*pr.prism.pr1.target, 1u, 1);
  for (CellIndex v = 0; v < pr.b->count(0); ++v) {
    Simplex over = h[std::size_t(pr.prism.pair({unit, 0}, pr.b->degeneracy({v, 0}, 0)).cell)];
    auto cands = cartesian_lifts(p, over, (*top)[std::size_t(v)]);
    if (cands.empty()) return std::nullopt;
    if (vertices_in_a) {
      pr.f[std::size_t(pr.prism.pair({unit, 0}, pr.b->degeneracy({v, 0}, 0)).cell)] = cands[0];
      pr.f[std::size_t(pr.prism.pair({zero, 0}, {v, 0}).cell)] = p.source.complex().face(cands[0], 1);
    } else {
      pr.lifts[std::size_t(v)] = cands[0];
    }
  }
  return pr;
}

}  // namespace

TEST_CASE("natural transformation lifts") {
  CheckOptions opt{3, 1};
  auto y = sharp(standard_simplex(2));
  auto sl = slice_at(y, y.complex().at("2"));
  const auto& p = sl.projection;
  int solved = 0;
  for (int b = 0; b <= 1; ++b)
    for (bool in_a : {false, true}) {
      if (b == 0 && in_a) continue;
      auto prism = natural_prism(standard_simplex(b));
      for (const auto& h : enumerate_maps(prism.complex, y.carrier())) {
        auto pr = lift_problem(p, b, in_a, h.assign);
        if (!pr) continue;
        INFO("b=", b, " in_a=", in_a);
        auto lift = lift_transformation(*pr, opt);
        DecoratedMap as_map{flat(prism.complex, Kind::scaled), p.source, lift};
        CHECK_FALSE(validate(as_map).has_value());
        auto pm = p.underlying();
        for (std::size_t c = 0; c < lift.size(); ++c) {
          CHECK(pm.apply(lift[c]) == h.assign[c]);
          if (pr->f[c]) CHECK(lift[c] == *pr->f[c]);
        }
        for (CellIndex v = 0; v < pr->b->count(0); ++v)
          if (pr->lifts[std::size_t(v)]) {
            CellIndex unit = *find_subset(*prism.pr1.target, 3u, 1);
            CHECK(lift[std::size_t(prism.pair({unit, 0}, pr->b->degeneracy({v, 0}, 0)).cell)] == *pr->lifts[std::size_t(v)]);
          }
        ++solved;
      }
    }
  CHECK(solved > 0);

  // Over the identity the lift is h itself.
  auto j = special_object("J_sharp_trunc(3)");
  auto id = identity_map(j);
  auto prism = natural_prism(standard_simplex(1));
  for (const auto& h : enumerate_maps(prism.complex, j.carrier())) {
    auto pr = lift_problem(id, 1, false, h.assign);
    REQUIRE(pr);
    CHECK(lift_transformation(*pr, opt) == h.assign);
  }
}
