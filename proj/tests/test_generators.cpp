#include <doctest.h>

#include "helpers.hpp"
#include "scaled/constructions.hpp"
#include "scaled/errors.hpp"
#include "scaled/generators.hpp"
#include "scaled/strat.hpp"

using namespace scaled;
using testing_helpers::counts;
using testing_helpers::Sizes;

namespace {

// Vertex set of a face of a standard simplex read from its id.
std::uint32_t subset_from_id(const std::string& id) {
  std::uint32_t s = 0;
  for (char ch : id) s |= 1u << (ch - '0');
  return s;
}

std::vector<std::uint32_t> marked_subsets(const Decorated& d) {
  std::vector<std::uint32_t> out;
  for (CellIndex c = 0; c < d.complex().size(); ++c)
    if (d.marked(c)) out.push_back(subset_from_id(d.complex().id(c)));
  std::sort(out.begin(), out.end());
  return out;
}

bool same_map(const DecoratedMap& a, const DecoratedMap& b) {
  return same_complex(a.source.complex(), b.source.complex()) && same_complex(a.target.complex(), b.target.complex()) &&
         a.source.marks() == b.source.marks() && a.target.marks() == b.target.marks() && a.assign == b.assign &&
         a.source.kind() == b.source.kind() && a.target.kind() == b.target.kind();
}

const std::vector<std::string> kAllFamilies{"scaled_S",        "weak_fib",          "outer_collapsed", "cartesian_horn",
                                            "complicial_horn", "thinness",          "thinness_2trivial",
                                            "trivializer(2)",  "saturation",        "marked_scaled_AS",
                                            "outer_anodyne",   "prism_horns",       "j_maps",
                                            "boundary_monos"};

}  // namespace

TEST_CASE("every generator is a valid mono and regenerates identically") {
  for (const auto& fam : kAllFamilies) {
    auto gens = family(fam, 5);
    CHECK_MESSAGE(!gens.empty(), fam);
    for (const auto& g : gens) {
      INFO(g.name);
      CHECK(g.dimension() <= 5);
      CHECK_FALSE(validate(g.map).has_value());
      CHECK(is_mono(g.map));
      CHECK_FALSE(check_simplicial_identities(g.map.target.complex()).has_value());
      CHECK(same_map(generator(g.name).map, g.map));
      CHECK(in_family(fam, g.name));
    }
  }
}

TEST_CASE("family sizes and membership") {
  CHECK(family_members("scaled_S", 3) == std::vector<std::string>{"scaled-S:inner:n=2,i=1", "scaled-S:inner:n=3,i=1",
                                                                   "scaled-S:inner:n=3,i=2", "scaled-S:collapsed:n=2",
                                                                   "scaled-S:collapsed:n=3"});
  CHECK(family_members("scaled-S", 4).size() == 1 + 2 + 3 + 1 + 3);
  CHECK(family_members("complicial_horn", 3).size() == 2 + 3 + 4);
  CHECK(family_members("trivializer(2)", 4) == std::vector<std::string>{"trivializer:k=2,n=3", "trivializer:k=2,n=4"});
  CHECK(family_members("trivializer:k=2", 4).size() == 2);
  CHECK(family_members("saturation", 2).empty());
  CHECK(family_members("saturation", 3) == std::vector<std::string>{"saturation:n=-1"});
  CHECK(family_members("saturation", 5) == std::vector<std::string>{"saturation:n=-1", "saturation:n=0", "saturation:n=1"});
  CHECK_THROWS_AS(family_members("nonsense", 3), ParameterError);
  CHECK_THROWS_AS(generator("complicial:n=1,i=3"), ParameterError);
  CHECK_THROWS_AS(generator("scaled-S:inner:n=3,i=0"), ParameterError);
  CHECK_THROWS_AS(generator("scaled-S:inner:n=x,i=1"), ParameterError);
  CHECK(in_family("weak_fib", "scaled-S:inner:n=4,i=2"));
  CHECK_FALSE(in_family("scaled_S", "weak-fib:collapsed-last:n=3"));
  CHECK_FALSE(in_family("scaled_S_13", "scaled-S:delta4"));
  CHECK(in_family("scaled_S", "scaled-S:delta4"));
}

TEST_CASE("scaled anodyne generators") {
  auto inner = generator("scaled-S:inner:n=3,i=2");
  CHECK(marked_subsets(inner.map.target) == std::vector<std::uint32_t>{subset_of({1, 2, 3})});
  CHECK(counts(inner.map.source.complex()) == Sizes{4, 6, 3});
  CHECK(inner.map.source.mark_count() == 1);

  auto d4 = generator("scaled-S:delta4");
  auto t = std::vector<std::uint32_t>{subset_of({0, 2, 4}), subset_of({1, 2, 3}), subset_of({0, 1, 3}),
                                      subset_of({1, 3, 4}), subset_of({0, 1, 2})};
  std::sort(t.begin(), t.end());
  CHECK(marked_subsets(d4.map.source) == t);
  t.push_back(subset_of({0, 3, 4}));
  t.push_back(subset_of({0, 1, 4}));
  std::sort(t.begin(), t.end());
  CHECK(marked_subsets(d4.map.target) == t);

  // Delta^2 with 01 collapsed: two vertices, edges 02 and 12, one triangle
  // whose 01-face is degenerate.
  auto c2 = generator("scaled-S:collapsed:n=2");
  const auto& p = c2.map.target.complex();
  CHECK(counts(p) == Sizes{2, 2, 1});
  CHECK(p.faces(p.begin_of_dim(2))[2].degenerate());
  CHECK(c2.map.target.mark_count() == 1);
  CHECK(counts(c2.map.source.complex()) == Sizes{2, 1});
  auto c3 = generator("scaled-S:collapsed:n=3");
  CHECK(counts(c3.map.target.complex()) == Sizes{3, 5, 4, 1});
  CHECK(counts(c3.map.source.complex()) == Sizes{3, 5, 3});
  CHECK(c3.map.source.mark_count() == 1);

  auto last = generator("weak-fib:collapsed-last:n=3");
  CHECK(counts(last.map.target.complex()) == Sizes{3, 5, 4, 1});
  CHECK(last.map.target.mark_count() == 1);
  auto plain = generator("outer:collapsed-first:n=3");
  CHECK(plain.map.target.kind() == Kind::plain);
}

TEST_CASE("complicial horn markings match the vertex-containment oracle") {
  for (int n = 1; n <= 5; ++n)
    for (int i = 0; i <= n; ++i) {
      INFO("n=" << n << " i=" << i);
      auto g = generator("complicial:n=" + std::to_string(n) + ",i=" + std::to_string(i));
      std::uint32_t need = 0;
      for (int v = i - 1; v <= i + 1; ++v)
        if (v >= 0 && v <= n) need |= 1u << v;
      std::uint32_t full = (1u << (n + 1)) - 1u, opposite = full & ~(1u << i);
      std::size_t in_target = 0, in_source = 0;
      for (std::uint32_t s = 1; s <= full; ++s) {
        if (std::popcount(s) < 2 || (s & need) != need) continue;
        ++in_target;
        if (s != full && s != opposite) ++in_source;
      }
      CHECK(g.map.target.mark_count() == in_target);
      CHECK(g.map.source.mark_count() == in_source);
    }
  auto c21 = generator("complicial:n=2,i=1");
  CHECK(marked_subsets(c21.map.target) == std::vector<std::uint32_t>{subset_of({0, 1, 2})});
  auto c10 = generator("complicial:n=1,i=0");
  CHECK(counts(c10.map.source.complex()) == Sizes{1});
  CHECK(c10.map.target.mark_count() == 1);
}

TEST_CASE("thinness extensions and the reduced list") {
  for (int i = 0; i <= 2; ++i) {
    auto r = generator("thinness-2:n=2,i=" + std::to_string(i));
    auto full = generator("thinness:n=2,i=" + std::to_string(i));
    CHECK(same_map(r.map, full.map));
    CHECK(same_decoration(r.map.target, th(standard_simplex(2), 0)));
    std::vector<std::uint32_t> expect;
    for (std::uint32_t s = 1; s < 8; ++s)
      if (std::popcount(s) >= 2 && (s >> i & 1u)) expect.push_back(s);
    CHECK(marked_subsets(r.map.source) == expect);
  }
  for (int i = 0; i <= 3; ++i) {
    auto r = generator("thinness-2:n=3,i=" + std::to_string(i));
    auto full = generator("thinness:n=3,i=" + std::to_string(i));
    CHECK(same_map(r.map, full.map));
  }
  auto t = generator("thinness:n=4,i=2");
  // M_2 = simplices containing 123; M' adds the faces opposite 1 and 3.
  std::vector<std::uint32_t> m1{subset_of({1, 2, 3}),    subset_of({0, 1, 2, 3}), subset_of({0, 2, 3, 4}),
                                subset_of({1, 2, 3, 4}), subset_of({0, 1, 2, 4}), subset_of({0, 1, 2, 3, 4})};
  std::sort(m1.begin(), m1.end());
  CHECK(marked_subsets(t.map.source) == m1);
  // M'' = M_2 together with the five 3-faces, two of which contain 123.
  CHECK(t.map.target.mark_count() == 4 + 5 - 2);
}

TEST_CASE("trivializers, saturation and iota_n") {
  auto tr = generator("trivializer:k=2,n=3");
  CHECK(tr.map.source.mark_count() == 0);
  CHECK(marked_subsets(tr.map.target) == std::vector<std::uint32_t>{15});

  auto s = generator("saturation:n=-1");
  CHECK(same_decoration(s.map.source, special_object("delta3_eq")));
  CHECK(same_decoration(s.map.target, th(standard_simplex(3), 0)));
  auto eq = special_object("delta3_eq");
  CHECK(marked_subsets(eq) == std::vector<std::uint32_t>{subset_of({0, 2}), subset_of({0, 1, 2}), subset_of({1, 3}),
                                                         subset_of({0, 1, 3}), subset_of({0, 2, 3}),
                                                         subset_of({1, 2, 3}), 15});
  auto s0 = generator("saturation:n=0");
  CHECK(counts(s0.map.target.complex()) == Sizes{5, 10, 10, 5, 1});
  // th(Delta^3) * Delta^0 marks the cells meeting Delta^3 in positive dimension.
  CHECK(s0.map.target.mark_count() == 11 + 11);
  CHECK(s0.map.source.mark_count() == 7 + 7);

  auto i3 = generator("outer-anodyne:n=3");
  CHECK(marked_subsets(i3.map.target) == std::vector<std::uint32_t>{subset_of({0, 1}), subset_of({0, 1, 3})});
  CHECK(i3.map.source.mark_count() == 2);
}

TEST_CASE("marked-scaled generators") {
  auto a1 = generator("AS:last:n=1");
  CHECK(counts(a1.map.source.complex()) == Sizes{1});
  CHECK(a1.map.target.marked(a1.map.target.complex().at("01")));
  auto a4 = generator("AS:thin");
  CHECK(a4.map.source.mark_count() == 0);
  CHECK(a4.map.target.mark_count() == 1);
  CHECK(a4.map.target.kind() == Kind::marked_scaled);
  auto a3 = generator("AS:collapsed:n=2");
  CHECK(a3.map.target.mark_count() == 0);
}

TEST_CASE("special objects follow the tuple oracle") {
  // Nondegenerate simplices of Cosk_0({0,1}) are tuples without consecutive
  // repeats.
  for (int n = 0; n <= 5; ++n) {
    auto j = interval_complex(n);
    CHECK(j->coskeletal0());
    CHECK_FALSE(check_simplicial_identities(*j).has_value());
    for (int d = 0; d <= n; ++d) {
      std::size_t tuples = 0;
      for (std::uint32_t t = 0; t < (1u << (d + 1)); ++t) {
        bool ok = true;
        for (int a = 1; a <= d; ++a) ok = ok && (((t >> a) ^ (t >> (a - 1))) & 1u);
        tuples += ok;
      }
      CHECK(j->count(d) == tuples);
    }
  }
  CHECK(counts(special_object("E2").complex()) == Sizes{2, 2, 2});
  CHECK(counts(special_object("J_trunc(3)").complex()) == Sizes{2, 2, 2, 2});
  CHECK(special_object("th1_E2").mark_count() == 2);
  CHECK(special_object("J_sharp_trunc(3)").mark_count() == 2);
  CHECK(special_object("J_trunc(3)").mark_count() == 0);
  CHECK_THROWS_AS(special_object("J_trunc(x)"), ParameterError);
  CHECK_THROWS_AS(special_object("nothing"), ParameterError);
  // The face d_1 of 010 is the degenerate edge s_0(0).
  auto j = interval_complex(2);
  auto f = j->faces(j->at("010"));
  CHECK(f[1] == Simplex{j->at("0"), 2u});
}

TEST_CASE("lambda generators") {
  auto seed = std::vector<GeneratorInstance>{generator("boundary:n=1")};
  CHECK(lambda_generators(seed, 0, 1).size() == 1);

  auto l1 = lambda_generators(seed, 1, 1);
  // seed, its box, and two ends times the monos of dimension <= 1.
  auto monos = family("boundary_monos", 1);
  CHECK(l1.size() == 1 + 1 + 2 * monos.size());
  const auto& bx = l1[1].map;
  CHECK(is_mono(bx));
  CHECK_FALSE(validate(bx).has_value());

  // Direct colimit: {0,1} x Delta^1  <-  {0,1} x dDelta^1  ->  J x dDelta^1.
  auto j = sharp(interval_complex(2), Kind::scaled);
  auto ends = flat(interval_complex(0), Kind::scaled);
  auto d1 = flat(standard_simplex(1), Kind::scaled);
  auto bd = seed[0].map.source;
  auto ends_d1 = product_scaled(ends, d1);
  auto ends_bd = product_scaled(ends, bd);
  auto j_bd = product_scaled(j, bd);
  auto to_left = product_map(ends_bd.product, ends_d1.product, identity_map(ends.carrier()), seed[0].map.underlying());
  SimplicialMap ends_in_j{ends.carrier(), j.carrier(), {{0, 0}, {1, 0}}};
  auto to_right = product_map(ends_bd.product, j_bd.product, ends_in_j, identity_map(bd.carrier()));
  auto po = pushout(decorated(to_left, ends_bd.object, ends_d1.object), decorated(to_right, ends_bd.object, j_bd.object));
  CHECK(counts(po.object.complex()) == counts(bx.source.complex()));
  CHECK(find_isomorphism(po.object, bx.source).has_value());

  auto only_ends = lambda_generators({}, 3, 1);
  CHECK(only_ends.size() == 2 * monos.size());
  for (const auto& g : only_ends) CHECK(g.name.rfind("box", 0) == 0);
}
