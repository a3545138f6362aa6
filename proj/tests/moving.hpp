#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <optional>
#include <random>
#include <vector>

#include "scaled/decompose.hpp"
#include "scaled/strat.hpp"

namespace testing_helpers {

inline std::vector<int> positions(std::uint32_t subset) {
  std::vector<int> out;
  for (int v = 0; v < 32; ++v)
    if ((subset >> v) & 1u) out.push_back(v);
  return out;
}

// A random monotone surjection [n] -> [m].
inline std::vector<int> random_surjection(std::mt19937& rng, int n) {
  std::vector<int> rho(std::size_t(n + 1), 0);
  std::bernoulli_distribution jump(0.5);
  for (int j = 1; j <= n; ++j) rho[std::size_t(j)] = rho[std::size_t(j - 1)] + (jump(rng) ? 1 : 0);
  return rho;
}

inline scaled::FaceSet random_face_set(std::mt19937& rng, int n, const scaled::FaceSet& inside, int generators) {
  std::vector<std::uint32_t> faces, gens;
  for (std::uint32_t s = 1; s < inside.has.size(); ++s)
    if (inside.has[s]) faces.push_back(s);
  if (faces.empty()) return scaled::FaceSet::none(n);
  std::uniform_int_distribution<std::size_t> pick(0, faces.size() - 1);
  for (int g = 0; g < generators; ++g) gens.push_back(faces[pick(rng)]);
  return scaled::FaceSet::generated(n, gens);
}

// A random map from the simplices of `b` into c, as values on {1} x B in the
// prism, drawn uniformly from all maps.
inline std::optional<scaled::PartialAssignment> random_end_map(std::mt19937& rng, const scaled::Decorated& c,
                                                               const scaled::FaceSet& b, const scaled::Prism& p) {
  using namespace scaled;
  const int n = p.n;
  auto src = flat(simplex_subcomplex(n, [&](std::uint32_t s) { return b.contains(s); }), Kind::scaled);
  MapSearch ms;
  ms.source = &src;
  ms.target = &c;
  ms.check_decorations = false;
  ms.fixed.assign(std::size_t(src.complex().size()), std::nullopt);
  auto all = all_maps(ms);
  if (all.empty()) return std::nullopt;
  const auto& pick = all[std::uniform_int_distribution<std::size_t>(0, all.size() - 1)(rng)];
  PartialAssignment g(std::size_t(p.product.complex->size()));
  for (std::uint32_t s = 1; s < b.has.size(); ++s)
    if (b.has[s]) g[std::size_t(p.cell(s << (n + 1)))] = pick[std::size_t(*find_subset(src.complex(), s, n))];
  return g;
}

struct MovingInstance {
  scaled::SigmaRho sr;
  scaled::FaceSet a, b;
  scaled::Prism p;
  scaled::PartialAssignment g;  // on Delta^1 x A u {1} x B
};

// g on Delta^1 x A is itself produced by extending from the empty set, then
// joined with a random end map on {1} x B.
inline std::optional<MovingInstance> random_moving_instance(std::mt19937& rng, const scaled::Decorated& c, int n) {
  using namespace scaled;
  MovingInstance m{sigma_rho(random_surjection(rng, n)), FaceSet::none(n), FaceSet::none(n), make_prism(n), {}};
  bool found = false;
  for (int tries = 0; tries < 64 && !found; ++tries) {
    m.b = random_face_set(rng, n, FaceSet::full(n), 1 + int(rng() % 2));
    m.a = rng() % 3 == 0 ? FaceSet::none(n) : random_face_set(rng, n, m.b, 1 + int(rng() % 2));
    found = admissible(m.sr, m.a) && admissible(m.sr, m.b);
  }
  if (!found) return std::nullopt;
  auto end = random_end_map(rng, c, m.b, m.p);
  if (!end) return std::nullopt;
  PartialAssignment on_a(end->size());
  for (std::size_t cell = 0; cell < end->size(); ++cell) {
    std::uint32_t ch = m.p.chain_of[cell];
    if (m.p.lower(ch) == 0 && m.a.contains(m.p.upper(ch))) on_a[cell] = (*end)[cell];
  }
  auto h_a = extend_sigma_rho_transformation(c, m.sr, FaceSet::none(n), m.a, m.p, on_a);
  m.g = *end;
  for (std::size_t cell = 0; cell < end->size(); ++cell)
    if (m.a.contains(m.p.projection(m.p.chain_of[cell]))) m.g[cell] = h_a[cell];
  return m;
}

// The three transformation conditions restated through face and degeneracy
// operators: the retraction to the neighbour of (0, i) is the degeneracy that
// repeats it.  Returns the count of violations of each condition.
inline std::array<int, 3> condition_violations(const scaled::Decorated& c, const scaled::SigmaRho& sr, const scaled::FaceSet& a,
                                              const scaled::Prism& p, const scaled::PartialAssignment& h) {
  using namespace scaled;
  const auto& cx = c.complex();
  const int n = p.n;
  std::array<int, 3> bad{0, 0, 0};
  for (std::uint32_t j = 1; j < p.cell_of.size(); ++j) {
    if (p.cell(j) < 0 || !a.contains(p.projection(j)) || p.lower(j) == 0) continue;
    Simplex v = *h[std::size_t(p.cell(j))];
    int i = 31 - std::countl_zero(p.lower(j));
    int q = std::popcount(p.lower(j)) - 1;  // position of (0, i)
    bool in_image = std::find(sr.sigma.begin(), sr.sigma.end(), i) != sr.sigma.end();
    if (in_image && p.upper(j) == (1u << i)) bad[0] += cx.degeneracy(cx.face(v, q), q) != v;
    if (!in_image && i > 0 && ((p.lower(j) >> (i - 1)) & 1u) && (p.upper(j) | (1u << i)) == (1u << i))
      bad[1] += cx.degeneracy(cx.face(v, q), q - 1) != v;
  }
  for (int i = 0; i <= n; ++i)
    for (int k = i + 1; k <= n; ++k)
      if (a.contains((1u << i) | (1u << k))) {
        std::uint32_t t = Prism::vertex(0, i, n) | Prism::vertex(1, i, n) | Prism::vertex(1, k, n);
        bad[2] += !c.distinguished(*h[std::size_t(p.cell(t))]);
      }
  return bad;
}

// h is a simplicial map on the cells over `b`.
inline bool simplicial_on(const scaled::Decorated& c, const scaled::FaceSet& b, const scaled::Prism& p,
                          const scaled::PartialAssignment& h) {
  using namespace scaled;
  const auto& px = *p.product.complex;
  for (CellIndex cell = 0; cell < px.size(); ++cell) {
    if (!b.contains(p.projection(p.chain_of[std::size_t(cell)]))) continue;
    if (!h[std::size_t(cell)] || c.complex().dim_of(*h[std::size_t(cell)]) != px.dim(cell)) return false;
    for (int f = 0; px.dim(cell) > 0 && f <= px.dim(cell); ++f) {
      Simplex s = px.face({cell, 0}, f);
      if (!h[std::size_t(s.cell)]) return false;
      if (c.complex().degenerate(*h[std::size_t(s.cell)], s.repeats, px.dim_of(s)) != c.complex().face(*h[std::size_t(cell)], f))
        return false;
    }
  }
  return true;
}

}  // namespace testing_helpers
