#pragma once

#include <cstdlib>
#include <random>
#include <string>
#include <vector>

#include "scaled/kernel.hpp"

namespace testing_helpers {

using Sizes = std::vector<std::size_t>;

inline std::vector<std::size_t> counts(const scaled::FiniteSimplicialSet& x) {
  std::vector<std::size_t> out;
  for (int d = 0; d <= x.max_dim(); ++d) out.push_back(x.count(d));
  return out;
}

inline std::string fixtures_dir() {
  const char* env = std::getenv("SCALED_FIXTURES");
  return env ? env : "fixtures";
}

// Number of strictly increasing chains of each length in a finite poset given
// by its order relation; index k holds the chains with k+1 elements.
inline std::vector<std::size_t> chain_counts(int size, const std::vector<std::vector<bool>>& less) {
  std::vector<std::size_t> out;
  std::vector<std::vector<std::size_t>> ending(1, std::vector<std::size_t>(std::size_t(size), 1));
  out.push_back(std::size_t(size));
  for (;;) {
    std::vector<std::size_t> next(std::size_t(size), 0);
    std::size_t total = 0;
    for (int b = 0; b < size; ++b)
      for (int a = 0; a < size; ++a)
        if (less[std::size_t(a)][std::size_t(b)]) next[std::size_t(b)] += ending.back()[std::size_t(a)];
    for (auto v : next) total += v;
    if (total == 0) break;
    out.push_back(total);
    ending.push_back(next);
  }
  return out;
}

// A random face-closed family of subsets of [n]: the union of random simplices.
inline scaled::ComplexPtr random_subcomplex(std::mt19937& rng, int n, int generators) {
  std::vector<std::uint32_t> gens;
  std::uniform_int_distribution<std::uint32_t> pick(1u, (1u << (n + 1)) - 1u);
  for (int g = 0; g < generators; ++g) gens.push_back(pick(rng));
  return scaled::simplex_subcomplex(n, [&](std::uint32_t s) {
    for (auto g : gens)
      if ((s & ~g) == 0) return true;
    return false;
  });
}

// Maps x -> y counted by brute force over vertex assignments; valid when y is
// a subcomplex of a standard simplex, so a simplex is its vertex sequence.
inline std::size_t vertex_assignment_count(const scaled::FiniteSimplicialSet& x, const scaled::FiniteSimplicialSet& y) {
  using namespace scaled;
  VertexLookup ly(y);
  std::size_t count = 0;
  std::size_t nx = x.count(0), ny = y.count(0);
  if (nx == 0) return 1;
  std::vector<std::size_t> v(nx, 0);
  for (;;) {
    bool ok = true;
    for (CellIndex c = 0; c < x.size() && ok; ++c) {
      std::vector<CellIndex> img;
      for (auto w : x.vertices_of_cell(c)) img.push_back(CellIndex(v[std::size_t(w)]));
      ok = ly.find(img).has_value();
    }
    if (ok) ++count;
    std::size_t k = 0;
    while (k < nx && ++v[k] == ny) v[k++] = 0;
    if (k == nx) break;
  }
  return count;
}

}  // namespace testing_helpers
