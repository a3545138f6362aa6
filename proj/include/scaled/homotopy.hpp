#pragma once

#include <optional>
#include <vector>

#include "scaled/enumerate.hpp"
#include "scaled/kernel.hpp"

namespace scaled {

// A witness that an edge v is an equivalence: a map th_1(E_2) -> X sending
// the edge 01 to v.  Triangles count as thin when distinguished in X.
std::optional<DecoratedMap> equivalence_witness(const Decorated& x, Simplex edge);

// Edges admitting a witness, as simplices in canonical order: the degenerate
// edge of every vertex first, then nondegenerate edges by cell index.  X must be
// scaled or stratified.
std::vector<Simplex> equivalence_edges(const Decorated& x, int jobs = 1);
bool is_equivalence(const Decorated& x, Simplex edge);

// Largest subcomplex all of whose triangles are thin.
Subcomplex core(const Decorated& x);

// th_2(X, T_X with eq_X) as a stratified set.
Decorated fibrant_replacement(const Decorated& x, int jobs = 1);

struct NormalizedTriangle {
  Simplex upsilon;    // 3-simplex with 012 degenerate, 023 = alpha, 123 thin
  Simplex alpha_hat;  // its 013 face
};

// Throws FibrancyError when one of the two fillers is missing.
NormalizedTriangle normalize_triangle(const Decorated& c, Simplex alpha);

}  // namespace scaled
