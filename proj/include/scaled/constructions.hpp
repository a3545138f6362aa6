#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "scaled/kernel.hpp"
#include "scaled/presentation.hpp"

namespace scaled {

struct DecoratedProduct {
  Product product;
  Decorated object;
};

// Cartesian product; a cell of a tracked dimension is distinguished iff both
// projections are.  Both factors must have the same kind.
DecoratedProduct product_scaled(const Decorated& x, const Decorated& y);

// Gray product of plain simplicial sets: a triangle is thin iff both its
// projections are degenerate and either its 12-edge is degenerate in K or its
// 01-edge is degenerate in L.
DecoratedProduct gray_product(const ComplexPtr& k, const ComplexPtr& l);
bool gray_thin(const Product& p, CellIndex triangle);

struct DecoratedJoin {
  Join join;
  Decorated object;
};

// Join of a marked-scaled set with a scaled set; thin triangles are T_Z, the
// triangles (e, k) with e a marked edge of Z and k a vertex of K, and T_K.
DecoratedJoin join_marked_scaled(const Decorated& z, const Decorated& k);

// Marked-scaled set of join-extensions Delta^n * K -> X of f, together with
// the projection to X.
struct Slice {
  std::shared_ptr<Presentation> presentation;
  Decorated object;
  DecoratedMap projection;
  // Per dimension n: the join Delta^n * K used to read cells.
  std::vector<Join> joins;
};

// `max_dim` < 0 picks the default bound (dim X for a point K, otherwise
// (dim X + 1) * (#cells of K + 1) - 1).
Slice slice(const Decorated& x, const DecoratedMap& f, int max_dim = -1);
Slice slice_at(const Decorated& x, CellIndex y, int max_dim = -1);

struct MappingSpace {
  std::shared_ptr<Presentation> presentation;
  Decorated object;  // marked
};

// Maps Delta^1 x_gr Delta^n -> C constant at x on {0} x Delta^n and at y on
// {1} x Delta^n; an edge is marked iff both prism triangles land thin.
// `max_dim` < 0 means dim C.
MappingSpace hom_gray(const Decorated& c, CellIndex x, CellIndex y, int max_dim = -1);
// Fiber over x of the slice over y, with its marking.
MappingSpace hom_slice(const Decorated& c, CellIndex x, CellIndex y, int max_dim = -1);

struct Comparison {
  MappingSpace source;  // hom_slice
  MappingSpace target;  // hom_gray
  DecoratedMap map;
  std::optional<std::string> problem;  // set when the map is not a valid marked map
  bool vertex_bijective = false;
  bool detects_marked_edges = false;
};

// Pullback along Delta^1 x_gr Delta^n -> Delta^{n+1}, (i,0) -> i, (i,1) -> n+1.
Comparison hom_comparison(const Decorated& c, CellIndex x, CellIndex y, int max_dim = -1);

struct PushoutProduct {
  DecoratedProduct ambient;  // B x D
  Decorated corner;          // A x D union B x C
  DecoratedMap map;          // corner -> B x D
};

// Pushout-product of two decorated monos A -> B and C -> D of the same kind.
PushoutProduct pushout_product(const DecoratedMap& i, const DecoratedMap& j);

}  // namespace scaled
