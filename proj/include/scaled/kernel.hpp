#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "scaled/decoration.hpp"
#include "scaled/enumerate.hpp"
#include "scaled/simplicial.hpp"

namespace scaled {

// ---- standard complexes -------------------------------------------------

// Id of the face of a standard simplex spanned by a vertex subset.
std::string subset_id(std::uint32_t subset, int n);

// The subcomplex of Delta^n consisting of the nonempty subsets accepted by `keep`
// (assumed closed under taking nonempty subsets).
ComplexPtr simplex_subcomplex(int n, const std::function<bool(std::uint32_t)>& keep);

ComplexPtr standard_simplex(int n);
ComplexPtr standard_boundary(int n);
ComplexPtr standard_horn(int n, int i);
ComplexPtr standard_face(int n, std::uint32_t subset);  // Delta^S inside Delta^n
ComplexPtr standard_point();
ComplexPtr empty_complex();

// Looks up the face of a standard-simplex-like complex spanned by a vertex
// subset (by id).  Returns nullopt if that cell is absent.
std::optional<CellIndex> find_subset(const FiniteSimplicialSet& x, std::uint32_t subset, int n);

// Number of a vertex of a standard simplex (its id).
int vertex_number(const FiniteSimplicialSet& x, CellIndex v);

// The map Delta^m -> Delta^n induced by a monotone theta: [m] -> [n].
SimplicialMap simplex_operator(int m, int n, const std::vector<int>& theta);
SimplicialMap coface_map(int n, int i);        // Delta^{n-1} -> Delta^n, skipping i
SimplicialMap codegeneracy_map(int n, int j);  // Delta^{n+1} -> Delta^n, repeating j

// ---- vertex-determined lookups ------------------------------------------

// For complexes in which each nondegenerate simplex is determined by its
// vertex sequence (nerves of posets and their products, joins, subcomplexes).
class VertexLookup {
 public:
  explicit VertexLookup(const FiniteSimplicialSet& x);
  // The simplex with this (weakly increasing, possibly repeating) vertex
  // sequence, or nullopt.
  std::optional<Simplex> find(const std::vector<CellIndex>& seq) const;
  Simplex at(const std::vector<CellIndex>& seq) const;
  bool ambiguous() const { return ambiguous_; }

 private:
  struct Hash {
    std::size_t operator()(const std::vector<CellIndex>& v) const noexcept;
  };
  std::unordered_map<std::vector<CellIndex>, CellIndex, Hash> cells_;
  bool ambiguous_ = false;
};

// ---- products -------------------------------------------------------------

struct Product {
  ComplexPtr complex;
  SimplicialMap pr1, pr2;
  std::vector<std::pair<Simplex, Simplex>> parts;  // per product cell

  // The product simplex with the given components (both of the same dimension).
  Simplex pair(Simplex a, Simplex b) const;

  struct PairHash {
    std::size_t operator()(const std::pair<Simplex, Simplex>& p) const noexcept {
      return SimplexHash{}(p.first) * 1000003u ^ SimplexHash{}(p.second);
    }
  };
  std::unordered_map<std::pair<Simplex, Simplex>, CellIndex, PairHash> lookup;
};

Product product(const ComplexPtr& x, const ComplexPtr& y);

// (u x v) between products.
SimplicialMap product_map(const Product& from, const Product& to, const SimplicialMap& u, const SimplicialMap& v);

// ---- joins ------------------------------------------------------------------

struct JoinCell {
  CellIndex left = -1;   // cell of X, or -1
  CellIndex right = -1;  // cell of Y, or -1
};

struct Join {
  ComplexPtr complex;
  SimplicialMap left, right;  // inclusions X -> X*Y, Y -> X*Y
  std::vector<JoinCell> parts;
  std::map<std::pair<CellIndex, CellIndex>, CellIndex> lookup;

  CellIndex cell(CellIndex left_cell, CellIndex right_cell) const;
};

Join join(const ComplexPtr& x, const ComplexPtr& y);

// (u * v) between joins.
SimplicialMap join_map(const Join& from, const Join& to, const SimplicialMap& u, const SimplicialMap& v);

// ---- pushouts ---------------------------------------------------------------

struct Pushout {
  Decorated object;
  DecoratedMap from_x, from_y;  // cocone maps X -> P, Y -> P
  // For each cell of P: the cell of Y it is, or (if -1) the cell of X.
  std::vector<CellIndex> from_y_cell;
  std::vector<CellIndex> from_x_cell;

  // The map P -> T induced by u: X -> T and v: Y -> T (assumed compatible).
  DecoratedMap induced(const DecoratedMap& u, const DecoratedMap& v) const;
};

// Pushout of X <-f- A -g-> Y.  One leg must be a mono.  Marks are the images
// of the marks of X and of Y.
Pushout pushout(const DecoratedMap& f, const DecoratedMap& g);
Pushout pushout(const SimplicialMap& f, const SimplicialMap& g);

// ---- misc -------------------------------------------------------------------

ComplexPtr opposite(const ComplexPtr& x);
Decorated opposite(const Decorated& x);
DecoratedMap opposite(const DecoratedMap& f, const Decorated& source_op, const Decorated& target_op);

// Subcomplex on the cells flagged in `keep` (closed under faces automatically)
// together with its inclusion.
struct Subcomplex {
  ComplexPtr complex;
  SimplicialMap inclusion;
  std::vector<CellIndex> index_in_sub;  // per cell of the ambient complex, or -1
};
Subcomplex subcomplex(const ComplexPtr& x, std::vector<char> keep);
std::vector<char> face_closure(const FiniteSimplicialSet& x, std::vector<char> keep);

// The sub-decorated set on the image of a mono, with the marks of `sub_marks`.
Decorated restrict_decoration(const Decorated& ambient, const Subcomplex& sub);

// n-skeleton.
ComplexPtr skeleton(const ComplexPtr& x, int n);

// Isomorphism search: an isomorphism a -> b extending a partial assignment and
// matching decorations exactly.
std::optional<Assignment> find_isomorphism(const Decorated& a, const Decorated& b, const PartialAssignment& partial = {});

}  // namespace scaled
