#pragma once

#include <array>
#include <bit>
#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace scaled {

using CellIndex = std::int32_t;

// A simplex in Eilenberg-Zilber form: a degeneracy applied to a nondegenerate
// cell.  The degeneracy is a monotone surjection s: [k] -> [d] recorded by its
// repeat positions; bit j (1 <= j <= k) is set iff s(j) == s(j-1).  The empty
// mask is the identity, so a nondegenerate cell c is Simplex{c, 0}.
struct Simplex {
  CellIndex cell = -1;
  std::uint32_t repeats = 0;

  bool degenerate() const { return repeats != 0; }
  friend auto operator<=>(const Simplex&, const Simplex&) = default;
};

struct SimplexHash {
  std::size_t operator()(const Simplex& s) const noexcept {
    return std::hash<std::uint64_t>{}((std::uint64_t(std::uint32_t(s.cell)) << 32) ^ s.repeats);
  }
};

struct SimplexVectorHash {
  std::size_t operator()(const std::vector<Simplex>& v) const noexcept {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (const auto& s : v) {
      h ^= (std::uint64_t(std::uint32_t(s.cell)) << 32) ^ s.repeats;
      h *= 0x100000001b3ull;
    }
    return std::size_t(h);
  }
};

inline constexpr int kMaxDimension = 30;

// Helpers for monotone surjections encoded as repeat masks.
namespace degeneracy {

using Values = std::array<int, kMaxDimension + 2>;

inline int count(std::uint32_t repeats) { return std::popcount(repeats); }

// Fills out[0..k] with the values of the surjection.
inline void values(std::uint32_t repeats, int k, int* out) {
  out[0] = 0;
  for (int j = 1; j <= k; ++j) out[j] = out[j - 1] + (((repeats >> j) & 1u) ? 0 : 1);
}

inline std::uint32_t mask_of(const int* v, int k) {
  std::uint32_t m = 0;
  for (int j = 1; j <= k; ++j)
    if (v[j] == v[j - 1]) m |= (1u << j);
  return m;
}

// Normal-form degeneracy word s_{i1} ... s_{ir}, i1 > ... > ir.
std::vector<int> word(std::uint32_t repeats);
// Inverse of word(); throws ParameterError unless strictly decreasing and
// admissible for a simplex of the given target dimension.
std::uint32_t from_word(const std::vector<int>& word, int target_dim);

}  // namespace degeneracy

// Boundary lookup for all (possibly degenerate) k-simplices of a complex.
struct BoundaryIndex {
  std::vector<Simplex> all;  // every k-simplex, sorted
  std::unordered_map<std::vector<Simplex>, std::vector<Simplex>, SimplexVectorHash> by_boundary;
};

class ComplexBuilder;

// A finite simplicial set presented by its nondegenerate cells and their faces.
// Cells are stored sorted by (dimension, id); this is the canonical order used
// everywhere for enumeration and output.
class FiniteSimplicialSet {
 public:
  FiniteSimplicialSet();

  int max_dim() const { return int(dim_start_.size()) - 2; }
  CellIndex size() const { return CellIndex(dims_.size()); }
  bool empty() const { return dims_.empty(); }
  int dim(CellIndex c) const { return dims_[std::size_t(c)]; }
  const std::string& id(CellIndex c) const { return ids_[std::size_t(c)]; }
  std::span<const Simplex> faces(CellIndex c) const;
  std::span<const CellIndex> vertices_of_cell(CellIndex c) const;

  CellIndex begin_of_dim(int n) const;
  CellIndex end_of_dim(int n) const;
  std::size_t count(int n) const { return std::size_t(end_of_dim(n) - begin_of_dim(n)); }

  std::optional<CellIndex> find(std::string_view id) const;
  CellIndex at(std::string_view id) const;  // throws ReferenceError

  int dim_of(Simplex s) const { return dim(s.cell) + degeneracy::count(s.repeats); }
  Simplex face(Simplex s, int i) const;
  Simplex degeneracy(Simplex s, int j) const;
  // s composed with the degeneracy `repeats : [k] -> [dim_of(s)]`.
  Simplex degenerate(Simplex s, std::uint32_t repeats, int k) const;
  // s composed with an arbitrary monotone map theta: [k] -> [dim_of(s)].
  Simplex apply(Simplex s, std::span<const int> theta) const;
  // The face of s spanned by the listed (increasing) vertex positions.
  Simplex restrict(Simplex s, std::span<const int> positions) const;
  std::vector<CellIndex> vertices(Simplex s) const;
  std::vector<Simplex> boundary(Simplex s) const;

  // Text form "id" or "s<word>(id)".
  std::string ref_string(Simplex s) const;

  // Set for skeleta of 0-coskeletal simplicial sets: every vertex tuple spans
  // exactly one simplex (up to the stored dimension).
  bool coskeletal0() const { return coskeletal0_; }

  const BoundaryIndex& boundary_index(int k) const;

 private:
  friend class ComplexBuilder;
  struct Cache;

  std::vector<int> dims_;
  std::vector<std::string> ids_;
  std::vector<std::uint32_t> face_start_;
  std::vector<Simplex> faces_;
  std::vector<std::uint32_t> vert_start_;
  std::vector<CellIndex> verts_;
  std::vector<CellIndex> dim_start_;
  std::unordered_map<std::string, CellIndex> by_id_;
  bool coskeletal0_ = false;
  std::shared_ptr<Cache> cache_;
};

using ComplexPtr = std::shared_ptr<const FiniteSimplicialSet>;

// Incremental construction.  Faces refer to earlier builder handles; cells are
// re-sorted into canonical order by finish().
class ComplexBuilder {
 public:
  struct Ref {
    int handle;
    std::uint32_t repeats = 0;
  };

  int add_cell(std::string id, int dim, const std::vector<Ref>& faces);
  int size() const { return int(dims_.size()); }
  int dim(int handle) const { return dims_[std::size_t(handle)]; }
  const std::string& id(int handle) const { return ids_[std::size_t(handle)]; }
  bool has_id(const std::string& id) const { return by_id_.count(id) != 0; }
  int handle_of(const std::string& id) const;
  void set_coskeletal0(bool v) { coskeletal0_ = v; }

  // `final_index[h]` receives the canonical index of handle h when non-null.
  FiniteSimplicialSet finish(std::vector<CellIndex>* final_index = nullptr) const;
  ComplexPtr finish_shared(std::vector<CellIndex>* final_index = nullptr) const;

 private:
  std::vector<int> dims_;
  std::vector<std::string> ids_;
  std::vector<std::vector<Ref>> faces_;
  std::unordered_map<std::string, int> by_id_;
  bool coskeletal0_ = false;
};

// Exhaustive check of d_i d_j = d_{j-1} d_i on every cell; returns a
// description of the first violation, if any.
std::optional<std::string> check_simplicial_identities(const FiniteSimplicialSet& x);

// A map of simplicial sets given by the image of every nondegenerate cell.
struct SimplicialMap {
  ComplexPtr source;
  ComplexPtr target;
  std::vector<Simplex> assign;

  Simplex apply(Simplex s) const;
};

std::optional<std::string> check_simplicial_map(const SimplicialMap& f);
bool is_mono(const SimplicialMap& f);
SimplicialMap compose(const SimplicialMap& g, const SimplicialMap& f);  // g after f
SimplicialMap identity_map(const ComplexPtr& x);

// Canonical cell-wise comparison of two complexes by ids and face data.
bool same_complex(const FiniteSimplicialSet& a, const FiniteSimplicialSet& b);

}  // namespace scaled
