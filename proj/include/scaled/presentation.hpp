#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <unordered_map>
#include <vector>

#include "scaled/simplicial.hpp"

namespace scaled {

// Opaque description of one simplex of a simplicial set given by its
// simplicial structure (all simplices, faces, degeneracies).
using Key = std::vector<std::int64_t>;

struct KeyHash {
  std::size_t operator()(const Key& k) const noexcept {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (auto v : k) {
      h ^= std::uint64_t(v);
      h *= 0x100000001b3ull;
    }
    return std::size_t(h);
  }
};

inline std::int64_t encode(Simplex s) { return (std::int64_t(s.cell) << 32) | std::int64_t(s.repeats); }
inline Simplex decode(std::int64_t v) { return {CellIndex(v >> 32), std::uint32_t(v & 0xffffffffll)}; }
Key encode(const std::vector<Simplex>& a);
std::vector<Simplex> decode(const Key& k);

struct PresentationSpec {
  int max_dim = 0;
  // The n-simplices; must contain every nondegenerate one, may contain
  // degenerate ones (they are filtered out).
  std::function<std::vector<Key>(int n)> simplices;
  std::function<Key(const Key&, int n, int i)> face;
  std::function<Key(const Key&, int n, int j)> degeneracy;
  std::function<std::string(const Key&, int n)> id;
};

// Normal-form complex of a simplicial set described by its operators, up to
// dimension max_dim.  A simplex x is degenerate iff x == s_j d_j x for some j.
class Presentation {
 public:
  explicit Presentation(PresentationSpec spec);

  const ComplexPtr& complex() const { return complex_; }
  const Key& key(CellIndex c) const { return keys_[std::size_t(c)]; }
  // Normal form of an arbitrary n-simplex; throws ReferenceError if its
  // nondegenerate part lies above max_dim or is missing.
  Simplex locate(const Key& k, int n) const;
  bool is_degenerate(const Key& k, int n) const;
  const PresentationSpec& spec() const { return spec_; }

 private:
  PresentationSpec spec_;
  ComplexPtr complex_;
  std::vector<Key> keys_;
  std::vector<std::unordered_map<Key, CellIndex, KeyHash>> index_;
};

}  // namespace scaled
