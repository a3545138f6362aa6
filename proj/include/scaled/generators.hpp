#pragma once

#include <map>
#include <string>
#include <vector>

#include "scaled/kernel.hpp"

namespace scaled {

// One member of a generating family, regenerable from its name.
struct GeneratorInstance {
  std::string family;       // e.g. "scaled_S"
  std::string name;         // e.g. "scaled-S:inner:n=3,i=1"
  std::vector<int> params;  // parameter values in name order
  DecoratedMap map;         // a mono
  int dimension() const { return map.target.complex().max_dim(); }
};

// Family identifiers accepted by family() and family_members():
//   scaled_S, scaled_S_inner, scaled_S_13, weak_fib, outer_collapsed,
//   cartesian_horn, complicial_horn, thinness, thinness_2trivial,
//   trivializer(k), saturation, marked_scaled_AS, outer_anodyne, prism_horns,
//   boundary_monos.
// Hyphens and underscores are interchangeable; "trivializer:k=2" is also accepted.
std::vector<std::string> family_names();

// Names of all members whose dimension is <= nmax, in a fixed order.
std::vector<std::string> family_members(const std::string& family, int nmax);
std::vector<GeneratorInstance> family(const std::string& family, int nmax);

// Rebuilds an instance from its name; throws ParameterError on unknown names
// or illegal parameters.
GeneratorInstance generator(const std::string& name);
// Whether a named instance is a member of the family (at any dimension).
bool in_family(const std::string& family, const std::string& name);

// Named decorated objects: delta3_eq, E2, th1_E2, J_trunc(N), J_sharp_trunc(N).
Decorated special_object(const std::string& name);
// sk_N of the 0-coskeletal simplicial set on {0,1}; flagged 0-coskeletal.
ComplexPtr interval_complex(int n);

// Iterated pushout-products with the cylinder {0,1} -> J_sharp (truncated to
// dimension nmax + 1), unioned with the maps {e} x B u J x A -> J x B for the
// boundary monos A -> B of dimension <= nmax.  Depth 0 returns `seed`.
std::vector<GeneratorInstance> lambda_generators(const std::vector<GeneratorInstance>& seed, int depth, int nmax,
                                                 Kind kind = Kind::scaled);

// Helpers shared with other modules.
// The inclusion of the subcomplex on `keep` (face-closed), with restricted marks.
DecoratedMap inclusion_of(const Decorated& ambient, const std::vector<char>& keep);
// Delta^n with the listed faces (vertex subsets) distinguished.
Decorated simplex_with(int n, Kind kind, const std::vector<std::uint32_t>& subsets);
std::uint32_t subset_of(std::initializer_list<int> vertices);

}  // namespace scaled
