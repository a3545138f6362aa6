#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "scaled/decoration.hpp"

namespace scaled {

using Assignment = std::vector<Simplex>;
using PartialAssignment = std::vector<std::optional<Simplex>>;

// A search for maps source -> target.
//  * `fixed` pins images of some source cells (faces of pinned cells are
//    pinned implicitly);
//  * `over`, when set, is a map target -> base and `over_required[c]` is the
//    base simplex the image of source cell c must lie over;
//  * decorations are respected unless `check_decorations` is false.
struct MapSearch {
  const Decorated* source = nullptr;
  const Decorated* target = nullptr;
  PartialAssignment fixed;
  const DecoratedMap* over = nullptr;
  std::vector<Simplex> over_required;
  bool check_decorations = true;
  // Only nondegenerate, pairwise distinct images (a mono).
  bool injective = false;
};

// Visits every solution in search order (not canonical); stop by returning false.
void search_maps(const MapSearch& search, const std::function<bool(const Assignment&)>& visit);
// All solutions, sorted into canonical order.
std::vector<Assignment> all_maps(const MapSearch& search);
std::optional<Assignment> first_map(const MapSearch& search);
std::size_t count_maps(const MapSearch& search);

PartialAssignment partial_from_ids(const FiniteSimplicialSet& source, const FiniteSimplicialSet& target,
                                   const std::map<std::string, std::string>& ids);

std::vector<SimplicialMap> enumerate_maps(const ComplexPtr& source, const ComplexPtr& target,
                                          const PartialAssignment& partial = {});
std::vector<DecoratedMap> enumerate_maps(const Decorated& source, const Decorated& target,
                                         const PartialAssignment& partial = {});

}  // namespace scaled
