#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "scaled/kernel.hpp"

namespace scaled {

// Nothing distinguished.
Decorated flat(const ComplexPtr& x, Kind kind);
// Every cell of every tracked dimension distinguished (for scaled sets: every
// triangle thin).
Decorated sharp(const ComplexPtr& x, Kind kind = Kind::scaled);
// Stratification marking exactly the cells of dimension > k.
Decorated th(const ComplexPtr& x, int k);
// Union of an existing stratification with all cells of dimension > k.
Decorated bold_th(const Decorated& x, int k);
// Marks the listed cells; throws ReferenceError on unknown ids.
Decorated explicit_decoration(const ComplexPtr& x, Kind kind, const std::vector<std::string>& ids);

// Scaled set viewed as a stratified set, and back (keeps dimension-2 marks).
Decorated iota(const Decorated& scaled_set);
Decorated underlying_scaled(const Decorated& stratified_set);
// Forgets to the marks of dimension 1.
Decorated underlying_marked(const Decorated& x);

// Compares carriers and distinguished cells regardless of kind.  Comparing a
// scaled set with a stratified set on the same carrier writes a warning to
// `warn` since the flat and sharp notations mean different things there.
bool same_marks(const Decorated& a, const Decorated& b, std::ostream* warn = nullptr);

struct StratifiedJoin {
  Join join;
  Decorated object;
};
// A join cell is marked iff one of its two components is marked.
StratifiedJoin join_stratified(const Decorated& x, const Decorated& y);

// Largest subcomplex all of whose edges are marked.
Subcomplex marked_core(const Decorated& x);

}  // namespace scaled
