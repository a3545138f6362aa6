#include "scaled/strat.hpp"

#include "scaled/errors.hpp"

namespace scaled {

Decorated flat(const ComplexPtr& x, Kind kind) { return Decorated(x, kind); }

Decorated sharp(const ComplexPtr& x, Kind kind) {
  Decorated d(x, kind);
  for (CellIndex c = 0; c < x->size(); ++c)
    if (tracks(kind, x->dim(c))) d.mark(c);
  return d;
}

Decorated th(const ComplexPtr& x, int k) {
  if (k < 0) throw ParameterError("th(k) needs k >= 0");
  Decorated d(x, Kind::stratified);
  for (CellIndex c = 0; c < x->size(); ++c)
    if (x->dim(c) > k) d.mark(c);
  return d;
}

Decorated bold_th(const Decorated& x, int k) {
  if (k < 0) throw ParameterError("th(k) needs k >= 0");
  Decorated d = x.with_kind(Kind::stratified);
  const auto& cx = x.complex();
  for (CellIndex c = 0; c < cx.size(); ++c)
    if (cx.dim(c) > k) d.mark(c);
  return d;
}

Decorated explicit_decoration(const ComplexPtr& x, Kind kind, const std::vector<std::string>& ids) {
  Decorated d(x, kind);
  for (const auto& id : ids) d.mark(id);
  return d;
}

Decorated iota(const Decorated& scaled_set) { return scaled_set.with_kind(Kind::scaled).with_kind(Kind::stratified); }

Decorated underlying_scaled(const Decorated& stratified_set) { return stratified_set.with_kind(Kind::scaled); }

Decorated underlying_marked(const Decorated& x) { return x.with_kind(Kind::marked); }

bool same_marks(const Decorated& a, const Decorated& b, std::ostream* warn) {
  bool mixed = (a.kind() == Kind::scaled && b.kind() == Kind::stratified) ||
               (a.kind() == Kind::stratified && b.kind() == Kind::scaled);
  bool same_carrier = same_complex(a.complex(), b.complex());
  if (mixed && same_carrier && warn)
    *warn << "warning: comparing a scaled set with a stratified set; flat/sharp differ between the two\n";
  return same_carrier && a.marks() == b.marks();
}

StratifiedJoin join_stratified(const Decorated& x, const Decorated& y) {
  StratifiedJoin out{join(x.carrier(), y.carrier()), Decorated()};
  const auto& j = out.join;
  std::vector<char> marks(std::size_t(j.complex->size()), 0);
  for (CellIndex c = 0; c < j.complex->size(); ++c) {
    auto p = j.parts[std::size_t(c)];
    bool m = (p.left >= 0 && x.marked(p.left)) || (p.right >= 0 && y.marked(p.right));
    marks[std::size_t(c)] = m ? 1 : 0;
  }
  out.object = Decorated(j.complex, Kind::stratified, std::move(marks));
  return out;
}

Subcomplex marked_core(const Decorated& x) {
  const auto& cx = x.complex();
  std::vector<char> keep(std::size_t(cx.size()), 0);
  for (CellIndex c = 0; c < cx.size(); ++c) {
    if (cx.dim(c) == 0) {
      keep[std::size_t(c)] = 1;
      continue;
    }
    // A cell survives iff all its edges are marked or degenerate; faces come
    // first in the ordering, so checking the codimension-1 faces suffices.
    bool ok = true;
    if (cx.dim(c) == 1) {
      ok = x.marked(c);
    } else {
      for (auto f : cx.faces(c)) ok = ok && keep[std::size_t(f.cell)];
    }
    keep[std::size_t(c)] = ok ? 1 : 0;
  }
  return subcomplex(x.carrier(), keep);
}

}  // namespace scaled
