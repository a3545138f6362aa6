#include "scaled/decoration.hpp"

#include "scaled/errors.hpp"

namespace scaled {

bool tracks(Kind kind, int dim) {
  switch (kind) {
    case Kind::plain: return false;
    case Kind::marked: return dim == 1;
    case Kind::scaled: return dim == 2;
    case Kind::stratified: return dim >= 1;
    case Kind::marked_scaled: return dim == 1 || dim == 2;
  }
  return false;
}

std::string kind_name(Kind kind) {
  switch (kind) {
    case Kind::plain: return "plain";
    case Kind::marked: return "marked";
    case Kind::scaled: return "scaled";
    case Kind::stratified: return "stratified";
    case Kind::marked_scaled: return "marked-scaled";
  }
  return "plain";
}

Kind parse_kind(const std::string& name) {
  if (name == "plain") return Kind::plain;
  if (name == "marked") return Kind::marked;
  if (name == "scaled") return Kind::scaled;
  if (name == "stratified") return Kind::stratified;
  if (name == "marked-scaled") return Kind::marked_scaled;
  throw FormatError("unknown decoration kind '" + name + "'");
}

Decorated::Decorated(ComplexPtr carrier, Kind kind)
    : carrier_(std::move(carrier)), kind_(kind), marks_(std::size_t(carrier_->size()), 0) {}

Decorated::Decorated(ComplexPtr carrier, Kind kind, std::vector<char> marks)
    : carrier_(std::move(carrier)), kind_(kind), marks_(std::move(marks)) {
  if (marks_.size() != std::size_t(carrier_->size())) throw DecorationError("mark vector size mismatch");
  for (CellIndex c = 0; c < carrier_->size(); ++c)
    if (marks_[std::size_t(c)] && !tracks(kind_, carrier_->dim(c)))
      throw DecorationError("cell '" + carrier_->id(c) + "' cannot be marked in a " + kind_name(kind_) + " set");
}

std::vector<CellIndex> Decorated::marked_cells(int dim) const {
  std::vector<CellIndex> out;
  for (CellIndex c = carrier_->begin_of_dim(dim); c < carrier_->end_of_dim(dim); ++c)
    if (marked(c)) out.push_back(c);
  return out;
}

std::size_t Decorated::mark_count() const {
  std::size_t n = 0;
  for (char m : marks_) n += m ? 1 : 0;
  return n;
}

void Decorated::mark(std::string_view id) { mark(carrier_->at(id)); }

void Decorated::mark(CellIndex c) {
  if (!tracks(kind_, carrier_->dim(c)))
    throw DecorationError("cell '" + carrier_->id(c) + "' cannot be marked in a " + kind_name(kind_) + " set");
  marks_[std::size_t(c)] = 1;
}

Decorated Decorated::with_kind(Kind kind) const {
  std::vector<char> m(marks_.size(), 0);
  for (CellIndex c = 0; c < carrier_->size(); ++c)
    if (marks_[std::size_t(c)] && tracks(kind, carrier_->dim(c))) m[std::size_t(c)] = 1;
  return Decorated(carrier_, kind, std::move(m));
}

bool same_decoration(const Decorated& a, const Decorated& b) {
  return a.kind() == b.kind() && same_complex(a.complex(), b.complex()) && a.marks() == b.marks();
}

Simplex DecoratedMap::apply(Simplex s) const {
  Simplex img = assign[std::size_t(s.cell)];
  if (!s.degenerate()) return img;
  return target.complex().degenerate(img, s.repeats, source.complex().dim_of(s));
}

std::optional<std::string> check_decorated_map(const DecoratedMap& f) {
  const auto& x = f.source.complex();
  for (CellIndex c = 0; c < x.size(); ++c) {
    if (!f.source.marked(c) || !tracks(f.target.kind(), x.dim(c))) continue;
    if (!f.target.distinguished(f.assign[std::size_t(c)]))
      return "distinguished cell '" + x.id(c) + "' goes to " + f.target.complex().ref_string(f.assign[std::size_t(c)]) +
             ", which is not distinguished";
  }
  return std::nullopt;
}

std::optional<std::string> validate(const DecoratedMap& f) {
  if (auto e = check_simplicial_map(f.underlying())) return e;
  return check_decorated_map(f);
}

bool is_mono(const DecoratedMap& f) { return is_mono(f.underlying()); }

DecoratedMap compose(const DecoratedMap& g, const DecoratedMap& f) {
  DecoratedMap h{f.source, g.target, {}};
  h.assign.reserve(f.assign.size());
  for (auto s : f.assign) h.assign.push_back(g.apply(s));
  return h;
}

DecoratedMap identity_map(const Decorated& x) {
  DecoratedMap m{x, x, {}};
  for (CellIndex c = 0; c < x.complex().size(); ++c) m.assign.push_back({c, 0});
  return m;
}

DecoratedMap decorated(const SimplicialMap& f, const Decorated& source, const Decorated& target) {
  return {source, target, f.assign};
}

}  // namespace scaled
