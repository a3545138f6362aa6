#pragma once

#include <optional>
#include <string>
#include <vector>

#include "scaled/simplicial.hpp"

namespace scaled {

// Which dimensions carry distinguished cells.
enum class Kind { plain, marked, scaled, stratified, marked_scaled };

bool tracks(Kind kind, int dim);
std::string kind_name(Kind kind);
Kind parse_kind(const std::string& name);

// A simplicial set together with a set of distinguished nondegenerate cells.
// Degenerate simplices always count as distinguished and are never stored.
class Decorated {
 public:
  Decorated() : carrier_(std::make_shared<const FiniteSimplicialSet>()) {}
  Decorated(ComplexPtr carrier, Kind kind);
  Decorated(ComplexPtr carrier, Kind kind, std::vector<char> marks);

  const FiniteSimplicialSet& complex() const { return *carrier_; }
  const ComplexPtr& carrier() const { return carrier_; }
  Kind kind() const { return kind_; }

  bool marked(CellIndex c) const { return marks_[std::size_t(c)] != 0; }
  bool distinguished(Simplex s) const { return s.degenerate() || marked(s.cell); }
  const std::vector<char>& marks() const { return marks_; }
  std::vector<CellIndex> marked_cells(int dim) const;
  std::size_t mark_count() const;

  // Marks a cell by id; throws ReferenceError / DecorationError.
  void mark(std::string_view id);
  void mark(CellIndex c);
  void unmark(CellIndex c) { marks_[std::size_t(c)] = 0; }
  Decorated with_kind(Kind kind) const;

 private:
  ComplexPtr carrier_;
  Kind kind_ = Kind::plain;
  std::vector<char> marks_;
};

bool same_decoration(const Decorated& a, const Decorated& b);

// A simplicial map between decorated sets.  Decoration checks compare layer by
// layer: a distinguished source cell of dimension d must go to a
// distinguished simplex whenever the target kind tracks dimension d.
struct DecoratedMap {
  Decorated source;
  Decorated target;
  std::vector<Simplex> assign;

  SimplicialMap underlying() const { return {source.carrier(), target.carrier(), assign}; }
  Simplex apply(Simplex s) const;
};

std::optional<std::string> check_decorated_map(const DecoratedMap& f);
// Plain simplicial check plus decoration check.
std::optional<std::string> validate(const DecoratedMap& f);
bool is_mono(const DecoratedMap& f);
DecoratedMap compose(const DecoratedMap& g, const DecoratedMap& f);
DecoratedMap identity_map(const Decorated& x);
DecoratedMap decorated(const SimplicialMap& f, const Decorated& source, const Decorated& target);

}  // namespace scaled
