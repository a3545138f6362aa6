#pragma once

#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "scaled/decoration.hpp"
#include "scaled/json_io.hpp"
#include "scaled/presentation.hpp"

namespace scaled {

// A strict 2-category with finitely many cells.  Composition tables are dense
// and hold -1 where a composite is undefined.
class FiniteTwoCategory {
 public:
  struct OneCell {
    std::string id;
    int src, tgt;  // objects
  };
  struct TwoCell {
    std::string id;
    int src, tgt;  // 1-cells
  };

  int add_object(std::string id);
  int add_one_cell(std::string id, int src, int tgt);
  int add_two_cell(std::string id, int src, int tgt);
  void set_identity1(int object, int cell) { identity1_[std::size_t(object)] = cell; }
  void set_identity2(int one_cell, int cell) { identity2_[std::size_t(one_cell)] = cell; }
  // g . f for f: a -> b and g: b -> c.
  void set_compose1(int g, int f, int gf);
  // beta . alpha for alpha: f => g and beta: g => h.
  void set_vertical(int beta, int alpha, int result);
  // beta * alpha for alpha between 1-cells a -> b and beta between b -> c.
  void set_horizontal(int beta, int alpha, int result);
  // Fills every composite that involves an identity, and horizontal
  // composites of identity 2-cells whose 1-cell composite is known.
  void complete_identities();

  int object_count() const { return int(objects_.size()); }
  int one_cell_count() const { return int(one_.size()); }
  int two_cell_count() const { return int(two_.size()); }
  const std::string& object(int a) const { return objects_[std::size_t(a)]; }
  const OneCell& one_cell(int f) const { return one_[std::size_t(f)]; }
  const TwoCell& two_cell(int x) const { return two_[std::size_t(x)]; }
  int identity1(int a) const { return identity1_[std::size_t(a)]; }
  int identity2(int f) const { return identity2_[std::size_t(f)]; }
  int compose1(int g, int f) const { return at(comp1_, one_cell_count(), g, f); }
  int vertical(int beta, int alpha) const { return at(vert_, two_cell_count(), beta, alpha); }
  int horizontal(int beta, int alpha) const { return at(horiz_, two_cell_count(), beta, alpha); }
  std::optional<int> find_object(const std::string& id) const;
  std::optional<int> find_one_cell(const std::string& id) const;
  std::optional<int> find_two_cell(const std::string& id) const;
  int src_object(int two) const { return one_cell(two_cell(two).src).src; }
  int tgt_object(int two) const { return one_cell(two_cell(two).src).tgt; }

  // A two-sided vertical inverse, found by table search.
  std::optional<int> inverse(int two) const;
  bool invertible(int two) const { return inverse(two).has_value(); }

 private:
  static int at(const std::vector<int>& t, int n, int a, int b) {
    return a < 0 || b < 0 || a >= n || b >= n ? -1 : t[std::size_t(a) * std::size_t(n) + std::size_t(b)];
  }
  static void grow(std::vector<int>& t, int old_n, int new_n);

  std::vector<std::string> objects_;
  std::vector<OneCell> one_;
  std::vector<TwoCell> two_;
  std::vector<int> identity1_, identity2_;
  std::vector<int> comp1_, vert_, horiz_;
  std::unordered_map<std::string, int> object_ids_, one_ids_, two_ids_;
};

// Checks well-typed totality of every table, unit and associativity laws for
// all three compositions, identities, and interchange.  Returns the first
// violation found.
std::optional<std::string> check_two_category(const FiniteTwoCategory& c);

json two_category_to_json(const FiniteTwoCategory& c);
FiniteTwoCategory two_category_from_json(const json& j);

// Objects [n]; Hom(i, j) is the poset of subsets with min i and max j under
// inclusion; composition is union.  1-cells are named by their digits and
// 2-cells "S<=T".
FiniteTwoCategory oriental2(int n);
// oriental2(2) with the 2-cell 02 <= 012 made invertible.
FiniteTwoCategory oriental2_t();

// Fixtures.
FiniteTwoCategory poset_two_category(int n, const std::vector<std::pair<int, int>>& less);
FiniteTwoCategory linear_order(int n);
FiniteTwoCategory walking_isomorphism();
FiniteTwoCategory walking_two_cell();
FiniteTwoCategory walking_invertible_two_cell();
// The fixture set above plus orientals, by name.
std::vector<std::pair<std::string, FiniteTwoCategory>> two_category_fixtures();

struct TwoFunctor {
  std::vector<int> objects, one, two;
  auto operator<=>(const TwoFunctor&) const = default;
};

std::optional<std::string> check_two_functor(const FiniteTwoCategory& c, const FiniteTwoCategory& d, const TwoFunctor& f);
TwoFunctor compose(const TwoFunctor& g, const TwoFunctor& f);
// All strict 2-functors c -> d in lexicographic order of (objects, one, two).
std::vector<TwoFunctor> enumerate_2functors(const FiniteTwoCategory& c, const FiniteTwoCategory& d);
// oriental2(m) -> oriental2(n) induced by a monotone map, via images of subsets.
TwoFunctor oriental_map(int m, int n, const std::vector<int>& theta);

struct Nerve2 {
  std::shared_ptr<Presentation> presentation;
  Decorated object;  // scaled
  // The functor oriental2(dim c) -> D of a cell.
  TwoFunctor functor(CellIndex c) const;
};

// n-simplices are 2-functors oriental2(n) -> D for n <= n_max; a triangle is
// thin iff it sends 02 <= 012 to an invertible 2-cell.
Nerve2 nerve2(const FiniteTwoCategory& d, int n_max);

// Generators and relations for the homotopy 2-category.  Words are lists of
// edge generators in diagrammatic order with degenerate edges dropped.
struct Presentation2 {
  struct Generator1 {
    std::string id, src, tgt;
  };
  struct Generator2 {
    std::string id;
    std::vector<std::string> source, target;
  };
  // One step of a vertical pasting: before * cell * after.
  struct Step {
    std::vector<std::string> before;
    std::string cell;
    std::vector<std::string> after;
  };
  struct Relation {
    std::string kind;  // "invertible" or "pasting"
    std::string cell;  // for "invertible"
    std::string witness;  // the 3-cell of a pasting relation
    std::vector<Step> lhs, rhs;
  };
  std::vector<std::string> objects;
  std::vector<Generator1> one;
  std::vector<Generator2> two;
  std::vector<Relation> relations;

  json to_json() const;
};

// Vertices, nondegenerate edges, one 2-cell per nondegenerate triangle
// sigma: sigma|02 => sigma|01 sigma|12, an invertibility relation per thin
// triangle, and per nondegenerate 3-cell the equation between its two
// pastings.  Relations are emitted, not solved.
Presentation2 ho2_presentation(const Decorated& x);
// Every relation relates composable parallel pastings.
std::optional<std::string> check_presentation(const Presentation2& p);

}  // namespace scaled
