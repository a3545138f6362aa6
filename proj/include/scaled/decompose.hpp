#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "scaled/constructions.hpp"
#include "scaled/generators.hpp"
#include "scaled/json_io.hpp"
#include "scaled/lifting.hpp"

namespace scaled {

// ---- certificates -------------------------------------------------------------

// A sequence of pushouts of generators, starting from the source of the goal,
// optionally followed by a retract.  Attaching maps are stored by cell id
// against the object built so far, which is itself rebuilt by replay.
struct Certificate {
  struct Step {
    std::string generator;
    json attach;  // assignment: generator source -> current object
  };
  struct Retract {
    json section;     // goal target -> final object
    json retraction;  // final object -> goal target
  };
  DecoratedMap goal;
  std::string family;  // '+'-separated family names
  std::vector<Step> steps;
  std::optional<Retract> retract;

  json to_json() const;
  static Certificate from_json(const json& j);  // throws FormatError
};

struct Verification {
  bool pass = true;
  std::optional<int> step;  // 1-based step of the failure; unset for the final comparison
  std::string detail;
  json to_json() const;
};

// Replays the certificate and checks that the composite from the goal source
// is isomorphic to the goal under it (or that the retract data is valid).
// An empty `family` uses the certificate's own.
Verification verify_certificate(const DecoratedMap& goal, const Certificate& cert, const std::string& family = "");

// One replayed stage: the object after some steps with the map from the goal
// source into it.
struct Stage {
  Decorated object;
  DecoratedMap from_source;
};
// Stages 0..steps; throws on the first malformed step.
std::vector<Stage> replay_certificate(const DecoratedMap& goal, const Certificate& cert);

struct SearchBudget {
  int max_steps = 2;
  std::size_t max_cells = 4096;  // bound on the goal target
  int nmax = -1;                 // generator dimension bound; < 0 means max(dim target, 4)
  int jobs = 1;
};

struct SearchResult {
  std::optional<Certificate> certificate;
  std::size_t states = 0;  // distinct intermediate objects visited
  json to_json() const;
};

// Breadth-first search over pushouts of family members whose composite stays
// a mono into the goal target.  Attaching maps may be arbitrary.  The first
// certificate in canonical order wins.
SearchResult search_certificate(const DecoratedMap& goal, const std::string& family, const SearchBudget& budget = {});

// ---- prisms --------------------------------------------------------------------

// Delta^1 x Delta^n with its nondegenerate cells indexed by chains of
// [1] x [n].  Bit j of a chain is (0, j) and bit n + 1 + j is (1, j).
struct Prism {
  int n = 0;
  Product product;
  std::vector<CellIndex> cell_of;      // chain -> cell or -1
  std::vector<std::uint32_t> chain_of;  // cell -> chain

  CellIndex cell(std::uint32_t chain) const { return cell_of[chain]; }
  std::uint32_t lower(std::uint32_t chain) const { return chain & ((1u << (n + 1)) - 1); }
  std::uint32_t upper(std::uint32_t chain) const { return chain >> (n + 1); }
  std::uint32_t projection(std::uint32_t chain) const { return lower(chain) | upper(chain); }
  static std::uint32_t vertex(int a, int j, int n) { return 1u << (a * (n + 1) + j); }
};
Prism make_prism(int n);

// A monotone surjection rho: [n] -> [m] and its minimal section.
struct SigmaRho {
  std::vector<int> rho, sigma;
  int n = 0, m = 0;
  bool in_image(int i) const;  // of sigma
};
SigmaRho sigma_rho(const std::vector<int>& rho);  // throws ParameterError

// A subcomplex of Delta^n as a face-closed set of nonempty vertex subsets.
struct FaceSet {
  int n = 0;
  std::vector<char> has;  // indexed by subset

  bool contains(std::uint32_t s) const { return s != 0 && has[s] != 0; }
  static FaceSet none(int n);
  static FaceSet full(int n);
  static FaceSet boundary(int n);
  static FaceSet horn(int n, int i);
  // Face closure of the listed subsets.
  static FaceSet generated(int n, const std::vector<std::uint32_t>& subsets);
  std::vector<std::uint32_t> maximal() const;
};
bool admissible(const SigmaRho& sr, const FaceSet& a);

// L_A on Delta^1 x Delta^n: the triangles {(0,i),(1,i),(1,j)}, and
// {(0,i),(0,j),(1,j)} when j is in the image of sigma or j = i + 1 with
// rho(i) = rho(j).
bool in_l_scaling(const SigmaRho& sr, std::uint32_t chain, int n);
Decorated prism_l_scaled(const Prism& p, const SigmaRho& sr);

enum class PrismVariant { z_upper, z_lower, scaled_l };
PrismVariant parse_prism_variant(const std::string& name);
std::string prism_variant_name(PrismVariant v);

struct PrismFiltration {
  Certificate certificate;
  // Stage k as a subobject of the goal target, from the start to the end.
  std::vector<DecoratedMap> stages;
};
// The tau_i filtration of Delta^1 x Delta^n.  `rho` only affects scaled_l
// (default identity, which needs n >= 2).
PrismFiltration prism_filtration(int n, PrismVariant variant, const std::vector<int>& rho = {});

// ---- pushout-joins ---------------------------------------------------------------

struct PushoutJoin {
  DecoratedMap goal;  // X*B u Y*A -> Y*B
  bool isomorphism = false;
  std::optional<Certificate> certificate;  // over the inner and collapsed scaled generators
};
// f is the marked-scaled generator of the case (1: inner horn (m, i),
// 2: last horn m, 3: collapsed first horn m, 4: the thin triangle) and g is
// boundary:n, or the thin triangle when `thin_codomain`.
PushoutJoin pushout_join_cells(int which, int m, int n, int i = 1, bool thin_codomain = false,
                               const SearchBudget& budget = {});

// ---- transformations ---------------------------------------------------------------

// Violations of the three defining conditions, each reported separately.
struct TransformationCheck {
  std::array<std::optional<std::string>, 3> conditions;
  bool ok() const { return !conditions[0] && !conditions[1] && !conditions[2]; }
};
// h is a partial assignment on the prism cells, defined at least on
// Delta^1 x A; `c` must be scaled.
TransformationCheck check_transformation(const Decorated& c, const SigmaRho& sr, const FaceSet& a, const Prism& p,
                                         const PartialAssignment& h);

// Extends g, given on Delta^1 x A u {1} x B, to Delta^1 x B following the
// inductive construction: retractions for the degenerate cases, inner horn
// fillers at (1, i) otherwise.  Ties are broken lexicographically.
PartialAssignment extend_sigma_rho_transformation(const Decorated& c, const SigmaRho& sr, const FaceSet& a,
                                                  const FaceSet& b, const Prism& p, const PartialAssignment& g);

// ---- natural transformations ------------------------------------------------------

struct NaturalLiftProblem {
  DecoratedMap p;            // X -> Y
  ComplexPtr b;              // B
  std::vector<char> a;       // cells of A inside B (face-closed)
  Product prism;             // Delta^1 x B, from natural_prism(b)
  PartialAssignment f;       // into X, on {1} x B u Delta^1 x A
  Assignment h;              // Delta^1 x B -> Y
  std::vector<std::optional<Simplex>> lifts;  // per vertex of B outside A: a cartesian edge of X
};
Product natural_prism(const ComplexPtr& b);
// A lift of h through p extending f, built cell by cell along the lower
// prism filtration.  `opt` bounds the cartesian-edge checks.
Assignment lift_transformation(const NaturalLiftProblem& problem, const CheckOptions& opt);

}  // namespace scaled
