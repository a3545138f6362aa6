#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "scaled/generators.hpp"
#include "scaled/json_io.hpp"

namespace scaled {

struct Counterexample {
  std::string generator;        // instance name, or the name of the failed condition
  json map;                     // assignment of the lifting problem's top map
  json base;                    // assignment of the bottom map, or null
  std::string detail;
};

// Outcome of a bounded check.
struct Report {
  bool pass = true;
  int bound = 0;
  std::string check;
  std::optional<Counterexample> counterexample;

  json to_json() const;
};

struct CheckOptions {
  int nmax = 0;
  int jobs = 1;
};

// All g: B -> X with g . i = f, in canonical order.  B and X must have the
// same decoration kind.
std::vector<DecoratedMap> extensions(const DecoratedMap& f, const DecoratedMap& i);
bool has_extension(const DecoratedMap& f, const DecoratedMap& i);

// Every map A -> X from the source of a family member extends along it.
Report has_rlp(const Decorated& x, const std::string& family, const CheckOptions& opt);
Report has_rlp(const Decorated& x, const std::vector<GeneratorInstance>& gens, const CheckOptions& opt);
// Every square from a family member to p has a diagonal.
Report has_rlp_rel(const DecoratedMap& p, const std::string& family, const CheckOptions& opt);
Report has_rlp_rel(const DecoratedMap& p, const std::vector<GeneratorInstance>& gens, const CheckOptions& opt);

// Classes: weak-inf-bicat, complicial, complicial2, k-trivial(k), saturated.
std::vector<std::string> class_families(const std::string& cls);
Report classify(const Decorated& x, const std::string& cls, const CheckOptions& opt);

// Lifts against (Lambda^n_n, {0,n-1,n}|) -> (Delta^n, {0,n-1,n}) for
// 2 <= n <= nmax, restricted to horns whose last edge is `edge`.
Report is_cartesian_edge(const DecoratedMap& p, Simplex edge, const CheckOptions& opt);

// Classes: weak-fib, outer-fib, outer-cartesian, outer-cocartesian.
Report classify_map(const DecoratedMap& p, const std::string& cls, const CheckOptions& opt);

// Smallest index in [0, count) for which `ok` fails, scanning with `jobs`
// workers; the result does not depend on the worker count.
std::optional<std::size_t> first_failure(std::size_t count, int jobs, const std::function<bool(std::size_t)>& ok);

}  // namespace scaled
