#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "netdes/cut.hpp"
#include "netdes/instance.hpp"

namespace netdes {

// Upper bound per (arc, facility) on the enumerated integer capacities,
// arc-major like FractionalPoint::y.
struct YBounds {
  std::vector<long> upper;
};

// ceil(total supply / c_m) for every arc: larger values never help once
// flows are bounded by the supplies.
YBounds default_y_bounds(const Instance& inst);
YBounds uniform_y_bounds(const Instance& inst, long bound);

class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct OracleOptions {
  long budget = 1'000'000;  // max number of enumerated y vectors
  bool parallel = true;
};

struct IPResult {
  bool feasible = false;
  Rational objective;
  std::vector<long> y;        // arc-major
  std::vector<Rational> x;    // arc-major, per commodity
  long evaluated = 0;         // y vectors whose routing LP was solved
};

// Minimum of d y + f x over integer y within the bounds and flows routing
// every commodity (x_a^k <= supply of k). Throws BudgetExceeded.
IPResult brute_force_ip(const Instance& inst, const YBounds& bounds, const OracleOptions& options = {});
IPResult brute_force_ip_serial(const Instance& inst, const YBounds& bounds, long budget = 1'000'000);

struct CutCheck {
  bool valid = true;
  std::optional<FractionalPoint> counterexample;  // feasible point violating the cut
  double worst_slack = 0;  // smallest lhs - rhs seen; a lower bound where pruned
  long evaluated = 0;
};

// For every integer y in the bounds (skipping per-arc capacity vectors that
// stay above the total supply after removing a unit), minimizes the cut's left-hand side over
// the routing polytope and compares with the rhs. Exact for cuts whose
// capacity coefficients are nonnegative when the bounds are
// default_y_bounds.
CutCheck validate_cut(const LinearCut& cut, const Instance& inst, const YBounds& bounds,
                      const OracleOptions& options = {});
CutCheck validate_cut_serial(const LinearCut& cut, const Instance& inst, const YBounds& bounds,
                             long budget = 1'000'000);

}  // namespace netdes
