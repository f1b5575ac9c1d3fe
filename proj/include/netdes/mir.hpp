#pragma once

#include <vector>

#include "netdes/cut.hpp"
#include "netdes/rational.hpp"

namespace netdes {

// a x + c y >= b with x >= 0 continuous and y >= 0 integer.
struct BaseInequality {
  std::vector<Rational> a;
  std::vector<Rational> c;
  Rational b;
};

// Same shape, used for the strengthened result.
using MirInequality = BaseInequality;

// x + r y >= r * ceil(b) with r = b - floor(b).
struct BasicMir {
  Rational r;
  Rational ceil_b;
};
BasicMir basic_mir(const Rational& b);

// sum_{a_j>0} a_j x_j + sum_{r_j<r} r_j y_j + r (sum_{r_j>=r} y_j + sum floor(c_j) y_j) >= r ceil(b).
// With r = 0 the input inequality is returned unchanged.
MirInequality mir(const BaseInequality& base);
// LocalX(j) for continuous, LocalY(j) for integer variables.
LinearCut mir_cut(const BaseInequality& base);

// MIR function for a pure integer row with fractional rhs part f:
// F_f(a) = f floor(a) + min(frac(a), f).
Rational mir_function(const Rational& a, const Rational& f);

// { z in Z^M_+ : sum_m c_m z_m >= b }, c strictly increasing.
struct KnapsackCoverSet {
  std::vector<long> c;
  Rational b;
};

void check_knapsack_cover_set(const KnapsackCoverSet& x);

// Divides by c[j_r], applies MIR, then repeats with c[j_{r-1}], ..., c[j_1].
// Each step multiplies back by its divisor, so the coefficients stay on the
// scale of the capacities. Steps whose scaled rhs is integral are skipped.
// Returns sum_m alpha_m z_m >= beta over LocalY(m).
LinearCut iterative_mir(const KnapsackCoverSet& x, const std::vector<int>& subsequence);

// All nonempty increasing subsequences when |M| <= 4; otherwise the
// singletons and the full sequence.
std::vector<std::vector<int>> mir_subsequences(int num_facilities);
std::vector<LinearCut> all_iterative_mir_cuts(const KnapsackCoverSet& x);

// Parameters of the subadditive MIR functions for base facility s.
struct PhiParams {
  long c_s = 1;
  Rational r;    // b - floor(b / c_s) c_s
  Rational eta;  // ceil(b / c_s)
};
PhiParams phi_params(const Rational& b, long c_s);

// Throw std::invalid_argument when r = 0 or c < 0.
Rational phi_plus(const PhiParams& p, const Rational& c);
Rational phi_minus(const PhiParams& p, const Rational& c);

}  // namespace netdes
