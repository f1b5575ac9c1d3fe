#pragma once

#include <optional>
#include <vector>

#include "netdes/cut.hpp"
#include "netdes/instance.hpp"

namespace netdes {

enum class ArcSetMode { Splittable, Unsplittable };

// sum_i a_i x_i <= a_0 + y with x in [0,1]^K (splittable) or {0,1}^K
// (unsplittable) and y integer. Cuts are over LocalX(i) and LocalY(0).
struct ArcSetRelaxation {
  std::vector<Rational> a;
  Rational a0;
  ArcSetMode mode = ArcSetMode::Splittable;

  // Set when built from a network arc: x_i = x_{arc,k_i} / demand[i] and
  // y = sum_m y_weight[m] * y_{m,arc}.
  int arc = -1;
  std::vector<int> commodity;
  std::vector<Rational> demand;
  std::vector<Rational> y_weight;

  int size() const { return static_cast<int>(a.size()); }
};

struct ArcPoint {
  std::vector<Rational> x;
  Rational y;
};

// Capacity row of `arc` divided by the capacity of `facility`. Other
// facilities enter through y = sum_m ceil(c_m / c_s) y_m. Commodities whose
// coefficient would be zero are left out.
ArcSetRelaxation from_capacity_row(const Instance& inst, int arc, int facility = 0);
ArcPoint arc_point(const ArcSetRelaxation& rel, const FractionalPoint& p);
// Rewrites a cut over LocalX/LocalY as a cut over network variables.
LinearCut to_network(const ArcSetRelaxation& rel, const LinearCut& local);

// Fractional parts r_i = a_i - floor(a_i); items with r_i = 0 keep a zero
// coefficient. floor_a / floor_a0 are the offsets for map_back.
struct NormalizedArcSet {
  ArcSetRelaxation rel;
  std::vector<Rational> floor_a;
  Rational floor_a0;
};
NormalizedArcSet normalize_unsplittable(const ArcSetRelaxation& rel);
// A cut valid for the normalized set, written as pi x <= pi_0 + beta y,
// becomes (pi_i + beta floor(a_i)) x <= pi_0 + beta floor(a_0) + beta y.
LinearCut map_back(const NormalizedArcSet& n, const LinearCut& cut);
// Point of the normalized set: y' = y + floor(a_0) - sum floor(a_i) x_i.
ArcPoint normalized_point(const NormalizedArcSet& n, const ArcPoint& p);

// Local cut evaluation helpers.
Rational local_violation(const LinearCut& cut, const ArcPoint& p);

// sum_{i in S} a_i (1 - x_i) >= r (eta - y); none when r = 0.
std::optional<LinearCut> residual_capacity_cut(const ArcSetRelaxation& rel, const std::vector<int>& S);
// Exact linear-time separation; none means no residual capacity cut is violated.
std::optional<LinearCut> separate_residual_capacity(const ArcSetRelaxation& rel, const ArcPoint& p);

// c_S = |S| - ceil(a(S) - a_0) on a normalized set.
Rational c_strong_constant(const ArcSetRelaxation& rel, const std::vector<int>& S);
// sum_{i in S} x_i <= c_S + y
LinearCut c_strong_cut(const ArcSetRelaxation& rel, const std::vector<int>& S);
bool is_maximal_c_strong(const ArcSetRelaxation& rel, const std::vector<int>& S);

struct CStrongSeparation {
  std::optional<LinearCut> cut;
  bool heuristic = false;  // fractional support exceeded the enumeration cap
};
// On a normalized set. Variables at 0 or 1 are fixed, the fractional
// support is enumerated up to `cap` variables.
CStrongSeparation separate_c_strong(const ArcSetRelaxation& rel, const ArcPoint& p, int cap = 20);

// sum_{S} ceil(k a_i) x_i + sum_{K\S} floor(k a_i) x_i <= c^k_S + k y.
LinearCut k_split_c_strong_cut(const ArcSetRelaxation& rel, const std::vector<int>& S, int k);
struct KSplitFacetReport {
  bool maximal_in_k_split = false;  // (i)
  bool fractional_part = false;     // (ii) f_S > (k-1)/k and a_0 >= 0
  bool item_bounds = false;         // (iii)
  bool all() const { return maximal_in_k_split && fractional_part && item_bounds; }
};
KSplitFacetReport k_split_facet_report(const ArcSetRelaxation& rel, const std::vector<int>& S, int k);
bool k_split_facet_check(const ArcSetRelaxation& rel, const std::vector<int>& S, int k);
// Most violated k-split cut over the fractional support; none if none violated.
std::optional<LinearCut> separate_k_split(const ArcSetRelaxation& rel, const ArcPoint& p, int k, int cap = 20);

// Restriction y = y_bar, x_{K0} = 0, x_{K1} = 1; C = K \ (K0 u K1).
struct CoverSpec {
  long y_bar = 0;
  std::vector<int> K0;
  std::vector<int> K1;
  std::vector<int> C;
};
// r = a(C) + a(K1) - a_0 - y_bar.
Rational cover_excess(const ArcSetRelaxation& rel, const CoverSpec& spec);
bool is_minimal_cover(const ArcSetRelaxation& rel, const CoverSpec& spec);

// sum_C x_i + sum_{K0} alpha_i x_i + sum_{K1} alpha_i (1 - x_i) + alpha (y_bar - y) <= |C| - 1.
// y is lifted first with the largest valid alpha; then the variables of
// `order` (default: K0 ascending, then K1 ascending), each with the
// strongest coefficient from an exact knapsack maximization.
// Throws std::invalid_argument if C is not a cover.
LinearCut lifted_cover_cut(const ArcSetRelaxation& rel, const CoverSpec& spec,
                           const std::vector<int>& order = {});

}  // namespace netdes
