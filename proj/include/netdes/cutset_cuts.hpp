#pragma once

#include <optional>
#include <vector>

#include "netdes/cut.hpp"
#include "netdes/instance.hpp"

namespace netdes {

// Constraints of the design problem restricted to the arcs crossing (U, V).
struct CutSetRelaxation {
  std::vector<char> in_u;              // per node
  std::vector<int> out_arcs;           // A+: U -> V
  std::vector<int> in_arcs;            // A-: V -> U
  std::vector<Rational> b;             // per commodity: net demand of V
  std::vector<Rational> existing;      // per arc of the instance
  std::vector<long> facility_capacity;
  int num_commodities = 0;
  // Positive demand must cross but A+ is empty and cannot carry it.
  bool infeasible_relaxation = false;

  // Commodities with b^k > 0.
  std::vector<int> positive_commodities() const;
  Rational b_of(const std::vector<int>& Q) const;
  Rational existing_of(const std::vector<int>& arcs) const;
};

// Throws std::invalid_argument unless U and V are both nonempty.
CutSetRelaxation build_cutset(const Instance& inst, const std::vector<char>& in_u);

struct FlowCutSelection {
  std::vector<int> Q;        // commodities
  std::vector<int> S_plus;   // arc ids, subset of A+
  std::vector<int> S_minus;  // arc ids, subset of A-
  int facility = 0;          // base facility s
};

// b'_Q = b_Q - cbar(S+) + cbar(S-).
Rational adjusted_demand(const CutSetRelaxation& rel, const FlowCutSelection& sel);

// sum_m ceil(c_m / c_s) y_m(A+) >= ceil((b_K - cbar(A+)) / c_s); none if the
// right-hand side is not positive.
std::optional<LinearCut> cutset_cut(const CutSetRelaxation& rel, int facility = 0);

// r y(S+) + x_Q(A+ \ S+) + (c - r) y(S-) - x_Q(S-) >= r eta - cbar(S-), with
// y = sum_m ceil(c_m / c_s) y_m. Throws std::invalid_argument when r = 0.
LinearCut flow_cutset_cut(const CutSetRelaxation& rel, const FlowCutSelection& sel);

// phi+ coefficients on S+, phi- coefficients on S-, rhs r eta - cbar(S-).
// Throws std::invalid_argument when r = 0.
LinearCut multifacility_cutset_cut(const CutSetRelaxation& rel, const FlowCutSelection& sel);

struct MultiFacilityFacetReport {
  bool proper_plus = false;   // S+ and A+ \ S+ nonempty
  bool proper_minus = false;  // S- and A- \ S- nonempty
  bool positive_r = false;
  bool positive_demand = false;  // b^k > 0 for k in Q
  bool all() const { return proper_plus && proper_minus && positive_r && positive_demand; }
};
MultiFacilityFacetReport multifacility_facet_report(const CutSetRelaxation& rel, const FlowCutSelection& sel);

// Greedy S+/S- for fixed Q and base facility; when existing capacity crosses
// the cut the choice is repeated with the updated remainder until it settles.
// Returns the most violated cut seen, none if nothing is violated.
std::optional<LinearCut> separate_flow_cutset(const CutSetRelaxation& rel, const std::vector<int>& Q,
                                              const FractionalPoint& p, int facility = 0);
std::optional<LinearCut> separate_multifacility(const CutSetRelaxation& rel, const std::vector<int>& Q,
                                                const FractionalPoint& p, int facility);
// Tries every base facility and returns the most violated cut.
std::optional<LinearCut> separate_multifacility_all(const CutSetRelaxation& rel, const std::vector<int>& Q,
                                                    const FractionalPoint& p);

// Most violated Q for fixed S+, S- and facility (flow-cut-set form). Exhaustive
// up to 12 commodities, otherwise the residual capacity routine on the
// aggregated single-arc view plus singletons and the full set.
std::optional<std::vector<int>> separate_commodity_subset(const CutSetRelaxation& rel, const FlowCutSelection& sel,
                                                          const FractionalPoint& p);

// Joint search: candidate Q sets (all subsets for up to 6 commodities,
// otherwise singletons and the full set), each refined by alternating the
// S and Q steps at most 5 times.
std::optional<LinearCut> separate_flow_cutset_joint(const CutSetRelaxation& rel, const FractionalPoint& p,
                                                    bool multifacility);

}  // namespace netdes
