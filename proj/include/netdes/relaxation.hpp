#pragma once

#include <optional>
#include <vector>

#include "netdes/cut.hpp"
#include "netdes/instance.hpp"
#include "netdes/lp.hpp"

namespace netdes {

// LP relaxation of the network design problem with an index map from
// network variables to LP columns.
struct RelaxationModel {
  LPModel lp;
  int num_arcs = 0;
  int num_commodities = 0;
  int num_facilities = 0;
  int first_cut_row = 0;

  int flow_column(int a, int k) const { return a * num_commodities + k; }
  int capacity_column(int a, int m) const {
    return num_arcs * num_commodities + a * num_facilities + m;
  }
  int column(const VarRef& v) const;

  // Rationalized LP values (continued fractions, denominators <= max_den).
  FractionalPoint point_from(const std::vector<double>& primal, long max_den = 1'000'000) const;
  FractionalPoint point_from(const std::vector<Rational>& primal) const;
};

// Balance rows (inflow - outflow = w_i^k) per commodity and node, one
// capacity row per arc, flow bounds x_a^k <= supply of k, then one >= row
// per cut.
RelaxationModel build_relaxation(const Instance& inst, const std::vector<LinearCut>& cuts = {});

void add_cut_row(RelaxationModel& model, const LinearCut& cut);

// Arc weights v >= 0 and node potentials u per (commodity, node) with
// u[k][source_k] = 0. A member of the metric cone when
// v_ij >= u_kj - u_ki for every commodity k and arc (i, j).
struct MetricVector {
  std::vector<Rational> v;               // per arc
  std::vector<std::vector<Rational>> u;  // per commodity, per node
};

bool in_metric_cone(const Instance& inst, const MetricVector& mv);
// Shortest-path potentials from each commodity's source under weights v.
// Nodes unreachable from a source get one more than the largest finite
// distance.
MetricVector with_shortest_path_potentials(const Instance& inst, std::vector<Rational> v);
// sum_k sum_i w_i^k u_ki
Rational metric_demand(const Instance& inst, const MetricVector& mv);

struct RoutingCheck {
  bool feasible = false;
  // Set when infeasible: sum_a cap_a v_a < metric_demand.
  std::optional<MetricVector> certificate;
};

struct RoutingOptions {
  bool exact = false;
  SolveOptions lp;
};

// Can all commodities be routed when arc a has capacity
// existing_a + sum_m c_m y[a * M + m]?
RoutingCheck check_feasible_routing(const Instance& inst, const std::vector<Rational>& y,
                                    const RoutingOptions& options = {});
// Same, for explicit total arc capacities.
RoutingCheck check_feasible_capacities(const Instance& inst, const std::vector<Rational>& capacity,
                                       const RoutingOptions& options = {});

std::vector<Rational> total_capacity(const Instance& inst, const std::vector<Rational>& y);

}  // namespace netdes
