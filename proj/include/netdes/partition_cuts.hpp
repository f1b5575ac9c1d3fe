#pragma once

#include <array>
#include <optional>
#include <vector>

#include "netdes/cut.hpp"
#include "netdes/instance.hpp"
#include "netdes/mir.hpp"
#include "netdes/relaxation.hpp"

namespace netdes {

// block[i] is the block of node i; blocks are numbered 0..num_blocks-1.
struct NodePartition {
  std::vector<int> block;
  int num_blocks = 0;

  // Throws std::invalid_argument unless there are at least two blocks and
  // every block is nonempty.
  static NodePartition from_labels(std::vector<int> labels);
  static NodePartition from_blocks(int num_nodes, const std::vector<std::vector<int>>& blocks);
  static NodePartition two_way(const std::vector<char>& in_first);
  static NodePartition singletons(int num_nodes);

  std::vector<int> members(int b) const;
};

// Each block becomes one node. Shrunk arc (i, j) exists iff some original
// arc goes from block i to block j; its existing capacity is the sum over
// those arcs and its costs are their minimum. Balances are summed per block
// and commodities left with no demand are dropped.
struct ShrunkInstance {
  Instance instance;
  NodePartition partition;
  std::vector<std::vector<int>> arc_map;  // shrunk arc -> original crossing arcs
  std::vector<int> commodity_map;         // original commodity -> shrunk one or -1
};

ShrunkInstance shrink(const Instance& inst, const NodePartition& partition);

// Copies each shrunk coefficient to every original arc it stands for. Arcs
// inside a block get zero. Flow terms are mapped through commodity_map.
// Throws std::invalid_argument on local variables.
LinearCut lift_cut(const LinearCut& cut, const ShrunkInstance& shrunk);

// Every block induces a weakly connected subgraph.
bool blocks_connected(const Instance& inst, const NodePartition& partition);

// Conditions under which a facet of the shrunk problem lifts to a facet.
struct LiftFacetReport {
  bool no_flow_terms = false;
  bool positive_rhs = false;
  bool blocks_connected = false;
  bool all() const { return no_flow_terms && positive_rhs && blocks_connected; }
};
LiftFacetReport lift_facet_report(const LinearCut& shrunk_cut, const Instance& inst, const NodePartition& partition);

// sum_a v_a sum_m c_m y_{m,a} >= sum w u - sum_a v_a cbar_a.
LinearCut metric_cut(const Instance& inst, const MetricVector& mv);

struct MetricSeparation {
  MetricVector metric;
  LinearCut cut;
};

// Routing feasibility of the point's capacities; when infeasible the
// certificate, scaled to sum v = 1, gives a violated metric cut.
std::optional<MetricSeparation> separate_metric(const Instance& inst, const FractionalPoint& p,
                                                const RoutingOptions& options = {});

// Same left-hand side as metric_cut with the rhs rounded up. Throws
// std::invalid_argument unless v and u are integral.
LinearCut integral_metric_cut(const Instance& inst, const MetricVector& mv);

// { z : sum_m c_m z_m >= b } for the arcs from block 0 to block 1 of a
// two-node shrunk instance, b = demand that must cross minus the existing
// capacity. None when b <= 0.
std::optional<KnapsackCoverSet> knapsack_cover_from_two_partition(const ShrunkInstance& shrunk);

// Iterative MIR cuts of that set on z_m = sum of y_m over the crossing arcs
// of the original instance.
std::vector<LinearCut> two_partition_cuts(const Instance& inst, const NodePartition& partition);

struct ThreePartitionData {
  std::array<Rational, 3> s;                   // leaving traffic - outgoing existing capacity
  std::array<Rational, 3> t;                   // entering traffic - incoming existing capacity
  std::array<std::array<Rational, 3>, 3> d;    // rhs of the metric cut from v^{ij}
};

// Throws std::invalid_argument unless the shrunk instance has three nodes.
ThreePartitionData three_partition_data(const ShrunkInstance& shrunk);

// ceil((sum ceil(s_i) + sum ceil(t_i)) / 2); negative s_i or t_i count as 0.
Rational three_partition_rhs(const ThreePartitionData& data);
// Pair sums ceil(d_ij) + ceil(d_kj) per target j; the two largest, halved and
// rounded up.
Rational three_partition_metric_rhs(const ThreePartitionData& data);

// sum_m c_m sum_a y_{m,a} >= rhs over the crossing arcs. None when the rhs
// is not positive.
std::optional<LinearCut> three_partition_cut(const Instance& inst, const NodePartition& partition);
LinearCut three_partition_metric_cut(const Instance& inst, const NodePartition& partition);

// Largest rhs among cuts with identical left-hand sides. Throws
// std::invalid_argument on an empty list or mismatched left-hand sides.
LinearCut select_total_capacity_cut(const std::vector<LinearCut>& candidates);

// Total capacity cut as a knapsack cover set: { z : sum_m c_m z_m >= rhs }.
// Throws std::invalid_argument unless every capacity coefficient equals its
// facility's capacity.
KnapsackCoverSet total_capacity_knapsack(const Instance& inst, const LinearCut& cut);
// Iterative MIR cuts of that set, expanded over the arcs of the cut.
std::vector<LinearCut> total_capacity_cuts(const Instance& inst, const LinearCut& cut);

}  // namespace netdes
