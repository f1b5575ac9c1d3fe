#include "netdes/partition_cuts.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>

namespace netdes {

NodePartition NodePartition::from_labels(std::vector<int> labels) {
  NodePartition p;
  int top = -1;
  for (int b : labels) {
    if (b < 0) throw std::invalid_argument("negative block label");
    top = std::max(top, b);
  }
  p.num_blocks = top + 1;
  if (p.num_blocks < 2) throw std::invalid_argument("partition needs at least two blocks");
  std::vector<char> used(static_cast<std::size_t>(p.num_blocks), 0);
  for (int b : labels) used[static_cast<std::size_t>(b)] = 1;
  for (char u : used) {
    if (!u) throw std::invalid_argument("empty block in partition");
  }
  p.block = std::move(labels);
  return p;
}

NodePartition NodePartition::from_blocks(int num_nodes, const std::vector<std::vector<int>>& blocks) {
  std::vector<int> labels(static_cast<std::size_t>(num_nodes), -1);
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    for (int v : blocks[b]) {
      if (v < 0 || v >= num_nodes) throw std::invalid_argument("block references unknown node");
      if (labels[static_cast<std::size_t>(v)] >= 0) throw std::invalid_argument("blocks overlap");
      labels[static_cast<std::size_t>(v)] = static_cast<int>(b);
    }
  }
  for (int l : labels) {
    if (l < 0) throw std::invalid_argument("blocks do not cover every node");
  }
  return from_labels(std::move(labels));
}

NodePartition NodePartition::two_way(const std::vector<char>& in_first) {
  std::vector<int> labels;
  for (char c : in_first) labels.push_back(c ? 0 : 1);
  return from_labels(std::move(labels));
}

NodePartition NodePartition::singletons(int num_nodes) {
  std::vector<int> labels;
  for (int i = 0; i < num_nodes; ++i) labels.push_back(i);
  return from_labels(std::move(labels));
}

std::vector<int> NodePartition::members(int b) const {
  std::vector<int> out;
  for (std::size_t i = 0; i < block.size(); ++i) {
    if (block[i] == b) out.push_back(static_cast<int>(i));
  }
  return out;
}

namespace {

void check_partition(const Instance& inst, const NodePartition& partition) {
  if (static_cast<int>(partition.block.size()) != inst.num_nodes()) {
    throw std::invalid_argument("partition does not match the node count");
  }
}

int block_of(const NodePartition& p, int node) { return p.block[static_cast<std::size_t>(node)]; }

}  // namespace

ShrunkInstance shrink(const Instance& inst, const NodePartition& partition) {
  check_partition(inst, partition);
  const int p = partition.num_blocks;

  std::vector<int> commodity_map(static_cast<std::size_t>(inst.num_commodities()), -1);
  std::vector<Commodity> commodities;
  for (int k = 0; k < inst.num_commodities(); ++k) {
    const Commodity& orig = inst.commodity(k);
    Commodity c;
    c.source = block_of(partition, orig.source);
    c.net_demand.assign(static_cast<std::size_t>(p), Rational(0));
    for (int v = 0; v < inst.num_nodes(); ++v) {
      c.net_demand[static_cast<std::size_t>(block_of(partition, v))] += orig.net_demand[static_cast<std::size_t>(v)];
    }
    if (std::all_of(c.net_demand.begin(), c.net_demand.end(), [](const Rational& w) { return w.is_zero(); })) continue;
    commodity_map[static_cast<std::size_t>(k)] = static_cast<int>(commodities.size());
    commodities.push_back(std::move(c));
  }

  InstanceSpec spec;
  spec.num_nodes = p;
  spec.name = inst.name().empty() ? "shrunk" : inst.name() + "/shrunk";
  spec.mode = inst.mode();
  spec.routing = inst.routing();
  spec.demand = DemandMatrix(p);
  for (int i = 0; i < inst.num_nodes(); ++i) {
    for (int j = 0; j < inst.num_nodes(); ++j) {
      const int bi = block_of(partition, i);
      const int bj = block_of(partition, j);
      if (bi == bj || inst.demand().at(i, j).is_zero()) continue;
      spec.demand.set(bi, bj, spec.demand.at(bi, bj) + inst.demand().at(i, j));
    }
  }

  std::map<std::pair<int, int>, int> index;
  std::vector<std::vector<int>> arc_map;
  for (int a = 0; a < inst.num_arcs(); ++a) {
    const int bi = block_of(partition, inst.arc(a).tail);
    const int bj = block_of(partition, inst.arc(a).head);
    if (bi == bj) continue;
    auto [it, fresh] = index.emplace(std::make_pair(bi, bj), static_cast<int>(arc_map.size()));
    if (fresh) {
      arc_map.emplace_back();
      spec.arcs.push_back(Arc{bi, bj, Rational(0)});
    }
    arc_map[static_cast<std::size_t>(it->second)].push_back(a);
    spec.arcs[static_cast<std::size_t>(it->second)].existing_capacity += inst.arc(a).existing_capacity;
  }

  for (int m = 0; m < inst.num_facilities(); ++m) {
    Facility f;
    f.capacity = inst.facility(m).capacity;
    for (const auto& arcs : arc_map) {
      Rational best = inst.capacity_cost(arcs.front(), m);
      for (int a : arcs) best = min(best, inst.capacity_cost(a, m));
      f.cost.push_back(best);
    }
    spec.facilities.push_back(std::move(f));
  }

  if (!commodities.empty()) {
    for (const auto& arcs : arc_map) {
      std::vector<Rational> per_k;
      for (int k = 0; k < inst.num_commodities(); ++k) {
        if (commodity_map[static_cast<std::size_t>(k)] < 0) continue;
        Rational best = inst.flow_cost(arcs.front(), k);
        for (int a : arcs) best = min(best, inst.flow_cost(a, k));
        per_k.push_back(best);
      }
      spec.flow_cost.push_back(std::move(per_k));
    }
  }
  spec.explicit_commodities = std::move(commodities);

  return ShrunkInstance{Instance(std::move(spec)), partition, std::move(arc_map), std::move(commodity_map)};
}

LinearCut lift_cut(const LinearCut& cut, const ShrunkInstance& shrunk) {
  LinearCut out;
  out.family = cut.family;
  out.origin = cut.origin.empty() ? "lifted" : cut.origin + " lifted";
  out.rhs = cut.rhs;
  for (const auto& [var, coef] : cut.coeffs) {
    if (var.kind != VarKind::Flow && var.kind != VarKind::Capacity) {
      throw std::invalid_argument("cannot lift a cut on local variables");
    }
    if (var.index < 0 || var.index >= static_cast<int>(shrunk.arc_map.size())) {
      throw std::out_of_range("cut references unknown shrunk arc");
    }
    for (int a : shrunk.arc_map[static_cast<std::size_t>(var.index)]) {
      if (var.kind == VarKind::Capacity) {
        out.add(VarRef::capacity(a, var.sub), coef);
        continue;
      }
      for (std::size_t k = 0; k < shrunk.commodity_map.size(); ++k) {
        if (shrunk.commodity_map[k] == var.sub) out.add(VarRef::flow(a, static_cast<int>(k)), coef);
      }
    }
  }
  return out;
}

bool blocks_connected(const Instance& inst, const NodePartition& partition) {
  check_partition(inst, partition);
  const int n = inst.num_nodes();
  std::vector<int> parent(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) parent[static_cast<std::size_t>(i)] = i;
  std::function<int(int)> find = [&](int i) {
    while (parent[static_cast<std::size_t>(i)] != i) i = parent[static_cast<std::size_t>(i)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(i)])];
    return i;
  };
  for (const Arc& arc : inst.arcs()) {
    if (block_of(partition, arc.tail) == block_of(partition, arc.head)) {
      parent[static_cast<std::size_t>(find(arc.tail))] = find(arc.head);
    }
  }
  for (int b = 0; b < partition.num_blocks; ++b) {
    const auto nodes = partition.members(b);
    for (int v : nodes) {
      if (find(v) != find(nodes.front())) return false;
    }
  }
  return true;
}

LiftFacetReport lift_facet_report(const LinearCut& shrunk_cut, const Instance& inst, const NodePartition& partition) {
  LiftFacetReport r;
  r.no_flow_terms = std::none_of(shrunk_cut.coeffs.begin(), shrunk_cut.coeffs.end(),
                                 [](const auto& kv) { return kv.first.kind == VarKind::Flow && !kv.second.is_zero(); });
  r.positive_rhs = shrunk_cut.rhs.sign() > 0;
  r.blocks_connected = blocks_connected(inst, partition);
  return r;
}

namespace {

LinearCut metric_lhs(const Instance& inst, const std::vector<Rational>& v, Rational& existing) {
  LinearCut cut;
  cut.family = CutFamily::Metric;
  for (int a = 0; a < inst.num_arcs(); ++a) {
    const Rational& va = v[static_cast<std::size_t>(a)];
    if (va.is_zero()) continue;
    existing += va * inst.arc(a).existing_capacity;
    for (int m = 0; m < inst.num_facilities(); ++m) {
      cut.add(VarRef::capacity(a, m), va * Rational(inst.facility(m).capacity));
    }
  }
  return cut;
}

}  // namespace

LinearCut metric_cut(const Instance& inst, const MetricVector& mv) {
  if (static_cast<int>(mv.v.size()) != inst.num_arcs()) throw std::invalid_argument("metric vector has wrong size");
  Rational existing;
  LinearCut cut = metric_lhs(inst, mv.v, existing);
  cut.rhs = metric_demand(inst, mv) - existing;
  cut.origin = "metric";
  return cut;
}

std::optional<MetricSeparation> separate_metric(const Instance& inst, const FractionalPoint& p,
                                                const RoutingOptions& options) {
  RoutingCheck check = check_feasible_routing(inst, p.y, options);
  if (check.feasible) return std::nullopt;
  MetricVector mv = std::move(*check.certificate);
  Rational total;
  for (const auto& v : mv.v) total += v;
  if (total.sign() > 0) {
    for (auto& v : mv.v) v /= total;
    for (auto& row : mv.u) {
      for (auto& u : row) u /= total;
    }
  }
  LinearCut cut = metric_cut(inst, mv);
  return MetricSeparation{std::move(mv), std::move(cut)};
}

LinearCut integral_metric_cut(const Instance& inst, const MetricVector& mv) {
  for (const auto& v : mv.v) {
    if (!v.is_integer()) throw std::invalid_argument("metric vector v is not integral");
  }
  for (const auto& row : mv.u) {
    for (const auto& u : row) {
      if (!u.is_integer()) throw std::invalid_argument("metric potentials u are not integral");
    }
  }
  LinearCut cut = metric_cut(inst, mv);
  cut.rhs = cut.rhs.ceil();
  cut.origin = "integral metric";
  return cut;
}

namespace {

// sum over the arcs of sum_m alpha_m y_{m,a}, alpha read from LocalY(m).
LinearCut expand_knapsack_cut(const LinearCut& local, const std::vector<int>& arcs, int num_facilities) {
  LinearCut cut;
  cut.family = local.family;
  cut.origin = local.origin;
  cut.rhs = local.rhs;
  for (int a : arcs) {
    for (int m = 0; m < num_facilities; ++m) {
      cut.add(VarRef::capacity(a, m), local.coeff(VarRef::local_y(m)));
    }
  }
  return cut;
}

std::vector<long> capacities(const Instance& inst) {
  std::vector<long> c;
  for (const auto& f : inst.facilities()) c.push_back(f.capacity);
  return c;
}

}  // namespace

std::optional<KnapsackCoverSet> knapsack_cover_from_two_partition(const ShrunkInstance& shrunk) {
  const Instance& two = shrunk.instance;
  if (two.num_nodes() != 2) throw std::invalid_argument("expected a two-node shrunk instance");
  Rational b;
  for (const auto& c : two.commodities()) {
    if (c.source == 0) b += c.net_demand[1];
  }
  const int a = two.find_arc(0, 1);
  if (a >= 0) b -= two.arc(a).existing_capacity;
  if (b.sign() <= 0) return std::nullopt;
  return KnapsackCoverSet{capacities(two), b};
}

std::vector<LinearCut> two_partition_cuts(const Instance& inst, const NodePartition& partition) {
  if (partition.num_blocks != 2) throw std::invalid_argument("expected a two-block partition");
  const ShrunkInstance shrunk = shrink(inst, partition);
  const auto set = knapsack_cover_from_two_partition(shrunk);
  if (!set) return {};
  const int a = shrunk.instance.find_arc(0, 1);
  const std::vector<int> arcs = a >= 0 ? shrunk.arc_map[static_cast<std::size_t>(a)] : std::vector<int>{};
  std::vector<LinearCut> out;
  for (const auto& local : all_iterative_mir_cuts(*set)) {
    out.push_back(expand_knapsack_cut(local, arcs, inst.num_facilities()));
  }
  return out;
}

ThreePartitionData three_partition_data(const ShrunkInstance& shrunk) {
  const Instance& g = shrunk.instance;
  if (g.num_nodes() != 3) throw std::invalid_argument("expected a three-node shrunk instance");
  ThreePartitionData data;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      data.s[static_cast<std::size_t>(i)] += g.demand().at(i, j);
      data.t[static_cast<std::size_t>(j)] += g.demand().at(i, j);
    }
  }
  for (const Arc& arc : g.arcs()) {
    data.s[static_cast<std::size_t>(arc.tail)] -= arc.existing_capacity;
    data.t[static_cast<std::size_t>(arc.head)] -= arc.existing_capacity;
  }
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      if (i == j) continue;
      const int k = 3 - i - j;
      // v^{ij}: ones on (i,j), (i,k), (j,k).
      std::vector<Rational> v;
      for (const Arc& arc : g.arcs()) {
        const bool one = (arc.tail == i && arc.head == j) || (arc.tail == i && arc.head == k) ||
                         (arc.tail == j && arc.head == k);
        v.push_back(Rational(one ? 1 : 0));
      }
      const MetricVector mv = with_shortest_path_potentials(g, std::move(v));
      data.d[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = metric_cut(g, mv).rhs;
    }
  }
  return data;
}

Rational three_partition_rhs(const ThreePartitionData& data) {
  Rational sum;
  for (int i = 0; i < 3; ++i) {
    sum += max(Rational(0), data.s[static_cast<std::size_t>(i)].ceil());
    sum += max(Rational(0), data.t[static_cast<std::size_t>(i)].ceil());
  }
  return (sum / Rational(2)).ceil();
}

Rational three_partition_metric_rhs(const ThreePartitionData& data) {
  std::vector<Rational> pair;
  for (int j = 0; j < 3; ++j) {
    Rational s;
    for (int i = 0; i < 3; ++i) {
      if (i != j) s += data.d[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)].ceil();
    }
    pair.push_back(s);
  }
  std::sort(pair.begin(), pair.end(), std::greater<>());
  return ((pair[0] + pair[1]) / Rational(2)).ceil();
}

namespace {

LinearCut total_capacity_lhs(const Instance& inst, const ShrunkInstance& shrunk) {
  LinearCut shrunk_cut;
  for (int a = 0; a < shrunk.instance.num_arcs(); ++a) {
    for (int m = 0; m < inst.num_facilities(); ++m) {
      shrunk_cut.add(VarRef::capacity(a, m), Rational(inst.facility(m).capacity));
    }
  }
  return lift_cut(shrunk_cut, shrunk);
}

}  // namespace

std::optional<LinearCut> three_partition_cut(const Instance& inst, const NodePartition& partition) {
  if (partition.num_blocks != 3) throw std::invalid_argument("expected a three-block partition");
  const ShrunkInstance shrunk = shrink(inst, partition);
  const Rational rhs = three_partition_rhs(three_partition_data(shrunk));
  if (rhs.sign() <= 0) return std::nullopt;
  LinearCut cut = total_capacity_lhs(inst, shrunk);
  cut.family = CutFamily::ThreePartition;
  cut.rhs = rhs;
  cut.origin = "three-partition cut-set sum";
  return cut;
}

LinearCut three_partition_metric_cut(const Instance& inst, const NodePartition& partition) {
  if (partition.num_blocks != 3) throw std::invalid_argument("expected a three-block partition");
  const ShrunkInstance shrunk = shrink(inst, partition);
  LinearCut cut = total_capacity_lhs(inst, shrunk);
  cut.family = CutFamily::ThreePartition;
  cut.rhs = three_partition_metric_rhs(three_partition_data(shrunk));
  cut.origin = "three-partition metric";
  return cut;
}

LinearCut select_total_capacity_cut(const std::vector<LinearCut>& candidates) {
  if (candidates.empty()) throw std::invalid_argument("no candidate cuts");
  const LinearCut* best = &candidates.front();
  for (const auto& c : candidates) {
    if (c.coeffs != candidates.front().coeffs) throw std::invalid_argument("candidates have different left-hand sides");
    if (c.rhs > best->rhs) best = &c;
  }
  return *best;
}

KnapsackCoverSet total_capacity_knapsack(const Instance& inst, const LinearCut& cut) {
  for (const auto& [var, coef] : cut.coeffs) {
    if (var.kind != VarKind::Capacity || coef != Rational(inst.facility(var.sub).capacity)) {
      throw std::invalid_argument("not a total capacity cut");
    }
  }
  return KnapsackCoverSet{capacities(inst), cut.rhs};
}

std::vector<LinearCut> total_capacity_cuts(const Instance& inst, const LinearCut& cut) {
  const KnapsackCoverSet set = total_capacity_knapsack(inst, cut);
  if (set.b.sign() <= 0) return {};
  std::vector<int> arcs;
  for (const auto& [var, coef] : cut.coeffs) {
    if (arcs.empty() || arcs.back() != var.index) arcs.push_back(var.index);
  }
  std::vector<LinearCut> out;
  for (auto local : all_iterative_mir_cuts(set)) {
    local.family = cut.family;
    out.push_back(expand_knapsack_cut(local, arcs, inst.num_facilities()));
  }
  return out;
}

}  // namespace netdes
