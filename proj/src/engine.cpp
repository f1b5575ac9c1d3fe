#include "netdes/engine.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <exception>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "netdes/arc_cuts.hpp"
#include "netdes/cutset_cuts.hpp"
#include "netdes/relaxation.hpp"

namespace netdes {

const std::vector<CutFamily>& loop_families() {
  static const std::vector<CutFamily> order = {
      CutFamily::ResidualCapacity, CutFamily::CStrong,       CutFamily::KSplit,
      CutFamily::CutSet,           CutFamily::FlowCutSet,    CutFamily::MultiFacility,
      CutFamily::Metric,           CutFamily::Partition,     CutFamily::ThreePartition,
  };
  return order;
}

std::set<CutFamily> parse_families(const std::string& list) {
  std::set<CutFamily> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item.erase(std::remove_if(item.begin(), item.end(), [](unsigned char c) { return std::isspace(c); }), item.end());
    if (item.empty()) continue;
    if (item == "all") {
      out.insert(loop_families().begin(), loop_families().end());
      continue;
    }
    bool found = false;
    for (CutFamily f : loop_families()) {
      if (family_name(f) == item) {
        out.insert(f);
        found = true;
      }
    }
    // "partition" covers the two- and three-partition cuts.
    if (item == "partition") out.insert(CutFamily::ThreePartition);
    if (!found) throw std::invalid_argument("unknown cut family: " + item);
  }
  return out;
}

std::string families_to_string(const std::set<CutFamily>& families) {
  std::string s;
  for (CutFamily f : loop_families()) {
    if (families.count(f)) s += (s.empty() ? "" : ",") + family_name(f);
  }
  return s;
}

bool CutPool::insert(const LinearCut& cut) {
  if (!keys_.insert(cut.normalized().to_string()).second) return false;
  cuts_.push_back(cut);
  activity_.push_back(0);
  return true;
}

bool CutPool::contains(const LinearCut& cut) const { return keys_.count(cut.normalized().to_string()) > 0; }

void CutPool::record_activity(const FractionalPoint& p, const Rational& eps) {
  for (std::size_t i = 0; i < cuts_.size(); ++i) {
    if ((cuts_[i].lhs(p) - cuts_[i].rhs).abs() <= eps) ++activity_[i];
  }
}

namespace {

bool enabled(const std::set<CutFamily>& f, CutFamily x) { return f.count(x) > 0; }

void keep_violated(std::vector<LinearCut>& out, std::optional<LinearCut> cut, const FractionalPoint& p,
                   const Rational& eps) {
  if (cut && cut->violation(p) > eps) out.push_back(std::move(*cut));
}

std::vector<char> first_block(const NodePartition& part) {
  std::vector<char> in_u;
  for (int b : part.block) in_u.push_back(b == 0 ? 1 : 0);
  return in_u;
}

std::vector<LinearCut> separate_two(const Instance& inst, const FractionalPoint& p, const NodePartition& part,
                                    const std::set<CutFamily>& families, const Rational& eps) {
  std::vector<LinearCut> out;
  const bool cutset_based = enabled(families, CutFamily::CutSet) || enabled(families, CutFamily::FlowCutSet) ||
                            enabled(families, CutFamily::MultiFacility);
  if (cutset_based) {
    const CutSetRelaxation rel = build_cutset(inst, first_block(part));
    if (enabled(families, CutFamily::CutSet)) {
      for (int s = 0; s < inst.num_facilities(); ++s) keep_violated(out, cutset_cut(rel, s), p, eps);
    }
    if (enabled(families, CutFamily::FlowCutSet)) keep_violated(out, separate_flow_cutset_joint(rel, p, false), p, eps);
    if (enabled(families, CutFamily::MultiFacility)) keep_violated(out, separate_flow_cutset_joint(rel, p, true), p, eps);
  }
  if (enabled(families, CutFamily::Partition)) {
    for (auto& cut : two_partition_cuts(inst, part)) keep_violated(out, std::move(cut), p, eps);
  }
  return out;
}

std::vector<LinearCut> separate_three(const Instance& inst, const FractionalPoint& p, const NodePartition& part,
                                      const std::set<CutFamily>& families, const Rational& eps) {
  std::vector<LinearCut> out;
  if (!enabled(families, CutFamily::ThreePartition)) return out;
  std::vector<LinearCut> candidates;
  if (auto sum = three_partition_cut(inst, part)) candidates.push_back(std::move(*sum));
  candidates.push_back(three_partition_metric_cut(inst, part));
  const LinearCut best = select_total_capacity_cut(candidates);
  if (best.rhs.sign() <= 0 || best.empty()) return out;
  keep_violated(out, best, p, eps);
  for (auto& cut : total_capacity_cuts(inst, best)) keep_violated(out, std::move(cut), p, eps);
  return out;
}

std::vector<LinearCut> separate_one(const Instance& inst, const FractionalPoint& p, const NodePartition& part,
                                    const std::set<CutFamily>& families, const Rational& eps) {
  if (part.num_blocks == 2) return separate_two(inst, p, part, families, eps);
  if (part.num_blocks == 3) return separate_three(inst, p, part, families, eps);
  return {};
}

}  // namespace

std::vector<LinearCut> separate_partitions(const Instance& inst, const FractionalPoint& p,
                                           const std::vector<NodePartition>& partitions,
                                           const std::set<CutFamily>& families, const Rational& eps,
                                           bool parallel) {
  const int n = static_cast<int>(partitions.size());
  std::vector<std::vector<LinearCut>> found(partitions.size());
  if (parallel) {
    std::exception_ptr error;
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < n; ++i) {
      try {
        found[static_cast<std::size_t>(i)] = separate_one(inst, p, partitions[static_cast<std::size_t>(i)], families, eps);
      } catch (...) {
#pragma omp critical(netdes_partition_error)
        if (!error) error = std::current_exception();
      }
    }
    if (error) std::rethrow_exception(error);
  } else {
    for (int i = 0; i < n; ++i) {
      found[static_cast<std::size_t>(i)] = separate_one(inst, p, partitions[static_cast<std::size_t>(i)], families, eps);
    }
  }
  std::vector<LinearCut> out;
  for (auto& v : found) {
    for (auto& c : v) out.push_back(std::move(c));
  }
  return out;
}

std::vector<LinearCut> separate_arcs(const Instance& inst, const FractionalPoint& p, const Config& config) {
  std::vector<LinearCut> rc, cs, ks;
  const bool unsplittable = inst.routing() == Routing::Unsplittable;
  for (int a = 0; a < inst.num_arcs(); ++a) {
    for (int s = 0; s < inst.num_facilities(); ++s) {
      ArcSetRelaxation rel = from_capacity_row(inst, a, s);
      if (rel.size() == 0) continue;
      const ArcPoint pt = arc_point(rel, p);
      if (enabled(config.families, CutFamily::ResidualCapacity)) {
        ArcSetRelaxation split = rel;
        split.mode = ArcSetMode::Splittable;
        if (auto cut = separate_residual_capacity(split, pt)) keep_violated(rc, to_network(split, *cut), p, config.eps);
      }
      if (!unsplittable) continue;
      if (enabled(config.families, CutFamily::CStrong)) {
        const NormalizedArcSet norm = normalize_unsplittable(rel);
        const auto sep = separate_c_strong(norm.rel, normalized_point(norm, pt), config.enumeration_cap);
        if (sep.cut) keep_violated(cs, to_network(rel, map_back(norm, *sep.cut)), p, config.eps);
      }
      if (enabled(config.families, CutFamily::KSplit)) {
        for (int k : config.k_split) {
          if (auto cut = separate_k_split(rel, pt, k, config.enumeration_cap)) {
            keep_violated(ks, to_network(rel, *cut), p, config.eps);
          }
        }
      }
    }
  }
  for (auto& c : cs) rc.push_back(std::move(c));
  for (auto& c : ks) rc.push_back(std::move(c));
  return rc;
}

std::vector<LinearCut> separate_all(const Instance& inst, const FractionalPoint& p, const Config& config,
                                    const std::vector<NodePartition>& two, const std::vector<NodePartition>& three) {
  std::vector<LinearCut> out = separate_arcs(inst, p, config);
  std::set<CutFamily> cutset_families, partition_families;
  for (CutFamily f : {CutFamily::CutSet, CutFamily::FlowCutSet, CutFamily::MultiFacility}) {
    if (enabled(config.families, f)) cutset_families.insert(f);
  }
  for (CutFamily f : {CutFamily::Partition, CutFamily::ThreePartition}) {
    if (enabled(config.families, f)) partition_families.insert(f);
  }
  if (!cutset_families.empty()) {
    // One family at a time so the result follows the separation order.
    for (CutFamily f : cutset_families) {
      for (auto& c : separate_partitions(inst, p, two, {f}, config.eps, config.parallel)) out.push_back(std::move(c));
    }
  }
  if (enabled(config.families, CutFamily::Metric)) {
    if (auto sep = separate_metric(inst, p)) keep_violated(out, std::move(sep->cut), p, config.eps);
  }
  if (!partition_families.empty()) {
    for (auto& c : separate_partitions(inst, p, two, partition_families, config.eps, config.parallel)) out.push_back(std::move(c));
    for (auto& c : separate_partitions(inst, p, three, partition_families, config.eps, config.parallel)) out.push_back(std::move(c));
  }
  return out;
}

namespace {

bool proper(const std::vector<int>& labels, int blocks) {
  std::vector<char> used(static_cast<std::size_t>(blocks), 0);
  for (int b : labels) used[static_cast<std::size_t>(b)] = 1;
  return std::all_of(used.begin(), used.end(), [](char u) { return u != 0; });
}

void add_unique(std::vector<NodePartition>& out, std::set<std::vector<int>>& seen, std::vector<int> labels) {
  if (seen.insert(labels).second) out.push_back(NodePartition::from_labels(std::move(labels)));
}

// Relabels blocks in order of first appearance so equal partitions compare equal.
std::vector<int> canonical(const std::vector<int>& labels) {
  std::map<int, int> rename;
  std::vector<int> out;
  for (int b : labels) {
    auto it = rename.emplace(b, static_cast<int>(rename.size())).first;
    out.push_back(it->second);
  }
  return out;
}

}  // namespace

std::vector<NodePartition> two_partitions(const Instance& inst, const PartitionHeuristics& h, std::mt19937& rng) {
  const int n = inst.num_nodes();
  std::vector<NodePartition> out;
  std::set<std::vector<int>> seen;
  if (n < 2) return out;
  if (n <= h.exhaustive_two_up_to) {
    for (long mask = 1; mask < (1L << n) - 1; ++mask) {
      std::vector<int> labels;
      for (int i = 0; i < n; ++i) labels.push_back((mask >> i) & 1 ? 0 : 1);
      add_unique(out, seen, std::move(labels));
    }
    return out;
  }
  for (int i = 0; i < n; ++i) {
    std::vector<int> one(static_cast<std::size_t>(n), 1);
    one[static_cast<std::size_t>(i)] = 0;
    add_unique(out, seen, one);
    for (auto& b : one) b = 1 - b;
    add_unique(out, seen, one);
    // Node i with its out-neighbours.
    std::vector<int> ball(static_cast<std::size_t>(n), 1);
    ball[static_cast<std::size_t>(i)] = 0;
    for (int a : inst.out_arcs(i)) ball[static_cast<std::size_t>(inst.arc(a).head)] = 0;
    if (proper(ball, 2)) add_unique(out, seen, ball);
  }
  std::bernoulli_distribution coin(0.5);
  for (int tries = 0, made = 0; made < h.random_two && tries < 20 * h.random_two; ++tries) {
    std::vector<int> labels;
    for (int i = 0; i < n; ++i) labels.push_back(coin(rng) ? 0 : 1);
    if (!proper(labels, 2) || seen.count(labels)) continue;
    add_unique(out, seen, std::move(labels));
    ++made;
  }
  return out;
}

std::vector<NodePartition> three_partitions(const Instance& inst, const PartitionHeuristics& h, std::mt19937& rng) {
  const int n = inst.num_nodes();
  std::vector<NodePartition> out;
  std::set<std::vector<int>> seen;
  if (n < 3) return out;
  if (n <= h.exhaustive_three_up_to) {
    long total = 1;
    for (int i = 0; i < n; ++i) total *= 3;
    for (long code = 0; code < total; ++code) {
      std::vector<int> labels;
      long c = code;
      for (int i = 0; i < n; ++i, c /= 3) labels.push_back(static_cast<int>(c % 3));
      if (!proper(labels, 3)) continue;
      add_unique(out, seen, canonical(labels));
    }
    return out;
  }
  std::uniform_int_distribution<int> pick(0, 2);
  for (int tries = 0, made = 0; made < h.random_three && tries < 20 * h.random_three; ++tries) {
    std::vector<int> labels;
    for (int i = 0; i < n; ++i) labels.push_back(pick(rng));
    if (!proper(labels, 3)) continue;
    labels = canonical(labels);
    if (seen.count(labels)) continue;
    add_unique(out, seen, std::move(labels));
    ++made;
  }
  return out;
}

namespace {

struct Solved {
  Rational bound;
  FractionalPoint point;
};

Solved solve_relaxation(const RelaxationModel& model, bool exact) {
  if (exact) {
    const ExactLPSolution sol = solve_exact(model.lp);
    if (sol.status != LPStatus::Optimal) throw std::runtime_error("LP relaxation: " + to_string(sol.status));
    return {sol.objective, model.point_from(sol.primal)};
  }
  const LPSolution sol = solve(model.lp);
  if (sol.status != LPStatus::Optimal) throw std::runtime_error("LP relaxation: " + to_string(sol.status));
  return {Rational::from_double(sol.objective), model.point_from(sol.primal)};
}

}  // namespace

LoopResult cutting_plane_loop(const Instance& inst, const Config& config) {
  if (config.max_rounds < 1) throw std::invalid_argument("max_rounds must be at least 1");
  if (config.eps.sign() <= 0) throw std::invalid_argument("eps must be positive");
  LoopResult result;
  RelaxationModel model = build_relaxation(inst);
  CutPool pool;

  std::mt19937 rng(config.seed);
  const auto& f = config.families;
  const bool wants_two = enabled(f, CutFamily::CutSet) || enabled(f, CutFamily::FlowCutSet) ||
                         enabled(f, CutFamily::MultiFacility) || enabled(f, CutFamily::Partition);
  const auto two = wants_two ? two_partitions(inst, config.partitions, rng) : std::vector<NodePartition>{};
  const auto three = enabled(f, CutFamily::ThreePartition) ? three_partitions(inst, config.partitions, rng)
                                                           : std::vector<NodePartition>{};

  for (int round = 1; round <= config.max_rounds; ++round) {
    const auto start = std::chrono::steady_clock::now();
    Solved s = solve_relaxation(model, config.exact_lp);
    RoundReport report;
    report.round = round;
    report.bound = s.bound;
    report.exact_bound = config.exact_lp;
    pool.record_activity(s.point, config.eps);
    result.final_bound = s.bound;
    result.last_point = s.point;

    std::vector<LinearCut> found;
    if (!f.empty() && round < config.max_rounds) found = separate_all(inst, s.point, config, two, three);
    for (auto& cut : found) {
      const Rational v = cut.violation(s.point);
      if (v <= config.eps || !pool.insert(cut)) continue;
      add_cut_row(model, cut);
      ++report.cuts[cut.family];
      report.max_violation = max(report.max_violation, v);
      result.cuts.push_back(std::move(cut));
    }
    report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    result.rounds.push_back(report);
    if (report.cuts.empty()) {
      result.converged = f.empty() || round < config.max_rounds;
      break;
    }
  }
  return result;
}

Instance generate_instance(const GeneratorOptions& o) {
  if (o.nodes < 2 || o.facilities.empty() || o.demand_scale < 1) throw std::invalid_argument("bad generator options");
  std::mt19937 rng(o.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const int n = o.nodes;

  InstanceSpec spec;
  spec.num_nodes = n;
  spec.name = "gen-" + std::to_string(o.seed);
  spec.routing = o.routing;
  spec.mode = o.routing == Routing::Unsplittable ? CommodityMode::Disaggregated : o.mode;

  std::vector<int> order(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
  std::shuffle(order.begin(), order.end(), rng);
  std::set<std::pair<int, int>> arcs;
  for (int i = 0; i < n; ++i) arcs.insert({order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>((i + 1) % n)]});
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i != j && !arcs.count({i, j}) && unit(rng) < o.density) arcs.insert({i, j});
    }
  }
  std::uniform_int_distribution<int> half_units(1, 3);
  std::uniform_int_distribution<int> base_cost(1, 4);
  std::vector<int> base;
  for (const auto& [i, j] : arcs) {
    Rational existing;
    if (unit(rng) < o.existing_probability) existing = Rational(half_units(rng), 2);
    spec.arcs.push_back(Arc{i, j, existing});
    base.push_back(base_cost(rng));
  }
  for (long c : o.facilities) {
    Facility fac;
    fac.capacity = c;
    // (c + 1) / 2 per unit of base cost: larger facilities are cheaper per unit.
    for (int b : base) fac.cost.push_back(Rational(b) * Rational(c + 1, 2));
    spec.facilities.push_back(std::move(fac));
  }

  spec.demand = DemandMatrix(n);
  std::uniform_int_distribution<int> den_pick(1, 4);
  bool any = false;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j || unit(rng) >= o.demand_probability) continue;
      const long den = den_pick(rng);
      std::uniform_int_distribution<long> num(1, o.demand_scale * den);
      spec.demand.set(i, j, Rational(num(rng), den));
      any = true;
    }
  }
  if (!any) {
    std::uniform_int_distribution<int> node(0, n - 1);
    const int i = node(rng);
    const int j = (i + 1 + node(rng) % (n - 1)) % n;
    spec.demand.set(i, j, Rational(1, 2));
  }
  std::sort(spec.facilities.begin(), spec.facilities.end(),
            [](const Facility& a, const Facility& b) { return a.capacity < b.capacity; });
  return Instance(std::move(spec));
}

std::string report_json(const Instance& inst, const LoopResult& result, const std::optional<Rational>& oracle_optimum) {
  nlohmann::ordered_json j;
  j["instance"] = inst.name();
  j["rounds"] = nlohmann::ordered_json::array();
  for (const auto& r : result.rounds) {
    nlohmann::ordered_json round;
    round["round"] = r.round;
    round["bound"] = r.bound.to_double();
    round["bound_exact"] = r.bound.to_string();
    nlohmann::ordered_json cuts = nlohmann::ordered_json::object();
    for (const auto& [family, count] : r.cuts) cuts[family_name(family)] = count;
    round["cuts"] = cuts;
    round["max_violation"] = r.max_violation.to_double();
    round["seconds"] = r.seconds;
    j["rounds"].push_back(round);
  }
  j["final_bound"] = result.final_bound.to_double();
  j["final_bound_exact"] = result.final_bound.to_string();
  j["converged"] = result.converged;
  if (oracle_optimum) {
    j["oracle_optimum"] = oracle_optimum->to_double();
    const Rational plain = result.rounds.empty() ? result.final_bound : result.rounds.front().bound;
    const Rational gap = *oracle_optimum - plain;
    j["gap_closed"] = gap.sign() > 0 ? ((result.final_bound - plain) / gap).to_double() : 1.0;
  }
  return j.dump(2);
}

}  // namespace netdes
