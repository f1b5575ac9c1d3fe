#pragma once

#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "netdes/cut.hpp"
#include "netdes/instance.hpp"
#include "netdes/partition_cuts.hpp"

namespace netdes {

// Which node partitions the cut-set and partition separators look at.
struct PartitionHeuristics {
  int exhaustive_two_up_to = 8;    // all ordered 2-partitions up to this many nodes
  int random_two = 24;             // random bipartitions on larger graphs
  int exhaustive_three_up_to = 5;  // all 3-partitions up to this many nodes
  int random_three = 12;
};

struct Config {
  std::set<CutFamily> families;
  int max_rounds = 50;
  Rational eps = Rational(1, 1'000'000);
  PartitionHeuristics partitions;
  std::vector<int> k_split = {2, 3};
  unsigned seed = 1;
  bool parallel = true;
  bool exact_lp = false;
  int enumeration_cap = 12;  // subset enumeration limit for c-strong and k-split
};

// Parses "rc,cstrong,cutset"; "all" enables every family the loop knows.
std::set<CutFamily> parse_families(const std::string& list);
std::string families_to_string(const std::set<CutFamily>& families);
// Families in separation order.
const std::vector<CutFamily>& loop_families();

// Cuts deduplicated by their normalized form.
class CutPool {
 public:
  // False if an identical normalized cut is already present.
  bool insert(const LinearCut& cut);
  bool contains(const LinearCut& cut) const;
  std::size_t size() const { return cuts_.size(); }
  const std::vector<LinearCut>& cuts() const { return cuts_; }
  // Rounds in which each cut held with equality (within eps) at the LP optimum.
  const std::vector<long>& activity() const { return activity_; }
  void record_activity(const FractionalPoint& p, const Rational& eps);

 private:
  std::vector<LinearCut> cuts_;
  std::vector<long> activity_;
  std::set<std::string> keys_;
};

struct RoundReport {
  int round = 0;
  Rational bound;             // LP value at the start of the round
  bool exact_bound = false;
  std::map<CutFamily, int> cuts;  // added after the solve
  Rational max_violation;
  double seconds = 0;
};

struct LoopResult {
  std::vector<RoundReport> rounds;
  std::vector<LinearCut> cuts;  // in the order they were added
  FractionalPoint last_point;
  Rational final_bound;
  bool converged = false;  // stopped because no violated cut was found
};

// Solve, separate every enabled family, add cuts violated by more than eps;
// stop when nothing is added or after max_rounds LP solves.
LoopResult cutting_plane_loop(const Instance& inst, const Config& config);

std::vector<NodePartition> two_partitions(const Instance& inst, const PartitionHeuristics& h, std::mt19937& rng);
std::vector<NodePartition> three_partitions(const Instance& inst, const PartitionHeuristics& h, std::mt19937& rng);

// Violated cuts of the partition-based families for every partition, in
// partition order. Parallel over partitions with OpenMP unless `parallel`
// is false; both paths return the same list.
std::vector<LinearCut> separate_partitions(const Instance& inst, const FractionalPoint& p,
                                           const std::vector<NodePartition>& partitions,
                                           const std::set<CutFamily>& families, const Rational& eps,
                                           bool parallel);
// Arc-based families (rc, cstrong, ksplit) on every arc.
std::vector<LinearCut> separate_arcs(const Instance& inst, const FractionalPoint& p, const Config& config);
// One round of separation in loop order; cuts with violation <= eps dropped.
std::vector<LinearCut> separate_all(const Instance& inst, const FractionalPoint& p, const Config& config,
                                    const std::vector<NodePartition>& two, const std::vector<NodePartition>& three);

struct GeneratorOptions {
  unsigned seed = 1;
  int nodes = 4;
  double density = 0.4;           // probability of each extra arc
  std::vector<long> facilities = {1, 3};
  long demand_scale = 2;          // demands up to this value
  double demand_probability = 0.3;
  double existing_probability = 0.2;
  CommodityMode mode = CommodityMode::Aggregated;
  Routing routing = Routing::Splittable;
};

// Deterministic per seed. A random Hamiltonian cycle keeps the digraph
// strongly connected; at least one pair has positive demand.
Instance generate_instance(const GeneratorOptions& options);

// {instance, rounds:[{bound, cuts, max_violation}], final_bound, oracle_optimum?, gap_closed?}
std::string report_json(const Instance& inst, const LoopResult& result,
                        const std::optional<Rational>& oracle_optimum = std::nullopt);

}  // namespace netdes
