#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "netdes/rational.hpp"

namespace netdes {

struct Arc {
  int tail = 0;
  int head = 0;
  Rational existing_capacity;
};

// A capacity unit installable in integer multiples. cost[a] is the price of
// one unit on arc a.
struct Facility {
  long capacity = 1;
  std::vector<Rational> cost;
};

// Traffic t_ij from node i to node j.
class DemandMatrix {
 public:
  DemandMatrix() = default;
  explicit DemandMatrix(int num_nodes)
      : n_(num_nodes), t_(static_cast<std::size_t>(num_nodes) * num_nodes) {}

  int num_nodes() const { return n_; }
  const Rational& at(int i, int j) const { return t_[index(i, j)]; }
  void set(int i, int j, Rational value) { t_[index(i, j)] = std::move(value); }
  // Sum of row i: total traffic leaving i.
  Rational outgoing(int i) const;
  Rational total() const;

 private:
  std::size_t index(int i, int j) const;

  int n_ = 0;
  std::vector<Rational> t_;
};

// A commodity with a unique supplier `source`. net_demand[i] is w_i^k: the
// amount that must enter node i; the source carries minus the total supply.
struct Commodity {
  int source = 0;
  std::vector<Rational> net_demand;

  Rational supply() const { return -net_demand[static_cast<std::size_t>(source)]; }
};

enum class CommodityMode { Aggregated, Disaggregated };
enum class Routing { Splittable, Unsplittable };

std::vector<Commodity> build_aggregated_commodities(const DemandMatrix& demand);
std::vector<Commodity> build_disaggregated_commodities(const DemandMatrix& demand);

// Least-cost installation of capacity z with two facility types:
// min{d1*y1 + d2*y2 : c1*y1 + c2*y2 >= z, y integer >= 0}.
Rational installation_cost(const Rational& z, long c1, long c2, const Rational& d1,
                           const Rational& d2);

// Raw, mutable description of a network design instance. Turned into an
// immutable Instance after validation.
struct InstanceSpec {
  int num_nodes = 0;
  std::vector<Arc> arcs;
  std::vector<Facility> facilities;
  DemandMatrix demand;
  // Per arc, either one entry (all commodities pay the same) or one entry per
  // commodity. Empty means zero flow cost.
  std::vector<std::vector<Rational>> flow_cost;
  CommodityMode mode = CommodityMode::Aggregated;
  Routing routing = Routing::Splittable;
  // Overrides the commodities derived from the demand matrix; used by node
  // shrinking where per-node balances are aggregated.
  std::optional<std::vector<Commodity>> explicit_commodities;
  std::string name;
};

// Itemized invariant violations; empty when the InstanceSpec is well formed.
std::vector<std::string> validate_instance(const InstanceSpec& spec);

class InvalidInstance : public std::invalid_argument {
 public:
  explicit InvalidInstance(std::vector<std::string> diagnostics);
  const std::vector<std::string>& diagnostics() const { return diagnostics_; }

 private:
  std::vector<std::string> diagnostics_;
};

class Instance {
 public:
  // Merges parallel arcs (summing existing capacity), validates, and derives
  // commodities. Throws InvalidInstance.
  explicit Instance(InstanceSpec spec);

  const std::string& name() const { return name_; }
  int num_nodes() const { return num_nodes_; }
  int num_arcs() const { return static_cast<int>(arcs_.size()); }
  int num_facilities() const { return static_cast<int>(facilities_.size()); }
  int num_commodities() const { return static_cast<int>(commodities_.size()); }

  const std::vector<Arc>& arcs() const { return arcs_; }
  const Arc& arc(int a) const { return arcs_[static_cast<std::size_t>(a)]; }
  const std::vector<Facility>& facilities() const { return facilities_; }
  const Facility& facility(int m) const { return facilities_[static_cast<std::size_t>(m)]; }
  const std::vector<Commodity>& commodities() const { return commodities_; }
  const Commodity& commodity(int k) const { return commodities_[static_cast<std::size_t>(k)]; }
  const DemandMatrix& demand() const { return demand_; }
  CommodityMode mode() const { return mode_; }
  Routing routing() const { return routing_; }

  const Rational& flow_cost(int arc, int commodity) const;
  const Rational& capacity_cost(int arc, int facility) const {
    return facility_cost_[static_cast<std::size_t>(arc) * facilities_.size() +
                          static_cast<std::size_t>(facility)];
  }

  // Arc id of (tail, head) or -1.
  int find_arc(int tail, int head) const;
  const std::vector<int>& out_arcs(int node) const { return out_[static_cast<std::size_t>(node)]; }
  const std::vector<int>& in_arcs(int node) const { return in_[static_cast<std::size_t>(node)]; }

  // The InstanceSpec this instance was built from (after parallel-arc merging).
  const InstanceSpec& spec() const { return spec_; }

 private:
  InstanceSpec spec_;
  std::string name_;
  int num_nodes_ = 0;
  std::vector<Arc> arcs_;
  std::vector<Facility> facilities_;
  std::vector<Commodity> commodities_;
  DemandMatrix demand_;
  CommodityMode mode_ = CommodityMode::Aggregated;
  Routing routing_ = Routing::Splittable;
  std::vector<Rational> flow_cost_;      // arc-major, per commodity
  std::vector<Rational> facility_cost_;  // arc-major, per facility
  std::map<std::pair<int, int>, int> arc_index_;
  std::vector<std::vector<int>> out_, in_;
};

// Sums existing capacity of duplicate (tail, head) pairs; facility and flow
// costs of the first occurrence are kept.
InstanceSpec merge_parallel_arcs(InstanceSpec spec);

}  // namespace netdes
