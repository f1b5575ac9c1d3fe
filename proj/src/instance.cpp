#include "netdes/instance.hpp"

#include <set>
#include <sstream>

namespace netdes {

std::size_t DemandMatrix::index(int i, int j) const {
  if (i < 0 || j < 0 || i >= n_ || j >= n_) {
    throw std::out_of_range("demand index out of range");
  }
  return static_cast<std::size_t>(i) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(j);
}

Rational DemandMatrix::outgoing(int i) const {
  Rational s;
  for (int j = 0; j < n_; ++j) s += at(i, j);
  return s;
}

Rational DemandMatrix::total() const {
  Rational s;
  for (const auto& t : t_) s += t;
  return s;
}

std::vector<Commodity> build_aggregated_commodities(const DemandMatrix& demand) {
  std::vector<Commodity> out;
  const int n = demand.num_nodes();
  for (int k = 0; k < n; ++k) {
    const Rational supply = demand.outgoing(k);
    if (supply.sign() <= 0) continue;
    Commodity c;
    c.source = k;
    c.net_demand.assign(static_cast<std::size_t>(n), Rational(0));
    for (int i = 0; i < n; ++i) {
      if (i != k) c.net_demand[static_cast<std::size_t>(i)] = demand.at(k, i);
    }
    c.net_demand[static_cast<std::size_t>(k)] = -supply;
    out.push_back(std::move(c));
  }
  return out;
}

std::vector<Commodity> build_disaggregated_commodities(const DemandMatrix& demand) {
  std::vector<Commodity> out;
  const int n = demand.num_nodes();
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j || demand.at(i, j).sign() <= 0) continue;
      Commodity c;
      c.source = i;
      c.net_demand.assign(static_cast<std::size_t>(n), Rational(0));
      c.net_demand[static_cast<std::size_t>(j)] = demand.at(i, j);
      c.net_demand[static_cast<std::size_t>(i)] = -demand.at(i, j);
      out.push_back(std::move(c));
    }
  }
  return out;
}

Rational installation_cost(const Rational& z, long c1, long c2, const Rational& d1,
                           const Rational& d2) {
  if (z.sign() < 0) throw std::invalid_argument("installation_cost: negative capacity");
  if (c1 <= 0 || c2 <= 0) throw std::invalid_argument("installation_cost: capacities must be positive");
  // For each count of the second facility the first covers the remainder.
  const long y2_max = (z / Rational(c2)).ceil().raw().get_num().get_si();
  std::optional<Rational> best;
  for (long y2 = 0; y2 <= y2_max; ++y2) {
    Rational rest = z - Rational(c2) * Rational(y2);
    Rational y1 = rest.sign() > 0 ? (rest / Rational(c1)).ceil() : Rational(0);
    Rational cost = d1 * y1 + d2 * Rational(y2);
    if (!best || cost < *best) best = cost;
  }
  return *best;
}

namespace {

std::size_t commodity_count(const InstanceSpec& spec) {
  if (spec.explicit_commodities) return spec.explicit_commodities->size();
  if (spec.demand.num_nodes() != spec.num_nodes) return 0;
  return spec.mode == CommodityMode::Aggregated
             ? build_aggregated_commodities(spec.demand).size()
             : build_disaggregated_commodities(spec.demand).size();
}

}  // namespace

std::vector<std::string> validate_instance(const InstanceSpec& spec) {
  std::vector<std::string> errors;
  auto err = [&](const std::string& s) { errors.push_back(s); };
  const int n = spec.num_nodes;
  if (n < 1) err("instance has no nodes");

  std::set<std::pair<int, int>> seen;
  for (std::size_t a = 0; a < spec.arcs.size(); ++a) {
    const Arc& arc = spec.arcs[a];
    std::ostringstream id;
    id << "arc " << a << " (" << arc.tail << "->" << arc.head << ")";
    if (arc.tail < 0 || arc.tail >= n || arc.head < 0 || arc.head >= n) {
      err(id.str() + ": references unknown node");
    }
    if (arc.tail == arc.head) err(id.str() + ": self loop");
    if (arc.existing_capacity.sign() < 0) err(id.str() + ": negative existing capacity");
    if (!seen.insert({arc.tail, arc.head}).second) err(id.str() + ": parallel arc");
  }

  if (spec.facilities.empty()) err("no facility types");
  for (std::size_t m = 0; m < spec.facilities.size(); ++m) {
    const Facility& f = spec.facilities[m];
    if (f.capacity <= 0) err("facility " + std::to_string(m) + ": capacity must be positive");
    if (m > 0 && f.capacity <= spec.facilities[m - 1].capacity) {
      err("facility capacities not increasing at facility " + std::to_string(m));
    }
    if (f.cost.size() != spec.arcs.size()) {
      err("facility " + std::to_string(m) + ": expected one cost per arc");
    }
    for (const auto& d : f.cost) {
      if (d.sign() < 0) {
        err("facility " + std::to_string(m) + ": negative installation cost");
        break;
      }
    }
  }

  if (spec.demand.num_nodes() != n) {
    err("demand matrix dimension does not match node count");
  } else {
    for (int i = 0; i < n; ++i) {
      if (!spec.demand.at(i, i).is_zero()) err("nonzero diagonal demand at node " + std::to_string(i));
      for (int j = 0; j < n; ++j) {
        if (spec.demand.at(i, j).sign() < 0) {
          err("negative demand " + std::to_string(i) + "->" + std::to_string(j));
        }
      }
    }
  }

  const std::size_t num_k = commodity_count(spec);
  if (!spec.flow_cost.empty()) {
    if (spec.flow_cost.size() != spec.arcs.size()) {
      err("flow costs: expected one entry per arc");
    } else {
      for (std::size_t a = 0; a < spec.flow_cost.size(); ++a) {
        const auto& fc = spec.flow_cost[a];
        if (fc.size() != 1 && fc.size() != num_k) {
          err("flow costs of arc " + std::to_string(a) + ": expected 1 or one per commodity");
        }
      }
    }
  }

  if (spec.explicit_commodities) {
    for (std::size_t k = 0; k < spec.explicit_commodities->size(); ++k) {
      const Commodity& c = (*spec.explicit_commodities)[k];
      if (static_cast<int>(c.net_demand.size()) != n || c.source < 0 || c.source >= n) {
        err("commodity " + std::to_string(k) + ": malformed");
        continue;
      }
      Rational balance;
      for (const auto& w : c.net_demand) balance += w;
      if (!balance.is_zero()) err("commodity " + std::to_string(k) + ": balances do not sum to zero");
    }
  }

  if (spec.routing == Routing::Unsplittable && spec.mode != CommodityMode::Disaggregated) {
    err("unsplittable routing requires disaggregated commodities");
  }
  return errors;
}

namespace {

std::string join(const std::vector<std::string>& v) {
  std::string s = "invalid instance:";
  for (const auto& e : v) s += "\n  " + e;
  return s;
}

}  // namespace

InvalidInstance::InvalidInstance(std::vector<std::string> diagnostics)
    : std::invalid_argument(join(diagnostics)), diagnostics_(std::move(diagnostics)) {}

InstanceSpec merge_parallel_arcs(InstanceSpec spec) {
  std::map<std::pair<int, int>, std::size_t> first;
  std::vector<std::size_t> keep;
  std::vector<Arc> arcs;
  for (std::size_t a = 0; a < spec.arcs.size(); ++a) {
    const auto key = std::make_pair(spec.arcs[a].tail, spec.arcs[a].head);
    auto it = first.find(key);
    if (it == first.end()) {
      first.emplace(key, arcs.size());
      keep.push_back(a);
      arcs.push_back(spec.arcs[a]);
    } else {
      arcs[it->second].existing_capacity += spec.arcs[a].existing_capacity;
    }
  }
  if (arcs.size() == spec.arcs.size()) return spec;
  for (auto& f : spec.facilities) {
    if (f.cost.size() != spec.arcs.size()) continue;
    std::vector<Rational> cost;
    for (std::size_t a : keep) cost.push_back(f.cost[a]);
    f.cost = std::move(cost);
  }
  if (spec.flow_cost.size() == spec.arcs.size()) {
    std::vector<std::vector<Rational>> fc;
    for (std::size_t a : keep) fc.push_back(spec.flow_cost[a]);
    spec.flow_cost = std::move(fc);
  }
  spec.arcs = std::move(arcs);
  return spec;
}

Instance::Instance(InstanceSpec spec) {
  spec = merge_parallel_arcs(std::move(spec));
  auto errors = validate_instance(spec);
  if (!errors.empty()) throw InvalidInstance(std::move(errors));

  name_ = spec.name;
  num_nodes_ = spec.num_nodes;
  arcs_ = spec.arcs;
  facilities_ = spec.facilities;
  demand_ = spec.demand;
  mode_ = spec.mode;
  routing_ = spec.routing;
  if (spec.explicit_commodities) {
    commodities_ = *spec.explicit_commodities;
  } else {
    commodities_ = mode_ == CommodityMode::Aggregated ? build_aggregated_commodities(demand_)
                                                      : build_disaggregated_commodities(demand_);
  }

  const std::size_t num_a = arcs_.size();
  const std::size_t num_k = commodities_.size();
  flow_cost_.assign(num_a * num_k, Rational(0));
  if (!spec.flow_cost.empty()) {
    for (std::size_t a = 0; a < num_a; ++a) {
      for (std::size_t k = 0; k < num_k; ++k) {
        const auto& fc = spec.flow_cost[a];
        flow_cost_[a * num_k + k] = fc.size() == 1 ? fc[0] : fc[k];
      }
    }
  }
  facility_cost_.assign(num_a * facilities_.size(), Rational(0));
  for (std::size_t a = 0; a < num_a; ++a) {
    for (std::size_t m = 0; m < facilities_.size(); ++m) {
      facility_cost_[a * facilities_.size() + m] = facilities_[m].cost[a];
    }
  }

  out_.assign(static_cast<std::size_t>(num_nodes_), {});
  in_.assign(static_cast<std::size_t>(num_nodes_), {});
  for (std::size_t a = 0; a < num_a; ++a) {
    arc_index_[{arcs_[a].tail, arcs_[a].head}] = static_cast<int>(a);
    out_[static_cast<std::size_t>(arcs_[a].tail)].push_back(static_cast<int>(a));
    in_[static_cast<std::size_t>(arcs_[a].head)].push_back(static_cast<int>(a));
  }
  spec_ = std::move(spec);
}

const Rational& Instance::flow_cost(int arc, int commodity) const {
  return flow_cost_[static_cast<std::size_t>(arc) * commodities_.size() +
                    static_cast<std::size_t>(commodity)];
}

int Instance::find_arc(int tail, int head) const {
  auto it = arc_index_.find({tail, head});
  return it == arc_index_.end() ? -1 : it->second;
}

}  // namespace netdes
