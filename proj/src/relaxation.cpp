#include "netdes/relaxation.hpp"

#include <stdexcept>

namespace netdes {

int RelaxationModel::column(const VarRef& v) const {
  switch (v.kind) {
    case VarKind::Flow: return flow_column(v.index, v.sub);
    case VarKind::Capacity: return capacity_column(v.index, v.sub);
    default: throw std::invalid_argument("local variable in a network cut: " + to_string(v));
  }
}

FractionalPoint RelaxationModel::point_from(const std::vector<double>& primal, long max_den) const {
  std::vector<Rational> exact;
  exact.reserve(primal.size());
  for (double v : primal) exact.push_back(v <= 0 ? Rational(0) : Rational::from_double(v, max_den));
  return point_from(exact);
}

FractionalPoint RelaxationModel::point_from(const std::vector<Rational>& primal) const {
  FractionalPoint p(num_arcs, num_commodities, num_facilities);
  for (int a = 0; a < num_arcs; ++a) {
    for (int k = 0; k < num_commodities; ++k) {
      p.flow(a, k) = max(Rational(0), primal[static_cast<std::size_t>(flow_column(a, k))]);
    }
    for (int m = 0; m < num_facilities; ++m) {
      p.cap(a, m) = max(Rational(0), primal[static_cast<std::size_t>(capacity_column(a, m))]);
    }
  }
  return p;
}

RelaxationModel build_relaxation(const Instance& inst, const std::vector<LinearCut>& cuts) {
  RelaxationModel model;
  model.num_arcs = inst.num_arcs();
  model.num_commodities = inst.num_commodities();
  model.num_facilities = inst.num_facilities();
  LPModel& lp = model.lp;
  for (int a = 0; a < inst.num_arcs(); ++a) {
    for (int k = 0; k < inst.num_commodities(); ++k) {
      lp.add_column("x_" + std::to_string(a) + "_" + std::to_string(k), inst.flow_cost(a, k),
                    inst.commodity(k).supply());
    }
  }
  for (int a = 0; a < inst.num_arcs(); ++a) {
    for (int m = 0; m < inst.num_facilities(); ++m) {
      lp.add_column("y_" + std::to_string(a) + "_" + std::to_string(m), inst.capacity_cost(a, m));
    }
  }
  for (int k = 0; k < inst.num_commodities(); ++k) {
    for (int i = 0; i < inst.num_nodes(); ++i) {
      std::vector<std::pair<int, Rational>> row;
      for (int a : inst.in_arcs(i)) row.emplace_back(model.flow_column(a, k), Rational(1));
      for (int a : inst.out_arcs(i)) row.emplace_back(model.flow_column(a, k), Rational(-1));
      lp.add_row("bal_" + std::to_string(k) + "_" + std::to_string(i), std::move(row), RowSense::Equal,
                 inst.commodity(k).net_demand[static_cast<std::size_t>(i)]);
    }
  }
  for (int a = 0; a < inst.num_arcs(); ++a) {
    std::vector<std::pair<int, Rational>> row;
    for (int k = 0; k < inst.num_commodities(); ++k) row.emplace_back(model.flow_column(a, k), Rational(1));
    for (int m = 0; m < inst.num_facilities(); ++m) {
      row.emplace_back(model.capacity_column(a, m), -Rational(inst.facility(m).capacity));
    }
    lp.add_row("cap_" + std::to_string(a), std::move(row), RowSense::LessEqual, inst.arc(a).existing_capacity);
  }
  model.first_cut_row = lp.num_rows();
  for (const auto& cut : cuts) add_cut_row(model, cut);
  return model;
}

void add_cut_row(RelaxationModel& model, const LinearCut& cut) {
  std::vector<std::pair<int, Rational>> row;
  for (const auto& [v, c] : cut.coeffs) row.emplace_back(model.column(v), c);
  model.lp.add_row("cut_" + std::to_string(model.lp.num_rows() - model.first_cut_row), std::move(row),
                   RowSense::GreaterEqual, cut.rhs);
}

bool in_metric_cone(const Instance& inst, const MetricVector& mv) {
  if (static_cast<int>(mv.v.size()) != inst.num_arcs() ||
      static_cast<int>(mv.u.size()) != inst.num_commodities()) {
    return false;
  }
  for (const auto& v : mv.v) {
    if (v.sign() < 0) return false;
  }
  for (int k = 0; k < inst.num_commodities(); ++k) {
    const auto& u = mv.u[static_cast<std::size_t>(k)];
    if (!u[static_cast<std::size_t>(inst.commodity(k).source)].is_zero()) return false;
    for (int a = 0; a < inst.num_arcs(); ++a) {
      const Arc& arc = inst.arc(a);
      if (u[static_cast<std::size_t>(arc.head)] - u[static_cast<std::size_t>(arc.tail)] > mv.v[static_cast<std::size_t>(a)]) {
        return false;
      }
    }
  }
  return true;
}

MetricVector with_shortest_path_potentials(const Instance& inst, std::vector<Rational> v) {
  MetricVector mv;
  mv.v = std::move(v);
  const int n = inst.num_nodes();
  for (int k = 0; k < inst.num_commodities(); ++k) {
    std::vector<std::optional<Rational>> dist(static_cast<std::size_t>(n));
    std::vector<char> done(static_cast<std::size_t>(n), 0);
    dist[static_cast<std::size_t>(inst.commodity(k).source)] = Rational(0);
    for (;;) {
      int best = -1;
      for (int i = 0; i < n; ++i) {
        if (done[static_cast<std::size_t>(i)] || !dist[static_cast<std::size_t>(i)]) continue;
        if (best < 0 || *dist[static_cast<std::size_t>(i)] < *dist[static_cast<std::size_t>(best)]) best = i;
      }
      if (best < 0) break;
      done[static_cast<std::size_t>(best)] = 1;
      for (int a : inst.out_arcs(best)) {
        const int h = inst.arc(a).head;
        Rational cand = *dist[static_cast<std::size_t>(best)] + mv.v[static_cast<std::size_t>(a)];
        auto& dh = dist[static_cast<std::size_t>(h)];
        if (!dh || cand < *dh) dh = cand;
      }
    }
    Rational far;
    for (const auto& d : dist) {
      if (d && *d > far) far = *d;
    }
    far += Rational(1);
    std::vector<Rational> u;
    for (const auto& d : dist) u.push_back(d ? *d : far);
    mv.u.push_back(std::move(u));
  }
  return mv;
}

Rational metric_demand(const Instance& inst, const MetricVector& mv) {
  Rational s;
  for (int k = 0; k < inst.num_commodities(); ++k) {
    const auto& w = inst.commodity(k).net_demand;
    for (int i = 0; i < inst.num_nodes(); ++i) {
      s += w[static_cast<std::size_t>(i)] * mv.u[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)];
    }
  }
  return s;
}

std::vector<Rational> total_capacity(const Instance& inst, const std::vector<Rational>& y) {
  if (static_cast<int>(y.size()) != inst.num_arcs() * inst.num_facilities()) {
    throw std::invalid_argument("capacity vector has wrong size");
  }
  std::vector<Rational> cap;
  for (int a = 0; a < inst.num_arcs(); ++a) {
    Rational c = inst.arc(a).existing_capacity;
    for (int m = 0; m < inst.num_facilities(); ++m) {
      c += Rational(inst.facility(m).capacity) * y[static_cast<std::size_t>(a * inst.num_facilities() + m)];
    }
    cap.push_back(std::move(c));
  }
  return cap;
}

RoutingCheck check_feasible_routing(const Instance& inst, const std::vector<Rational>& y,
                                    const RoutingOptions& options) {
  for (const auto& v : y) {
    if (v.sign() < 0) throw std::invalid_argument("negative capacity variable");
  }
  return check_feasible_capacities(inst, total_capacity(inst, y), options);
}

namespace {

LPModel routing_model(const Instance& inst, const std::vector<Rational>& capacity) {
  LPModel lp;
  const int K = inst.num_commodities();
  for (int a = 0; a < inst.num_arcs(); ++a) {
    for (int k = 0; k < K; ++k) lp.add_column("x_" + std::to_string(a) + "_" + std::to_string(k), Rational(0));
  }
  for (int k = 0; k < K; ++k) {
    for (int i = 0; i < inst.num_nodes(); ++i) {
      std::vector<std::pair<int, Rational>> row;
      for (int a : inst.in_arcs(i)) row.emplace_back(a * K + k, Rational(1));
      for (int a : inst.out_arcs(i)) row.emplace_back(a * K + k, Rational(-1));
      lp.add_row("bal", std::move(row), RowSense::Equal, inst.commodity(k).net_demand[static_cast<std::size_t>(i)]);
    }
  }
  for (int a = 0; a < inst.num_arcs(); ++a) {
    std::vector<std::pair<int, Rational>> row;
    for (int k = 0; k < K; ++k) row.emplace_back(a * K + k, Rational(1));
    lp.add_row("cap", std::move(row), RowSense::LessEqual, capacity[static_cast<std::size_t>(a)]);
  }
  return lp;
}

// Capacity-row multipliers are <= 0; their negation is the arc weight v.
template <class T>
std::vector<Rational> arc_weights(const Instance& inst, const std::vector<T>& farkas) {
  const std::size_t base = static_cast<std::size_t>(inst.num_commodities() * inst.num_nodes());
  std::vector<Rational> v;
  for (int a = 0; a < inst.num_arcs(); ++a) {
    const T& lam = farkas[base + static_cast<std::size_t>(a)];
    if constexpr (std::is_same_v<T, double>) {
      v.push_back(lam >= 0 ? Rational(0) : Rational::from_double(-lam));
    } else {
      v.push_back(lam.sign() >= 0 ? Rational(0) : -lam);
    }
  }
  return v;
}

bool certifies(const Instance& inst, const std::vector<Rational>& capacity, const MetricVector& mv) {
  Rational lhs;
  for (int a = 0; a < inst.num_arcs(); ++a) lhs += capacity[static_cast<std::size_t>(a)] * mv.v[static_cast<std::size_t>(a)];
  return lhs < metric_demand(inst, mv);
}

}  // namespace

RoutingCheck check_feasible_capacities(const Instance& inst, const std::vector<Rational>& capacity,
                                       const RoutingOptions& options) {
  if (static_cast<int>(capacity.size()) != inst.num_arcs()) {
    throw std::invalid_argument("capacity vector has wrong size");
  }
  RoutingCheck out;
  // Demand at a node unreachable from its source: no capacity helps.
  {
    const MetricVector reach = with_shortest_path_potentials(inst, std::vector<Rational>(static_cast<std::size_t>(inst.num_arcs())));
    if (certifies(inst, capacity, reach)) {
      out.certificate = reach;
      return out;
    }
  }
  const LPModel lp = routing_model(inst, capacity);
  if (!options.exact) {
    const LPSolution sol = solve(lp, options.lp);
    if (sol.status == LPStatus::Optimal) {
      out.feasible = true;
      return out;
    }
    if (sol.status == LPStatus::Infeasible) {
      MetricVector mv = with_shortest_path_potentials(inst, arc_weights(inst, sol.farkas_rows));
      if (certifies(inst, capacity, mv)) {
        out.certificate = std::move(mv);
        return out;
      }
    }
  }
  // Exact fallback: decides borderline cases and yields an exact certificate.
  const ExactLPSolution sol = solve_exact(lp, options.lp);
  if (sol.status == LPStatus::Optimal) {
    out.feasible = true;
    return out;
  }
  if (sol.status != LPStatus::Infeasible) throw std::runtime_error("routing LP: " + to_string(sol.status));
  MetricVector mv = with_shortest_path_potentials(inst, arc_weights(inst, sol.farkas_rows));
  if (!certifies(inst, capacity, mv)) throw std::logic_error("routing certificate does not separate");
  out.certificate = std::move(mv);
  return out;
}

}  // namespace netdes
