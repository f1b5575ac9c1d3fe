#include "netdes/oracle.hpp"

#include <algorithm>
#include <limits>

#include "netdes/lp.hpp"
#include "netdes/relaxation.hpp"

namespace netdes {

namespace {

constexpr double kSlackTolerance = 1e-7;

Rational total_supply(const Instance& inst) {
  Rational s;
  for (const auto& c : inst.commodities()) s += c.supply();
  return s;
}

// Per arc, the facility vectors within the bounds that are not dominated:
// removing any installed unit would leave less than the total supply.
struct Grid {
  std::vector<std::vector<std::vector<long>>> options;  // per arc
  long size = 1;
};

Grid make_grid(const Instance& inst, const YBounds& bounds, long budget) {
  const int M = inst.num_facilities();
  if (static_cast<int>(bounds.upper.size()) != inst.num_arcs() * M) throw std::invalid_argument("y bounds have wrong size");
  for (long u : bounds.upper) {
    if (u < 0) throw std::invalid_argument("negative y bound");
  }
  const Rational D = total_supply(inst);
  Grid g;
  for (int a = 0; a < inst.num_arcs(); ++a) {
    std::vector<std::vector<long>> opts;
    std::vector<long> y(static_cast<std::size_t>(M), 0);
    while (true) {
      Rational cap = inst.arc(a).existing_capacity;
      for (int m = 0; m < M; ++m) cap += Rational(inst.facility(m).capacity * y[static_cast<std::size_t>(m)]);
      bool keep = true;
      for (int m = 0; m < M && keep; ++m) {
        if (y[static_cast<std::size_t>(m)] > 0 && cap - Rational(inst.facility(m).capacity) >= D) keep = false;
      }
      if (keep) opts.push_back(y);
      int m = 0;
      while (m < M && y[static_cast<std::size_t>(m)] == bounds.upper[static_cast<std::size_t>(a * M + m)]) {
        y[static_cast<std::size_t>(m++)] = 0;
      }
      if (m == M) break;
      ++y[static_cast<std::size_t>(m)];
    }
    const long n = static_cast<long>(opts.size());
    if (g.size > budget / n) throw BudgetExceeded("y grid exceeds the enumeration budget");
    g.size *= n;
    g.options.push_back(std::move(opts));
  }
  return g;
}

std::vector<long> decode(long index, const Grid& g) {
  std::vector<long> y;
  for (const auto& opts : g.options) {
    const long n = static_cast<long>(opts.size());
    const auto& pick = opts[static_cast<std::size_t>(index % n)];
    y.insert(y.end(), pick.begin(), pick.end());
    index /= n;
  }
  return y;
}

// Flow columns a * K + k with x <= supply; balance rows then capacity rows.
LPModel flow_model(const Instance& inst, const std::vector<Rational>& flow_cost) {
  LPModel lp;
  const int K = inst.num_commodities();
  for (int a = 0; a < inst.num_arcs(); ++a) {
    for (int k = 0; k < K; ++k) {
      lp.add_column("x_" + std::to_string(a) + "_" + std::to_string(k), flow_cost[static_cast<std::size_t>(a * K + k)],
                    inst.commodity(k).supply());
    }
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
    lp.add_row("cap", std::move(row), RowSense::LessEqual, Rational(0));
  }
  return lp;
}

std::vector<Rational> capacities(const Instance& inst, const std::vector<long>& y) {
  std::vector<Rational> cap;
  const int M = inst.num_facilities();
  for (int a = 0; a < inst.num_arcs(); ++a) {
    Rational c = inst.arc(a).existing_capacity;
    for (int m = 0; m < M; ++m) c += Rational(inst.facility(m).capacity * y[static_cast<std::size_t>(a * M + m)]);
    cap.push_back(c);
  }
  return cap;
}

void set_capacities(LPModel& lp, const Instance& inst, const std::vector<Rational>& cap) {
  const int first = inst.num_commodities() * inst.num_nodes();
  for (int a = 0; a < inst.num_arcs(); ++a) lp.rows[static_cast<std::size_t>(first + a)].rhs = cap[static_cast<std::size_t>(a)];
}

// Exact minimum of the flow objective for capacities y; none if no routing.
// With `prune`, a float optimum clearly above `threshold` is returned as a
// Stalled placeholder without the exact solve.
std::optional<ExactLPSolution> exact_flow_min(LPModel lp, const Instance& inst, const std::vector<long>& y, bool prune,
                                              const Rational& threshold, double* approx) {
  const auto cap = capacities(inst, y);
  set_capacities(lp, inst, cap);
  const LPSolution fs = solve(lp);
  if (fs.status == LPStatus::Optimal) {
    if (approx) *approx = fs.objective;
    if (prune && fs.objective > threshold.to_double() + kSlackTolerance) {
      ExactLPSolution skip;
      skip.status = LPStatus::Stalled;
      return skip;
    }
  } else if (fs.status == LPStatus::Infeasible) {
    if (!check_feasible_capacities(inst, cap).feasible) return std::nullopt;
  }
  const ExactLPSolution es = solve_exact(lp);
  if (es.status == LPStatus::Infeasible) return std::nullopt;
  if (es.status != LPStatus::Optimal) throw std::runtime_error("routing LP: " + to_string(es.status));
  if (approx) *approx = es.objective.to_double();
  return es;
}

// Exact minimum of the flow objective when every arc can carry the total
// supply; a lower bound for any y. None if the commodities cannot be routed
// at all.
std::optional<Rational> uncapacitated_min(LPModel lp, const Instance& inst) {
  set_capacities(lp, inst, std::vector<Rational>(static_cast<std::size_t>(inst.num_arcs()), total_supply(inst)));
  const ExactLPSolution es = solve_exact(lp);
  if (es.status != LPStatus::Optimal) return std::nullopt;
  return es.objective;
}

// Single-path routings: commodity k sends its whole supply along an arc set
// whose indicator conserves flow (a path plus arc-disjoint cycles).
class UnsplittableRouter {
 public:
  static constexpr int kMaxArcs = 20;

  explicit UnsplittableRouter(const Instance& inst) : inst_(inst) {
    const int A = inst.num_arcs();
    if (A > kMaxArcs) throw BudgetExceeded("too many arcs to enumerate single-path routings");
    for (int k = 0; k < inst.num_commodities(); ++k) {
      const Commodity& c = inst.commodity(k);
      const Rational d = c.supply();
      std::vector<int> want(static_cast<std::size_t>(inst.num_nodes()), 0);
      for (int i = 0; i < inst.num_nodes(); ++i) {
        const Rational unit = c.net_demand[static_cast<std::size_t>(i)] / d;
        if (!unit.is_integer() || unit.abs() > Rational(1)) {
          throw std::invalid_argument("unsplittable routing needs one sink per commodity");
        }
        want[static_cast<std::size_t>(i)] = static_cast<int>(unit.raw().get_num().get_si());
      }
      std::vector<std::vector<int>> options;
      std::vector<int> bal(want.size());
      for (long mask = 0; mask < (1L << A); ++mask) {
        std::fill(bal.begin(), bal.end(), 0);
        for (int a = 0; a < A; ++a) {
          if (mask >> a & 1) {
            ++bal[static_cast<std::size_t>(inst.arc(a).head)];
            --bal[static_cast<std::size_t>(inst.arc(a).tail)];
          }
        }
        if (bal != want) continue;
        std::vector<int> arcs;
        for (int a = 0; a < A; ++a) {
          if (mask >> a & 1) arcs.push_back(a);
        }
        options.push_back(std::move(arcs));
      }
      options_.push_back(std::move(options));
    }
  }

  // Minimum of cost . x over single-path routings within the capacities,
  // with cost arc-major per commodity. Stops early once a value below
  // `stop_below` is found. None if no routing fits.
  std::optional<std::pair<Rational, std::vector<Rational>>> min_cost(const std::vector<Rational>& cost,
                                                                     const std::vector<Rational>& cap,
                                                                     const std::optional<Rational>& stop_below) const {
    const int K = inst_.num_commodities();
    Search s{cost, stop_below, {}, {}, {}, {}, std::vector<std::size_t>(static_cast<std::size_t>(K)), {}, {}};
    for (int k = 0; k < K; ++k) {
      std::vector<std::pair<Rational, std::size_t>> order;
      const auto& opts = options_[static_cast<std::size_t>(k)];
      for (std::size_t o = 0; o < opts.size(); ++o) order.emplace_back(option_cost(cost, k, opts[o]), o);
      std::sort(order.begin(), order.end());
      s.sorted.push_back(std::move(order));
    }
    // Lower bound on the remaining commodities, ignoring capacities.
    s.tail_min.assign(static_cast<std::size_t>(K) + 1, Rational(0));
    for (int k = K - 1; k >= 0; --k) {
      const auto& order = s.sorted[static_cast<std::size_t>(k)];
      if (order.empty()) return std::nullopt;
      s.tail_min[static_cast<std::size_t>(k)] = s.tail_min[static_cast<std::size_t>(k) + 1] + order.front().first;
    }
    s.residual = cap;
    search(s, 0, Rational(0));
    if (!s.best) return std::nullopt;
    std::vector<Rational> x(static_cast<std::size_t>(inst_.num_arcs() * K));
    for (int k = 0; k < K; ++k) {
      for (int a : options_[static_cast<std::size_t>(k)][s.best_pick[static_cast<std::size_t>(k)]]) {
        x[static_cast<std::size_t>(a * K + k)] = inst_.commodity(k).supply();
      }
    }
    return std::make_pair(*s.best, std::move(x));
  }

 private:
  struct Search {
    const std::vector<Rational>& cost;
    const std::optional<Rational>& stop_below;
    std::vector<std::vector<std::pair<Rational, std::size_t>>> sorted;
    std::vector<Rational> tail_min;
    std::vector<Rational> residual;
    std::optional<Rational> best;
    std::vector<std::size_t> pick;
    std::vector<std::size_t> best_pick;
    bool done = false;
  };

  Rational option_cost(const std::vector<Rational>& cost, int k, const std::vector<int>& arcs) const {
    const int K = inst_.num_commodities();
    Rational total;
    for (int a : arcs) total += cost[static_cast<std::size_t>(a * K + k)] * inst_.commodity(k).supply();
    return total;
  }

  void search(Search& s, int k, const Rational& so_far) const {
    const int K = inst_.num_commodities();
    if (s.done) return;
    if (k == K) {
      if (!s.best || so_far < *s.best) {
        s.best = so_far;
        s.best_pick = s.pick;
        if (s.stop_below && so_far < *s.stop_below) s.done = true;
      }
      return;
    }
    const Rational d = inst_.commodity(k).supply();
    for (const auto& [c, o] : s.sorted[static_cast<std::size_t>(k)]) {
      if (s.best && so_far + c + s.tail_min[static_cast<std::size_t>(k) + 1] >= *s.best) break;
      const auto& arcs = options_[static_cast<std::size_t>(k)][o];
      bool fits = true;
      for (int a : arcs) fits = fits && s.residual[static_cast<std::size_t>(a)] >= d;
      if (!fits) continue;
      for (int a : arcs) s.residual[static_cast<std::size_t>(a)] -= d;
      s.pick[static_cast<std::size_t>(k)] = o;
      search(s, k + 1, so_far + c);
      for (int a : arcs) s.residual[static_cast<std::size_t>(a)] += d;
      if (s.done) return;
    }
  }

  const Instance& inst_;
  std::vector<std::vector<std::vector<int>>> options_;  // per commodity, arc sets
};

// Flow minimum for capacities y under the instance's routing rule.
std::optional<ExactLPSolution> flow_min(const LPModel& lp, const std::vector<Rational>& cost,
                                        const std::optional<UnsplittableRouter>& router, const Instance& inst,
                                        const std::vector<long>& y, bool prune, const Rational& threshold,
                                        double* approx, bool stop_below_threshold) {
  if (!router) return exact_flow_min(lp, inst, y, prune, threshold, approx);
  const auto r = router->min_cost(cost, capacities(inst, y),
                                  stop_below_threshold ? std::optional<Rational>(threshold) : std::nullopt);
  if (!r) return std::nullopt;
  if (approx) *approx = r->first.to_double();
  ExactLPSolution out;
  out.status = LPStatus::Optimal;
  out.objective = r->first;
  out.primal = r->second;
  return out;
}

struct IPState {
  const Instance& inst;
  const YBounds& bounds;
  LPModel base;
  std::vector<Rational> cost;
  std::optional<UnsplittableRouter> router;
  std::optional<Rational> flow_lower;  // none: no routing exists

  IPState(const Instance& i, const YBounds& b) : inst(i), bounds(b) {
    const int K = inst.num_commodities();
    for (int a = 0; a < inst.num_arcs(); ++a) {
      for (int k = 0; k < K; ++k) {
        cost.push_back(inst.flow_cost(a, k));
      }
    }
    base = flow_model(inst, cost);
    flow_lower = uncapacitated_min(base, inst);
    if (inst.routing() == Routing::Unsplittable) router.emplace(inst);
  }

  Rational design_cost(const std::vector<long>& y) const {
    Rational d;
    const int M = inst.num_facilities();
    for (int a = 0; a < inst.num_arcs(); ++a) {
      for (int m = 0; m < M; ++m) d += inst.capacity_cost(a, m) * Rational(y[static_cast<std::size_t>(a * M + m)]);
    }
    return d;
  }

  // Evaluates y against the incumbent; returns true with out filled if better.
  bool evaluate(const std::vector<long>& y, const std::optional<Rational>& incumbent, IPResult& out, long& evaluated) const {
    const Rational d = design_cost(y);
    if (!flow_lower || (incumbent && d + *flow_lower >= *incumbent)) return false;
    ++evaluated;
    const Rational threshold = incumbent ? *incumbent - d : Rational(0);
    const auto sol = flow_min(base, cost, router, inst, y, incumbent.has_value(), threshold, nullptr, false);
    if (!sol || sol->status != LPStatus::Optimal) return false;
    const Rational total = d + sol->objective;
    if (incumbent && total >= *incumbent) return false;
    out.feasible = true;
    out.objective = total;
    out.y = y;
    out.x = sol->primal;
    return true;
  }
};

bool better(const IPResult& a, long ia, const IPResult& b, long ib) {
  if (!a.feasible) return false;
  if (!b.feasible) return true;
  if (a.objective != b.objective) return a.objective < b.objective;
  return ia < ib;
}

}  // namespace

YBounds default_y_bounds(const Instance& inst) {
  const Rational D = total_supply(inst);
  YBounds b;
  for (int a = 0; a < inst.num_arcs(); ++a) {
    for (int m = 0; m < inst.num_facilities(); ++m) {
      b.upper.push_back((D / Rational(inst.facility(m).capacity)).ceil().raw().get_num().get_si());
    }
  }
  return b;
}

YBounds uniform_y_bounds(const Instance& inst, long bound) {
  return YBounds{std::vector<long>(static_cast<std::size_t>(inst.num_arcs() * inst.num_facilities()), bound)};
}

IPResult brute_force_ip_serial(const Instance& inst, const YBounds& bounds, long budget) {
  const Grid grid = make_grid(inst, bounds, budget);
  const long total = grid.size;
  IPState st(inst, bounds);
  IPResult best;
  long evaluated = 0;
  for (long idx = 0; idx < total; ++idx) {
    IPResult cand;
    if (st.evaluate(decode(idx, grid), best.feasible ? std::optional<Rational>(best.objective) : std::nullopt, cand,
                    evaluated)) {
      best = std::move(cand);
    }
  }
  best.evaluated = evaluated;
  return best;
}

IPResult brute_force_ip(const Instance& inst, const YBounds& bounds, const OracleOptions& options) {
  if (!options.parallel) return brute_force_ip_serial(inst, bounds, options.budget);
  const Grid grid = make_grid(inst, bounds, options.budget);
  const long total = grid.size;
  IPState st(inst, bounds);
  IPResult best;
  long best_idx = -1;
  long evaluated = 0;
#pragma omp parallel
  {
    IPResult local;
    long local_idx = -1;
    long local_eval = 0;
#pragma omp for schedule(dynamic, 4)
    for (long idx = 0; idx < total; ++idx) {
      std::optional<Rational> inc;
      if (local.feasible) inc = local.objective;
      IPResult cand;
      // Ties keep the smaller index; a strict incumbent would drop equal
      // candidates found later, which is what the serial loop does too.
      if (st.evaluate(decode(idx, grid), inc, cand, local_eval)) {
        local = std::move(cand);
        local_idx = idx;
      }
    }
#pragma omp critical
    {
      evaluated += local_eval;
      if (better(local, local_idx, best, best_idx)) {
        best = std::move(local);
        best_idx = local_idx;
      }
    }
  }
  best.evaluated = evaluated;
  return best;
}

namespace {

struct CutState {
  const LinearCut& cut;
  const Instance& inst;
  LPModel base;
  std::vector<Rational> cost;
  std::optional<UnsplittableRouter> router;
  std::vector<Rational> y_coef;  // arc-major per facility
  std::optional<Rational> flow_lower;

  CutState(const LinearCut& c, const Instance& i) : cut(c), inst(i) {
    const int K = inst.num_commodities();
    const int M = inst.num_facilities();
    cost.resize(static_cast<std::size_t>(inst.num_arcs() * K));
    y_coef.resize(static_cast<std::size_t>(inst.num_arcs() * M));
    for (const auto& [v, coef] : cut.coeffs) {
      if (v.kind == VarKind::Flow) {
        if (v.index >= inst.num_arcs() || v.sub >= K) throw std::out_of_range("cut refers to a missing flow variable");
        cost[static_cast<std::size_t>(v.index * K + v.sub)] = coef;
      } else if (v.kind == VarKind::Capacity) {
        if (v.index >= inst.num_arcs() || v.sub >= M) throw std::out_of_range("cut refers to a missing capacity variable");
        y_coef[static_cast<std::size_t>(v.index * M + v.sub)] = coef;
      } else {
        throw std::invalid_argument("validate_cut needs a network cut");
      }
    }
    base = flow_model(inst, cost);
    flow_lower = uncapacitated_min(base, inst);
    if (inst.routing() == Routing::Unsplittable) router.emplace(inst);
  }

  // Returns a counterexample if the cut fails at y.
  std::optional<FractionalPoint> check(const std::vector<long>& y, double& slack) const {
    Rational ypart;
    for (std::size_t i = 0; i < y.size(); ++i) ypart += y_coef[i] * Rational(y[i]);
    const Rational threshold = cut.rhs - ypart;
    if (!flow_lower) return std::nullopt;
    if (*flow_lower >= threshold) {
      slack = (*flow_lower - threshold).to_double();
      return std::nullopt;
    }
    double approx = std::numeric_limits<double>::infinity();
    const auto sol = flow_min(base, cost, router, inst, y, true, threshold, &approx, true);
    if (!sol) return std::nullopt;
    slack = approx - threshold.to_double();
    if (sol->status != LPStatus::Optimal || sol->objective >= threshold) return std::nullopt;
    FractionalPoint p(inst.num_arcs(), inst.num_commodities(), inst.num_facilities());
    p.x = sol->primal;
    for (std::size_t i = 0; i < y.size(); ++i) p.y[i] = Rational(y[i]);
    return p;
  }
};

}  // namespace

CutCheck validate_cut_serial(const LinearCut& cut, const Instance& inst, const YBounds& bounds, long budget) {
  const Grid grid = make_grid(inst, bounds, budget);
  const long total = grid.size;
  CutState st(cut, inst);
  CutCheck out;
  out.worst_slack = std::numeric_limits<double>::infinity();
  for (long idx = 0; idx < total; ++idx) {
    double slack = std::numeric_limits<double>::infinity();
    auto bad = st.check(decode(idx, grid), slack);
    ++out.evaluated;
    out.worst_slack = std::min(out.worst_slack, slack);
    if (bad) {
      out.valid = false;
      out.counterexample = std::move(bad);
      return out;
    }
  }
  return out;
}

CutCheck validate_cut(const LinearCut& cut, const Instance& inst, const YBounds& bounds, const OracleOptions& options) {
  if (!options.parallel) return validate_cut_serial(cut, inst, bounds, options.budget);
  const Grid grid = make_grid(inst, bounds, options.budget);
  const long total = grid.size;
  CutState st(cut, inst);
  CutCheck out;
  out.worst_slack = std::numeric_limits<double>::infinity();
  long first_bad = total;
#pragma omp parallel
  {
    double local_slack = std::numeric_limits<double>::infinity();
    long local_eval = 0;
    long local_bad = total;
    std::optional<FractionalPoint> local_point;
#pragma omp for schedule(dynamic, 4)
    for (long idx = 0; idx < total; ++idx) {
      if (idx > local_bad) continue;
      double slack = std::numeric_limits<double>::infinity();
      auto bad = st.check(decode(idx, grid), slack);
      ++local_eval;
      local_slack = std::min(local_slack, slack);
      if (bad && idx < local_bad) {
        local_bad = idx;
        local_point = std::move(bad);
      }
    }
#pragma omp critical
    {
      out.evaluated += local_eval;
      out.worst_slack = std::min(out.worst_slack, local_slack);
      if (local_bad < first_bad) {
        first_bad = local_bad;
        out.valid = false;
        out.counterexample = std::move(local_point);
      }
    }
  }
  return out;
}

}  // namespace netdes
