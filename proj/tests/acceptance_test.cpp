// Runs the acceptance criteria and prints one PASS/FAIL line each.

#include <chrono>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "netdes/arc_cuts.hpp"
#include "netdes/cutset_cuts.hpp"
#include "netdes/engine.hpp"
#include "netdes/lp.hpp"
#include "netdes/mir.hpp"
#include "netdes/oracle.hpp"
#include "netdes/partition_cuts.hpp"
#include "netdes/relaxation.hpp"
#include "test_support.hpp"

using namespace netdes;
using netdes::testing::R;

namespace {

// Pinned limits.
constexpr double kExampleSeconds = 1.0;    // criterion 1
constexpr double kSuiteSeconds = 600.0;    // criterion 11, whole binary
constexpr int kHullObjectives = 50;        // criterion 2
constexpr int kSeparationPoints = 500;     // criterion 3
constexpr int kMaxItems = 8;               // criterion 3
constexpr int kNonMaximalSamples = 20;     // criterion 4
constexpr int kCoverYMax = 4;              // criterion 5
constexpr int kMaxRounds = 5;              // criterion 6
constexpr int kPartitionObjectives = 100;  // criterion 8
constexpr int kMetricInstances = 50;       // criterion 10
constexpr int kMetricMaxNodes = 6;         // criterion 10
constexpr int kSweepInstances = 200;       // criterion 11

struct Outcome {
  bool pass = true;
  std::string detail;
};

class Check {
 public:
  void expect(bool ok, const std::string& what) {
    if (!ok && failures_++ < 5) msg_ << (msg_.tellp() > 0 ? "; " : "") << what;
  }
  Outcome done(const std::string& ok_detail) const {
    if (failures_ == 0) return {true, ok_detail};
    return {false, std::to_string(failures_) + " failure(s): " + msg_.str()};
  }

 private:
  int failures_ = 0;
  std::ostringstream msg_;
};

ArcSetRelaxation split_example() {
  return netdes::testing::arc_set({R(1, 3), R(2, 3), R(2, 3)}, R(0), ArcSetMode::Splittable);
}

ArcSetRelaxation unsplit_example() {
  return netdes::testing::arc_set({R(1, 3), R(1, 3), R(1, 3), R(1, 2), R(2, 3)}, R(0), ArcSetMode::Unsplittable);
}

// 1. The residual capacity table of the splittable example.
Outcome residual_capacity_table() {
  Check c;
  const auto start = std::chrono::steady_clock::now();
  const auto rel = split_example();
  std::vector<std::pair<std::vector<int>, LinearCut>> cuts;
  for (const auto& S : netdes::testing::all_subsets(3)) {
    if (auto cut = residual_capacity_cut(rel, S)) cuts.emplace_back(S, *cut);
  }
  struct Row {
    std::vector<int> S;
    Rational r;
    LinearCut want;
  };
  using netdes::testing::le_cut;
  const std::vector<Row> rows = {
      {{0}, R(1, 3), le_cut({R(1), R(0), R(0)}, R(1), R(0))},
      {{1}, R(2, 3), le_cut({R(0), R(1), R(0)}, R(1), R(0))},
      {{2}, R(2, 3), le_cut({R(0), R(0), R(1)}, R(1), R(0))},
      {{1, 2}, R(1, 3), le_cut({R(0), R(2), R(2)}, R(1), R(2))},
      {{0, 1, 2}, R(2, 3), le_cut({R(1), R(2), R(2)}, R(2), R(1))},
  };
  c.expect(cuts.size() == rows.size(), "expected 5 cuts, got " + std::to_string(cuts.size()));
  for (const auto& row : rows) {
    int hits = 0;
    for (const auto& [S, cut] : cuts) {
      if (S != row.S) continue;
      ++hits;
      c.expect(netdes::testing::same_up_to_scale(cut, row.want), "S mismatch: " + cut.to_string());
      // The y coefficient of sum_S a_i (1 - x_i) >= r (eta - y) is r.
      c.expect(cut.coeff(VarRef::local_y()) == row.r, "r mismatch for " + cut.to_string());
    }
    c.expect(hits == 1, "missing row " + row.want.to_string());
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  c.expect(secs < kExampleSeconds, "took " + std::to_string(secs) + " s");
  return c.done("5 inequalities, exact r values");
}

Rational lp_min(const std::vector<Rational>& cost, const std::vector<std::pair<std::vector<std::pair<int, Rational>>, Rational>>& ge_rows,
                const std::vector<std::optional<Rational>>& upper) {
  LPModel lp;
  for (std::size_t j = 0; j < cost.size(); ++j) lp.add_column("v" + std::to_string(j), cost[j], upper[j]);
  for (const auto& [row, rhs] : ge_rows) lp.add_row("r", row, RowSense::GreaterEqual, rhs);
  const ExactLPSolution sol = solve_exact(lp);
  if (sol.status != LPStatus::Optimal) throw std::runtime_error("hull LP: " + to_string(sol.status));
  return sol.objective;
}

// 2. Capacity row + bounds + residual capacity cuts give the hull.
Outcome residual_capacity_hull() {
  Check c;
  const auto rel = split_example();
  std::vector<std::pair<std::vector<std::pair<int, Rational>>, Rational>> rows;
  // y - a x >= a0
  rows.push_back({{{0, -rel.a[0]}, {1, -rel.a[1]}, {2, -rel.a[2]}, {3, R(1)}}, rel.a0});
  for (const auto& S : netdes::testing::all_subsets(3)) {
    if (auto cut = residual_capacity_cut(rel, S)) {
      std::vector<std::pair<int, Rational>> row;
      for (const auto& [v, coef] : cut->coeffs) row.emplace_back(v.kind == VarKind::LocalY ? 3 : v.index, coef);
      rows.push_back({row, cut->rhs});
    }
  }
  const std::vector<std::optional<Rational>> upper = {R(1), R(1), R(1), std::nullopt};
  std::mt19937 rng(2024);
  for (int t = 0; t < kHullObjectives; ++t) {
    std::vector<Rational> g;
    for (int i = 0; i < 3; ++i) g.push_back(netdes::testing::random_rational(rng, -30, 10, 7));
    const Rational h = netdes::testing::random_rational(rng, 1, 30, 5);
    Rational best = h * R(0);
    bool first = true;
    for (long y = 0; y <= 3; ++y) {
      const Rational v = netdes::testing::min_fractional_knapsack(g, rel.a, rel.a0 + R(y)) + h * R(y);
      if (first || v < best) best = v;
      first = false;
    }
    std::vector<Rational> cost = g;
    cost.push_back(h);
    const Rational lp = lp_min(cost, rows, upper);
    c.expect(lp == best, "objective " + std::to_string(t) + ": LP " + lp.to_string() + " vs " + best.to_string());
  }
  return c.done(std::to_string(kHullObjectives) + " objectives, LP = integer minimum");
}

// 3. Linear-time separation agrees with subset enumeration.
Outcome residual_capacity_separation() {
  Check c;
  std::mt19937 rng(77);
  int violated = 0;
  for (int t = 0; t < kSeparationPoints; ++t) {
    const int n = 1 + static_cast<int>(rng() % kMaxItems);
    std::vector<Rational> a;
    for (int i = 0; i < n; ++i) a.push_back(netdes::testing::random_rational(rng, 1, 18, 9));
    const auto rel = netdes::testing::arc_set(a, netdes::testing::random_rational(rng, 0, 12, 6), ArcSetMode::Splittable);
    ArcPoint p;
    Rational load;
    for (int i = 0; i < n; ++i) {
      p.x.push_back(netdes::testing::random_rational(rng, 0, 10, 10));
      load += a[static_cast<std::size_t>(i)] * p.x.back();
    }
    p.y = max(R(0), load - rel.a0) + netdes::testing::random_rational(rng, 0, 4, 8);
    Rational best;
    for (const auto& S : netdes::testing::all_subsets(n)) {
      if (auto cut = residual_capacity_cut(rel, S)) best = max(best, local_violation(*cut, p));
    }
    const auto sep = separate_residual_capacity(rel, p);
    c.expect(sep.has_value() == (best.sign() > 0), "point " + std::to_string(t) + ": existence differs");
    if (sep) {
      ++violated;
      c.expect(local_violation(*sep, p) == best, "point " + std::to_string(t) + ": violation differs");
    }
  }
  return c.done(std::to_string(kSeparationPoints) + " points, 0 disagreements, " + std::to_string(violated) + " violated");
}

// 4. c-strong and k-split cuts of the unsplittable example.
Outcome c_strong_example() {
  Check c;
  using netdes::testing::le_cut;
  const auto rel = unsplit_example();
  const std::vector<std::pair<std::vector<int>, LinearCut>> maximal = {
      {{0}, le_cut({R(1), R(0), R(0), R(0), R(0)}, R(1), R(0))},
      {{1}, le_cut({R(0), R(1), R(0), R(0), R(0)}, R(1), R(0))},
      {{2}, le_cut({R(0), R(0), R(1), R(0), R(0)}, R(1), R(0))},
      {{3, 4}, le_cut({R(0), R(0), R(0), R(1), R(1)}, R(1), R(0))},
      {{0, 1, 3}, le_cut({R(1), R(1), R(0), R(1), R(0)}, R(1), R(1))},
      {{0, 1, 4}, le_cut({R(1), R(1), R(0), R(0), R(1)}, R(1), R(1))},
      {{1, 2, 3}, le_cut({R(0), R(1), R(1), R(1), R(0)}, R(1), R(1))},
      {{1, 2, 4}, le_cut({R(0), R(1), R(1), R(0), R(1)}, R(1), R(1))},
      {{0, 2, 3}, le_cut({R(1), R(0), R(1), R(1), R(0)}, R(1), R(1))},
      {{0, 2, 4}, le_cut({R(1), R(0), R(1), R(0), R(1)}, R(1), R(1))},
      {{0, 1, 2, 3, 4}, le_cut({R(1), R(1), R(1), R(1), R(1)}, R(1), R(2))},
  };
  std::set<std::vector<int>> maximal_sets;
  for (const auto& [S, want] : maximal) {
    maximal_sets.insert(S);
    c.expect(c_strong_cut(rel, S).same_inequality(want), "c-strong " + want.to_string());
    c.expect(is_maximal_c_strong(rel, S), "not accepted as maximal: " + want.to_string());
  }
  c.expect(k_split_c_strong_cut(rel, {1, 2}, 2).same_inequality(le_cut({R(0), R(1), R(1), R(1), R(1)}, R(2), R(0))),
           "2-split cut");
  c.expect(k_split_c_strong_cut(rel, {3}, 3).same_inequality(le_cut({R(1), R(1), R(1), R(2), R(2)}, R(3), R(0))),
           "3-split cut");
  std::vector<std::vector<int>> others;
  for (const auto& S : netdes::testing::all_subsets(5)) {
    if (!maximal_sets.count(S)) others.push_back(S);
  }
  std::mt19937 rng(4);
  std::shuffle(others.begin(), others.end(), rng);
  int rejected = 0;
  for (int i = 0; i < kNonMaximalSamples && i < static_cast<int>(others.size()); ++i) {
    c.expect(!is_maximal_c_strong(rel, others[static_cast<std::size_t>(i)]), "non-maximal set accepted");
    ++rejected;
  }
  c.expect(rejected == kNonMaximalSamples, "fewer than 20 non-maximal sets");
  return c.done("11 maximal sets, 2-split and 3-split exact, " + std::to_string(rejected) + " non-maximal rejected");
}

// 5. Lifted cover table, validated on {0,1}^5 x {0..4}.
Outcome lifted_cover_table() {
  Check c;
  using netdes::testing::le_cut;
  const auto rel = unsplit_example();
  struct Row {
    CoverSpec spec;
    std::vector<int> order;
    LinearCut want;
  };
  const std::vector<Row> rows = {
      {{1, {0, 4}, {}, {1, 2, 3}}, {}, le_cut({R(0), R(1), R(1), R(1), R(1)}, R(2), R(0))},
      {{1, {1, 2}, {}, {0, 3, 4}}, {}, le_cut({R(1), R(1), R(0), R(1), R(1)}, R(2), R(0))},
      {{1, {1, 2}, {}, {0, 3, 4}}, {2, 1}, le_cut({R(1), R(0), R(1), R(1), R(1)}, R(2), R(0))},
      {{2, {}, {4}, {0, 1, 2, 3}}, {}, le_cut({R(1), R(1), R(1), R(1), R(2)}, R(2), R(1))},
      {{2, {}, {3}, {0, 1, 2, 4}}, {}, le_cut({R(1), R(1), R(1), R(2), R(1)}, R(2), R(1))},
  };
  for (const auto& row : rows) {
    const LinearCut cut = lifted_cover_cut(rel, row.spec, row.order);
    c.expect(netdes::testing::same_up_to_scale(cut, row.want), cut.to_string() + " vs " + row.want.to_string());
    c.expect(netdes::testing::valid_unsplittable(rel, cut, 0, kCoverYMax), "invalid: " + cut.to_string());
  }
  return c.done("4 table rows (5 inequalities) reproduced and valid");
}

// 6. Star example through the cutting-plane loop.
Outcome star_loop() {
  Check c;
  const Instance star = netdes::testing::star_example();
  Config config;
  config.families = {CutFamily::CutSet, CutFamily::FlowCutSet};
  config.exact_lp = true;
  const LoopResult r = cutting_plane_loop(star, config);
  const IPResult ip = brute_force_ip(star, default_y_bounds(star));
  c.expect(ip.feasible, "oracle found no solution");
  c.expect(r.final_bound == ip.objective, "bound " + r.final_bound.to_string() + " vs optimum " + ip.objective.to_string());
  LinearCut first;
  first.add(VarRef::capacity(0, 0), R(1));
  first.add(VarRef::capacity(1, 0), R(1));
  first.rhs = R(1);
  c.expect(!r.cuts.empty() && r.cuts.front().same_inequality(first),
           "first cut " + (r.cuts.empty() ? std::string("none") : r.cuts.front().to_string()));
  c.expect(static_cast<int>(r.rounds.size()) <= kMaxRounds, std::to_string(r.rounds.size()) + " rounds");
  return c.done("optimum " + ip.objective.to_string() + " in " + std::to_string(r.rounds.size()) + " rounds");
}

// 7. phi coefficients for integer lambda; invalid naive form for lambda = 3/2.
Outcome phi_identities() {
  Check c;
  using netdes::testing::make_instance;
  for (long lambda : {2L, 3L}) {
    const Instance inst = make_instance(3, {{0, 1, R(0), R(0)}, {0, 2, R(0), R(0)}, {1, 0, R(0), R(0)}}, {1, lambda},
                                        {{R(1), R(1), R(1)}, {R(1), R(1), R(1)}}, {{0, 1, R(7, 4)}});
    const auto rel = build_cutset(inst, {1, 0, 0});
    const Rational r = R(7, 4) - R(7, 4).floor();
    const LinearCut cut = multifacility_cutset_cut(rel, {{0}, {0}, {2}, 0});
    const std::string tag = "lambda=" + std::to_string(lambda);
    c.expect(cut.coeff(VarRef::capacity(0, 0)) == r, tag + " y1(S+)");
    c.expect(cut.coeff(VarRef::capacity(0, 1)) == R(lambda) * r, tag + " y2(S+)");
    c.expect(cut.coeff(VarRef::capacity(2, 0)) == R(1) - r, tag + " y1(S-)");
    c.expect(cut.coeff(VarRef::capacity(2, 1)) == R(lambda) * (R(1) - r), tag + " y2(S-)");
    c.expect(cut.coeff(VarRef::flow(1, 0)) == R(1), tag + " x(A+ - S+)");
    c.expect(cut.coeff(VarRef::flow(2, 0)) == R(-1), tag + " x(S-)");
    c.expect(cut.rhs == r * R(7, 4).ceil(), tag + " rhs");
  }

  // lambda = 3/2 with capacities (1, 3/2) scaled by 2: c = (2, 3) and
  // demand 2 b with b = 5/4.
  const Instance inst = make_instance(2, {{0, 1, R(0), R(0)}, {1, 0, R(0), R(0)}}, {2, 3}, {{R(1), R(1)}, {R(1), R(1)}},
                                      {{0, 1, R(5, 2)}});
  const Rational b = R(5, 4);
  const Rational lambda = R(3, 2);
  const Rational r = b - b.floor();
  // Integer-lambda form in the scaled variables (x' = 2x, everything times 2).
  LinearCut naive;
  naive.add(VarRef::capacity(0, 0), R(2) * r);
  naive.add(VarRef::capacity(0, 1), R(2) * lambda * r);
  naive.add(VarRef::capacity(1, 0), R(2) * (R(1) - r));
  naive.add(VarRef::capacity(1, 1), R(2) * lambda * (R(1) - r));
  naive.add(VarRef::flow(1, 0), R(-1));
  naive.rhs = R(2) * r * b.ceil();
  const CutCheck bad = validate_cut(naive, inst, default_y_bounds(inst));
  c.expect(!bad.valid && bad.counterexample.has_value(), "naive form not refuted");
  const auto rel = build_cutset(inst, {1, 0});
  const LinearCut phi = multifacility_cutset_cut(rel, {{0}, {0}, {1}, 0});
  const CutCheck good = validate_cut(phi, inst, default_y_bounds(inst));
  c.expect(good.valid, "phi form refuted: " + phi.to_string());
  std::string where;
  if (bad.counterexample) {
    where = " (counterexample y2 on 0->1 = " + bad.counterexample->cap(0, 1).to_string() + ")";
  }
  return c.done("lambda 2, 3 exact; lambda 3/2 naive refuted" + where + ", phi form valid");
}

// 8. Iterative MIR cuts describe the hull for divisible capacities.
Outcome partition_hull() {
  Check c;
  std::mt19937 rng(8);
  int sets = 0;
  for (const auto& caps : std::vector<std::vector<long>>{{1, 2}, {1, 3}, {1, 2, 4}, {1, 2, 6}}) {
    for (const Rational& b : {R(1, 2), R(5, 3), R(5), R(7), R(23, 3)}) {
      ++sets;
      const KnapsackCoverSet X{caps, b};
      std::vector<std::pair<std::vector<std::pair<int, Rational>>, Rational>> rows;
      for (const auto& cut : all_iterative_mir_cuts(X)) {
        std::vector<std::pair<int, Rational>> row;
        for (const auto& [v, coef] : cut.coeffs) row.emplace_back(v.index, coef);
        rows.push_back({row, cut.rhs});
      }
      const std::vector<std::optional<Rational>> upper(caps.size());
      for (int t = 0; t < kPartitionObjectives; ++t) {
        std::vector<Rational> cost;
        for (std::size_t m = 0; m < caps.size(); ++m) cost.push_back(netdes::testing::random_rational(rng, 1, 60, 8));
        const Rational lp = lp_min(cost, rows, upper);
        const Rational ip = netdes::testing::knapsack_cover_min(caps, b, cost);
        std::ostringstream what;
        what << "c=(";
        for (long cm : caps) what << cm << ' ';
        what << ") b=" << b << ": LP " << lp << " vs " << ip;
        c.expect(lp == ip, what.str());
      }
    }
  }
  return c.done(std::to_string(sets) + " sets x " + std::to_string(kPartitionObjectives) + " objectives exact");
}

// 9. Three-partition right-hand sides.
Outcome three_partition_numbers() {
  Check c;
  const auto part = NodePartition::singletons(3);
  struct Case {
    Rational t;
    Rational sum_rhs, metric_rhs, selected;
  };
  for (const Case& k : {Case{R(1, 2), R(3), R(4), R(4)}, Case{R(1, 3), R(3), R(2), R(3)}}) {
    const Instance tri = netdes::testing::uniform_complete(3, k.t, R(0));
    const auto sum = three_partition_cut(tri, part);
    const LinearCut metric = three_partition_metric_cut(tri, part);
    const std::string tag = "t=" + k.t.to_string();
    c.expect(sum.has_value() && sum->rhs == k.sum_rhs, tag + " sum rhs");
    c.expect(metric.rhs == k.metric_rhs, tag + " metric rhs " + metric.rhs.to_string());
    if (sum) {
      const LinearCut chosen = select_total_capacity_cut({*sum, metric});
      c.expect(chosen.rhs == k.selected, tag + " selection");
      c.expect(chosen.origin == (k.selected == k.metric_rhs ? metric.origin : sum->origin), tag + " selected family");
    }
  }
  return c.done("t=1/2: 3 vs 4, metric chosen; t=1/3: 3 vs 2, sum chosen");
}

// Routing feasibility straight from the multicommodity flow LP.
bool routing_feasible(const Instance& inst, const std::vector<Rational>& y) {
  LPModel lp;
  const int K = inst.num_commodities();
  for (int a = 0; a < inst.num_arcs(); ++a) {
    for (int k = 0; k < K; ++k) lp.add_column("x", R(0));
  }
  for (int k = 0; k < K; ++k) {
    for (int i = 0; i < inst.num_nodes(); ++i) {
      std::vector<std::pair<int, Rational>> row;
      for (int a = 0; a < inst.num_arcs(); ++a) {
        if (inst.arc(a).head == i) row.emplace_back(a * K + k, R(1));
        if (inst.arc(a).tail == i) row.emplace_back(a * K + k, R(-1));
      }
      lp.add_row("bal", row, RowSense::Equal, inst.commodity(k).net_demand[static_cast<std::size_t>(i)]);
    }
  }
  for (int a = 0; a < inst.num_arcs(); ++a) {
    std::vector<std::pair<int, Rational>> row;
    for (int k = 0; k < K; ++k) row.emplace_back(a * K + k, R(1));
    Rational cap = inst.arc(a).existing_capacity;
    for (int m = 0; m < inst.num_facilities(); ++m) {
      cap += R(inst.facility(m).capacity) * y[static_cast<std::size_t>(a * inst.num_facilities() + m)];
    }
    lp.add_row("cap", row, RowSense::LessEqual, cap);
  }
  const ExactLPSolution sol = solve_exact(lp);
  if (sol.status != LPStatus::Optimal && sol.status != LPStatus::Infeasible) {
    throw std::runtime_error("routing LP: " + to_string(sol.status));
  }
  return sol.status == LPStatus::Optimal;
}

// Cone membership checked directly.
bool in_cone(const Instance& inst, const MetricVector& mv) {
  for (const auto& v : mv.v) {
    if (v.sign() < 0) return false;
  }
  for (int k = 0; k < inst.num_commodities(); ++k) {
    const auto& u = mv.u[static_cast<std::size_t>(k)];
    if (!u[static_cast<std::size_t>(inst.commodity(k).source)].is_zero()) return false;
    for (int a = 0; a < inst.num_arcs(); ++a) {
      if (u[static_cast<std::size_t>(inst.arc(a).head)] - u[static_cast<std::size_t>(inst.arc(a).tail)] >
          mv.v[static_cast<std::size_t>(a)]) {
        return false;
      }
    }
  }
  return true;
}

// 10. Metric separation finds a cut exactly when routing is infeasible.
Outcome metric_separation() {
  Check c;
  std::mt19937 rng(10);
  int infeasible = 0;
  for (int t = 0; t < kMetricInstances; ++t) {
    GeneratorOptions o;
    o.seed = 1000 + static_cast<unsigned>(t);
    o.nodes = 2 + t % (kMetricMaxNodes - 1);
    o.density = 0.35;
    o.facilities = t % 2 ? std::vector<long>{1, 3} : std::vector<long>{2};
    const Instance inst = generate_instance(o);
    FractionalPoint p(inst.num_arcs(), inst.num_commodities(), inst.num_facilities());
    std::uniform_int_distribution<int> num(0, 6);
    for (auto& y : p.y) y = Rational(num(rng), 6);
    const auto sep = separate_metric(inst, p);
    const bool feasible = routing_feasible(inst, p.y);
    c.expect(sep.has_value() != feasible, "instance " + std::to_string(t) + ": separation disagrees with routing LP");
    if (sep) {
      ++infeasible;
      c.expect(in_cone(inst, sep->metric), "instance " + std::to_string(t) + ": (v,u) outside the cone");
      c.expect(sep->cut.violation(p).sign() > 0, "instance " + std::to_string(t) + ": cut not violated");
    }
  }
  return c.done(std::to_string(kMetricInstances) + " instances, " + std::to_string(infeasible) +
                " infeasible, all certificates in the cone");
}

// Lifted covers from the capacity row of each arc of an unsplittable instance.
std::vector<LinearCut> cover_cuts(const Instance& inst) {
  std::vector<LinearCut> out;
  for (int a = 0; a < inst.num_arcs(); ++a) {
    const ArcSetRelaxation rel = from_capacity_row(inst, a, 0);
    if (rel.size() == 0) continue;
    Rational total;
    for (const auto& w : rel.a) total += w;
    const long y_bar = (total - rel.a0).ceil().raw().get_num().get_si() - 1;
    if (y_bar < 0) continue;
    CoverSpec spec;
    spec.y_bar = y_bar;
    for (int i = 0; i < rel.size(); ++i) spec.C.push_back(i);
    LinearCut local = lifted_cover_cut(rel, spec);
    out.push_back(to_network(rel, local));
  }
  return out;
}

// Loose size of the oracle's y grid: product of (bound + 1).
bool grid_fits(const YBounds& bounds, long budget) {
  long size = 1;
  for (long u : bounds.upper) {
    if (size > budget / (u + 1)) return false;
    size *= u + 1;
  }
  return true;
}

// 11. Every generated cut is valid.
Outcome validity_sweep() {
  Check c;
  long cuts = 0, invalid = 0;
  int accepted = 0, skipped = 0;
  std::map<CutFamily, long> per_family;
  for (unsigned seed = 5000; accepted < kSweepInstances; ++seed) {
    const int t = accepted;
    GeneratorOptions o;
    o.seed = seed;
    o.nodes = 3 + t % 2;
    o.density = 0.2;
    o.facilities = t % 3 == 0 ? std::vector<long>{1, 2} : (t % 3 == 1 ? std::vector<long>{1} : std::vector<long>{2, 3});
    o.demand_scale = 1;
    o.demand_probability = 0.25;
    if (t % 4 == 3) o.routing = Routing::Unsplittable;
    const Instance inst = generate_instance(o);
    const YBounds bounds = default_y_bounds(inst);
    if (!grid_fits(bounds, OracleOptions{}.budget)) {
      ++skipped;
      continue;
    }
    ++accepted;
    Config config;
    config.families = parse_families("all");
    config.max_rounds = 6;
    config.exact_lp = true;
    config.seed = seed;
    const LoopResult r = cutting_plane_loop(inst, config);
    std::vector<LinearCut> all = r.cuts;
    if (inst.routing() == Routing::Unsplittable) {
      for (auto& cut : cover_cuts(inst)) all.push_back(std::move(cut));
    }
    for (const auto& cut : all) {
      ++cuts;
      ++per_family[cut.family];
      const CutCheck check = validate_cut(cut, inst, bounds);
      if (!check.valid) {
        ++invalid;
        c.expect(false, "seed " + std::to_string(seed) + " " + family_name(cut.family) + ": " + cut.to_string());
      }
    }
  }
  std::string fams;
  for (const auto& [f, n] : per_family) fams += " " + family_name(f) + "=" + std::to_string(n);
  c.expect(invalid == 0, std::to_string(invalid) + " invalid cuts");
  return c.done(std::to_string(cuts) + " cuts on " + std::to_string(accepted) + " instances (" + std::to_string(skipped) +
                " drawn instances too large for the oracle), 0 counterexamples;" + fams);
}

}  // namespace

int main() {
  const auto start = std::chrono::steady_clock::now();
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"residual capacity example table", residual_capacity_table},
      {"residual capacity hull", residual_capacity_hull},
      {"exact residual capacity separation", residual_capacity_separation},
      {"c-strong and k-split example", c_strong_example},
      {"lifted cover table", lifted_cover_table},
      {"star example cutting-plane loop", star_loop},
      {"phi-function identities", phi_identities},
      {"divisible partition hull", partition_hull},
      {"three-partition numerics", three_partition_numbers},
      {"metric separation soundness and completeness", metric_separation},
      {"global validity sweep", validity_sweep},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (i + 1 == criteria.size()) {
      const double total = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      if (total >= kSuiteSeconds) o = {false, "suite took " + std::to_string(total) + " s"};
    }
    failed += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << "  " << (i + 1) << ". " << criteria[i].first << ": " << o.detail
              << " [" << std::fixed;
    std::cout.precision(2);
    std::cout << secs << " s]" << std::endl;
  }
  std::cout << (criteria.size() - static_cast<std::size_t>(failed)) << "/" << criteria.size() << " criteria passed"
            << std::endl;
  return failed == 0 ? 0 : 1;
}
