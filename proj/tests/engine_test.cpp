#include "netdes/engine.hpp"

#include <gtest/gtest.h>

#include <json.hpp>

#include "netdes/instance_io.hpp"
#include "netdes/oracle.hpp"
#include "netdes/relaxation.hpp"
#include "test_support.hpp"

using namespace netdes;
using netdes::testing::R;

namespace {

Config exact_config(const std::string& families) {
  Config c;
  c.families = parse_families(families);
  c.exact_lp = true;
  return c;
}

Rational plain_lp(const Instance& inst) {
  const ExactLPSolution sol = solve_exact(build_relaxation(inst).lp);
  EXPECT_EQ(sol.status, LPStatus::Optimal);
  return sol.objective;
}

GeneratorOptions tiny(unsigned seed) {
  GeneratorOptions o;
  o.seed = seed;
  o.nodes = 3 + static_cast<int>(seed % 2);
  o.density = 0.2;
  o.facilities = seed % 3 == 0 ? std::vector<long>{1, 2} : std::vector<long>{1};
  o.demand_scale = 1;
  o.demand_probability = 0.25;
  return o;
}

}  // namespace

TEST(Families, ParseAndPrint) {
  const auto f = parse_families("rc, cutset,partition");
  EXPECT_EQ(families_to_string(f), "rc,cutset,partition,threepartition");
  EXPECT_EQ(parse_families("all").size(), loop_families().size());
  EXPECT_THROW(parse_families("rc,bogus"), std::invalid_argument);
  EXPECT_TRUE(parse_families("").empty());
}

TEST(CutPool, DeduplicatesScaledCopies) {
  CutPool pool;
  LinearCut a;
  a.add(VarRef::capacity(0, 0), R(1));
  a.add(VarRef::capacity(1, 0), R(2));
  a.rhs = R(1);
  EXPECT_TRUE(pool.insert(a));
  EXPECT_FALSE(pool.insert(scale(a, R(3))));
  LinearCut b = a;
  b.rhs = R(2);
  EXPECT_TRUE(pool.insert(b));
  EXPECT_EQ(pool.size(), 2u);

  FractionalPoint p(2, 0, 1);
  p.cap(0, 0) = R(1);
  pool.record_activity(p, R(1, 1000000));
  EXPECT_EQ(pool.activity(), (std::vector<long>{1, 0}));
}

TEST(Loop, NoFamiliesGivesPlainBound) {
  const Instance star = netdes::testing::star_example();
  Config c;
  c.exact_lp = true;
  const LoopResult r = cutting_plane_loop(star, c);
  ASSERT_EQ(r.rounds.size(), 1u);
  EXPECT_TRUE(r.cuts.empty());
  EXPECT_EQ(r.final_bound, plain_lp(star));
}

TEST(Loop, RejectsBadConfig) {
  const Instance star = netdes::testing::star_example();
  Config c;
  c.max_rounds = 0;
  EXPECT_THROW(cutting_plane_loop(star, c), std::invalid_argument);
  c.max_rounds = 3;
  c.eps = R(0);
  EXPECT_THROW(cutting_plane_loop(star, c), std::invalid_argument);
}

TEST(Loop, StarExampleReachesIntegerOptimum) {
  const Instance star = netdes::testing::star_example();
  const LoopResult r = cutting_plane_loop(star, exact_config("cutset,flowcutset"));
  const IPResult ip = brute_force_ip(star, default_y_bounds(star));
  ASSERT_TRUE(ip.feasible);
  EXPECT_EQ(r.final_bound, ip.objective);
  EXPECT_LE(r.rounds.size(), 4u);
  ASSERT_FALSE(r.cuts.empty());
  LinearCut first;
  first.add(VarRef::capacity(0, 0), R(1));
  first.add(VarRef::capacity(1, 0), R(1));
  first.rhs = R(1);
  EXPECT_TRUE(r.cuts.front().same_inequality(first)) << r.cuts.front().to_string();
}

TEST(Loop, SandwichMonotoneAndValid) {
  int compared = 0;
  for (unsigned seed = 1; seed <= 12; ++seed) {
    const Instance inst = generate_instance(tiny(seed));
    const LoopResult r = cutting_plane_loop(inst, exact_config("all"));
    const IPResult ip = brute_force_ip(inst, default_y_bounds(inst));
    ASSERT_TRUE(ip.feasible);
    const Rational plain = plain_lp(inst);
    EXPECT_EQ(r.rounds.front().bound, plain);
    for (std::size_t i = 1; i < r.rounds.size(); ++i) EXPECT_GE(r.rounds[i].bound, r.rounds[i - 1].bound);
    EXPECT_LE(plain, r.final_bound);
    EXPECT_LE(r.final_bound, ip.objective) << "seed " << seed;
    for (const auto& cut : r.cuts) {
      const CutCheck check = validate_cut(cut, inst, default_y_bounds(inst));
      EXPECT_TRUE(check.valid) << "seed " << seed << ": " << cut.to_string();
    }
    CutPool pool;
    for (const auto& cut : r.cuts) EXPECT_TRUE(pool.insert(cut));
    ++compared;
  }
  EXPECT_EQ(compared, 12);
}

TEST(Loop, FloatAndExactAgreeClosely) {
  const Instance inst = generate_instance(tiny(5));
  Config c = exact_config("cutset,metric,partition");
  const LoopResult exact = cutting_plane_loop(inst, c);
  c.exact_lp = false;
  const LoopResult approx = cutting_plane_loop(inst, c);
  EXPECT_NEAR(exact.final_bound.to_double(), approx.final_bound.to_double(), 1e-6);
}

TEST(Separation, ParallelMatchesSerial) {
  GeneratorOptions o;
  o.seed = 9;
  o.nodes = 6;
  o.density = 0.4;
  const Instance inst = generate_instance(o);
  const ExactLPSolution sol = solve_exact(build_relaxation(inst).lp);
  ASSERT_EQ(sol.status, LPStatus::Optimal);
  const FractionalPoint p = build_relaxation(inst).point_from(sol.primal);
  std::mt19937 rng(1);
  auto parts = two_partitions(inst, PartitionHeuristics{}, rng);
  for (auto& t : three_partitions(inst, PartitionHeuristics{}, rng)) parts.push_back(t);
  const auto fam = parse_families("cutset,flowcutset,mf,partition");
  const auto serial = separate_partitions(inst, p, parts, fam, R(1, 1000000), false);
  const auto parallel = separate_partitions(inst, p, parts, fam, R(1, 1000000), true);
  ASSERT_EQ(serial.size(), parallel.size());
  EXPECT_FALSE(serial.empty());
  for (std::size_t i = 0; i < serial.size(); ++i) EXPECT_TRUE(serial[i].same_inequality(parallel[i]));
}

TEST(Partitions, Heuristics) {
  std::mt19937 rng(1);
  const Instance small = netdes::testing::uniform_complete(4, R(1), R(0));
  EXPECT_EQ(two_partitions(small, PartitionHeuristics{}, rng).size(), 14u);  // 2^4 - 2 ordered
  EXPECT_EQ(three_partitions(small, PartitionHeuristics{}, rng).size(), 6u);  // S(4, 3)
  GeneratorOptions o;
  o.nodes = 10;
  const Instance big = generate_instance(o);
  const auto two = two_partitions(big, PartitionHeuristics{}, rng);
  EXPECT_GE(two.size(), 20u);
  for (const auto& p : two) EXPECT_EQ(p.num_blocks, 2);
  const auto three = three_partitions(big, PartitionHeuristics{}, rng);
  EXPECT_EQ(three.size(), 12u);
}

TEST(Generator, DeterministicAndValid) {
  GeneratorOptions o;
  o.seed = 42;
  o.nodes = 5;
  EXPECT_EQ(instance_to_json(generate_instance(o)), instance_to_json(generate_instance(o)));
  o.seed = 43;
  EXPECT_NE(instance_to_json(generate_instance(o)), instance_to_json(generate_instance(GeneratorOptions{})));
  for (unsigned seed = 1; seed <= 30; ++seed) {
    o.seed = seed;
    o.nodes = 2 + static_cast<int>(seed % 6);
    const Instance inst = generate_instance(o);
    EXPECT_TRUE(validate_instance(inst.spec()).empty());
    EXPECT_GT(inst.demand().total(), R(0));
    // Strongly connected: every node reaches every other with zero weights.
    const MetricVector reach = with_shortest_path_potentials(inst, std::vector<Rational>(static_cast<std::size_t>(inst.num_arcs())));
    for (const auto& row : reach.u) {
      for (const auto& u : row) EXPECT_EQ(u, R(0));
    }
  }
  o.density = 1.0;
  o.nodes = 5;
  EXPECT_EQ(generate_instance(o).num_arcs(), 20);
}

TEST(Report, JsonShape) {
  const Instance star = netdes::testing::star_example();
  const LoopResult r = cutting_plane_loop(star, exact_config("cutset,flowcutset"));
  const auto j = nlohmann::json::parse(report_json(star, r, R(1, 2)));
  EXPECT_TRUE(j.contains("instance"));
  ASSERT_TRUE(j["rounds"].is_array());
  EXPECT_EQ(j["rounds"].size(), r.rounds.size());
  EXPECT_TRUE(j["rounds"][0].contains("bound"));
  EXPECT_TRUE(j["rounds"][0].contains("max_violation"));
  EXPECT_EQ(j["rounds"][0]["cuts"]["cutset"], 1);
  EXPECT_DOUBLE_EQ(j["oracle_optimum"].get<double>(), 0.5);
  EXPECT_DOUBLE_EQ(j["gap_closed"].get<double>(), 1.0);
  EXPECT_FALSE(nlohmann::json::parse(report_json(star, r)).contains("oracle_optimum"));
}
