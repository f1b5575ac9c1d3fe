#include "netdes/mir.hpp"

#include <gtest/gtest.h>

#include <random>

#include "netdes/lp.hpp"
#include "test_support.hpp"

using namespace netdes;
using netdes::testing::R;

namespace {

// Smallest value of the cut's left-hand side over {x >= 0 : a x >= b - c y}
// at integer y; none if that slice is empty.
std::optional<Rational> min_cut_lhs(const BaseInequality& base, const MirInequality& cut, const std::vector<long>& y) {
  Rational need = base.b;
  Rational lhs;
  for (std::size_t j = 0; j < y.size(); ++j) {
    need -= base.c[j] * Rational(y[j]);
    lhs += cut.c[j] * Rational(y[j]);
  }
  if (need.sign() <= 0) return lhs;
  bool has_positive = false;
  for (const auto& a : base.a) has_positive = has_positive || a.sign() > 0;
  if (!has_positive) return std::nullopt;
  return lhs + need;  // cut keeps a_j on positive continuous terms
}

Rational lp_min_over_cuts(const std::vector<LinearCut>& cuts, const std::vector<Rational>& cost) {
  LPModel lp;
  for (std::size_t m = 0; m < cost.size(); ++m) lp.add_column("z" + std::to_string(m), cost[m]);
  for (const auto& cut : cuts) {
    std::vector<std::pair<int, Rational>> row;
    for (const auto& [v, c] : cut.coeffs) row.emplace_back(v.index, c);
    lp.add_row("cut", row, RowSense::GreaterEqual, cut.rhs);
  }
  const auto sol = solve_exact(lp);
  EXPECT_EQ(sol.status, LPStatus::Optimal);
  return sol.objective;
}

}  // namespace

TEST(BasicMir, FormulaAndTightPoints) {
  EXPECT_TRUE(basic_mir(R(3)).r.is_zero());
  const auto m = basic_mir(R(5, 3));
  EXPECT_EQ(m.r, R(2, 3));
  EXPECT_EQ(m.ceil_b, R(2));
  EXPECT_EQ(R(0) + m.r * R(2), m.r * m.ceil_b);
  EXPECT_EQ(m.r + m.r * R(1), m.r * m.ceil_b);
  const auto h = basic_mir(R(1, 2));
  EXPECT_EQ(h.r, R(1, 2));
  EXPECT_EQ(h.r * h.ceil_b, R(1, 2));
}

TEST(MirCut, PureIntegerExample) {
  const BaseInequality base{{}, {R(1, 3), R(1)}, R(5, 3)};
  const auto cut = mir(base);
  EXPECT_EQ(cut.c[0] * R(3), R(1));
  EXPECT_EQ(cut.c[1] * R(3), R(2));
  EXPECT_EQ(cut.b * R(3), R(4));
  int tight = 0;
  for (long z1 = 0; z1 <= 6; ++z1) {
    for (long z2 = 0; z2 <= 6; ++z2) {
      if (R(z1, 3) + R(z2) < R(5, 3)) continue;
      const Rational lhs = cut.c[0] * R(z1) + cut.c[1] * R(z2);
      EXPECT_GE(lhs, cut.b);
      tight += lhs == cut.b;
    }
  }
  EXPECT_GE(tight, 2);
}

TEST(MirCut, IntegerRhsIsUnchanged) {
  const BaseInequality base{{R(1)}, {R(1, 2)}, R(2)};
  const auto cut = mir(base);
  EXPECT_EQ(cut.a, base.a);
  EXPECT_EQ(cut.c, base.c);
  EXPECT_EQ(cut.b, base.b);
  EXPECT_THROW(mir(BaseInequality{{R(1)}, {}, R(1, 2)}), std::invalid_argument);
}

TEST(MirCut, ComplementedArcBase) {
  // 2/3 (1-x2) + 2/3 (1-x3) + y >= 4/3 gives 2x2 + 2x3 <= 2 + y.
  const auto cut = mir_cut(BaseInequality{{R(2, 3), R(2, 3)}, {R(1)}, R(4, 3)});
  EXPECT_EQ(cut.coeff(VarRef::local_x(0)), R(2, 3));
  EXPECT_EQ(cut.coeff(VarRef::local_x(1)), R(2, 3));
  EXPECT_EQ(cut.coeff(VarRef::local_y(0)), R(1, 3));
  EXPECT_EQ(cut.rhs, R(2, 3));
}

TEST(MirCut, RandomBasesAreValid) {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 300; ++trial) {
    BaseInequality base;
    for (int j = 0; j < 2; ++j) base.a.push_back(netdes::testing::random_rational(rng, -6, 6, 3));
    for (int j = 0; j < 2; ++j) base.c.push_back(netdes::testing::random_rational(rng, 0, 12, 4));
    base.b = netdes::testing::random_rational(rng, 1, 30, 7);
    const auto cut = mir(base);
    for (long y0 = 0; y0 <= 8; ++y0) {
      for (long y1 = 0; y1 <= 8; ++y1) {
        if (auto v = min_cut_lhs(base, cut, {y0, y1})) EXPECT_GE(*v, cut.b) << trial;
      }
    }
  }
}

TEST(IterativeMir, SingleDivisorExample) {
  const KnapsackCoverSet X{{1, 3}, R(5)};
  const auto cut = iterative_mir(X, {1});
  EXPECT_EQ(cut.coeff(VarRef::local_y(0)), R(1));
  EXPECT_EQ(cut.coeff(VarRef::local_y(1)), R(2));
  EXPECT_EQ(cut.rhs, R(4));
  for (long z1 = 0; z1 <= 6; ++z1) {
    for (long z2 = 0; z2 <= 3; ++z2) {
      if (z1 + 3 * z2 >= 5) EXPECT_GE(R(z1 + 2 * z2), R(4));
    }
  }
}

TEST(IterativeMir, RoundsFractionalRhsFirst) {
  // y1 + 3 y2 >= 23/3 has the hull facet y1 + 2 y2 >= 6, which needs b = 8.
  const auto cut = iterative_mir(KnapsackCoverSet{{1, 3}, R(23, 3)}, {1});
  EXPECT_EQ(cut.coeff(VarRef::local_y(0)), R(1));
  EXPECT_EQ(cut.coeff(VarRef::local_y(1)), R(2));
  EXPECT_EQ(cut.rhs, R(6));
}

TEST(IterativeMir, DivisorOneIsRounding) {
  const KnapsackCoverSet X{{1, 2, 5}, R(7, 2)};
  const auto cut = iterative_mir(X, {0});
  EXPECT_EQ(cut.coeff(VarRef::local_y(0)), R(1));
  EXPECT_EQ(cut.coeff(VarRef::local_y(1)), R(2));
  EXPECT_EQ(cut.coeff(VarRef::local_y(2)), R(5));
  EXPECT_EQ(cut.rhs, R(4));
  const auto same = iterative_mir(KnapsackCoverSet{{1, 2}, R(3)}, {0});
  EXPECT_EQ(same.coeff(VarRef::local_y(1)), R(2));
  EXPECT_EQ(same.rhs, R(3));
}

TEST(IterativeMir, RejectsBadInput) {
  EXPECT_THROW(iterative_mir(KnapsackCoverSet{{3, 2}, R(1)}, {0}), std::invalid_argument);
  EXPECT_THROW(iterative_mir(KnapsackCoverSet{{1, 2}, R(1)}, {1, 0}), std::invalid_argument);
  EXPECT_THROW(iterative_mir(KnapsackCoverSet{{1, 2}, R(1)}, {2}), std::out_of_range);
}

TEST(IterativeMir, DivisibleCapacitiesGiveHull) {
  const KnapsackCoverSet X{{1, 2, 4}, R(7)};
  const auto cuts = all_iterative_mir_cuts(X);
  EXPECT_EQ(cuts.size(), 7u);
  std::mt19937 rng(23);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<Rational> cost;
    for (int m = 0; m < 3; ++m) cost.push_back(netdes::testing::random_rational(rng, 1, 40, 8));
    EXPECT_EQ(lp_min_over_cuts(cuts, cost), netdes::testing::knapsack_cover_min(X.c, X.b, cost));
  }
}

TEST(IterativeMir, CutsAreValid) {
  for (const auto& c : std::vector<std::vector<long>>{{1, 3}, {2, 5}, {1, 2, 6}, {3, 4, 7}}) {
    for (const Rational& b : {R(1, 2), R(5, 3), R(5), R(23, 3)}) {
      const KnapsackCoverSet X{c, b};
      for (const auto& cut : all_iterative_mir_cuts(X)) {
        std::vector<long> z(c.size(), 0);
        while (true) {
          Rational cap, lhs;
          for (std::size_t m = 0; m < c.size(); ++m) {
            cap += R(c[m] * z[m]);
            lhs += cut.coeff(VarRef::local_y(static_cast<int>(m))) * R(z[m]);
          }
          if (cap >= b) EXPECT_GE(lhs, cut.rhs) << cut.origin;
          std::size_t m = 0;
          while (m < z.size() && z[m] == 8) z[m++] = 0;
          if (m == z.size()) break;
          ++z[m];
        }
      }
    }
  }
}

TEST(Phi, ValuesAndErrors) {
  PhiParams p{1, R(1, 2), R(1)};
  EXPECT_EQ(phi_plus(p, R(0)), R(0));
  EXPECT_EQ(phi_minus(p, R(0)), R(0));
  EXPECT_EQ(phi_plus(p, R(1)), R(1, 2));
  EXPECT_EQ(phi_plus(p, R(2)), R(1));
  EXPECT_EQ(phi_minus(p, R(1)), R(1, 2));
  EXPECT_EQ(phi_minus(p, R(2)), R(1));
  EXPECT_THROW(phi_plus(PhiParams{3, R(0), R(1)}, R(1)), std::invalid_argument);
  EXPECT_THROW(phi_minus(p, R(-1)), std::invalid_argument);
  const auto q = phi_params(R(8), 3);
  EXPECT_EQ(q.r, R(2));
  EXPECT_EQ(q.eta, R(3));
  EXPECT_EQ(phi_plus(q, R(3)), q.r);
}

TEST(Phi, SubadditiveAndMonotone) {
  for (const auto& p : {phi_params(R(8), 3), phi_params(R(7), 3), phi_params(R(11, 2), 2)}) {
    for (long u = 0; u <= 12; ++u) {
      EXPECT_LE(phi_plus(p, R(u)), phi_plus(p, R(u + 1)));
      EXPECT_LE(phi_minus(p, R(u)), phi_minus(p, R(u + 1)));
      for (long v = 0; v <= 12; ++v) {
        EXPECT_LE(phi_plus(p, R(u + v)), phi_plus(p, R(u)) + phi_plus(p, R(v)));
        EXPECT_LE(phi_minus(p, R(u + v)), phi_minus(p, R(u)) + phi_minus(p, R(v)));
      }
    }
  }
}
