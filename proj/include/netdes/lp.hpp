#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "netdes/rational.hpp"

namespace netdes {

enum class RowSense { LessEqual, GreaterEqual, Equal };

// min c'x subject to linear rows, 0 <= x <= upper (upper may be infinite).
struct LPModel {
  struct Column {
    std::string name;
    Rational cost;
    std::optional<Rational> upper;
  };
  struct Row {
    std::string name;
    std::vector<std::pair<int, Rational>> coeffs;
    RowSense sense = RowSense::Equal;
    Rational rhs;
  };

  std::vector<Column> columns;
  std::vector<Row> rows;

  int add_column(std::string name, Rational cost, std::optional<Rational> upper = std::nullopt);
  int add_row(std::string name, std::vector<std::pair<int, Rational>> coeffs, RowSense sense,
              Rational rhs);
  int num_columns() const { return static_cast<int>(columns.size()); }
  int num_rows() const { return static_cast<int>(rows.size()); }

  // CPLEX LP text format.
  std::string to_lp_format() const;
};

enum class LPStatus { Optimal, Infeasible, Unbounded, Stalled };

std::string to_string(LPStatus s);

struct SolveOptions {
  double tolerance = 1e-9;     // ignored in exact arithmetic
  int max_iterations = 100000;
  int degenerate_streak = 50;  // switch to smallest-index pivoting after this many
};

template <class T>
struct BasicLPSolution {
  LPStatus status = LPStatus::Stalled;
  T objective{};
  std::vector<T> primal;
  // Row duals: optimal objective changes by dual[i] per unit increase of rhs[i].
  std::vector<T> dual;
  // When infeasible: row multipliers lambda (<= 0 on <= rows, >= 0 on >= rows)
  // and bound multipliers mu >= 0 with lambda'A_j <= mu_j for bounded columns,
  // lambda'A_j <= 0 for unbounded ones, and lambda'b - mu'u > 0.
  std::vector<T> farkas_rows;
  std::vector<T> farkas_bounds;
  int iterations = 0;
};

using LPSolution = BasicLPSolution<double>;
using ExactLPSolution = BasicLPSolution<Rational>;

template <class T>
BasicLPSolution<T> solve_lp(const LPModel& model, const SolveOptions& options = {});

inline LPSolution solve(const LPModel& model, const SolveOptions& options = {}) {
  return solve_lp<double>(model, options);
}
inline ExactLPSolution solve_exact(const LPModel& model, const SolveOptions& options = {}) {
  return solve_lp<Rational>(model, options);
}

// Checks a Farkas certificate against the model in exact arithmetic.
bool verify_farkas(const LPModel& model, const std::vector<Rational>& rows,
                   const std::vector<Rational>& bounds);

}  // namespace netdes
