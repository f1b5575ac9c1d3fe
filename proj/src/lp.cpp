#include "netdes/lp.hpp"

#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace netdes {

int LPModel::add_column(std::string name, Rational cost, std::optional<Rational> upper) {
  if (upper && upper->sign() < 0) throw std::invalid_argument("negative upper bound on " + name);
  columns.push_back({std::move(name), std::move(cost), std::move(upper)});
  return static_cast<int>(columns.size()) - 1;
}

int LPModel::add_row(std::string name, std::vector<std::pair<int, Rational>> coeffs,
                     RowSense sense, Rational rhs) {
  for (const auto& [j, c] : coeffs) {
    if (j < 0 || j >= num_columns()) throw std::out_of_range("row references unknown column");
  }
  rows.push_back({std::move(name), std::move(coeffs), sense, std::move(rhs)});
  return static_cast<int>(rows.size()) - 1;
}

namespace {

std::string lp_name(const std::string& name, char prefix, int idx) {
  std::string s;
  for (char ch : name) {
    s += (std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' || ch == '.') ? ch : '_';
  }
  if (s.empty() || std::isdigit(static_cast<unsigned char>(s[0]))) {
    s = std::string(1, prefix) + std::to_string(idx) + (s.empty() ? "" : "_" + s);
  }
  return s;
}

void write_terms(std::ostream& os, const std::vector<std::pair<int, Rational>>& terms,
                 const std::vector<std::string>& names) {
  if (terms.empty()) {
    os << " 0 " << names.front();
    return;
  }
  for (const auto& [j, c] : terms) {
    os << (c.sign() < 0 ? " - " : " + ") << c.abs().to_double() << " " << names[static_cast<std::size_t>(j)];
  }
}

}  // namespace

std::string LPModel::to_lp_format() const {
  std::vector<std::string> names;
  for (int j = 0; j < num_columns(); ++j) names.push_back(lp_name(columns[static_cast<std::size_t>(j)].name, 'x', j));
  if (names.empty()) names.push_back("x0");
  std::ostringstream os;
  os << std::setprecision(17);
  os << "Minimize\n obj:";
  std::vector<std::pair<int, Rational>> obj;
  for (int j = 0; j < num_columns(); ++j) {
    if (!columns[static_cast<std::size_t>(j)].cost.is_zero()) obj.emplace_back(j, columns[static_cast<std::size_t>(j)].cost);
  }
  write_terms(os, obj, names);
  os << "\nSubject To\n";
  for (int i = 0; i < num_rows(); ++i) {
    const Row& r = rows[static_cast<std::size_t>(i)];
    os << " " << lp_name(r.name, 'r', i) << ":";
    write_terms(os, r.coeffs, names);
    os << (r.sense == RowSense::LessEqual ? " <= " : r.sense == RowSense::GreaterEqual ? " >= " : " = ")
       << r.rhs.to_double() << "\n";
  }
  os << "Bounds\n";
  for (int j = 0; j < num_columns(); ++j) {
    const auto& u = columns[static_cast<std::size_t>(j)].upper;
    if (u) os << " 0 <= " << names[static_cast<std::size_t>(j)] << " <= " << u->to_double() << "\n";
  }
  os << "End\n";
  return os.str();
}

std::string to_string(LPStatus s) {
  switch (s) {
    case LPStatus::Optimal: return "optimal";
    case LPStatus::Infeasible: return "infeasible";
    case LPStatus::Unbounded: return "unbounded";
    case LPStatus::Stalled: return "stalled";
  }
  return "?";
}

namespace {

template <class T>
struct Arith;

template <>
struct Arith<double> {
  static double from(const Rational& r) { return r.to_double(); }
  static double tol(const SolveOptions& o) { return o.tolerance; }
  static double abs(double v) { return std::fabs(v); }
  static void clean(double& v) {
    if (std::fabs(v) < 1e-13) v = 0.0;
  }
};

template <>
struct Arith<Rational> {
  static Rational from(const Rational& r) { return r; }
  static Rational tol(const SolveOptions&) { return Rational(0); }
  static Rational abs(const Rational& v) { return v.abs(); }
  static void clean(Rational&) {}
};

template <class T>
bool is_zero(const T& v) {
  if constexpr (std::is_same_v<T, double>) return v == 0.0;
  else return v.is_zero();
}

template <class T>
class Simplex {
 public:
  Simplex(const LPModel& model, const SolveOptions& opt)
      : model_(model), opt_(opt), tol_(Arith<T>::tol(opt)) {
    m_ = model.num_rows();
    n_ = model.num_columns();
    // Columns: structurals, then one slack per inequality, then artificials.
    for (int j = 0; j < n_; ++j) {
      const auto& col = model.columns[static_cast<std::size_t>(j)];
      upper_.push_back(col.upper ? std::optional<T>(Arith<T>::from(*col.upper)) : std::nullopt);
      cost2_.push_back(Arith<T>::from(col.cost));
      artificial_.push_back(0);
    }
    tab_.assign(static_cast<std::size_t>(m_), std::vector<T>(static_cast<std::size_t>(n_), T{}));
    beta_.assign(static_cast<std::size_t>(m_), T{});
    sign_.assign(static_cast<std::size_t>(m_), 1);
    idcol_.assign(static_cast<std::size_t>(m_), -1);
    basis_.assign(static_cast<std::size_t>(m_), -1);

    for (int i = 0; i < m_; ++i) {
      const auto& row = model.rows[static_cast<std::size_t>(i)];
      auto& t = tab_[static_cast<std::size_t>(i)];
      for (const auto& [j, c] : row.coeffs) t[static_cast<std::size_t>(j)] += Arith<T>::from(c);
      T b = Arith<T>::from(row.rhs);
      int slack_coef = row.sense == RowSense::LessEqual ? 1 : row.sense == RowSense::GreaterEqual ? -1 : 0;
      if (b < T{}) {
        sign_[static_cast<std::size_t>(i)] = -1;
        b = -b;
        for (auto& v : t) v = -v;
        slack_coef = -slack_coef;
      }
      beta_[static_cast<std::size_t>(i)] = b;
      if (slack_coef != 0) {
        const int s = add_column(T{}, false);
        tab_[static_cast<std::size_t>(i)][static_cast<std::size_t>(s)] = T(slack_coef);
        if (slack_coef == 1) {
          idcol_[static_cast<std::size_t>(i)] = s;
          basis_[static_cast<std::size_t>(i)] = s;
        }
      }
      if (idcol_[static_cast<std::size_t>(i)] < 0) {
        const int a = add_column(T{}, true);
        tab_[static_cast<std::size_t>(i)][static_cast<std::size_t>(a)] = T(1);
        idcol_[static_cast<std::size_t>(i)] = a;
        basis_[static_cast<std::size_t>(i)] = a;
      }
    }
    ncols_ = static_cast<int>(upper_.size());
    at_upper_.assign(static_cast<std::size_t>(ncols_), 0);
    is_basic_.assign(static_cast<std::size_t>(ncols_), 0);
    for (int b : basis_) is_basic_[static_cast<std::size_t>(b)] = 1;
  }

  BasicLPSolution<T> run() {
    BasicLPSolution<T> sol;
    bool has_artificial = false;
    for (char a : artificial_) has_artificial = has_artificial || a;

    if (has_artificial) {
      cost_.assign(static_cast<std::size_t>(ncols_), T{});
      for (int j = 0; j < ncols_; ++j) {
        if (artificial_[static_cast<std::size_t>(j)]) cost_[static_cast<std::size_t>(j)] = T(1);
      }
      compute_reduced_costs();
      const LPStatus st = iterate(sol.iterations);
      if (st == LPStatus::Stalled) {
        sol.status = st;
        return sol;
      }
      T infeas{};
      for (int i = 0; i < m_; ++i) {
        if (artificial_[static_cast<std::size_t>(basis_[static_cast<std::size_t>(i)])]) {
          infeas += beta_[static_cast<std::size_t>(i)];
        }
      }
      if (infeas > infeasibility_tolerance()) {
        sol.status = LPStatus::Infeasible;
        extract_farkas(sol);
        return sol;
      }
      drive_out_artificials();
      for (int j = 0; j < ncols_; ++j) {
        if (artificial_[static_cast<std::size_t>(j)]) upper_[static_cast<std::size_t>(j)] = T{};
      }
    }

    cost_ = cost2_;
    compute_reduced_costs();
    const LPStatus st = iterate(sol.iterations);
    sol.status = st;
    if (st != LPStatus::Optimal) return sol;

    sol.primal.assign(static_cast<std::size_t>(n_), T{});
    for (int j = 0; j < n_; ++j) {
      if (!is_basic_[static_cast<std::size_t>(j)]) sol.primal[static_cast<std::size_t>(j)] = nonbasic_value(j);
    }
    for (int i = 0; i < m_; ++i) {
      const int b = basis_[static_cast<std::size_t>(i)];
      if (b < n_) sol.primal[static_cast<std::size_t>(b)] = beta_[static_cast<std::size_t>(i)];
    }
    sol.objective = T{};
    for (int j = 0; j < n_; ++j) sol.objective += cost2_[static_cast<std::size_t>(j)] * sol.primal[static_cast<std::size_t>(j)];
    sol.dual.assign(static_cast<std::size_t>(m_), T{});
    for (int i = 0; i < m_; ++i) {
      const int c = idcol_[static_cast<std::size_t>(i)];
      const T pi = cost_[static_cast<std::size_t>(c)] - d_[static_cast<std::size_t>(c)];
      sol.dual[static_cast<std::size_t>(i)] = sign_[static_cast<std::size_t>(i)] > 0 ? pi : -pi;
    }
    return sol;
  }

 private:
  int add_column(T cost, bool artificial) {
    for (auto& row : tab_) row.push_back(T{});
    upper_.push_back(std::nullopt);
    cost2_.push_back(cost);
    artificial_.push_back(artificial ? 1 : 0);
    return static_cast<int>(upper_.size()) - 1;
  }

  T infeasibility_tolerance() const {
    if constexpr (std::is_same_v<T, double>) {
      double scale = 1.0;
      for (const auto& b : beta0_scale()) scale = std::max(scale, b);
      return tol_ * 100.0 * scale;
    } else {
      return T{};
    }
  }

  std::vector<double> beta0_scale() const {
    std::vector<double> v;
    for (const auto& r : model_.rows) v.push_back(std::fabs(r.rhs.to_double()));
    return v;
  }

  T nonbasic_value(int j) const {
    return at_upper_[static_cast<std::size_t>(j)] ? *upper_[static_cast<std::size_t>(j)] : T{};
  }

  void compute_reduced_costs() {
    d_ = cost_;
    for (int i = 0; i < m_; ++i) {
      const T& cb = cost_[static_cast<std::size_t>(basis_[static_cast<std::size_t>(i)])];
      if (is_zero(cb)) continue;
      const auto& row = tab_[static_cast<std::size_t>(i)];
      for (int j = 0; j < ncols_; ++j) {
        if (!is_zero(row[static_cast<std::size_t>(j)])) d_[static_cast<std::size_t>(j)] -= cb * row[static_cast<std::size_t>(j)];
      }
    }
  }

  bool fixed(int j) const {
    const auto& u = upper_[static_cast<std::size_t>(j)];
    return u && is_zero(*u);
  }

  void pivot(int r, int q) {
    auto& prow = tab_[static_cast<std::size_t>(r)];
    const T piv = prow[static_cast<std::size_t>(q)];
    std::vector<int> nz;
    for (int j = 0; j < ncols_; ++j) {
      auto& v = prow[static_cast<std::size_t>(j)];
      if (is_zero(v)) continue;
      v /= piv;
      nz.push_back(j);
    }
    prow[static_cast<std::size_t>(q)] = T(1);
    for (int i = 0; i < m_; ++i) {
      if (i == r) continue;
      auto& row = tab_[static_cast<std::size_t>(i)];
      const T f = row[static_cast<std::size_t>(q)];
      if (is_zero(f)) continue;
      for (int j : nz) {
        auto& v = row[static_cast<std::size_t>(j)];
        v -= f * prow[static_cast<std::size_t>(j)];
        Arith<T>::clean(v);
      }
      row[static_cast<std::size_t>(q)] = T{};
    }
    const T f = d_[static_cast<std::size_t>(q)];
    if (!is_zero(f)) {
      for (int j : nz) {
        d_[static_cast<std::size_t>(j)] -= f * prow[static_cast<std::size_t>(j)];
        Arith<T>::clean(d_[static_cast<std::size_t>(j)]);
      }
      d_[static_cast<std::size_t>(q)] = T{};
    }
    is_basic_[static_cast<std::size_t>(basis_[static_cast<std::size_t>(r)])] = 0;
    basis_[static_cast<std::size_t>(r)] = q;
    is_basic_[static_cast<std::size_t>(q)] = 1;
  }

  LPStatus iterate(int& iterations) {
    int streak = 0;
    for (;;) {
      if (iterations >= opt_.max_iterations) return LPStatus::Stalled;
      const bool bland = streak >= opt_.degenerate_streak;

      int q = -1;
      int dir = 0;
      T best{};
      for (int j = 0; j < ncols_; ++j) {
        if (is_basic_[static_cast<std::size_t>(j)] || fixed(j)) continue;
        const T& dj = d_[static_cast<std::size_t>(j)];
        int dj_dir = 0;
        if (!at_upper_[static_cast<std::size_t>(j)] && dj < -tol_) dj_dir = 1;
        else if (at_upper_[static_cast<std::size_t>(j)] && dj > tol_) dj_dir = -1;
        if (dj_dir == 0) continue;
        const T score = Arith<T>::abs(dj);
        if (q < 0 || (!bland && score > best)) {
          q = j;
          dir = dj_dir;
          best = score;
          if (bland) break;
        }
      }
      if (q < 0) return LPStatus::Optimal;
      ++iterations;

      // Ratio test.
      int r = -1;
      bool leave_to_upper = false;
      std::optional<T> step;
      if (upper_[static_cast<std::size_t>(q)]) step = *upper_[static_cast<std::size_t>(q)];
      T best_alpha{};
      for (int i = 0; i < m_; ++i) {
        const T alpha = tab_[static_cast<std::size_t>(i)][static_cast<std::size_t>(q)] * T(dir);
        const int b = basis_[static_cast<std::size_t>(i)];
        T limit;
        bool to_upper = false;
        if (alpha > tol_) {
          limit = beta_[static_cast<std::size_t>(i)] / alpha;
        } else if (alpha < -tol_ && upper_[static_cast<std::size_t>(b)]) {
          limit = (*upper_[static_cast<std::size_t>(b)] - beta_[static_cast<std::size_t>(i)]) / (-alpha);
          to_upper = true;
        } else {
          continue;
        }
        if (limit < T{}) limit = T{};
        bool take = false;
        if (!step) {
          take = true;
        } else if (limit < *step - tol_) {
          take = true;
        } else if (limit <= *step + tol_ && r >= 0) {
          // Tie: smallest basic index under Bland, else the larger pivot.
          take = bland ? b < basis_[static_cast<std::size_t>(r)]
                       : Arith<T>::abs(alpha) > best_alpha;
        }
        if (take) {
          step = limit;
          r = i;
          leave_to_upper = to_upper;
          best_alpha = Arith<T>::abs(alpha);
        }
      }
      if (!step) return LPStatus::Unbounded;
      const T t = *step;
      streak = t > tol_ ? 0 : streak + 1;

      if (!is_zero(t)) {
        for (int i = 0; i < m_; ++i) {
          const T& a = tab_[static_cast<std::size_t>(i)][static_cast<std::size_t>(q)];
          if (!is_zero(a)) beta_[static_cast<std::size_t>(i)] -= a * T(dir) * t;
        }
      }
      if (r < 0) {
        at_upper_[static_cast<std::size_t>(q)] = dir > 0 ? 1 : 0;
        continue;
      }
      const T entering_value = nonbasic_value(q) + T(dir) * t;
      const int leaving = basis_[static_cast<std::size_t>(r)];
      pivot(r, q);
      beta_[static_cast<std::size_t>(r)] = entering_value;
      at_upper_[static_cast<std::size_t>(q)] = 0;
      at_upper_[static_cast<std::size_t>(leaving)] = leave_to_upper ? 1 : 0;
    }
  }

  void drive_out_artificials() {
    for (int i = 0; i < m_; ++i) {
      if (!artificial_[static_cast<std::size_t>(basis_[static_cast<std::size_t>(i)])]) continue;
      int q = -1;
      T best{};
      for (int j = 0; j < ncols_; ++j) {
        if (artificial_[static_cast<std::size_t>(j)] || is_basic_[static_cast<std::size_t>(j)]) continue;
        const T a = Arith<T>::abs(tab_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
        if (a > tol_ && a > best) {
          best = a;
          q = j;
        }
      }
      if (q < 0) continue;  // redundant row; the artificial stays basic at zero
      const T value = nonbasic_value(q);
      const int leaving = basis_[static_cast<std::size_t>(i)];
      // Degenerate pivot: the artificial is at zero so no basic value moves
      // except through the entering column's current value.
      const T shift = beta_[static_cast<std::size_t>(i)] / tab_[static_cast<std::size_t>(i)][static_cast<std::size_t>(q)];
      for (int k = 0; k < m_; ++k) {
        if (k == i) continue;
        beta_[static_cast<std::size_t>(k)] -= tab_[static_cast<std::size_t>(k)][static_cast<std::size_t>(q)] * shift;
      }
      pivot(i, q);
      beta_[static_cast<std::size_t>(i)] = value + shift;
      at_upper_[static_cast<std::size_t>(q)] = 0;
      at_upper_[static_cast<std::size_t>(leaving)] = 0;
    }
  }

  void extract_farkas(BasicLPSolution<T>& sol) const {
    sol.farkas_rows.assign(static_cast<std::size_t>(m_), T{});
    for (int i = 0; i < m_; ++i) {
      const int c = idcol_[static_cast<std::size_t>(i)];
      const T pi = cost_[static_cast<std::size_t>(c)] - d_[static_cast<std::size_t>(c)];
      sol.farkas_rows[static_cast<std::size_t>(i)] = sign_[static_cast<std::size_t>(i)] > 0 ? pi : -pi;
    }
    sol.farkas_bounds.assign(static_cast<std::size_t>(n_), T{});
    for (int i = 0; i < m_; ++i) {
      const T& lam = sol.farkas_rows[static_cast<std::size_t>(i)];
      if (is_zero(lam)) continue;
      for (const auto& [j, c] : model_.rows[static_cast<std::size_t>(i)].coeffs) {
        sol.farkas_bounds[static_cast<std::size_t>(j)] += lam * Arith<T>::from(c);
      }
    }
    for (int j = 0; j < n_; ++j) {
      auto& mu = sol.farkas_bounds[static_cast<std::size_t>(j)];
      if (!model_.columns[static_cast<std::size_t>(j)].upper || mu < T{}) mu = T{};
    }
  }

  const LPModel& model_;
  SolveOptions opt_;
  T tol_;
  int m_ = 0;
  int n_ = 0;
  int ncols_ = 0;
  std::vector<std::vector<T>> tab_;
  std::vector<T> beta_;
  std::vector<int> basis_;
  std::vector<int> sign_;
  std::vector<int> idcol_;
  std::vector<std::optional<T>> upper_;
  std::vector<T> cost2_;
  std::vector<T> cost_;
  std::vector<T> d_;
  std::vector<char> artificial_;
  std::vector<char> at_upper_;
  std::vector<char> is_basic_;
};

}  // namespace

template <class T>
BasicLPSolution<T> solve_lp(const LPModel& model, const SolveOptions& options) {
  Simplex<T> s(model, options);
  return s.run();
}

template BasicLPSolution<double> solve_lp<double>(const LPModel&, const SolveOptions&);
template BasicLPSolution<Rational> solve_lp<Rational>(const LPModel&, const SolveOptions&);

bool verify_farkas(const LPModel& model, const std::vector<Rational>& rows,
                   const std::vector<Rational>& bounds) {
  if (static_cast<int>(rows.size()) != model.num_rows() ||
      static_cast<int>(bounds.size()) != model.num_columns()) {
    return false;
  }
  std::vector<Rational> col(static_cast<std::size_t>(model.num_columns()));
  Rational lhs;
  for (int i = 0; i < model.num_rows(); ++i) {
    const auto& row = model.rows[static_cast<std::size_t>(i)];
    const Rational& lam = rows[static_cast<std::size_t>(i)];
    if (row.sense == RowSense::LessEqual && lam.sign() > 0) return false;
    if (row.sense == RowSense::GreaterEqual && lam.sign() < 0) return false;
    for (const auto& [j, c] : row.coeffs) col[static_cast<std::size_t>(j)] += lam * c;
    lhs += lam * row.rhs;
  }
  for (int j = 0; j < model.num_columns(); ++j) {
    const auto& u = model.columns[static_cast<std::size_t>(j)].upper;
    const Rational& mu = bounds[static_cast<std::size_t>(j)];
    if (mu.sign() < 0) return false;
    if (!u) {
      if (col[static_cast<std::size_t>(j)].sign() > 0 || !mu.is_zero()) return false;
    } else {
      if (col[static_cast<std::size_t>(j)] > mu) return false;
      lhs -= mu * *u;
    }
  }
  return lhs.sign() > 0;
}

}  // namespace netdes
