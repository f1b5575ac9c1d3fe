#include "netdes/mir.hpp"

#include <stdexcept>
#include <string>

namespace netdes {

BasicMir basic_mir(const Rational& b) { return {b.frac(), b.ceil()}; }

MirInequality mir(const BaseInequality& base) {
  if (base.c.empty()) throw std::invalid_argument("MIR base needs an integer variable");
  const Rational r = base.b.frac();
  if (r.is_zero()) return base;
  MirInequality out;
  for (const auto& a : base.a) out.a.push_back(a.sign() > 0 ? a : Rational(0));
  for (const auto& c : base.c) {
    const Rational rj = c.frac();
    out.c.push_back((rj < r ? rj : r) + r * c.floor());
  }
  out.b = r * base.b.ceil();
  return out;
}

LinearCut mir_cut(const BaseInequality& base) {
  const MirInequality m = mir(base);
  LinearCut cut;
  cut.family = CutFamily::Mir;
  for (std::size_t j = 0; j < m.a.size(); ++j) cut.add(VarRef::local_x(static_cast<int>(j)), m.a[j]);
  for (std::size_t j = 0; j < m.c.size(); ++j) cut.add(VarRef::local_y(static_cast<int>(j)), m.c[j]);
  cut.rhs = m.b;
  return cut;
}

Rational mir_function(const Rational& a, const Rational& f) {
  return f * a.floor() + min(a.frac(), f);
}

void check_knapsack_cover_set(const KnapsackCoverSet& x) {
  if (x.c.empty()) throw std::invalid_argument("knapsack cover set without variables");
  for (std::size_t m = 0; m < x.c.size(); ++m) {
    if (x.c[m] <= 0) throw std::invalid_argument("knapsack capacities must be positive");
    if (m > 0 && x.c[m] <= x.c[m - 1]) throw std::invalid_argument("knapsack capacities not increasing");
  }
}

LinearCut iterative_mir(const KnapsackCoverSet& x, const std::vector<int>& subsequence) {
  check_knapsack_cover_set(x);
  for (std::size_t i = 0; i < subsequence.size(); ++i) {
    const int j = subsequence[i];
    if (j < 0 || j >= static_cast<int>(x.c.size())) throw std::out_of_range("subsequence index");
    if (i > 0 && j <= subsequence[i - 1]) throw std::invalid_argument("subsequence must be increasing");
  }
  std::vector<Rational> alpha;
  for (long c : x.c) alpha.push_back(Rational(c));
  // Integer capacities: the left side is integral, so b can be rounded first.
  Rational beta = x.b.ceil();
  for (auto it = subsequence.rbegin(); it != subsequence.rend(); ++it) {
    const Rational delta(x.c[static_cast<std::size_t>(*it)]);
    const Rational scaled = beta / delta;
    const Rational f = scaled.frac();
    if (f.is_zero()) continue;
    for (auto& a : alpha) a = delta * mir_function(a / delta, f);
    beta = delta * f * scaled.ceil();
  }
  LinearCut cut;
  cut.family = CutFamily::Partition;
  for (std::size_t m = 0; m < alpha.size(); ++m) cut.add(VarRef::local_y(static_cast<int>(m)), alpha[m]);
  cut.rhs = beta;
  std::string seq;
  for (int j : subsequence) seq += (seq.empty() ? "" : ",") + std::to_string(x.c[static_cast<std::size_t>(j)]);
  cut.origin = "divisors=(" + seq + ")";
  return cut;
}

std::vector<std::vector<int>> mir_subsequences(int num_facilities) {
  std::vector<std::vector<int>> out;
  if (num_facilities <= 4) {
    for (int mask = 1; mask < (1 << num_facilities); ++mask) {
      std::vector<int> s;
      for (int j = 0; j < num_facilities; ++j) {
        if (mask & (1 << j)) s.push_back(j);
      }
      out.push_back(std::move(s));
    }
    return out;
  }
  std::vector<int> all;
  for (int j = 0; j < num_facilities; ++j) {
    out.push_back({j});
    all.push_back(j);
  }
  out.push_back(all);
  return out;
}

std::vector<LinearCut> all_iterative_mir_cuts(const KnapsackCoverSet& x) {
  std::vector<LinearCut> out;
  for (const auto& s : mir_subsequences(static_cast<int>(x.c.size()))) out.push_back(iterative_mir(x, s));
  return out;
}

PhiParams phi_params(const Rational& b, long c_s) {
  if (c_s <= 0) throw std::invalid_argument("facility capacity must be positive");
  const Rational cs(c_s);
  PhiParams p;
  p.c_s = c_s;
  p.r = b - (b / cs).floor() * cs;
  p.eta = (b / cs).ceil();
  return p;
}

namespace {

void check_phi(const PhiParams& p, const Rational& c) {
  if (p.r.sign() <= 0 || p.r >= Rational(p.c_s)) {
    throw std::invalid_argument("phi functions need 0 < r < c_s");
  }
  if (c.sign() < 0) throw std::invalid_argument("phi functions need c >= 0");
}

}  // namespace

Rational phi_plus(const PhiParams& p, const Rational& c) {
  check_phi(p, c);
  const Rational cs(p.c_s);
  const Rational k = (c / cs).floor();
  if (c < k * cs + p.r) return c - k * (cs - p.r);
  return (k + Rational(1)) * p.r;
}

Rational phi_minus(const PhiParams& p, const Rational& c) {
  check_phi(p, c);
  const Rational cs(p.c_s);
  const Rational k = (c / cs).floor();
  if (c < (k + Rational(1)) * cs - p.r) return c - k * p.r;
  return (k + Rational(1)) * (cs - p.r);
}

}  // namespace netdes
