#include "netdes/arc_cuts.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <string>

namespace netdes {

namespace {

std::string set_string(const std::vector<int>& s) {
  std::string out = "{";
  for (std::size_t i = 0; i < s.size(); ++i) out += (i ? "," : "") + std::to_string(s[i] + 1);
  return out + "}";
}

Rational sum_a(const ArcSetRelaxation& rel, const std::vector<int>& S) {
  Rational s;
  for (int i : S) s += rel.a.at(static_cast<std::size_t>(i));
  return s;
}

void check_subset(const ArcSetRelaxation& rel, const std::vector<int>& S) {
  std::set<int> seen;
  for (int i : S) {
    if (i < 0 || i >= rel.size()) throw std::out_of_range("item index out of range");
    if (!seen.insert(i).second) throw std::invalid_argument("repeated item in subset");
  }
}

void require_normalized(const ArcSetRelaxation& rel) {
  for (const auto& a : rel.a) {
    if (a.sign() < 0 || a >= Rational(1)) throw std::invalid_argument("arc set is not normalized");
  }
  if (rel.a0.sign() < 0 || rel.a0 >= Rational(1)) throw std::invalid_argument("arc set is not normalized");
}

}  // namespace

ArcSetRelaxation from_capacity_row(const Instance& inst, int arc, int facility) {
  if (arc < 0 || arc >= inst.num_arcs()) throw std::out_of_range("arc index");
  if (facility < 0 || facility >= inst.num_facilities()) throw std::out_of_range("facility index");
  const long cs = inst.facility(facility).capacity;
  if (cs <= 0) throw std::invalid_argument("facility capacity must be positive");
  const Rational c(cs);
  ArcSetRelaxation rel;
  rel.mode = inst.routing() == Routing::Unsplittable ? ArcSetMode::Unsplittable : ArcSetMode::Splittable;
  rel.arc = arc;
  for (int k = 0; k < inst.num_commodities(); ++k) {
    const Rational d = inst.commodity(k).supply();
    if (d.sign() <= 0) continue;
    rel.a.push_back(d / c);
    rel.commodity.push_back(k);
    rel.demand.push_back(d);
  }
  rel.a0 = inst.arc(arc).existing_capacity / c;
  for (int m = 0; m < inst.num_facilities(); ++m) {
    rel.y_weight.push_back((Rational(inst.facility(m).capacity) / c).ceil());
  }
  return rel;
}

ArcPoint arc_point(const ArcSetRelaxation& rel, const FractionalPoint& p) {
  ArcPoint out;
  for (std::size_t i = 0; i < rel.a.size(); ++i) out.x.push_back(p.flow(rel.arc, rel.commodity[i]) / rel.demand[i]);
  for (std::size_t m = 0; m < rel.y_weight.size(); ++m) out.y += rel.y_weight[m] * p.cap(rel.arc, static_cast<int>(m));
  return out;
}

LinearCut to_network(const ArcSetRelaxation& rel, const LinearCut& local) {
  if (rel.arc < 0) throw std::invalid_argument("arc set has no network mapping");
  LinearCut out;
  out.family = local.family;
  out.origin = "arc " + std::to_string(rel.arc) + ": " + local.origin;
  out.rhs = local.rhs;
  for (const auto& [v, c] : local.coeffs) {
    if (v.kind == VarKind::LocalX) {
      const auto i = static_cast<std::size_t>(v.index);
      out.add(VarRef::flow(rel.arc, rel.commodity[i]), c / rel.demand[i]);
    } else if (v.kind == VarKind::LocalY && v.index == 0) {
      for (std::size_t m = 0; m < rel.y_weight.size(); ++m) {
        out.add(VarRef::capacity(rel.arc, static_cast<int>(m)), c * rel.y_weight[m]);
      }
    } else {
      throw std::invalid_argument("unexpected variable in an arc-set cut");
    }
  }
  return out;
}

NormalizedArcSet normalize_unsplittable(const ArcSetRelaxation& rel) {
  NormalizedArcSet n;
  n.rel = rel;
  for (auto& a : n.rel.a) {
    n.floor_a.push_back(a.floor());
    a = a.frac();
  }
  n.floor_a0 = rel.a0.floor();
  n.rel.a0 = rel.a0.frac();
  return n;
}

LinearCut map_back(const NormalizedArcSet& n, const LinearCut& cut) {
  const Rational beta = cut.coeff(VarRef::local_y());
  LinearCut out = cut;
  for (std::size_t i = 0; i < n.floor_a.size(); ++i) {
    out.add(VarRef::local_x(static_cast<int>(i)), -beta * n.floor_a[i]);
  }
  out.rhs = cut.rhs - beta * n.floor_a0;
  return out;
}

ArcPoint normalized_point(const NormalizedArcSet& n, const ArcPoint& p) {
  ArcPoint out = p;
  out.y = p.y + n.floor_a0;
  for (std::size_t i = 0; i < n.floor_a.size(); ++i) out.y -= n.floor_a[i] * p.x[i];
  return out;
}

Rational local_violation(const LinearCut& cut, const ArcPoint& p) {
  const Rational lhs = cut.lhs([&](const VarRef& v) {
    if (v.kind == VarKind::LocalX) return p.x.at(static_cast<std::size_t>(v.index));
    if (v.kind == VarKind::LocalY && v.index == 0) return p.y;
    throw std::invalid_argument("unexpected variable in an arc-set cut");
  });
  return cut.rhs - lhs;
}

std::optional<LinearCut> residual_capacity_cut(const ArcSetRelaxation& rel, const std::vector<int>& S) {
  if (S.empty()) throw std::invalid_argument("residual capacity cut needs a nonempty S");
  check_subset(rel, S);
  const Rational aS = sum_a(rel, S);
  const Rational d = aS - rel.a0;
  const Rational r = d.frac();
  if (r.is_zero()) return std::nullopt;
  LinearCut cut;
  cut.family = CutFamily::ResidualCapacity;
  for (int i : S) cut.add(VarRef::local_x(i), -rel.a[static_cast<std::size_t>(i)]);
  cut.add(VarRef::local_y(), r);
  cut.rhs = r * d.ceil() - aS;
  cut.origin = "S=" + set_string(S) + " r=" + r.to_string();
  return cut;
}

std::optional<LinearCut> separate_residual_capacity(const ArcSetRelaxation& rel, const ArcPoint& p) {
  const Rational fl = p.y.floor();
  const Rational fy = p.y - fl;
  const Rational eta = fl + Rational(1);
  std::vector<int> T;
  Rational aT;
  for (int i = 0; i < rel.size(); ++i) {
    if (p.x[static_cast<std::size_t>(i)] > fy) {
      T.push_back(i);
      aT += rel.a[static_cast<std::size_t>(i)];
    }
  }
  if (T.empty()) return std::nullopt;
  if (!(rel.a0 + fl < aT && aT < rel.a0 + eta)) return std::nullopt;
  Rational test = (eta - p.y) * (rel.a0 + fl);
  for (int i : T) {
    test += rel.a[static_cast<std::size_t>(i)] * (Rational(1) - p.x[static_cast<std::size_t>(i)] - eta + p.y);
  }
  if (test.sign() >= 0) return std::nullopt;
  return residual_capacity_cut(rel, T);
}

Rational c_strong_constant(const ArcSetRelaxation& rel, const std::vector<int>& S) {
  return Rational(static_cast<long>(S.size())) - (sum_a(rel, S) - rel.a0).ceil();
}

LinearCut c_strong_cut(const ArcSetRelaxation& rel, const std::vector<int>& S) {
  check_subset(rel, S);
  LinearCut cut;
  cut.family = CutFamily::CStrong;
  for (int i : S) cut.add(VarRef::local_x(i), Rational(-1));
  cut.add(VarRef::local_y(), Rational(1));
  cut.rhs = -c_strong_constant(rel, S);
  cut.origin = "S=" + set_string(S);
  return cut;
}

bool is_maximal_c_strong(const ArcSetRelaxation& rel, const std::vector<int>& S) {
  check_subset(rel, S);
  const Rational cS = c_strong_constant(rel, S);
  std::vector<char> in(static_cast<std::size_t>(rel.size()), 0);
  for (int i : S) in[static_cast<std::size_t>(i)] = 1;
  for (int i = 0; i < rel.size(); ++i) {
    std::vector<int> T;
    if (in[static_cast<std::size_t>(i)]) {
      for (int j : S) {
        if (j != i) T.push_back(j);
      }
      if (c_strong_constant(rel, T) != cS) return false;
    } else {
      T = S;
      T.push_back(i);
      if (c_strong_constant(rel, T) != cS + Rational(1)) return false;
    }
  }
  return true;
}

CStrongSeparation separate_c_strong(const ArcSetRelaxation& rel, const ArcPoint& p, int cap) {
  require_normalized(rel);
  CStrongSeparation out;
  std::vector<int> ones, frac;
  for (int i = 0; i < rel.size(); ++i) {
    const Rational& x = p.x[static_cast<std::size_t>(i)];
    if (x >= Rational(1)) ones.push_back(i);
    else if (x.sign() > 0) frac.push_back(i);
  }
  auto violation = [&](const std::vector<int>& S) {
    Rational v = -c_strong_constant(rel, S) - p.y;
    for (int i : S) v += p.x[static_cast<std::size_t>(i)];
    return v;
  };
  std::optional<std::vector<int>> best;
  Rational best_v;
  if (static_cast<int>(frac.size()) <= cap) {
    const std::size_t n = frac.size();
    for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
      std::vector<int> S = ones;
      for (std::size_t b = 0; b < n; ++b) {
        if (mask & (std::size_t{1} << b)) S.push_back(frac[b]);
      }
      if (S.empty()) continue;
      const Rational v = violation(S);
      if (v.sign() > 0 && (!best || v > best_v)) {
        std::sort(S.begin(), S.end());
        best = S;
        best_v = v;
      }
    }
  } else {
    out.heuristic = true;
    std::vector<int> S = ones;
    for (int i : frac) {
      if (p.x[static_cast<std::size_t>(i)] >= Rational(1, 2)) S.push_back(i);
    }
    std::sort(S.begin(), S.end());
    if (!S.empty() && violation(S).sign() > 0) best = S;
  }
  if (best) out.cut = c_strong_cut(rel, *best);
  return out;
}

LinearCut k_split_c_strong_cut(const ArcSetRelaxation& rel, const std::vector<int>& S, int k) {
  if (k < 1) throw std::invalid_argument("k must be a positive integer");
  check_subset(rel, S);
  const Rational K(k);
  std::vector<char> in(static_cast<std::size_t>(rel.size()), 0);
  for (int i : S) in[static_cast<std::size_t>(i)] = 1;
  LinearCut cut;
  cut.family = k == 1 ? CutFamily::CStrong : CutFamily::KSplit;
  Rational ceil_sum;
  for (int i = 0; i < rel.size(); ++i) {
    const Rational ka = K * rel.a[static_cast<std::size_t>(i)];
    const Rational coef = in[static_cast<std::size_t>(i)] ? ka.ceil() : ka.floor();
    if (in[static_cast<std::size_t>(i)]) ceil_sum += coef;
    cut.add(VarRef::local_x(i), -coef);
  }
  const Rational ck = ceil_sum - (K * sum_a(rel, S) - K * rel.a0).ceil();
  cut.add(VarRef::local_y(), K);
  cut.rhs = -ck;
  cut.origin = "k=" + std::to_string(k) + " S=" + set_string(S);
  return cut;
}

KSplitFacetReport k_split_facet_report(const ArcSetRelaxation& rel, const std::vector<int>& S, int k) {
  if (k < 1) throw std::invalid_argument("k must be a positive integer");
  check_subset(rel, S);
  const Rational K(k);
  ArcSetRelaxation scaled = rel;
  for (auto& a : scaled.a) a = (K * a).frac();
  scaled.a0 = (K * rel.a0).frac();
  KSplitFacetReport rep;
  rep.maximal_in_k_split = is_maximal_c_strong(scaled, S);
  const Rational f = (sum_a(rel, S) - rel.a0).frac();
  rep.fractional_part = f > Rational(k - 1, k) && rel.a0.sign() >= 0;
  std::vector<char> in(static_cast<std::size_t>(rel.size()), 0);
  for (int i : S) in[static_cast<std::size_t>(i)] = 1;
  rep.item_bounds = true;
  for (int i = 0; i < rel.size(); ++i) {
    const Rational& a = rel.a[static_cast<std::size_t>(i)];
    if (in[static_cast<std::size_t>(i)] ? !(a > f) : !(a < Rational(1) - f)) rep.item_bounds = false;
  }
  return rep;
}

bool k_split_facet_check(const ArcSetRelaxation& rel, const std::vector<int>& S, int k) {
  return k_split_facet_report(rel, S, k).all();
}

std::optional<LinearCut> separate_k_split(const ArcSetRelaxation& rel, const ArcPoint& p, int k, int cap) {
  std::vector<int> support;
  for (int i = 0; i < rel.size(); ++i) {
    if (p.x[static_cast<std::size_t>(i)].sign() > 0) support.push_back(i);
  }
  if (static_cast<int>(support.size()) > cap) return std::nullopt;
  std::optional<LinearCut> best;
  Rational best_v;
  const std::size_t n = support.size();
  for (std::size_t mask = 1; mask < (std::size_t{1} << n); ++mask) {
    std::vector<int> S;
    for (std::size_t b = 0; b < n; ++b) {
      if (mask & (std::size_t{1} << b)) S.push_back(support[b]);
    }
    LinearCut cut = k_split_c_strong_cut(rel, S, k);
    const Rational v = local_violation(cut, p);
    if (v.sign() > 0 && (!best || v > best_v)) {
      best = std::move(cut);
      best_v = v;
    }
  }
  return best;
}

Rational cover_excess(const ArcSetRelaxation& rel, const CoverSpec& spec) {
  return sum_a(rel, spec.C) + sum_a(rel, spec.K1) - rel.a0 - Rational(spec.y_bar);
}

bool is_minimal_cover(const ArcSetRelaxation& rel, const CoverSpec& spec) {
  const Rational r = cover_excess(rel, spec);
  if (r.sign() <= 0) return false;
  for (int i : spec.C) {
    if (rel.a[static_cast<std::size_t>(i)] < r) return false;
  }
  return true;
}

namespace {

struct Item {
  Rational value;
  Rational weight;
};

// max sum value_i z_i s.t. sum weight_i z_i <= cap, z binary. Returns none if
// cap < 0.
std::optional<Rational> knapsack_max(const std::vector<Item>& items, const Rational& cap) {
  if (cap.sign() < 0) return std::nullopt;
  std::vector<Item> useful;
  for (const auto& it : items) {
    if (it.value.sign() > 0 && it.weight <= cap) useful.push_back(it);
  }
  if (useful.empty()) return Rational(0);
  std::vector<Rational> denoms;
  for (const auto& it : useful) denoms.push_back(it.weight);
  denoms.push_back(cap);
  const mpz_class L = common_denominator(denoms);
  const Rational scale{mpq_class(L)};
  const Rational W = (cap * scale).floor();
  if (W.raw() <= 2'000'000) {
    const long w_cap = W.raw().get_num().get_si();
    std::vector<std::optional<Rational>> dp(static_cast<std::size_t>(w_cap + 1));
    dp[0] = Rational(0);
    for (const auto& it : useful) {
      const long w = (it.weight * scale).raw().get_num().get_si();
      for (long c = w_cap; c >= w; --c) {
        const auto& prev = dp[static_cast<std::size_t>(c - w)];
        if (!prev) continue;
        Rational cand = *prev + it.value;
        auto& cur = dp[static_cast<std::size_t>(c)];
        if (!cur || cand > *cur) cur = std::move(cand);
      }
    }
    Rational best;
    for (const auto& v : dp) {
      if (v && *v > best) best = *v;
    }
    return best;
  }
  if (useful.size() > 22) throw std::runtime_error("knapsack too large for exact lifting");
  Rational best;
  const std::size_t n = useful.size();
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    Rational w, v;
    for (std::size_t b = 0; b < n; ++b) {
      if (mask & (std::size_t{1} << b)) {
        w += useful[b].weight;
        v += useful[b].value;
      }
    }
    if (w <= cap && v > best) best = v;
  }
  return best;
}

}  // namespace

LinearCut lifted_cover_cut(const ArcSetRelaxation& rel, const CoverSpec& spec, const std::vector<int>& order_in) {
  const int n = rel.size();
  std::vector<int> role(static_cast<std::size_t>(n), -1);  // 0: K0, 1: K1, 2: C
  auto assign = [&](const std::vector<int>& v, int r) {
    for (int i : v) {
      if (i < 0 || i >= n) throw std::out_of_range("item index out of range");
      if (role[static_cast<std::size_t>(i)] != -1) throw std::invalid_argument("K0, K1 and C must be disjoint");
      role[static_cast<std::size_t>(i)] = r;
    }
  };
  assign(spec.K0, 0);
  assign(spec.K1, 1);
  assign(spec.C, 2);
  for (int r : role) {
    if (r == -1) throw std::invalid_argument("C must be the complement of K0 and K1");
  }
  if (spec.y_bar < 0) throw std::invalid_argument("y_bar must be nonnegative");
  const Rational excess = cover_excess(rel, spec);
  if (excess.sign() <= 0) throw std::invalid_argument("C is not a cover");

  std::vector<int> order = order_in;
  if (order.empty()) {
    std::vector<int> k0 = spec.K0, k1 = spec.K1;
    std::sort(k0.begin(), k0.end());
    std::sort(k1.begin(), k1.end());
    order = k0;
    order.insert(order.end(), k1.begin(), k1.end());
  } else {
    std::vector<int> want = spec.K0, got = order;
    want.insert(want.end(), spec.K1.begin(), spec.K1.end());
    std::sort(want.begin(), want.end());
    std::sort(got.begin(), got.end());
    if (want != got) throw std::invalid_argument("lifting order must list K0 and K1 exactly once");
  }

  // Current inequality: sum_i p_i x_i + alpha_y (y_bar - y) <= pi0 over the
  // free variables; unlifted variables sit at their restriction values.
  std::vector<Rational> p(static_cast<std::size_t>(n));
  std::vector<char> free_var(static_cast<std::size_t>(n), 0);
  std::vector<int> fixed_val(static_cast<std::size_t>(n), 0);
  for (int i = 0; i < n; ++i) {
    const int r = role[static_cast<std::size_t>(i)];
    if (r == 2) {
      p[static_cast<std::size_t>(i)] = Rational(1);
      free_var[static_cast<std::size_t>(i)] = 1;
    } else {
      fixed_val[static_cast<std::size_t>(i)] = r;
    }
  }
  const long cardC = static_cast<long>(spec.C.size());
  Rational pi0(cardC - 1);
  const Rational ybar(spec.y_bar);
  Rational total_a;
  for (const auto& a : rel.a) total_a += a;

  auto items_and_fixed = [&](int extra, int extra_val, Rational& fixed_weight) {
    std::vector<Item> items;
    fixed_weight = Rational(0);
    for (int i = 0; i < n; ++i) {
      const auto& a = rel.a[static_cast<std::size_t>(i)];
      if (i == extra) {
        if (extra_val) fixed_weight += a;
      } else if (free_var[static_cast<std::size_t>(i)]) {
        items.push_back({p[static_cast<std::size_t>(i)], a});
      } else if (fixed_val[static_cast<std::size_t>(i)]) {
        fixed_weight += a;
      }
    }
    return items;
  };

  // Lift y.
  Rational alpha_y;
  {
    Rational fixed_w;
    const auto items = items_and_fixed(-1, 0, fixed_w);
    const Rational cap0 = rel.a0 + ybar - fixed_w;
    std::optional<Rational> upper, lower;
    for (long t = -1;; --t) {
      const auto g = knapsack_max(items, cap0 + Rational(t));
      if (!g) break;
      const Rational bound = (pi0 - *g) / Rational(-t);
      if (!upper || bound < *upper) upper = bound;
    }
    const long t_hi = std::max<long>(1, (total_a - cap0).ceil().raw().get_num().get_si() + 1);
    for (long t = 1; t <= t_hi; ++t) {
      const auto g = knapsack_max(items, cap0 + Rational(t));
      if (!g) continue;
      const Rational bound = (*g - pi0) / Rational(t);
      if (!lower || bound > *lower) lower = bound;
    }
    if (!lower) throw std::logic_error("capacity variable cannot be lifted");
    if (upper && *upper < *lower) throw std::logic_error("capacity variable cannot be lifted");
    alpha_y = upper ? *upper : *lower;
  }

  // max of the current left-hand side with variable j at value v, over y.
  auto max_lhs = [&](int j, int v) {
    Rational fixed_w;
    const auto items = items_and_fixed(j, v, fixed_w);
    const long y_lo = (fixed_w - rel.a0).ceil().raw().get_num().get_si();
    const long y_hi = std::max(y_lo, (total_a - rel.a0).ceil().raw().get_num().get_si() + 1);
    std::optional<Rational> best;
    for (long y = y_lo; y <= y_hi; ++y) {
      const auto g = knapsack_max(items, rel.a0 + Rational(y) - fixed_w);
      if (!g) continue;
      const Rational val = *g + alpha_y * (ybar - Rational(y));
      if (!best || val > *best) best = val;
    }
    if (!best) throw std::logic_error("lifting problem infeasible");
    return *best;
  };

  std::vector<Rational> alpha(static_cast<std::size_t>(n));
  for (int j : order) {
    const auto uj = static_cast<std::size_t>(j);
    if (role[uj] == 0) {
      alpha[uj] = pi0 - max_lhs(j, 1);
      p[uj] = alpha[uj];
    } else {
      alpha[uj] = pi0 - max_lhs(j, 0);
      p[uj] = -alpha[uj];
      pi0 -= alpha[uj];
    }
    free_var[uj] = 1;
  }

  // >= form: alpha_y y - sum p_i x_i >= alpha_y y_bar - pi0.
  LinearCut cut;
  cut.family = CutFamily::LiftedCover;
  for (int i = 0; i < n; ++i) cut.add(VarRef::local_x(i), -p[static_cast<std::size_t>(i)]);
  cut.add(VarRef::local_y(), alpha_y);
  cut.rhs = alpha_y * ybar - pi0;
  cut.origin = "ybar=" + std::to_string(spec.y_bar) + " C=" + set_string(spec.C) + " K0=" + set_string(spec.K0) +
               " K1=" + set_string(spec.K1) + (is_minimal_cover(rel, spec) ? "" : " non-minimal");
  return cut;
}

}  // namespace netdes
