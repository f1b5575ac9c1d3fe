#include "netdes/cutset_cuts.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <string>

#include "netdes/arc_cuts.hpp"
#include "netdes/mir.hpp"

namespace netdes {

std::vector<int> CutSetRelaxation::positive_commodities() const {
  std::vector<int> out;
  for (int k = 0; k < num_commodities; ++k) {
    if (b[static_cast<std::size_t>(k)].sign() > 0) out.push_back(k);
  }
  return out;
}

Rational CutSetRelaxation::b_of(const std::vector<int>& Q) const {
  Rational s;
  for (int k : Q) s += b.at(static_cast<std::size_t>(k));
  return s;
}

Rational CutSetRelaxation::existing_of(const std::vector<int>& arcs) const {
  Rational s;
  for (int a : arcs) s += existing.at(static_cast<std::size_t>(a));
  return s;
}

CutSetRelaxation build_cutset(const Instance& inst, const std::vector<char>& in_u) {
  if (static_cast<int>(in_u.size()) != inst.num_nodes()) throw std::invalid_argument("partition has wrong size");
  const auto nu = std::count(in_u.begin(), in_u.end(), 1);
  if (nu == 0 || nu == static_cast<long>(in_u.size())) throw std::invalid_argument("U and V must be nonempty");
  CutSetRelaxation rel;
  rel.in_u = in_u;
  rel.num_commodities = inst.num_commodities();
  for (int a = 0; a < inst.num_arcs(); ++a) {
    const auto& arc = inst.arc(a);
    rel.existing.push_back(arc.existing_capacity);
    const bool tu = in_u[static_cast<std::size_t>(arc.tail)];
    const bool hu = in_u[static_cast<std::size_t>(arc.head)];
    if (tu && !hu) rel.out_arcs.push_back(a);
    if (!tu && hu) rel.in_arcs.push_back(a);
  }
  for (int k = 0; k < inst.num_commodities(); ++k) {
    Rational s;
    for (int i = 0; i < inst.num_nodes(); ++i) {
      if (!in_u[static_cast<std::size_t>(i)]) s += inst.commodity(k).net_demand[static_cast<std::size_t>(i)];
    }
    rel.b.push_back(s);
  }
  for (const auto& f : inst.facilities()) rel.facility_capacity.push_back(f.capacity);
  rel.infeasible_relaxation = rel.out_arcs.empty() && rel.b_of(rel.positive_commodities()).sign() > 0;
  return rel;
}

namespace {

void check_selection(const CutSetRelaxation& rel, const FlowCutSelection& sel) {
  if (sel.facility < 0 || sel.facility >= static_cast<int>(rel.facility_capacity.size())) {
    throw std::out_of_range("facility index");
  }
  auto within = [](const std::vector<int>& sub, const std::vector<int>& ground, const char* what) {
    std::set<int> seen;
    for (int a : sub) {
      if (std::find(ground.begin(), ground.end(), a) == ground.end() || !seen.insert(a).second) {
        throw std::invalid_argument(std::string(what) + " is not a subset of its ground set");
      }
    }
  };
  within(sel.S_plus, rel.out_arcs, "S+");
  within(sel.S_minus, rel.in_arcs, "S-");
  std::set<int> seen;
  for (int k : sel.Q) {
    if (k < 0 || k >= rel.num_commodities || !seen.insert(k).second) throw std::invalid_argument("bad commodity set Q");
  }
}

std::string selection_string(const FlowCutSelection& sel) {
  auto list = [](const std::vector<int>& v) {
    std::string s = "{";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
    return s + "}";
  };
  return "Q=" + list(sel.Q) + " S+=" + list(sel.S_plus) + " S-=" + list(sel.S_minus) +
         " s=" + std::to_string(sel.facility);
}

struct Coefficients {
  std::vector<Rational> plus;   // per facility, on S+
  std::vector<Rational> minus;  // per facility, on S-
  Rational rhs;                 // r eta - cbar(S-)
};

std::optional<Coefficients> coefficients(const CutSetRelaxation& rel, const FlowCutSelection& sel,
                                         bool multifacility) {
  const Rational bp = adjusted_demand(rel, sel);
  const long cs = rel.facility_capacity[static_cast<std::size_t>(sel.facility)];
  const PhiParams p = phi_params(bp, cs);
  if (p.r.is_zero()) return std::nullopt;
  Coefficients out;
  for (long cm : rel.facility_capacity) {
    if (multifacility) {
      out.plus.push_back(phi_plus(p, Rational(cm)));
      out.minus.push_back(phi_minus(p, Rational(cm)));
    } else {
      const Rational w = (Rational(cm) / Rational(cs)).ceil();
      out.plus.push_back(p.r * w);
      out.minus.push_back((Rational(cs) - p.r) * w);
    }
  }
  out.rhs = p.r * p.eta - rel.existing_of(sel.S_minus);
  return out;
}

LinearCut assemble(const CutSetRelaxation& rel, const FlowCutSelection& sel, const Coefficients& co, CutFamily family) {
  LinearCut cut;
  cut.family = family;
  const int M = static_cast<int>(rel.facility_capacity.size());
  std::set<int> splus(sel.S_plus.begin(), sel.S_plus.end());
  for (int a : rel.out_arcs) {
    if (splus.count(a)) {
      for (int m = 0; m < M; ++m) cut.add(VarRef::capacity(a, m), co.plus[static_cast<std::size_t>(m)]);
    } else {
      for (int k : sel.Q) cut.add(VarRef::flow(a, k), Rational(1));
    }
  }
  for (int a : sel.S_minus) {
    for (int m = 0; m < M; ++m) cut.add(VarRef::capacity(a, m), co.minus[static_cast<std::size_t>(m)]);
    for (int k : sel.Q) cut.add(VarRef::flow(a, k), Rational(-1));
  }
  cut.rhs = co.rhs;
  cut.origin = selection_string(sel);
  return cut;
}

std::optional<LinearCut> build(const CutSetRelaxation& rel, const FlowCutSelection& sel, bool multifacility) {
  const auto co = coefficients(rel, sel, multifacility);
  if (!co) return std::nullopt;
  return assemble(rel, sel, *co, multifacility ? CutFamily::MultiFacility : CutFamily::FlowCutSet);
}

Rational q_flow(const FractionalPoint& p, int a, const std::vector<int>& Q) {
  Rational s;
  for (int k : Q) s += p.flow(a, k);
  return s;
}

std::optional<LinearCut> separate_greedy(const CutSetRelaxation& rel, const std::vector<int>& Q,
                                         const FractionalPoint& p, int facility, bool multifacility) {
  if (Q.empty()) return std::nullopt;
  const int M = static_cast<int>(rel.facility_capacity.size());
  std::optional<LinearCut> best;
  Rational best_v;
  auto consider = [&](const FlowCutSelection& sel) {
    auto cut = build(rel, sel, multifacility);
    if (!cut) return;
    const Rational v = cut->violation(p);
    if (v.sign() > 0 && (!best || v > best_v)) {
      best = std::move(cut);
      best_v = v;
    }
  };
  std::vector<FlowCutSelection> starts(2);
  for (auto& s : starts) {
    s.Q = Q;
    s.facility = facility;
  }
  starts[0].S_plus = rel.out_arcs;
  for (int a : rel.out_arcs) {
    if (q_flow(p, a, Q).sign() > 0) starts[1].S_plus.push_back(a);
  }
  for (int a : rel.in_arcs) {
    if (q_flow(p, a, Q) > rel.existing[static_cast<std::size_t>(a)]) starts[1].S_minus.push_back(a);
  }
  for (FlowCutSelection sel : starts) {
    consider(sel);
    for (int round = 0; round < 10; ++round) {
      const auto co = coefficients(rel, sel, multifacility);
      if (!co) break;
      FlowCutSelection next = sel;
      next.S_plus.clear();
      next.S_minus.clear();
      for (int a : rel.out_arcs) {
        Rational lhs;
        for (int m = 0; m < M; ++m) lhs += co->plus[static_cast<std::size_t>(m)] * p.cap(a, m);
        if (lhs < q_flow(p, a, Q)) next.S_plus.push_back(a);
      }
      for (int a : rel.in_arcs) {
        Rational lhs = rel.existing[static_cast<std::size_t>(a)];
        for (int m = 0; m < M; ++m) lhs += co->minus[static_cast<std::size_t>(m)] * p.cap(a, m);
        if (lhs < q_flow(p, a, Q)) next.S_minus.push_back(a);
      }
      if (next.S_plus == sel.S_plus && next.S_minus == sel.S_minus) break;
      sel = std::move(next);
      consider(sel);
    }
  }
  return best;
}

}  // namespace

Rational adjusted_demand(const CutSetRelaxation& rel, const FlowCutSelection& sel) {
  return rel.b_of(sel.Q) - rel.existing_of(sel.S_plus) + rel.existing_of(sel.S_minus);
}

std::optional<LinearCut> cutset_cut(const CutSetRelaxation& rel, int facility) {
  if (facility < 0 || facility >= static_cast<int>(rel.facility_capacity.size())) throw std::out_of_range("facility index");
  const Rational cs(rel.facility_capacity[static_cast<std::size_t>(facility)]);
  const Rational rhs = ((rel.b_of(rel.positive_commodities()) - rel.existing_of(rel.out_arcs)) / cs).ceil();
  if (rhs.sign() <= 0) return std::nullopt;
  LinearCut cut;
  cut.family = CutFamily::CutSet;
  for (int a : rel.out_arcs) {
    for (std::size_t m = 0; m < rel.facility_capacity.size(); ++m) {
      cut.add(VarRef::capacity(a, static_cast<int>(m)), (Rational(rel.facility_capacity[m]) / cs).ceil());
    }
  }
  cut.rhs = rhs;
  cut.origin = "s=" + std::to_string(facility);
  return cut;
}

LinearCut flow_cutset_cut(const CutSetRelaxation& rel, const FlowCutSelection& sel) {
  check_selection(rel, sel);
  auto cut = build(rel, sel, false);
  if (!cut) throw std::invalid_argument("flow cut-set inequality is vacuous: r = 0");
  return *cut;
}

LinearCut multifacility_cutset_cut(const CutSetRelaxation& rel, const FlowCutSelection& sel) {
  check_selection(rel, sel);
  auto cut = build(rel, sel, true);
  if (!cut) throw std::invalid_argument("multi-facility cut-set inequality is vacuous: r = 0");
  return *cut;
}

MultiFacilityFacetReport multifacility_facet_report(const CutSetRelaxation& rel, const FlowCutSelection& sel) {
  check_selection(rel, sel);
  MultiFacilityFacetReport rep;
  rep.proper_plus = !sel.S_plus.empty() && sel.S_plus.size() < rel.out_arcs.size();
  rep.proper_minus = !sel.S_minus.empty() && sel.S_minus.size() < rel.in_arcs.size();
  const long cs = rel.facility_capacity[static_cast<std::size_t>(sel.facility)];
  rep.positive_r = phi_params(adjusted_demand(rel, sel), cs).r.sign() > 0;
  rep.positive_demand = !sel.Q.empty();
  for (int k : sel.Q) rep.positive_demand = rep.positive_demand && rel.b[static_cast<std::size_t>(k)].sign() > 0;
  return rep;
}

std::optional<LinearCut> separate_flow_cutset(const CutSetRelaxation& rel, const std::vector<int>& Q,
                                              const FractionalPoint& p, int facility) {
  return separate_greedy(rel, Q, p, facility, false);
}

std::optional<LinearCut> separate_multifacility(const CutSetRelaxation& rel, const std::vector<int>& Q,
                                                const FractionalPoint& p, int facility) {
  return separate_greedy(rel, Q, p, facility, true);
}

std::optional<LinearCut> separate_multifacility_all(const CutSetRelaxation& rel, const std::vector<int>& Q,
                                                    const FractionalPoint& p) {
  std::optional<LinearCut> best;
  Rational best_v;
  for (int s = 0; s < static_cast<int>(rel.facility_capacity.size()); ++s) {
    auto cut = separate_multifacility(rel, Q, p, s);
    if (!cut) continue;
    const Rational v = cut->violation(p);
    if (!best || v > best_v) {
      best = std::move(cut);
      best_v = v;
    }
  }
  return best;
}

std::optional<std::vector<int>> separate_commodity_subset(const CutSetRelaxation& rel, const FlowCutSelection& sel,
                                                          const FractionalPoint& p) {
  check_selection(rel, sel);
  const std::vector<int> K = rel.positive_commodities();
  std::optional<std::vector<int>> best;
  Rational best_v;
  auto consider = [&](std::vector<int> Q) {
    if (Q.empty()) return;
    std::sort(Q.begin(), Q.end());
    FlowCutSelection s = sel;
    s.Q = Q;
    const auto cut = build(rel, s, false);
    if (!cut) return;
    const Rational v = cut->violation(p);
    if (v.sign() > 0 && (!best || v > best_v)) {
      best = Q;
      best_v = v;
    }
  };
  const std::size_t n = K.size();
  if (n <= 12) {
    for (std::size_t mask = 1; mask < (std::size_t{1} << n); ++mask) {
      std::vector<int> Q;
      for (std::size_t i = 0; i < n; ++i) {
        if (mask & (std::size_t{1} << i)) Q.push_back(K[i]);
      }
      consider(std::move(Q));
    }
    return best;
  }
  for (int k : K) consider({k});
  consider(K);
  // Single-arc view: items b^k / c, point 1 - g_k / b^k, capacity y(S+) - y(S-).
  const long cs = rel.facility_capacity[static_cast<std::size_t>(sel.facility)];
  const Rational c(cs);
  ArcSetRelaxation arc;
  ArcPoint ap;
  std::set<int> splus(sel.S_plus.begin(), sel.S_plus.end());
  for (int k : K) {
    const Rational bk = rel.b[static_cast<std::size_t>(k)];
    Rational g;
    for (int a : rel.out_arcs) {
      if (!splus.count(a)) g += p.flow(a, k);
    }
    for (int a : sel.S_minus) g -= p.flow(a, k);
    arc.a.push_back(bk / c);
    ap.x.push_back(min(Rational(1), max(Rational(0), Rational(1) - g / bk)));
  }
  Rational y;
  for (std::size_t m = 0; m < rel.facility_capacity.size(); ++m) {
    const Rational w = (Rational(rel.facility_capacity[m]) / c).ceil();
    for (int a : sel.S_plus) y += w * p.cap(a, static_cast<int>(m));
    for (int a : sel.S_minus) y -= w * p.cap(a, static_cast<int>(m));
  }
  arc.a0 = (rel.existing_of(sel.S_plus) - rel.existing_of(sel.S_minus)) / c;
  if (y.sign() < 0) {
    const Rational shift = (-y).ceil();
    y += shift;
    arc.a0 += shift;
  }
  ap.y = y;
  if (arc.a0.sign() >= 0) {
    if (auto rc = separate_residual_capacity(arc, ap)) {
      std::vector<int> Q;
      for (const auto& [v, coef] : rc->coeffs) {
        if (v.kind == VarKind::LocalX) Q.push_back(K[static_cast<std::size_t>(v.index)]);
      }
      consider(std::move(Q));
    }
  }
  return best;
}

std::optional<LinearCut> separate_flow_cutset_joint(const CutSetRelaxation& rel, const FractionalPoint& p,
                                                    bool multifacility) {
  const std::vector<int> K = rel.positive_commodities();
  if (K.empty()) return std::nullopt;
  std::vector<std::vector<int>> candidates;
  if (K.size() <= 6) {
    for (std::size_t mask = 1; mask < (std::size_t{1} << K.size()); ++mask) {
      std::vector<int> Q;
      for (std::size_t i = 0; i < K.size(); ++i) {
        if (mask & (std::size_t{1} << i)) Q.push_back(K[i]);
      }
      candidates.push_back(std::move(Q));
    }
  } else {
    for (int k : K) candidates.push_back({k});
    candidates.push_back(K);
  }
  std::optional<LinearCut> best;
  Rational best_v;
  auto keep = [&](std::optional<LinearCut> cut) {
    if (!cut) return;
    const Rational v = cut->violation(p);
    if (v.sign() > 0 && (!best || v > best_v)) {
      best = std::move(cut);
      best_v = v;
    }
  };
  const int M = static_cast<int>(rel.facility_capacity.size());
  for (const auto& Q0 : candidates) {
    for (int s = 0; s < (multifacility ? M : 1); ++s) {
      std::vector<int> Q = Q0;
      for (int round = 0; round < 5; ++round) {
        auto cut = separate_greedy(rel, Q, p, s, multifacility);
        if (!cut) break;
        keep(cut);
        if (K.size() <= 6 || multifacility) break;
        // Recover S+/S- from the cut and re-optimize Q.
        FlowCutSelection sel;
        sel.facility = s;
        for (int a : rel.out_arcs) {
          if (cut->coeff(VarRef::capacity(a, 0)).sign() != 0) sel.S_plus.push_back(a);
        }
        for (int a : rel.in_arcs) {
          if (cut->coeff(VarRef::capacity(a, 0)).sign() != 0) sel.S_minus.push_back(a);
        }
        const auto nextQ = separate_commodity_subset(rel, sel, p);
        if (!nextQ || *nextQ == Q) break;
        Q = *nextQ;
      }
    }
  }
  return best;
}

}  // namespace netdes
