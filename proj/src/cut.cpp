#include "netdes/cut.hpp"

#include <sstream>
#include <stdexcept>

namespace netdes {

std::string to_string(const VarRef& v) {
  switch (v.kind) {
    case VarKind::Flow:
      return "x[" + std::to_string(v.index) + "," + std::to_string(v.sub) + "]";
    case VarKind::Capacity:
      return "y[" + std::to_string(v.index) + "," + std::to_string(v.sub) + "]";
    case VarKind::LocalX:
      return "x" + std::to_string(v.index + 1);
    case VarKind::LocalY:
      return "y" + (v.index == 0 ? std::string() : std::to_string(v.index + 1));
  }
  return "?";
}

std::string family_name(CutFamily f) {
  switch (f) {
    case CutFamily::ResidualCapacity: return "rc";
    case CutFamily::CStrong: return "cstrong";
    case CutFamily::KSplit: return "ksplit";
    case CutFamily::LiftedCover: return "cover";
    case CutFamily::CutSet: return "cutset";
    case CutFamily::FlowCutSet: return "flowcutset";
    case CutFamily::MultiFacility: return "mf";
    case CutFamily::Metric: return "metric";
    case CutFamily::Partition: return "partition";
    case CutFamily::ThreePartition: return "threepartition";
    case CutFamily::Mir: return "mir";
  }
  return "?";
}

FractionalPoint::FractionalPoint(int arcs, int commodities, int facilities)
    : num_arcs(arcs),
      num_commodities(commodities),
      num_facilities(facilities),
      x(static_cast<std::size_t>(arcs * commodities)),
      y(static_cast<std::size_t>(arcs * facilities)) {}

Rational FractionalPoint::arc_flow(int a) const {
  Rational s;
  for (int k = 0; k < num_commodities; ++k) s += flow(a, k);
  return s;
}

Rational FractionalPoint::value(const VarRef& v) const {
  switch (v.kind) {
    case VarKind::Flow: return flow(v.index, v.sub);
    case VarKind::Capacity: return cap(v.index, v.sub);
    default: throw std::invalid_argument("local variable has no network value: " + netdes::to_string(v));
  }
}

void LinearCut::add(const VarRef& v, const Rational& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = coeffs.emplace(v, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) coeffs.erase(it);
  }
}

Rational LinearCut::coeff(const VarRef& v) const {
  auto it = coeffs.find(v);
  return it == coeffs.end() ? Rational(0) : it->second;
}

Rational LinearCut::lhs(const std::function<Rational(const VarRef&)>& value) const {
  Rational s;
  for (const auto& [v, c] : coeffs) s += c * value(v);
  return s;
}

Rational LinearCut::lhs(const FractionalPoint& p) const {
  Rational s;
  for (const auto& [v, c] : coeffs) s += c * p.value(v);
  return s;
}

LinearCut scale(const LinearCut& cut, const Rational& factor) {
  if (factor.sign() <= 0) throw std::invalid_argument("cut scale factor must be positive");
  LinearCut out = cut;
  for (auto& [v, c] : out.coeffs) c *= factor;
  out.rhs *= factor;
  return out;
}

LinearCut LinearCut::normalized() const {
  if (coeffs.empty()) return *this;
  return scale(*this, Rational(1) / coeffs.begin()->second.abs());
}

bool LinearCut::same_inequality(const LinearCut& other) const {
  return coeffs == other.coeffs && rhs == other.rhs;
}

std::string LinearCut::to_string() const {
  std::ostringstream os;
  bool first = true;
  for (const auto& [v, c] : coeffs) {
    if (!first) os << (c.sign() < 0 ? " - " : " + ");
    else if (c.sign() < 0) os << "-";
    first = false;
    const Rational m = c.abs();
    if (m != Rational(1)) os << m << " ";
    os << netdes::to_string(v);
  }
  if (first) os << "0";
  os << " >= " << rhs;
  return os.str();
}

}  // namespace netdes
