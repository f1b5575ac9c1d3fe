#pragma once

#include <compare>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "netdes/rational.hpp"

namespace netdes {

class Instance;

// Flow and Capacity address network variables: Flow(arc, commodity) and
// Capacity(arc, facility). LocalX(i) and LocalY address the variables of a
// single-arc relaxation before they are mapped back to the network.
enum class VarKind { Flow, Capacity, LocalX, LocalY };

struct VarRef {
  VarKind kind = VarKind::Flow;
  int index = 0;
  int sub = 0;

  static VarRef flow(int arc, int commodity) { return {VarKind::Flow, arc, commodity}; }
  static VarRef capacity(int arc, int facility) { return {VarKind::Capacity, arc, facility}; }
  static VarRef local_x(int i) { return {VarKind::LocalX, i, 0}; }
  static VarRef local_y(int j = 0) { return {VarKind::LocalY, j, 0}; }

  friend auto operator<=>(const VarRef&, const VarRef&) = default;
};

std::string to_string(const VarRef& v);

enum class CutFamily {
  ResidualCapacity,
  CStrong,
  KSplit,
  LiftedCover,
  CutSet,
  FlowCutSet,
  MultiFacility,
  Metric,
  Partition,
  ThreePartition,
  Mir,
};

// Short name used on the command line and in reports.
std::string family_name(CutFamily f);

// LP solution values: x per (arc, commodity), y per (arc, facility).
struct FractionalPoint {
  int num_arcs = 0;
  int num_commodities = 0;
  int num_facilities = 0;
  std::vector<Rational> x;
  std::vector<Rational> y;

  FractionalPoint() = default;
  FractionalPoint(int arcs, int commodities, int facilities);

  Rational& flow(int a, int k) { return x[static_cast<std::size_t>(a * num_commodities + k)]; }
  const Rational& flow(int a, int k) const {
    return x[static_cast<std::size_t>(a * num_commodities + k)];
  }
  Rational& cap(int a, int m) { return y[static_cast<std::size_t>(a * num_facilities + m)]; }
  const Rational& cap(int a, int m) const {
    return y[static_cast<std::size_t>(a * num_facilities + m)];
  }
  // Total flow of all commodities on arc a.
  Rational arc_flow(int a) const;
  // Value of a Flow or Capacity variable.
  Rational value(const VarRef& v) const;
};

// sum(coeffs[v] * v) >= rhs.
struct LinearCut {
  std::map<VarRef, Rational> coeffs;
  Rational rhs;
  CutFamily family = CutFamily::Mir;
  std::string origin;  // derivation parameters, human readable

  void add(const VarRef& v, const Rational& c);
  Rational coeff(const VarRef& v) const;
  bool empty() const { return coeffs.empty(); }

  Rational lhs(const std::function<Rational(const VarRef&)>& value) const;
  Rational lhs(const FractionalPoint& p) const;
  // rhs - lhs; positive means the point is cut off.
  Rational violation(const FractionalPoint& p) const { return rhs - lhs(p); }

  // Scaled so the first nonzero coefficient has absolute value 1.
  LinearCut normalized() const;
  // Identical coefficients and rhs.
  bool same_inequality(const LinearCut& other) const;

  std::string to_string() const;
};

// Scales by a positive rational.
LinearCut scale(const LinearCut& cut, const Rational& factor);

}  // namespace netdes
