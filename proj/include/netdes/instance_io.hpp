#pragma once

#include <stdexcept>
#include <string>

#include "netdes/instance.hpp"

namespace netdes {

class InstanceFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Instance text format: a JSON object with
//   nodes: [id, ...]              ids are numbers or strings, in order
//   arcs: [{tail, head, existing_capacity}]
//   facilities: [{capacity, cost: [per arc]}]
//   demands: [{from, to, amount}]
//   flow_costs: [per arc: value or [per commodity]]   (optional)
//   commodity_mode: "aggregated" | "disaggregated"     (optional)
//   routing: "splittable" | "unsplittable"             (optional)
//   name                                               (optional)
// Rationals are "p/q" strings, integer strings, decimals or JSON numbers.
InstanceSpec parse_instance(const std::string& text);
Instance load_instance(const std::string& path);

std::string instance_to_json(const Instance& inst, int indent = 2);
void save_instance(const Instance& inst, const std::string& path);

}  // namespace netdes
