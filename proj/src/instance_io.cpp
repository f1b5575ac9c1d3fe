#include "netdes/instance_io.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include "json.hpp"

namespace netdes {

using nlohmann::json;

namespace {

Rational to_rational(const json& j, const std::string& what) {
  try {
    if (j.is_string()) return Rational::parse(j.get<std::string>());
    if (j.is_number_integer()) return Rational(j.get<long>());
    if (j.is_number()) return Rational::parse(j.dump());
  } catch (const std::invalid_argument& e) {
    throw InstanceFormatError(what + ": " + e.what());
  }
  throw InstanceFormatError(what + ": expected a rational");
}

std::string node_key(const json& j) {
  if (j.is_string()) return "s:" + j.get<std::string>();
  if (j.is_number_integer()) return "i:" + std::to_string(j.get<long>());
  throw InstanceFormatError("node ids must be integers or strings");
}

const json& field(const json& obj, const char* name) {
  if (!obj.is_object() || !obj.contains(name)) {
    throw InstanceFormatError(std::string("missing field '") + name + "'");
  }
  return obj.at(name);
}

}  // namespace

InstanceSpec parse_instance(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InstanceFormatError(std::string("malformed JSON: ") + e.what());
  }
  InstanceSpec spec;
  if (doc.contains("name")) spec.name = doc.at("name").get<std::string>();

  std::map<std::string, int> ids;
  for (const auto& n : field(doc, "nodes")) {
    if (!ids.emplace(node_key(n), static_cast<int>(ids.size())).second) {
      throw InstanceFormatError("duplicate node id " + n.dump());
    }
  }
  spec.num_nodes = static_cast<int>(ids.size());
  auto node = [&](const json& j) {
    auto it = ids.find(node_key(j));
    if (it == ids.end()) throw InstanceFormatError("unknown node id " + j.dump());
    return it->second;
  };

  for (const auto& a : field(doc, "arcs")) {
    Arc arc;
    arc.tail = node(field(a, "tail"));
    arc.head = node(field(a, "head"));
    arc.existing_capacity = a.contains("existing_capacity")
                                ? to_rational(a.at("existing_capacity"), "existing_capacity")
                                : Rational(0);
    spec.arcs.push_back(std::move(arc));
  }
  for (const auto& f : field(doc, "facilities")) {
    Facility fac;
    const json& cap = field(f, "capacity");
    if (!cap.is_number_integer()) throw InstanceFormatError("facility capacity must be an integer");
    fac.capacity = cap.get<long>();
    for (const auto& c : field(f, "cost")) fac.cost.push_back(to_rational(c, "facility cost"));
    spec.facilities.push_back(std::move(fac));
  }
  spec.demand = DemandMatrix(spec.num_nodes);
  if (doc.contains("demands")) {
    for (const auto& d : doc.at("demands")) {
      const int i = node(field(d, "from"));
      const int j = node(field(d, "to"));
      spec.demand.set(i, j, spec.demand.at(i, j) + to_rational(field(d, "amount"), "demand"));
    }
  }
  if (doc.contains("flow_costs")) {
    for (const auto& fc : doc.at("flow_costs")) {
      std::vector<Rational> per;
      if (fc.is_array()) {
        for (const auto& v : fc) per.push_back(to_rational(v, "flow cost"));
      } else {
        per.push_back(to_rational(fc, "flow cost"));
      }
      spec.flow_cost.push_back(std::move(per));
    }
  }
  if (doc.contains("commodity_mode")) {
    const auto m = doc.at("commodity_mode").get<std::string>();
    if (m == "aggregated") spec.mode = CommodityMode::Aggregated;
    else if (m == "disaggregated") spec.mode = CommodityMode::Disaggregated;
    else throw InstanceFormatError("unknown commodity_mode '" + m + "'");
  }
  if (doc.contains("routing")) {
    const auto r = doc.at("routing").get<std::string>();
    if (r == "splittable") spec.routing = Routing::Splittable;
    else if (r == "unsplittable") spec.routing = Routing::Unsplittable;
    else throw InstanceFormatError("unknown routing '" + r + "'");
  }
  return spec;
}

Instance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InstanceFormatError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return Instance(parse_instance(ss.str()));
}

std::string instance_to_json(const Instance& inst, int indent) {
  json doc;
  if (!inst.name().empty()) doc["name"] = inst.name();
  json nodes = json::array();
  for (int i = 0; i < inst.num_nodes(); ++i) nodes.push_back(i);
  doc["nodes"] = nodes;
  json arcs = json::array();
  for (const auto& a : inst.arcs()) {
    arcs.push_back({{"tail", a.tail}, {"head", a.head}, {"existing_capacity", a.existing_capacity.to_string()}});
  }
  doc["arcs"] = arcs;
  json facs = json::array();
  for (const auto& f : inst.facilities()) {
    json cost = json::array();
    for (const auto& c : f.cost) cost.push_back(c.to_string());
    facs.push_back({{"capacity", f.capacity}, {"cost", cost}});
  }
  doc["facilities"] = facs;
  json dem = json::array();
  for (int i = 0; i < inst.num_nodes(); ++i) {
    for (int j = 0; j < inst.num_nodes(); ++j) {
      const Rational& t = inst.demand().at(i, j);
      if (t.sign() > 0) dem.push_back({{"from", i}, {"to", j}, {"amount", t.to_string()}});
    }
  }
  doc["demands"] = dem;
  const auto& fc = inst.spec().flow_cost;
  if (!fc.empty()) {
    json costs = json::array();
    for (const auto& per : fc) {
      if (per.size() == 1) {
        costs.push_back(per[0].to_string());
      } else {
        json arr = json::array();
        for (const auto& c : per) arr.push_back(c.to_string());
        costs.push_back(arr);
      }
    }
    doc["flow_costs"] = costs;
  }
  doc["commodity_mode"] = inst.mode() == CommodityMode::Aggregated ? "aggregated" : "disaggregated";
  doc["routing"] = inst.routing() == Routing::Splittable ? "splittable" : "unsplittable";
  return doc.dump(indent);
}

void save_instance(const Instance& inst, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InstanceFormatError("cannot write " + path);
  out << instance_to_json(inst) << "\n";
}

}  // namespace netdes
