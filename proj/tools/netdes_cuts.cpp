#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "netdes/engine.hpp"
#include "netdes/instance_io.hpp"
#include "netdes/oracle.hpp"

using namespace netdes;

namespace {

// "1/1000000", "0.000001" or "1e-6".
Rational parse_number(const std::string& text) {
  const auto e = text.find_first_of("eE");
  if (e == std::string::npos) return Rational::parse(text);
  Rational value = Rational::parse(text.substr(0, e));
  const int exp = std::stoi(text.substr(e + 1));
  for (int i = 0; i < std::abs(exp); ++i) value = exp < 0 ? value / Rational(10) : value * Rational(10);
  return value;
}

std::vector<long> parse_capacities(const std::string& list) {
  std::vector<long> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(std::stol(item));
  }
  return out;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cutting planes for multi-commodity multi-facility network design"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Run the cutting-plane loop on an instance");
  std::string instance_path, cuts = "rc,cstrong,cutset,flowcutset,mf,metric,partition", report_path, eps_text = "1e-6";
  int rounds = 50;
  long oracle_bound = -1;
  bool exact = false, serial = false;
  unsigned seed = 1;
  run->add_option("--instance", instance_path, "Instance JSON file")->required();
  run->add_option("--cuts", cuts, "Comma-separated cut families, or all");
  run->add_option("--rounds", rounds, "Maximum number of LP solves");
  run->add_option("--eps", eps_text, "Violation threshold");
  run->add_option("--report", report_path, "Write the JSON report here");
  run->add_option("--oracle-ybound", oracle_bound, "Also brute-force the integer optimum with this y bound (0: default bounds)");
  run->add_option("--seed", seed, "Seed for random partitions");
  run->add_flag("--exact", exact, "Solve LPs in exact rational arithmetic");
  run->add_flag("--serial", serial, "Separate partitions without OpenMP");

  auto* oracle = app.add_subcommand("oracle", "Brute-force integer optimum");
  std::string oracle_instance;
  long ybound = 0, budget = 1'000'000;
  oracle->add_option("--instance", oracle_instance, "Instance JSON file")->required();
  oracle->add_option("--ybound", ybound, "Upper bound on every capacity variable (0: ceil(total supply / c_m))");
  oracle->add_option("--budget", budget, "Maximum number of enumerated capacity vectors");

  auto* gen = app.add_subcommand("gen", "Generate a random instance");
  GeneratorOptions g;
  std::string facilities = "1,3", out_path;
  bool unsplittable = false, disaggregated = false;
  gen->add_option("--seed", g.seed);
  gen->add_option("--nodes", g.nodes);
  gen->add_option("--density", g.density);
  gen->add_option("--facilities", facilities, "Comma-separated capacities");
  gen->add_option("--demand-scale", g.demand_scale);
  gen->add_option("--demand-probability", g.demand_probability);
  gen->add_option("--existing-probability", g.existing_probability);
  gen->add_flag("--unsplittable", unsplittable);
  gen->add_flag("--disaggregated", disaggregated);
  gen->add_option("--out", out_path, "Output file (stdout if omitted)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      const Instance inst = load_instance(instance_path);
      Config config;
      config.families = parse_families(cuts);
      config.max_rounds = rounds;
      config.eps = parse_number(eps_text);
      config.exact_lp = exact;
      config.parallel = !serial;
      config.seed = seed;
      const LoopResult result = cutting_plane_loop(inst, config);
      for (const auto& r : result.rounds) {
        std::cout << "round " << r.round << "  bound " << r.bound.to_double() << "  cuts";
        int total = 0;
        for (const auto& [f, n] : r.cuts) {
          std::cout << ' ' << family_name(f) << '=' << n;
          total += n;
        }
        if (total == 0) std::cout << " none";
        std::cout << "  max_violation " << r.max_violation.to_double() << '\n';
      }
      std::cout << "final bound " << result.final_bound.to_double() << " (" << result.final_bound << ")\n";
      std::optional<Rational> optimum;
      if (oracle_bound >= 0) {
        const YBounds b = oracle_bound == 0 ? default_y_bounds(inst) : uniform_y_bounds(inst, oracle_bound);
        try {
          const IPResult ip = brute_force_ip(inst, b);
          if (ip.feasible) optimum = ip.objective;
        } catch (const BudgetExceeded& e) {
          std::cerr << "warning: oracle skipped, " << e.what() << '\n';
        }
      }
      if (optimum) std::cout << "integer optimum " << optimum->to_double() << " (" << *optimum << ")\n";
      const std::string json = report_json(inst, result, optimum);
      if (!report_path.empty()) write_file(report_path, json);
    } else if (*oracle) {
      const Instance inst = load_instance(oracle_instance);
      const YBounds b = ybound == 0 ? default_y_bounds(inst) : uniform_y_bounds(inst, ybound);
      OracleOptions opts;
      opts.budget = budget;
      const IPResult ip = brute_force_ip(inst, b, opts);
      if (!ip.feasible) {
        std::cout << "infeasible within the bounds\n";
        return 1;
      }
      std::cout << "optimum " << ip.objective << " (" << ip.objective.to_double() << ")\n";
      std::cout << "y";
      for (long v : ip.y) std::cout << ' ' << v;
      std::cout << "\nevaluated " << ip.evaluated << '\n';
    } else if (*gen) {
      g.facilities = parse_capacities(facilities);
      if (unsplittable) g.routing = Routing::Unsplittable;
      if (disaggregated) g.mode = CommodityMode::Disaggregated;
      const std::string json = instance_to_json(generate_instance(g));
      if (out_path.empty()) {
        std::cout << json << '\n';
      } else {
        write_file(out_path, json);
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
