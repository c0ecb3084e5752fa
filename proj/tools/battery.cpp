#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "gmg/multigraph.hpp"
#include "gmg/randgraph.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Structural property battery for expander candidates"};
  std::string graph_path;
  double eps = 1.0 / 3.0, delta = 0.0, K = 15.0;
  std::uint64_t seed = 1;
  app.add_option("--graph", graph_path, "graph JSON")->required();
  app.add_option("--eps", eps, "sparsity size exponent (check uses n^{1-eps})");
  app.add_option("--delta", delta, "sparsity excess; 0 takes the battery's formula value");
  app.add_option("--K", K, "expansion/diameter constant");
  app.add_option("--seed", seed, "search seed");
  CLI11_PARSE(app, argc, argv);

  try {
    gmg::Multigraph g = gmg::load_graph(graph_path);
    gmg::PropertyBattery b = gmg::l_class_battery(g, K, seed);

    nlohmann::json j;
    j["n"] = b.n;
    j["d"] = b.d;
    j["connected"] = b.connected;
    j["diameter"] = b.diameter;
    j["diameter_over_log"] = b.diameter_over_log;
    j["lambda2"] = b.lambda2;
    j["delta"] = b.delta;
    j["t"] = b.t;
    j["clamped"] = b.clamped;
    j["short_cycle_count"] = b.short_cycle_count;
    j["cycle_budget_ok"] = b.cycle_budget_ok;
    j["sparsity"] = gmg::to_string(b.sparsity);
    j["surgery_ok"] = gmg::to_string(b.surgery_ok);
    j["deleted_edges"] = b.deleted_edges;
    j["diam_l"] = b.diam_l;
    j["diam_l_ok"] = b.diam_l_ok;
    j["expansion"] = gmg::to_string(b.expansion);
    j["expansion_found"] = b.expansion_found;
    j["girth_ok"] = b.girth_ok;
    j["f_class_diam_ok"] = b.f_class_diam_ok;
    j["measured_c1"] = b.measured_c1;
    j["overall"] = gmg::to_string(b.overall);
    j["notes"] = b.notes;

    // standalone sparsity check at the requested parameters
    const double dl = delta > 0.0 ? delta : b.delta;
    gmg::SparsityReport sp = gmg::sparsity_check(g, eps, dl);
    j["sparsity_check"] = {{"eps", eps},
                           {"delta", dl},
                           {"verdict", gmg::to_string(sp.verdict)},
                           {"max_density", sp.max_density},
                           {"size_cap", sp.size_cap},
                           {"violator", sp.violator},
                           {"violator_edges", sp.violator_edges},
                           {"note", sp.note}};
    std::cout << j.dump(2) << '\n';
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
