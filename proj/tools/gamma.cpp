#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "gmg/metric.hpp"
#include "gmg/multigraph.hpp"
#include "gmg/spectral.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Poincare constant search for a graph against a finite metric"};
  std::string graph_path, metric_path, mode = "local";
  bool plus = false;
  std::int64_t budget = 20'000'000, restarts = 100;
  std::uint64_t seed = 1;
  app.add_option("--graph", graph_path, "graph JSON")->required();
  app.add_option("--metric", metric_path, "metric JSON {\"n\":., \"d\":[[..]]}")->required();
  app.add_option("--mode", mode, "exhaustive|local")
      ->check(CLI::IsMember({"exhaustive", "local"}));
  app.add_flag("--plus", plus, "two-map variant");
  app.add_option("--budget", budget, "map evaluation budget");
  app.add_option("--restarts", restarts, "local search restarts");
  app.add_option("--seed", seed, "search seed");
  CLI11_PARSE(app, argc, argv);

  try {
    gmg::Multigraph g = gmg::load_graph(graph_path);
    gmg::FiniteMetric x = gmg::load_metric(metric_path);
    const gmg::SearchMode m =
        mode == "exhaustive" ? gmg::SearchMode::exhaustive : gmg::SearchMode::local;
    gmg::PoincareReport rep = gmg::gamma_search(g, x, m, plus, budget, seed, restarts);

    nlohmann::json j;
    j["gamma_estimate"] = rep.gamma_estimate;
    j["witness_f"] = rep.witness_f;
    j["witness_g"] = rep.witness_g;
    j["plus"] = rep.plus;
    j["exact"] = rep.exact;
    j["degenerate"] = rep.degenerate;
    j["mode"] = rep.mode;
    j["iterations"] = rep.iterations;
    j["seed"] = rep.seed;
    std::cout << j.dump(2) << '\n';
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
