#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "gmg/multigraph.hpp"
#include "gmg/randgraph.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Random regular graph samplers"};
  std::string model = "pairing", out_path;
  std::int64_t n = 0, d = 3;
  std::uint64_t seed = 1;
  app.add_option("--model", model, "pairing|simple")
      ->check(CLI::IsMember({"pairing", "simple"}));
  app.add_option("--n", n, "vertex count")->required();
  app.add_option("--d", d, "degree");
  app.add_option("--seed", seed, "sampler seed");
  app.add_option("--out", out_path, "write graph JSON here instead of stdout");
  CLI11_PARSE(app, argc, argv);

  try {
    gmg::Multigraph g;
    if (model == "pairing") {
      g = gmg::pairing_sample(n, d, seed);
    } else {
      gmg::SimpleSampleResult r = gmg::uniform_simple_sample(n, d, seed);
      g = std::move(r.graph);
      std::cerr << "rejections: " << r.rejections << '\n';
    }
    if (out_path.empty())
      std::cout << gmg::graph_to_json(g) << '\n';
    else
      gmg::save_graph(g, out_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
