#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "gmg/combinators.hpp"
#include "gmg/multigraph.hpp"
#include "gmg/spectral.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Iterated expander construction from a base graph"};
  std::string base_path, out_dir;
  std::int64_t depth = 1;
  app.add_option("--base", base_path, "base graph JSON")->required();
  app.add_option("--depth", depth, "iteration depth j")->required();
  app.add_option("--out", out_dir, "output directory")->required();
  CLI11_PARSE(app, argc, argv);

  try {
    gmg::Multigraph base = gmg::load_graph(base_path);
    gmg::IterationRecipe recipe = gmg::make_recipe(std::move(base), depth);
    gmg::IterationResult res = gmg::zigzag_iteration(recipe);

    std::filesystem::create_directories(out_dir);
    nlohmann::json prov;
    prov["base"] = {{"vertices", recipe.n}, {"degree", recipe.d}};
    prov["depth"] = recipe.depth;
    prov["averaging_depth"] = recipe.m_used;
    prov["degenerate_guard"] = recipe.degenerate_guard;
    prov["levels"] = nlohmann::json::array();
    for (const auto& level : res.levels) {
      const std::string wp = out_dir + "/w_" + std::to_string(level.j) + ".json";
      const std::string gp = out_dir + "/g_" + std::to_string(level.j) + ".json";
      gmg::save_graph(level.w, wp);
      gmg::save_graph(level.g, gp);
      nlohmann::json row;
      row["j"] = level.j;
      row["w"] = {{"file", wp},
                  {"vertices", level.w.n()},
                  {"degree", recipe.d * recipe.d},
                  {"lambda2", level.lambda2_w},
                  {"lambda_min", level.lambda_min_w},
                  {"gamma_plus_line",
                   1.0 / (1.0 - std::max(level.lambda2_w, -level.lambda_min_w))}};
      row["g"] = {{"file", gp},
                  {"vertices", level.g.n()},
                  {"degree", 3},
                  {"lambda2", level.lambda2_g},
                  {"gamma_plus_line", gmg::gamma_plus_line(level.g)}};
      prov["levels"].push_back(std::move(row));
    }
    std::ofstream out(out_dir + "/provenance.json");
    out << prov.dump(2) << '\n';
    std::cout << prov.dump(2) << '\n';
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
