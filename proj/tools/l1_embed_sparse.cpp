#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "gmg/embeddings.hpp"

int main(int argc, char** argv) {
  CLI::App app{"L1 embedding of a sparse graph's simplicial complex"};
  std::string graph_path, csv_path = "embedding.csv";
  double delta = 0.1;
  std::int64_t trees = 32;
  std::uint64_t seed = 1;
  app.add_option("--graph", graph_path, "graph JSON")->required();
  app.add_option("--delta", delta, "sparsity parameter in (0, 1/3)")->required();
  app.add_option("--trees", trees, "spanning tree samples");
  app.add_option("--seed", seed, "sampling seed");
  app.add_option("--csv", csv_path, "embedding matrix output path");
  CLI11_PARSE(app, argc, argv);

  try {
    gmg::Multigraph g = gmg::load_graph(graph_path);
    gmg::SparseEmbedResult res = gmg::sparse_graph_l1(g, delta, trees, seed);

    std::ofstream csv(csv_path);
    for (std::int64_t i = 0; i < res.embedding.size(); ++i) {
      const auto& p = res.points[static_cast<std::size_t>(i)];
      csv << p.u << ',' << p.v << ',' << p.instance << ',' << p.off;
      for (double c : res.embedding.rows[static_cast<std::size_t>(i)]) csv << ',' << c;
      csv << '\n';
    }
    std::cout << res.report_json() << '\n';
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
