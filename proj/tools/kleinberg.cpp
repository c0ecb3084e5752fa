#include <fstream>
#include <iostream>
#include <numeric>
#include <random>
#include <string>

#include <CLI11.hpp>

#include "gmg/common.hpp"
#include "gmg/randgraph.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Permutation distance-comparison trials on independent random graphs"};
  std::int64_t n = 256, d = 3, trials = 100;
  std::string perm = "random", out_path;
  double c = 1.0;
  std::uint64_t seed = 1;
  app.add_option("--n", n, "vertex count")->required();
  app.add_option("--d", d, "degree");
  app.add_option("--trials", trials, "trial count")->required();
  app.add_option("--perm", perm, "random|adversarial")
      ->check(CLI::IsMember({"random", "adversarial"}));
  app.add_option("--c", c, "comparison constant")->required();
  app.add_option("--seed", seed, "master seed");
  app.add_option("--out", out_path, "CSV path (default stdout)");
  CLI11_PARSE(app, argc, argv);

  try {
    std::ostream* os = &std::cout;
    std::ofstream file;
    if (!out_path.empty()) {
      file.open(out_path);
      os = &file;
    }
    *os << "trial,n,d,perm,lhs,rhs,ratio,pass,nh_size,overlap,overlap_ok\n";
    os->precision(12);
    std::int64_t passes = 0;
    for (std::int64_t trial = 0; trial < trials; ++trial) {
      const std::uint64_t ts = seed + 1000003ULL * static_cast<std::uint64_t>(trial);
      gmg::Multigraph g = gmg::uniform_simple_sample(n, d, ts).graph;
      gmg::Multigraph h = gmg::uniform_simple_sample(n, d, ts + 1).graph;
      for (std::uint64_t extra = 2; !gmg::is_connected(h); ++extra)
        h = gmg::uniform_simple_sample(n, d, ts + extra).graph;

      std::vector<std::int64_t> pi(static_cast<std::size_t>(n));
      std::iota(pi.begin(), pi.end(), 0);
      if (perm == "random") {
        auto rng = gmg::make_rng(ts, 99);
        std::shuffle(pi.begin(), pi.end(), rng);
      } else {
        pi = gmg::adversarial_permutation(g, h, ts);
      }
      gmg::KleinbergTrial t = gmg::kleinberg_trial(g, h, pi, c);
      if (t.pass) ++passes;
      *os << trial << ',' << n << ',' << d << ',' << perm << ',' << t.lhs << ','
          << t.rhs << ',' << t.ratio << ',' << (t.pass ? 1 : 0) << ',' << t.nh_size
          << ',' << t.overlap << ',' << (t.overlap_ok ? 1 : 0) << '\n';
    }
    std::cerr << "pass_fraction: "
              << static_cast<double>(passes) / static_cast<double>(trials) << '\n';
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
