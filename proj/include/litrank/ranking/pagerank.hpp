#pragma once

#include <vector>

#include "litrank/store/link_graph.hpp"

namespace litrank::ranking {

struct PageRankParams {
  double damping = 0.85;
  double tolerance = 1e-10;  // L1 change between iterations
  int max_iterations = 100;
  unsigned threads = 1;
};

struct PageRankResult {
  std::vector<double> scores;  // sums to 1
  int iterations = 0;
  double last_delta = 0.0;
  bool converged = false;
};

// Power iteration with uniform teleport. The mass of nodes without out-links
// is spread uniformly over all nodes in every iteration. Throws Error for an
// empty graph or a damping factor outside (0, 1).
PageRankResult pagerank(const store::Digraph& graph, const PageRankParams& params = {});

}  // namespace litrank::ranking
