#include "litrank/ranking/pagerank.hpp"

#include <cmath>
#include <numeric>

#include "litrank/util/error.hpp"
#include "litrank/util/parallel.hpp"

namespace litrank::ranking {

namespace {

// In-edge lists so each node's new score is a pull over its sources.
struct Transposed {
  std::vector<std::uint64_t> offsets;
  std::vector<store::NodeId> sources;
};

Transposed transpose(const store::Digraph& g) {
  const auto n = g.node_count();
  Transposed t;
  t.offsets.assign(n + 1, 0);
  for (store::NodeId v = 0; v < n; ++v) t.offsets[v + 1] = t.offsets[v] + g.in_degree(v);
  t.sources.resize(g.edge_count());
  std::vector<std::uint64_t> cursor(t.offsets.begin(), t.offsets.end() - 1);
  for (store::NodeId u = 0; u < n; ++u) {
    for (const auto v : g.out(u)) t.sources[cursor[v]++] = u;
  }
  return t;
}

}  // namespace

PageRankResult pagerank(const store::Digraph& graph, const PageRankParams& params) {
  const auto n = graph.node_count();
  if (n == 0) throw Error("pagerank on an empty graph");
  if (!(params.damping > 0.0 && params.damping < 1.0)) {
    throw Error("pagerank damping must lie in (0, 1)");
  }
  const double d = params.damping;
  const double nd = static_cast<double>(n);
  const auto in = transpose(graph);

  std::vector<double> inv_out(n, 0.0);
  std::vector<store::NodeId> dangling;
  for (store::NodeId u = 0; u < n; ++u) {
    const auto deg = graph.out_degree(u);
    if (deg == 0) {
      dangling.push_back(u);
    } else {
      inv_out[u] = 1.0 / static_cast<double>(deg);
    }
  }

  PageRankResult result;
  std::vector<double> x(n, 1.0 / nd);
  std::vector<double> next(n, 0.0);
  std::vector<double> share(n, 0.0);

  const unsigned workers = std::max(1u, params.threads);
  const std::size_t chunk = (n + workers - 1) / workers;

  for (int it = 0; it < params.max_iterations; ++it) {
    double dangling_mass = 0.0;
    for (const auto u : dangling) dangling_mass += x[u];
    for (std::size_t u = 0; u < n; ++u) share[u] = x[u] * inv_out[u];
    const double base = (1.0 - d) / nd + d * dangling_mass / nd;

    parallel_for(workers, workers, [&](std::size_t w) {
      const auto lo = w * chunk;
      const auto hi = std::min(n, lo + chunk);
      for (auto v = lo; v < hi; ++v) {
        double acc = 0.0;
        for (auto k = in.offsets[v]; k < in.offsets[v + 1]; ++k) acc += share[in.sources[k]];
        next[v] = base + d * acc;
      }
    });

    // Rounding drift is removed so the vector stays a distribution.
    const double total = std::accumulate(next.begin(), next.end(), 0.0);
    double delta = 0.0;
    for (std::size_t v = 0; v < n; ++v) {
      next[v] /= total;
      delta += std::abs(next[v] - x[v]);
    }
    x.swap(next);
    result.iterations = it + 1;
    result.last_delta = delta;
    if (delta < params.tolerance) {
      result.converged = true;
      break;
    }
  }
  result.scores = std::move(x);
  return result;
}

}  // namespace litrank::ranking
