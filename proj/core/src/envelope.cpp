#include "mrgg/envelope.hpp"

#include "mrgg/error.hpp"
#include "mrgg/parallel.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <queue>
#include <tuple>

namespace mrgg {

std::span<const std::size_t> Dendrogram::members(int node) const {
  const auto& nd = nodes.at(static_cast<std::size_t>(node));
  return std::span<const std::size_t>(order).subspan(nd.begin, nd.end - nd.begin);
}

Dendrogram hac_complete(std::span<const double> values) {
  if (values.empty()) throw InputError("clustering needs at least one value");
  for (double v : values)
    if (!std::isfinite(v)) throw InputError("clustering values must be finite");

  const std::size_t m = values.size();
  Dendrogram tree;
  tree.order.resize(m);
  std::iota(tree.order.begin(), tree.order.end(), 0);
  std::stable_sort(tree.order.begin(), tree.order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });

  const std::size_t total = 2 * m - 1;
  tree.nodes.reserve(total);
  for (std::size_t k = 0; k < m; ++k) tree.nodes.push_back({k, k + 1, 0.0, -1, -1, 0});

  auto lo = [&](int node) { return values[tree.order[tree.nodes[node].begin]]; };
  auto hi = [&](int node) { return values[tree.order[tree.nodes[node].end - 1]]; };

  std::vector<int> prev(total, -1);
  std::vector<int> next(total, -1);
  std::vector<char> alive(total, 0);
  for (std::size_t k = 0; k < m; ++k) {
    alive[k] = 1;
    prev[k] = static_cast<int>(k) - 1;
    next[k] = k + 1 < m ? static_cast<int>(k + 1) : -1;
  }

  // Only adjacent intervals can be closest: for A < C < B,
  // d(A, B) >= max(d(A, C), d(C, B)).
  using Candidate = std::tuple<double, std::size_t, int, int>;
  std::priority_queue<Candidate, std::vector<Candidate>, std::greater<>> heap;
  for (std::size_t k = 0; k + 1 < m; ++k) {
    const int a = static_cast<int>(k);
    heap.emplace(hi(a + 1) - lo(a), k, a, a + 1);
  }

  while (tree.nodes.size() < total) {
    const auto [cost, pos, a, b] = heap.top();
    heap.pop();
    if (!alive[a] || !alive[b] || next[a] != b) continue;
    const int id = static_cast<int>(tree.nodes.size());
    tree.nodes.push_back({tree.nodes[a].begin, tree.nodes[b].end, cost, a, b, 0});
    alive[a] = alive[b] = 0;
    alive[id] = 1;
    prev[id] = prev[a];
    next[id] = next[b];
    if (prev[id] >= 0) {
      next[prev[id]] = id;
      heap.emplace(hi(id) - lo(prev[id]), tree.nodes[prev[id]].begin, prev[id], id);
    }
    if (next[id] >= 0) {
      prev[next[id]] = id;
      heap.emplace(hi(next[id]) - lo(id), tree.nodes[id].begin, id, next[id]);
    }
  }
  tree.root = static_cast<int>(tree.nodes.size()) - 1;

  // children always precede parents, so a reverse sweep assigns depths
  for (int id = tree.root; id >= 0; --id) {
    const auto& nd = tree.nodes[id];
    if (!nd.is_leaf()) {
      tree.nodes[nd.left].depth = nd.depth + 1;
      tree.nodes[nd.right].depth = nd.depth + 1;
    }
  }
  return tree;
}

std::vector<double> ClusterAssignment::cluster_means() const {
  std::vector<double> means;
  means.reserve(clusters.size());
  for (const auto& c : clusters)
    means.push_back(c.empty() ? 0.0 : std::accumulate(c.begin(), c.end(), 0.0) / c.size());
  return means;
}

namespace {

// One HAC tree over the not-yet-clustered values, with lazy deletion of
// leaves saved by Update.
class PrunedTree {
 public:
  PrunedTree(std::span<const double> values) : values_(values), tree_(hac_complete(values)) {
    removed_.assign(values.size(), 0);
    position_.resize(values.size());
    for (std::size_t p = 0; p < tree_.order.size(); ++p) position_[tree_.order[p]] = p;
    refresh();
  }

  [[nodiscard]] std::size_t current_size(const DendrogramNode& nd) const {
    return nd.leaf_count() - (removed_prefix_[nd.end] - removed_prefix_[nd.begin]);
  }

  // Node with exactly `size` remaining leaves, closest to the root.
  [[nodiscard]] int find_exact(std::size_t size) const {
    return find_best([&](const DendrogramNode& nd) { return current_size(nd) == size; },
                     /*by_size=*/false);
  }

  // Node with more than `size` remaining leaves, size closest to `size`.
  [[nodiscard]] int find_larger(std::size_t size) const {
    return find_best([&](const DendrogramNode& nd) { return current_size(nd) > size; },
                     /*by_size=*/true);
  }

  // Keeps the `count` remaining members of `node` with largest magnitude and
  // deletes them from the tree. Returns local value indices.
  std::vector<std::size_t> take(int node, std::size_t count) {
    std::vector<std::size_t> live;
    for (auto idx : tree_.members(node))
      if (!removed_[position_[idx]]) live.push_back(idx);
    std::stable_sort(live.begin(), live.end(), [&](std::size_t a, std::size_t b) {
      const double ma = std::abs(values_[a]);
      const double mb = std::abs(values_[b]);
      if (ma != mb) return ma > mb;
      return values_[a] > values_[b];
    });
    live.resize(std::min(count, live.size()));
    for (auto idx : live) removed_[position_[idx]] = 1;
    refresh();
    return live;
  }

 private:
  void refresh() {
    removed_prefix_.assign(removed_.size() + 1, 0);
    for (std::size_t p = 0; p < removed_.size(); ++p)
      removed_prefix_[p + 1] = removed_prefix_[p] + removed_[p];
  }

  [[nodiscard]] double mean_magnitude(const DendrogramNode& nd) const {
    double sum = 0.0;
    std::size_t cnt = 0;
    for (std::size_t p = nd.begin; p < nd.end; ++p) {
      if (removed_[p]) continue;
      sum += std::abs(values_[tree_.order[p]]);
      ++cnt;
    }
    return cnt ? sum / static_cast<double>(cnt) : 0.0;
  }

  // Ranking: [remaining size asc when by_size], depth asc, merge height desc,
  // mean magnitude desc, leftmost position.
  template <class Pred>
  [[nodiscard]] int find_best(Pred&& accept, bool by_size) const {
    int best = -1;
    for (int id = 0; id < static_cast<int>(tree_.nodes.size()); ++id) {
      const auto& nd = tree_.nodes[id];
      if (!accept(nd)) continue;
      if (best < 0 || better(nd, tree_.nodes[best], by_size)) best = id;
    }
    return best;
  }

  [[nodiscard]] bool better(const DendrogramNode& a, const DendrogramNode& b, bool by_size) const {
    if (by_size) {
      const auto sa = current_size(a);
      const auto sb = current_size(b);
      if (sa != sb) return sa < sb;
    }
    if (a.depth != b.depth) return a.depth < b.depth;
    if (a.height != b.height) return a.height > b.height;
    const double ma = mean_magnitude(a);
    const double mb = mean_magnitude(b);
    if (ma != mb) return ma > mb;
    return a.begin < b.begin;
  }

  std::span<const double> values_;
  Dendrogram tree_;
  std::vector<char> removed_;
  std::vector<std::size_t> removed_prefix_;
  std::vector<std::size_t> position_;
};

}  // namespace

ClusterAssignment scchei(std::span<const double> values, int dimension, int resolution) {
  const std::int64_t total = cumulative_dim(resolution, dimension);
  if (total > static_cast<std::int64_t>(values.size()))
    throw InputError(fmt::format("resolution {} needs {} eigenvalues but only {} are available",
                                 resolution, total, values.size()));
  const auto pool_size = static_cast<std::size_t>(total);
  for (std::size_t i = 1; i < values.size(); ++i)
    if (std::abs(values[i]) > std::abs(values[i - 1]))
      throw InputError("eigenvalues must be sorted by decreasing magnitude");

  ClusterAssignment out;
  out.dimension = dimension;
  out.resolution = resolution;
  out.clusters.resize(static_cast<std::size_t>(resolution) + 1);

  std::vector<std::size_t> sizes;
  for (int k = 0; k <= resolution; ++k)
    sizes.push_back(static_cast<std::size_t>(harmonic_dim(k, dimension)));

  std::vector<int> pending(sizes.size());
  std::iota(pending.begin(), pending.end(), 0);
  std::vector<char> clustered(pool_size, 0);

  auto drop_pending = [&](int k) { pending.erase(std::find(pending.begin(), pending.end(), k)); };

  while (!pending.empty()) {
    if (out.rebuilds > resolution + 1)
      throw PipelineError(fmt::format(
          "size-constrained clustering did not converge after {} rebuilds", out.rebuilds));
    std::vector<std::size_t> remaining;
    std::vector<double> remaining_values;
    for (std::size_t i = 0; i < pool_size; ++i) {
      if (clustered[i]) continue;
      remaining.push_back(i);
      remaining_values.push_back(values[i]);
    }
    PrunedTree tree(remaining_values);
    ++out.rebuilds;

    auto update = [&](int node, int k) {
      for (auto local : tree.take(node, sizes[k])) {
        clustered[remaining[local]] = 1;
        out.clusters[k].push_back(remaining_values[local]);
      }
      drop_pending(k);
    };

    for (int k : std::vector<int>(pending)) {
      const int node = tree.find_exact(sizes[k]);
      if (node >= 0) update(node, k);
    }
    for (int k : std::vector<int>(pending)) {
      const int node = tree.find_larger(sizes[k]);
      if (node < 0) break;  // rebuild the tree on what is left
      update(node, k);
    }
  }

  out.leftover.assign(values.begin() + static_cast<std::ptrdiff_t>(pool_size), values.end());
  return out;
}

ClusterAssignment scchei(const Spectrum& spectrum, int dimension, int resolution) {
  if (spectrum.order != SpectrumOrder::by_magnitude_desc)
    throw InputError("size-constrained clustering needs a magnitude-sorted spectrum");
  return scchei(spectrum.values, dimension, resolution);
}

double intra_class_variance(const ClusterAssignment& assignment, std::size_t n) {
  if (n == 0) throw InputError("node count must be positive");
  double sum = 0.0;
  for (const auto& c : assignment.clusters) {
    if (c.empty()) continue;
    const double mean = std::accumulate(c.begin(), c.end(), 0.0) / static_cast<double>(c.size());
    for (double v : c) sum += (v - mean) * (v - mean);
  }
  for (double v : assignment.leftover) sum += v * v;
  return sum / static_cast<double>(n);
}

std::vector<double> log_spaced(double lo, double hi, std::size_t points) {
  if (!(lo > 0.0) || !(hi > lo) || points < 2)
    throw InputError("log grid needs 0 < lo < hi and at least two points");
  std::vector<double> grid(points);
  const double a = std::log10(lo);
  const double b = std::log10(hi);
  for (std::size_t i = 0; i < points; ++i)
    grid[i] = std::pow(10.0, a + (b - a) * static_cast<double>(i) / static_cast<double>(points - 1));
  return grid;
}

std::vector<double> default_kappa_grid() { return log_spaced(1e-5, 1e-1, 81); }

int penalized_resolution(std::span<const double> intra_class_variance, int dimension,
                         std::size_t n, double kappa) {
  int best = 0;
  double best_score = 0.0;
  for (std::size_t r = 0; r < intra_class_variance.size(); ++r) {
    const double score =
        intra_class_variance[r] +
        kappa * static_cast<double>(cumulative_dim(static_cast<int>(r), dimension)) /
            static_cast<double>(n);
    if (r == 0 || score < best_score) {
      best = static_cast<int>(r);
      best_score = score;
    }
  }
  return best;
}

ResolutionSelection slope_heuristic(std::vector<double> intra_class_variance, int dimension,
                                    std::size_t n, std::span<const double> kappa_grid) {
  if (kappa_grid.size() < 2) throw InputError("kappa grid needs at least two points");
  if (!std::is_sorted(kappa_grid.begin(), kappa_grid.end()))
    throw InputError("kappa grid must be sorted ascending");
  if (intra_class_variance.empty()) throw InputError("empty intra-class variance table");

  ResolutionSelection sel;
  sel.r_max = static_cast<int>(intra_class_variance.size()) - 1;
  sel.intra_class_variance = std::move(intra_class_variance);
  sel.kappa_grid.assign(kappa_grid.begin(), kappa_grid.end());
  std::vector<std::int64_t> dims;
  for (double kappa : kappa_grid) {
    const int r = penalized_resolution(sel.intra_class_variance, dimension, n, kappa);
    sel.r_of_kappa.push_back(r);
    dims.push_back(cumulative_dim(r, dimension));
  }
  std::int64_t largest = 0;
  std::size_t at = 0;
  for (std::size_t j = 0; j + 1 < dims.size(); ++j) {
    const std::int64_t drop = dims[j] - dims[j + 1];
    if (drop > largest) {
      largest = drop;
      at = j + 1;
    }
  }
  if (largest == 0) {
    sel.kappa0 = kappa_grid.front();
    sel.warnings.push_back(
        "slope heuristic: R(kappa) is constant over the grid; kappa0 set to the smallest grid point");
  } else {
    sel.kappa0 = kappa_grid[at];
  }
  sel.r_hat = penalized_resolution(sel.intra_class_variance, dimension, n, 2.0 * sel.kappa0);
  return sel;
}

ResolutionSelection select_resolution(std::span<const double> values, int dimension, std::size_t n,
                                      std::span<const double> kappa_grid, unsigned jobs) {
  const int r_max = max_resolution(static_cast<std::int64_t>(std::min(n, values.size())), dimension);
  if (r_max < 0) throw InputError("spectrum is empty");
  auto assignments = parallel_map<ClusterAssignment>(
      static_cast<std::size_t>(r_max) + 1, jobs,
      [&](std::size_t r) { return scchei(values, dimension, static_cast<int>(r)); });
  std::vector<double> table;
  table.reserve(assignments.size());
  for (const auto& a : assignments) table.push_back(intra_class_variance(a, n));
  auto sel = slope_heuristic(std::move(table), dimension, n, kappa_grid);
  sel.assignments = std::move(assignments);
  return sel;
}

EnvelopeSpectrum EnvelopeEstimate::spectrum() const {
  return EnvelopeSpectrum{dimension, p_hat};
}

Envelope EnvelopeEstimate::envelope() const { return spectrum().as_envelope(true); }

EnvelopeEstimate estimate_envelope_from_spectrum(const Spectrum& spectrum, std::size_t n,
                                                 int dimension, double zeta,
                                                 std::span<const double> kappa_grid,
                                                 unsigned jobs) {
  if (!(zeta > 0.0) || zeta > 1.0) throw InputError("sparsity factor must lie in (0, 1]");
  Spectrum by_magnitude = spectrum.order == SpectrumOrder::by_magnitude_desc
                              ? Spectrum{spectrum.values, std::nullopt, spectrum.order}
                              : Spectrum{spectrum.values, std::nullopt, spectrum.order}.reordered(
                                    SpectrumOrder::by_magnitude_desc);
  if (zeta != 1.0) by_magnitude = by_magnitude.scaled(1.0 / zeta);

  auto sel = select_resolution(by_magnitude.values, dimension, n, kappa_grid, jobs);
  EnvelopeEstimate est;
  est.dimension = dimension;
  est.r_hat = sel.r_hat;
  est.kappa0 = sel.kappa0;
  est.zeta = zeta;
  est.intra_class_variance = std::move(sel.intra_class_variance);
  est.kappa_grid = std::move(sel.kappa_grid);
  est.r_of_kappa = std::move(sel.r_of_kappa);
  est.assignment = std::move(sel.assignments[static_cast<std::size_t>(sel.r_hat)]);
  est.p_hat = est.assignment.cluster_means();
  est.warnings = std::move(sel.warnings);
  return est;
}

EnvelopeEstimate estimate_envelope(const Graph& graph, int dimension, double zeta,
                                   std::span<const double> kappa_grid, unsigned jobs) {
  const auto spectrum = sym_eigen(build_that(graph), false, SpectrumOrder::by_magnitude_desc);
  return estimate_envelope_from_spectrum(spectrum, graph.size(), dimension, zeta, kappa_grid, jobs);
}

}  // namespace mrgg
