#include "ustlocal/tree_enumeration.hpp"

#include <algorithm>
#include <numeric>

#include <Eigen/Dense>

#include "ustlocal/error.hpp"

namespace ustlocal {

namespace {

// Union-find with an undo log so the include/exclude search can backtrack.
class RollbackDsu {
 public:
  explicit RollbackDsu(VertexId n) : parent_(static_cast<std::size_t>(n)), rank_(static_cast<std::size_t>(n), 0) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }
  VertexId find(VertexId x) const {
    while (parent_[x] != x) x = parent_[x];
    return x;
  }
  bool unite(VertexId a, VertexId b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (rank_[a] < rank_[b]) std::swap(a, b);
    log_.push_back({b, rank_[a] == rank_[b]});
    parent_[b] = a;
    if (log_.back().bumped) ++rank_[a];
    return true;
  }
  void undo() {
    const auto [child, bumped] = log_.back();
    log_.pop_back();
    if (bumped) --rank_[parent_[child]];
    parent_[child] = child;
  }

 private:
  struct Entry {
    VertexId child;
    bool bumped;
  };
  std::vector<VertexId> parent_;
  std::vector<int> rank_;
  std::vector<Entry> log_;
};

}  // namespace

TreeEnumeration::TreeEnumeration(const Network& net, std::size_t max_trees) : net_(&net) {
  std::vector<WeightedEdge> edges;
  std::vector<int> index;
  for (std::size_t i = 0; i < net.edges().size(); ++i)
    if (net.edges()[i].u != net.edges()[i].v) {
      edges.push_back(net.edges()[i]);
      index.push_back(static_cast<int>(i));
    }
  if (net.edge_count() > 64) throw LimitExceeded("tree enumeration supports at most 64 edges");
  const VertexId n = net.vertex_count();
  const auto m = edges.size();

  // An edge may be skipped only if the remaining edges can still connect the
  // graph; checked cheaply by counting how many edges are left.
  RollbackDsu dsu(n);
  std::uint64_t mask = 0;
  double weight = 1.0;
  int components = n;
  const auto search = [&](auto&& self, std::size_t i) -> void {
    if (components == 1) {
      if (masks_.size() >= max_trees) throw LimitExceeded("too many spanning trees to enumerate");
      masks_.push_back(mask);
      weights_.push_back(weight);
      return;
    }
    if (i == m || static_cast<std::size_t>(components - 1) > m - i) return;
    const auto& e = edges[i];
    if (dsu.unite(e.u, e.v)) {
      mask |= std::uint64_t{1} << index[i];
      const double saved = weight;
      weight *= e.conductance;
      --components;
      self(self, i + 1);
      ++components;
      weight = saved;
      mask &= ~(std::uint64_t{1} << index[i]);
      dsu.undo();
    }
    self(self, i + 1);
  };
  search(search, 0);
  // Sort by mask for index_of.
  std::vector<std::size_t> order(masks_.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return masks_[a] < masks_[b]; });
  std::vector<std::uint64_t> sorted_masks;
  std::vector<double> sorted_weights;
  for (const auto k : order) {
    sorted_masks.push_back(masks_[k]);
    sorted_weights.push_back(weights_[k]);
  }
  masks_ = std::move(sorted_masks);
  weights_ = std::move(sorted_weights);
  total_ = std::accumulate(weights_.begin(), weights_.end(), 0.0);
}

std::ptrdiff_t TreeEnumeration::index_of(std::uint64_t mask) const {
  const auto it = std::lower_bound(masks_.begin(), masks_.end(), mask);
  return it != masks_.end() && *it == mask ? it - masks_.begin() : -1;
}

std::vector<double> TreeEnumeration::law() const {
  std::vector<double> p(weights_.size());
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = weights_[i] / total_;
  return p;
}

std::uint64_t TreeEnumeration::mask_of(std::span<const EdgeKey> edges) const {
  std::uint64_t mask = 0;
  for (const auto& e : edges) {
    const auto idx = net_->edge_index(e.u, e.v);
    if (idx < 0) throw NotAnEdge("edge not in network");
    mask |= std::uint64_t{1} << idx;
  }
  return mask;
}

std::vector<double> TreeEnumeration::conditional_law(std::span<const EdgeKey> contain,
                                                     std::span<const EdgeKey> avoid) const {
  const std::uint64_t need = mask_of(contain), forbid = mask_of(avoid);
  std::vector<double> p(weights_.size(), 0.0);
  double total = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i)
    if ((masks_[i] & need) == need && (masks_[i] & forbid) == 0) {
      p[i] = weights_[i];
      total += weights_[i];
    }
  if (total == 0.0) throw InvalidParams("conditioning event has probability zero");
  for (auto& x : p) x /= total;
  return p;
}

double TreeEnumeration::probability_all(std::span<const EdgeKey> edges) const {
  const std::uint64_t need = mask_of(edges);
  double hit = 0.0;
  for (std::size_t i = 0; i < masks_.size(); ++i)
    if ((masks_[i] & need) == need) hit += weights_[i];
  return hit / total_;
}

std::vector<EdgeKey> TreeEnumeration::tree_edges(std::size_t index) const {
  std::vector<EdgeKey> out;
  const auto& edges = net_->edges();
  for (std::size_t i = 0; i < edges.size(); ++i)
    if (masks_[index] >> i & 1) out.emplace_back(edges[i].u, edges[i].v);
  return out;
}

double matrix_tree_count(const Network& net) {
  const VertexId n = net.vertex_count();
  if (n == 1) return 1.0;
  Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(n - 1, n - 1);
  for (const auto& e : net.edges()) {
    if (e.u == e.v) continue;
    // Drop vertex n-1.
    if (e.u < n - 1) lap(e.u, e.u) += e.conductance;
    if (e.v < n - 1) lap(e.v, e.v) += e.conductance;
    if (e.u < n - 1 && e.v < n - 1) {
      lap(e.u, e.v) -= e.conductance;
      lap(e.v, e.u) -= e.conductance;
    }
  }
  return lap.partialPivLu().determinant();
}

}  // namespace ustlocal
