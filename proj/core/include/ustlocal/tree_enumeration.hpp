#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ustlocal/network.hpp"
#include "ustlocal/spanning_tree.hpp"

namespace ustlocal {

/// Every spanning tree of a small network, as bitmasks over net.edges(),
/// with its weight (product of conductances). This is the exhaustive oracle
/// the Monte Carlo and electric checks are compared against.
class TreeEnumeration {
 public:
  /// Throws LimitExceeded if the network has more than 64 edges or more than
  /// `max_trees` spanning trees.
  explicit TreeEnumeration(const Network& net, std::size_t max_trees = 2'000'000);

  std::size_t size() const noexcept { return masks_.size(); }
  std::span<const std::uint64_t> masks() const noexcept { return masks_; }
  std::span<const double> weights() const noexcept { return weights_; }
  double total_weight() const noexcept { return total_; }

  /// Index of the tree with this mask, or -1.
  std::ptrdiff_t index_of(std::uint64_t mask) const;

  /// Exact UST probability of each tree.
  std::vector<double> law() const;
  /// Law conditioned on containing every edge of `contain` and none of `avoid`.
  /// Trees violating the condition get 0. Throws InvalidParams if the event is null.
  std::vector<double> conditional_law(std::span<const EdgeKey> contain,
                                      std::span<const EdgeKey> avoid) const;

  /// P(all of `edges` in the UST).
  double probability_all(std::span<const EdgeKey> edges) const;

  std::vector<EdgeKey> tree_edges(std::size_t index) const;

 private:
  std::uint64_t mask_of(std::span<const EdgeKey> edges) const;

  const Network* net_;
  std::vector<std::uint64_t> masks_;
  std::vector<double> weights_;
  double total_ = 0.0;
};

/// Weighted matrix-tree count: determinant of the Laplacian with one row and
/// column removed (log-scale for large graphs is not needed at oracle sizes).
double matrix_tree_count(const Network& net);

}  // namespace ustlocal
