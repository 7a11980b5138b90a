#pragma once

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "ustlocal/spanning_tree.hpp"
#include "ustlocal/walk.hpp"

namespace ustlocal {

using BigInt = boost::multiprecision::cpp_int;

/// Canonical nested-parentheses code: "()" is a single vertex and a node is
/// "(" + its children's codes in sorted order + ")". Two shapes share a code
/// iff they are isomorphic as rooted trees.
using CanonicalCode = std::string;

/// Immutable rooted tree up to isomorphism. Copies share structure.
class RootedShape {
 public:
  /// Single vertex.
  RootedShape();
  /// Root joined to the given subtrees (any order; stored canonically).
  static RootedShape join(std::vector<RootedShape> children);
  /// Throws ParseError on malformed input.
  static RootedShape from_code(std::string_view code);
  /// parent[root] == -1, any labeling. Throws InvalidParams unless it is a tree.
  static RootedShape from_parents(std::span<const int> parent);

  std::span<const RootedShape> children() const noexcept { return node_->children; }
  int size() const noexcept { return node_->size; }
  int height() const noexcept { return node_->height; }
  /// Vertices at depth exactly height().
  int last_level_count() const noexcept { return node_->last_level; }
  const CanonicalCode& code() const noexcept { return node_->code; }

  /// Root-preserving automorphism count, exact.
  BigInt stab_order() const;
  /// Natural log of stab_order(), taken from the exact integer.
  double log_stab_order() const;

  /// Ball of radius `depth` around the root.
  RootedShape truncate(int depth) const;
  /// BFS labeling in canonical child order, usable as a tuple pattern.
  TreePattern to_pattern() const;

  friend bool operator==(const RootedShape& a, const RootedShape& b) { return a.code() == b.code(); }
  friend bool operator<(const RootedShape& a, const RootedShape& b) { return a.code() < b.code(); }

 private:
  struct Node {
    std::vector<RootedShape> children;
    int size = 1;
    int height = 0;
    int last_level = 1;
    CanonicalCode code = "()";
  };
  explicit RootedShape(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  std::shared_ptr<const Node> node_;
};

/// Canonical form of any shape (alias of shape.code(), provided for symmetry
/// with stab_order as a free function).
inline const CanonicalCode& canonize(const RootedShape& shape) { return shape.code(); }
inline BigInt stab_order(const RootedShape& shape) { return shape.stab_order(); }

/// Natural log of a positive big integer.
double log_big(const BigInt& value);

/// Height of the shape a code describes, without building it.
int code_height(std::string_view code);
/// Vertex count of the shape a code describes.
int code_size(std::string_view code);

/// Rooted shape of the radius-r ball around v in the tree. Throws
/// InvalidParams for r < 0.
RootedShape extract_ball(const SpanningTree& tree, VertexId v, int r);
RootedShape extract_ball(const TreeAdjacency& tree, VertexId v, int r);
/// Same ball, returning only its code (no node allocation).
CanonicalCode ball_code(const TreeAdjacency& tree, VertexId v, int r);

}  // namespace ustlocal
