#include "ustlocal/rooted_shape.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ustlocal/error.hpp"

namespace ustlocal {

RootedShape::RootedShape() {
  static const auto leaf = std::make_shared<const Node>();
  node_ = leaf;
}

RootedShape RootedShape::join(std::vector<RootedShape> children) {
  if (children.empty()) return RootedShape();
  std::sort(children.begin(), children.end());
  auto node = std::make_shared<Node>();
  node->height = 0;
  std::size_t code_length = 2;
  for (const auto& c : children) {
    node->size += c.size();
    node->height = std::max(node->height, c.height() + 1);
    code_length += c.code().size();
  }
  node->last_level = 0;
  for (const auto& c : children)
    if (c.height() + 1 == node->height) node->last_level += c.last_level_count();
  node->code.clear();
  node->code.reserve(code_length);
  node->code.push_back('(');
  for (const auto& c : children) node->code += c.code();
  node->code.push_back(')');
  node->children = std::move(children);
  return RootedShape(std::move(node));
}

RootedShape RootedShape::from_code(std::string_view code) {
  std::size_t pos = 0;
  const auto parse = [&](auto&& self) -> RootedShape {
    if (pos >= code.size() || code[pos] != '(')
      throw ParseError("shape code: expected '(' at offset " + std::to_string(pos));
    ++pos;
    std::vector<RootedShape> children;
    while (pos < code.size() && code[pos] == '(') children.push_back(self(self));
    if (pos >= code.size() || code[pos] != ')')
      throw ParseError("shape code: expected ')' at offset " + std::to_string(pos));
    ++pos;
    return join(std::move(children));
  };
  RootedShape shape = parse(parse);
  if (pos != code.size()) throw ParseError("shape code: trailing characters");
  return shape;
}

RootedShape RootedShape::from_parents(std::span<const int> parent) {
  const int n = static_cast<int>(parent.size());
  int root = -1;
  std::vector<std::vector<int>> kids(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) {
    if (parent[v] == -1) {
      if (root >= 0) throw InvalidParams("from_parents: more than one root");
      root = v;
    } else if (parent[v] < 0 || parent[v] >= n || parent[v] == v) {
      throw InvalidParams("from_parents: bad parent");
    } else {
      kids[parent[v]].push_back(v);
    }
  }
  if (root < 0) throw InvalidParams("from_parents: no root");
  int seen = 0;
  const auto build = [&](auto&& self, int v) -> RootedShape {
    ++seen;
    std::vector<RootedShape> sub;
    for (const int c : kids[v]) sub.push_back(self(self, c));
    return join(std::move(sub));
  };
  RootedShape shape = build(build, root);
  if (seen != n) throw InvalidParams("from_parents: not connected to the root");
  return shape;
}

BigInt RootedShape::stab_order() const {
  BigInt order = 1;
  const auto& kids = node_->children;
  // Children are sorted by code, so isomorphic ones are adjacent.
  for (std::size_t i = 0; i < kids.size();) {
    std::size_t j = i;
    while (j < kids.size() && kids[j] == kids[i]) ++j;
    const auto group = static_cast<unsigned>(j - i);
    const BigInt child = kids[i].stab_order();
    for (unsigned t = 2; t <= group; ++t) order *= t;
    order *= boost::multiprecision::pow(child, group);
    i = j;
  }
  return order;
}

// GCC 11 reports a bogus memcpy overflow inside cpp_int's right shift.
#if defined(__GNUC__) && !defined(__clang__)
#pragma GCC diagnostic push
#pragma GCC diagnostic ignored "-Wstringop-overflow"
#pragma GCC diagnostic ignored "-Wstringop-overread"
#endif
double log_big(const BigInt& value) {
  if (value <= 0) throw InvalidParams("log_big of a nonpositive value");
  const auto bits = boost::multiprecision::msb(value);
  if (bits < 1000) return std::log(value.convert_to<double>());
  const auto shift = bits - 60;
  const BigInt top = value >> shift;
  return std::log(top.convert_to<double>()) + static_cast<double>(shift) * std::log(2.0);
}
#if defined(__GNUC__) && !defined(__clang__)
#pragma GCC diagnostic pop
#endif

double RootedShape::log_stab_order() const { return log_big(stab_order()); }

RootedShape RootedShape::truncate(int depth) const {
  if (depth < 0) throw InvalidParams("truncate depth must be nonnegative");
  if (height() <= depth) return *this;
  if (depth == 0) return RootedShape();
  std::vector<RootedShape> kids;
  kids.reserve(node_->children.size());
  for (const auto& c : node_->children) kids.push_back(c.truncate(depth - 1));
  return join(std::move(kids));
}

TreePattern RootedShape::to_pattern() const {
  TreePattern pattern;
  std::vector<const RootedShape*> queue{this};
  pattern.parent.push_back(-1);
  for (std::size_t head = 0; head < queue.size(); ++head)
    for (const auto& c : queue[head]->children()) {
      queue.push_back(&c);
      pattern.parent.push_back(static_cast<int>(head));
    }
  return pattern;
}

int code_height(std::string_view code) {
  int depth = 0, deepest = 0;
  for (const char ch : code) {
    depth += ch == '(' ? 1 : -1;
    deepest = std::max(deepest, depth);
  }
  return deepest - 1;
}

int code_size(std::string_view code) { return static_cast<int>(code.size() / 2); }

RootedShape extract_ball(const TreeAdjacency& tree, VertexId v, int r) {
  if (r < 0) throw InvalidParams("ball radius must be nonnegative");
  if (!(v >= 0 && v < tree.vertex_count())) throw VertexOutOfRange(std::to_string(v));
  const auto build = [&](auto&& self, VertexId at, VertexId from, int left) -> RootedShape {
    if (left == 0) return RootedShape();
    std::vector<RootedShape> kids;
    for (const VertexId w : tree.neighbors(at))
      if (w != from) kids.push_back(self(self, w, at, left - 1));
    return RootedShape::join(std::move(kids));
  };
  return build(build, v, -1, r);
}

RootedShape extract_ball(const SpanningTree& tree, VertexId v, int r) {
  return extract_ball(TreeAdjacency(tree), v, r);
}

CanonicalCode ball_code(const TreeAdjacency& tree, VertexId v, int r) {
  if (r < 0) throw InvalidParams("ball radius must be nonnegative");
  const auto build = [&](auto&& self, VertexId at, VertexId from, int left) -> std::string {
    if (left == 0 || (tree.degree(at) == 1 && from >= 0)) return "()";
    std::vector<std::string> kids;
    for (const VertexId w : tree.neighbors(at))
      if (w != from) kids.push_back(self(self, w, at, left - 1));
    std::sort(kids.begin(), kids.end());
    std::string code = "(";
    for (const auto& k : kids) code += k;
    code.push_back(')');
    return code;
  };
  return build(build, v, -1, r);
}

}  // namespace ustlocal
