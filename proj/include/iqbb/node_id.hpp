#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>

namespace iqbb {

using Cost = std::uint64_t;
using Hcost = std::uint64_t;

// Root-to-node path of child indices in {0,1}. Ordering is shortlex: shallower
// nodes first, then lexicographic on the path bits.
class NodeId {
 public:
  static constexpr int kMaxDepth = 256;

  NodeId() = default;

  int depth() const { return depth_; }
  bool is_root() const { return depth_ == 0; }

  // Child index taken at step i (0 <= i < depth).
  int bit(int i) const {
    return static_cast<int>((words_[i >> 6] >> (63 - (i & 63))) & 1U);
  }

  NodeId child(int b) const;
  NodeId parent() const;
  NodeId prefix(int depth) const;
  bool is_ancestor_or_self_of(const NodeId& other) const;

  // Position in shortlex order among all nodes; requires depth < 63.
  std::uint64_t shortlex_rank() const;

  // "r" for the root, otherwise the bit string.
  std::string to_string() const;
  static NodeId parse(std::string_view text);

  std::size_t hash() const;

  friend bool operator==(const NodeId&, const NodeId&) = default;
  friend std::strong_ordering operator<=>(const NodeId& a, const NodeId& b);

 private:
  std::array<std::uint64_t, kMaxDepth / 64> words_{};
  std::uint16_t depth_ = 0;
};

struct NodeIdHash {
  std::size_t operator()(const NodeId& n) const { return n.hash(); }
};

}  // namespace iqbb

template <>
struct std::hash<iqbb::NodeId> {
  std::size_t operator()(const iqbb::NodeId& n) const { return n.hash(); }
};
