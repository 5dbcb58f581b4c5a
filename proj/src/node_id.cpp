#include "iqbb/node_id.hpp"

#include <stdexcept>

namespace iqbb {

NodeId NodeId::child(int b) const {
  if (depth_ >= kMaxDepth) throw std::length_error("NodeId: depth limit exceeded");
  if (b != 0 && b != 1) throw std::invalid_argument("NodeId: child index must be 0 or 1");
  NodeId out = *this;
  const int i = depth_;
  if (b) out.words_[i >> 6] |= std::uint64_t{1} << (63 - (i & 63));
  out.depth_ = static_cast<std::uint16_t>(depth_ + 1);
  return out;
}

NodeId NodeId::parent() const {
  if (depth_ == 0) throw std::logic_error("NodeId: root has no parent");
  return prefix(depth_ - 1);
}

NodeId NodeId::prefix(int depth) const {
  if (depth < 0 || depth > depth_) throw std::out_of_range("NodeId: bad prefix depth");
  NodeId out;
  out.depth_ = static_cast<std::uint16_t>(depth);
  const int full = depth >> 6;
  for (int w = 0; w < full; ++w) out.words_[w] = words_[w];
  const int rem = depth & 63;
  if (rem) out.words_[full] = words_[full] & (~std::uint64_t{0} << (64 - rem));
  return out;
}

bool NodeId::is_ancestor_or_self_of(const NodeId& other) const {
  return depth_ <= other.depth_ && other.prefix(depth_) == *this;
}

std::uint64_t NodeId::shortlex_rank() const {
  if (depth_ >= 63) throw std::overflow_error("NodeId: shortlex rank needs depth < 63");
  if (depth_ == 0) return 0;
  const std::uint64_t bits = words_[0] >> (64 - depth_);
  return ((std::uint64_t{1} << depth_) - 1) + bits;
}

std::string NodeId::to_string() const {
  if (depth_ == 0) return "r";
  std::string s(depth_, '0');
  for (int i = 0; i < depth_; ++i) s[i] = static_cast<char>('0' + bit(i));
  return s;
}

NodeId NodeId::parse(std::string_view text) {
  NodeId n;
  if (text == "r") return n;
  if (text.empty()) throw std::invalid_argument("NodeId: empty path");
  for (char ch : text) {
    if (ch != '0' && ch != '1') throw std::invalid_argument("NodeId: bad path character");
    n = n.child(ch - '0');
  }
  return n;
}

std::size_t NodeId::hash() const {
  std::uint64_t h = 0x9e3779b97f4a7c15ULL ^ depth_;
  const int used = (depth_ + 63) >> 6;
  for (int w = 0; w < used; ++w) {
    h ^= words_[w] + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  h ^= h >> 33;
  h *= 0xff51afd7ed558ccdULL;
  h ^= h >> 33;
  return static_cast<std::size_t>(h);
}

std::strong_ordering operator<=>(const NodeId& a, const NodeId& b) {
  if (a.depth_ != b.depth_) return a.depth_ <=> b.depth_;
  return a.words_ <=> b.words_;
}

}  // namespace iqbb
