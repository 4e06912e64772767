#include "rwdrift/element_trie.hpp"

#include <cstdlib>
#include <limits>

#include "rwdrift/error.hpp"

namespace rwdrift {

ElementTrie::ElementTrie(Walk walk, std::size_t memory_cap_bytes)
    : walk_(std::move(walk)),
      num_steps_(walk_.steps().size()),
      memory_cap_(memory_cap_bytes) {
  nodes_.push_back({kRoot, -1, 0, 0, 0});
  next_.assign(num_steps_, kUnknown);
}

std::size_t ElementTrie::memory_bytes() const {
  // Node storage, transition cache and an estimate of the hash map overhead.
  return nodes_.capacity() * sizeof(Node) + next_.capacity() * sizeof(NodeId) +
         children_.size() * 48 + children_.bucket_count() * sizeof(void*);
}

void ElementTrie::check_budget() const {
  if (memory_cap_ != 0 && memory_bytes() > memory_cap_) {
    throw Error(ErrorCode::kMemoryBudgetExceeded,
                "element table needs more than " + std::to_string(memory_cap_ >> 20) + " MB");
  }
}

std::uint64_t ElementTrie::child_key(NodeId parent, int factor, std::int64_t value) {
  // 32 bits of parent, 8 bits of factor, 24 bits of (offset) element value.
  const std::uint64_t v = static_cast<std::uint64_t>(value + (1 << 23)) & 0xFFFFFFU;
  return (static_cast<std::uint64_t>(parent) << 32) |
         (static_cast<std::uint64_t>(factor & 0xFF) << 24) | v;
}

std::optional<ElementTrie::NodeId> ElementTrie::find_child(NodeId parent, int factor,
                                                           std::int64_t value) const {
  auto it = children_.find(child_key(parent, factor, value));
  if (it == children_.end()) return std::nullopt;
  return it->second;
}

ElementTrie::NodeId ElementTrie::child(NodeId parent, int factor, std::int64_t value) {
  if (value >= (1 << 23) || value < -(1 << 23) || factor > 0xFF) {
    throw Error(ErrorCode::kMemoryBudgetExceeded, "block value exceeds table key range");
  }
  const std::uint64_t key = child_key(parent, factor, value);
  auto it = children_.find(key);
  if (it != children_.end()) return it->second;
  if (nodes_.size() >= std::numeric_limits<NodeId>::max() - 1) {
    throw Error(ErrorCode::kMemoryBudgetExceeded, "too many distinct elements");
  }
  const NodeId id = static_cast<NodeId>(nodes_.size());
  const Node& p = nodes_[parent];
  nodes_.push_back({parent, factor, value,
                    p.word_length + walk_.factors()[factor].element_length(value),
                    p.block_length + 1});
  next_.resize(next_.size() + num_steps_, kUnknown);
  children_.emplace(key, id);
  if ((id & 0xFFFFU) == 0) check_budget();
  return id;
}

ElementTrie::NodeId ElementTrie::compute_step(NodeId node, std::size_t k) {
  const Step& s = walk_.steps()[k];
  const Node n = nodes_[node];
  NodeId target;
  if (node == kRoot || n.factor != s.factor) {
    target = child(node, s.factor, s.value);
  } else {
    const std::int64_t v = walk_.factors()[s.factor].multiply(n.value, s.value);
    target = v == 0 ? n.parent : child(n.parent, s.factor, v);
  }
  next_[static_cast<std::size_t>(node) * num_steps_ + k] = target;
  return target;
}

NormalFormWord ElementTrie::word(NodeId node) const {
  std::vector<Block> blocks;
  while (node != kRoot) {
    blocks.push_back({nodes_[node].factor, nodes_[node].value});
    node = nodes_[node].parent;
  }
  return NormalFormWord(std::vector<Block>(blocks.rbegin(), blocks.rend()));
}

std::optional<ElementTrie::NodeId> ElementTrie::find(const NormalFormWord& x) const {
  NodeId node = kRoot;
  for (const auto& b : x.blocks()) {
    auto c = find_child(node, b.factor, b.value);
    if (!c) return std::nullopt;
    node = *c;
  }
  return node;
}

ElementTrie::NodeId ElementTrie::intern(const NormalFormWord& x) {
  NodeId node = kRoot;
  for (const auto& b : x.blocks()) node = child(node, b.factor, b.value);
  return node;
}

}  // namespace rwdrift
