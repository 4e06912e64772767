#pragma once

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "rwdrift/walk.hpp"

namespace rwdrift {

// Prefix tree of normal-form words. Node 0 is the identity; every other node
// is its parent word followed by one block. Right multiplication by a step of
// the walk is cached per (node, step index), so repeated convolution touches
// only flat arrays.
class ElementTrie {
 public:
  using NodeId = std::uint32_t;
  static constexpr NodeId kRoot = 0;
  static constexpr NodeId kUnknown = 0xFFFFFFFFU;

  explicit ElementTrie(Walk walk, std::size_t memory_cap_bytes = 0);

  const Walk& walk() const { return walk_; }
  std::size_t size() const { return nodes_.size(); }
  std::size_t memory_bytes() const;

  // Node reached from `node` by the step with index `k` (created on demand).
  NodeId step(NodeId node, std::size_t k) {
    const std::size_t slot = static_cast<std::size_t>(node) * num_steps_ + k;
    const NodeId cached = next_[slot];
    if (cached != kUnknown) return cached;
    return compute_step(node, k);
  }

  // Cached transition only; kUnknown if it was never computed. Safe to call
  // concurrently while nobody mutates the trie.
  NodeId peek(NodeId node, std::size_t k) const {
    return next_[static_cast<std::size_t>(node) * num_steps_ + k];
  }

  NodeId parent(NodeId node) const { return nodes_[node].parent; }
  Block last_block(NodeId node) const { return {nodes_[node].factor, nodes_[node].value}; }
  std::int64_t word_length(NodeId node) const { return nodes_[node].word_length; }
  std::int64_t block_length(NodeId node) const { return nodes_[node].block_length; }

  NormalFormWord word(NodeId node) const;
  std::optional<NodeId> find(const NormalFormWord& x) const;
  NodeId intern(const NormalFormWord& x);

 private:
  struct Node {
    NodeId parent;
    int factor;
    std::int64_t value;
    std::int64_t word_length;
    std::int64_t block_length;
  };

  static std::uint64_t child_key(NodeId parent, int factor, std::int64_t value);
  NodeId child(NodeId parent, int factor, std::int64_t value);
  std::optional<NodeId> find_child(NodeId parent, int factor, std::int64_t value) const;
  NodeId compute_step(NodeId node, std::size_t k);
  void check_budget() const;

  Walk walk_;
  std::size_t num_steps_;
  std::size_t memory_cap_;
  std::vector<Node> nodes_;
  std::vector<NodeId> next_;
  std::unordered_map<std::uint64_t, NodeId> children_;
};

}  // namespace rwdrift
