#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "modx/core/ids.h"

namespace modx::bus {

/// Subscription pattern over dot-separated topics: literal segments,
/// single-segment wildcard `*`, and tail wildcard `#` (final segment only,
/// matches zero or more remaining segments).
struct TopicPattern {
  std::vector<std::string> segments;

  static TopicPattern parse(const std::string& text);
  std::string str() const;
  bool matches(const core::Topic& topic) const;

  auto operator<=>(const TopicPattern&) const = default;
};

/// Trie over pattern segments; the broker's routing index. collect() walks
/// literal children, the `*` branch and `#` terminals in one pass instead of
/// scanning every subscription.
class PatternIndex {
 public:
  void add(const std::string& subscription_id, const TopicPattern& pattern);
  void remove(const std::string& subscription_id, const TopicPattern& pattern);
  std::set<std::string> collect(const core::Topic& topic) const;

 private:
  struct Node {
    std::map<std::string, std::unique_ptr<Node>> children;
    std::unique_ptr<Node> star;
    std::set<std::string> hash_subs;
    std::set<std::string> end_subs;
  };
  static void collect_rec(const Node& node, const core::Topic& topic, std::size_t depth,
                          std::set<std::string>& out);
  Node root_;
};

}  // namespace modx::bus
