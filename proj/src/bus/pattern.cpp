#include "modx/bus/pattern.h"

#include "modx/core/errors.h"

namespace modx::bus {

using core::Error;
using core::ErrorCode;
using core::Topic;

TopicPattern TopicPattern::parse(const std::string& text) {
  TopicPattern pattern;
  std::string segment;
  auto flush = [&] {
    if (segment.empty()) {
      throw Error(ErrorCode::InvalidPattern, "empty segment in pattern \"" + text + "\"");
    }
    if (segment != "*" && segment != "#") {
      if (segment.find('*') != std::string::npos || segment.find('#') != std::string::npos) {
        throw Error(ErrorCode::InvalidPattern,
                    "wildcards must stand alone as segments: \"" + text + "\"");
      }
    }
    pattern.segments.push_back(segment);
    segment.clear();
  };
  for (char c : text) {
    if (c == '.') {
      flush();
    } else {
      segment.push_back(c);
    }
  }
  flush();
  for (std::size_t i = 0; i < pattern.segments.size(); ++i) {
    if (pattern.segments[i] == "#" && i + 1 != pattern.segments.size()) {
      throw Error(ErrorCode::InvalidPattern, "# is only valid as the final segment: \"" + text +
                                                 "\"");
    }
  }
  return pattern;
}

std::string TopicPattern::str() const {
  std::string out;
  for (std::size_t i = 0; i < segments.size(); ++i) {
    if (i) out.push_back('.');
    out += segments[i];
  }
  return out;
}

bool TopicPattern::matches(const Topic& topic) const {
  std::size_t p = 0, t = 0;
  while (p < segments.size()) {
    const std::string& seg = segments[p];
    if (seg == "#") return true;  // zero or more remaining segments
    if (t >= topic.segments.size()) return false;
    if (seg != "*" && seg != topic.segments[t]) return false;
    ++p;
    ++t;
  }
  return t == topic.segments.size();
}

void PatternIndex::add(const std::string& subscription_id, const TopicPattern& pattern) {
  Node* node = &root_;
  for (std::size_t i = 0; i < pattern.segments.size(); ++i) {
    const std::string& seg = pattern.segments[i];
    if (seg == "#") {
      node->hash_subs.insert(subscription_id);
      return;
    }
    if (seg == "*") {
      if (!node->star) node->star = std::make_unique<Node>();
      node = node->star.get();
    } else {
      auto& child = node->children[seg];
      if (!child) child = std::make_unique<Node>();
      node = child.get();
    }
  }
  node->end_subs.insert(subscription_id);
}

void PatternIndex::remove(const std::string& subscription_id, const TopicPattern& pattern) {
  Node* node = &root_;
  for (std::size_t i = 0; i < pattern.segments.size(); ++i) {
    const std::string& seg = pattern.segments[i];
    if (seg == "#") {
      node->hash_subs.erase(subscription_id);
      return;
    }
    if (seg == "*") {
      if (!node->star) return;
      node = node->star.get();
    } else {
      auto it = node->children.find(seg);
      if (it == node->children.end()) return;
      node = it->second.get();
    }
  }
  node->end_subs.erase(subscription_id);
}

void PatternIndex::collect_rec(const Node& node, const Topic& topic, std::size_t depth,
                               std::set<std::string>& out) {
  out.insert(node.hash_subs.begin(), node.hash_subs.end());
  if (depth == topic.segments.size()) {
    out.insert(node.end_subs.begin(), node.end_subs.end());
    return;
  }
  auto it = node.children.find(topic.segments[depth]);
  if (it != node.children.end()) collect_rec(*it->second, topic, depth + 1, out);
  if (node.star) collect_rec(*node.star, topic, depth + 1, out);
}

std::set<std::string> PatternIndex::collect(const Topic& topic) const {
  std::set<std::string> out;
  collect_rec(root_, topic, 0, out);
  return out;
}

}  // namespace modx::bus
