#pragma once

#include <compare>
#include <string>
#include <vector>

namespace modx::core {

/// Stable agent identifier: non-empty, lowercase alphanumerics plus hyphen
/// (e.g. "flight-agent-001").
struct AgentId {
  std::string value;

  static AgentId parse(const std::string& text);
  static bool valid(const std::string& text);

  auto operator<=>(const AgentId&) const = default;
};

/// Hierarchical topic, rendered dot-separated ("flight-disruption",
/// "travel.events.disruption"). Segments are non-empty and contain neither
/// the separator nor the pattern wildcards.
struct Topic {
  std::vector<std::string> segments;

  static Topic parse(const std::string& dotted);
  std::string str() const;

  auto operator<=>(const Topic&) const = default;
};

}  // namespace modx::core
