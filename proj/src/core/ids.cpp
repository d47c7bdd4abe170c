#include "modx/core/ids.h"

#include "modx/core/errors.h"

namespace modx::core {

bool AgentId::valid(const std::string& text) {
  if (text.empty()) return false;
  for (char c : text) {
    bool ok = (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '-';
    if (!ok) return false;
  }
  return true;
}

AgentId AgentId::parse(const std::string& text) {
  if (!valid(text)) {
    throw Error(ErrorCode::InvalidAgentId, "agent id must match [a-z0-9-]+: \"" + text + "\"");
  }
  return AgentId{text};
}

Topic Topic::parse(const std::string& dotted) {
  Topic topic;
  std::string segment;
  auto flush = [&] {
    if (segment.empty()) {
      throw Error(ErrorCode::InvalidTopic, "empty segment in topic: \"" + dotted + "\"");
    }
    if (segment == "*" || segment == "#") {
      throw Error(ErrorCode::InvalidTopic, "wildcard in concrete topic: \"" + dotted + "\"");
    }
    topic.segments.push_back(segment);
    segment.clear();
  };
  for (char c : dotted) {
    if (c == '.') {
      flush();
    } else {
      segment.push_back(c);
    }
  }
  flush();
  return topic;
}

std::string Topic::str() const {
  std::string out;
  for (std::size_t i = 0; i < segments.size(); ++i) {
    if (i) out.push_back('.');
    out += segments[i];
  }
  return out;
}

}  // namespace modx::core
