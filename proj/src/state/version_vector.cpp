#include "modx/state/version_vector.h"

#include <stdexcept>

namespace modx::state {

using core::DocMap;

VersionVector::Order VersionVector::compare(const VersionVector& a, const VersionVector& b) {
  bool a_ahead = false, b_ahead = false;
  auto ia = a.counters.begin();
  auto ib = b.counters.begin();
  while (ia != a.counters.end() || ib != b.counters.end()) {
    if (ib == b.counters.end() || (ia != a.counters.end() && ia->first < ib->first)) {
      if (ia->second > 0) a_ahead = true;
      ++ia;
    } else if (ia == a.counters.end() || ib->first < ia->first) {
      if (ib->second > 0) b_ahead = true;
      ++ib;
    } else {
      if (ia->second > ib->second) a_ahead = true;
      if (ib->second > ia->second) b_ahead = true;
      ++ia;
      ++ib;
    }
  }
  if (a_ahead && b_ahead) return Order::Concurrent;
  if (a_ahead) return Order::Dominates;
  if (b_ahead) return Order::DominatedBy;
  return Order::Equal;
}

void VersionVector::merge(const VersionVector& other) {
  for (const auto& [agent, count] : other.counters) {
    auto it = counters.find(agent);
    if (it == counters.end() || it->second < count) counters[agent] = count;
  }
}

DocValue VersionVector::to_doc() const {
  DocMap m;
  for (const auto& [agent, count] : counters) {
    m[agent.value] = DocValue(static_cast<double>(count));
  }
  return DocValue(std::move(m));
}

VersionVector VersionVector::from_doc(const DocValue& doc) {
  VersionVector vv;
  if (doc.is_map()) {
    for (const auto& [agent, count] : doc.as_map()) {
      if (count.is_number()) {
        vv.counters[AgentId::parse(agent)] = static_cast<std::uint64_t>(count.as_number());
      }
    }
  }
  return vv;
}

StateEntry resolve_conflict(const StateEntry& a, const StateEntry& b) {
  switch (VersionVector::compare(a.version, b.version)) {
    case VersionVector::Order::Dominates: return a;
    case VersionVector::Order::DominatedBy: return b;
    case VersionVector::Order::Equal:
    case VersionVector::Order::Concurrent:
      break;
  }
  if (a.written_at != b.written_at) return a.written_at > b.written_at ? a : b;
  return a.writer.value <= b.writer.value ? a : b;
}

StateEntry resolve_entries(const std::vector<StateEntry>& entries) {
  if (entries.empty()) throw std::invalid_argument("resolve_entries: empty entry set");
  std::vector<const StateEntry*> maximal;
  for (const StateEntry& candidate : entries) {
    bool dominated = false;
    for (const StateEntry& other : entries) {
      if (&other == &candidate) continue;
      if (VersionVector::compare(other.version, candidate.version) ==
          VersionVector::Order::Dominates) {
        dominated = true;
        break;
      }
    }
    if (!dominated) maximal.push_back(&candidate);
  }
  const StateEntry* winner = maximal.front();
  for (const StateEntry* candidate : maximal) {
    if (candidate == winner) continue;
    if (candidate->written_at > winner->written_at ||
        (candidate->written_at == winner->written_at &&
         candidate->writer.value < winner->writer.value)) {
      winner = candidate;
    }
  }
  return *winner;
}

}  // namespace modx::state
