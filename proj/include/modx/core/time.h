#pragma once

#include <atomic>
#include <cstdint>
#include <string>

namespace modx::core {

/// Milliseconds since the Unix epoch, UTC.
using Millis = std::int64_t;

/// Renders "2025-05-17T09:42:17.000Z" (milliseconds always present).
std::string to_iso8601(Millis ms);

/// Accepts ISO-8601 UTC instants with or without fractional seconds
/// ("...T09:42:17Z" or "...T09:42:17.123Z"). Throws ParseError otherwise.
Millis parse_iso8601(const std::string& text);

/// Time source behind brokers, ledgers and contexts so the scenario harness
/// can substitute a simulated clock.
class Clock {
 public:
  virtual ~Clock() = default;
  virtual Millis now() const = 0;
};

class SystemClock final : public Clock {
 public:
  Millis now() const override;
};

/// Manually advanced clock; the harness moves it between workflow steps so
/// timeouts and anchoring intervals are reproducible.
class SimClock final : public Clock {
 public:
  explicit SimClock(Millis start = 0) : now_(start) {}
  Millis now() const override { return now_.load(); }
  void advance(Millis delta) { now_ += delta; }
  void set(Millis value) { now_ = value; }

 private:
  std::atomic<Millis> now_;
};

}  // namespace modx::core
