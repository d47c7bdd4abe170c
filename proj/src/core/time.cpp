#include "modx/core/time.h"

#include <chrono>
#include <cstdio>
#include <ctime>

#include "modx/core/errors.h"

namespace modx::core {

std::string to_iso8601(Millis ms) {
  Millis secs = ms / 1000;
  Millis frac = ms % 1000;
  if (frac < 0) {
    frac += 1000;
    secs -= 1;
  }
  std::time_t t = static_cast<std::time_t>(secs);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02d.%03dZ", tm.tm_year + 1900,
                tm.tm_mon + 1, tm.tm_mday, tm.tm_hour, tm.tm_min, tm.tm_sec,
                static_cast<int>(frac));
  return buf;
}

Millis parse_iso8601(const std::string& text) {
  int year = 0, month = 0, day = 0, hour = 0, minute = 0, second = 0;
  int fields = std::sscanf(text.c_str(), "%4d-%2d-%2dT%2d:%2d:%2d", &year, &month, &day, &hour,
                           &minute, &second);
  if (fields != 6) {
    throw Error(ErrorCode::ParseError, "not an ISO-8601 instant: " + text);
  }
  std::size_t pos = text.find_first_of(".Z", 19);
  Millis frac = 0;
  if (pos != std::string::npos && text[pos] == '.') {
    std::size_t digits = 0;
    Millis value = 0;
    for (std::size_t i = pos + 1; i < text.size() && text[i] >= '0' && text[i] <= '9'; ++i) {
      if (digits < 3) value = value * 10 + (text[i] - '0');
      ++digits;
    }
    if (digits == 0) throw Error(ErrorCode::ParseError, "empty fraction in instant: " + text);
    while (digits < 3) {
      value *= 10;
      ++digits;
    }
    frac = value;
  }
  if (text.empty() || text.back() != 'Z') {
    throw Error(ErrorCode::ParseError, "instant must be UTC (trailing Z): " + text);
  }
  std::tm tm{};
  tm.tm_year = year - 1900;
  tm.tm_mon = month - 1;
  tm.tm_mday = day;
  tm.tm_hour = hour;
  tm.tm_min = minute;
  tm.tm_sec = second;
  std::time_t secs = timegm(&tm);
  if (secs == static_cast<std::time_t>(-1)) {
    throw Error(ErrorCode::ParseError, "instant out of range: " + text);
  }
  return static_cast<Millis>(secs) * 1000 + frac;
}

Millis SystemClock::now() const {
  using namespace std::chrono;
  return duration_cast<milliseconds>(system_clock::now().time_since_epoch()).count();
}

}  // namespace modx::core
