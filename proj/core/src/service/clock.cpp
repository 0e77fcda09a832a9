#include "advisor/service/clock.hpp"

namespace advisor::service {

Instant SystemClock::now() const {
  return std::chrono::time_point_cast<std::chrono::milliseconds>(std::chrono::system_clock::now());
}

ManualClock::ManualClock(Instant start) : ms_(start.time_since_epoch().count()) {}

Instant ManualClock::now() const { return Instant{std::chrono::milliseconds{ms_.load()}}; }

void ManualClock::set(Instant t) { ms_.store(t.time_since_epoch().count()); }

void ManualClock::advance(std::chrono::milliseconds d) { ms_.fetch_add(d.count()); }

}  // namespace advisor::service
