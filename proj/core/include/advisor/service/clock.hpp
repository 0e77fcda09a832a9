#pragma once

#include <atomic>
#include <chrono>

#include "advisor/assessment/session.hpp"

namespace advisor::service {

using assessment::Instant;

class Clock {
 public:
  virtual ~Clock() = default;
  virtual Instant now() const = 0;
};

class SystemClock final : public Clock {
 public:
  Instant now() const override;
};

/// Test clock; starts at the given instant and moves only when told to.
class ManualClock final : public Clock {
 public:
  explicit ManualClock(Instant start = Instant{std::chrono::milliseconds{1'700'000'000'000}});

  Instant now() const override;
  void set(Instant t);
  void advance(std::chrono::milliseconds d);

 private:
  std::atomic<std::int64_t> ms_;
};

}  // namespace advisor::service
