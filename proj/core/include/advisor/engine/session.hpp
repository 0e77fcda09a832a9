#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "advisor/engine/errors.hpp"
#include "advisor/engine/io.hpp"
#include "advisor/engine/rulebase.hpp"
#include "advisor/value.hpp"

namespace advisor::engine {

struct FactId {
  std::int64_t value = 0;
  friend auto operator<=>(const FactId&, const FactId&) = default;
};

struct Fact {
  FactId id;
  std::string relation;
  bool is_template = false;
  /// Template facts: one value per slot in template order (Nil when unset).
  /// Ordered facts: the positional fields.
  std::vector<Value> values;
};

/// Host-side fact description for assert_fact.
struct FactInput {
  std::string relation;
  std::vector<std::pair<std::string, Value>> slots;
  std::vector<Value> fields;
  bool ordered = true;

  static FactInput of_template(std::string relation,
                               std::vector<std::pair<std::string, Value>> slots);
  static FactInput ordered_fact(std::string relation, std::vector<Value> fields = {});
};

using Bindings = std::map<std::string, Value, std::less<>>;

struct Activation {
  std::size_t rule_index = 0;
  std::string rule;
  Bindings bindings;
  std::vector<FactId> facts;  // one per pattern, in LHS order
  std::int64_t salience = 0;
  std::uint64_t recency = 0;
};

/// True when `a` is popped before `b`: higher salience, then more recent.
bool fires_before(const Activation& a, const Activation& b);

struct FiredRule {
  std::string rule;
  std::vector<FactId> facts;
  std::int64_t salience = 0;
  std::uint64_t recency = 0;
};

/// `id` is empty when an identical fact already existed.
struct AssertResult {
  std::optional<FactId> id;
  bool duplicate() const noexcept { return !id.has_value(); }
};

struct SessionIo {
  std::shared_ptr<FileStore> files;
  std::ostream* standard_output = nullptr;  // router t; discarded when null
  std::istream* standard_input = nullptr;   // (read) / (read t)
};

/// Working memory, agenda and routers for one run of a rule base.
/// Single-threaded; move it between threads freely but never share it.
class Session {
 public:
  /// Constructs and resets.
  Session(std::shared_ptr<const RuleBase> rules, SessionIo io);
  ~Session();

  Session(Session&&) noexcept;
  Session& operator=(Session&&) noexcept;
  Session(const Session&) = delete;
  Session& operator=(const Session&) = delete;

  /// Clears working memory and the agenda, closes routers, asserts
  /// (initial-fact) as fact 0 and then every deffacts fact.
  void reset();

  AssertResult assert_fact(const FactInput& fact);
  void retract_fact(FactId id);

  /// Fires until the agenda is empty or `max_fires` is reached. Routers are
  /// flushed when it returns and closed once the agenda is empty.
  std::size_t run(std::optional<std::size_t> max_fires = std::nullopt);

  /// Fires the agenda head, if any.
  std::optional<FiredRule> step();

  Value eval(const dsl::Expression& expr, const Bindings& bindings);
  void printout(std::string_view router, std::span<const Value> items);
  void close_routers();

  const std::map<FactId, Fact>& facts() const noexcept;
  const Fact* find_fact(FactId id) const;
  /// Agenda in firing order.
  std::vector<Activation> agenda() const;
  const std::vector<FiredRule>& fire_log() const noexcept;
  const RuleBase& rules() const noexcept;

 private:
  class Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace advisor::engine
