#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "advisor/dsl/parser.hpp"
#include "advisor/engine/session.hpp"
#include "doctest.h"
#include "support/oracles.hpp"

using namespace advisor;
using namespace advisor::engine;
using advisor::testing::ActivationKey;

namespace {

std::set<ActivationKey> agenda_keys(const Session& s) {
  std::set<ActivationKey> out;
  for (const auto& a : s.agenda()) {
    std::vector<std::int64_t> ids;
    for (auto f : a.facts) ids.push_back(f.value);
    out.insert({a.rule, ids});
  }
  return out;
}

}  // namespace

TEST_CASE("activation set equals exhaustive tuple matching") {
  testing::Rng rng(99);
  for (int i = 0; i < 150; ++i) {
    const auto spec = testing::random_program(rng);
    const auto src = testing::to_source(spec);
    CAPTURE(src);
    std::ostringstream out;
    Session session(RuleBase::compile(dsl::parse_source(src)), {nullptr, &out, nullptr});
    for (const auto& f : spec.facts) {
      std::vector<Value> fields(f.fields.begin(), f.fields.end());
      session.assert_fact(FactInput::ordered_fact(f.relation, fields));
    }
    CHECK(agenda_keys(session) == testing::oracle_activations(spec, 1));
  }
}

TEST_CASE("every pop is maximal by salience then recency") {
  testing::Rng rng(7);
  for (int i = 0; i < 150; ++i) {
    const auto spec = testing::random_program(rng);
    std::ostringstream out;
    Session session(RuleBase::compile(dsl::parse_source(testing::to_source(spec))), {nullptr, &out, nullptr});
    for (const auto& f : spec.facts) {
      session.assert_fact(FactInput::ordered_fact(f.relation, std::vector<Value>(f.fields.begin(), f.fields.end())));
    }
    while (true) {
      const auto before = session.agenda();
      const auto fired = session.step();
      if (!fired) break;
      for (const auto& a : before) {
        CHECK((a.salience < fired->salience || (a.salience == fired->salience && a.recency <= fired->recency)));
      }
    }
  }
}

TEST_CASE("agenda is independent of assertion interleaving for the same final facts") {
  testing::Rng rng(3);
  for (int i = 0; i < 100; ++i) {
    const auto spec = testing::random_program(rng);
    const auto rules = RuleBase::compile(dsl::parse_source(testing::to_source(spec)));
    auto keys_for = [&](std::vector<testing::FactSpec> facts) {
      Session s(rules, {nullptr, nullptr, nullptr});
      std::map<std::pair<std::string, std::vector<std::int64_t>>, std::int64_t> id_of;
      for (const auto& f : facts) {
        const auto r = s.assert_fact(FactInput::ordered_fact(f.relation, std::vector<Value>(f.fields.begin(), f.fields.end())));
        if (r.id) id_of[{f.relation, f.fields}] = r.id->value;
      }
      // Rename fact ids to their content so the two orders compare.
      std::multiset<std::pair<std::string, std::string>> out;
      for (const auto& a : s.agenda()) {
        std::string tuple;
        for (auto fid : a.facts) {
          for (const auto& [k, v] : id_of) {
            if (v == fid.value) {
              tuple += k.first;
              for (auto x : k.second) tuple += std::to_string(x);
              tuple += ";";
            }
          }
        }
        out.insert({a.rule, tuple});
      }
      return out;
    };
    auto reversed = spec.facts;
    std::reverse(reversed.begin(), reversed.end());
    CHECK(keys_for(spec.facts) == keys_for(reversed));
  }
}
