#include <benchmark/benchmark.h>

#include <string>

#include "advisor/dsl/parser.hpp"
#include "advisor/engine/session.hpp"
#include "advisor/kb/advise.hpp"
#include "advisor/kb/criteria.hpp"
#include "advisor/kb/knowledge_base.hpp"

using namespace advisor;

namespace {

std::string shipped_text() {
  std::string text;
  for (const auto& src : kb::shipped_kb_sources()) text += src.text;
  return text;
}

kb::StudentRecord student(std::int64_t id) {
  return {id, "Ali", 19, 60, "Science", 2009, 80, 60, 60, 60, 0, 80, 0};
}

void BM_ParseShippedKb(benchmark::State& state) {
  const auto text = shipped_text();
  for (auto _ : state) benchmark::DoNotOptimize(dsl::parse_source(text));
}
BENCHMARK(BM_ParseShippedKb);

void BM_EvaluateStudent(benchmark::State& state) {
  const auto route = state.range(0) ? kb::Route::Files : kb::Route::InMemory;
  const auto& kb = kb::default_kb();
  std::int64_t id = 0;
  for (auto _ : state) benchmark::DoNotOptimize(kb::evaluate_student(student(++id), kb, route));
}
BENCHMARK(BM_EvaluateStudent)->Arg(0)->Arg(1);

// Matching cost as working memory grows: one join rule over n facts.
void BM_JoinMatch(benchmark::State& state) {
  const auto rules = engine::RuleBase::compile(
      dsl::parse_source("(defrule pair (a ?x) (b ?x ?y) (test (> ?y 0)) => (printout t ?y crlf))"));
  const auto n = state.range(0);
  for (auto _ : state) {
    engine::Session s(rules, {nullptr, nullptr, nullptr});
    for (std::int64_t i = 0; i < n; ++i) {
      s.assert_fact(engine::FactInput::ordered_fact("a", {Value(i % 16)}));
      s.assert_fact(engine::FactInput::ordered_fact("b", {Value(i % 16), Value(i)}));
    }
    benchmark::DoNotOptimize(s.run());
  }
  state.SetComplexityN(n);
}
BENCHMARK(BM_JoinMatch)->RangeMultiplier(2)->Range(8, 256)->Complexity();

// Evaluation with many compiled faculties loaded.
void BM_EvaluateManyFaculties(benchmark::State& state) {
  std::vector<kb::FacultyCriteria> all;
  for (int i = 0; i < state.range(0); ++i) {
    all.push_back({"F" + std::to_string(i), 50, "Science", 2005, {{"int-test-per", 50.0 + i % 40}}});
  }
  std::vector<kb::KbSource> sources;
  for (const auto& src : kb::shipped_kb_sources()) sources.push_back(src);
  sources.push_back({"faculties.clp", kb::emit_rules(all)});
  const auto kb = kb::KnowledgeBase::from_sources(sources);
  for (auto _ : state) benchmark::DoNotOptimize(kb::evaluate_student(student(1), kb));
}
BENCHMARK(BM_EvaluateManyFaculties)->Arg(1)->Arg(10)->Arg(50);

}  // namespace

BENCHMARK_MAIN();
