#include <benchmark/benchmark.h>

#include "catalyst/gateway.hpp"

namespace {

std::string numbered(int n) {
  std::string s = "Here are the questions:\n";
  for (int i = 1; i <= n; ++i) s += std::to_string(i) + ". What should students consider about item " + std::to_string(i) + "?\n";
  return s;
}

std::string prose(int n) {
  std::string s;
  for (int i = 1; i <= n; ++i) s += "Some context sentence. Why does variant " + std::to_string(i) + " fail? ";
  return s;
}

void BM_ParseNumberedList(benchmark::State& state) {
  std::string text = numbered(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(catalyst::parse_questions(text, 5));
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * text.size()));
}
BENCHMARK(BM_ParseNumberedList)->Arg(5)->Arg(50);

void BM_ParseInterrogativeProse(benchmark::State& state) {
  std::string text = prose(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(catalyst::parse_questions(text, 5));
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * text.size()));
}
BENCHMARK(BM_ParseInterrogativeProse)->Arg(5)->Arg(50);

}  // namespace
