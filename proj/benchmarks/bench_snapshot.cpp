#include <benchmark/benchmark.h>

#include "bench_common.hpp"
#include "catalyst/snapshot.hpp"

namespace {

using catalyst::bench::populated_session;

void BM_EncodeSnapshot(benchmark::State& state) {
  auto s = populated_session(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(catalyst::encode_snapshot(s));
}
BENCHMARK(BM_EncodeSnapshot)->Arg(2)->Arg(100);

void BM_DecodeSnapshot(benchmark::State& state) {
  std::string blob = catalyst::encode_snapshot(populated_session(static_cast<std::size_t>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(catalyst::decode_snapshot(blob));
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * blob.size()));
}
BENCHMARK(BM_DecodeSnapshot)->Arg(2)->Arg(100);

// Cost of the copy each committed write makes.
void BM_CopySession(benchmark::State& state) {
  auto s = populated_session(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    catalyst::SessionState copy = s;
    benchmark::DoNotOptimize(copy);
  }
}
BENCHMARK(BM_CopySession)->Arg(2)->Arg(100)->Arg(700);

}  // namespace
