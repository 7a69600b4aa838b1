#include <benchmark/benchmark.h>

#include "bench_common.hpp"
#include "catalyst/export.hpp"
#include "catalyst/pdf_text.hpp"

namespace {

using catalyst::bench::populated_session;

catalyst::ExportDocument preview(std::size_t groups) {
  return catalyst::build_preview(populated_session(groups), {}, catalyst::Timestamp(std::chrono::milliseconds(0)));
}

void BM_RenderPlaintext(benchmark::State& state) {
  auto doc = preview(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(catalyst::render_plaintext(doc));
}
BENCHMARK(BM_RenderPlaintext)->Arg(2)->Arg(40);

void BM_RenderPdf(benchmark::State& state) {
  auto doc = preview(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(catalyst::render_pdf(doc));
}
BENCHMARK(BM_RenderPdf)->Arg(2)->Arg(40);

void BM_ExtractPdfText(benchmark::State& state) {
  std::string pdf = catalyst::render_pdf(preview(static_cast<std::size_t>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(catalyst::pdf::extract_text(pdf));
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * pdf.size()));
}
BENCHMARK(BM_ExtractPdfText)->Arg(2)->Arg(40);

}  // namespace
