#include <benchmark/benchmark.h>

#include <random>

#include "cobot/image.hpp"
#include "cobot/scenario.hpp"
#include "cobot/sim.hpp"

using namespace cobot;

namespace {

SimConfig config(int scale) {
  SimConfig cfg;
  cfg.image_size = {640 * scale, 480 * scale};
  cfg.pixel_pitch = 0.05 / scale;
  return cfg;
}

void BM_Segment(benchmark::State& state) {
  const auto cfg = config(static_cast<int>(state.range(0)));
  const auto img = render(loin_specimen(std::nullopt), cfg);
  const auto th = ColorThresholds::defaults();
  for (auto _ : state) benchmark::DoNotOptimize(segment(img, th));
  state.SetItemsProcessed(state.iterations() * img.width() * img.height());
}

void BM_SegmentReference(benchmark::State& state) {
  const auto cfg = config(static_cast<int>(state.range(0)));
  const auto img = render(loin_specimen(std::nullopt), cfg);
  const auto th = ColorThresholds::defaults();
  for (auto _ : state) benchmark::DoNotOptimize(reference::segment(img, th));
  state.SetItemsProcessed(state.iterations() * img.width() * img.height());
}

void BM_Render(benchmark::State& state) {
  const auto cfg = config(static_cast<int>(state.range(0)));
  const auto spec = loin_specimen(std::nullopt);
  for (auto _ : state) benchmark::DoNotOptimize(render(spec, cfg));
}

void BM_RenderReference(benchmark::State& state) {
  const auto cfg = config(static_cast<int>(state.range(0)));
  const auto spec = loin_specimen(std::nullopt);
  for (auto _ : state) benchmark::DoNotOptimize(reference::render(spec, cfg));
}

}  // namespace

BENCHMARK(BM_Segment)->Arg(1)->Arg(4)->UseRealTime();
BENCHMARK(BM_SegmentReference)->Arg(1)->Arg(4)->UseRealTime();
BENCHMARK(BM_Render)->Arg(1)->Arg(4)->UseRealTime();
BENCHMARK(BM_RenderReference)->Arg(1)->Arg(4)->UseRealTime();

BENCHMARK_MAIN();
