#include <benchmark/benchmark.h>

#include "repseg/repseg.hpp"

using namespace repseg;

namespace {

const std::pair<Image, GroundTruth>& tiling() {
  static const auto item = [] {
    SynthSpec s;
    s.seed = 1;
    return synth(s);
  }();
  return item;
}

void BM_Canny(benchmark::State& state) {
  const Image gray = to_gray(tiling().first);
  for (auto _ : state) benchmark::DoNotOptimize(canny(gray));
}
BENCHMARK(BM_Canny)->Unit(benchmark::kMillisecond);

void BM_Describe(benchmark::State& state) {
  const Image gray = to_gray(tiling().first);
  const auto kps = sample_keypoints(canny(gray), 4, 5000);
  for (auto _ : state) benchmark::DoNotOptimize(describe_all(gray, kps, 16, 1));
  state.counters["keypoints"] = static_cast<double>(kps.size());
}
BENCHMARK(BM_Describe)->Unit(benchmark::kMillisecond);

void BM_Splashes(benchmark::State& state) {
  const Image gray = to_gray(tiling().first);
  const auto kps = sample_keypoints(canny(gray), 4, 5000);
  const auto desc = describe_all(gray, kps, 16, 1);
  const SplashParams params{24, 16.0, 0.45};
  const int jobs = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(make_splashes(kps, desc, params, jobs));
}
BENCHMARK(BM_Splashes)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_Vote(benchmark::State& state) {
  const auto cfg = PipelineConfig::defaults();
  const auto res = run_pipeline(tiling().first, cfg, cfg.level("instance"));
  AccumulatorParams ap{5.0, 2, 512};
  for (auto _ : state) benchmark::DoNotOptimize(vote(res.splashes, ap, 1));
}
BENCHMARK(BM_Vote)->Unit(benchmark::kMillisecond);

void BM_Slic(benchmark::State& state) {
  const SlicParams p{static_cast<int>(state.range(0)), 10.0, 10};
  for (auto _ : state) benchmark::DoNotOptimize(slic(tiling().first, p));
}
BENCHMARK(BM_Slic)->Arg(300)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);

void BM_Pipeline(benchmark::State& state) {
  const auto cfg = PipelineConfig::defaults();
  const int jobs = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_pipeline(tiling().first, cfg, cfg.level("instance"), jobs));
  }
}
BENCHMARK(BM_Pipeline)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_Score(benchmark::State& state) {
  const auto cfg = PipelineConfig::defaults();
  const auto res = run_pipeline(tiling().first, cfg, cfg.level("instance"));
  const auto& gt = tiling().second.levels.at("instance");
  for (auto _ : state) benchmark::DoNotOptimize(score(res.mask, gt));
}
BENCHMARK(BM_Score)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
