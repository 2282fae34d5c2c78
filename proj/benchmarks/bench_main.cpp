#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "lsbauth/authcodec.hpp"
#include "lsbauth/metrics.hpp"
#include "lsbauth/ncs_sim.hpp"

using namespace lsbauth;

namespace {

Key test_key() { return Key(std::vector<std::uint8_t>(32, 0x5a)); }

void BM_KeyedMacDigest(benchmark::State& state) {
  const KeyedMac mac(test_key());
  const std::vector<std::uint8_t> msg(2, 0x13);
  for (auto _ : state) benchmark::DoNotOptimize(mac.digest(msg));
}
BENCHMARK(BM_KeyedMacDigest);

void BM_Kdf(benchmark::State& state) {
  const KeyedMac root(test_key());
  std::uint64_t counter = 0;
  for (auto _ : state) benchmark::DoNotOptimize(kdf(root, counter++));
}
BENCHMARK(BM_Kdf);

void BM_EncodeMeasurement(benchmark::State& state) {
  const KeyedMac mac(test_key());
  const NumberFormat fmt = FixedFormat{7, 8};
  const BitString y = encode(quantize(1.234, fmt).level, fmt);
  const int L = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(encode_measurement(y, mac, L, fmt));
}
BENCHMARK(BM_EncodeMeasurement)->Arg(0)->Arg(4)->Arg(8);

// Honest traffic: one verification per channel per step.
void BM_DetectorStep(benchmark::State& state) {
  const NumberFormat fmt = FixedFormat{7, 8};
  const int L = 4;
  std::vector<Key> roots;
  std::vector<KeyChain> chains;
  for (std::uint64_t i = 0; i < 3; ++i) {
    roots.push_back(derive_channel_key(test_key(), i));
    chains.emplace_back(roots.back());
  }
  Detector det(roots, L, 2);
  std::mt19937_64 rng(1);
  for (auto _ : state) {
    std::vector<BitString> pkt;
    for (auto& c : chains) {
      const BitString y = encode(quantize(static_cast<double>(rng() % 1000) / 256.0, fmt).level, fmt);
      pkt.push_back(encode_measurement(y, c.mac(), L, fmt).bits);
      c.advance();
    }
    benchmark::DoNotOptimize(det.step(pkt));
  }
}
BENCHMARK(BM_DetectorStep);

void BM_EllipsoidSolve(benchmark::State& state) {
  const auto m = hydro_turbine_model();
  const double e = error_bound_fixed(8, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(fixed_point_ellipsoid(m, e));
}
BENCHMARK(BM_EllipsoidSolve)->Arg(0)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_NormBundle(benchmark::State& state) {
  const auto m = hydro_turbine_model();
  for (auto _ : state) benchmark::DoNotOptimize(norm_bundle(m));
}
BENCHMARK(BM_NormBundle)->Unit(benchmark::kMicrosecond);

void BM_SimulateSteps(benchmark::State& state) {
  SimConfig c;
  c.model = hydro_turbine_model();
  c.format = FixedFormat{7, 8};
  c.L = static_cast<int>(state.range(0));
  c.r = 2;
  c.T = 10000;
  c.record = false;
  for (auto _ : state) benchmark::DoNotOptimize(simulate(c).cost_sum);
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) * static_cast<std::int64_t>(c.T));
}
BENCHMARK(BM_SimulateSteps)->Arg(0)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
