// Copyright 2026 The Conformer Forge Authors
// SPDX-License-Identifier: Apache-2.0

#include <random>

#include <benchmark/benchmark.h>

#include "conformer_forge/geom.hpp"
#include "conformer_forge/model/loss.hpp"
#include "conformer_forge/model/progae.hpp"
#include "conformer_forge/nn/hierarchy.hpp"
#include "conformer_forge/trajdata.hpp"

namespace cf = conformer_forge;

namespace {

cf::Coords noisy_helix(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 0.3);
  cf::Coords c = cf::trajdata::synthetic_base_chain(n, 3.8);
  for (auto& p : c) p += cf::Vec3(g(rng), g(rng), g(rng));
  return c;
}

void BM_FarthestPointSample(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const cf::Coords c = noisy_helix(n, 1);
  for (auto _ : state) benchmark::DoNotOptimize(cf::nn::farthest_point_sample(c, n / 2));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_FarthestPointSample)->RangeMultiplier(2)->Range(64, 1024)->Complexity(benchmark::oNSquared);

void BM_ContactGraph(benchmark::State& state) {
  const cf::Coords c = noisy_helix(static_cast<std::size_t>(state.range(0)), 2);
  for (auto _ : state) benchmark::DoNotOptimize(cf::geom::build_contact_graph(c));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ContactGraph)->RangeMultiplier(2)->Range(64, 1024)->Complexity(benchmark::oNSquared);

void BM_Hierarchy(benchmark::State& state) {
  const cf::Coords c = noisy_helix(static_cast<std::size_t>(state.range(0)), 3);
  for (auto _ : state) benchmark::DoNotOptimize(cf::nn::build_hierarchy(c));
}
BENCHMARK(BM_Hierarchy)->Arg(64)->Arg(256);

void BM_Kabsch(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const cf::Coords a = noisy_helix(n, 4);
  const cf::Coords b = noisy_helix(n, 5);
  for (auto _ : state) benchmark::DoNotOptimize(cf::geom::kabsch_rmsd(a, b));
}
BENCHMARK(BM_Kabsch)->Arg(64)->Arg(1024);

// One training step's worth of tape work: encode, decode, loss, backward.
void BM_ForwardBackward(benchmark::State& state) {
  const auto batch = static_cast<std::size_t>(state.range(0));
  const cf::Coords ref = noisy_helix(64, 6);
  cf::model::ProGAE m(cf::model::ModelConfig{}, ref, 1);
  std::vector<cf::model::FrameInputs> inputs;
  for (std::size_t b = 0; b < batch; ++b) inputs.push_back(cf::model::prepare_frame(m.config(), noisy_helix(64, 10 + b)));
  std::vector<const cf::model::FrameInputs*> frames;
  std::vector<const cf::Coords*> targets;
  for (const auto& f : inputs) {
    frames.push_back(&f);
    targets.push_back(&f.target);
  }
  const cf::ad::Tensor target = cf::model::stack_coords(targets);
  for (auto _ : state) {
    cf::ad::Tape tape;
    auto e = m.encode(tape, frames, cf::ad::Mode::kTrain);
    auto loss = cf::model::batch_loss(m.decode(tape, e.z, cf::ad::Mode::kTrain), target, batch);
    tape.backward(loss);
    benchmark::DoNotOptimize(loss.value()[0]);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(batch));
}
BENCHMARK(BM_ForwardBackward)->Arg(1)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_EncodeFrame(benchmark::State& state) {
  const cf::Coords ref = noisy_helix(64, 7);
  cf::model::ProGAE m(cf::model::ModelConfig{}, ref, 1);
  const cf::Coords frame = noisy_helix(64, 8);
  for (auto _ : state) benchmark::DoNotOptimize(m.encode_frame(frame));
}
BENCHMARK(BM_EncodeFrame)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
