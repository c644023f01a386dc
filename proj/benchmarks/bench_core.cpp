// Copyright 2026 The ocsr Authors
// SPDX-License-Identifier: Apache-2.0
//
// Microbenchmarks of the pipeline's hot paths: convolution, the full
// segmentation forward pass, molecule rasterization, ground-truth graph
// assembly, and the SMILES round trip.

#include <benchmark/benchmark.h>

#include "ocsr/assembler.hpp"
#include "ocsr/molgraph_gen.hpp"
#include "ocsr/networks.hpp"
#include "ocsr/nn.hpp"
#include "ocsr/random.hpp"
#include "ocsr/render.hpp"
#include "ocsr/smiles.hpp"
#include "ocsr/vocab.hpp"

namespace {

using namespace ocsr;

RenderStyle bench_style() {
  RenderStyle s = RenderStyle::preset(1);
  s.bond_length = 32;
  return s;
}

MolGraph bench_molecule(int rows, int cols) {
  GenParams gp;
  gp.min_atoms = 5;
  gp.max_atoms = 7;
  gp.bond_length = bench_style().bond_length;
  MolGraph g = random_molecule(7, gp);
  return place_in_canvas(g, bench_style(), rows, cols);
}

void BM_Conv2dForward(benchmark::State& state) {
  const int ch = static_cast<int>(state.range(0));
  Conv2d<float> conv(ch, ch, 3, 1, 1);
  Rng rng(1);
  for (const ParamRef<float>& p : conv.params()) {
    for (float& v : p.value->data) v = float(rng.uniform() * 0.2 - 0.1);
  }
  Tensor x({1, ch, 64, 64});
  for (float& v : x.data) v = float(rng.uniform());
  for (auto _ : state) {
    benchmark::DoNotOptimize(conv.forward(x));
  }
}
BENCHMARK(BM_Conv2dForward)->Arg(8)->Arg(16);

void BM_SegmentationForward(benchmark::State& state) {
  const int side = static_cast<int>(state.range(0));
  SegNetConfig cfg;
  cfg.hidden = 8;
  SegmentationNet net(cfg);
  net.init(3);
  Rng rng(2);
  Tensor x({1, 1, side, side});
  for (float& v : x.data) v = rng.bernoulli(0.1) ? 1.0f : 0.0f;
  for (auto _ : state) {
    benchmark::DoNotOptimize(net.forward(x));
  }
}
BENCHMARK(BM_SegmentationForward)->Arg(64)->Arg(128);

void BM_Rasterize(benchmark::State& state) {
  const MolGraph g = bench_molecule(256, 256);
  const RenderStyle style = bench_style();
  for (auto _ : state) {
    benchmark::DoNotOptimize(rasterize(g, style, 256, 256));
  }
}
BENCHMARK(BM_Rasterize);

void BM_LabelMaps(benchmark::State& state) {
  const MolGraph g = bench_molecule(256, 256);
  const RenderStyle style = bench_style();
  const Vocabulary vocab = Vocabulary::full();
  for (auto _ : state) {
    benchmark::DoNotOptimize(label_maps(g, vocab, style, 256, 256));
  }
}
BENCHMARK(BM_LabelMaps);

void BM_OracleBuildGraph(benchmark::State& state) {
  const MolGraph g = bench_molecule(256, 256);
  const RenderStyle style = bench_style();
  const Vocabulary vocab = Vocabulary::full();
  const Image img = rasterize(g, style, 256, 256);
  const LabelMaps maps = label_maps(g, vocab, style, 256, 256);
  const BuildConfig cfg = BuildConfig::from_style(style);
  for (auto _ : state) {
    OracleModels models(maps, vocab, cfg);
    benchmark::DoNotOptimize(build_graph(img, models, vocab, cfg));
  }
}
BENCHMARK(BM_OracleBuildGraph);

void BM_SmilesRoundTrip(benchmark::State& state) {
  const MolGraph g = bench_molecule(256, 256);
  const std::string smi = to_smiles(g);
  for (auto _ : state) {
    benchmark::DoNotOptimize(to_smiles(parse_smiles(smi)));
  }
}
BENCHMARK(BM_SmilesRoundTrip);

}  // namespace

BENCHMARK_MAIN();
