// Copyright 2026 The mtnoise Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <random>
#include <string>
#include <vector>

#include "benchmark/benchmark.h"
#include "mtnoise/chrf.h"
#include "mtnoise/hangul.h"
#include "mtnoise/keyboard_layout.h"
#include "mtnoise/noise.h"

namespace mtnoise {
namespace {

std::vector<Segment> MakeSegments(int count) {
  static const char* kWords[] = {"the", "quick", "brown", "fox", "jumps",
                                 "over", "lazy", "dog", "translation", "noise"};
  std::mt19937 rng(7);
  std::vector<Segment> segments;
  for (int i = 0; i < count; ++i) {
    std::string text;
    for (int w = 0; w < 20; ++w) {
      if (w) text += ' ';
      text += kWords[rng() % 10];
    }
    segments.push_back(Segment{i, std::move(text)});
  }
  return segments;
}

void BM_NoiseCorpus(benchmark::State& state) {
  const auto segments = MakeSegments(1000);
  NoiseSpec spec{static_cast<NoiseType>(state.range(0)), 0.5, 42,
                 *BuiltinLayout("qwerty")};
  for (auto _ : state) {
    auto noised = NoiseCorpus(segments, spec, "bench");
    benchmark::DoNotOptimize(noised);
  }
  state.SetItemsProcessed(state.iterations() * segments.size());
}
BENCHMARK(BM_NoiseCorpus)
    ->Arg(static_cast<int>(NoiseType::kSwap))
    ->Arg(static_cast<int>(NoiseType::kDupe))
    ->Arg(static_cast<int>(NoiseType::kDrop))
    ->Arg(static_cast<int>(NoiseType::kKey));

void BM_CorpusChrf(benchmark::State& state) {
  const auto clean = MakeSegments(1000);
  NoiseSpec spec{NoiseType::kSwap, 0.3, 1, nullptr};
  const auto noised = *NoiseCorpus(clean, spec, "bench");
  std::vector<std::string> hyps, refs;
  for (size_t i = 0; i < clean.size(); ++i) {
    hyps.push_back(noised.segments[i].text);
    refs.push_back(clean[i].text);
  }
  ChrfParams params;
  params.word_order = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto score = CorpusChrf(hyps, refs, params);
    benchmark::DoNotOptimize(score);
  }
  state.SetItemsProcessed(state.iterations() * hyps.size());
}
BENCHMARK(BM_CorpusChrf)->Arg(0)->Arg(2);

void BM_HangulRoundTrip(benchmark::State& state) {
  std::u32string text;
  for (char32_t cp = 0xAC00; cp <= 0xD7A3; ++cp) text.push_back(cp);
  for (auto _ : state) {
    auto jamo = hangul::Decompose(text);
    benchmark::DoNotOptimize(hangul::Compose(jamo));
  }
  state.SetItemsProcessed(state.iterations() * text.size());
}
BENCHMARK(BM_HangulRoundTrip);

}  // namespace
}  // namespace mtnoise

BENCHMARK_MAIN();
