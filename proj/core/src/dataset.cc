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

#include "mtnoise/dataset.h"

#include <numeric>

#include "absl/status/status.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_split.h"
#include "absl/strings/strip.h"
#include "mtnoise/corpus_io.h"
#include "mtnoise/file_util.h"
#include "mtnoise/parallel.h"
#include "mtnoise/perturb.h"
#include "mtnoise/rng.h"
#include "mtnoise/status_macros.h"
#include "nlohmann/json.hpp"

namespace mtnoise {
namespace {

constexpr uint64_t kSubsampleLabel = 0x53554253414d504cULL;  // "SUBSAMPL"

using Json = nlohmann::ordered_json;

}  // namespace

double MixSpec::Total() const {
  double total = 0.0;
  for (NoiseType type : kAllNoiseTypes) {
    auto it = rates.find(type);
    if (it != rates.end()) total += it->second;
  }
  return total;
}

absl::Status ValidateMixSpec(const MixSpec& mix) {
  for (const auto& [type, rate] : mix.rates) {
    if (!(rate >= 0.0 && rate <= 1.0)) {
      return absl::InvalidArgumentError(absl::StrCat(
          "rate for ", std::string(NoiseTypeName(type)), " must be in [0, 1], got ", rate));
    }
  }
  // Small slack so that e.g. 0.1 + 0.2 + 0.3 + 0.4 is accepted.
  if (mix.Total() > 1.0 + 1e-12) {
    return absl::InvalidArgumentError(
        absl::StrCat("noise rates sum to ", mix.Total(), ", more than 1"));
  }
  auto key = mix.rates.find(NoiseType::kKey);
  if (key != mix.rates.end() && key->second > 0.0 && mix.layout == nullptr) {
    return absl::InvalidArgumentError("key noise requires a keyboard layout");
  }
  return absl::OkStatus();
}

absl::StatusOr<std::map<NoiseType, double>> ParseMixRates(
    std::string_view text) {
  std::map<NoiseType, double> rates;
  for (absl::string_view item :
       absl::StrSplit(absl::string_view(text.data(), text.size()), ',',
                      absl::SkipWhitespace())) {
    std::pair<absl::string_view, absl::string_view> kv =
        absl::StrSplit(item, absl::MaxSplits('=', 1));
    const absl::string_view name = absl::StripAsciiWhitespace(kv.first);
    ASSIGN_OR_RETURN(NoiseType type,
                     ParseNoiseType(std::string_view(name.data(), name.size())));
    double rate = 0.0;
    if (!absl::SimpleAtod(absl::StripAsciiWhitespace(kv.second), &rate)) {
      return absl::InvalidArgumentError(
          absl::StrCat("bad rate in '", item, "'"));
    }
    if (!rates.emplace(type, rate).second) {
      return absl::InvalidArgumentError(
          absl::StrCat("noise type '", name, "' given twice"));
    }
  }
  return rates;
}

TokenSelector MixSelector(const MixSpec& mix) {
  std::vector<std::pair<double, NoiseType>> cumulative;
  double acc = 0.0;
  for (NoiseType type : kAllNoiseTypes) {
    auto it = mix.rates.find(type);
    if (it == mix.rates.end() || it->second <= 0.0) continue;
    acc += it->second;
    cumulative.emplace_back(acc, type);
  }
  return [cumulative](RandomStream& rng) -> std::optional<NoiseType> {
    const double u = rng.UniformDouble();
    for (const auto& [bound, type] : cumulative) {
      if (u < bound) return type;
    }
    return std::nullopt;
  };
}

namespace {

// Segments need not be contiguous here (subsamples keep original indices).
absl::StatusOr<NoisedCorpus> MixNoiseAny(const std::vector<Segment>& segments,
                                         const MixSpec& mix, std::string base_id,
                                         int jobs) {
  RETURN_IF_ERROR(ValidateMixSpec(mix));
  const TokenSelector select = MixSelector(mix);
  NoisedCorpus corpus;
  corpus.noise.base = std::move(base_id);
  corpus.noise.kind = "mix";
  corpus.noise.p = mix.Total();
  for (const auto& [type, rate] : mix.rates) {
    corpus.noise.rates[std::string(NoiseTypeName(type))] = rate;
  }
  corpus.noise.seed = mix.seed;
  if (mix.layout != nullptr) {
    corpus.noise.layout = mix.layout->name();
    corpus.noise.layout_sha256 = mix.layout->sha256();
  }
  corpus.segments.resize(segments.size());
  std::vector<absl::Status> errors(segments.size());
  ParallelFor(segments.size(), jobs, [&](size_t i) {
    auto noised = NoiseText(segments[i].text, segments[i].index, mix.seed,
                            select, mix.layout);
    if (!noised.ok()) {
      errors[i] = noised.status();
      return;
    }
    corpus.segments[i] = NoisedSegment{segments[i].index, std::move(noised->text),
                                       std::move(noised->records)};
  });
  for (size_t i = 0; i < errors.size(); ++i) {
    if (!errors[i].ok()) {
      return absl::Status(errors[i].code(), absl::StrCat("segment ", i, ": ",
                                                         errors[i].message()));
    }
  }
  return corpus;
}

}  // namespace

absl::StatusOr<NoisedCorpus> MixNoise(const std::vector<Segment>& segments,
                                      const MixSpec& mix, std::string base_id,
                                      int jobs) {
  RETURN_IF_ERROR(ValidateSegments(segments));
  return MixNoiseAny(segments, mix, std::move(base_id), jobs);
}

absl::StatusOr<std::vector<size_t>> SubsampleIndices(size_t n,
                                                     size_t sample_size,
                                                     uint64_t seed) {
  if (sample_size > n) {
    return absl::InvalidArgumentError(absl::StrCat(
        "sample size ", sample_size, " exceeds corpus size ", n));
  }
  std::vector<size_t> perm(n);
  std::iota(perm.begin(), perm.end(), size_t{0});
  RandomStream rng(DeriveSeed(seed, kSubsampleLabel));
  for (size_t i = 0; i < sample_size; ++i) {
    const size_t j = i + static_cast<size_t>(rng.UniformBelow(n - i));
    std::swap(perm[i], perm[j]);
  }
  perm.resize(sample_size);
  return perm;
}

std::string_view TrainingTaskName(TrainingTask task) {
  return task == TrainingTask::kTranslation ? "translation" : "correction";
}

NoisedCorpus TrainingSet::Provenance() const {
  NoisedCorpus out;
  out.noise = noise;
  out.segments.reserve(pairs.size());
  for (const auto& pair : pairs) {
    out.segments.push_back(
        NoisedSegment{pair.input.index, pair.input.text, pair.perturbations});
  }
  return out;
}

namespace {

absl::StatusOr<TrainingSet> MakeTrainingSet(
    TrainingTask task, const std::vector<Segment>& inputs,
    const std::vector<Segment>& outputs, const MixSpec& mix,
    size_t sample_size, std::string base_id, int jobs) {
  RETURN_IF_ERROR(ValidateMixSpec(mix));
  ASSIGN_OR_RETURN(std::vector<size_t> picks,
                   SubsampleIndices(inputs.size(), sample_size, mix.seed));
  std::vector<Segment> sample;
  sample.reserve(picks.size());
  for (size_t i : picks) sample.push_back(inputs[i]);
  // Noise is keyed by the original segment index, so a pair looks the same
  // in every sample that contains it.
  ASSIGN_OR_RETURN(NoisedCorpus noised,
                   MixNoiseAny(sample, mix, std::move(base_id), jobs));
  TrainingSet set;
  set.task = task;
  set.noise = noised.noise;
  set.pairs.reserve(picks.size());
  for (size_t k = 0; k < picks.size(); ++k) {
    NoisedSegment& seg = noised.segments[k];
    set.pairs.push_back(TrainingPair{Segment{seg.index, std::move(seg.text)},
                                     outputs[picks[k]],
                                     std::move(seg.perturbations)});
  }
  return set;
}

}  // namespace

absl::StatusOr<TrainingSet> MakeMtTrainingSet(const ParallelCorpus& corpus,
                                              const MixSpec& mix,
                                              size_t sample_size,
                                              std::string base_id, int jobs) {
  RETURN_IF_ERROR(ValidateCorpus(corpus));
  if (!corpus.target) {
    return absl::InvalidArgumentError(
        "translation training data needs a target side");
  }
  return MakeTrainingSet(TrainingTask::kTranslation, corpus.source,
                         *corpus.target, mix, sample_size, std::move(base_id),
                         jobs);
}

absl::StatusOr<TrainingSet> MakeCorrectionTrainingSet(
    const std::vector<Segment>& segments, const MixSpec& mix,
    size_t sample_size, std::string base_id, int jobs) {
  RETURN_IF_ERROR(ValidateSegments(segments));
  return MakeTrainingSet(TrainingTask::kCorrection, segments, segments, mix,
                         sample_size, std::move(base_id), jobs);
}

absl::StatusOr<ValidationSet> MakeValidationSet(const ParallelCorpus& dev,
                                                uint64_t seed,
                                                const KeyboardLayout* layout,
                                                std::string base_id, int jobs) {
  RETURN_IF_ERROR(ValidateCorpus(dev));
  MixSpec mix;
  for (NoiseType type : kAllNoiseTypes) mix.rates[type] = kValidationRate;
  mix.seed = seed;
  mix.layout = layout;
  ValidationSet out;
  ASSIGN_OR_RETURN(out.noised_half,
                   MixNoise(dev.source, mix, std::move(base_id), jobs));
  const int64_t n = static_cast<int64_t>(dev.source.size());
  out.corpus.languages = dev.languages;
  out.corpus.source = dev.source;
  for (int64_t i = 0; i < n; ++i) out.corpus.source[i].index = i;
  for (int64_t i = 0; i < n; ++i) {
    out.corpus.source.push_back(Segment{n + i, out.noised_half.segments[i].text});
  }
  if (dev.target) {
    std::vector<Segment> target = *dev.target;
    for (int64_t i = 0; i < n; ++i) target[i].index = i;
    for (int64_t i = 0; i < n; ++i) {
      target.push_back(Segment{n + i, (*dev.target)[i].text});
    }
    out.corpus.target = std::move(target);
  }
  return out;
}

absl::Status WriteTrainingSet(
    const TrainingSet& set, const std::filesystem::path& dir,
    const std::string& name,
    const std::map<std::string, std::filesystem::path>& sources) {
  std::vector<Segment> inputs;
  std::vector<Segment> outputs;
  inputs.reserve(set.pairs.size());
  outputs.reserve(set.pairs.size());
  for (const auto& pair : set.pairs) {
    inputs.push_back(pair.input);
    outputs.push_back(pair.output);
  }
  const std::string input_text = FormatPlainCorpus(inputs);
  const std::string output_text = FormatPlainCorpus(outputs);
  const std::string provenance = FormatNoisedJsonl(set.Provenance());

  Json manifest;
  manifest["name"] = name;
  manifest["task"] = std::string(TrainingTaskName(set.task));
  manifest["pairs"] = set.pairs.size();
  manifest["seed"] = set.noise.seed;
  manifest["mix"] = set.noise.rates;
  if (set.noise.layout) {
    manifest["layout"] = *set.noise.layout;
    manifest["layout_sha256"] = *set.noise.layout_sha256;
  }
  Json source_sums = Json::object();
  for (const auto& [role, path] : sources) {
    ASSIGN_OR_RETURN(std::string contents, ReadFile(path));
    source_sums[role] = {{"path", path.string()},
                         {"sha256", Sha256Hex(contents)}};
  }
  manifest["sources"] = source_sums;
  manifest["outputs"] = {
      {name + ".input.txt", Sha256Hex(input_text)},
      {name + ".output.txt", Sha256Hex(output_text)},
      {name + ".provenance.jsonl", Sha256Hex(provenance)},
  };

  RETURN_IF_ERROR(WriteFileAtomic(dir / (name + ".input.txt"), input_text));
  RETURN_IF_ERROR(WriteFileAtomic(dir / (name + ".output.txt"), output_text));
  RETURN_IF_ERROR(
      WriteFileAtomic(dir / (name + ".provenance.jsonl"), provenance));
  return WriteFileAtomic(dir / (name + ".manifest.json"),
                         manifest.dump(2) + "\n");
}

absl::Status VerifyTrainingSet(const TrainingSet& set,
                               const KeyboardLayout* layout) {
  for (const auto& pair : set.pairs) {
    ASSIGN_OR_RETURN(std::string replayed,
                     ReplaySegment(pair.output.text, pair.perturbations, layout));
    if (replayed != pair.input.text) {
      return absl::DataLossError(
          absl::StrCat("replay mismatch for segment ", pair.input.index));
    }
  }
  return absl::OkStatus();
}

}  // namespace mtnoise
