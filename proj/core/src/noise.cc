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

#include "mtnoise/noise.h"

#include <set>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "mtnoise/parallel.h"
#include "mtnoise/perturb.h"
#include "mtnoise/status_macros.h"
#include "mtnoise/utf8.h"

namespace mtnoise {

absl::Status ValidateNoiseSpec(const NoiseSpec& spec) {
  if (!(spec.p >= 0.0 && spec.p <= 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("noise level p must be in [0, 1], got ", spec.p));
  }
  if (spec.type == NoiseType::kKey && spec.layout == nullptr) {
    return absl::InvalidArgumentError("key noise requires a keyboard layout");
  }
  return absl::OkStatus();
}

absl::StatusOr<NoisedText> NoiseText(std::string_view text,
                                     int64_t segment_index, uint64_t seed,
                                     const TokenSelector& select,
                                     const KeyboardLayout* layout) {
  ASSIGN_OR_RETURN(std::u32string decoded, DecodeUtf8(text));
  Tokenization tokens = Tokenize(decoded);
  NoisedText out;
  for (size_t t = 0; t < tokens.tokens.size(); ++t) {
    RandomStream rng = DeriveTokenStream(seed, static_cast<uint64_t>(segment_index), t);
    const std::optional<NoiseType> type = select(rng);
    if (!type) continue;
    if (*type == NoiseType::kKey && layout == nullptr) {
      return absl::InvalidArgumentError("key noise requires a keyboard layout");
    }
    PerturbationRecord record;
    record.token_index = static_cast<int32_t>(t);
    record.type = *type;
    std::optional<Perturbation> result =
        Perturb(*type, tokens.tokens[t].token, rng, layout);
    if (result) {
      record.char_position = static_cast<int32_t>(result->position);
      record.detail = EncodeUtf8(result->detail);
      record.applied = true;
      tokens.tokens[t].token = std::move(result->token);
    } else {
      record.applied = false;
    }
    out.records.push_back(std::move(record));
  }
  out.text = EncodeUtf8(tokens.Join());
  return out;
}

absl::StatusOr<NoisedText> NoiseSegment(const Segment& segment,
                                        const NoiseSpec& spec) {
  RETURN_IF_ERROR(ValidateNoiseSpec(spec));
  const double p = spec.p;
  const NoiseType type = spec.type;
  return NoiseText(
      segment.text, segment.index, spec.seed,
      [p, type](RandomStream& rng) -> std::optional<NoiseType> {
        if (rng.Bernoulli(p)) return type;
        return std::nullopt;
      },
      spec.layout);
}

NoiseProvenance MakeProvenance(const NoiseSpec& spec, std::string base_id) {
  NoiseProvenance prov;
  prov.base = std::move(base_id);
  prov.kind = std::string(NoiseTypeName(spec.type));
  prov.p = spec.p;
  prov.seed = spec.seed;
  if (spec.layout != nullptr) {
    prov.layout = spec.layout->name();
    prov.layout_sha256 = spec.layout->sha256();
  }
  return prov;
}

absl::StatusOr<NoisedCorpus> NoiseCorpus(const std::vector<Segment>& segments,
                                         const NoiseSpec& spec,
                                         std::string base_id, int jobs) {
  RETURN_IF_ERROR(ValidateNoiseSpec(spec));
  RETURN_IF_ERROR(ValidateSegments(segments));
  NoisedCorpus corpus;
  corpus.noise = MakeProvenance(spec, std::move(base_id));
  corpus.segments.resize(segments.size());
  std::vector<absl::Status> errors(segments.size());
  ParallelFor(segments.size(), jobs, [&](size_t i) {
    auto noised = NoiseSegment(segments[i], spec);
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

absl::StatusOr<std::vector<NoisedCorpus>> MakeNoiseLadder(
    const std::vector<Segment>& segments, NoiseType type,
    const KeyboardLayout* layout, uint64_t seed, const std::string& base_id,
    int jobs) {
  std::vector<NoisedCorpus> ladder;
  ladder.reserve(kLadderLevels);
  for (int level = 1; level <= kLadderLevels; ++level) {
    NoiseSpec spec{type, LadderLevelP(level), LadderLevelSeed(seed, level),
                   layout};
    ASSIGN_OR_RETURN(NoisedCorpus corpus,
                     NoiseCorpus(segments, spec, base_id, jobs));
    ladder.push_back(std::move(corpus));
  }
  return ladder;
}

absl::StatusOr<std::string> ReplaySegment(
    std::string_view base_text, const std::vector<PerturbationRecord>& records,
    const KeyboardLayout* layout) {
  ASSIGN_OR_RETURN(std::u32string decoded, DecodeUtf8(base_text));
  Tokenization tokens = Tokenize(decoded);
  std::set<int32_t> touched;
  for (const auto& record : records) {
    if (record.token_index < 0 ||
        static_cast<size_t>(record.token_index) >= tokens.tokens.size()) {
      return absl::OutOfRangeError(absl::StrCat(
          "record references token ", record.token_index, " but segment has ",
          tokens.tokens.size(), " tokens"));
    }
    if (!touched.insert(record.token_index).second) {
      return absl::FailedPreconditionError(absl::StrCat(
          "token ", record.token_index, " carries more than one record"));
    }
    auto& token = tokens.tokens[record.token_index].token;
    ASSIGN_OR_RETURN(token, ReplayRecord(token, record, layout));
  }
  return EncodeUtf8(tokens.Join());
}

absl::Status VerifyReplay(const std::vector<Segment>& base,
                          const NoisedCorpus& noised) {
  const KeyboardLayout* layout = nullptr;
  if (noised.noise.layout) {
    ASSIGN_OR_RETURN(layout, ResolveLayout(*noised.noise.layout));
    if (noised.noise.layout_sha256 &&
        *noised.noise.layout_sha256 != layout->sha256()) {
      return absl::FailedPreconditionError(absl::StrCat(
          "layout '", *noised.noise.layout, "' checksum differs from provenance"));
    }
  }
  if (base.size() != noised.segments.size()) {
    return absl::InvalidArgumentError(
        absl::StrCat("base has ", base.size(), " segments, noised corpus has ",
                     noised.segments.size()));
  }
  for (size_t i = 0; i < base.size(); ++i) {
    const NoisedSegment& seg = noised.segments[i];
    if (seg.index != base[i].index) {
      return absl::InvalidArgumentError(
          absl::StrCat("segment index mismatch at position ", i));
    }
    ASSIGN_OR_RETURN(std::string replayed,
                     ReplaySegment(base[i].text, seg.perturbations, layout));
    if (replayed != seg.text) {
      return absl::DataLossError(
          absl::StrCat("replay of segment ", seg.index, " gives '", replayed,
                       "' but noised text is '", seg.text, "'"));
    }
  }
  return absl::OkStatus();
}

NoiseStats ComputeNoiseStats(const std::vector<Segment>& base,
                             const NoisedCorpus& noised) {
  NoiseStats stats;
  for (const auto& seg : base) {
    stats.tokens += static_cast<int64_t>(SplitWhitespace(seg.text).size());
  }
  for (const auto& seg : noised.segments) {
    for (const auto& r : seg.perturbations) {
      ++stats.attempted;
      if (r.applied) ++stats.applied;
      ++stats.attempted_by_type[std::string(NoiseTypeName(r.type))];
    }
  }
  return stats;
}

}  // namespace mtnoise
