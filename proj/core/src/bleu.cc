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

#include "mtnoise/bleu.h"

#include <algorithm>
#include <cmath>
#include <map>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "mtnoise/parallel.h"
#include "mtnoise/utf8.h"

namespace mtnoise {
namespace {

std::map<std::vector<std::string_view>, int> Ngrams(
    const std::vector<std::string>& tokens, int order) {
  std::map<std::vector<std::string_view>, int> counts;
  if (static_cast<int>(tokens.size()) < order) return counts;
  for (size_t i = 0; i + order <= tokens.size(); ++i) {
    std::vector<std::string_view> key(tokens.begin() + i,
                                      tokens.begin() + i + order);
    ++counts[std::move(key)];
  }
  return counts;
}

}  // namespace

absl::Status ValidateBleuParams(const BleuParams& params) {
  if (params.max_order < 1) {
    return absl::InvalidArgumentError("BLEU max order must be >= 1");
  }
  return absl::OkStatus();
}

absl::StatusOr<BleuTokenizer> ParseBleuTokenizer(std::string_view name) {
  if (name == "whitespace" || name == "none") return BleuTokenizer::kWhitespace;
  if (name == "char") return BleuTokenizer::kChar;
  if (name == "pretokenized") return BleuTokenizer::kPretokenized;
  return absl::InvalidArgumentError(
      absl::StrCat("unknown BLEU tokenizer '", std::string(name), "'"));
}

void BleuStats::Add(const BleuStats& other) {
  if (correct.empty()) {
    correct.assign(other.correct.size(), 0.0);
    total.assign(other.total.size(), 0.0);
    ref_total.assign(other.ref_total.size(), 0.0);
  }
  for (size_t i = 0; i < correct.size(); ++i) {
    correct[i] += other.correct[i];
    total[i] += other.total[i];
    ref_total[i] += other.ref_total[i];
  }
  hyp_len += other.hyp_len;
  ref_len += other.ref_len;
}

std::vector<std::string> BleuTokenize(std::string_view text,
                                      BleuTokenizer tokenizer) {
  switch (tokenizer) {
    case BleuTokenizer::kWhitespace:
      return SplitWhitespace(text);
    case BleuTokenizer::kChar: {
      std::vector<std::string> out;
      auto decoded = DecodeUtf8(text);
      if (!decoded.ok()) return out;
      for (char32_t c : *decoded) {
        if (!IsWhitespace(c)) out.push_back(EncodeUtf8(std::u32string(1, c)));
      }
      return out;
    }
    case BleuTokenizer::kPretokenized: {
      std::vector<std::string> out;
      size_t start = 0;
      while (start <= text.size()) {
        size_t sp = text.find(' ', start);
        if (sp == std::string_view::npos) sp = text.size();
        if (sp > start) out.emplace_back(text.substr(start, sp - start));
        start = sp + 1;
      }
      return out;
    }
  }
  return {};
}

BleuStats BleuSentenceStats(std::string_view hypothesis,
                            std::string_view reference,
                            const BleuParams& params) {
  const auto hyp = BleuTokenize(hypothesis, params.tokenizer);
  const auto ref = BleuTokenize(reference, params.tokenizer);
  BleuStats stats;
  stats.correct.assign(params.max_order, 0.0);
  stats.total.assign(params.max_order, 0.0);
  stats.ref_total.assign(params.max_order, 0.0);
  stats.hyp_len = static_cast<double>(hyp.size());
  stats.ref_len = static_cast<double>(ref.size());
  for (int n = 1; n <= params.max_order; ++n) {
    const auto hyp_grams = Ngrams(hyp, n);
    const auto ref_grams = Ngrams(ref, n);
    for (const auto& [gram, count] : hyp_grams) {
      stats.total[n - 1] += count;
      if (auto it = ref_grams.find(gram); it != ref_grams.end()) {
        stats.correct[n - 1] += std::min(count, it->second);
      }
    }
    for (const auto& [gram, count] : ref_grams) stats.ref_total[n - 1] += count;
  }
  return stats;
}

double BleuFromStats(const BleuStats& stats, const BleuParams& params) {
  // Highest order present on either side.
  int orders = 0;
  for (int n = 1; n <= params.max_order; ++n) {
    if (stats.total[n - 1] > 0 || stats.ref_total[n - 1] > 0) orders = n;
  }
  if (orders == 0) return 100.0;
  if (stats.hyp_len == 0) return 0.0;
  // No matching n-gram of any order scores 0 regardless of smoothing.
  if (std::all_of(stats.correct.begin(), stats.correct.end(),
                  [](double c) { return c == 0; })) {
    return 0.0;
  }

  std::vector<double> precisions(orders, 0.0);
  double smooth = 1.0;
  int effective = orders;
  for (int n = 1; n <= orders; ++n) {
    const double total = stats.total[n - 1];
    const double correct = stats.correct[n - 1];
    if (total == 0) break;  // remaining precisions stay 0
    if (params.effective_order) effective = n;
    if (correct == 0) {
      if (params.smoothing == BleuSmoothing::kExp) {
        smooth *= 2;
        precisions[n - 1] = 1.0 / (smooth * total);
      }
    } else {
      precisions[n - 1] = correct / total;
    }
  }

  double log_sum = 0.0;
  for (int n = 0; n < effective; ++n) {
    if (precisions[n] <= 0.0) return 0.0;
    log_sum += std::log(precisions[n]);
  }
  double bp = 1.0;
  if (stats.hyp_len < stats.ref_len) {
    bp = std::exp(1.0 - stats.ref_len / stats.hyp_len);
  }
  return 100.0 * bp * std::exp(log_sum / effective);
}

double SentenceBleu(std::string_view hypothesis, std::string_view reference,
                    const BleuParams& params) {
  return BleuFromStats(BleuSentenceStats(hypothesis, reference, params), params);
}

absl::StatusOr<double> CorpusBleu(const std::vector<std::string>& hypotheses,
                                  const std::vector<std::string>& references,
                                  const BleuParams& params, int jobs) {
  if (auto s = ValidateBleuParams(params); !s.ok()) return s;
  if (hypotheses.size() != references.size()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "BLEU: ", hypotheses.size(), " hypotheses vs ", references.size(),
        " references"));
  }
  if (hypotheses.empty()) {
    return absl::InvalidArgumentError("BLEU of an empty corpus is undefined");
  }
  std::vector<BleuStats> per_segment(hypotheses.size());
  ParallelFor(hypotheses.size(), jobs, [&](size_t i) {
    per_segment[i] = BleuSentenceStats(hypotheses[i], references[i], params);
  });
  BleuStats total;
  for (const auto& s : per_segment) total.Add(s);
  return BleuFromStats(total, params);
}

}  // namespace mtnoise
