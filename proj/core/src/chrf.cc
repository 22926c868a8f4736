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

#include "mtnoise/chrf.h"

#include <algorithm>
#include <string_view>
#include <type_traits>
#include <vector>
#include <unordered_map>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "mtnoise/parallel.h"
#include "mtnoise/utf8.h"

namespace mtnoise {
namespace {

constexpr std::u32string_view kPunctuation =
    U"!\"#$%&'()*+,-./:;<=>?@[\\]^_`{|}~";

bool IsPunct(char32_t c) { return kPunctuation.find(c) != std::u32string_view::npos; }

// Counts matches between two sorted n-gram lists.
template <typename T>
double SortedMatches(const std::vector<T>& hyp, const std::vector<T>& ref) {
  double n_match = 0;
  size_t i = 0, j = 0;
  while (i < hyp.size() && j < ref.size()) {
    if (hyp[i] < ref[j]) {
      ++i;
    } else if (ref[j] < hyp[i]) {
      ++j;
    } else {
      size_t ni = i, nj = j;
      while (ni < hyp.size() && hyp[ni] == hyp[i]) ++ni;
      while (nj < ref.size() && ref[nj] == ref[j]) ++nj;
      n_match += static_cast<double>(std::min(ni - i, nj - j));
      i = ni;
      j = nj;
    }
  }
  return n_match;
}

// Code points take 21 bits, so n-grams up to this order pack losslessly
// into a 128-bit key.
constexpr size_t kMaxPackedOrder = 6;
using PackedGram = unsigned __int128;

template <typename T>
void CollectCharGrams(std::u32string_view line, size_t order,
                      std::vector<T>& grams) {
  grams.clear();
  if (line.size() < order) return;
  grams.reserve(line.size() - order + 1);
  for (size_t i = 0; i + order <= line.size(); ++i) {
    if constexpr (std::is_same_v<T, PackedGram>) {
      PackedGram key = 0;
      for (size_t k = 0; k < order; ++k) key = (key << 21) | line[i + k];
      grams.push_back(key);
    } else {
      grams.push_back(line.substr(i, order));
    }
  }
  std::sort(grams.begin(), grams.end());
}

// Hypothesis, reference and matched n-gram counts of one character order.
// Hypothesis n-grams are not counted when the reference has none.
template <typename T>
void AddCharOrderStats(std::u32string_view hyp, std::u32string_view ref,
                       size_t order, double* out) {
  std::vector<T> hyp_grams, ref_grams;
  CollectCharGrams(hyp, order, hyp_grams);
  CollectCharGrams(ref, order, ref_grams);
  out[0] = ref_grams.empty() ? 0.0 : static_cast<double>(hyp_grams.size());
  out[1] = static_cast<double>(ref_grams.size());
  out[2] = SortedMatches(hyp_grams, ref_grams);
}

// Words with one leading or trailing ASCII punctuation mark split off,
// as chrF++ does.
std::vector<std::u32string> WordsForChrf(std::u32string_view line) {
  std::vector<std::u32string> out;
  for (auto& w : SplitWhitespace(line)) {
    if (w.size() == 1) {
      out.push_back(std::move(w));
    } else if (IsPunct(w.back())) {
      out.push_back(w.substr(0, w.size() - 1));
      out.push_back(w.substr(w.size() - 1));
    } else if (IsPunct(w.front())) {
      out.push_back(w.substr(0, 1));
      out.push_back(w.substr(1));
    } else {
      out.push_back(std::move(w));
    }
  }
  return out;
}

// Word n-grams keyed by their words joined with U+0001, which cannot occur
// inside a whitespace-free word of decoded text we care about.
std::unordered_map<std::u32string, int> WordNgrams(
    const std::vector<std::u32string>& words, int order) {
  std::unordered_map<std::u32string, int> counts;
  if (static_cast<int>(words.size()) < order) return counts;
  for (size_t i = 0; i + order <= words.size(); ++i) {
    std::u32string key;
    for (int k = 0; k < order; ++k) {
      if (k) key.push_back(U'\x01');
      key += words[i + k];
    }
    ++counts[key];
  }
  return counts;
}

template <typename Map>
void AddOrderStats(const Map& hyp, const Map& ref, double* out) {
  double n_hyp = 0, n_ref = 0, n_match = 0;
  for (const auto& [gram, count] : hyp) {
    n_hyp += count;
    if (auto it = ref.find(gram); it != ref.end()) {
      n_match += std::min(count, it->second);
    }
  }
  for (const auto& [gram, count] : ref) n_ref += count;
  out[0] = ref.empty() ? 0.0 : n_hyp;
  out[1] = n_ref;
  out[2] = n_match;
}

std::u32string Prepare(std::string_view text, bool whitespace) {
  auto decoded = DecodeUtf8(text);
  std::u32string line = decoded.ok() ? *std::move(decoded) : std::u32string();
  if (whitespace) return line;
  std::u32string stripped;
  stripped.reserve(line.size());
  for (char32_t c : line) {
    if (!IsWhitespace(c)) stripped.push_back(c);
  }
  return stripped;
}

}  // namespace

absl::Status ValidateChrfParams(const ChrfParams& params) {
  if (params.char_order < 0 || params.word_order < 0) {
    return absl::InvalidArgumentError("chrF n-gram orders must be >= 0");
  }
  if (params.char_order + params.word_order == 0) {
    return absl::InvalidArgumentError("chrF needs at least one n-gram order");
  }
  if (!(params.beta > 0)) {
    return absl::InvalidArgumentError("chrF beta must be positive");
  }
  return absl::OkStatus();
}

void ChrfStats::Add(const ChrfStats& other) {
  if (values.empty()) values.assign(other.values.size(), 0.0);
  for (size_t i = 0; i < values.size(); ++i) values[i] += other.values[i];
}

ChrfStats ChrfSentenceStats(std::string_view hypothesis,
                            std::string_view reference,
                            const ChrfParams& params) {
  ChrfStats stats;
  stats.values.assign(3 * (params.char_order + params.word_order), 0.0);
  const std::u32string hyp = Prepare(hypothesis, params.whitespace);
  const std::u32string ref = Prepare(reference, params.whitespace);
  for (int n = 1; n <= params.char_order; ++n) {
    const auto order = static_cast<size_t>(n);
    double* out = &stats.values[3 * (n - 1)];
    if (order <= kMaxPackedOrder) {
      AddCharOrderStats<PackedGram>(hyp, ref, order, out);
    } else {
      AddCharOrderStats<std::u32string_view>(hyp, ref, order, out);
    }
  }
  if (params.word_order > 0) {
    auto hyp32 = DecodeUtf8(hypothesis);
    auto ref32 = DecodeUtf8(reference);
    const auto hyp_words = WordsForChrf(hyp32.ok() ? *hyp32 : U"");
    const auto ref_words = WordsForChrf(ref32.ok() ? *ref32 : U"");
    for (int n = 1; n <= params.word_order; ++n) {
      AddOrderStats(WordNgrams(hyp_words, n), WordNgrams(ref_words, n),
                    &stats.values[3 * (params.char_order + n - 1)]);
    }
  }
  return stats;
}

double ChrfFromStats(const ChrfStats& stats, const ChrfParams& params) {
  constexpr double kEps = 1e-16;
  const int orders = params.char_order + params.word_order;
  const double factor = params.beta * params.beta;

  bool all_zero = true;
  for (double v : stats.values) all_zero = all_zero && v == 0.0;
  if (all_zero) return 100.0;

  double score = 0.0;
  double avg_prec = 0.0;
  double avg_rec = 0.0;
  int effective = 0;
  for (int i = 0; i < orders; ++i) {
    const double n_hyp = stats.values[3 * i];
    const double n_ref = stats.values[3 * i + 1];
    const double n_match = stats.values[3 * i + 2];
    const double prec = n_hyp > 0 ? n_match / n_hyp : kEps;
    const double rec = n_ref > 0 ? n_match / n_ref : kEps;
    const double denom = factor * prec + rec;
    score += denom > 0 ? (1 + factor) * prec * rec / denom : kEps;
    if (n_hyp > 0 && n_ref > 0) {
      avg_prec += prec;
      avg_rec += rec;
      ++effective;
    }
  }
  if (!params.effective_order) return 100.0 * score / orders;
  if (effective == 0) return 0.0;
  avg_prec /= effective;
  avg_rec /= effective;
  if (avg_prec + avg_rec == 0.0) return 0.0;
  return 100.0 * (1 + factor) * avg_prec * avg_rec /
         (factor * avg_prec + avg_rec);
}

double SentenceChrf(std::string_view hypothesis, std::string_view reference,
                    const ChrfParams& params) {
  return ChrfFromStats(ChrfSentenceStats(hypothesis, reference, params), params);
}

absl::StatusOr<double> CorpusChrf(const std::vector<std::string>& hypotheses,
                                  const std::vector<std::string>& references,
                                  const ChrfParams& params, int jobs) {
  if (auto s = ValidateChrfParams(params); !s.ok()) return s;
  if (hypotheses.size() != references.size()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "chrF: ", hypotheses.size(), " hypotheses vs ", references.size(),
        " references"));
  }
  std::vector<ChrfStats> per_segment(hypotheses.size());
  ParallelFor(hypotheses.size(), jobs, [&](size_t i) {
    per_segment[i] = ChrfSentenceStats(hypotheses[i], references[i], params);
  });
  ChrfStats total;
  total.values.assign(3 * (params.char_order + params.word_order), 0.0);
  for (const auto& s : per_segment) total.Add(s);
  return ChrfFromStats(total, params);
}

}  // namespace mtnoise
