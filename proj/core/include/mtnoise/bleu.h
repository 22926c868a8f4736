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

#ifndef MTNOISE_BLEU_H_
#define MTNOISE_BLEU_H_

#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"

namespace mtnoise {

// Tokenization applied before n-gram extraction.
//   kWhitespace:   split on Unicode whitespace
//   kChar:         every non-whitespace code point is a token
//   kPretokenized: text already segmented by an external tool (for
//                  spBLEU, the flores200 SentencePiece model); split on
//                  ASCII spaces only
enum class BleuTokenizer { kWhitespace, kChar, kPretokenized };
enum class BleuSmoothing { kNone, kExp };

struct BleuParams {
  int max_order = 4;
  BleuSmoothing smoothing = BleuSmoothing::kExp;
  BleuTokenizer tokenizer = BleuTokenizer::kWhitespace;
  // Truncate the geometric mean at the highest order the hypothesis has
  // n-grams for (sentence-level use).
  bool effective_order = false;
};

absl::Status ValidateBleuParams(const BleuParams& params);
absl::StatusOr<BleuTokenizer> ParseBleuTokenizer(std::string_view name);

struct BleuStats {
  std::vector<double> correct;     // clipped matches per order
  std::vector<double> total;       // hypothesis n-grams per order
  std::vector<double> ref_total;   // reference n-grams per order
  double hyp_len = 0;
  double ref_len = 0;

  void Add(const BleuStats& other);
};

std::vector<std::string> BleuTokenize(std::string_view text,
                                      BleuTokenizer tokenizer);

BleuStats BleuSentenceStats(std::string_view hypothesis,
                            std::string_view reference,
                            const BleuParams& params);

// Score in [0, 100] with brevity penalty. Orders for which neither side has
// any n-gram are dropped from the geometric mean, so identical corpora
// always score exactly 100 (both sides empty included).
double BleuFromStats(const BleuStats& stats, const BleuParams& params);

double SentenceBleu(std::string_view hypothesis, std::string_view reference,
                    const BleuParams& params);

// Corpus BLEU. Errors on length mismatch and on an empty corpus.
absl::StatusOr<double> CorpusBleu(const std::vector<std::string>& hypotheses,
                                  const std::vector<std::string>& references,
                                  const BleuParams& params = {}, int jobs = 1);

}  // namespace mtnoise

#endif  // MTNOISE_BLEU_H_
