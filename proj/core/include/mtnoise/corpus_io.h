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

#ifndef MTNOISE_CORPUS_IO_H_
#define MTNOISE_CORPUS_IO_H_

#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "mtnoise/corpus.h"

namespace mtnoise {

// Plain text: one segment per LF-terminated line. A missing final newline
// is tolerated; empty lines become empty segments. Invalid UTF-8 is
// rejected with the byte offset of the offending sequence.
absl::StatusOr<std::vector<Segment>> ParsePlainCorpus(std::string_view contents);
absl::StatusOr<std::vector<Segment>> LoadPlainCorpus(
    const std::filesystem::path& path);

std::string FormatPlainCorpus(const std::vector<Segment>& segments);
absl::Status WritePlainCorpus(const std::vector<Segment>& segments,
                              const std::filesystem::path& path);

absl::StatusOr<ParallelCorpus> LoadParallelCorpus(
    const std::filesystem::path& source_path,
    const std::filesystem::path& target_path, LanguagePair languages);

// Raw/normalized sentence pair from a lexical-normalization corpus.
struct LexNormPair {
  Segment raw;
  Segment normalized;
};

// Lexical-normalization format: one `raw<TAB>normalized` token per line,
// sentences separated by blank lines. Empty normalizations are deletions
// and are omitted from the normalized side; multi-word normalizations are
// kept with their internal spaces.
absl::StatusOr<std::vector<LexNormPair>> ParseLexNormCorpus(
    std::string_view contents);
absl::StatusOr<std::vector<LexNormPair>> LoadLexNormCorpus(
    const std::filesystem::path& path);

// Noised corpora as JSONL, one object per segment:
//   {"index", "text", "noise": {...}, "perturbations": [...]}
// An empty corpus serializes to an empty file.
std::string FormatNoisedJsonl(const NoisedCorpus& corpus);
absl::StatusOr<NoisedCorpus> ParseNoisedJsonl(std::string_view contents);
absl::Status WriteNoisedJsonl(const NoisedCorpus& corpus,
                              const std::filesystem::path& path);
absl::StatusOr<NoisedCorpus> ReadNoisedJsonl(const std::filesystem::path& path);

// Score files: TSV `index<TAB>score`. Lines starting with '#' are comments;
// `# system: ...`, `# metric: ...` and `# corpus: ...` are read back into
// the corresponding fields.
std::string FormatScoreFile(const ScoreFile& file);
absl::StatusOr<ScoreFile> ParseScoreFile(std::string_view contents);
absl::Status WriteScoreFile(const ScoreFile& file,
                            const std::filesystem::path& path);
absl::StatusOr<ScoreFile> ReadScoreFile(const std::filesystem::path& path);

// Shortest representation that round-trips through strtod.
std::string FormatDouble(double value);

}  // namespace mtnoise

#endif  // MTNOISE_CORPUS_IO_H_
