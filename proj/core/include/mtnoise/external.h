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

#ifndef MTNOISE_EXTERNAL_H_
#define MTNOISE_EXTERNAL_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"

namespace mtnoise {

enum class SystemKind { kTranslator, kCorrector, kScorer };

std::string_view SystemKindName(SystemKind kind);
absl::StatusOr<SystemKind> ParseSystemKind(std::string_view name);

// A model backend reached over a child process's stdin/stdout. The child
// reads one JSON request per line and answers each with exactly one line,
// in order: text for translators and correctors, a decimal for scorers.
struct ExternalSystemSpec {
  std::string id;
  SystemKind kind = SystemKind::kTranslator;
  std::vector<std::string> command;
  // Seconds without a response line (or, after the last one, without the
  // child exiting) before the child is killed.
  double timeout_seconds = 300.0;
  // Requests written but not yet answered; 0 means unbounded. Backends that
  // read all input before answering need 0 or a window >= corpus size.
  int batch_size = 256;
};

absl::Status ValidateExternalSpec(const ExternalSystemSpec& spec);

// Request lines. Keys appear in the documented order.
std::string TranslatorRequest(std::string_view src, std::string_view src_lang,
                              std::string_view tgt_lang);
std::string CorrectorRequest(std::string_view src, std::string_view lang);
std::string ScorerRequest(std::string_view src, std::string_view mt,
                          const std::optional<std::string>& ref);

struct ExternalRun {
  absl::Status status;
  // Response lines received, even when the run failed.
  std::vector<std::string> responses;
  int exit_code = 0;
  double wall_seconds = 0.0;
};

// Spawns the command, streams the requests and collects the responses.
// Fails on spawn errors, nonzero exit, timeout, a response count different
// from the request count (naming the first offset without a matching
// line), or a response containing invalid UTF-8.
ExternalRun RunExternal(const ExternalSystemSpec& spec,
                        const std::vector<std::string>& requests);

// Parses scorer responses; the error names the offending offset.
absl::StatusOr<std::vector<double>> ParseScoreResponses(
    const std::vector<std::string>& responses);

}  // namespace mtnoise

#endif  // MTNOISE_EXTERNAL_H_
