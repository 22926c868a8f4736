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

#ifndef MTNOISE_EXPERIMENT_H_
#define MTNOISE_EXPERIMENT_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "mtnoise/analysis.h"
#include "mtnoise/bleu.h"
#include "mtnoise/chrf.h"
#include "mtnoise/corpus.h"
#include "mtnoise/external.h"
#include "mtnoise/report.h"

namespace mtnoise {

// One input corpus of an experiment: the clean source or one ladder level.
struct CorpusVariant {
  std::string id;    // "<corpus>.clean" or "<corpus>.<type>.pNN"
  std::string base;  // id of the clean corpus
  std::string noise_type = "clean";
  double p = 0.0;
  std::optional<NoiseProvenance> noise;
  std::vector<Segment> source;
};

std::string LadderCorpusId(std::string_view base, NoiseType type, int level);
std::string CleanCorpusId(std::string_view base);

// The output of one system on one corpus variant. Outputs are persisted
// before any scoring.
struct RunRecord {
  std::string system;
  std::string corpus_id;
  std::vector<std::string> outputs;
  // Intermediate corrector output and its chrF against the clean source
  // (correction pipelines only).
  std::optional<std::vector<std::string>> corrected;
  std::optional<double> intrinsic_chrf;
  int exit_status = 0;
  double wall_seconds = 0.0;
  bool resumed = false;
};

// Shared state of the runs of one experiment directory.
struct RunContext {
  std::filesystem::path experiment_dir;
  LanguagePair languages;
  int jobs = 1;
  bool record_timing = false;
  // Incremented once per spawned external process.
  int64_t external_calls = 0;

  std::filesystem::path RunDir(std::string_view system,
                               std::string_view corpus_id) const;
};

// Translates one variant, or reuses a completed run whose recorded input
// and command fingerprints match. A failed run leaves output.partial.txt
// behind and returns the error.
absl::StatusOr<RunRecord> TranslateCorpus(RunContext& ctx,
                                          const ExternalSystemSpec& translator,
                                          const CorpusVariant& variant);

// One run per variant, in the order given.
absl::StatusOr<std::vector<RunRecord>> TranslateLadder(
    RunContext& ctx, const ExternalSystemSpec& translator,
    const std::vector<CorpusVariant>& variants);

// Corrector output feeds the translator. Both outputs are persisted
// (corrected.txt, output.txt) and the corrector's chrF against the clean
// source is recorded.
absl::StatusOr<RunRecord> CorrectionPipeline(
    RunContext& ctx, std::string_view pipeline_id,
    const ExternalSystemSpec& corrector, const ExternalSystemSpec& translator,
    const CorpusVariant& variant, const std::vector<Segment>& clean_source);

enum class SourcePolicy { kCleanSource, kActualSource };

absl::StatusOr<SourcePolicy> ParseSourcePolicy(std::string_view name);
std::string_view SourcePolicyName(SourcePolicy policy);

// Clean corpora by id, for resolving a noised variant's base.
using CorpusRegistry = std::map<std::string, std::vector<Segment>>;

// Scorer requests for one run. Under kCleanSource the src field is the
// clean base text even when the run translated a noised source. Errors if
// the base corpus is not in the registry.
absl::StatusOr<std::vector<std::string>> BuildScorerRequests(
    const RunRecord& run, const CorpusVariant& variant, SourcePolicy policy,
    const CorpusRegistry& registry,
    const std::optional<std::vector<std::string>>& references);

// Scores a run with an external scorer and writes scores/<metric>.tsv.
// Resumes like TranslateCorpus.
absl::StatusOr<ScoreFile> ScoreRun(
    RunContext& ctx, const ExternalSystemSpec& scorer, std::string_view metric,
    const RunRecord& run, const CorpusVariant& variant, SourcePolicy policy,
    const CorpusRegistry& registry,
    const std::optional<std::vector<std::string>>& references);

// ScoreRun over several runs (parallel to `variants`).
absl::StatusOr<std::vector<ScoreFile>> ScoreRuns(
    RunContext& ctx, const ExternalSystemSpec& scorer, std::string_view metric,
    const std::vector<RunRecord>& runs,
    const std::vector<CorpusVariant>& variants, SourcePolicy policy,
    const CorpusRegistry& registry,
    const std::optional<std::vector<std::string>>& references);

struct OracleSelection {
  std::vector<std::string> outputs;
  // true where the b side was chosen.
  std::vector<bool> chose_b;
  ScoreFile scores;  // elementwise max
};

// Per segment, the output with the strictly higher score; ties keep a (the
// baseline). Outputs are indexed by segment index.
absl::StatusOr<OracleSelection> OracleSelect(
    const ScoreFile& scores_a, const ScoreFile& scores_b,
    const std::vector<std::string>& outputs_a,
    const std::vector<std::string>& outputs_b);

// Native metrics.
enum class MetricKind { kChrf, kBleu, kExternal };
enum class ReferenceKind { kTarget, kCleanSource, kCleanOutput, kNone };

absl::StatusOr<ReferenceKind> ParseReferenceKind(std::string_view name);

struct MetricSpec {
  std::string name;
  MetricKind kind = MetricKind::kChrf;
  ReferenceKind reference = ReferenceKind::kTarget;
  std::string scorer;  // external only
  SourcePolicy policy = SourcePolicy::kCleanSource;
  ChrfParams chrf;
  BleuParams bleu;
};

// Sentence-level scores plus the corpus-level score of a native metric.
absl::StatusOr<ScoreFile> ScoreNative(const MetricSpec& metric,
                                      std::string_view system,
                                      const std::vector<std::string>& hyps,
                                      const std::vector<std::string>& refs,
                                      int jobs = 1);

struct CorpusSpec {
  std::string id;
  std::filesystem::path source;
  std::optional<std::filesystem::path> target;
};

struct PipelineSpec {
  std::string id;
  std::string corrector;
  std::string translator;
};

struct OracleSpec {
  std::string id;  // defaults to oracle.<baseline>.<challenger>
  std::string baseline;
  std::string challenger;
  std::string metric;
};

// A declarative experiment: corpora, ladders, systems, metrics, pipelines,
// oracle comparisons. Commands may reference ${VAR} environment variables
// (${MANIFEST_DIR} defaults to the manifest's directory);
// relative corpus paths resolve against the manifest's directory.
struct ExperimentSpec {
  std::string name;
  uint64_t seed = 0;
  LanguagePair languages;
  std::vector<CorpusSpec> corpora;
  std::vector<NoiseType> noise_types;
  std::string layout;  // required when key noise is requested
  std::vector<int> levels;
  std::vector<ExternalSystemSpec> systems;
  std::vector<MetricSpec> metrics;
  std::vector<PipelineSpec> pipelines;
  std::vector<OracleSpec> oracles;
  double tie_epsilon = 0.0;
};

using EnvLookup = std::function<std::optional<std::string>(const std::string&)>;

// Environment lookup through getenv.
EnvLookup ProcessEnv();

absl::StatusOr<ExperimentSpec> ParseExperimentSpec(
    std::string_view json, const std::filesystem::path& base_dir,
    const EnvLookup& env);
absl::StatusOr<ExperimentSpec> LoadExperimentSpec(
    const std::filesystem::path& path, const EnvLookup& env);

struct ExperimentOptions {
  std::filesystem::path runs_root = "runs";
  int jobs = 1;
  bool record_timing = false;
};

struct ExperimentSummary {
  int runs_executed = 0;
  int runs_resumed = 0;
  int64_t external_calls = 0;
  std::filesystem::path experiment_dir;
};

// Noise ladders -> translation and pipelines -> oracle selection ->
// scoring -> report, all under <runs_root>/<name>/.
absl::StatusOr<ExperimentSummary> RunExperiment(const ExperimentSpec& spec,
                                                const ExperimentOptions& options);

// Rebuilds trajectories from the run directories under `experiment_dir`
// (<system>/<corpus-id>/{run.json, scores/*.tsv}). A missing or empty
// directory yields no trajectories. With more than one base corpus the
// system column reads <system>@<corpus>.
absl::StatusOr<std::vector<Trajectory>> CollectTrajectories(
    const std::filesystem::path& experiment_dir);

// Win/loss of `challenger` over `baseline` at every level found in the run
// directories, per noise type.
absl::StatusOr<std::vector<WinLossEntry>> CollectWinLoss(
    const std::filesystem::path& experiment_dir, std::string_view baseline,
    std::string_view challenger, std::string_view metric, double tie_epsilon);

}  // namespace mtnoise

#endif  // MTNOISE_EXPERIMENT_H_
