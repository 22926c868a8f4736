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

#include "mtnoise/experiment.h"

#include <algorithm>
#include <cstdlib>
#include <set>
#include <tuple>
#include <utility>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"
#include "mtnoise/corpus_io.h"
#include "mtnoise/file_util.h"
#include "mtnoise/keyboard_layout.h"
#include "mtnoise/noise.h"
#include "mtnoise/parallel.h"
#include "mtnoise/quality.h"
#include "mtnoise/status_macros.h"
#include "nlohmann/json.hpp"

namespace mtnoise {
namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

constexpr char kCorporaDir[] = "corpora";
constexpr char kReportDir[] = "report";

std::string JoinLines(const std::vector<std::string>& lines) {
  std::string out;
  for (const auto& line : lines) {
    out += line;
    out.push_back('\n');
  }
  return out;
}

absl::StatusOr<std::vector<std::string>> ReadLines(const fs::path& path) {
  ASSIGN_OR_RETURN(std::vector<Segment> segments, LoadPlainCorpus(path));
  return Texts(segments);
}

std::string Fingerprint(const Json& j) { return Sha256Hex(j.dump()); }

absl::Status Annotate(const absl::Status& status, std::string_view context) {
  return absl::Status(status.code(),
                      absl::StrCat(std::string(context), ": ", status.message()));
}

Json ProvenanceJson(const std::optional<NoiseProvenance>& noise) {
  if (!noise) return nullptr;
  Json j;
  j["base"] = noise->base;
  j["type"] = noise->kind;
  j["p"] = noise->p;
  if (!noise->rates.empty()) j["rates"] = noise->rates;
  j["seed"] = noise->seed;
  j["layout"] = noise->layout ? Json(*noise->layout) : Json(nullptr);
  j["layout_sha256"] =
      noise->layout_sha256 ? Json(*noise->layout_sha256) : Json(nullptr);
  return j;
}

absl::StatusOr<Json> ReadJson(const fs::path& path) {
  ASSIGN_OR_RETURN(std::string text, ReadFile(path));
  Json j = Json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) {
    return absl::DataLossError(absl::StrCat(path.string(), ": invalid JSON"));
  }
  return j;
}

// Common fields of run.json.
Json RunJson(std::string_view system, std::string_view kind,
             const CorpusVariant& variant, const std::string& fingerprint,
             const std::string& input_sha, const RunRecord& record,
             const RunContext& ctx) {
  Json j;
  j["system"] = system;
  j["kind"] = kind;
  j["corpus_id"] = variant.id;
  j["base"] = variant.base;
  j["noise_type"] = variant.noise_type;
  j["p"] = variant.p;
  j["noise"] = ProvenanceJson(variant.noise);
  j["segments"] = record.outputs.size();
  j["fingerprint"] = fingerprint;
  j["input_sha256"] = input_sha;
  j["output_sha256"] = Sha256Hex(JoinLines(record.outputs));
  if (record.corrected) {
    j["corrected_sha256"] = Sha256Hex(JoinLines(*record.corrected));
  }
  if (record.intrinsic_chrf) j["intrinsic_chrf"] = *record.intrinsic_chrf;
  j["exit_status"] = record.exit_status;
  if (ctx.record_timing) j["wall_seconds"] = record.wall_seconds;
  return j;
}

// A completed run with the same fingerprint, or nullopt.
std::optional<RunRecord> TryResume(const fs::path& dir,
                                   std::string_view system,
                                   std::string_view corpus_id,
                                   const std::string& fingerprint) {
  auto meta = ReadJson(dir / "run.json");
  if (!meta.ok() || !meta->is_object() ||
      meta->value("fingerprint", "") != fingerprint) {
    return std::nullopt;
  }
  auto outputs = ReadLines(dir / "output.txt");
  if (!outputs.ok() ||
      Sha256Hex(JoinLines(*outputs)) != meta->value("output_sha256", "")) {
    return std::nullopt;
  }
  RunRecord record;
  record.system = std::string(system);
  record.corpus_id = std::string(corpus_id);
  record.outputs = std::move(*outputs);
  record.resumed = true;
  if (meta->contains("corrected_sha256")) {
    auto corrected = ReadLines(dir / "corrected.txt");
    if (!corrected.ok() || Sha256Hex(JoinLines(*corrected)) !=
                               meta->value("corrected_sha256", "")) {
      return std::nullopt;
    }
    record.corrected = std::move(*corrected);
  }
  if (meta->contains("intrinsic_chrf")) {
    record.intrinsic_chrf = (*meta)["intrinsic_chrf"].get<double>();
  }
  return record;
}

// Runs one external stage; on failure keeps what it got in `partial_name`.
absl::StatusOr<std::vector<std::string>> RunStage(
    RunContext& ctx, const ExternalSystemSpec& spec,
    const std::vector<std::string>& requests, const fs::path& dir,
    const std::string& partial_name, double* wall_seconds) {
  ++ctx.external_calls;
  ExternalRun run = RunExternal(spec, requests);
  *wall_seconds += run.wall_seconds;
  if (!run.status.ok()) {
    (void)WriteFileAtomic(dir / partial_name, JoinLines(run.responses));
    return run.status;
  }
  std::error_code ec;
  fs::remove(dir / partial_name, ec);
  return std::move(run.responses);
}

Json CommandJson(const ExternalSystemSpec& spec) {
  Json j;
  j["id"] = spec.id;
  j["kind"] = std::string(SystemKindName(spec.kind));
  j["command"] = spec.command;
  return j;
}

bool SafeId(std::string_view id) {
  if (id.empty() || id.front() == '.' || id == kCorporaDir || id == kReportDir) {
    return false;
  }
  return std::all_of(id.begin(), id.end(), [](char c) {
    return c != '/' && c != '\\' && c != '\0' && static_cast<unsigned char>(c) >= 0x20;
  });
}

}  // namespace

std::string LadderCorpusId(std::string_view base, NoiseType type, int level) {
  return absl::StrFormat("%s.%s.p%02d", std::string(base),
                         std::string(NoiseTypeName(type)), level * 10);
}

std::string CleanCorpusId(std::string_view base) {
  return absl::StrCat(std::string(base), ".clean");
}

std::filesystem::path RunContext::RunDir(std::string_view system,
                                         std::string_view corpus_id) const {
  return experiment_dir / std::string(system) / std::string(corpus_id);
}

absl::StatusOr<RunRecord> TranslateCorpus(RunContext& ctx,
                                          const ExternalSystemSpec& translator,
                                          const CorpusVariant& variant) {
  if (translator.kind != SystemKind::kTranslator) {
    return absl::InvalidArgumentError(
        absl::StrCat("system '", translator.id, "' is not a translator"));
  }
  const fs::path dir = ctx.RunDir(translator.id, variant.id);
  const std::vector<std::string> inputs = Texts(variant.source);
  const std::string input_sha = Sha256Hex(JoinLines(inputs));
  Json fp;
  fp["translator"] = CommandJson(translator);
  fp["languages"] = {ctx.languages.source, ctx.languages.target};
  fp["input_sha256"] = input_sha;
  const std::string fingerprint = Fingerprint(fp);
  if (auto resumed = TryResume(dir, translator.id, variant.id, fingerprint)) {
    return *std::move(resumed);
  }

  std::vector<std::string> requests;
  requests.reserve(inputs.size());
  for (const auto& src : inputs) {
    requests.push_back(
        TranslatorRequest(src, ctx.languages.source, ctx.languages.target));
  }
  RunRecord record;
  record.system = translator.id;
  record.corpus_id = variant.id;
  auto outputs = RunStage(ctx, translator, requests, dir, "output.partial.txt",
                          &record.wall_seconds);
  if (!outputs.ok()) {
    return Annotate(outputs.status(),
                    absl::StrCat("run ", translator.id, "/", variant.id));
  }
  record.outputs = std::move(*outputs);
  RETURN_IF_ERROR(WriteFileAtomic(dir / "output.txt", JoinLines(record.outputs)));
  const Json meta = RunJson(translator.id, "translator", variant, fingerprint,
                            input_sha, record, ctx);
  RETURN_IF_ERROR(WriteFileAtomic(dir / "run.json", meta.dump(2) + "\n"));
  return record;
}

absl::StatusOr<std::vector<RunRecord>> TranslateLadder(
    RunContext& ctx, const ExternalSystemSpec& translator,
    const std::vector<CorpusVariant>& variants) {
  std::vector<RunRecord> records;
  records.reserve(variants.size());
  for (const auto& variant : variants) {
    ASSIGN_OR_RETURN(RunRecord record, TranslateCorpus(ctx, translator, variant));
    records.push_back(std::move(record));
  }
  return records;
}

absl::StatusOr<RunRecord> CorrectionPipeline(
    RunContext& ctx, std::string_view pipeline_id,
    const ExternalSystemSpec& corrector, const ExternalSystemSpec& translator,
    const CorpusVariant& variant, const std::vector<Segment>& clean_source) {
  if (corrector.kind != SystemKind::kCorrector) {
    return absl::InvalidArgumentError(
        absl::StrCat("system '", corrector.id, "' is not a corrector"));
  }
  if (translator.kind != SystemKind::kTranslator) {
    return absl::InvalidArgumentError(
        absl::StrCat("system '", translator.id, "' is not a translator"));
  }
  if (clean_source.size() != variant.source.size()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "pipeline ", std::string(pipeline_id), ": clean source has ", clean_source.size(),
        " segments, input has ", variant.source.size()));
  }
  const fs::path dir = ctx.RunDir(pipeline_id, variant.id);
  const std::vector<std::string> inputs = Texts(variant.source);
  const std::vector<std::string> clean = Texts(clean_source);
  const std::string input_sha = Sha256Hex(JoinLines(inputs));
  Json fp;
  fp["corrector"] = CommandJson(corrector);
  fp["translator"] = CommandJson(translator);
  fp["languages"] = {ctx.languages.source, ctx.languages.target};
  fp["input_sha256"] = input_sha;
  fp["clean_sha256"] = Sha256Hex(JoinLines(clean));
  const std::string fingerprint = Fingerprint(fp);
  if (auto resumed = TryResume(dir, pipeline_id, variant.id, fingerprint)) {
    return *std::move(resumed);
  }

  const std::string context = absl::StrCat("run ", std::string(pipeline_id), "/", variant.id);
  RunRecord record;
  record.system = std::string(pipeline_id);
  record.corpus_id = variant.id;
  std::vector<std::string> requests;
  requests.reserve(inputs.size());
  for (const auto& src : inputs) {
    requests.push_back(CorrectorRequest(src, ctx.languages.source));
  }
  auto corrected = RunStage(ctx, corrector, requests, dir,
                            "corrected.partial.txt", &record.wall_seconds);
  if (!corrected.ok()) return Annotate(corrected.status(), context);
  RETURN_IF_ERROR(WriteFileAtomic(dir / "corrected.txt", JoinLines(*corrected)));

  requests.clear();
  for (const auto& src : *corrected) {
    requests.push_back(
        TranslatorRequest(src, ctx.languages.source, ctx.languages.target));
  }
  auto outputs = RunStage(ctx, translator, requests, dir, "output.partial.txt",
                          &record.wall_seconds);
  if (!outputs.ok()) return Annotate(outputs.status(), context);
  record.outputs = std::move(*outputs);
  if (!clean.empty()) {
    ASSIGN_OR_RETURN(double chrf, CorpusChrf(*corrected, clean, {}, ctx.jobs));
    record.intrinsic_chrf = chrf;
  }
  record.corrected = std::move(*corrected);
  RETURN_IF_ERROR(WriteFileAtomic(dir / "output.txt", JoinLines(record.outputs)));
  const Json meta = RunJson(pipeline_id, "pipeline", variant, fingerprint,
                            input_sha, record, ctx);
  RETURN_IF_ERROR(WriteFileAtomic(dir / "run.json", meta.dump(2) + "\n"));
  return record;
}

absl::StatusOr<SourcePolicy> ParseSourcePolicy(std::string_view name) {
  if (name == "clean_source") return SourcePolicy::kCleanSource;
  if (name == "actual_source") return SourcePolicy::kActualSource;
  return absl::InvalidArgumentError(
      absl::StrCat("unknown source policy '", std::string(name), "'"));
}

std::string_view SourcePolicyName(SourcePolicy policy) {
  return policy == SourcePolicy::kCleanSource ? "clean_source"
                                              : "actual_source";
}

absl::StatusOr<std::vector<std::string>> BuildScorerRequests(
    const RunRecord& run, const CorpusVariant& variant, SourcePolicy policy,
    const CorpusRegistry& registry,
    const std::optional<std::vector<std::string>>& references) {
  std::vector<std::string> sources;
  if (policy == SourcePolicy::kCleanSource) {
    auto it = registry.find(variant.base);
    if (it == registry.end()) {
      return absl::NotFoundError(absl::StrCat(
          "clean source policy: base corpus '", variant.base,
          "' of ", variant.id, " is not available"));
    }
    sources = Texts(it->second);
  } else {
    sources = Texts(variant.source);
  }
  if (sources.size() != run.outputs.size()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "run ", run.system, "/", run.corpus_id, " has ", run.outputs.size(),
        " outputs for ", sources.size(), " source segments"));
  }
  if (references && references->size() != run.outputs.size()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "run ", run.system, "/", run.corpus_id, ": ", references->size(),
        " references for ", run.outputs.size(), " outputs"));
  }
  std::vector<std::string> requests;
  requests.reserve(sources.size());
  for (size_t i = 0; i < sources.size(); ++i) {
    requests.push_back(ScorerRequest(
        sources[i], run.outputs[i],
        references ? std::optional<std::string>((*references)[i]) : std::nullopt));
  }
  return requests;
}

absl::StatusOr<ScoreFile> ScoreRun(
    RunContext& ctx, const ExternalSystemSpec& scorer, std::string_view metric,
    const RunRecord& run, const CorpusVariant& variant, SourcePolicy policy,
    const CorpusRegistry& registry,
    const std::optional<std::vector<std::string>>& references) {
  if (scorer.kind != SystemKind::kScorer) {
    return absl::InvalidArgumentError(
        absl::StrCat("system '", scorer.id, "' is not a scorer"));
  }
  ASSIGN_OR_RETURN(std::vector<std::string> requests,
                   BuildScorerRequests(run, variant, policy, registry, references));
  const fs::path scores_dir = ctx.RunDir(run.system, run.corpus_id) / "scores";
  const fs::path tsv = scores_dir / absl::StrCat(std::string(metric), ".tsv");
  const fs::path meta_path =
      scores_dir / absl::StrCat(std::string(metric), ".meta.json");
  Json fp;
  fp["scorer"] = CommandJson(scorer);
  fp["requests_sha256"] = Sha256Hex(JoinLines(requests));
  const std::string fingerprint = Fingerprint(fp);

  if (auto meta = ReadJson(meta_path);
      meta.ok() && meta->is_object() &&
      meta->value("fingerprint", "") == fingerprint) {
    auto contents = ReadFile(tsv);
    if (contents.ok() && Sha256Hex(*contents) == meta->value("sha256", "")) {
      auto parsed = ParseScoreFile(*contents);
      if (parsed.ok()) return *std::move(parsed);
    }
  }

  double wall = 0.0;
  auto responses =
      RunStage(ctx, scorer, requests, scores_dir,
               absl::StrCat(std::string(metric), ".partial.txt"), &wall);
  const std::string context =
      absl::StrCat("scoring ", run.system, "/", run.corpus_id, " with ", std::string(metric));
  if (!responses.ok()) return Annotate(responses.status(), context);
  auto values = ParseScoreResponses(*responses);
  if (!values.ok()) return Annotate(values.status(), context);
  ScoreFile file;
  file.system = run.system;
  file.metric = std::string(metric);
  for (size_t i = 0; i < values->size(); ++i) {
    file.rows.emplace_back(variant.source[i].index, (*values)[i]);
  }
  const std::string text = FormatScoreFile(file);
  RETURN_IF_ERROR(WriteFileAtomic(tsv, text));
  Json meta;
  meta["fingerprint"] = fingerprint;
  meta["policy"] = std::string(SourcePolicyName(policy));
  meta["sha256"] = Sha256Hex(text);
  RETURN_IF_ERROR(WriteFileAtomic(meta_path, meta.dump(2) + "\n"));
  return file;
}

absl::StatusOr<std::vector<ScoreFile>> ScoreRuns(
    RunContext& ctx, const ExternalSystemSpec& scorer, std::string_view metric,
    const std::vector<RunRecord>& runs,
    const std::vector<CorpusVariant>& variants, SourcePolicy policy,
    const CorpusRegistry& registry,
    const std::optional<std::vector<std::string>>& references) {
  if (runs.size() != variants.size()) {
    return absl::InvalidArgumentError("runs and corpus variants differ in number");
  }
  std::vector<ScoreFile> files;
  for (size_t i = 0; i < runs.size(); ++i) {
    ASSIGN_OR_RETURN(ScoreFile file, ScoreRun(ctx, scorer, metric, runs[i],
                                              variants[i], policy, registry,
                                              references));
    files.push_back(std::move(file));
  }
  return files;
}

absl::StatusOr<OracleSelection> OracleSelect(
    const ScoreFile& scores_a, const ScoreFile& scores_b,
    const std::vector<std::string>& outputs_a,
    const std::vector<std::string>& outputs_b) {
  ASSIGN_OR_RETURN(AlignedScores aligned, AlignScores(scores_a, scores_b));
  const size_t n = aligned.indices.size();
  if (outputs_a.size() != n || outputs_b.size() != n) {
    return absl::InvalidArgumentError(absl::StrCat(
        "oracle: ", n, " scored segments but ", outputs_a.size(), " and ",
        outputs_b.size(), " outputs"));
  }
  OracleSelection out;
  out.scores.system = "oracle";
  out.scores.metric = scores_a.metric;
  out.outputs.reserve(n);
  out.chose_b.reserve(n);
  for (size_t i = 0; i < n; ++i) {
    if (aligned.indices[i] != static_cast<int64_t>(i)) {
      return absl::InvalidArgumentError(absl::StrCat(
          "oracle: segment indices must be contiguous from 0; found ",
          aligned.indices[i], " at position ", i));
    }
    const bool pick_b = aligned.b[i] > aligned.a[i];
    out.chose_b.push_back(pick_b);
    out.outputs.push_back(pick_b ? outputs_b[i] : outputs_a[i]);
    out.scores.rows.emplace_back(aligned.indices[i],
                                 pick_b ? aligned.b[i] : aligned.a[i]);
  }
  return out;
}

absl::StatusOr<ReferenceKind> ParseReferenceKind(std::string_view name) {
  if (name == "target") return ReferenceKind::kTarget;
  if (name == "clean_source") return ReferenceKind::kCleanSource;
  if (name == "clean_output") return ReferenceKind::kCleanOutput;
  if (name == "none") return ReferenceKind::kNone;
  return absl::InvalidArgumentError(
      absl::StrCat("unknown reference kind '", std::string(name), "'"));
}

absl::StatusOr<ScoreFile> ScoreNative(const MetricSpec& metric,
                                      std::string_view system,
                                      const std::vector<std::string>& hyps,
                                      const std::vector<std::string>& refs,
                                      int jobs) {
  if (hyps.size() != refs.size()) {
    return absl::InvalidArgumentError(absl::StrCat(
        metric.name, ": ", hyps.size(), " hypotheses vs ", refs.size(),
        " references"));
  }
  ScoreFile file;
  file.system = std::string(system);
  file.metric = metric.name;
  std::vector<double> values(hyps.size());
  switch (metric.kind) {
    case MetricKind::kChrf: {
      RETURN_IF_ERROR(ValidateChrfParams(metric.chrf));
      std::vector<ChrfStats> stats(hyps.size());
      ParallelFor(hyps.size(), jobs, [&](size_t i) {
        stats[i] = ChrfSentenceStats(hyps[i], refs[i], metric.chrf);
        values[i] = ChrfFromStats(stats[i], metric.chrf);
      });
      ChrfStats total;
      total.values.assign(3 * (metric.chrf.char_order + metric.chrf.word_order), 0.0);
      for (const auto& s : stats) total.Add(s);
      file.corpus_score = ChrfFromStats(total, metric.chrf);
      break;
    }
    case MetricKind::kBleu: {
      RETURN_IF_ERROR(ValidateBleuParams(metric.bleu));
      BleuParams sentence = metric.bleu;
      sentence.effective_order = true;
      ParallelFor(hyps.size(), jobs, [&](size_t i) {
        values[i] = SentenceBleu(hyps[i], refs[i], sentence);
      });
      if (!hyps.empty()) {
        ASSIGN_OR_RETURN(double corpus, CorpusBleu(hyps, refs, metric.bleu, jobs));
        file.corpus_score = corpus;
      }
      break;
    }
    case MetricKind::kExternal:
      return absl::InvalidArgumentError(
          absl::StrCat(metric.name, " is not a native metric"));
  }
  for (size_t i = 0; i < values.size(); ++i) {
    file.rows.emplace_back(static_cast<int64_t>(i), values[i]);
  }
  return file;
}

// ---------------------------------------------------------------------------
// Experiment manifests.

EnvLookup ProcessEnv() {
  return [](const std::string& name) -> std::optional<std::string> {
    const char* value = std::getenv(name.c_str());
    if (value == nullptr) return std::nullopt;
    return std::string(value);
  };
}

namespace {

absl::StatusOr<std::string> ExpandEnv(const std::string& text,
                                      const EnvLookup& env) {
  std::string out;
  size_t i = 0;
  while (i < text.size()) {
    if (text[i] == '$' && i + 1 < text.size() && text[i + 1] == '{') {
      const size_t close = text.find('}', i + 2);
      if (close == std::string::npos) {
        return absl::InvalidArgumentError(
            absl::StrCat("unterminated ${ in '", text, "'"));
      }
      const std::string name = text.substr(i + 2, close - i - 2);
      std::optional<std::string> value = env ? env(name) : std::nullopt;
      if (!value) {
        return absl::InvalidArgumentError(
            absl::StrCat("environment variable ", name, " is not set"));
      }
      out += *value;
      i = close + 1;
    } else {
      out.push_back(text[i++]);
    }
  }
  return out;
}

// Typed accessors that name the offending key.
class JsonReader {
 public:
  JsonReader(const Json& j, std::string where) : j_(j), where_(std::move(where)) {}

  absl::Status CheckKeys(std::initializer_list<std::string_view> allowed) const {
    if (!j_.is_object()) {
      return absl::InvalidArgumentError(absl::StrCat(where_, ": expected an object"));
    }
    for (const auto& [key, value] : j_.items()) {
      if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
        return absl::InvalidArgumentError(
            absl::StrCat(where_, ": unknown key '", key, "'"));
      }
    }
    return absl::OkStatus();
  }

  bool Has(const char* key) const { return j_.contains(key); }

  absl::StatusOr<std::string> String(const char* key) const {
    if (!j_.contains(key) || !j_[key].is_string()) {
      return absl::InvalidArgumentError(
          absl::StrCat(where_, ": '", key, "' must be a string"));
    }
    return j_[key].get<std::string>();
  }
  absl::StatusOr<std::string> String(const char* key, std::string fallback) const {
    if (!j_.contains(key)) return fallback;
    return String(key);
  }
  absl::StatusOr<double> Number(const char* key, double fallback) const {
    if (!j_.contains(key)) return fallback;
    if (!j_[key].is_number()) {
      return absl::InvalidArgumentError(
          absl::StrCat(where_, ": '", key, "' must be a number"));
    }
    return j_[key].get<double>();
  }
  absl::StatusOr<int64_t> Integer(const char* key, int64_t fallback) const {
    if (!j_.contains(key)) return fallback;
    if (!j_[key].is_number_integer()) {
      return absl::InvalidArgumentError(
          absl::StrCat(where_, ": '", key, "' must be an integer"));
    }
    return j_[key].get<int64_t>();
  }
  absl::StatusOr<const Json*> Array(const char* key, bool required) const {
    static const Json kEmpty = Json::array();
    if (!j_.contains(key)) {
      if (required) {
        return absl::InvalidArgumentError(
            absl::StrCat(where_, ": missing '", key, "'"));
      }
      return &kEmpty;
    }
    if (!j_[key].is_array()) {
      return absl::InvalidArgumentError(
          absl::StrCat(where_, ": '", key, "' must be an array"));
    }
    return &j_[key];
  }
  const Json& operator[](const char* key) const { return j_[key]; }
  const std::string& where() const { return where_; }

 private:
  const Json& j_;
  std::string where_;
};

absl::StatusOr<ExternalSystemSpec> ParseSystem(const Json& j, size_t i,
                                               const EnvLookup& env) {
  JsonReader r(j, absl::StrCat("systems[", i, "]"));
  RETURN_IF_ERROR(r.CheckKeys({"id", "kind", "command", "timeout", "batch_size"}));
  ExternalSystemSpec spec;
  ASSIGN_OR_RETURN(spec.id, r.String("id"));
  ASSIGN_OR_RETURN(std::string kind, r.String("kind"));
  ASSIGN_OR_RETURN(spec.kind, ParseSystemKind(kind));
  ASSIGN_OR_RETURN(const Json* command, r.Array("command", true));
  for (const auto& arg : *command) {
    if (!arg.is_string()) {
      return absl::InvalidArgumentError(
          absl::StrCat(r.where(), ": command entries must be strings"));
    }
    ASSIGN_OR_RETURN(std::string expanded, ExpandEnv(arg.get<std::string>(), env));
    spec.command.push_back(std::move(expanded));
  }
  ASSIGN_OR_RETURN(spec.timeout_seconds, r.Number("timeout", spec.timeout_seconds));
  ASSIGN_OR_RETURN(int64_t batch, r.Integer("batch_size", spec.batch_size));
  spec.batch_size = static_cast<int>(batch);
  RETURN_IF_ERROR(ValidateExternalSpec(spec));
  return spec;
}

absl::StatusOr<MetricSpec> ParseMetric(const Json& j, size_t i) {
  JsonReader r(j, absl::StrCat("metrics[", i, "]"));
  RETURN_IF_ERROR(r.CheckKeys({"name", "kind", "reference", "scorer", "policy",
                               "char_order", "word_order", "beta", "tokenizer",
                               "max_order"}));
  MetricSpec m;
  ASSIGN_OR_RETURN(std::string kind, r.String("kind"));
  if (kind == "chrf") {
    m.kind = MetricKind::kChrf;
  } else if (kind == "bleu") {
    m.kind = MetricKind::kBleu;
  } else if (kind == "external") {
    m.kind = MetricKind::kExternal;
  } else {
    return absl::InvalidArgumentError(
        absl::StrCat(r.where(), ": unknown metric kind '", kind, "'"));
  }
  ASSIGN_OR_RETURN(m.name, r.String("name", kind));
  ASSIGN_OR_RETURN(std::string reference,
                   r.String("reference", m.kind == MetricKind::kExternal
                                             ? "none"
                                             : "target"));
  ASSIGN_OR_RETURN(m.reference, ParseReferenceKind(reference));
  if (m.kind != MetricKind::kExternal && m.reference == ReferenceKind::kNone) {
    return absl::InvalidArgumentError(
        absl::StrCat(r.where(), ": native metrics need a reference"));
  }
  if (m.kind == MetricKind::kExternal) {
    ASSIGN_OR_RETURN(m.scorer, r.String("scorer"));
    ASSIGN_OR_RETURN(std::string policy, r.String("policy", "clean_source"));
    ASSIGN_OR_RETURN(m.policy, ParseSourcePolicy(policy));
  } else if (r.Has("scorer") || r.Has("policy")) {
    return absl::InvalidArgumentError(absl::StrCat(
        r.where(), ": 'scorer' and 'policy' apply to external metrics only"));
  }
  ASSIGN_OR_RETURN(int64_t char_order, r.Integer("char_order", m.chrf.char_order));
  ASSIGN_OR_RETURN(int64_t word_order, r.Integer("word_order", m.chrf.word_order));
  ASSIGN_OR_RETURN(m.chrf.beta, r.Number("beta", m.chrf.beta));
  m.chrf.char_order = static_cast<int>(char_order);
  m.chrf.word_order = static_cast<int>(word_order);
  ASSIGN_OR_RETURN(std::string tokenizer, r.String("tokenizer", "none"));
  ASSIGN_OR_RETURN(m.bleu.tokenizer, ParseBleuTokenizer(tokenizer));
  ASSIGN_OR_RETURN(int64_t max_order, r.Integer("max_order", m.bleu.max_order));
  m.bleu.max_order = static_cast<int>(max_order);
  if (m.kind == MetricKind::kChrf) RETURN_IF_ERROR(ValidateChrfParams(m.chrf));
  if (m.kind == MetricKind::kBleu) RETURN_IF_ERROR(ValidateBleuParams(m.bleu));
  if (!SafeId(m.name)) {
    return absl::InvalidArgumentError(
        absl::StrCat(r.where(), ": metric name '", m.name, "' is not usable as a file name"));
  }
  return m;
}

}  // namespace

absl::StatusOr<ExperimentSpec> ParseExperimentSpec(std::string_view json,
                                                   const fs::path& base_dir,
                                                   const EnvLookup& process_env) {
  // ${MANIFEST_DIR} names the manifest's directory unless the environment
  // overrides it.
  const EnvLookup env = [&](const std::string& name) -> std::optional<std::string> {
    if (auto value = process_env ? process_env(name) : std::nullopt) return value;
    if (name == "MANIFEST_DIR") return fs::absolute(base_dir).lexically_normal().string();
    return std::nullopt;
  };
  Json root = Json::parse(json, nullptr, /*allow_exceptions=*/false);
  if (root.is_discarded()) {
    return absl::InvalidArgumentError("experiment manifest is not valid JSON");
  }
  JsonReader r(root, "manifest");
  RETURN_IF_ERROR(r.CheckKeys({"name", "seed", "languages", "corpora", "noise",
                               "systems", "metrics", "pipelines", "oracles",
                               "tie_epsilon"}));
  ExperimentSpec spec;
  ASSIGN_OR_RETURN(spec.name, r.String("name"));
  if (!SafeId(spec.name)) {
    return absl::InvalidArgumentError(
        absl::StrCat("manifest: bad experiment name '", spec.name, "'"));
  }
  if (!root.contains("seed") || !root["seed"].is_number_unsigned()) {
    return absl::InvalidArgumentError(
        "manifest: 'seed' must be a nonnegative integer");
  }
  spec.seed = root["seed"].get<uint64_t>();
  ASSIGN_OR_RETURN(spec.tie_epsilon, r.Number("tie_epsilon", 0.0));
  if (!(spec.tie_epsilon >= 0.0)) {
    return absl::InvalidArgumentError("manifest: tie_epsilon must be >= 0");
  }

  if (!root.contains("languages")) {
    return absl::InvalidArgumentError("manifest: missing 'languages'");
  }
  JsonReader langs(root["languages"], "languages");
  RETURN_IF_ERROR(langs.CheckKeys({"source", "target"}));
  ASSIGN_OR_RETURN(spec.languages.source, langs.String("source"));
  ASSIGN_OR_RETURN(spec.languages.target, langs.String("target"));

  std::set<std::string> corpus_ids;
  ASSIGN_OR_RETURN(const Json* corpora, r.Array("corpora", true));
  for (size_t i = 0; i < corpora->size(); ++i) {
    JsonReader c((*corpora)[i], absl::StrCat("corpora[", i, "]"));
    RETURN_IF_ERROR(c.CheckKeys({"id", "source", "target"}));
    CorpusSpec corpus;
    ASSIGN_OR_RETURN(corpus.id, c.String("id"));
    if (!SafeId(corpus.id) || !corpus_ids.insert(corpus.id).second) {
      return absl::InvalidArgumentError(
          absl::StrCat(c.where(), ": bad or duplicate corpus id '", corpus.id, "'"));
    }
    ASSIGN_OR_RETURN(std::string source, c.String("source"));
    ASSIGN_OR_RETURN(source, ExpandEnv(source, env));
    corpus.source = base_dir / source;
    if (c.Has("target")) {
      ASSIGN_OR_RETURN(std::string target, c.String("target"));
      ASSIGN_OR_RETURN(target, ExpandEnv(target, env));
      corpus.target = base_dir / target;
    }
    spec.corpora.push_back(std::move(corpus));
  }
  if (spec.corpora.empty()) {
    return absl::InvalidArgumentError("manifest: at least one corpus is required");
  }

  if (root.contains("noise")) {
    JsonReader n(root["noise"], "noise");
    RETURN_IF_ERROR(n.CheckKeys({"types", "layout", "levels"}));
    ASSIGN_OR_RETURN(const Json* types, n.Array("types", true));
    for (const auto& t : *types) {
      if (!t.is_string()) {
        return absl::InvalidArgumentError("noise: types must be strings");
      }
      ASSIGN_OR_RETURN(NoiseType type, ParseNoiseType(t.get<std::string>()));
      if (std::find(spec.noise_types.begin(), spec.noise_types.end(), type) !=
          spec.noise_types.end()) {
        return absl::InvalidArgumentError(
            absl::StrCat("noise: type '", t.get<std::string>(), "' listed twice"));
      }
      spec.noise_types.push_back(type);
    }
    ASSIGN_OR_RETURN(spec.layout, n.String("layout", ""));
    ASSIGN_OR_RETURN(spec.layout, ExpandEnv(spec.layout, env));
    ASSIGN_OR_RETURN(const Json* levels, n.Array("levels", false));
    for (const auto& level : *levels) {
      if (!level.is_number_integer() || level.get<int>() < 1 ||
          level.get<int>() > kLadderLevels) {
        return absl::InvalidArgumentError("noise: levels must be integers in 1..10");
      }
      spec.levels.push_back(level.get<int>());
    }
  }
  if (spec.levels.empty()) {
    for (int k = 1; k <= kLadderLevels; ++k) spec.levels.push_back(k);
  }
  std::sort(spec.levels.begin(), spec.levels.end());
  spec.levels.erase(std::unique(spec.levels.begin(), spec.levels.end()),
                    spec.levels.end());
  if (std::find(spec.noise_types.begin(), spec.noise_types.end(),
                NoiseType::kKey) != spec.noise_types.end() &&
      spec.layout.empty()) {
    return absl::InvalidArgumentError("noise: key noise requires a layout");
  }

  std::map<std::string, SystemKind> kinds;
  ASSIGN_OR_RETURN(const Json* systems, r.Array("systems", true));
  for (size_t i = 0; i < systems->size(); ++i) {
    ASSIGN_OR_RETURN(ExternalSystemSpec system, ParseSystem((*systems)[i], i, env));
    if (!SafeId(system.id) || !kinds.emplace(system.id, system.kind).second) {
      return absl::InvalidArgumentError(
          absl::StrCat("systems[", i, "]: bad or duplicate id '", system.id, "'"));
    }
    spec.systems.push_back(std::move(system));
  }

  ASSIGN_OR_RETURN(const Json* metrics, r.Array("metrics", true));
  std::set<std::string> metric_names;
  for (size_t i = 0; i < metrics->size(); ++i) {
    ASSIGN_OR_RETURN(MetricSpec metric, ParseMetric((*metrics)[i], i));
    if (!metric_names.insert(metric.name).second) {
      return absl::InvalidArgumentError(
          absl::StrCat("metrics[", i, "]: duplicate name '", metric.name, "'"));
    }
    if (metric.kind == MetricKind::kExternal) {
      auto it = kinds.find(metric.scorer);
      if (it == kinds.end() || it->second != SystemKind::kScorer) {
        return absl::InvalidArgumentError(absl::StrCat(
            "metrics[", i, "]: '", metric.scorer, "' is not a declared scorer"));
      }
    }
    if (metric.reference == ReferenceKind::kTarget) {
      for (const auto& corpus : spec.corpora) {
        if (!corpus.target) {
          return absl::InvalidArgumentError(absl::StrCat(
              "metrics[", i, "]: reference 'target' but corpus '", corpus.id,
              "' has no target"));
        }
      }
    }
    spec.metrics.push_back(std::move(metric));
  }

  std::set<std::string> producers;
  for (const auto& system : spec.systems) {
    if (system.kind == SystemKind::kTranslator) producers.insert(system.id);
  }
  ASSIGN_OR_RETURN(const Json* pipelines, r.Array("pipelines", false));
  for (size_t i = 0; i < pipelines->size(); ++i) {
    JsonReader p((*pipelines)[i], absl::StrCat("pipelines[", i, "]"));
    RETURN_IF_ERROR(p.CheckKeys({"id", "corrector", "translator"}));
    PipelineSpec pipeline;
    ASSIGN_OR_RETURN(pipeline.id, p.String("id"));
    ASSIGN_OR_RETURN(pipeline.corrector, p.String("corrector"));
    ASSIGN_OR_RETURN(pipeline.translator, p.String("translator"));
    auto c = kinds.find(pipeline.corrector);
    auto t = kinds.find(pipeline.translator);
    if (c == kinds.end() || c->second != SystemKind::kCorrector) {
      return absl::InvalidArgumentError(absl::StrCat(
          p.where(), ": '", pipeline.corrector, "' is not a declared corrector"));
    }
    if (t == kinds.end() || t->second != SystemKind::kTranslator) {
      return absl::InvalidArgumentError(absl::StrCat(
          p.where(), ": '", pipeline.translator, "' is not a declared translator"));
    }
    if (!SafeId(pipeline.id) || kinds.count(pipeline.id) ||
        !producers.insert(pipeline.id).second) {
      return absl::InvalidArgumentError(
          absl::StrCat(p.where(), ": bad or duplicate id '", pipeline.id, "'"));
    }
    spec.pipelines.push_back(std::move(pipeline));
  }

  ASSIGN_OR_RETURN(const Json* oracles, r.Array("oracles", false));
  for (size_t i = 0; i < oracles->size(); ++i) {
    JsonReader o((*oracles)[i], absl::StrCat("oracles[", i, "]"));
    RETURN_IF_ERROR(o.CheckKeys({"id", "baseline", "challenger", "metric"}));
    OracleSpec oracle;
    ASSIGN_OR_RETURN(oracle.baseline, o.String("baseline"));
    ASSIGN_OR_RETURN(oracle.challenger, o.String("challenger"));
    ASSIGN_OR_RETURN(oracle.metric, o.String("metric"));
    ASSIGN_OR_RETURN(oracle.id,
                     o.String("id", absl::StrCat("oracle.", oracle.baseline, ".",
                                                 oracle.challenger)));
    if (!producers.count(oracle.baseline) || !producers.count(oracle.challenger)) {
      return absl::InvalidArgumentError(absl::StrCat(
          o.where(), ": baseline and challenger must be translators or pipelines"));
    }
    if (!metric_names.count(oracle.metric)) {
      return absl::InvalidArgumentError(
          absl::StrCat(o.where(), ": unknown metric '", oracle.metric, "'"));
    }
    if (!SafeId(oracle.id) || kinds.count(oracle.id) ||
        !producers.insert(oracle.id).second) {
      return absl::InvalidArgumentError(
          absl::StrCat(o.where(), ": bad or duplicate id '", oracle.id, "'"));
    }
    spec.oracles.push_back(std::move(oracle));
  }
  return spec;
}

absl::StatusOr<ExperimentSpec> LoadExperimentSpec(const fs::path& path,
                                                  const EnvLookup& env) {
  ASSIGN_OR_RETURN(std::string text, ReadFile(path));
  auto spec = ParseExperimentSpec(text, path.parent_path(), env);
  if (!spec.ok()) return Annotate(spec.status(), path.string());
  return spec;
}

// ---------------------------------------------------------------------------
// Running.

namespace {

struct CorpusData {
  std::string id;
  std::vector<Segment> source;
  std::optional<std::vector<Segment>> target;
  std::vector<CorpusVariant> variants;  // clean first
};

using RunKey = std::pair<std::string, std::string>;  // system, corpus id

class ExperimentRunner {
 public:
  ExperimentRunner(const ExperimentSpec& spec, const ExperimentOptions& options)
      : spec_(spec) {
    ctx_.experiment_dir = options.runs_root / spec.name;
    ctx_.languages = spec.languages;
    ctx_.jobs = options.jobs;
    ctx_.record_timing = options.record_timing;
  }

  absl::StatusOr<ExperimentSummary> Run() {
    RETURN_IF_ERROR(PrepareCorpora());
    for (const auto& system : spec_.systems) {
      if (system.kind != SystemKind::kTranslator) continue;
      for (const auto& corpus : corpora_) {
        ASSIGN_OR_RETURN(std::vector<RunRecord> records,
                         TranslateLadder(ctx_, system, corpus.variants));
        for (size_t i = 0; i < records.size(); ++i) {
          Record(corpus.variants[i], std::move(records[i]));
        }
      }
      producers_.push_back(system.id);
    }
    for (const auto& pipeline : spec_.pipelines) {
      const ExternalSystemSpec& corrector = System(pipeline.corrector);
      const ExternalSystemSpec& translator = System(pipeline.translator);
      for (const auto& corpus : corpora_) {
        for (const auto& variant : corpus.variants) {
          ASSIGN_OR_RETURN(RunRecord record,
                           CorrectionPipeline(ctx_, pipeline.id, corrector,
                                              translator, variant, corpus.source));
          Record(variant, std::move(record));
        }
      }
      producers_.push_back(pipeline.id);
    }
    for (const auto& producer : producers_) RETURN_IF_ERROR(ScoreSystem(producer));
    for (const auto& oracle : spec_.oracles) {
      RETURN_IF_ERROR(RunOracle(oracle));
      RETURN_IF_ERROR(ScoreSystem(oracle.id));
    }
    RETURN_IF_ERROR(WriteReport());
    summary_.external_calls = ctx_.external_calls;
    summary_.experiment_dir = ctx_.experiment_dir;
    return summary_;
  }

 private:
  const ExternalSystemSpec& System(const std::string& id) const {
    for (const auto& s : spec_.systems) {
      if (s.id == id) return s;
    }
    // Ids are checked when the manifest is parsed.
    std::abort();
  }

  void Record(const CorpusVariant& variant, RunRecord record) {
    if (record.resumed) {
      ++summary_.runs_resumed;
    } else {
      ++summary_.runs_executed;
    }
    runs_[{record.system, variant.id}] = std::move(record);
  }

  absl::Status PrepareCorpora() {
    const KeyboardLayout* layout = nullptr;
    if (!spec_.layout.empty()) {
      ASSIGN_OR_RETURN(layout, ResolveLayout(spec_.layout));
    }
    const fs::path corpora_dir = ctx_.experiment_dir / kCorporaDir;
    Json manifest;
    manifest["name"] = spec_.name;
    manifest["seed"] = spec_.seed;
    manifest["languages"] = {{"source", spec_.languages.source},
                             {"target", spec_.languages.target}};
    manifest["layout"] = layout ? Json(layout->name()) : Json(nullptr);
    manifest["layout_sha256"] = layout ? Json(layout->sha256()) : Json(nullptr);
    Json corpora_json = Json::array();
    for (const auto& cs : spec_.corpora) {
      CorpusData data;
      data.id = cs.id;
      ASSIGN_OR_RETURN(data.source, LoadPlainCorpus(cs.source));
      if (cs.target) {
        ASSIGN_OR_RETURN(ParallelCorpus parallel,
                         LoadParallelCorpus(cs.source, *cs.target, spec_.languages));
        data.target = std::move(parallel.target);
      }
      const std::string clean_text = FormatPlainCorpus(data.source);
      RETURN_IF_ERROR(WriteFileAtomic(corpora_dir / (cs.id + ".clean.txt"), clean_text));
      Json cj;
      cj["id"] = cs.id;
      cj["segments"] = data.source.size();
      cj["source_sha256"] = Sha256Hex(clean_text);
      if (data.target) {
        const std::string target_text = FormatPlainCorpus(*data.target);
        RETURN_IF_ERROR(
            WriteFileAtomic(corpora_dir / (cs.id + ".target.txt"), target_text));
        cj["target_sha256"] = Sha256Hex(target_text);
      }
      corpora_json.push_back(cj);

      CorpusVariant clean;
      clean.id = CleanCorpusId(cs.id);
      clean.base = cs.id;
      clean.source = data.source;
      data.variants.push_back(std::move(clean));
      for (NoiseType type : spec_.noise_types) {
        const KeyboardLayout* type_layout = type == NoiseType::kKey ? layout : nullptr;
        for (int level : spec_.levels) {
          NoiseSpec ns{type, LadderLevelP(level), LadderLevelSeed(spec_.seed, level),
                       type_layout};
          ASSIGN_OR_RETURN(NoisedCorpus noised,
                           NoiseCorpus(data.source, ns, cs.id, ctx_.jobs));
          CorpusVariant variant;
          variant.id = LadderCorpusId(cs.id, type, level);
          variant.base = cs.id;
          variant.noise_type = std::string(NoiseTypeName(type));
          variant.p = ns.p;
          variant.noise = noised.noise;
          variant.source = noised.AsSegments();
          RETURN_IF_ERROR(
              WriteNoisedJsonl(noised, corpora_dir / (variant.id + ".jsonl")));
          data.variants.push_back(std::move(variant));
        }
      }
      registry_[cs.id] = data.source;
      corpora_.push_back(std::move(data));
    }
    manifest["corpora"] = corpora_json;
    Json noise_types = Json::array();
    for (NoiseType t : spec_.noise_types) noise_types.push_back(NoiseTypeName(t));
    manifest["noise_types"] = noise_types;
    manifest["levels"] = spec_.levels;
    Json systems = Json::array();
    for (const auto& s : spec_.systems) systems.push_back(CommandJson(s));
    manifest["systems"] = systems;
    return WriteFileAtomic(ctx_.experiment_dir / "experiment.json",
                           manifest.dump(2) + "\n");
  }

  absl::StatusOr<std::optional<std::vector<std::string>>> References(
      const MetricSpec& metric, const std::string& system,
      const CorpusData& corpus) {
    switch (metric.reference) {
      case ReferenceKind::kTarget:
        return std::optional<std::vector<std::string>>(Texts(*corpus.target));
      case ReferenceKind::kCleanSource:
        return std::optional<std::vector<std::string>>(Texts(corpus.source));
      case ReferenceKind::kCleanOutput: {
        auto it = runs_.find({system, CleanCorpusId(corpus.id)});
        if (it == runs_.end()) {
          return absl::NotFoundError(absl::StrCat(
              "no clean run of ", system, " on ", corpus.id));
        }
        return std::optional<std::vector<std::string>>(it->second.outputs);
      }
      case ReferenceKind::kNone:
        return std::optional<std::vector<std::string>>();
    }
    return absl::InternalError("unhandled reference kind");
  }

  absl::Status ScoreSystem(const std::string& system) {
    for (const auto& metric : spec_.metrics) {
      for (const auto& corpus : corpora_) {
        ASSIGN_OR_RETURN(auto refs, References(metric, system, corpus));
        for (const auto& variant : corpus.variants) {
          const RunRecord& run = runs_.at({system, variant.id});
          ScoreFile file;
          if (metric.kind == MetricKind::kExternal) {
            ASSIGN_OR_RETURN(file, ScoreRun(ctx_, System(metric.scorer),
                                            metric.name, run, variant,
                                            metric.policy, registry_, refs));
          } else {
            ASSIGN_OR_RETURN(file, ScoreNative(metric, system, run.outputs,
                                               *refs, ctx_.jobs));
            RETURN_IF_ERROR(WriteScoreFile(
                file, ctx_.RunDir(system, variant.id) / "scores" /
                          (metric.name + ".tsv")));
          }
          scores_[{system, variant.id, metric.name}] = std::move(file);
        }
      }
    }
    return absl::OkStatus();
  }

  absl::Status RunOracle(const OracleSpec& oracle) {
    for (const auto& corpus : corpora_) {
      for (const auto& variant : corpus.variants) {
        const RunRecord& a = runs_.at({oracle.baseline, variant.id});
        const RunRecord& b = runs_.at({oracle.challenger, variant.id});
        const ScoreFile& sa = scores_.at({oracle.baseline, variant.id, oracle.metric});
        const ScoreFile& sb =
            scores_.at({oracle.challenger, variant.id, oracle.metric});
        ASSIGN_OR_RETURN(OracleSelection selection,
                         OracleSelect(sa, sb, a.outputs, b.outputs));
        RunRecord record;
        record.system = oracle.id;
        record.corpus_id = variant.id;
        record.outputs = std::move(selection.outputs);
        const fs::path dir = ctx_.RunDir(oracle.id, variant.id);
        std::string mask;
        for (bool chose_b : selection.chose_b) mask += chose_b ? "1\n" : "0\n";
        RETURN_IF_ERROR(WriteFileAtomic(dir / "output.txt", JoinLines(record.outputs)));
        RETURN_IF_ERROR(WriteFileAtomic(dir / "mask.txt", mask));
        Json fp;
        fp["baseline"] = oracle.baseline;
        fp["challenger"] = oracle.challenger;
        fp["metric"] = oracle.metric;
        Json meta = RunJson(oracle.id, "oracle", variant, Fingerprint(fp),
                            Sha256Hex(JoinLines(Texts(variant.source))), record,
                            ctx_);
        meta["baseline"] = oracle.baseline;
        meta["challenger"] = oracle.challenger;
        meta["selection_metric"] = oracle.metric;
        RETURN_IF_ERROR(WriteFileAtomic(dir / "run.json", meta.dump(2) + "\n"));
        runs_[{oracle.id, variant.id}] = std::move(record);
      }
    }
    return absl::OkStatus();
  }

  absl::Status WriteReport() {
    ASSIGN_OR_RETURN(std::vector<Trajectory> trajectories,
                     CollectTrajectories(ctx_.experiment_dir));
    std::vector<WinLossEntry> entries;
    for (const auto& oracle : spec_.oracles) {
      ASSIGN_OR_RETURN(std::vector<WinLossEntry> found,
                       CollectWinLoss(ctx_.experiment_dir, oracle.baseline,
                                      oracle.challenger, oracle.metric,
                                      spec_.tie_epsilon));
      entries.insert(entries.end(), found.begin(), found.end());
    }
    return EmitReport(trajectories, entries, ctx_.experiment_dir / kReportDir);
  }

  const ExperimentSpec& spec_;
  RunContext ctx_;
  ExperimentSummary summary_;
  std::vector<CorpusData> corpora_;
  CorpusRegistry registry_;
  std::vector<std::string> producers_;
  std::map<RunKey, RunRecord> runs_;
  std::map<std::tuple<std::string, std::string, std::string>, ScoreFile> scores_;
};

}  // namespace

absl::StatusOr<ExperimentSummary> RunExperiment(const ExperimentSpec& spec,
                                                const ExperimentOptions& options) {
  if (options.jobs < 1) {
    return absl::InvalidArgumentError("jobs must be >= 1");
  }
  ExperimentRunner runner(spec, options);
  return runner.Run();
}

// ---------------------------------------------------------------------------
// Reading run directories back.

namespace {

struct RunInfo {
  std::string system;
  std::string corpus_id;
  std::string base;
  std::string noise_type;
  double p = 0.0;
  fs::path dir;
};

// All run directories, sorted by (system, corpus id).
absl::StatusOr<std::vector<RunInfo>> ScanRuns(const fs::path& experiment_dir) {
  std::vector<RunInfo> runs;
  std::error_code ec;
  if (!fs::is_directory(experiment_dir, ec)) return runs;
  for (const auto& system_entry : fs::directory_iterator(experiment_dir)) {
    if (!system_entry.is_directory()) continue;
    const std::string system = system_entry.path().filename().string();
    if (system == kCorporaDir || system == kReportDir) continue;
    for (const auto& corpus_entry : fs::directory_iterator(system_entry.path())) {
      const fs::path meta_path = corpus_entry.path() / "run.json";
      if (!fs::is_regular_file(meta_path, ec)) continue;
      ASSIGN_OR_RETURN(Json meta, ReadJson(meta_path));
      RunInfo info;
      info.system = system;
      info.dir = corpus_entry.path();
      info.corpus_id = meta.value("corpus_id", corpus_entry.path().filename().string());
      info.base = meta.value("base", "");
      info.noise_type = meta.value("noise_type", "clean");
      info.p = meta.value("p", 0.0);
      runs.push_back(std::move(info));
    }
  }
  std::sort(runs.begin(), runs.end(), [](const RunInfo& a, const RunInfo& b) {
    return std::tie(a.system, a.corpus_id) < std::tie(b.system, b.corpus_id);
  });
  return runs;
}

std::vector<std::string> MetricFiles(const fs::path& run_dir) {
  std::vector<std::string> metrics;
  std::error_code ec;
  const fs::path dir = run_dir / "scores";
  if (!fs::is_directory(dir, ec)) return metrics;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.path().extension() == ".tsv") {
      metrics.push_back(entry.path().stem().string());
    }
  }
  std::sort(metrics.begin(), metrics.end());
  return metrics;
}

bool MultipleBases(const std::vector<RunInfo>& runs) {
  std::set<std::string> bases;
  for (const auto& r : runs) bases.insert(r.base);
  return bases.size() > 1;
}

std::string Label(const std::string& system, const std::string& base,
                  bool multiple_bases) {
  return multiple_bases ? absl::StrCat(system, "@", base) : system;
}

}  // namespace

absl::StatusOr<std::vector<Trajectory>> CollectTrajectories(
    const fs::path& experiment_dir) {
  ASSIGN_OR_RETURN(std::vector<RunInfo> runs, ScanRuns(experiment_dir));
  const bool multiple = MultipleBases(runs);
  struct Group {
    std::optional<double> clean;
    std::map<std::string, std::vector<QualityPoint>> ladders;
  };
  std::map<std::tuple<std::string, std::string, std::string>, Group> groups;
  for (const auto& run : runs) {
    for (const auto& metric : MetricFiles(run.dir)) {
      ASSIGN_OR_RETURN(ScoreFile file,
                       ReadScoreFile(run.dir / "scores" / (metric + ".tsv")));
      const double score = file.corpus_score ? *file.corpus_score : file.Mean();
      Group& group = groups[{Label(run.system, run.base, multiple), metric, run.base}];
      if (run.noise_type == "clean") {
        group.clean = score;
      } else {
        group.ladders[run.noise_type].push_back(QualityPoint{run.p, score});
      }
    }
  }
  std::vector<Trajectory> out;
  for (auto& [key, group] : groups) {
    const auto& [system, metric, base] = key;
    if (!group.clean) {
      return absl::NotFoundError(absl::StrCat(
          "no clean run with metric ", metric, " for ", system));
    }
    if (group.ladders.empty()) {
      out.push_back(Trajectory{system, metric, "clean", *group.clean, {}});
      continue;
    }
    for (auto& [noise_type, points] : group.ladders) {
      ASSIGN_OR_RETURN(Trajectory t,
                       BuildTrajectoryFromCorpusScores(system, metric, noise_type,
                                                       *group.clean,
                                                       std::move(points)));
      out.push_back(std::move(t));
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const Trajectory& a, const Trajectory& b) {
    return std::tie(a.metric, a.noise_type, a.system) <
           std::tie(b.metric, b.noise_type, b.system);
  });
  return out;
}

absl::StatusOr<std::vector<WinLossEntry>> CollectWinLoss(
    const fs::path& experiment_dir, std::string_view baseline,
    std::string_view challenger, std::string_view metric, double tie_epsilon) {
  ASSIGN_OR_RETURN(std::vector<RunInfo> runs, ScanRuns(experiment_dir));
  const bool multiple = MultipleBases(runs);
  const std::string score_name = absl::StrCat(std::string(metric), ".tsv");
  std::vector<std::pair<std::tuple<std::string, double>, WinLossEntry>> found;
  for (const auto& run : runs) {
    if (run.system != baseline) continue;
    const fs::path other =
        experiment_dir / std::string(challenger) / run.corpus_id / "scores" / score_name;
    std::error_code ec;
    if (!fs::is_regular_file(other, ec)) continue;
    ASSIGN_OR_RETURN(ScoreFile a, ReadScoreFile(run.dir / "scores" / score_name));
    ASSIGN_OR_RETURN(ScoreFile b, ReadScoreFile(other));
    ASSIGN_OR_RETURN(WinLossBreakdown breakdown, WinLoss(a, b, tie_epsilon, run.p));
    WinLossEntry entry;
    entry.baseline = Label(run.system, run.base, multiple);
    entry.challenger = Label(std::string(challenger), run.base, multiple);
    entry.metric = std::string(metric);
    entry.noise_type = run.noise_type;
    entry.breakdown = breakdown;
    found.emplace_back(std::make_tuple(entry.baseline + "\t" + run.noise_type, run.p),
                       std::move(entry));
  }
  std::stable_sort(found.begin(), found.end(),
                   [](const auto& x, const auto& y) { return x.first < y.first; });
  std::vector<WinLossEntry> out;
  for (auto& [key, entry] : found) out.push_back(std::move(entry));
  return out;
}

}  // namespace mtnoise
