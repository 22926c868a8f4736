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

// mtnoise: character-noise robustness toolkit for machine translation.
//
// Exit status: 0 on success, 1 on data errors (one `error: ...` line on
// stderr), 2 on usage errors.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_split.h"
#include "absl/strings/strip.h"
#include "mtnoise/analysis.h"
#include "mtnoise/bleu.h"
#include "mtnoise/chrf.h"
#include "mtnoise/corpus.h"
#include "mtnoise/corpus_io.h"
#include "mtnoise/dataset.h"
#include "mtnoise/experiment.h"
#include "mtnoise/file_util.h"
#include "mtnoise/keyboard_layout.h"
#include "mtnoise/noise.h"
#include "mtnoise/quality.h"
#include "mtnoise/report.h"
#include "mtnoise/status_macros.h"
#include "mtnoise/tokenization.h"
#include "nlohmann/json.hpp"

namespace mtnoise {
namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitDataError = 1;
constexpr int kExitUsage = 2;

int DataError(const absl::Status& status) {
  std::cerr << "error: " << status.message() << "\n";
  return kExitDataError;
}

int UsageError(const std::string& message) {
  std::cerr << "error: " << message << "\n";
  return kExitUsage;
}

std::string BaseId(const fs::path& path) { return path.stem().string(); }

// --- noise ------------------------------------------------------------------

struct NoiseArgs {
  std::string type;
  double p = 0.0;
  uint64_t seed = 0;
  std::string layout;
  std::string in;
  std::string out;
  std::string provenance;
  std::string base_id;
};

int RunNoise(const NoiseArgs& args, int jobs) {
  auto type = ParseNoiseType(args.type);
  if (!type.ok()) return UsageError(std::string(type.status().message()));
  if (*type == NoiseType::kKey && args.layout.empty()) {
    return UsageError("--type key requires --layout");
  }
  if (!(args.p >= 0.0 && args.p <= 1.0)) {
    return UsageError("--p must be in [0, 1]");
  }
  const KeyboardLayout* layout = nullptr;
  if (!args.layout.empty()) {
    auto resolved = ResolveLayout(args.layout);
    if (!resolved.ok()) return DataError(resolved.status());
    layout = *resolved;
  }
  auto segments = LoadPlainCorpus(args.in);
  if (!segments.ok()) return DataError(segments.status());
  NoiseSpec spec{*type, args.p, args.seed, layout};
  auto noised = NoiseCorpus(*segments, spec,
                            args.base_id.empty() ? BaseId(args.in) : args.base_id,
                            jobs);
  if (!noised.ok()) return DataError(noised.status());
  if (auto s = WritePlainCorpus(noised->AsSegments(), args.out); !s.ok()) {
    return DataError(s);
  }
  const std::string provenance =
      args.provenance.empty() ? args.out + ".jsonl" : args.provenance;
  if (auto s = WriteNoisedJsonl(*noised, provenance); !s.ok()) return DataError(s);
  return kExitOk;
}

// --- ladder -----------------------------------------------------------------

struct LadderArgs {
  std::string type;
  uint64_t seed = 0;
  std::string layout;
  std::string in;
  std::string out_dir;
  std::string base_id;
};

int RunLadder(const LadderArgs& args, int jobs) {
  auto type = ParseNoiseType(args.type);
  if (!type.ok()) return UsageError(std::string(type.status().message()));
  if (*type == NoiseType::kKey && args.layout.empty()) {
    return UsageError("--type key requires --layout");
  }
  const KeyboardLayout* layout = nullptr;
  if (!args.layout.empty()) {
    auto resolved = ResolveLayout(args.layout);
    if (!resolved.ok()) return DataError(resolved.status());
    layout = *resolved;
  }
  auto contents = ReadFile(args.in);
  if (!contents.ok()) return DataError(contents.status());
  auto segments = ParsePlainCorpus(*contents);
  if (!segments.ok()) {
    return DataError(absl::Status(segments.status().code(),
                                  absl::StrCat(args.in, ": ",
                                               segments.status().message())));
  }
  const std::string base = args.base_id.empty() ? BaseId(args.in) : args.base_id;
  auto ladder = MakeNoiseLadder(*segments, *type, layout, args.seed, base, jobs);
  if (!ladder.ok()) return DataError(ladder.status());

  Json manifest;
  manifest["base"] = base;
  manifest["input_sha256"] = Sha256Hex(*contents);
  manifest["type"] = args.type;
  manifest["seed"] = args.seed;
  manifest["layout"] = layout ? Json(layout->name()) : Json(nullptr);
  manifest["layout_sha256"] = layout ? Json(layout->sha256()) : Json(nullptr);
  Json levels = Json::array();
  const fs::path dir = args.out_dir;
  for (int level = 1; level <= kLadderLevels; ++level) {
    const NoisedCorpus& corpus = (*ladder)[level - 1];
    const std::string id = LadderCorpusId(base, *type, level);
    const std::string text = FormatPlainCorpus(corpus.AsSegments());
    const std::string jsonl = FormatNoisedJsonl(corpus);
    if (auto s = WriteFileAtomic(dir / (id + ".txt"), text); !s.ok()) {
      return DataError(s);
    }
    if (auto s = WriteFileAtomic(dir / (id + ".jsonl"), jsonl); !s.ok()) {
      return DataError(s);
    }
    levels.push_back({{"level", level},
                      {"p", corpus.noise.p},
                      {"seed", corpus.noise.seed},
                      {"text", id + ".txt"},
                      {"text_sha256", Sha256Hex(text)},
                      {"provenance", id + ".jsonl"},
                      {"provenance_sha256", Sha256Hex(jsonl)}});
  }
  manifest["levels"] = levels;
  if (auto s = WriteFileAtomic(dir / (base + "." + args.type + ".manifest.json"),
                               manifest.dump(2) + "\n");
      !s.ok()) {
    return DataError(s);
  }
  return kExitOk;
}

// --- eval -------------------------------------------------------------------

struct EvalArgs {
  std::string metric;
  std::string hyp;
  std::string ref;
  std::string qe_clean;
  std::string qe_noisy;
  std::string scores_out;
  std::string system = "system";
  int char_order = 6;
  int word_order = 0;
  double beta = 2.0;
  std::string tokenize = "none";
  int max_order = 4;
};

int RunEval(const EvalArgs& args, int jobs) {
  if (args.metric == "delta-qe") {
    if (args.qe_clean.empty() || args.qe_noisy.empty()) {
      return UsageError("--metric delta-qe needs --qe-clean and --qe-noisy");
    }
    auto clean = ReadScoreFile(args.qe_clean);
    if (!clean.ok()) return DataError(clean.status());
    auto noisy = ReadScoreFile(args.qe_noisy);
    if (!noisy.ok()) return DataError(noisy.status());
    auto delta = DeltaQe(*clean, *noisy);
    if (!delta.ok()) return DataError(delta.status());
    std::cout << absl::StrFormat("delta-qe\t%.6f\n", *delta);
    return kExitOk;
  }
  if (args.metric == "faux-scores") {
    if (args.qe_noisy.empty()) {
      return UsageError("--metric faux-scores needs --qe-noisy");
    }
    auto scores = ReadScoreFile(args.qe_noisy);
    if (!scores.ok()) return DataError(scores.status());
    auto value = FauxFromScores(*scores);
    if (!value.ok()) return DataError(value.status());
    std::cout << absl::StrFormat("faux-scores\t%.6f\n", *value);
    return kExitOk;
  }
  if (args.hyp.empty() || args.ref.empty()) {
    return UsageError(absl::StrCat("--metric ", args.metric, " needs --hyp and --ref"));
  }
  ChrfParams chrf;
  chrf.char_order = args.char_order;
  chrf.word_order = args.word_order;
  chrf.beta = args.beta;
  BleuParams bleu;
  bleu.max_order = args.max_order;
  auto tokenizer = ParseBleuTokenizer(args.tokenize);
  if (!tokenizer.ok()) return UsageError(std::string(tokenizer.status().message()));
  bleu.tokenizer = *tokenizer;
  if (auto s = ValidateChrfParams(chrf); !s.ok()) {
    return UsageError(std::string(s.message()));
  }
  if (auto s = ValidateBleuParams(bleu); !s.ok()) {
    return UsageError(std::string(s.message()));
  }

  auto hyp = LoadPlainCorpus(args.hyp);
  if (!hyp.ok()) return DataError(hyp.status());
  auto ref = LoadPlainCorpus(args.ref);
  if (!ref.ok()) return DataError(ref.status());
  const std::vector<std::string> hyps = Texts(*hyp);
  const std::vector<std::string> refs = Texts(*ref);
  if (hyps.size() != refs.size()) {
    return DataError(absl::InvalidArgumentError(absl::StrCat(
        args.hyp, " has ", hyps.size(), " lines but ", args.ref, " has ",
        refs.size())));
  }

  ScoreFile file;
  if (args.metric == "chrf" || args.metric == "faux-chrf") {
    MetricSpec spec;
    spec.name = args.metric;
    spec.kind = MetricKind::kChrf;
    spec.chrf = chrf;
    auto scored = ScoreNative(spec, args.system, hyps, refs, jobs);
    if (!scored.ok()) return DataError(scored.status());
    file = std::move(*scored);
  } else if (args.metric == "bleu" || args.metric == "faux-bleu") {
    if (hyps.empty()) {
      return DataError(absl::InvalidArgumentError("BLEU of an empty corpus"));
    }
    MetricSpec spec;
    spec.name = args.metric;
    spec.kind = MetricKind::kBleu;
    spec.bleu = bleu;
    auto scored = ScoreNative(spec, args.system, hyps, refs, jobs);
    if (!scored.ok()) return DataError(scored.status());
    file = std::move(*scored);
  } else if (args.metric == "token-f1") {
    file.system = args.system;
    file.metric = args.metric;
    for (size_t i = 0; i < hyps.size(); ++i) {
      file.rows.emplace_back(static_cast<int64_t>(i),
                             TokenF1(WhitespacePieces(hyps[i]),
                                     WhitespacePieces(refs[i])));
    }
  } else {
    return UsageError(absl::StrCat("unknown metric '", args.metric, "'"));
  }
  if (!args.scores_out.empty()) {
    if (auto s = WriteScoreFile(file, args.scores_out); !s.ok()) return DataError(s);
  }
  const double corpus = file.corpus_score ? *file.corpus_score : file.Mean();
  std::cout << absl::StrFormat("%s\t%.6f\n", args.metric, corpus);
  return kExitOk;
}

// --- slope ------------------------------------------------------------------

struct SlopeArgs {
  std::string trajectory;
  std::string system = "system";
  std::string metric = "metric";
  std::string noise_type = "noise";
};

// CSV with header `p,score`; the row with p = 0 is the clean score.
absl::StatusOr<Trajectory> ReadTrajectoryCsv(const SlopeArgs& args) {
  ASSIGN_OR_RETURN(std::string text, ReadFile(args.trajectory));
  std::optional<double> clean;
  std::vector<QualityPoint> points;
  size_t line_no = 0;
  for (absl::string_view line : absl::StrSplit(text, '\n')) {
    ++line_no;
    line = absl::StripAsciiWhitespace(line);
    if (line.empty() || line.front() == '#') continue;
    std::vector<absl::string_view> cells = absl::StrSplit(line, ',');
    if (line_no == 1 && cells.size() == 2 && cells[0] == "p") continue;
    double p = 0, score = 0;
    if (cells.size() != 2 ||
        !absl::SimpleAtod(absl::StripAsciiWhitespace(cells[0]), &p) ||
        !absl::SimpleAtod(absl::StripAsciiWhitespace(cells[1]), &score)) {
      return absl::InvalidArgumentError(absl::StrCat(
          args.trajectory, ":", line_no, ": expected p,score"));
    }
    if (p == 0.0) {
      if (clean) {
        return absl::InvalidArgumentError(
            absl::StrCat(args.trajectory, ": more than one p=0 row"));
      }
      clean = score;
    } else {
      points.push_back(QualityPoint{p, score});
    }
  }
  if (!clean) {
    return absl::InvalidArgumentError(
        absl::StrCat(args.trajectory, ": no clean (p=0) row"));
  }
  return BuildTrajectoryFromCorpusScores(args.system, args.metric,
                                         args.noise_type, *clean,
                                         std::move(points));
}

int RunSlope(const SlopeArgs& args) {
  auto trajectory = ReadTrajectoryCsv(args);
  if (!trajectory.ok()) return DataError(trajectory.status());
  auto fit = FitSlope(*trajectory);
  if (!fit.ok()) return DataError(fit.status());
  std::cout << absl::StrFormat("slope\t%.6f\nn_points\t%d\nrss\t%.6g\n",
                               fit->slope, fit->n_points, fit->rss);
  return kExitOk;
}

// --- fertility --------------------------------------------------------------

struct FertilityArgs {
  std::string in;
  std::string bpe;
  std::string pieces;
  bool chars = false;
};

int RunFertility(const FertilityArgs& args) {
  const int modes = !args.bpe.empty() + !args.pieces.empty() + args.chars;
  if (modes != 1) {
    return UsageError("give exactly one of --bpe, --pieces, --chars");
  }
  auto segments = LoadPlainCorpus(args.in);
  if (!segments.ok()) return DataError(segments.status());
  absl::StatusOr<double> fertility;
  if (!args.pieces.empty()) {
    auto pieces = LoadPlainCorpus(args.pieces);
    if (!pieces.ok()) return DataError(pieces.status());
    fertility = FertilityFromPieces(*segments, *pieces);
  } else if (args.chars) {
    fertility = Fertility(*segments, CharPieces);
  } else {
    auto model = BpeModel::Load(args.bpe);
    if (!model.ok()) return DataError(model.status());
    fertility = Fertility(*segments, [&model](std::string_view s) {
      return model->Encode(s);
    });
  }
  if (!fertility.ok()) return DataError(fertility.status());
  std::cout << absl::StrFormat("fertility\t%.6f\n", *fertility);
  return kExitOk;
}

// --- gen-train --------------------------------------------------------------

struct GenTrainArgs {
  std::string task = "correction";
  std::string src;
  std::string tgt;
  std::string src_lang = "en";
  std::string tgt_lang = "xx";
  std::string mix = "swap=0.15,dupe=0.15,drop=0.15,key=0.15";
  uint64_t seed = 0;
  std::string layout;
  int64_t sample = -1;
  std::string name;
  std::string out_dir;
};

int RunGenTrain(const GenTrainArgs& args, int jobs) {
  const KeyboardLayout* layout = nullptr;
  if (!args.layout.empty()) {
    auto resolved = ResolveLayout(args.layout);
    if (!resolved.ok()) return DataError(resolved.status());
    layout = *resolved;
  }
  const std::string name = args.name.empty() ? args.task : args.name;
  std::map<std::string, fs::path> sources{{"source", args.src}};
  if (!args.tgt.empty()) sources["target"] = args.tgt;

  if (args.task == "validation") {
    if (layout == nullptr) return UsageError("validation sets need --layout");
    ParallelCorpus dev;
    if (args.tgt.empty()) {
      auto src = LoadPlainCorpus(args.src);
      if (!src.ok()) return DataError(src.status());
      dev.source = std::move(*src);
    } else {
      auto loaded = LoadParallelCorpus(args.src, args.tgt, {args.src_lang, args.tgt_lang});
      if (!loaded.ok()) return DataError(loaded.status());
      dev = std::move(*loaded);
    }
    auto set = MakeValidationSet(dev, args.seed, layout, BaseId(args.src), jobs);
    if (!set.ok()) return DataError(set.status());
    const fs::path dir = args.out_dir;
    if (auto s = WritePlainCorpus(set->corpus.source, dir / (name + ".source.txt"));
        !s.ok()) {
      return DataError(s);
    }
    if (set->corpus.target) {
      if (auto s = WritePlainCorpus(*set->corpus.target, dir / (name + ".target.txt"));
          !s.ok()) {
        return DataError(s);
      }
    }
    if (auto s = WriteNoisedJsonl(set->noised_half, dir / (name + ".provenance.jsonl"));
        !s.ok()) {
      return DataError(s);
    }
    return kExitOk;
  }

  auto rates = ParseMixRates(args.mix);
  if (!rates.ok()) return UsageError(std::string(rates.status().message()));
  MixSpec mix{*rates, args.seed, layout};
  if (auto s = ValidateMixSpec(mix); !s.ok()) return UsageError(std::string(s.message()));

  absl::StatusOr<TrainingSet> set;
  if (args.task == "translation") {
    if (args.tgt.empty()) return UsageError("--task translation needs --tgt");
    auto corpus = LoadParallelCorpus(args.src, args.tgt, {args.src_lang, args.tgt_lang});
    if (!corpus.ok()) return DataError(corpus.status());
    const size_t n = args.sample < 0 ? corpus->source.size()
                                     : static_cast<size_t>(args.sample);
    set = MakeMtTrainingSet(*corpus, mix, n, BaseId(args.src), jobs);
  } else if (args.task == "correction") {
    auto segments = LoadPlainCorpus(args.src);
    if (!segments.ok()) return DataError(segments.status());
    const size_t n =
        args.sample < 0 ? segments->size() : static_cast<size_t>(args.sample);
    set = MakeCorrectionTrainingSet(*segments, mix, n, BaseId(args.src), jobs);
  } else {
    return UsageError(absl::StrCat("unknown task '", args.task, "'"));
  }
  if (!set.ok()) return DataError(set.status());
  if (auto s = WriteTrainingSet(*set, args.out_dir, name, sources); !s.ok()) {
    return DataError(s);
  }
  return kExitOk;
}

// --- pipeline ---------------------------------------------------------------

struct PipelineArgs {
  std::string manifest;
  std::string runs = "runs";
  bool timing = false;
};

int RunPipeline(const PipelineArgs& args, int jobs) {
  auto spec = LoadExperimentSpec(args.manifest, ProcessEnv());
  if (!spec.ok()) return DataError(spec.status());
  ExperimentOptions options;
  options.runs_root = args.runs;
  options.jobs = jobs;
  options.record_timing = args.timing;
  auto summary = RunExperiment(*spec, options);
  if (!summary.ok()) return DataError(summary.status());
  std::cout << absl::StrFormat(
      "experiment\t%s\nruns_executed\t%d\nruns_resumed\t%d\nexternal_calls\t%d\n",
      summary->experiment_dir.string(), summary->runs_executed,
      summary->runs_resumed, summary->external_calls);
  return kExitOk;
}

// --- report -----------------------------------------------------------------

struct ReportArgs {
  std::string runs;
  std::string out;
  std::string baseline;
  std::string challenger;
  std::string metric;
  double tie_epsilon = 0.0;
};

int RunReport(const ReportArgs& args) {
  const bool any = !args.baseline.empty() || !args.challenger.empty();
  if (any && (args.baseline.empty() || args.challenger.empty() || args.metric.empty())) {
    return UsageError("win/loss needs --baseline, --challenger and --metric");
  }
  if (!(args.tie_epsilon >= 0.0)) return UsageError("--tie-epsilon must be >= 0");
  auto trajectories = CollectTrajectories(args.runs);
  if (!trajectories.ok()) return DataError(trajectories.status());
  std::vector<WinLossEntry> entries;
  if (any) {
    auto found = CollectWinLoss(args.runs, args.baseline, args.challenger,
                                args.metric, args.tie_epsilon);
    if (!found.ok()) return DataError(found.status());
    entries = std::move(*found);
  }
  const fs::path out = args.out.empty() ? fs::path(args.runs) / "report" : fs::path(args.out);
  if (auto s = EmitReport(*trajectories, entries, out); !s.ok()) return DataError(s);
  std::cout << FormatReportCsv(*trajectories);
  return kExitOk;
}

// --- lexnorm ----------------------------------------------------------------

struct LexNormArgs {
  std::string in;
  std::string out_raw;
  std::string out_clean;
};

int RunLexNorm(const LexNormArgs& args) {
  auto pairs = LoadLexNormCorpus(args.in);
  if (!pairs.ok()) return DataError(pairs.status());
  std::vector<Segment> raw, clean;
  for (const auto& pair : *pairs) {
    raw.push_back(pair.raw);
    clean.push_back(pair.normalized);
  }
  if (auto s = WritePlainCorpus(raw, args.out_raw); !s.ok()) return DataError(s);
  if (auto s = WritePlainCorpus(clean, args.out_clean); !s.ok()) return DataError(s);
  return kExitOk;
}

// --- layout -----------------------------------------------------------------

struct LayoutArgs {
  std::string name;
  bool list = false;
};

int RunLayout(const LayoutArgs& args) {
  if (args.list) {
    for (const auto& name : BuiltinLayoutNames()) std::cout << name << "\n";
    return kExitOk;
  }
  if (args.name.empty()) return UsageError("give a layout name or path, or --list");
  auto layout = ResolveLayout(args.name);
  if (!layout.ok()) return DataError(layout.status());
  std::cout << (*layout)->Format();
  return kExitOk;
}

int Main(int argc, char** argv) {
  CLI::App app{"Character-noise robustness toolkit for machine translation"};
  app.name("mtnoise");
  app.require_subcommand(1);
  app.fallthrough();  // global options may follow the subcommand
  app.set_config("--config", "", "TOML/INI file with flag values (flags win)");
  app.allow_config_extras(CLI::config_extras_mode::error);
  int jobs = 1;
  app.add_option("--jobs", jobs, "Worker threads; outputs do not depend on it")
      ->check(CLI::Range(1, 1024));

  NoiseArgs noise;
  auto* noise_cmd = app.add_subcommand("noise", "Noise one corpus at level p");
  noise_cmd->add_option("--type", noise.type, "swap, dupe, drop or key")->required();
  noise_cmd->add_option("--p", noise.p, "Proportion of tokens to noise")->required();
  noise_cmd->add_option("--seed", noise.seed, "Random seed");
  noise_cmd->add_option("--layout", noise.layout, "Keyboard layout name or file (key noise)");
  noise_cmd->add_option("--in", noise.in, "Clean plain-text corpus")->required();
  noise_cmd->add_option("--out", noise.out, "Noised plain-text corpus")->required();
  noise_cmd->add_option("--provenance", noise.provenance,
                        "JSONL provenance (default: <out>.jsonl)");
  noise_cmd->add_option("--base-id", noise.base_id,
                        "Identifier of the clean corpus (default: input file stem)");

  LadderArgs ladder;
  auto* ladder_cmd = app.add_subcommand("ladder", "Noise a corpus at p = 0.1 .. 1.0");
  ladder_cmd->add_option("--type", ladder.type, "swap, dupe, drop or key")->required();
  ladder_cmd->add_option("--seed", ladder.seed, "Random seed");
  ladder_cmd->add_option("--layout", ladder.layout, "Keyboard layout (key noise)");
  ladder_cmd->add_option("--in", ladder.in, "Clean plain-text corpus")->required();
  ladder_cmd->add_option("--out-dir", ladder.out_dir, "Output directory")->required();
  ladder_cmd->add_option("--base-id", ladder.base_id,
                         "Identifier of the clean corpus (default: input file stem)");

  EvalArgs eval;
  auto* eval_cmd = app.add_subcommand("eval", "Score hypotheses against references");
  eval_cmd->add_option("--metric", eval.metric,
                       "chrf, bleu, token-f1, faux-chrf, faux-bleu, delta-qe, faux-scores")
      ->required();
  eval_cmd->add_option("--hyp", eval.hyp, "Hypotheses (noisy-source output for faux-*)");
  eval_cmd->add_option("--ref", eval.ref, "References (clean-source output for faux-*)");
  eval_cmd->add_option("--qe-clean", eval.qe_clean, "QE scores of the clean run (delta-qe)");
  eval_cmd->add_option("--qe-noisy", eval.qe_noisy,
                       "QE scores of the noisy run (delta-qe, faux-scores)");
  eval_cmd->add_option("--scores-out", eval.scores_out, "Write per-segment scores (TSV)");
  eval_cmd->add_option("--system", eval.system, "System name recorded in the score file");
  eval_cmd->add_option("--char-order", eval.char_order, "chrF character n-gram order");
  eval_cmd->add_option("--word-order", eval.word_order, "chrF word n-gram order");
  eval_cmd->add_option("--beta", eval.beta, "chrF recall weight");
  eval_cmd->add_option("--tokenize", eval.tokenize, "BLEU tokenizer: none, char, pretokenized");
  eval_cmd->add_option("--max-order", eval.max_order, "BLEU maximum n-gram order");

  SlopeArgs slope;
  auto* slope_cmd = app.add_subcommand("slope", "Fit a through-origin slope");
  slope_cmd->add_option("--trajectory", slope.trajectory,
                        "CSV `p,score`; the p=0 row is the clean score")
      ->required();

  FertilityArgs fert;
  auto* fert_cmd = app.add_subcommand("fertility", "Subword pieces per word");
  fert_cmd->add_option("--in", fert.in, "Plain-text corpus")->required();
  fert_cmd->add_option("--bpe", fert.bpe, "BPE merges file");
  fert_cmd->add_option("--pieces", fert.pieces, "Pre-tokenized pieces, one line per segment");
  fert_cmd->add_flag("--chars", fert.chars, "Use code points as pieces");

  GenTrainArgs gen;
  auto* gen_cmd = app.add_subcommand("gen-train", "Generate noisy training data");
  gen_cmd->add_option("--task", gen.task, "translation, correction or validation")
      ->check(CLI::IsMember({"translation", "correction", "validation"}));
  gen_cmd->add_option("--src", gen.src, "Source-side corpus")->required();
  gen_cmd->add_option("--tgt", gen.tgt, "Target-side corpus (translation)");
  gen_cmd->add_option("--src-lang", gen.src_lang, "Source language tag");
  gen_cmd->add_option("--tgt-lang", gen.tgt_lang, "Target language tag");
  gen_cmd->add_option("--mix", gen.mix, "Per-type rates, e.g. swap=0.15,dupe=0.15");
  gen_cmd->add_option("--seed", gen.seed, "Random seed");
  gen_cmd->add_option("--layout", gen.layout, "Keyboard layout (key noise)");
  gen_cmd->add_option("--sample", gen.sample, "Subsample size (default: whole corpus)");
  gen_cmd->add_option("--name", gen.name, "Output file prefix (default: the task)");
  gen_cmd->add_option("--out-dir", gen.out_dir, "Output directory")->required();

  PipelineArgs pipe;
  auto* pipe_cmd = app.add_subcommand("pipeline", "Run an experiment manifest");
  pipe_cmd->add_option("--manifest", pipe.manifest, "Experiment JSON")->required();
  pipe_cmd->add_option("--runs", pipe.runs, "Runs root directory");
  pipe_cmd->add_flag("--timing", pipe.timing,
                     "Record wall time in run.json (breaks byte-identical reruns)");

  ReportArgs report;
  auto* report_cmd = app.add_subcommand("report", "Slopes and win/loss from run directories");
  report_cmd->add_option("--runs", report.runs, "Experiment run directory")->required();
  report_cmd->add_option("--out", report.out, "Output directory (default: <runs>/report)");
  report_cmd->add_option("--baseline", report.baseline, "Win/loss baseline system");
  report_cmd->add_option("--challenger", report.challenger, "Win/loss challenger system");
  report_cmd->add_option("--metric", report.metric, "Win/loss metric");
  report_cmd->add_option("--tie-epsilon", report.tie_epsilon, "Score band counted as a tie");

  LexNormArgs lex;
  auto* lex_cmd = app.add_subcommand("lexnorm", "Split a lexical-normalization corpus");
  lex_cmd->add_option("--in", lex.in, "raw<TAB>normalized token file")->required();
  lex_cmd->add_option("--out-raw", lex.out_raw, "Raw sentences")->required();
  lex_cmd->add_option("--out-clean", lex.out_clean, "Normalized sentences")->required();

  LayoutArgs layout;
  auto* layout_cmd = app.add_subcommand("layout", "Print a keyboard layout with adjacency");
  layout_cmd->add_option("name", layout.name, "Built-in name or layout file");
  layout_cmd->add_flag("--list", layout.list, "List built-in layouts");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  if (*noise_cmd) return RunNoise(noise, jobs);
  if (*ladder_cmd) return RunLadder(ladder, jobs);
  if (*eval_cmd) return RunEval(eval, jobs);
  if (*slope_cmd) return RunSlope(slope);
  if (*fert_cmd) return RunFertility(fert);
  if (*gen_cmd) return RunGenTrain(gen, jobs);
  if (*pipe_cmd) return RunPipeline(pipe, jobs);
  if (*report_cmd) return RunReport(report);
  if (*lex_cmd) return RunLexNorm(lex);
  if (*layout_cmd) return RunLayout(layout);
  return kExitUsage;
}

}  // namespace
}  // namespace mtnoise

int main(int argc, char** argv) { return mtnoise::Main(argc, argv); }
