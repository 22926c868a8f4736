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

#include "mtnoise/corpus_io.h"

#include <charconv>
#include <cmath>
#include <set>

#include <nlohmann/json.hpp>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "mtnoise/file_util.h"
#include "mtnoise/status_macros.h"
#include "mtnoise/utf8.h"

namespace mtnoise {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

namespace {

std::vector<std::string_view> SplitLines(std::string_view contents) {
  std::vector<std::string_view> lines;
  size_t start = 0;
  while (start < contents.size()) {
    size_t nl = contents.find('\n', start);
    if (nl == std::string_view::npos) {
      lines.push_back(contents.substr(start));
      break;
    }
    lines.push_back(contents.substr(start, nl - start));
    start = nl + 1;
  }
  return lines;
}

absl::Status CheckUtf8(std::string_view contents) {
  const size_t bad = FindInvalidUtf8(contents);
  if (bad != std::string_view::npos) {
    return absl::InvalidArgumentError(
        absl::StrCat("invalid UTF-8 at byte offset ", bad));
  }
  return absl::OkStatus();
}

absl::Status WithPath(const absl::Status& status, const fs::path& path) {
  if (status.ok()) return status;
  return absl::Status(status.code(),
                      absl::StrCat(path.string(), ": ", status.message()));
}

}  // namespace

std::string FormatDouble(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

// ---------------------------------------------------------------------------
// Plain text

absl::StatusOr<std::vector<Segment>> ParsePlainCorpus(
    std::string_view contents) {
  RETURN_IF_ERROR(CheckUtf8(contents));
  std::vector<Segment> out;
  int64_t index = 0;
  for (std::string_view line : SplitLines(contents)) {
    out.push_back(Segment{index++, std::string(line)});
  }
  return out;
}

absl::StatusOr<std::vector<Segment>> LoadPlainCorpus(const fs::path& path) {
  ASSIGN_OR_RETURN(std::string contents, ReadFile(path));
  auto parsed = ParsePlainCorpus(contents);
  if (!parsed.ok()) return WithPath(parsed.status(), path);
  return parsed;
}

std::string FormatPlainCorpus(const std::vector<Segment>& segments) {
  std::string out;
  for (const auto& s : segments) {
    out += s.text;
    out.push_back('\n');
  }
  return out;
}

absl::Status WritePlainCorpus(const std::vector<Segment>& segments,
                              const fs::path& path) {
  RETURN_IF_ERROR(ValidateSegments(segments));
  return WriteFileAtomic(path, FormatPlainCorpus(segments));
}

absl::StatusOr<ParallelCorpus> LoadParallelCorpus(const fs::path& source_path,
                                                  const fs::path& target_path,
                                                  LanguagePair languages) {
  ParallelCorpus corpus;
  corpus.languages = std::move(languages);
  ASSIGN_OR_RETURN(corpus.source, LoadPlainCorpus(source_path));
  if (!target_path.empty()) {
    ASSIGN_OR_RETURN(auto target, LoadPlainCorpus(target_path));
    corpus.target = std::move(target);
  }
  RETURN_IF_ERROR(ValidateCorpus(corpus));
  return corpus;
}

// ---------------------------------------------------------------------------
// Lexical normalization

absl::StatusOr<std::vector<LexNormPair>> ParseLexNormCorpus(
    std::string_view contents) {
  RETURN_IF_ERROR(CheckUtf8(contents));
  std::vector<LexNormPair> out;
  std::vector<std::string> raw;
  std::vector<std::string> normalized;
  bool open = false;

  auto flush = [&] {
    if (!open) return;
    const auto index = static_cast<int64_t>(out.size());
    out.push_back(LexNormPair{Segment{index, absl::StrJoin(raw, " ")},
                              Segment{index, absl::StrJoin(normalized, " ")}});
    raw.clear();
    normalized.clear();
    open = false;
  };

  size_t line_no = 0;
  for (std::string_view line : SplitLines(contents)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) {
      flush();
      continue;
    }
    const size_t tab = line.find('\t');
    if (tab == std::string_view::npos) {
      return absl::InvalidArgumentError(
          absl::StrCat("line ", line_no, ": expected raw<TAB>normalized"));
    }
    std::string_view norm = line.substr(tab + 1);
    if (norm.find('\t') != std::string_view::npos) {
      return absl::InvalidArgumentError(absl::StrCat(
          "line ", line_no, ": trailing garbage after normalized field"));
    }
    if (tab == 0) {
      return absl::InvalidArgumentError(
          absl::StrCat("line ", line_no, ": empty raw token"));
    }
    raw.emplace_back(line.substr(0, tab));
    if (!norm.empty()) normalized.emplace_back(norm);
    open = true;
  }
  flush();
  return out;
}

absl::StatusOr<std::vector<LexNormPair>> LoadLexNormCorpus(
    const fs::path& path) {
  ASSIGN_OR_RETURN(std::string contents, ReadFile(path));
  auto parsed = ParseLexNormCorpus(contents);
  if (!parsed.ok()) return WithPath(parsed.status(), path);
  return parsed;
}

// ---------------------------------------------------------------------------
// Noised JSONL

namespace {

Json NoiseToJson(const NoiseProvenance& noise) {
  Json j;
  j["base"] = noise.base;
  j["type"] = noise.kind;
  j["p"] = noise.p;
  if (!noise.rates.empty()) {
    Json rates = Json::object();
    for (const auto& [name, rate] : noise.rates) rates[name] = rate;
    j["rates"] = rates;
  }
  j["seed"] = noise.seed;
  j["layout"] = noise.layout ? Json(*noise.layout) : Json(nullptr);
  j["layout_sha256"] =
      noise.layout_sha256 ? Json(*noise.layout_sha256) : Json(nullptr);
  return j;
}

absl::Status SchemaError(size_t line_no, std::string_view what) {
  return absl::InvalidArgumentError(
      absl::StrCat("line ", line_no, ": ", std::string(what)));
}

// Fetches a required member and checks its JSON type.
absl::StatusOr<const Json*> Member(const Json& obj, const char* key,
                                   Json::value_t want, size_t line_no) {
  auto it = obj.find(key);
  if (it == obj.end()) {
    return SchemaError(line_no, absl::StrCat("missing field '", key, "'"));
  }
  const bool number_ok =
      want == Json::value_t::number_float && it->is_number();
  const bool unsigned_ok =
      want == Json::value_t::number_unsigned && it->is_number_unsigned();
  const bool integer_ok =
      want == Json::value_t::number_integer && it->is_number_integer();
  if (!(number_ok || unsigned_ok || integer_ok || it->type() == want)) {
    return SchemaError(line_no,
                       absl::StrCat("field '", key, "' has wrong type"));
  }
  return &*it;
}

absl::StatusOr<std::optional<std::string>> OptionalString(const Json& obj,
                                                          const char* key,
                                                          size_t line_no) {
  auto it = obj.find(key);
  if (it == obj.end()) {
    return SchemaError(line_no, absl::StrCat("missing field '", key, "'"));
  }
  if (it->is_null()) return std::optional<std::string>();
  if (!it->is_string()) {
    return SchemaError(line_no,
                       absl::StrCat("field '", key, "' has wrong type"));
  }
  return std::optional<std::string>(it->get<std::string>());
}

absl::StatusOr<NoiseProvenance> NoiseFromJson(const Json& j, size_t line_no) {
  using V = Json::value_t;
  NoiseProvenance noise;
  ASSIGN_OR_RETURN(const Json* base, Member(j, "base", V::string, line_no));
  ASSIGN_OR_RETURN(const Json* type, Member(j, "type", V::string, line_no));
  ASSIGN_OR_RETURN(const Json* p, Member(j, "p", V::number_float, line_no));
  ASSIGN_OR_RETURN(const Json* seed,
                   Member(j, "seed", V::number_unsigned, line_no));
  noise.base = base->get<std::string>();
  noise.kind = type->get<std::string>();
  noise.p = p->get<double>();
  noise.seed = seed->get<uint64_t>();
  if (noise.kind != "mix" && !ParseNoiseType(noise.kind).ok()) {
    return SchemaError(line_no, absl::StrCat("unknown noise type '",
                                             noise.kind, "'"));
  }
  if (auto it = j.find("rates"); it != j.end()) {
    if (!it->is_object()) return SchemaError(line_no, "rates must be an object");
    for (const auto& [name, rate] : it->items()) {
      if (!rate.is_number()) {
        return SchemaError(line_no, "rates values must be numbers");
      }
      noise.rates[name] = rate.get<double>();
    }
  }
  ASSIGN_OR_RETURN(noise.layout, OptionalString(j, "layout", line_no));
  ASSIGN_OR_RETURN(noise.layout_sha256,
                   OptionalString(j, "layout_sha256", line_no));
  return noise;
}

absl::StatusOr<PerturbationRecord> RecordFromJson(const Json& j,
                                                  size_t line_no) {
  using V = Json::value_t;
  if (!j.is_object()) return SchemaError(line_no, "perturbation not an object");
  PerturbationRecord r;
  ASSIGN_OR_RETURN(const Json* token,
                   Member(j, "token", V::number_integer, line_no));
  ASSIGN_OR_RETURN(const Json* type, Member(j, "type", V::string, line_no));
  ASSIGN_OR_RETURN(const Json* pos, Member(j, "pos", V::number_integer, line_no));
  ASSIGN_OR_RETURN(const Json* detail, Member(j, "detail", V::string, line_no));
  ASSIGN_OR_RETURN(const Json* applied,
                   Member(j, "applied", V::boolean, line_no));
  auto parsed_type = ParseNoiseType(type->get<std::string>());
  if (!parsed_type.ok()) {
    return SchemaError(line_no, std::string(parsed_type.status().message()));
  }
  r.token_index = token->get<int32_t>();
  r.type = *parsed_type;
  r.char_position = pos->get<int32_t>();
  r.detail = detail->get<std::string>();
  r.applied = applied->get<bool>();
  if (r.token_index < 0 || r.char_position < 0) {
    return SchemaError(line_no, "negative token or position index");
  }
  return r;
}

}  // namespace

std::string FormatNoisedJsonl(const NoisedCorpus& corpus) {
  const Json noise = NoiseToJson(corpus.noise);
  std::string out;
  for (const auto& seg : corpus.segments) {
    Json line;
    line["index"] = seg.index;
    line["text"] = seg.text;
    line["noise"] = noise;
    Json records = Json::array();
    for (const auto& r : seg.perturbations) {
      Json rec;
      rec["token"] = r.token_index;
      rec["type"] = std::string(NoiseTypeName(r.type));
      rec["pos"] = r.char_position;
      rec["detail"] = r.detail;
      rec["applied"] = r.applied;
      records.push_back(std::move(rec));
    }
    line["perturbations"] = std::move(records);
    out += line.dump();
    out.push_back('\n');
  }
  return out;
}

absl::StatusOr<NoisedCorpus> ParseNoisedJsonl(std::string_view contents) {
  using V = Json::value_t;
  RETURN_IF_ERROR(CheckUtf8(contents));
  NoisedCorpus corpus;
  size_t line_no = 0;
  for (std::string_view line : SplitLines(contents)) {
    ++line_no;
    if (line.empty()) continue;
    Json j = Json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (j.is_discarded() || !j.is_object()) {
      return SchemaError(line_no, "not a JSON object");
    }
    ASSIGN_OR_RETURN(const Json* index,
                     Member(j, "index", V::number_integer, line_no));
    ASSIGN_OR_RETURN(const Json* text, Member(j, "text", V::string, line_no));
    ASSIGN_OR_RETURN(const Json* noise_json,
                     Member(j, "noise", V::object, line_no));
    ASSIGN_OR_RETURN(const Json* records,
                     Member(j, "perturbations", V::array, line_no));
    ASSIGN_OR_RETURN(NoiseProvenance noise, NoiseFromJson(*noise_json, line_no));
    if (corpus.segments.empty()) {
      corpus.noise = noise;
    } else if (!(noise == corpus.noise)) {
      return SchemaError(line_no, "noise provenance differs from line 1");
    }
    NoisedSegment seg;
    seg.index = index->get<int64_t>();
    seg.text = text->get<std::string>();
    if (seg.text.find('\n') != std::string::npos) {
      return SchemaError(line_no, "text contains a newline");
    }
    for (const auto& rj : *records) {
      ASSIGN_OR_RETURN(PerturbationRecord r, RecordFromJson(rj, line_no));
      seg.perturbations.push_back(std::move(r));
    }
    corpus.segments.push_back(std::move(seg));
  }
  return corpus;
}

absl::Status WriteNoisedJsonl(const NoisedCorpus& corpus, const fs::path& path) {
  return WriteFileAtomic(path, FormatNoisedJsonl(corpus));
}

absl::StatusOr<NoisedCorpus> ReadNoisedJsonl(const fs::path& path) {
  ASSIGN_OR_RETURN(std::string contents, ReadFile(path));
  auto parsed = ParseNoisedJsonl(contents);
  if (!parsed.ok()) return WithPath(parsed.status(), path);
  return parsed;
}

// ---------------------------------------------------------------------------
// Score files

std::string FormatScoreFile(const ScoreFile& file) {
  std::string out;
  if (!file.system.empty()) absl::StrAppend(&out, "# system: ", file.system, "\n");
  if (!file.metric.empty()) absl::StrAppend(&out, "# metric: ", file.metric, "\n");
  if (file.corpus_score) {
    absl::StrAppend(&out, "# corpus: ", FormatDouble(*file.corpus_score), "\n");
  }
  for (const auto& [index, score] : file.rows) {
    absl::StrAppend(&out, index, "\t", FormatDouble(score), "\n");
  }
  return out;
}

namespace {

absl::StatusOr<double> ParseFiniteDouble(std::string_view s, size_t line_no) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(value)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "line ", line_no, ": bad score '", std::string(s), "'"));
  }
  return value;
}

}  // namespace

absl::StatusOr<ScoreFile> ParseScoreFile(std::string_view contents) {
  ScoreFile file;
  std::set<int64_t> seen;
  size_t line_no = 0;
  for (std::string_view line : SplitLines(contents)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (line.front() == '#') {
      std::string_view body = line.substr(1);
      while (!body.empty() && body.front() == ' ') body.remove_prefix(1);
      auto take = [&](std::string_view key) -> std::optional<std::string_view> {
        if (body.substr(0, key.size()) == key) return body.substr(key.size());
        return std::nullopt;
      };
      if (auto v = take("system: ")) {
        file.system = std::string(*v);
      } else if (auto v = take("metric: ")) {
        file.metric = std::string(*v);
      } else if (auto v = take("corpus: ")) {
        ASSIGN_OR_RETURN(double value, ParseFiniteDouble(*v, line_no));
        file.corpus_score = value;
      }
      continue;
    }
    const size_t tab = line.find('\t');
    if (tab == std::string_view::npos) {
      return absl::InvalidArgumentError(
          absl::StrCat("line ", line_no, ": expected index<TAB>score"));
    }
    int64_t index = 0;
    std::string_view idx = line.substr(0, tab);
    auto [ptr, ec] = std::from_chars(idx.data(), idx.data() + idx.size(), index);
    if (ec != std::errc() || ptr != idx.data() + idx.size() || index < 0) {
      return absl::InvalidArgumentError(
          absl::StrCat("line ", line_no, ": bad segment index"));
    }
    ASSIGN_OR_RETURN(double score,
                     ParseFiniteDouble(line.substr(tab + 1), line_no));
    if (!seen.insert(index).second) {
      return absl::InvalidArgumentError(
          absl::StrCat("line ", line_no, ": duplicate segment index ", index));
    }
    file.rows.emplace_back(index, score);
  }
  return file;
}

absl::Status WriteScoreFile(const ScoreFile& file, const fs::path& path) {
  RETURN_IF_ERROR(ValidateScoreFile(file));
  return WriteFileAtomic(path, FormatScoreFile(file));
}

absl::StatusOr<ScoreFile> ReadScoreFile(const fs::path& path) {
  ASSIGN_OR_RETURN(std::string contents, ReadFile(path));
  auto parsed = ParseScoreFile(contents);
  if (!parsed.ok()) return WithPath(parsed.status(), path);
  return parsed;
}

}  // namespace mtnoise
