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

// Stand-in model backend speaking the line protocol: one JSON request per
// stdin line, one response line per request. Used by tests and the demo.
//
//   mtnoise-mock echo                    reply with the "src" field
//   mtnoise-mock constant --text 0.5     reply with a fixed line
//   mtnoise-mock chrf [--against ref]    scorer: chrF of "mt" vs "src"/"ref"
//   mtnoise-mock neg-edit                scorer: -(edit distance of mt to src)
//   mtnoise-mock oracle --clean FILE     corrector: line i of FILE
//   mtnoise-mock drop-line --at N        echo, but never answer request N
//   mtnoise-mock fail --code N           consume input, exit N
//   mtnoise-mock sleep --seconds S       echo after sleeping S seconds
//
// --capture FILE appends every request line to FILE.

#include <chrono>
#include <fstream>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "mtnoise/chrf.h"
#include "mtnoise/corpus_io.h"
#include "mtnoise/utf8.h"
#include "nlohmann/json.hpp"

namespace {

using Json = nlohmann::json;

int64_t EditDistance(const std::u32string& a, const std::u32string& b) {
  std::vector<int64_t> row(b.size() + 1);
  for (size_t j = 0; j <= b.size(); ++j) row[j] = static_cast<int64_t>(j);
  for (size_t i = 1; i <= a.size(); ++i) {
    int64_t diag = row[0];
    row[0] = static_cast<int64_t>(i);
    for (size_t j = 1; j <= b.size(); ++j) {
      const int64_t up = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1,
                         diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
      diag = up;
    }
  }
  return row[b.size()];
}

std::string Field(const Json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || !it->is_string()) return "";
  return it->get<std::string>();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mock backend for the mtnoise line protocol"};
  app.require_subcommand(1);
  std::string capture;
  app.add_option("--capture", capture, "Append each request line to this file");

  auto* echo = app.add_subcommand("echo", "Reply with the src field");
  std::string text;
  auto* constant = app.add_subcommand("constant", "Reply with a fixed line");
  constant->add_option("--text", text, "Reply text")->required();
  std::string against = "src";
  auto* chrf = app.add_subcommand("chrf", "Score chrF(mt, src or ref)");
  chrf->add_option("--against", against, "Field used as reference")
      ->check(CLI::IsMember({"src", "ref"}));
  auto* neg_edit = app.add_subcommand("neg-edit", "Score -(edit distance mt, src)");
  std::string clean_path;
  auto* oracle = app.add_subcommand("oracle", "Reply with line i of a file");
  oracle->add_option("--clean", clean_path, "Clean text file")->required();
  int64_t drop_at = 0;
  auto* drop = app.add_subcommand("drop-line", "Echo but skip one response");
  drop->add_option("--at", drop_at, "Zero-based request offset")->required();
  int exit_code = 1;
  auto* fail = app.add_subcommand("fail", "Read everything, then exit");
  fail->add_option("--code", exit_code, "Exit status");
  double seconds = 0;
  auto* sleep = app.add_subcommand("sleep", "Sleep, then echo");
  sleep->add_option("--seconds", seconds, "Seconds to sleep")->required();
  CLI11_PARSE(app, argc, argv);

  std::vector<mtnoise::Segment> clean;
  if (oracle->parsed()) {
    auto loaded = mtnoise::LoadPlainCorpus(clean_path);
    if (!loaded.ok()) {
      std::cerr << "error: " << loaded.status().message() << "\n";
      return 1;
    }
    clean = std::move(*loaded);
  }
  std::ofstream capture_out;
  if (!capture.empty()) capture_out.open(capture, std::ios::app);
  if (sleep->parsed()) {
    std::this_thread::sleep_for(std::chrono::duration<double>(seconds));
  }

  std::string line;
  int64_t offset = 0;
  while (std::getline(std::cin, line)) {
    if (capture_out.is_open()) capture_out << line << "\n" << std::flush;
    const int64_t i = offset++;
    if (fail->parsed()) continue;
    Json request = Json::parse(line, nullptr, false);
    if (request.is_discarded()) {
      std::cerr << "error: request " << i << " is not JSON\n";
      return 3;
    }
    std::string reply;
    if (echo->parsed() || sleep->parsed() || drop->parsed()) {
      if (drop->parsed() && i == drop_at) continue;
      reply = Field(request, "src");
    } else if (constant->parsed()) {
      reply = text;
    } else if (chrf->parsed()) {
      reply = mtnoise::FormatDouble(mtnoise::SentenceChrf(
          Field(request, "mt"), Field(request, against.c_str())));
    } else if (neg_edit->parsed()) {
      auto mt = mtnoise::DecodeUtf8(Field(request, "mt"));
      auto src = mtnoise::DecodeUtf8(Field(request, "src"));
      reply = mtnoise::FormatDouble(
          mt.ok() && src.ok() ? -static_cast<double>(EditDistance(*mt, *src)) : 0.0);
    } else if (oracle->parsed()) {
      reply = i < static_cast<int64_t>(clean.size()) ? clean[i].text : "";
    }
    std::cout << reply << "\n" << std::flush;
  }
  if (fail->parsed()) return exit_code;
  return 0;
}
