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

#include "mtnoise/external.h"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstring>
#include <mutex>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "mtnoise/utf8.h"
#include "nlohmann/json.hpp"

extern char** environ;

namespace mtnoise {
namespace {

using Json = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

constexpr size_t kStderrTail = 2048;

class Fd {
 public:
  Fd() = default;
  explicit Fd(int fd) : fd_(fd) {}
  Fd(const Fd&) = delete;
  Fd& operator=(const Fd&) = delete;
  ~Fd() { Close(); }

  int get() const { return fd_; }
  void Reset(int fd) {
    Close();
    fd_ = fd;
  }
  void Close() {
    if (fd_ >= 0) ::close(fd_);
    fd_ = -1;
  }

 private:
  int fd_ = -1;
};

absl::Status MakePipe(Fd& read_end, Fd& write_end) {
  int fds[2];
  if (::pipe2(fds, O_CLOEXEC) != 0) {
    return absl::InternalError(absl::StrCat("pipe: ", std::strerror(errno)));
  }
  read_end.Reset(fds[0]);
  write_end.Reset(fds[1]);
  return absl::OkStatus();
}

void SetNonBlocking(int fd) {
  ::fcntl(fd, F_SETFL, ::fcntl(fd, F_GETFL) | O_NONBLOCK);
}

// Writes to a child that already exited must fail with EPIPE rather than
// kill this process.
void IgnoreSigpipe() {
  static std::once_flag once;
  std::call_once(once, [] { ::signal(SIGPIPE, SIG_IGN); });
}

std::string Describe(const ExternalSystemSpec& spec) {
  return absl::StrCat("system '", spec.id, "'");
}

}  // namespace

std::string_view SystemKindName(SystemKind kind) {
  switch (kind) {
    case SystemKind::kTranslator:
      return "translator";
    case SystemKind::kCorrector:
      return "corrector";
    case SystemKind::kScorer:
      return "scorer";
  }
  return "?";
}

absl::StatusOr<SystemKind> ParseSystemKind(std::string_view name) {
  if (name == "translator") return SystemKind::kTranslator;
  if (name == "corrector") return SystemKind::kCorrector;
  if (name == "scorer") return SystemKind::kScorer;
  return absl::InvalidArgumentError(
      absl::StrCat("unknown system kind '", std::string(name), "'"));
}

absl::Status ValidateExternalSpec(const ExternalSystemSpec& spec) {
  if (spec.id.empty()) {
    return absl::InvalidArgumentError("system id must be nonempty");
  }
  if (spec.command.empty() || spec.command.front().empty()) {
    return absl::InvalidArgumentError(
        absl::StrCat(Describe(spec), ": command must be nonempty"));
  }
  if (!(spec.timeout_seconds > 0.0) || !std::isfinite(spec.timeout_seconds)) {
    return absl::InvalidArgumentError(
        absl::StrCat(Describe(spec), ": timeout must be positive"));
  }
  if (spec.batch_size < 0) {
    return absl::InvalidArgumentError(
        absl::StrCat(Describe(spec), ": batch_size must be >= 0"));
  }
  return absl::OkStatus();
}

std::string TranslatorRequest(std::string_view src, std::string_view src_lang,
                              std::string_view tgt_lang) {
  Json j;
  j["src"] = src;
  j["src_lang"] = src_lang;
  j["tgt_lang"] = tgt_lang;
  return j.dump();
}

std::string CorrectorRequest(std::string_view src, std::string_view lang) {
  Json j;
  j["src"] = src;
  j["lang"] = lang;
  return j.dump();
}

std::string ScorerRequest(std::string_view src, std::string_view mt,
                          const std::optional<std::string>& ref) {
  Json j;
  j["src"] = src;
  j["mt"] = mt;
  if (ref) j["ref"] = *ref;
  return j.dump();
}

ExternalRun RunExternal(const ExternalSystemSpec& spec,
                        const std::vector<std::string>& requests) {
  ExternalRun run;
  const Clock::time_point start = Clock::now();
  auto finish = [&](absl::Status status) {
    run.status = std::move(status);
    run.wall_seconds =
        std::chrono::duration<double>(Clock::now() - start).count();
    return std::move(run);
  };
  if (absl::Status s = ValidateExternalSpec(spec); !s.ok()) return finish(s);
  IgnoreSigpipe();

  Fd in_read, in_write, out_read, out_write, err_read, err_write;
  for (auto [r, w] : {std::pair<Fd*, Fd*>{&in_read, &in_write},
                      {&out_read, &out_write},
                      {&err_read, &err_write}}) {
    if (absl::Status s = MakePipe(*r, *w); !s.ok()) return finish(s);
  }

  posix_spawn_file_actions_t actions;
  posix_spawn_file_actions_init(&actions);
  posix_spawn_file_actions_adddup2(&actions, in_read.get(), 0);
  posix_spawn_file_actions_adddup2(&actions, out_write.get(), 1);
  posix_spawn_file_actions_adddup2(&actions, err_write.get(), 2);
  std::vector<char*> argv;
  for (const auto& arg : spec.command) argv.push_back(const_cast<char*>(arg.c_str()));
  argv.push_back(nullptr);
  pid_t pid = 0;
  const int rc =
      ::posix_spawnp(&pid, argv[0], &actions, nullptr, argv.data(), environ);
  posix_spawn_file_actions_destroy(&actions);
  in_read.Close();
  out_write.Close();
  err_write.Close();
  if (rc != 0) {
    return finish(absl::FailedPreconditionError(
        absl::StrCat(Describe(spec), ": cannot run '", spec.command.front(),
                     "': ", std::strerror(rc))));
  }
  SetNonBlocking(in_write.get());
  SetNonBlocking(out_read.get());
  SetNonBlocking(err_read.get());

  // Pending bytes of the request currently being written.
  std::string pending;
  size_t next_request = 0;
  std::string out_buffer;
  std::string err_tail;
  bool timed_out = false;
  bool broken_pipe = false;
  const auto timeout = std::chrono::duration_cast<Clock::duration>(
      std::chrono::duration<double>(spec.timeout_seconds));
  Clock::time_point deadline = Clock::now() + timeout;
  if (requests.empty()) in_write.Close();

  char buf[65536];
  while (out_read.get() >= 0 || err_read.get() >= 0) {
    // Refill the write buffer while the in-flight window allows.
    const size_t in_flight = next_request - run.responses.size();
    if (in_write.get() >= 0 && pending.empty() && next_request < requests.size() &&
        (spec.batch_size == 0 || in_flight < static_cast<size_t>(spec.batch_size))) {
      pending = requests[next_request] + "\n";
      ++next_request;
    }
    pollfd fds[3];
    int nfds = 0;
    int out_slot = -1, err_slot = -1, in_slot = -1;
    if (out_read.get() >= 0) {
      out_slot = nfds;
      fds[nfds++] = {out_read.get(), POLLIN, 0};
    }
    if (err_read.get() >= 0) {
      err_slot = nfds;
      fds[nfds++] = {err_read.get(), POLLIN, 0};
    }
    if (in_write.get() >= 0 && !pending.empty()) {
      in_slot = nfds;
      fds[nfds++] = {in_write.get(), POLLOUT, 0};
    }
    const auto remaining = std::chrono::duration_cast<std::chrono::milliseconds>(
        deadline - Clock::now());
    if (remaining.count() <= 0) {
      timed_out = true;
      break;
    }
    const int ready = ::poll(fds, nfds, static_cast<int>(remaining.count()) + 1);
    if (ready < 0) {
      if (errno == EINTR) continue;
      break;
    }
    if (in_slot >= 0 && (fds[in_slot].revents & (POLLOUT | POLLERR | POLLHUP))) {
      const ssize_t n = ::write(in_write.get(), pending.data(), pending.size());
      if (n > 0) {
        pending.erase(0, static_cast<size_t>(n));
      } else if (n < 0 && errno != EAGAIN && errno != EINTR) {
        broken_pipe = true;
        pending.clear();
        in_write.Close();
      }
      if (in_write.get() >= 0 && pending.empty() &&
          next_request == requests.size()) {
        in_write.Close();
      }
    }
    if (out_slot >= 0 && (fds[out_slot].revents & (POLLIN | POLLERR | POLLHUP))) {
      const ssize_t n = ::read(out_read.get(), buf, sizeof(buf));
      if (n > 0) {
        out_buffer.append(buf, static_cast<size_t>(n));
        size_t pos;
        bool progressed = false;
        while ((pos = out_buffer.find('\n')) != std::string::npos) {
          std::string line = out_buffer.substr(0, pos);
          if (!line.empty() && line.back() == '\r') line.pop_back();
          run.responses.push_back(std::move(line));
          out_buffer.erase(0, pos + 1);
          progressed = true;
        }
        if (progressed) deadline = Clock::now() + timeout;
      } else if (n == 0 || (errno != EAGAIN && errno != EINTR)) {
        out_read.Close();
      }
    }
    if (err_slot >= 0 && (fds[err_slot].revents & (POLLIN | POLLERR | POLLHUP))) {
      const ssize_t n = ::read(err_read.get(), buf, sizeof(buf));
      if (n > 0) {
        err_tail.append(buf, static_cast<size_t>(n));
        if (err_tail.size() > kStderrTail) {
          err_tail.erase(0, err_tail.size() - kStderrTail);
        }
      } else if (n == 0 || (errno != EAGAIN && errno != EINTR)) {
        err_read.Close();
      }
    }
  }
  in_write.Close();
  // A final line without a newline still counts as a response.
  if (!out_buffer.empty() && !timed_out) run.responses.push_back(out_buffer);

  int wstatus = 0;
  if (!timed_out) {
    // Streams are closed; give the child the same grace period to exit.
    while (true) {
      const pid_t w = ::waitpid(pid, &wstatus, WNOHANG);
      if (w == pid) break;
      if (w < 0 && errno != EINTR) break;
      if (Clock::now() >= deadline) {
        timed_out = true;
        break;
      }
      ::usleep(1000);
    }
  }
  if (timed_out) {
    ::kill(pid, SIGKILL);
    ::waitpid(pid, &wstatus, 0);
    return finish(absl::DeadlineExceededError(absl::StrCat(
        Describe(spec), ": timed out after ", spec.timeout_seconds,
        "s without progress (", run.responses.size(), " of ", requests.size(),
        " responses received)")));
  }

  while (!err_tail.empty() && (err_tail.back() == '\n' || err_tail.back() == '\r')) {
    err_tail.pop_back();
  }
  const std::string stderr_note =
      err_tail.empty() ? "" : absl::StrCat("; stderr: ", err_tail);
  if (WIFSIGNALED(wstatus)) {
    run.exit_code = 128 + WTERMSIG(wstatus);
    return finish(absl::AbortedError(
        absl::StrCat(Describe(spec), ": killed by signal ", WTERMSIG(wstatus),
                     stderr_note)));
  }
  run.exit_code = WIFEXITED(wstatus) ? WEXITSTATUS(wstatus) : -1;
  if (run.exit_code != 0) {
    return finish(absl::AbortedError(absl::StrCat(
        Describe(spec), ": exited with status ", run.exit_code, stderr_note)));
  }
  if (run.responses.size() != requests.size()) {
    const size_t offset = std::min(run.responses.size(), requests.size());
    return finish(absl::DataLossError(absl::StrCat(
        Describe(spec), ": line-count mismatch: sent ", requests.size(),
        " requests, got ", run.responses.size(),
        " response lines; first unmatched offset ", offset,
        broken_pipe ? " (child closed its input early)" : "")));
  }
  for (size_t i = 0; i < run.responses.size(); ++i) {
    if (size_t bad = FindInvalidUtf8(run.responses[i]);
        bad != std::string_view::npos) {
      return finish(absl::DataLossError(
          absl::StrCat(Describe(spec), ": response at offset ", i,
                       " is not valid UTF-8 (byte ", bad, ")")));
    }
  }
  return finish(absl::OkStatus());
}

absl::StatusOr<std::vector<double>> ParseScoreResponses(
    const std::vector<std::string>& responses) {
  std::vector<double> scores;
  scores.reserve(responses.size());
  for (size_t i = 0; i < responses.size(); ++i) {
    std::string_view text = responses[i];
    while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) {
      text.remove_prefix(1);
    }
    while (!text.empty() && (text.back() == ' ' || text.back() == '\t')) {
      text.remove_suffix(1);
    }
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (text.empty() || ec != std::errc() || ptr != text.data() + text.size() ||
        !std::isfinite(value)) {
      return absl::DataLossError(absl::StrCat(
          "unparseable score at offset ", i, ": '", responses[i], "'"));
    }
    scores.push_back(value);
  }
  return scores;
}

}  // namespace mtnoise
