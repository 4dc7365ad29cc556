#include "idebench/adapters/subprocess.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <sstream>

#include "idebench/core/json_io.hpp"

namespace idebench {

using nlohmann::json;

namespace {

std::vector<std::string> split_command(const std::string& command) {
  std::vector<std::string> parts;
  std::istringstream in(command);
  std::string token;
  while (in >> token) parts.push_back(token);
  if (parts.empty())
    throw ValidationError("empty subprocess command");
  return parts;
}

}  // namespace

SubprocessAdapter::SubprocessAdapter(std::string command)
    : command_(std::move(command)) {}

SubprocessAdapter::~SubprocessAdapter() { shutdown(); }

void SubprocessAdapter::spawn() {
  std::vector<std::string> parts = split_command(command_);
  // argv for execvp
  std::vector<char*> argv;
  argv.reserve(parts.size() + 1);
  for (auto& p : parts) argv.push_back(p.data());
  argv.push_back(nullptr);

  int in_pipe[2], out_pipe[2];  // parent -> child, child -> parent
  if (pipe(in_pipe) != 0 || pipe(out_pipe) != 0)
    throw IoError("pipe failed: " + std::string(strerror(errno)));

  const pid_t pid = fork();
  if (pid < 0) throw IoError("fork failed: " + std::string(strerror(errno)));
  if (pid == 0) {
    dup2(in_pipe[0], STDIN_FILENO);
    dup2(out_pipe[1], STDOUT_FILENO);
    close(in_pipe[0]);
    close(in_pipe[1]);
    close(out_pipe[0]);
    close(out_pipe[1]);
    execvp(argv[0], argv.data());
    perror("execvp");
    _exit(127);
  }
  close(in_pipe[0]);
  close(out_pipe[1]);
  child_pid_ = pid;
  to_child_ = in_pipe[1];
  from_child_ = out_pipe[0];
  name_ = "subprocess:" + parts[0];
}

void SubprocessAdapter::send_line(const std::string& line) {
  if (to_child_ < 0) throw IoError("subprocess not running");
  std::string payload = line + "\n";
  size_t off = 0;
  while (off < payload.size()) {
    const ssize_t n =
        write(to_child_, payload.data() + off, payload.size() - off);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw IoError("write to subprocess failed: " +
                    std::string(strerror(errno)));
    }
    off += static_cast<size_t>(n);
  }
}

std::optional<std::string> SubprocessAdapter::read_response(
    uint64_t id, std::chrono::steady_clock::time_point until) {
  while (true) {
    // Drain complete lines already buffered.
    size_t nl;
    while ((nl = read_buffer_.find('\n')) != std::string::npos) {
      std::string line = read_buffer_.substr(0, nl);
      read_buffer_.erase(0, nl + 1);
      if (line.empty()) continue;
      try {
        const json j = json::parse(line);
        const uint64_t line_id = j.value("id", uint64_t{0});
        if (line_id == id) return line;
        if (line_id > id)
          throw IoError("subprocess answered id " + std::to_string(line_id) +
                        " before id " + std::to_string(id));
        // Older id: a late answer to a query we already gave up on.
      } catch (const json::exception&) {
        // Malformed stale line; the caller's own parse reports malformed
        // answers to *this* id, so just drop it.
        return line;  // let the caller classify it
      }
    }

    const auto now = std::chrono::steady_clock::now();
    if (now >= until) return std::nullopt;
    const auto wait_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                             until - now)
                             .count();
    struct pollfd pfd = {from_child_, POLLIN, 0};
    const int rc = poll(&pfd, 1, static_cast<int>(std::max<long long>(
                                     1, std::min<long long>(wait_ms, 1000))));
    if (rc < 0) {
      if (errno == EINTR) continue;
      throw IoError("poll failed: " + std::string(strerror(errno)));
    }
    if (rc == 0) continue;
    char chunk[4096];
    const ssize_t n = read(from_child_, chunk, sizeof(chunk));
    if (n < 0) {
      if (errno == EINTR) continue;
      throw IoError("read from subprocess failed: " +
                    std::string(strerror(errno)));
    }
    if (n == 0) throw IoError("subprocess closed its output");
    read_buffer_.append(chunk, static_cast<size_t>(n));
  }
}

std::chrono::duration<double> SubprocessAdapter::setup(
    const DatasetSource& source) {
  std::lock_guard<std::mutex> lock(io_mutex_);
  const auto t0 = std::chrono::steady_clock::now();
  spawn();
  const uint64_t id = ++next_id_;
  json msg{{"op", "setup"}, {"id", id}, {"dataset", source.path}};
  send_line(msg.dump());
  // Preparation may legitimately take a while; two minutes is the cap.
  auto line = read_response(id, t0 + std::chrono::minutes(2));
  if (!line) throw IoError("subprocess setup timed out");
  json reply;
  try {
    reply = json::parse(*line);
  } catch (const json::exception& e) {
    throw IoError("malformed setup response: " + std::string(e.what()));
  }
  if (!reply.value("ok", false))
    throw IoError("subprocess setup failed: " + reply.value("error", "?"));
  return std::chrono::steady_clock::now() - t0;
}

QueryOutcome SubprocessAdapter::process_request(const QueryRequest& request) {
  std::lock_guard<std::mutex> lock(io_mutex_);
  const auto now = std::chrono::steady_clock::now();
  if (request.deadline <= now) return QueryOutcome::timeout();
  const auto budget_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                             request.deadline - now)
                             .count();
  const uint64_t id = ++next_id_;
  json msg{{"op", "query"},
           {"id", id},
           {"table", request.table},
           {"viz", viz_to_json(request.viz)},
           {"filter", predicate_to_json(request.filter)},
           {"budget_ms", budget_ms},
           {"confidence", request.confidence}};
  try {
    send_line(msg.dump());
    auto line =
        read_response(id, request.deadline + std::chrono::milliseconds(100));
    if (!line) return QueryOutcome::timeout();
    const json reply = json::parse(*line);
    return QueryOutcome::ok(result_table_from_json(reply));
  } catch (const json::exception& e) {
    return QueryOutcome::failed("malformed response: " + std::string(e.what()));
  } catch (const Error& e) {
    return QueryOutcome::failed(e.what());
  }
}

void SubprocessAdapter::link_vizs(const std::string& source,
                                  const std::string& target) {
  std::lock_guard<std::mutex> lock(io_mutex_);
  send_line(json{{"op", "link"}, {"source", source}, {"target", target}}.dump());
}

void SubprocessAdapter::delete_vizs(const std::vector<std::string>& vizs) {
  std::lock_guard<std::mutex> lock(io_mutex_);
  send_line(json{{"op", "delete"}, {"vizs", vizs}}.dump());
}

void SubprocessAdapter::workflow_start() {
  std::lock_guard<std::mutex> lock(io_mutex_);
  send_line(json{{"op", "start"}}.dump());
}

void SubprocessAdapter::workflow_end() {
  std::lock_guard<std::mutex> lock(io_mutex_);
  send_line(json{{"op", "end"}}.dump());
}

void SubprocessAdapter::shutdown() {
  if (child_pid_ < 0) return;
  if (to_child_ >= 0) close(to_child_);  // EOF tells the child to exit
  to_child_ = -1;
  int status = 0;
  for (int i = 0; i < 20; ++i) {  // up to ~2 s of patience
    if (waitpid(child_pid_, &status, WNOHANG) == child_pid_) {
      child_pid_ = -1;
      break;
    }
    usleep(100000);
  }
  if (child_pid_ >= 0) {
    kill(child_pid_, SIGKILL);
    waitpid(child_pid_, &status, 0);
    child_pid_ = -1;
  }
  if (from_child_ >= 0) close(from_child_);
  from_child_ = -1;
}

}  // namespace idebench
