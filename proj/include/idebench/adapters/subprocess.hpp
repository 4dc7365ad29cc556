#pragma once

#include <cstdint>
#include <mutex>
#include <string>
#include <vector>

#include "idebench/adapters/adapter.hpp"

namespace idebench {

/// Bridge to an external engine speaking newline-delimited JSON on
/// stdin/stdout. One child process per adapter instance; requests are
/// serialized over the pipe, responses matched by id so a late answer
/// from a timed-out query never corrupts the next one.
class SubprocessAdapter : public Adapter {
 public:
  /// `command` is split on spaces and exec'd directly (no shell).
  explicit SubprocessAdapter(std::string command);
  ~SubprocessAdapter() override;

  SubprocessAdapter(const SubprocessAdapter&) = delete;
  SubprocessAdapter& operator=(const SubprocessAdapter&) = delete;

  std::chrono::duration<double> setup(const DatasetSource& source) override;
  QueryOutcome process_request(const QueryRequest& request) override;
  void link_vizs(const std::string& source, const std::string& target) override;
  void delete_vizs(const std::vector<std::string>& vizs) override;
  void workflow_start() override;
  void workflow_end() override;

  AdapterCapabilities capabilities() const override {
    return {.supports_progressive_poll = false,
            .supports_margins = true,
            .supports_joins = false,
            .supports_cancellation = false};
  }
  std::string name() const override { return name_; }

 private:
  void spawn();
  void send_line(const std::string& line);
  /// Next line whose "id" equals `id`, or nullopt once `until` passes.
  /// Lines with older ids (stale responses) are discarded.
  std::optional<std::string> read_response(
      uint64_t id, std::chrono::steady_clock::time_point until);
  void shutdown();

  std::string command_;
  std::string name_ = "subprocess";
  std::mutex io_mutex_;
  int child_pid_ = -1;
  int to_child_ = -1;    // write end
  int from_child_ = -1;  // read end
  std::string read_buffer_;
  uint64_t next_id_ = 0;
};

}  // namespace idebench
