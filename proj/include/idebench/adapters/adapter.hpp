#pragma once

#include <chrono>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "idebench/core/types.hpp"

namespace idebench {

class Dataset;

/// One query as handed to an adapter: the viz to render, the fully
/// resolved upstream filter, and a hard wall-clock deadline.
struct QueryRequest {
  VizSpec viz;
  FilterPredicate filter;
  std::string table;
  std::chrono::steady_clock::time_point deadline;
  double confidence = 0.95;
};

enum class OutcomeStatus { Ok, Timeout, Error };

/// What came back: a result, a timeout (nothing delivered by the
/// deadline), or an engine failure with a message.
struct QueryOutcome {
  OutcomeStatus status = OutcomeStatus::Ok;
  std::optional<ResultTable> result;
  std::string error;

  static QueryOutcome ok(ResultTable table) {
    return {OutcomeStatus::Ok, std::move(table), {}};
  }
  static QueryOutcome timeout() {
    return {OutcomeStatus::Timeout, std::nullopt, {}};
  }
  static QueryOutcome failed(std::string message) {
    return {OutcomeStatus::Error, std::nullopt, std::move(message)};
  }
};

struct AdapterCapabilities {
  bool supports_progressive_poll = false;
  bool supports_margins = false;
  bool supports_joins = false;
  bool supports_cancellation = false;
};

/// Where the data lives. `preloaded` lets the driver share its own
/// in-memory copy with the built-in engines instead of loading twice;
/// external adapters only see the path.
struct DatasetSource {
  std::string path;
  std::shared_ptr<const Dataset> preloaded;
};

/// The system-under-test boundary. Implementations must tolerate
/// concurrent process_request calls once setup has returned.
class Adapter {
 public:
  virtual ~Adapter() = default;

  /// Prepares the engine; the returned duration is the data preparation
  /// time the report surfaces (excluding any load the caller already did).
  virtual std::chrono::duration<double> setup(const DatasetSource& source) = 0;

  virtual QueryOutcome process_request(const QueryRequest& request) = 0;

  /// Link hints and lifecycle notifications. No-ops by default; engines
  /// that speculate or cache per-viz state override these.
  virtual void link_vizs(const std::string& source,
                         const std::string& target) {
    (void)source;
    (void)target;
  }
  virtual void delete_vizs(const std::vector<std::string>& vizs) {
    (void)vizs;
  }
  virtual void workflow_start() {}
  virtual void workflow_end() {}

  virtual AdapterCapabilities capabilities() const = 0;
  virtual std::string name() const = 0;
};

/// Loads a flat CSV, or a star directory (joins the dimensions back
/// into the fact table).
std::shared_ptr<const Dataset> load_dataset(const std::string& path);

/// Builds an adapter from a CLI selector: "exact", "progressive", or
/// "subprocess:<command line>".
std::unique_ptr<Adapter> make_adapter(const std::string& selector);

}  // namespace idebench
