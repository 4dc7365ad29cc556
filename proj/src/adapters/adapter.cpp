#include "idebench/adapters/adapter.hpp"

#include <filesystem>

#include "idebench/adapters/exact.hpp"
#include "idebench/adapters/progressive.hpp"
#include "idebench/adapters/subprocess.hpp"
#include "idebench/data/dataset.hpp"
#include "idebench/datagen/normalize.hpp"

namespace idebench {

std::shared_ptr<const Dataset> load_dataset(const std::string& path) {
  namespace fs = std::filesystem;
  if (fs::is_directory(path)) {
    StarSchemaSpec spec;
    StarTables tables = load_star_dir(path, &spec);
    return std::make_shared<const Dataset>(join_star(tables, spec));
  }
  if (!fs::exists(path)) throw IoError("dataset not found: " + path);
  const std::string table =
      fs::path(path).stem().string().empty() ? "data"
                                             : fs::path(path).stem().string();
  return std::make_shared<const Dataset>(Dataset::from_csv(path, table));
}

std::unique_ptr<Adapter> make_adapter(const std::string& selector) {
  if (selector == "exact") return std::make_unique<ExactEngine>();
  if (selector == "progressive") return std::make_unique<ProgressiveEngine>();
  if (selector.rfind("subprocess:", 0) == 0)
    return std::make_unique<SubprocessAdapter>(selector.substr(11));
  throw ValidationError(
      "unknown adapter '" + selector +
      "'; expected exact, progressive, or subprocess:<command>");
}

}  // namespace idebench
