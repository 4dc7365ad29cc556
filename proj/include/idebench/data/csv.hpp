#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace idebench {

/// RFC-4180 CSV: comma separated, double-quote escaping, header row
/// required, UTF-8 passed through verbatim.
namespace csv {

/// Parses one record; handles quoted fields spanning multiple lines.
/// Returns false at end of input.
bool read_record(std::istream& in, std::vector<std::string>& fields);

std::vector<std::vector<std::string>> read_file(const std::string& path);

std::string escape_field(const std::string& field);
void write_record(std::ostream& out, const std::vector<std::string>& fields);

}  // namespace csv
}  // namespace idebench
