#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "fbmg/core.hpp"

namespace fbmg {

/// Shortest decimal string that parses back to the same double.
std::string format_double(double x);

/// CSV with header "t,value", one LF-terminated row per node.
void write_path_csv(const SampledPath& path, std::ostream& out);
void write_path_file(const SampledPath& path, const std::filesystem::path& file);

/// Parses a path CSV. The first row must have t = 0 and the t column must be
/// uniform within 1e-9 relative. Throws InputFormatError otherwise.
SampledPath read_path_csv(std::istream& in, const std::string& source = "<stream>");
SampledPath read_path_file(const std::filesystem::path& file);

}  // namespace fbmg
