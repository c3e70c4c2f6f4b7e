#pragma once

#include <filesystem>
#include <string>

namespace sphcov::io {

/// Shortest decimal that round-trips to the same double.
std::string format_double(double v);

/// Write via a sibling temp file and rename, so readers never see a partial file.
void write_atomic(const std::filesystem::path& path, const std::string& contents);

}  // namespace sphcov::io
