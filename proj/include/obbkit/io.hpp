#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"

namespace obbkit::io {

// Writes to a sibling temporary file and renames it over `path`, so readers
// never observe a partially written file.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

// Throws DataError when the file cannot be read or is not valid JSON.
nlohmann::json read_json(const std::filesystem::path& path);

// printf("%.6g")
std::string format_real(double v);

}  // namespace obbkit::io
