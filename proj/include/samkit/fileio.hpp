#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace samkit {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Writes content to a sibling temp file and renames it over path, so readers
// never observe a partial file. Throws IoError on failure.
void atomic_write_text(const std::filesystem::path& path, std::string_view content);

// Whole-file read. Throws IoError if the file cannot be opened.
std::string read_text(const std::filesystem::path& path);

}  // namespace samkit
