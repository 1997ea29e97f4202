#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace mea::app {

/// Binary state file: 8-byte magic "MEASNAP1", u64 little-endian header
/// length, a UTF-8 JSON header, then `data.size()` little-endian f64 values.
struct Snapshot {
  std::string system;
  std::string layout;            // coordinate layout descriptor
  std::string truncation_name;   // "K" or "lmax"
  long long truncation = 0;
  double time = 0.0;
  std::string quantity;          // what the coordinates represent
  std::map<std::string, double> parameters;
  std::vector<double> data;
};

void write_snapshot(const std::filesystem::path& path, const Snapshot& snap);
/// Throws IoError on unreadable files, bad magic, malformed headers or a
/// payload whose length differs from the declared count.
Snapshot read_snapshot(const std::filesystem::path& path);

}  // namespace mea::app
