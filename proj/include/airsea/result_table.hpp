#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "airsea/errors.hpp"
#include "airsea/version.hpp"

namespace airsea {

/// Stable 64-bit digest (FNV-1a) for config provenance. std::hash is not
/// guaranteed stable across runs/builds, this is.
inline std::uint64_t fnv1a64(const std::string& data) {
  std::uint64_t h = 0xCBF29CE484222325ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001B3ull;
  }
  return h;
}

inline std::string format_cell(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

/// Rectangular table plus a provenance header (tool version, seed, config
/// hash, command) emitted as leading '#' comment lines. No timestamps, so a
/// rerun with the same inputs is byte-identical.
class ResultTable {
 public:
  explicit ResultTable(std::vector<std::string> columns) : columns_(std::move(columns)) {}

  void set_provenance(const std::string& key, const std::string& value) {
    provenance_.emplace_back(key, value);
  }

  void add_row(std::vector<std::string> cells) {
    if (cells.size() != columns_.size())
      throw ConfigError("result table: row width " + std::to_string(cells.size()) +
                        " does not match " + std::to_string(columns_.size()) + " columns");
    rows_.push_back(std::move(cells));
  }

  std::size_t row_count() const { return rows_.size(); }
  const std::vector<std::string>& columns() const { return columns_; }
  const std::vector<std::vector<std::string>>& rows() const { return rows_; }

  void write_csv(std::ostream& out) const {
    out << "# tool=airsea " << kVersion << "\n";
    for (const auto& [k, v] : provenance_) out << "# " << k << "=" << v << "\n";
    for (std::size_t i = 0; i < columns_.size(); ++i)
      out << columns_[i] << (i + 1 < columns_.size() ? "," : "\n");
    for (const auto& row : rows_)
      for (std::size_t i = 0; i < row.size(); ++i)
        out << row[i] << (i + 1 < row.size() ? "," : "\n");
  }

  /// Writes to a temp file first and renames into place, so readers never see
  /// a half-written table.
  void write_csv_file(const std::string& path) const {
    const std::string tmp = path + ".tmp";
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      if (!out) throw ConfigError("cannot open output file: " + tmp);
      write_csv(out);
      if (!out) throw ConfigError("failed writing output file: " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
      throw ConfigError("cannot move temporary output into place: " + path);
  }

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<std::string>> rows_;
  std::vector<std::pair<std::string, std::string>> provenance_;
};

}  // namespace airsea
