#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "tumorpinn/physics.hpp"

namespace tumorpinn {

inline constexpr const char* kToolVersion = "0.1.0";

/// Numeric CSV with one header row. Lines starting with '#' are metadata.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  /// Throws DataError if the column is missing.
  std::size_t column(const std::string& name) const;
  bool has_column(const std::string& name) const;
};

CsvTable read_csv(const std::filesystem::path& path);

/// Hex digest identifying a canonical config dump.
std::string config_hash(const std::string& canonical_config);

/// "# tumorpinn <version> config_hash=<hash>\n" plus optional extra comment lines.
std::string metadata_header(const std::string& canonical_config, const std::vector<std::string>& extra = {});

/// Header `t,x,y,label` for binary sets, `t,x,y,value` for density sets.
void write_observations_csv(const std::filesystem::path& path, std::span<const DataPoint> points, DataKind kind,
                            const std::string& header);

struct ObservationFile {
  std::vector<DataPoint> points;
  DataKind kind = DataKind::kDensity;
};

ObservationFile read_observations_csv(const std::filesystem::path& path);

}  // namespace tumorpinn
