#include "tumorpinn/csv.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <iomanip>
#include <sstream>

#include "tumorpinn/errors.hpp"

namespace tumorpinn {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(trim(cell));
  return out;
}

}  // namespace

std::size_t CsvTable::column(const std::string& name) const {
  const auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) throw DataError("CSV has no column '" + name + "'");
  return static_cast<std::size_t>(it - header.begin());
}

bool CsvTable::has_column(const std::string& name) const {
  return std::find(header.begin(), header.end(), name) != header.end();
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open " + path.string());
  CsvTable table;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    auto cells = split(t);
    if (table.header.empty()) {
      table.header = std::move(cells);
      continue;
    }
    if (cells.size() != table.header.size()) {
      throw DataError(path.string() + ":" + std::to_string(lineno) + ": expected " +
                      std::to_string(table.header.size()) + " fields");
    }
    std::vector<double> row;
    for (const auto& c : cells) {
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(c.data(), c.data() + c.size(), v);
      if (ec != std::errc() || ptr != c.data() + c.size()) {
        throw DataError(path.string() + ":" + std::to_string(lineno) + ": '" + c + "' is not a number");
      }
      row.push_back(v);
    }
    table.rows.push_back(std::move(row));
  }
  if (table.header.empty()) throw DataError(path.string() + " has no header row");
  return table;
}

std::string config_hash(const std::string& canonical_config) {
  // 64-bit FNV-1a, so the hash does not depend on the standard library
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : canonical_config) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

std::string metadata_header(const std::string& canonical_config, const std::vector<std::string>& extra) {
  std::string h = std::string("# tumorpinn ") + kToolVersion + " config_hash=" + config_hash(canonical_config) + "\n";
  for (const auto& e : extra) h += "# " + e + "\n";
  return h;
}

void write_observations_csv(const std::filesystem::path& path, std::span<const DataPoint> points, DataKind kind,
                            const std::string& header) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot open " + path.string() + " for writing");
  os << header << (kind == DataKind::kBinary ? "t,x,y,label\n" : "t,x,y,value\n") << std::setprecision(17);
  for (const auto& p : points) {
    os << p.point[0] << ',' << p.point[1] << ',' << p.point[2] << ',';
    if (kind == DataKind::kBinary) {
      os << static_cast<int>(p.target);
    } else {
      os << p.target;
    }
    os << '\n';
  }
}

ObservationFile read_observations_csv(const std::filesystem::path& path) {
  const CsvTable table = read_csv(path);
  ObservationFile out;
  const bool binary = table.has_column("label");
  if (!binary && !table.has_column("value")) throw DataError(path.string() + ": need a 'label' or 'value' column");
  out.kind = binary ? DataKind::kBinary : DataKind::kDensity;
  const std::size_t ct = table.column("t"), cx = table.column("x"), cy = table.column("y");
  const std::size_t cv = table.column(binary ? "label" : "value");
  for (const auto& r : table.rows) {
    if (binary && r[cv] != 0.0 && r[cv] != 1.0) throw DataError(path.string() + ": labels must be 0 or 1");
    out.points.push_back(DataPoint{{r[ct], r[cx], r[cy]}, r[cv]});
  }
  return out;
}

}  // namespace tumorpinn
