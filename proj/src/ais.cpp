#include "riverfuse/ais.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <set>
#include <sstream>

namespace riverfuse::ais {

namespace {

std::string to_upper(std::string s) {
  for (char& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return s;
}

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

// Minimal RFC-4180 split: handles quoted fields with embedded commas and
// doubled quotes, which MarineCadastre uses for vessel names.
std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

std::optional<double> parse_double(const std::string& raw) {
  const std::string s = trim(raw);
  if (s.empty()) return std::nullopt;
  double v = 0.0;
  const char* b = s.data();
  const char* e = b + s.size();
  const auto [ptr, ec] = std::from_chars(b, e, v);
  if (ec != std::errc() || ptr != e || !std::isfinite(v)) return std::nullopt;
  return v;
}

bool is_digits(const std::string& s) {
  if (s.empty()) return false;
  return std::all_of(s.begin(), s.end(),
                     [](unsigned char c) { return std::isdigit(c); });
}

}  // namespace

std::pair<std::vector<AisRecord>, IngestStats> parse_ais_csv(std::istream& in,
                                                             bool strict) {
  std::vector<AisRecord> records;
  IngestStats stats;

  std::string line;
  if (!std::getline(in, line))
    throw FormatError("AIS header missing: empty input");
  const std::vector<std::string> header = split_csv(line);

  constexpr const char* kMandatory[] = {"MMSI", "BASEDATETIME", "LAT",
                                        "LON",  "SOG",          "COG"};
  std::map<std::string, std::size_t> col;
  for (std::size_t i = 0; i < header.size(); ++i)
    col.emplace(to_upper(trim(header[i])), i);
  for (const char* name : kMandatory) {
    if (!col.count(name))
      throw FormatError(std::string("AIS header missing mandatory column: ") +
                        name);
  }
  const std::size_t c_mmsi = col["MMSI"], c_time = col["BASEDATETIME"];
  const std::size_t c_lat = col["LAT"], c_lon = col["LON"];
  const std::size_t c_sog = col["SOG"], c_cog = col["COG"];
  const auto optional_col = [&](const char* name) -> std::optional<std::size_t> {
    const auto it = col.find(name);
    if (it == col.end()) return std::nullopt;
    return it->second;
  };
  const auto c_heading = optional_col("HEADING");
  const auto c_name = optional_col("VESSELNAME");
  const auto c_type = optional_col("VESSELTYPE");

  std::set<std::pair<std::string, Timestamp>> seen;
  const auto reject = [&](const std::string& reason) {
    ++stats.rows_rejected;
    ++stats.rejects_by_reason[reason];
  };

  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    ++stats.rows_read;
    const std::vector<std::string> fields = split_csv(line);
    if (fields.size() < header.size()) {
      reject("missing field");
      continue;
    }

    AisRecord rec;
    rec.mmsi = trim(fields[c_mmsi]);
    if (rec.mmsi.empty()) {
      reject("missing field");
      continue;
    }
    if (strict && (rec.mmsi.size() != 9 || !is_digits(rec.mmsi))) {
      reject("bad mmsi");
      continue;
    }

    try {
      rec.timestamp = parse_timestamp_lenient(trim(fields[c_time]));
    } catch (const FormatError&) {
      reject("bad timestamp");
      continue;
    }

    const auto lat = parse_double(fields[c_lat]);
    const auto lon = parse_double(fields[c_lon]);
    const auto sog = parse_double(fields[c_sog]);
    const auto cog = parse_double(fields[c_cog]);
    if (!lat || !lon || !sog) {
      reject("missing field");
      continue;
    }
    if (*lat < -90.0 || *lat > 90.0) {
      reject("lat out of range");
      continue;
    }
    if (*lon < -180.0 || *lon > 180.0) {
      reject("lon out of range");
      continue;
    }
    rec.lat = *lat;
    rec.lon = *lon;
    rec.sog_kn = *sog;
    if (cog) {
      // AIS encodes "course unavailable" as 360 in some feeds and >= 409.5 in
      // the raw message scale; 360.0 exactly is a valid wrapped heading.
      if (*cog >= 409.5 || *cog < 0.0) {
        rec.cog_deg = std::nullopt;
      } else {
        rec.cog_deg = (*cog == 360.0) ? 0.0 : *cog;
      }
    }
    if (c_heading) {
      const auto h = parse_double(fields[*c_heading]);
      if (h && *h >= 0.0 && *h < 511.0) rec.heading_deg = *h;
    }
    if (c_name) rec.vessel_name = trim(fields[*c_name]);
    if (c_type) rec.vessel_type = trim(fields[*c_type]);

    if (!seen.emplace(rec.mmsi, rec.timestamp).second) {
      reject("duplicate");
      continue;
    }
    ++stats.rows_accepted;
    records.push_back(std::move(rec));
  }
  return {std::move(records), std::move(stats)};
}

std::pair<std::vector<AisRecord>, IngestStats> parse_ais_csv_file(
    const std::string& path, bool strict) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open AIS file: " + path);
  return parse_ais_csv(in, strict);
}

std::size_t Trajectory::nearest_point(Timestamp t0) const {
  std::size_t best = 0;
  std::int64_t best_abs = -1;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const std::int64_t d = std::llabs(points[i].timestamp - t0);
    if (best_abs < 0 || d < best_abs) {
      best_abs = d;
      best = i;
    }
  }
  return best;
}

std::vector<Trajectory> build_trajectories(
    const std::vector<AisRecord>& records) {
  std::map<std::string, Trajectory> by_mmsi;
  for (const AisRecord& r : records) {
    Trajectory& t = by_mmsi[r.mmsi];
    if (t.mmsi.empty()) t.mmsi = r.mmsi;
    if (t.vessel_name.empty()) t.vessel_name = r.vessel_name;
    t.points.push_back({r.timestamp, r.lat, r.lon, r.sog_kn, r.cog_deg});
  }
  std::vector<Trajectory> out;
  out.reserve(by_mmsi.size());
  for (auto& [mmsi, t] : by_mmsi) {
    std::stable_sort(t.points.begin(), t.points.end(),
                     [](const TrajectoryPoint& a, const TrajectoryPoint& b) {
                       return a.timestamp < b.timestamp;
                     });
    // Strictly increasing timestamps: first occurrence wins.
    t.points.erase(
        std::unique(t.points.begin(), t.points.end(),
                    [](const TrajectoryPoint& a, const TrajectoryPoint& b) {
                      return a.timestamp == b.timestamp;
                    }),
        t.points.end());
    out.push_back(std::move(t));
  }
  return out;
}

std::vector<AisRecord> temporal_filter(const std::vector<AisRecord>& records,
                                       Timestamp t0,
                                       std::int64_t half_window_s) {
  std::vector<AisRecord> out;
  for (const AisRecord& r : records) {
    if (std::llabs(r.timestamp - t0) <= half_window_s) out.push_back(r);
  }
  return out;
}

}  // namespace riverfuse::ais
