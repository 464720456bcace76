// AIS CSV ingestion, per-vessel trajectory construction, and the acquisition
// time-window filter.
#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "riverfuse/core.hpp"

namespace riverfuse::ais {

struct AisRecord {
  std::string mmsi;
  Timestamp timestamp = 0;
  double lat = 0.0;
  double lon = 0.0;
  double sog_kn = 0.0;
  // Degrees true in [0,360); absent when the sentinel "unavailable" encoding
  // (>= 409.5) was transmitted.
  std::optional<double> cog_deg;
  std::optional<double> heading_deg;
  std::string vessel_name;
  std::string vessel_type;
};

struct IngestStats {
  std::int64_t rows_read = 0;
  std::int64_t rows_accepted = 0;
  std::int64_t rows_rejected = 0;
  std::map<std::string, std::int64_t> rejects_by_reason;
};

// Streaming CSV parse of the MarineCadastre export schema. The header must
// contain MMSI, BaseDateTime, LAT, LON, SOG, COG (case-insensitive; extra
// columns ignored) or a FormatError naming the missing column is thrown.
// Malformed rows are rejected and counted, never fatal. Duplicate
// (mmsi, timestamp) rows keep the first occurrence. strict additionally
// requires MMSI to be exactly 9 digits.
std::pair<std::vector<AisRecord>, IngestStats> parse_ais_csv(std::istream& in,
                                                             bool strict);
std::pair<std::vector<AisRecord>, IngestStats> parse_ais_csv_file(
    const std::string& path, bool strict);

struct TrajectoryPoint {
  Timestamp timestamp = 0;
  double lat = 0.0;
  double lon = 0.0;
  double sog_kn = 0.0;
  std::optional<double> cog_deg;
};

// Chronological per-vessel track; timestamps strictly increasing.
struct Trajectory {
  std::string mmsi;
  std::string vessel_name;
  std::vector<TrajectoryPoint> points;

  // Index of the point whose timestamp is nearest t0 (earlier wins ties).
  std::size_t nearest_point(Timestamp t0) const;
};

// Groups records by mmsi and sorts each group by timestamp; equal-timestamp
// duplicates keep the first in input order. Output sorted by mmsi.
std::vector<Trajectory> build_trajectories(
    const std::vector<AisRecord>& records);

// Records with |timestamp - t0| <= half_window_s, input order preserved.
std::vector<AisRecord> temporal_filter(const std::vector<AisRecord>& records,
                                       Timestamp t0,
                                       std::int64_t half_window_s = 120);

}  // namespace riverfuse::ais
