#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "uavplan/core.hpp"

// Quality profiles: per (scenario label, compression level) measurements of
// classification accuracy and mean payload size. Level 1 is the best quality
// (largest payload); level 100 the strongest compression.

namespace uavplan {

struct QualityPoint {
  double accuracy = 0.0;  // expected classification accuracy in [0, 1]
  double size = 0.0;      // mean payload bytes
};

struct QualityProfile {
  // scenario label -> level -> measurement. Profiles produced by
  // build_profile/load_profile/fixture_profile hold all levels 1..100;
  // hand-built sparse tables are allowed for intermediate computations.
  std::map<std::string, std::map<int, QualityPoint>> table;

  bool complete() const;  // every scenario has every level 1..100
  std::vector<std::string> scenarios() const;
};

// Lookup with strict argument checking (UnknownScenarioError /
// LevelOutOfRangeError). Level 1 is the best-quality entry.
QualityPoint query(const QualityProfile& p, const std::string& scenario, int level);

// The level with payload size <= budget that maximizes accuracy, ties broken
// toward the lower level; nullopt when nothing fits. Scans the levels the
// table actually holds.
std::optional<int> max_level_within_size(const QualityProfile& p,
                                         const std::string& scenario, double budget);

// ---------------------------------------------------------------------------
// Building profiles from labeled samples

struct RawSample {
  std::vector<std::uint8_t> bytes;
};

struct DatasetEntry {
  RawSample sample;
  std::string truth;     // ground-truth class label
  std::string scenario;  // which profile row this sample belongs to
};

// Hook pair used to measure a codec+classifier stack: compress a sample at a
// level, then classify the compressed payload.
struct SamplePredicate {
  virtual ~SamplePredicate() = default;
  virtual std::vector<std::uint8_t> compress(const RawSample& s, int level) const = 0;
  virtual std::string classify(const std::vector<std::uint8_t>& payload) const = 0;
};

// Measure accuracy (fraction of correct classifications) and mean payload
// size per (scenario, level) over the dataset, then complete each scenario's
// table to levels 1..100 by linear interpolation between measured levels and
// constant extrapolation beyond them. `levels` must be non-empty, sorted
// ascending, within 1..100, and duplicate-free.
QualityProfile build_profile(const std::vector<DatasetEntry>& data,
                             const SamplePredicate& predicate,
                             const std::vector<int>& levels);

// ---------------------------------------------------------------------------
// CSV persistence (header: scenario,level,accuracy,size_bytes)

// Load a profile CSV. Sparse level sets are completed to 1..100 with the same
// interpolation rule as build_profile. Rejects malformed rows, accuracy
// outside [0,1], non-positive sizes, duplicate (scenario, level) pairs, and
// levels outside 1..100, reporting 1-based line numbers. Also rejects tables
// where the most compressed level is larger than the best-quality level.
QualityProfile load_profile(const std::string& path);

// Write every (scenario, level) row, sorted by scenario then level, with
// round-trip-exact floating point formatting.
void save_profile(const QualityProfile& p, const std::string& path);

// ---------------------------------------------------------------------------
// Shipped measurement fixture: six scenario labels with plateau-then-cliff
// accuracy curves pinned to known calibration anchors, and an exponential
// size curve from 100 KB (level 1) down to 5 KB (level 100).
QualityProfile fixture_profile();

}  // namespace uavplan
