#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "flowsentry/core.hpp"
#include "flowsentry/rng.hpp"

namespace flowsentry {

// A dataset cell before categorical encoding: numeric or categorical.
using Cell = std::variant<double, std::string>;

// Column-named row table, the in-memory form of the dataset between feature
// generation and encoding. All cells of one column hold the same alternative.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  std::size_t n_rows() const { return rows.size(); }
  std::size_t n_cols() const { return columns.size(); }
};

inline constexpr int kFeatureCount = 16;

// Fixed 16-feature schema, in column order.
extern const std::array<const char*, kFeatureCount> kFeatureNames;

// Trailing-window fan-out statistics for one flow: over all flows initiated
// by the same source IP with first_seen in (t - window, t], the number of
// distinct destination ports and the number of flows (both include the flow
// itself).
struct SourceWindowStats {
  std::int64_t distinct_dst_ports = 0;
  std::int64_t flows = 0;
};

inline constexpr std::int64_t kFanoutWindowUs = 60'000'000;

// One sequential pass computing per-flow window stats, in input order.
std::vector<SourceWindowStats> source_window_stats(
    std::span<const FlowRecord> flows, std::int64_t window_us = kFanoutWindowUs);

// The unnormalized 16-feature row for one flow. Protocol stays categorical;
// every other cell is numeric.
std::array<Cell, kFeatureCount> generate_features(const FlowRecord& flow,
                                                  const SourceWindowStats& context);

// Window-stats pass plus per-flow generation; row order equals flow order.
Table build_feature_table(std::span<const FlowRecord> flows);

// Ordered value->code assignments for每 encoded column is a plain first-
// occurrence list; code i is values[i].
struct ColumnEncoding {
  std::string column;
  std::vector<std::string> values;  // index = assigned code
};

struct EncodingMap {
  std::vector<ColumnEncoding> columns;  // only non-numeric columns, in table order

  const ColumnEncoding* find(const std::string& column) const;
};

// Replaces every non-numeric column by integer codes 0,1,2,... assigned in
// order of first occurrence. Numeric columns pass through unchanged. Returns
// the numeric matrix (row-major semantics: matrix(r, c) = row r, column c).
std::pair<Eigen::MatrixXd, EncodingMap> encode_categorical(const Table& table);

// Inverse recoding of one column (codes back to the original values).
std::vector<std::string> decode_column(const ColumnEncoding& enc,
                                       std::span<const double> codes);

// Per-feature (min, max) learned from the training rows only.
struct NormalizationParams {
  Eigen::VectorXd min;
  Eigen::VectorXd max;
};

// Throws EmptyTrainingSet on an empty train matrix.
NormalizationParams fit_minmax(const Eigen::MatrixXd& train_rows);

// x' = (x - min) / (max - min), clamped into [0,1]; a constant feature
// (max == min) maps to 0.
Eigen::MatrixXd apply_minmax(const NormalizationParams& params,
                             const Eigen::MatrixXd& rows);

// Deterministic 70/30 split: Fisher-Yates shuffle of [0, n) under
// Rng64(seed), then a prefix of round(train_frac * n) train indices.
struct SplitIndices {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
  std::uint64_t seed = 0;
};

SplitIndices split_dataset(std::size_t n_rows, std::uint64_t seed,
                           double train_frac = 0.7);

}  // namespace flowsentry
