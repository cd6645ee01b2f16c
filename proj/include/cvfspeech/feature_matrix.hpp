#pragma once

#include <span>
#include <string>
#include <vector>

#include "cvfspeech/error.hpp"

namespace cvf {

/// Labeled per-recording feature rows with stable column names. Row order
/// follows the source manifest.
struct FeatureMatrix {
  std::vector<std::string> ids;
  std::vector<std::string> labels;
  std::vector<std::string> names;
  std::vector<double> data;  // row-major, rows() x cols()

  size_t rows() const { return ids.size(); }
  size_t cols() const { return names.size(); }

  double at(size_t r, size_t c) const { return data[r * cols() + c]; }
  std::span<const double> row(size_t r) const {
    return {data.data() + r * cols(), cols()};
  }

  /// Keeps the given columns (in the given order); rows untouched.
  FeatureMatrix select_columns(const std::vector<int>& columns) const;

  void validate() const;
};

/// CSV with a header row: source_id, <feature names...>, label.
/// Values carry 9 significant digits.
std::string matrix_to_csv(const FeatureMatrix& matrix);
void save_matrix_csv(const FeatureMatrix& matrix, const std::string& path);
FeatureMatrix load_matrix_csv(const std::string& path);

}  // namespace cvf
