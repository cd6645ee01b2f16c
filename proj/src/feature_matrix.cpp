#include "cvfspeech/feature_matrix.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace cvf {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  fields.push_back(cur);
  return fields;
}

}  // namespace

FeatureMatrix FeatureMatrix::select_columns(
    const std::vector<int>& columns) const {
  FeatureMatrix out;
  out.ids = ids;
  out.labels = labels;
  for (int c : columns) out.names.push_back(names[static_cast<size_t>(c)]);
  out.data.reserve(rows() * columns.size());
  for (size_t r = 0; r < rows(); ++r)
    for (int c : columns) out.data.push_back(at(r, static_cast<size_t>(c)));
  return out;
}

void FeatureMatrix::validate() const {
  if (ids.size() != labels.size() || data.size() != rows() * cols())
    throw validation_error("feature matrix: inconsistent dimensions");
  for (double v : data)
    if (!std::isfinite(v))
      throw validation_error("feature matrix: non-finite entry");
}

std::string matrix_to_csv(const FeatureMatrix& matrix) {
  std::string out = "source_id";
  for (const auto& n : matrix.names) out += "," + n;
  out += ",label\n";
  char buf[40];
  for (size_t r = 0; r < matrix.rows(); ++r) {
    out += matrix.ids[r];
    for (size_t c = 0; c < matrix.cols(); ++c) {
      std::snprintf(buf, sizeof(buf), ",%.9g", matrix.at(r, c));
      out += buf;
    }
    out += "," + matrix.labels[r] + "\n";
  }
  return out;
}

void save_matrix_csv(const FeatureMatrix& matrix, const std::string& path) {
  std::ofstream f(path, std::ios::trunc);
  if (!f) throw io_error("cannot open for writing: " + path);
  const std::string csv = matrix_to_csv(matrix);
  f.write(csv.data(), static_cast<std::streamsize>(csv.size()));
  if (!f) throw io_error("write failure: " + path);
}

FeatureMatrix load_matrix_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw io_error("cannot open feature csv: " + path);
  std::string line;
  if (!std::getline(f, line))
    throw validation_error(path + ": empty feature csv");

  const std::vector<std::string> header = split_csv_line(line);
  if (header.size() < 3 || header.front() != "source_id" ||
      header.back() != "label")
    throw validation_error(
        path + ": feature csv header must be source_id,<features...>,label");

  FeatureMatrix m;
  m.names.assign(header.begin() + 1, header.end() - 1);
  size_t line_no = 1;
  while (std::getline(f, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const std::vector<std::string> fields = split_csv_line(line);
    if (fields.size() != header.size())
      throw validation_error(path + ":" + std::to_string(line_no) +
                             ": expected " + std::to_string(header.size()) +
                             " fields, got " + std::to_string(fields.size()));
    m.ids.push_back(fields.front());
    m.labels.push_back(fields.back());
    for (size_t c = 1; c + 1 < fields.size(); ++c) {
      try {
        m.data.push_back(std::stod(fields[c]));
      } catch (const std::exception&) {
        throw validation_error(path + ":" + std::to_string(line_no) +
                               ": bad numeric value '" + fields[c] + "'");
      }
    }
  }
  m.validate();
  return m;
}

}  // namespace cvf
