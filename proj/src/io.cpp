#include "plab/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace plab {

namespace {

void write_pgm(const std::string& path, const PolarGrid& g, const std::vector<uint8_t>& bytes, double lo, double hi) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("export_raster: cannot open " + path);
  char head[256];
  std::snprintf(head, sizeof head,
                "P5\n# polar grid center_a=%.17g r_max=%.17g n_r=%d n_phi=%d map=[%.17g,%.17g]->[0,255]\n%d %d\n255\n",
                g.center_a, g.r_max, g.n_r, g.n_phi, lo, hi, g.n_phi, g.n_r);
  out << head;
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("export_raster: write failed for " + path);
}

}  // namespace

void export_raster(const GridFunction& field, const std::string& path) {
  const PolarGrid& g = field.grid;
  double lo = field.values[0], hi = field.values[0];
  for (double x : field.values) {
    lo = std::min(lo, x);
    hi = std::max(hi, x);
  }
  std::vector<uint8_t> bytes(field.values.size());
  if (hi == lo) {
    std::fill(bytes.begin(), bytes.end(), uint8_t{128});
  } else {
    double scale = 255.0 / (hi - lo);
    for (size_t k = 0; k < field.values.size(); ++k)
      bytes[k] = static_cast<uint8_t>(std::lround((field.values[k] - lo) * scale));
  }
  write_pgm(path, g, bytes, lo, hi);
}

void export_raster(const CellSet& cells, const PolarGrid& grid, const std::string& path) {
  std::vector<uint8_t> bytes(static_cast<size_t>(grid.n_r) * grid.n_phi, 0);
  for (int i = 0; i < grid.n_r; ++i)
    for (int j = 0; j < grid.n_phi; ++j)
      if (cells.contains(i, j)) bytes[static_cast<size_t>(i) * grid.n_phi + j] = 255;
  write_pgm(path, grid, bytes, 0.0, 1.0);
}

void write_dump(const GridFunction& field, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("write_dump: cannot open " + path);
  const PolarGrid& g = field.grid;
  char head[192];
  std::snprintf(head, sizeof head, "PLABDUMP1 center_a=%.17g r_max=%.17g n_r=%d n_phi=%d\n", g.center_a, g.r_max,
                g.n_r, g.n_phi);
  out << head;
  out.write(reinterpret_cast<const char*>(field.values.data()),
            static_cast<std::streamsize>(field.values.size() * sizeof(double)));
  if (!out) throw std::runtime_error("write_dump: write failed for " + path);
}

GridFunction read_dump(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("read_dump: cannot open " + path);
  std::string header;
  std::getline(in, header);
  double center_a = 0.0, r_max = 0.0;
  int n_r = 0, n_phi = 0;
  if (std::sscanf(header.c_str(), "PLABDUMP1 center_a=%lf r_max=%lf n_r=%d n_phi=%d", &center_a, &r_max, &n_r,
                  &n_phi) != 4)
    throw std::runtime_error("read_dump: bad header in " + path);
  PolarGrid g = build_grid(center_a, r_max, n_r, n_phi);
  GridFunction f = make_zero_function(container_mask(g));
  in.read(reinterpret_cast<char*>(f.values.data()), static_cast<std::streamsize>(f.values.size() * sizeof(double)));
  if (!in) throw std::runtime_error("read_dump: truncated data in " + path);
  return f;
}

CsvWriter::CsvWriter(std::vector<std::string> columns) : columns_(std::move(columns)) {}

void CsvWriter::begin_row() { rows_.emplace_back(columns_.size()); }

namespace {
size_t column_index(const std::vector<std::string>& cols, const std::string& name) {
  for (size_t k = 0; k < cols.size(); ++k)
    if (cols[k] == name) return k;
  throw std::runtime_error("CsvWriter: unknown column '" + name + "'");
}
}  // namespace

void CsvWriter::set(const std::string& column, double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  rows_.back()[column_index(columns_, column)] = buf;
}

void CsvWriter::set(const std::string& column, const std::string& value) {
  rows_.back()[column_index(columns_, column)] = value;
}

void CsvWriter::set(const std::string& column, bool value) {
  rows_.back()[column_index(columns_, column)] = value ? "true" : "false";
}

std::string CsvWriter::str() const {
  std::ostringstream os;
  for (size_t k = 0; k < columns_.size(); ++k) {
    if (k) os << ',';
    os << columns_[k];
  }
  os << '\n';
  for (const auto& row : rows_) {
    for (size_t k = 0; k < row.size(); ++k) {
      if (k) os << ',';
      os << row[k];
    }
    os << '\n';
  }
  return os.str();
}

void CsvWriter::write(const std::string& path) const { write_text_file(path, str()); }

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace plab
