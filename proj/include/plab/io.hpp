#pragma once

#include <string>
#include <vector>

#include "plab/grid_function.hpp"

namespace plab {

/// Binary graymap of the field, one byte per cell, rows over i and columns
/// over j. Values map affinely from [min, max] onto 0..255; a constant field
/// maps to 128. The header comment records the grid and the affine map.
void export_raster(const GridFunction& field, const std::string& path);

/// Mask/cell-set raster: 255 inside, 0 outside.
void export_raster(const CellSet& cells, const PolarGrid& grid, const std::string& path);

/// Raw function dump: one text header line with the grid descriptor followed
/// by n_r*n_phi little-endian doubles, row-major.
void write_dump(const GridFunction& field, const std::string& path);

/// Reads a dump back; the function is attached to the grid-interior mask.
GridFunction read_dump(const std::string& path);

/// Fixed-schema CSV accumulated in memory and written in one piece. Numbers
/// print as shortest round-trip (%.17g); missing fields stay empty.
class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> columns);
  void begin_row();
  void set(const std::string& column, double value);
  void set(const std::string& column, const std::string& value);
  void set(const std::string& column, bool value);
  std::string str() const;
  void write(const std::string& path) const;
  const std::vector<std::string>& columns() const { return columns_; }

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<std::string>> rows_;
};

void write_text_file(const std::string& path, const std::string& text);

}  // namespace plab
