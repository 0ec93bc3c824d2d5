#pragma once

// AP grid on the ceiling, spectrum-block reuse, and co-channel neighbor sets.

#include <cstddef>
#include <string_view>
#include <vector>

#include "vlcudn/channel.hpp"

namespace vlcudn {

using ApId = std::size_t;

enum class SpectrumMode { TwoBlock, FourBlock };

std::string_view to_string(SpectrumMode mode);
// Accepts "two", "two-block", "TwoBlock", "four", ... (case-insensitive). Throws ConfigError.
SpectrumMode parse_spectrum_mode(std::string_view text);

// Axis-aligned rectangle in the horizontal plane (closed).
struct Rect {
  double x_min = 0.0;
  double x_max = 0.0;
  double y_min = 0.0;
  double y_max = 0.0;

  double width() const { return x_max - x_min; }
  double height() const { return y_max - y_min; }
  bool contains(double x, double y) const {
    return x >= x_min && x <= x_max && y >= y_min && y <= y_max;
  }
};

struct ApGrid {
  std::size_t rows = 0;
  std::size_t cols = 0;
  double spacing = 0.0;
  double ap_height = 0.0;
  std::vector<Pos3> ap_positions;  // row-major
  std::vector<int> block_of;  // empty until blocks are assigned

  std::size_t size() const { return ap_positions.size(); }
  std::size_t row_of(ApId id) const { return id / cols; }
  std::size_t col_of(ApId id) const { return id % cols; }
  ApId id_of(std::size_t row, std::size_t col) const { return row * cols + col; }
  // Square cell of side `spacing` centered on the AP.
  Rect cell_of(ApId id) const;
  // AP whose cell contains the point; ties go to the lower id.
  ApId nearest_ap(double x, double y) const;
};

// AP (i, j) sits at (j*s + s/2, i*s + s/2, ap_height). Throws DomainError on zero
// counts or non-positive spacing.
ApGrid build_grid(std::size_t rows, std::size_t cols, double spacing, double ap_height);

// TwoBlock: (row + col) mod 2. FourBlock: (row mod 2) + 2 (col mod 2).
std::vector<int> assign_blocks(const ApGrid& grid, SpectrumMode mode);

// Same-block APs whose light can reach some point of `ap`'s cell inside the
// receiver FOV: horizontal center distance <= dz tan(fov) + cell diagonal / 2.
// Result is sorted by id. Throws DomainError for an unknown id or missing blocks.
std::vector<ApId> cochannel_neighbors(const ApGrid& grid, ApId ap, double ue_height,
                                      const ChannelParams& params);

struct CellTopology {
  ApGrid grid;
  ApId center_ap = 0;
  std::vector<std::vector<ApId>> cochannel;  // indexed by AP id

  const std::vector<ApId>& neighbors_of_center() const { return cochannel[center_ap]; }
};

CellTopology make_topology(std::size_t rows, std::size_t cols, double spacing, double ap_height,
                           SpectrumMode mode, double ue_height, const ChannelParams& params);

}  // namespace vlcudn
