#include "vlcudn/topology.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <string>

#include "vlcudn/error.hpp"

namespace vlcudn {

std::string_view to_string(SpectrumMode mode) {
  switch (mode) {
    case SpectrumMode::TwoBlock:
      return "two-block";
    case SpectrumMode::FourBlock:
      return "four-block";
  }
  return "?";
}

SpectrumMode parse_spectrum_mode(std::string_view text) {
  std::string s;
  for (char c : text) {
    if (c != '-' && c != '_' && c != ' ') {
      s.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
  }
  if (s == "two" || s == "twoblock" || s == "2") {
    return SpectrumMode::TwoBlock;
  }
  if (s == "four" || s == "fourblock" || s == "4") {
    return SpectrumMode::FourBlock;
  }
  throw ConfigError("unknown spectrum mode '" + std::string(text) + "'");
}

Rect ApGrid::cell_of(ApId id) const {
  const Pos3& p = ap_positions.at(id);
  const double half = spacing / 2.0;
  return {p.x - half, p.x + half, p.y - half, p.y + half};
}

ApId ApGrid::nearest_ap(double x, double y) const {
  ApId best = 0;
  double best_d2 = std::numeric_limits<double>::infinity();
  for (ApId id = 0; id < ap_positions.size(); ++id) {
    const double dx = ap_positions[id].x - x;
    const double dy = ap_positions[id].y - y;
    const double d2 = dx * dx + dy * dy;
    if (d2 < best_d2) {
      best_d2 = d2;
      best = id;
    }
  }
  return best;
}

ApGrid build_grid(std::size_t rows, std::size_t cols, double spacing, double ap_height) {
  if (rows == 0 || cols == 0) {
    throw DomainError("AP grid needs at least one row and one column");
  }
  if (!(spacing > 0.0)) {
    throw DomainError("AP spacing must be positive");
  }
  ApGrid grid;
  grid.rows = rows;
  grid.cols = cols;
  grid.spacing = spacing;
  grid.ap_height = ap_height;
  grid.ap_positions.reserve(rows * cols);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      grid.ap_positions.push_back({static_cast<double>(j) * spacing + spacing / 2.0,
                                   static_cast<double>(i) * spacing + spacing / 2.0, ap_height});
    }
  }
  return grid;
}

std::vector<int> assign_blocks(const ApGrid& grid, SpectrumMode mode) {
  std::vector<int> blocks(grid.size());
  for (ApId id = 0; id < grid.size(); ++id) {
    const auto r = grid.row_of(id);
    const auto c = grid.col_of(id);
    blocks[id] = mode == SpectrumMode::TwoBlock ? static_cast<int>((r + c) % 2)
                                                : static_cast<int>((r % 2) + 2 * (c % 2));
  }
  return blocks;
}

std::vector<ApId> cochannel_neighbors(const ApGrid& grid, ApId ap, double ue_height,
                                      const ChannelParams& params) {
  if (ap >= grid.size()) {
    throw DomainError("unknown AP id " + std::to_string(ap));
  }
  if (grid.block_of.size() != grid.size()) {
    throw DomainError("spectrum blocks have not been assigned");
  }
  const double reach = (grid.ap_height - ue_height) * std::tan(params.fov.rad()) +
                       grid.spacing * std::numbers::sqrt2 / 2.0;
  std::vector<ApId> out;
  for (ApId other = 0; other < grid.size(); ++other) {
    if (other == ap || grid.block_of[other] != grid.block_of[ap]) {
      continue;
    }
    if (horizontal_distance(grid.ap_positions[ap], grid.ap_positions[other]) <= reach) {
      out.push_back(other);
    }
  }
  return out;
}

CellTopology make_topology(std::size_t rows, std::size_t cols, double spacing, double ap_height,
                           SpectrumMode mode, double ue_height, const ChannelParams& params) {
  CellTopology topo;
  topo.grid = build_grid(rows, cols, spacing, ap_height);
  topo.grid.block_of = assign_blocks(topo.grid, mode);
  topo.center_ap = topo.grid.id_of(rows / 2, cols / 2);
  topo.cochannel.reserve(topo.grid.size());
  for (ApId id = 0; id < topo.grid.size(); ++id) {
    topo.cochannel.push_back(cochannel_neighbors(topo.grid, id, ue_height, params));
  }
  return topo;
}

}  // namespace vlcudn
