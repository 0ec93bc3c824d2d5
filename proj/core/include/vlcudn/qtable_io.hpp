#pragma once

// Line-oriented Q-table text format:
//
//   #vlcudn-qtable v1 actions=216 rate_bins=4 gain_bins=4 rate_max_bps=... gain_max=...
//   d3|r0.0.1|g2.3.1<TAB>17<TAB>12.5
//   ...
//
// Values use 17 significant digits so a round trip is exact.

#include <filesystem>
#include <iosfwd>

#include "vlcudn/rl_agent.hpp"

namespace vlcudn {

struct QTableFile {
  StateQuantizer quantizer;
  QTable table{0};
};

// Rows are sorted by (state key text, action) so output is reproducible.
void write_qtable(std::ostream& out, const QTable& q, const StateQuantizer& quantizer);
void write_qtable(const std::filesystem::path& path, const QTable& q,
                  const StateQuantizer& quantizer);

// Throws ConfigError on a malformed header or row.
QTableFile read_qtable(std::istream& in);
QTableFile read_qtable(const std::filesystem::path& path);

}  // namespace vlcudn
