#include "vlcudn/qtable_io.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include <fmt/format.h>

#include "vlcudn/error.hpp"

namespace vlcudn {

namespace {

constexpr std::string_view kMagic = "#vlcudn-qtable";

}  // namespace

void write_qtable(std::ostream& out, const QTable& q, const StateQuantizer& quantizer) {
  out << fmt::format("{} v1 actions={} rate_bins={} gain_bins={} rate_max_bps={:.17g} gain_max={:.17g}\n",
                     kMagic, q.action_count(), quantizer.rate_bins, quantizer.gain_bins,
                     quantizer.rate_max_bps, quantizer.gain_max);
  std::vector<std::tuple<std::string, std::size_t, double>> rows;
  rows.reserve(q.entry_count());
  q.for_each_entry([&rows](const StateKey& s, std::size_t a, double v) {
    rows.emplace_back(s.to_string(), a, v);
  });
  std::sort(rows.begin(), rows.end());
  for (const auto& [key, action, value] : rows) {
    out << fmt::format("{}\t{}\t{:.17g}\n", key, action, value);
  }
}

void write_qtable(const std::filesystem::path& path, const QTable& q,
                  const StateQuantizer& quantizer) {
  std::ofstream out(path);
  if (!out) {
    throw ConfigError("cannot open '" + path.string() + "' for writing");
  }
  write_qtable(out, q, quantizer);
}

QTableFile read_qtable(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind(kMagic, 0) != 0) {
    throw ConfigError("missing Q-table header");
  }
  std::istringstream header(line.substr(kMagic.size()));
  std::map<std::string, std::string> fields;
  std::string token;
  header >> token;
  if (token != "v1") {
    throw ConfigError("unsupported Q-table version '" + token + "'");
  }
  while (header >> token) {
    const auto eq = token.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("malformed Q-table header field '" + token + "'");
    }
    fields[token.substr(0, eq)] = token.substr(eq + 1);
  }
  QTableFile file;
  try {
    file.quantizer.rate_bins = std::stoul(fields.at("rate_bins"));
    file.quantizer.gain_bins = std::stoul(fields.at("gain_bins"));
    file.quantizer.rate_max_bps = std::stod(fields.at("rate_max_bps"));
    file.quantizer.gain_max = std::stod(fields.at("gain_max"));
    file.table = QTable(std::stoul(fields.at("actions")));
  } catch (const std::exception& e) {
    throw ConfigError(std::string("incomplete Q-table header: ") + e.what());
  }
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) {
      continue;
    }
    const auto t1 = line.find('\t');
    const auto t2 = t1 == std::string::npos ? t1 : line.find('\t', t1 + 1);
    if (t2 == std::string::npos) {
      throw ConfigError(fmt::format("Q-table line {}: expected three tab-separated fields", lineno));
    }
    try {
      const StateKey key = StateKey::parse(std::string_view(line).substr(0, t1));
      const std::size_t action = std::stoul(line.substr(t1 + 1, t2 - t1 - 1));
      const double value = std::stod(line.substr(t2 + 1));
      file.table.set(key, action, value);
    } catch (const std::exception& e) {
      throw ConfigError(fmt::format("Q-table line {}: {}", lineno, e.what()));
    }
  }
  return file;
}

QTableFile read_qtable(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open Q-table '" + path.string() + "'");
  }
  return read_qtable(in);
}

}  // namespace vlcudn
