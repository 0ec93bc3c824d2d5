#include "vlcudn/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>
#include <vector>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/format.h>

#include "vlcudn/error.hpp"

namespace vlcudn {

std::string_view to_string(Policy policy) {
  switch (policy) {
    case Policy::Rpic:
      return "rpic";
    case Policy::FixedMax:
      return "fixed-max";
    case Policy::FixedHalf:
      return "fixed-half";
    case Policy::Random:
      return "random";
    case Policy::GreedyMyopic:
      return "greedy-myopic";
  }
  return "?";
}

Policy parse_policy(std::string_view text) {
  std::string s;
  for (char c : text) {
    if (c != '-' && c != '_') {
      s.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
  }
  if (s == "rpic") return Policy::Rpic;
  if (s == "fixedmax") return Policy::FixedMax;
  if (s == "fixedhalf") return Policy::FixedHalf;
  if (s == "random") return Policy::Random;
  if (s == "greedymyopic" || s == "greedy") return Policy::GreedyMyopic;
  throw ConfigError("unknown policy '" + std::string(text) +
                    "' (expected rpic, fixed-max, fixed-half, random, greedy-myopic)");
}

namespace {

double to_double(const std::string& text) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = first + text.size();
  if (first != last && *first == '+') {
    ++first;
  }
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last) {
    throw ConfigError("expected a number, got '" + text + "'");
  }
  return v;
}

std::uint64_t to_uint(const std::string& text) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw ConfigError("expected a non-negative integer, got '" + text + "'");
  }
  return v;
}

bool to_bool(const std::string& text) {
  std::string s = text;
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "0" || s == "no" || s == "off") return false;
  throw ConfigError("expected a boolean, got '" + text + "'");
}

std::string fmt_double(double v) { return fmt::format("{}", v); }
std::string fmt_bool(bool v) { return v ? "true" : "false"; }
// Degrees survive the radian round trip only to ~15 digits.
std::string fmt_angle(Angle a) { return fmt::format("{:.15g}", a.deg()); }

struct Field {
  std::string_view section;
  std::string_view key;
  std::function<void(ExperimentConfig&, const std::string&)> set;
  std::function<std::string(const ExperimentConfig&)> get;
};

#define VLCUDN_DOUBLE(sec, key, expr)                                                  \
  Field {                                                                              \
    sec, key, [](ExperimentConfig& c, const std::string& v) { expr = to_double(v); }, \
        [](const ExperimentConfig& c) { return fmt_double(expr); }                     \
  }
#define VLCUDN_SCALED(sec, key, expr, scale)                                                   \
  Field {                                                                                      \
    sec, key, [](ExperimentConfig& c, const std::string& v) { expr = to_double(v) * (scale); }, \
        [](const ExperimentConfig& c) { return fmt_double(expr / (scale)); }                   \
  }
#define VLCUDN_UINT(sec, key, expr, type)                                                      \
  Field {                                                                                      \
    sec, key, [](ExperimentConfig& c, const std::string& v) { expr = static_cast<type>(to_uint(v)); }, \
        [](const ExperimentConfig& c) { return std::to_string(expr); }                         \
  }
#define VLCUDN_BOOL(sec, key, expr)                                                  \
  Field {                                                                            \
    sec, key, [](ExperimentConfig& c, const std::string& v) { expr = to_bool(v); }, \
        [](const ExperimentConfig& c) { return fmt_bool(expr); }                     \
  }

const std::vector<Field>& fields() {
  static const std::vector<Field> table = {
      VLCUDN_UINT("topology", "rows", c.topology.rows, std::size_t),
      VLCUDN_UINT("topology", "cols", c.topology.cols, std::size_t),
      VLCUDN_DOUBLE("topology", "spacing_m", c.topology.spacing),
      VLCUDN_DOUBLE("topology", "ap_height_m", c.topology.ap_height),
      Field{"topology", "spectrum_mode",
            [](ExperimentConfig& c, const std::string& v) {
              c.topology.mode = parse_spectrum_mode(v);
            },
            [](const ExperimentConfig& c) { return std::string(to_string(c.topology.mode)); }},

      VLCUDN_SCALED("channel", "detector_area_cm2", c.channel.detector_area_m2, 1e-4),
      Field{"channel", "semi_angle_deg",
            [](ExperimentConfig& c, const std::string& v) {
              c.channel.semi_angle = Angle::degrees(to_double(v));
            },
            [](const ExperimentConfig& c) { return fmt_angle(c.channel.semi_angle); }},
      Field{"channel", "fov_deg",
            [](ExperimentConfig& c, const std::string& v) {
              c.channel.fov = Angle::degrees(to_double(v));
            },
            [](const ExperimentConfig& c) { return fmt_angle(c.channel.fov); }},
      VLCUDN_DOUBLE("channel", "responsivity_a_per_w", c.channel.responsivity),

      VLCUDN_DOUBLE("link", "total_bandwidth_hz", c.link.total_bandwidth_hz),
      VLCUDN_DOUBLE("link", "noise_psd", c.link.noise_psd),
      VLCUDN_DOUBLE("link", "effective_bandwidth_factor", c.link.effective_bandwidth_factor),
      VLCUDN_BOOL("link", "squared_electrical_power", c.link.squared_electrical_power),

      VLCUDN_SCALED("interference", "neighbor_power_mw", c.interference.neighbor_power_w, 1e-3),
      VLCUDN_UINT("interference", "foreign_ues_per_neighbor",
                  c.interference.foreign_ues_per_neighbor, std::size_t),

      VLCUDN_DOUBLE("mobility", "v_min_mps", c.mobility.v_min),
      VLCUDN_DOUBLE("mobility", "v_max_mps", c.mobility.v_max),
      VLCUDN_DOUBLE("mobility", "slot_duration_s", c.mobility.slot_duration),
      VLCUDN_DOUBLE("mobility", "ue_height_m", c.mobility.ue_height),

      VLCUDN_UINT("agent", "power_levels", c.agent.power_levels, std::size_t),
      VLCUDN_SCALED("agent", "max_power_mw", c.agent.max_power_w, 1e-3),
      VLCUDN_DOUBLE("agent", "learning_rate", c.agent.learning_rate),
      VLCUDN_DOUBLE("agent", "discount", c.agent.discount),
      VLCUDN_DOUBLE("agent", "epsilon_start", c.agent.epsilon_start),
      VLCUDN_DOUBLE("agent", "epsilon_end", c.agent.epsilon_end),
      VLCUDN_UINT("agent", "epsilon_decay_slots", c.agent.epsilon_decay_slots, std::size_t),
      VLCUDN_UINT("agent", "warmup_slots", c.agent.warmup_slots, std::size_t),
      VLCUDN_UINT("agent", "max_slots", c.agent.max_slots, std::size_t),
      VLCUDN_BOOL("agent", "replay", c.agent.replay),
      VLCUDN_UINT("agent", "replay_batch", c.agent.replay_batch, std::size_t),
      VLCUDN_UINT("agent", "action_cap", c.agent.action_cap, std::size_t),

      VLCUDN_UINT("state", "rate_bins", c.quantization.rate_bins, std::size_t),
      VLCUDN_UINT("state", "gain_bins", c.quantization.gain_bins, std::size_t),
      VLCUDN_DOUBLE("state", "sinr_cap", c.quantization.sinr_cap),

      VLCUDN_DOUBLE("utility", "energy_weight_per_w", c.weights.energy_weight),
      VLCUDN_DOUBLE("utility", "interference_weight_per_w", c.weights.interference_weight),

      VLCUDN_UINT("experiment", "density", c.density, std::size_t),
      Field{"experiment", "policy",
            [](ExperimentConfig& c, const std::string& v) { c.policy = parse_policy(v); },
            [](const ExperimentConfig& c) { return std::string(to_string(c.policy)); }},
      VLCUDN_UINT("experiment", "runs", c.runs, std::size_t),
      VLCUDN_UINT("experiment", "seed", c.seed, std::uint64_t),
      VLCUDN_UINT("experiment", "threads", c.threads, std::size_t),
  };
  return table;
}

#undef VLCUDN_DOUBLE
#undef VLCUDN_SCALED
#undef VLCUDN_UINT
#undef VLCUDN_BOOL

void derive_cell_bounds(ExperimentConfig& c) {
  if (c.topology.rows == 0 || c.topology.cols == 0 || !(c.topology.spacing > 0.0)) {
    return;  // reported by validate()
  }
  const double s = c.topology.spacing;
  const double cx = static_cast<double>(c.topology.cols / 2) * s + s / 2.0;
  const double cy = static_cast<double>(c.topology.rows / 2) * s + s / 2.0;
  c.mobility.cell_bounds = {cx - s / 2.0, cx + s / 2.0, cy - s / 2.0, cy + s / 2.0};
}

}  // namespace

void ExperimentConfig::validate() const {
  try {
    if (topology.rows == 0 || topology.cols == 0) {
      throw DomainError("topology needs rows, cols >= 1");
    }
    if (!(topology.spacing > 0.0)) {
      throw DomainError("AP spacing must be positive");
    }
    if (!(topology.ap_height > mobility.ue_height) || !(mobility.ue_height >= 0.0)) {
      throw DomainError("need ap_height > ue_height >= 0");
    }
    channel.validate();
    link.validate();
    mobility.validate();
    agent.validate();
    weights.validate();
    if (!(interference.neighbor_power_w >= 0.0 &&
          interference.neighbor_power_w <= agent.max_power_w)) {
      throw DomainError("neighbor power must lie in [0, max_power]");
    }
    if (quantization.rate_bins == 0 || quantization.gain_bins == 0 ||
        quantization.rate_bins > 65535 || quantization.gain_bins > 65535) {
      throw DomainError("bin counts must lie in [1, 65535]");
    }
    if (!(quantization.sinr_cap > 0.0)) {
      throw DomainError("sinr_cap must be positive");
    }
    if (density == 0) {
      throw DomainError("density must be >= 1");
    }
    if (runs == 0) {
      throw DomainError("runs must be >= 1");
    }
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
}

ExperimentConfig default_config() {
  ExperimentConfig c;
  derive_cell_bounds(c);
  return c;
}

ExperimentConfig parse_config(std::istream& in) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("config syntax error: ") + e.what());
  }
  ExperimentConfig c = default_config();
  for (const auto& [section, body] : tree) {
    if (body.empty() && !body.data().empty()) {
      throw ConfigError("key '" + section + "' must be inside a [section]");
    }
    for (const auto& [key, value] : body) {
      const auto& table = fields();
      const auto it = std::find_if(table.begin(), table.end(), [&](const Field& f) {
        return f.section == section && f.key == key;
      });
      if (it == table.end()) {
        throw ConfigError("unknown config key [" + section + "] " + key);
      }
      try {
        it->set(c, value.data());
      } catch (const ConfigError& e) {
        throw ConfigError("[" + section + "] " + key + ": " + e.what());
      }
    }
  }
  derive_cell_bounds(c);
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open config '" + path.string() + "'");
  }
  return parse_config(in);
}

std::string to_ini(const ExperimentConfig& config) {
  std::string out;
  std::string_view current;
  for (const Field& f : fields()) {
    if (f.section != current) {
      if (!out.empty()) {
        out += '\n';
      }
      out += fmt::format("[{}]\n", f.section);
      current = f.section;
    }
    out += fmt::format("{} = {}\n", f.key, f.get(config));
  }
  return out;
}

std::uint64_t config_hash(const ExperimentConfig& config) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : to_ini(config)) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace vlcudn
