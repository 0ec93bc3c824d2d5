// vlcudn: command-line front end for the VLC ultra-dense network power-control
// simulator.
//
//   vlcudn simulate  --config cfg.ini [--runs R] [--seed S] [--policy P] [--density N] [--out DIR]
//   vlcudn sweep     --config cfg.ini --densities 1,2,3 --out DIR
//   vlcudn inspect-q --qtable q.tsv
//   vlcudn calibrate --config cfg.ini [--fraction F]
//   vlcudn default-config
//
// Exit codes: 0 success, 2 configuration/usage error, 3 runtime abort.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "vlcudn/config.hpp"
#include "vlcudn/error.hpp"
#include "vlcudn/harness.hpp"
#include "vlcudn/qtable_io.hpp"

namespace fs = std::filesystem;
using namespace vlcudn;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

struct CommonOptions {
  std::string config_path;
  std::optional<std::size_t> runs;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> policy;
  std::optional<std::size_t> threads;
  std::string out_dir = "out";
};

void add_common(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--config", o.config_path, "Experiment config (INI)")->required();
  cmd->add_option("--runs", o.runs, "Monte-Carlo runs to average");
  cmd->add_option("--seed", o.seed, "Base seed; run i uses seed + i");
  cmd->add_option("--policy", o.policy, "rpic | fixed-max | fixed-half | random | greedy-myopic");
  cmd->add_option("--threads", o.threads, "Worker threads (0 = all cores)");
  cmd->add_option("--out", o.out_dir, "Output directory");
}

ExperimentConfig resolve(const CommonOptions& o) {
  ExperimentConfig c = load_config(o.config_path);
  if (o.runs) c.runs = *o.runs;
  if (o.seed) c.seed = *o.seed;
  if (o.policy) c.policy = parse_policy(*o.policy);
  if (o.threads) c.threads = *o.threads;
  c.validate();
  return c;
}

std::string stem_for(const ExperimentConfig& c) {
  return fmt::format("{}_density{}", to_string(c.policy), c.density);
}

void write_series(const fs::path& dir, const ExperimentConfig& c, const RunSeries& s) {
  fs::create_directories(dir);
  const std::string stem = stem_for(c);
  write_csv(dir / (stem + ".csv"), s.slots);
  write_metadata(dir / (stem + ".json"), c, s.meta);
  std::cout << "wrote " << (dir / (stem + ".csv")).string() << '\n';
}

void print_summary(const RunSeries& s) {
  const std::size_t n = s.slots.size();
  const std::size_t head = std::min<std::size_t>(50, n);
  const std::size_t tail = n > 500 ? n - 500 : 0;
  auto line = [&](const char* label, std::size_t a, std::size_t b) {
    std::cout << fmt::format("  {:<16} utility {:>10.4f}  rate {:>8.3f} Mbps  energy {:>7.4f} mW  ici {:.4e} W\n",
                             label, window_mean(s, &SlotMetrics::utility, a, b),
                             window_mean(s, &SlotMetrics::mean_rate_bps, a, b) / 1e6,
                             window_mean(s, &SlotMetrics::energy_w, a, b) * 1e3,
                             window_mean(s, &SlotMetrics::ici_w, a, b));
  };
  std::cout << fmt::format("policy={} density={} runs={} seed={}\n", to_string(s.meta.policy),
                           s.meta.density, s.meta.runs, s.meta.seed);
  line("first 50 slots", 0, head);
  line("last 500 slots", tail, n);
}

std::vector<std::size_t> parse_densities(const std::string& text) {
  std::vector<std::size_t> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const std::string item = text.substr(start, comma - start);
    try {
      std::size_t used = 0;
      const unsigned long v = std::stoul(item, &used);
      if (used != item.size() || v == 0) {
        throw std::invalid_argument(item);
      }
      out.push_back(v);
    } catch (const std::exception&) {
      throw ConfigError("bad density '" + item + "' in --densities");
    }
    if (comma == std::string::npos) {
      break;
    }
    start = comma + 1;
  }
  return out;
}

int cmd_simulate(const CommonOptions& o, std::optional<std::size_t> density, bool per_run,
                 const std::string& export_q, const std::string& warm_start,
                 const std::string& trajectory) {
  ExperimentConfig c = resolve(o);
  if (density) {
    c.density = *density;
    c.validate();
  }
  std::optional<QTableFile> warm;
  if (!warm_start.empty()) {
    warm = read_qtable(fs::path(warm_start));
  }
  QTable first_q(0);
  ExperimentHooks hooks;
  hooks.warm_start = warm ? &warm->table : nullptr;
  hooks.first_run_q = export_q.empty() ? nullptr : &first_q;
  const fs::path out_dir(o.out_dir);
  if (per_run) {
    fs::create_directories(out_dir / "runs");
    hooks.on_run = [&](std::size_t i, const std::vector<SlotMetrics>& run) {
      write_csv(out_dir / "runs" / fmt::format("{}_run{:04}.csv", stem_for(c), i), run);
    };
  }
  const RunSeries series = run_experiment(c, hooks);
  write_series(out_dir, c, series);
  print_summary(series);

  if (!export_q.empty()) {
    if (c.policy != Policy::Rpic) {
      std::cerr << "note: --export-q ignored for non-learning policy\n";
    } else {
      Rng rng(c.seed);
      CellEnvironment env(c, rng);
      write_qtable(fs::path(export_q), first_q, make_quantizer(c, env.peak_gain()));
      std::cout << "wrote Q-table of run 0 to " << export_q << '\n';
    }
  }
  if (!trajectory.empty()) {
    std::ofstream out(trajectory);
    if (!out) {
      throw ConfigError("cannot open '" + trajectory + "'");
    }
    out << "slot,ue_id,x,y\n";
    EpisodeHooks eh;
    eh.warm_start = hooks.warm_start;
    eh.on_positions = [&out](std::size_t k, const std::vector<UeState>& ues) {
      for (const auto& ue : ues) {
        out << fmt::format("{},{},{:.17g},{:.17g}\n", k, ue.id, ue.position.x, ue.position.y);
      }
    };
    run_episode(c, c.seed, eh);
    std::cout << "wrote run-0 trajectory to " << trajectory << '\n';
  }
  return 0;
}

int cmd_sweep(const CommonOptions& o, const std::string& densities_text) {
  const ExperimentConfig c = resolve(o);
  const auto densities = parse_densities(densities_text);
  const auto all = sweep_density(c, densities);
  for (std::size_t i = 0; i < densities.size(); ++i) {
    ExperimentConfig ci = c;
    ci.density = densities[i];
    write_series(fs::path(o.out_dir), ci, all[i]);
    print_summary(all[i]);
  }
  return 0;
}

int cmd_inspect_q(const std::string& path, std::size_t top) {
  const QTableFile file = read_qtable(fs::path(path));
  const QTable& q = file.table;
  std::cout << fmt::format("actions={} states={} entries={}\n", q.action_count(), q.state_count(),
                           q.entry_count());
  std::cout << fmt::format("bins: rate={} (max {:.6g} bps)  gain={} (max {:.6g})\n",
                           file.quantizer.rate_bins, file.quantizer.rate_max_bps,
                           file.quantizer.gain_bins, file.quantizer.gain_max);

  struct Best {
    std::size_t action = 0;
    double value = -std::numeric_limits<double>::infinity();
    std::size_t written = 0;
  };
  std::map<std::string, Best> per_state;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  q.for_each_entry([&](const StateKey& s, std::size_t a, double v) {
    Best& b = per_state[s.to_string()];
    ++b.written;
    if (v > b.value || (v == b.value && a < b.action)) {
      b.value = v;
      b.action = a;
    }
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  });
  if (q.entry_count() > 0) {
    std::cout << fmt::format("q range: [{:.6g}, {:.6g}]\n", lo, hi);
  }
  std::vector<std::pair<std::string, Best>> rows(per_state.begin(), per_state.end());
  std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
    return a.second.written != b.second.written ? a.second.written > b.second.written
                                                : a.first < b.first;
  });
  std::cout << "state\tvisited_actions\tgreedy_action\tq\n";
  for (std::size_t i = 0; i < rows.size() && i < top; ++i) {
    std::cout << fmt::format("{}\t{}\t{}\t{:.6g}\n", rows[i].first, rows[i].second.written,
                             rows[i].second.action, rows[i].second.value);
  }
  return 0;
}

int cmd_calibrate(const std::string& config_path, std::optional<std::size_t> density,
                  double fraction, std::size_t samples) {
  ExperimentConfig c = load_config(config_path);
  if (density) {
    c.density = *density;
  }
  const auto rep = calibrate_weights(c, fraction, samples, c.seed);
  std::cout << fmt::format("density {} at X_max/2 ({} placements):\n", rep.density, samples);
  std::cout << fmt::format("  mean rate   {:.6g} Mbps\n  energy      {:.6g} W\n  ici         {:.6g} W\n",
                           rep.mean_rate_mbps, rep.energy_w, rep.ici_w);
  std::cout << fmt::format("suggested weights (each penalty = {} x rate term):\n", fraction);
  std::cout << fmt::format("  energy_weight_per_w = {:.6g}\n  interference_weight_per_w = {:.6g}\n",
                           rep.suggested.energy_weight, rep.suggested.interference_weight);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"VLC ultra-dense network power and interference control simulator"};
  app.require_subcommand(1);

  CommonOptions sim_opts;
  std::optional<std::size_t> sim_density;
  bool per_run = false;
  std::string export_q;
  std::string warm_start;
  std::string trajectory;
  auto* sim = app.add_subcommand("simulate", "Run one Monte-Carlo experiment");
  add_common(sim, sim_opts);
  sim->add_option("--density", sim_density, "UEs in the central cell");
  sim->add_flag("--per-run", per_run, "Also write one CSV per run under <out>/runs/");
  sim->add_option("--export-q", export_q, "Write run 0's final Q-table here");
  sim->add_option("--warm-start", warm_start, "Initialize every run's Q-table from this file");
  sim->add_option("--trajectory", trajectory, "Write run 0's UE positions (slot,ue_id,x,y)");

  CommonOptions sweep_opts;
  std::string densities;
  auto* sweep = app.add_subcommand("sweep", "Run one experiment per UE density");
  add_common(sweep, sweep_opts);
  sweep->add_option("--densities", densities, "Comma-separated list, e.g. 1,2,3")->required();

  std::string qtable_path;
  std::size_t top = 20;
  auto* inspect = app.add_subcommand("inspect-q", "Summarize an exported Q-table");
  inspect->add_option("--qtable", qtable_path, "Q-table file")->required();
  inspect->add_option("--top", top, "States to list");

  std::string cal_config;
  std::optional<std::size_t> cal_density;
  double fraction = 0.4;
  std::size_t samples = 20000;
  auto* calibrate = app.add_subcommand("calibrate", "Report utility-term magnitudes at X_max/2");
  calibrate->add_option("--config", cal_config, "Experiment config (INI)")->required();
  calibrate->add_option("--density", cal_density, "UEs in the central cell");
  calibrate->add_option("--fraction", fraction, "Penalty-to-rate ratio for suggested weights");
  calibrate->add_option("--samples", samples, "Random placements to average");

  auto* defaults = app.add_subcommand("default-config", "Print the default config file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  try {
    if (*sim) {
      return cmd_simulate(sim_opts, sim_density, per_run, export_q, warm_start, trajectory);
    }
    if (*sweep) {
      return cmd_sweep(sweep_opts, densities);
    }
    if (*inspect) {
      return cmd_inspect_q(qtable_path, top);
    }
    if (*calibrate) {
      return cmd_calibrate(cal_config, cal_density, fraction, samples);
    }
    if (*defaults) {
      std::cout << to_ini(default_config());
      return 0;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const DomainError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const RuntimeAbort& e) {
    std::cerr << "runtime abort: " << e.what() << '\n';
    return kExitRuntime;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return 0;
}
