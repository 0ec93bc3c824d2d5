// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero if any fails. Usage: vlcudn_acceptance <path-to-unit-test-binary>

#include <array>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "support/two_state_mdp.hpp"
#include "vlcudn/channel.hpp"
#include "vlcudn/config.hpp"
#include "vlcudn/harness.hpp"
#include "vlcudn/link_metrics.hpp"
#include "vlcudn/rl_agent.hpp"

using namespace vlcudn;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

double rel_err(double actual, double expected) {
  return std::abs(actual - expected) / std::abs(expected);
}

Outcome formula_oracles() {
  const ChannelParams ch;
  const double h0 = 7.957747154594766788e-6;
  SlotChannelSnapshot snap;
  snap.serving_gains = {h0};
  snap.interferer_gains = {{}};
  snap.outgoing_gains = {};
  SlotChannelSnapshot ici_snap;
  ici_snap.serving_gains = {h0};
  ici_snap.interferer_gains = {{0.0}};
  ici_snap.outgoing_gains = {{1e-6}};
  const LinkParams link;
  const std::vector<double> rates{10e6, 20e6};
  const std::vector<double> powers{2e-3, 2e-3};

  const std::array<std::pair<double, double>, 6> checks{{
      {channel_gain({5, 5, 3}, {5, 5, 1}, ch), h0},
      {channel_gain({5, 5, 3}, {7, 5, 1}, ch), 1.989436788648691697e-6},
      {sinr(0, {{0.004}, {{}}}, snap, link, 0.54), 1718873.385392469626},
      {achievable_rate(10e6, 1718873.385392469626), 207130326.8645366953},
      {total_ici({{0.004}, {{0.0}}}, ici_snap, 0.54), 2.16e-9},
      {utility(rates, powers, 1e-9, {1e3, 1e6}), 10.999},
  }};
  double worst = 0.0;
  for (const auto& [a, e] : checks) {
    worst = std::max(worst, rel_err(a, e));
  }
  return {worst <= 1e-9, fmt::format("max relative error {:.3g} over {} examples", worst,
                                     checks.size())};
}

Outcome lambertian_order_exact() {
  const double e60 = rel_err(lambertian_order(Angle::degrees(60.0)), 1.0);
  const double e45 = rel_err(lambertian_order(Angle::degrees(45.0)), 2.0);
  return {e60 <= 1e-12 && e45 <= 1e-12,
          fmt::format("m(60)-1 rel {:.3g}, m(45)-2 rel {:.3g}", e60, e45)};
}

Outcome epsilon_greedy_distribution() {
  const ActionSet actions(1, 1.0, 2);
  QTable q(actions.size());
  const StateKey s{{0, 0}, {0, 0}, 2};
  q.set(s, 2, 1.0);
  Rng rng(20240601);
  const int draws = 100000;
  std::array<int, 4> counts{};
  for (int i = 0; i < draws; ++i) {
    ++counts[select_action(q, s, actions, 0.4, rng)];
  }
  bool ok = true;
  std::string detail;
  for (std::size_t a = 0; a < 4; ++a) {
    const double p = a == 2 ? 0.6 : 0.4 / 3.0;
    const double sigma = std::sqrt(p * (1 - p) / draws);
    const double f = counts[a] / static_cast<double>(draws);
    ok = ok && std::abs(f - p) <= 3 * sigma;
    detail += fmt::format("{}a{}={:.4f}({:+.2f}sd)", a ? " " : "", a, f, (f - p) / sigma);
  }
  return {ok, detail};
}

Outcome q_learning_oracle() {
  const testing::TwoStateMdp mdp;
  const auto qstar = mdp.value_iteration(1e-12);
  const QTable q = testing::learn_two_state(mdp, 10000, 0.3, 0.5, 99);
  double qnorm = 0.0;
  double err = 0.0;
  bool same_policy = true;
  for (std::size_t s = 0; s < 2; ++s) {
    const auto row = q.row(testing::mdp_state(s));
    if (row.size() != 2) {
      return {false, "state never visited"};
    }
    same_policy = same_policy && ((row[1] > row[0]) == (qstar[s][1] > qstar[s][0]));
    for (std::size_t a = 0; a < 2; ++a) {
      qnorm = std::max(qnorm, std::abs(qstar[s][a]));
      err = std::max(err, std::abs(row[a] - qstar[s][a]));
    }
  }
  return {same_policy && err < 0.05 * qnorm,
          fmt::format("policy {}, |Q-Q*|inf/|Q*|inf = {:.3g}",
                      same_policy ? "matches" : "differs", err / qnorm)};
}

struct DensityRuns {
  std::array<RunSeries, 3> rpic;  // density 1, 2, 3
  RunSeries half;                  // FixedHalf at density 3
};

ExperimentConfig full_config() {
  ExperimentConfig c = default_config();
  c.runs = 100;
  c.agent.max_slots = 3000;
  c.seed = 1;
  c.threads = 0;
  return c;
}

DensityRuns run_density_sweep() {
  ExperimentConfig c = full_config();
  DensityRuns out;
  const std::vector<std::size_t> densities{1, 2, 3};
  auto sweep = sweep_density(c, densities);
  for (std::size_t i = 0; i < 3; ++i) out.rpic[i] = std::move(sweep[i]);
  c.policy = Policy::FixedHalf;
  out.half = run_experiment(c);
  return out;
}

double converged(const RunSeries& s, double SlotMetrics::*f) {
  return window_mean(s, f, s.slots.size() - 500, s.slots.size());
}

double initial(const RunSeries& s, double SlotMetrics::*f) { return window_mean(s, f, 0, 50); }

Outcome utility_decreases(const DensityRuns& r) {
  const double u1 = converged(r.rpic[0], &SlotMetrics::utility);
  const double u2 = converged(r.rpic[1], &SlotMetrics::utility);
  const double u3 = converged(r.rpic[2], &SlotMetrics::utility);
  return {u1 > u2 && u2 > u3,
          fmt::format("last-500 utility rho=1,2,3: {:.4f} {:.4f} {:.4f}", u1, u2, u3)};
}

Outcome rate_band(const DensityRuns& r) {
  const double rate = converged(r.rpic[2], &SlotMetrics::mean_rate_bps) / 1e6;
  return {rate >= 25.0 && rate <= 60.0,
          fmt::format("last-500 mean rate at rho=3: {:.3f} Mbps (band [25, 60])", rate)};
}

Outcome improvement(const DensityRuns& r) {
  const RunSeries& s = r.rpic[2];
  const double e0 = initial(s, &SlotMetrics::energy_w);
  const double e1 = converged(s, &SlotMetrics::energy_w);
  const double i0 = initial(s, &SlotMetrics::ici_w);
  const double i1 = converged(s, &SlotMetrics::ici_w);
  const double u = converged(s, &SlotMetrics::utility);
  const double uh = converged(r.half, &SlotMetrics::utility);
  const double de = 1.0 - e1 / e0;
  const double di = 1.0 - i1 / i0;
  return {de >= 0.05 && di >= 0.05 && u > uh,
          fmt::format("energy -{:.1f}%, ICI -{:.1f}%, utility {:.4f} vs fixed-half {:.4f}",
                      100 * de, 100 * di, u, uh)};
}

std::string csv_of(const RunSeries& s) {
  std::ostringstream out;
  write_csv(out, s.slots);
  return out.str();
}

Outcome determinism() {
  ExperimentConfig c = full_config();
  c.threads = 1;
  const std::string a = csv_of(run_experiment(c));
  const std::string b = csv_of(run_experiment(c));
  c.threads = 4;
  const std::string p = csv_of(run_experiment(c));
  return {a == b && a == p, fmt::format("serial repeat {}, serial vs 4 threads {} ({} bytes)",
                                        a == b ? "identical" : "DIFFERS",
                                        a == p ? "identical" : "DIFFERS", a.size())};
}

Outcome properties(const char* unit_binary) {
  if (unit_binary == nullptr) {
    return {false, "unit test binary path not given"};
  }
  const std::string cmd =
      fmt::format("\"{}\" --gtest_filter='Property.*' --gtest_brief=1 > /dev/null 2>&1",
                  unit_binary);
  const int rc = std::system(cmd.c_str());
  return {rc == 0, fmt::format("Property.* suite exit status {}", rc)};
}

}  // namespace

int main(int argc, char** argv) {
  int failures = 0;
  auto report = [&](int id, const char* name, const Outcome& o) {
    fmt::print("criterion {}: {} {} ({})\n", id, o.pass ? "PASS" : "FAIL", name, o.detail);
    std::fflush(stdout);
    failures += o.pass ? 0 : 1;
  };

  report(1, "formula oracles", formula_oracles());
  report(2, "Lambertian order", lambertian_order_exact());
  report(3, "epsilon-greedy distribution", epsilon_greedy_distribution());
  report(4, "Q-learning vs value iteration", q_learning_oracle());

  const auto t0 = std::chrono::steady_clock::now();
  const DensityRuns sweep = run_density_sweep();
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  fmt::print("  (density sweep and baseline: 4 x 100 runs x 3000 slots in {:.1f} s)\n", secs);
  report(5, "utility decreases with density", utility_decreases(sweep));
  report(6, "mean rate band at density 3", rate_band(sweep));
  report(7, "energy/ICI reduction and baseline comparison", improvement(sweep));
  report(8, "determinism", determinism());
  report(9, "randomized property suites", properties(argc > 1 ? argv[1] : nullptr));

  fmt::print("{} of 9 criteria failed\n", failures);
  return failures == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
