#include "vlcudn/link_metrics.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "vlcudn/error.hpp"

namespace vlcudn {

void LinkParams::validate() const {
  if (!(total_bandwidth_hz > 0.0)) {
    throw DomainError("total bandwidth must be positive");
  }
  if (!(noise_psd > 0.0)) {
    throw DomainError("noise PSD must be positive");
  }
  if (!(effective_bandwidth_factor > 0.0 && effective_bandwidth_factor <= 1.0)) {
    throw DomainError("effective bandwidth factor must lie in (0, 1]");
  }
}

void UtilityWeights::validate() const {
  if (!(energy_weight >= 0.0) || !(interference_weight >= 0.0)) {
    throw DomainError("utility weights must be non-negative");
  }
}

void SlotChannelSnapshot::check_dimensions() const {
  if (interferer_gains.size() != serving_gains.size()) {
    throw DimensionMismatchError("interferer_gains has " +
                                 std::to_string(interferer_gains.size()) + " rows, expected " +
                                 std::to_string(serving_gains.size()));
  }
  for (const auto& row : interferer_gains) {
    if (row.size() != outgoing_gains.size()) {
      throw DimensionMismatchError("interferer_gains row has " + std::to_string(row.size()) +
                                   " neighbors, expected " +
                                   std::to_string(outgoing_gains.size()));
    }
  }
}

namespace {

void check_powers(const PowerVector& powers, const SlotChannelSnapshot& snapshot) {
  if (powers.serving.size() != snapshot.ue_count()) {
    throw DimensionMismatchError("power vector has " + std::to_string(powers.serving.size()) +
                                 " UEs, snapshot has " + std::to_string(snapshot.ue_count()));
  }
}

void check_interferer_powers(const PowerVector& powers, const SlotChannelSnapshot& snapshot) {
  if (powers.interferer.size() != snapshot.ue_count()) {
    throw DimensionMismatchError("interferer power rows do not match UE count");
  }
  for (const auto& row : powers.interferer) {
    if (row.size() != snapshot.neighbor_count()) {
      throw DimensionMismatchError("interferer power row does not match neighbor count");
    }
  }
}

}  // namespace

double per_ue_bandwidth(const LinkParams& params, std::size_t n_ues) {
  if (n_ues == 0) {
    throw DomainError("per-UE bandwidth undefined for zero UEs");
  }
  return params.effective_bandwidth_factor * params.total_bandwidth_hz /
         static_cast<double>(n_ues);
}

double sinr(std::size_t n, const PowerVector& powers, const SlotChannelSnapshot& snapshot,
            const LinkParams& params, double responsivity) {
  snapshot.check_dimensions();
  check_powers(powers, snapshot);
  check_interferer_powers(powers, snapshot);
  if (n >= snapshot.ue_count()) {
    throw DimensionMismatchError("UE index " + std::to_string(n) + " out of range");
  }
  const double wn = per_ue_bandwidth(params, snapshot.ue_count());
  double signal = responsivity * powers.serving[n] * snapshot.serving_gains[n];
  double interference = 0.0;
  for (std::size_t j = 0; j < snapshot.neighbor_count(); ++j) {
    const double term = responsivity * powers.interferer[n][j] * snapshot.interferer_gains[n][j];
    interference += params.squared_electrical_power ? term * term : term;
  }
  if (params.squared_electrical_power) {
    signal *= signal;
  }
  return signal / (wn * params.noise_psd + interference);
}

double achievable_rate(double bandwidth_hz, double sinr_value) {
  return bandwidth_hz * std::log2(1.0 + sinr_value);
}

double total_ici(const PowerVector& powers, const SlotChannelSnapshot& snapshot,
                 double responsivity) {
  check_powers(powers, snapshot);
  double outgoing = 0.0;
  for (const auto& per_neighbor : snapshot.outgoing_gains) {
    outgoing = std::accumulate(per_neighbor.begin(), per_neighbor.end(), outgoing);
  }
  double chi = 0.0;
  for (double x : powers.serving) {
    chi += responsivity * x * outgoing;
  }
  return chi;
}

double utility_from_terms(double mean_rate_bps, double energy_w, double ici_w,
                          const UtilityWeights& weights) {
  return mean_rate_bps / kBpsPerMbps - weights.energy_weight * energy_w -
         weights.interference_weight * ici_w;
}

double utility(std::span<const double> rates_bps, std::span<const double> powers_w, double ici_w,
               const UtilityWeights& weights) {
  if (rates_bps.empty()) {
    throw DomainError("utility needs at least one UE");
  }
  const double mean_rate = std::accumulate(rates_bps.begin(), rates_bps.end(), 0.0) /
                           static_cast<double>(rates_bps.size());
  const double energy = std::accumulate(powers_w.begin(), powers_w.end(), 0.0);
  return utility_from_terms(mean_rate, energy, ici_w, weights);
}

SlotEvaluation evaluate_slot(const PowerVector& powers, const SlotChannelSnapshot& snapshot,
                             const LinkParams& params, double responsivity,
                             const UtilityWeights& weights) {
  const std::size_t n_ues = snapshot.ue_count();
  const double wn = per_ue_bandwidth(params, n_ues);
  SlotEvaluation ev;
  ev.sinr.resize(n_ues);
  ev.rates_bps.resize(n_ues);
  for (std::size_t n = 0; n < n_ues; ++n) {
    ev.sinr[n] = sinr(n, powers, snapshot, params, responsivity);
    ev.rates_bps[n] = achievable_rate(wn, ev.sinr[n]);
  }
  ev.mean_rate_bps = std::accumulate(ev.rates_bps.begin(), ev.rates_bps.end(), 0.0) /
                     static_cast<double>(n_ues);
  ev.energy_w = std::accumulate(powers.serving.begin(), powers.serving.end(), 0.0);
  ev.ici_w = total_ici(powers, snapshot, responsivity);
  ev.utility = utility_from_terms(ev.mean_rate_bps, ev.energy_w, ev.ici_w, weights);
  return ev;
}

}  // namespace vlcudn
