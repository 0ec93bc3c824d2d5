#pragma once

// Per-slot SINR, achievable rate, inter-cell interference and utility.

#include <cstddef>
#include <span>
#include <vector>

namespace vlcudn {

struct LinkParams {
  double total_bandwidth_hz = 20e6;  // W, per AP
  double noise_psd = 1e-21;  // N0, A^2/Hz
  double effective_bandwidth_factor = 0.5;  // IM/DD Hermitian symmetry halves W
  // false: SINR numerator/denominator linear in eta*x*h as printed.
  // true:  electrical-power form (eta*x*h)^2 over W_n N0 + sum (eta*x_j*gamma)^2.
  bool squared_electrical_power = false;

  void validate() const;
};

// Channel state for the central cell at one slot.
//   serving_gains[n]       h_n         BS AP -> its UE n
//   interferer_gains[n][j] gamma_{j,n} neighbor j -> UE n
//   outgoing_gains[j][m]   g_{j,m}     BS AP -> UE m of neighbor j
// M_j is outgoing_gains[j].size().
struct SlotChannelSnapshot {
  std::vector<double> serving_gains;
  std::vector<std::vector<double>> interferer_gains;
  std::vector<std::vector<double>> outgoing_gains;

  std::size_t ue_count() const { return serving_gains.size(); }
  std::size_t neighbor_count() const { return outgoing_gains.size(); }
  std::size_t foreign_ue_count(std::size_t j) const { return outgoing_gains[j].size(); }
  // Throws DimensionMismatchError if the nested sizes disagree.
  void check_dimensions() const;
};

// Optical powers in watts.
//   serving[n]       x_n
//   interferer[n][j] x_{j,n}
struct PowerVector {
  std::vector<double> serving;
  std::vector<std::vector<double>> interferer;
};

// Weights per watt; rates enter the utility in Mbps.
struct UtilityWeights {
  double energy_weight = 0.0;  // C_E
  double interference_weight = 0.0;  // C_I

  void validate() const;
};

inline constexpr double kBpsPerMbps = 1e6;

// W_n = factor * W / N. Throws DomainError when n_ues == 0.
double per_ue_bandwidth(const LinkParams& params, std::size_t n_ues);

double sinr(std::size_t n, const PowerVector& powers, const SlotChannelSnapshot& snapshot,
            const LinkParams& params, double responsivity);

// r = W_n log2(1 + zeta), bits/s.
double achievable_rate(double bandwidth_hz, double sinr_value);

// chi = sum_n sum_j sum_m eta x_n g_{j,m}, watts.
double total_ici(const PowerVector& powers, const SlotChannelSnapshot& snapshot,
                 double responsivity);

// u = mean(r)/1e6 - C_E * energy - C_I * ici.
double utility_from_terms(double mean_rate_bps, double energy_w, double ici_w,
                          const UtilityWeights& weights);

double utility(std::span<const double> rates_bps, std::span<const double> powers_w, double ici_w,
               const UtilityWeights& weights);

struct SlotEvaluation {
  std::vector<double> sinr;
  std::vector<double> rates_bps;
  double mean_rate_bps = 0.0;
  double energy_w = 0.0;
  double ici_w = 0.0;
  double utility = 0.0;
};

// All of the above for one power allocation.
SlotEvaluation evaluate_slot(const PowerVector& powers, const SlotChannelSnapshot& snapshot,
                             const LinkParams& params, double responsivity,
                             const UtilityWeights& weights);

}  // namespace vlcudn
