#pragma once

#include <Eigen/Dense>
#include <vector>

#include "leofim/geometry.hpp"
#include "leofim/signal.hpp"

namespace leofim {

/// Which receiver offsets are nuisance parameters. "Known" offsets carry no
/// information loss; unknown ones are marginalized per satellite.
struct OffsetConfig {
  bool time_known = true;  // delta_b
  bool freq_known = true;  // eps_b

  static OffsetConfig none() { return {true, true}; }        // no offsets
  static OffsetConfig time() { return {false, true}; }       // time offset only
  static OffsetConfig frequency() { return {true, false}; }  // frequency offset only
  static OffsetConfig both() { return {false, false}; }
};

/// Information over the per-satellite channel parameters
/// [tau_{u,k} ..., nu_k ..., beta, delta, eps]. Delay entries are ordered
/// slot-major with the antenna index running fastest:
///   tau index = (k-1) * n_antennas + u.
/// Blocks from different satellites are independent, so the full matrix is
/// block-diagonal over satellites.
struct ChannelFim {
  int n_sats = 0;
  int n_antennas = 0;
  int n_slots = 0;
  std::vector<Eigen::MatrixXd> blocks;  // one per satellite

  int block_size() const { return n_antennas * n_slots + n_slots + 3; }
  int tau_index(int u, int k) const { return (k - 1) * n_antennas + u; }
  int nu_index(int k) const { return n_antennas * n_slots + (k - 1); }
  int beta_index() const { return n_antennas * n_slots + n_slots; }
  int delta_index() const { return beta_index() + 1; }
  int eps_index() const { return beta_index() + 2; }

  /// Dense block-diagonal assembly over all satellites.
  Eigen::MatrixXd dense() const;
};

// Per-measurement entries. snr is linear, f_ob in Hz, t2 in s^2.
double fim_tau_tau(const SignalSpec& spec, double snr, double f_ob);
double fim_tau_delta(const SignalSpec& spec, double snr, double f_ob);
double fim_nu_nu(const SignalSpec& spec, double snr);
double fim_nu_eps(const SignalSpec& spec, double snr);
double fim_eps_eps(const SignalSpec& spec, double snr);
/// Throws std::domain_error when |beta| == 0.
double fim_beta_beta(double snr, double beta_mag);

/// Builds the per-satellite information blocks at the true parameter point
/// (offsets at zero). Cross entries between the delay and {Doppler, gain,
/// frequency offset}, between the Doppler and {gain, time offset}, between
/// the gain and everything else, and between the two offsets are all zero.
ChannelFim assemble_channel_fim(const ReceiverState& rx,
                                const ConstellationState& cs,
                                const SignalSpec& spec);

}  // namespace leofim
