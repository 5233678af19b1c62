#include "leofim/channel.hpp"

#include <stdexcept>

#include "leofim/constants.hpp"

namespace leofim {

Eigen::MatrixXd ChannelFim::dense() const {
  const int m = block_size();
  Eigen::MatrixXd full = Eigen::MatrixXd::Zero(m * n_sats, m * n_sats);
  for (int b = 0; b < n_sats; ++b) {
    full.block(b * m, b * m, m, m) = blocks[b];
  }
  return full;
}

double fim_tau_tau(const SignalSpec& spec, double snr, double f_ob) {
  return snr * omega(spec, f_ob);
}

double fim_tau_delta(const SignalSpec& spec, double snr, double f_ob) {
  return -fim_tau_tau(spec, snr, f_ob);
}

double fim_nu_nu(const SignalSpec& spec, double snr) {
  return 0.5 * snr * spec.fc * spec.fc * spec.effective_t2();
}

double fim_nu_eps(const SignalSpec& spec, double snr) {
  return -0.5 * snr * spec.fc * spec.effective_t2();
}

double fim_eps_eps(const SignalSpec& spec, double snr) {
  return 0.5 * snr * spec.effective_t2();
}

double fim_beta_beta(double snr, double beta_mag) {
  if (beta_mag == 0.0) {
    throw std::domain_error("gain information undefined for |beta| = 0");
  }
  return snr / (4.0 * kPi * kPi * beta_mag * beta_mag);
}

ChannelFim assemble_channel_fim(const ReceiverState& rx,
                                const ConstellationState& cs,
                                const SignalSpec& spec) {
  const GeometrySnapshot s = snapshot(rx, cs);
  ChannelFim fim;
  fim.n_sats = s.n_sats;
  fim.n_antennas = s.n_antennas;
  fim.n_slots = s.n_slots;
  const int m = fim.block_size();
  fim.blocks.assign(fim.n_sats, Eigen::MatrixXd::Zero(m, m));

  for (int b = 0; b < fim.n_sats; ++b) {
    Eigen::MatrixXd& j = fim.blocks[b];
    double delta_delta = 0.0;
    double eps_eps = 0.0;
    for (int k = 1; k <= fim.n_slots; ++k) {
      const double f_ob = observed_frequency(spec, s.doppler[b][k - 1], 0.0);
      double nu_nu = 0.0;
      double nu_eps = 0.0;
      for (int u = 0; u < fim.n_antennas; ++u) {
        const int it = fim.tau_index(u, k);
        const double jtt = fim_tau_tau(spec, spec.snr, f_ob);
        j(it, it) = jtt;
        j(it, fim.delta_index()) = -jtt;
        j(fim.delta_index(), it) = -jtt;
        delta_delta += jtt;
        nu_nu += fim_nu_nu(spec, spec.snr);
        nu_eps += fim_nu_eps(spec, spec.snr);
        eps_eps += fim_eps_eps(spec, spec.snr);
      }
      const int in = fim.nu_index(k);
      j(in, in) = nu_nu;
      j(in, fim.eps_index()) = nu_eps;
      j(fim.eps_index(), in) = nu_eps;
    }
    j(fim.beta_index(), fim.beta_index()) =
        fim.n_antennas * fim.n_slots *
        fim_beta_beta(spec.snr, spec.gain_mag);
    j(fim.delta_index(), fim.delta_index()) = delta_delta;
    j(fim.eps_index(), fim.eps_index()) = eps_eps;
  }
  return fim;
}

}  // namespace leofim
