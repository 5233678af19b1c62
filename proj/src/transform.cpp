#include "leofim/transform.hpp"

#include <stdexcept>

#include "leofim/constants.hpp"

namespace leofim {

Vector3 dtau_dp(const GeometrySnapshot& s, int b, int u, int k) {
  return s.dir[b][k - 1][u] / kSpeedOfLight;
}

Vector3 dtau_dphi(const GeometrySnapshot& s, const ReceiverState& rx, int b,
                  int u, int k) {
  const auto dq = rotation_matrix_derivatives(rx.phi_u);
  const Vector3& d = s.dir[b][k - 1][u];
  const Vector3& off = rx.antenna_offsets[u];
  Vector3 g;
  for (int i = 0; i < 3; ++i) {
    g[i] = d.dot(dq[i] * off) / kSpeedOfLight;
  }
  return g;
}

Vector3 dtau_dv(const GeometrySnapshot& s, double delta_t, int b, int u,
                int k) {
  return (k - 1) * delta_t * dtau_dp(s, b, u, k);
}

Vector3 dnu_dp(const GeometrySnapshot& s, const ConstellationState& cs,
               const ReceiverState& rx, int b, int k) {
  const double d = s.range_centroid[b][k - 1];
  if (d <= 0.0) {
    throw std::domain_error("radial-rate gradient undefined at zero range");
  }
  const Vector3& u = s.dir_centroid[b][k - 1];
  const Vector3 w = satellite_velocity(cs, b, k) - rx.v_u;
  return (w - u.dot(w) * u) / (kSpeedOfLight * d);
}

Vector3 dnu_dv(const GeometrySnapshot& s, const ConstellationState& cs,
               const ReceiverState& rx, int b, int k) {
  Vector3 g = -s.dir_centroid[b][k - 1] / kSpeedOfLight;
  if (k > 1) {
    g += (k - 1) * cs.delta_t * dnu_dp(s, cs, rx, b, k);
  }
  return g;
}

Jacobian build_jacobian(const ReceiverState& rx, const ConstellationState& cs) {
  const GeometrySnapshot s = snapshot(rx, cs);
  ChannelFim layout;
  layout.n_sats = s.n_sats;
  layout.n_antennas = s.n_antennas;
  layout.n_slots = s.n_slots;
  const int m = layout.block_size();

  Jacobian jac;
  jac.n_sats = s.n_sats;
  jac.n_antennas = s.n_antennas;
  jac.n_slots = s.n_slots;
  jac.m = Eigen::MatrixXd::Zero(9 + 3 * s.n_sats, m * s.n_sats);

  for (int b = 0; b < s.n_sats; ++b) {
    const int c0 = b * m;
    for (int k = 1; k <= s.n_slots; ++k) {
      for (int u = 0; u < s.n_antennas; ++u) {
        const int col = c0 + layout.tau_index(u, k);
        jac.m.block<3, 1>(0, col) = dtau_dp(s, b, u, k);
        jac.m.block<3, 1>(3, col) = dtau_dphi(s, rx, b, u, k);
        jac.m.block<3, 1>(6, col) = dtau_dv(s, cs.delta_t, b, u, k);
      }
      const int col = c0 + layout.nu_index(k);
      jac.m.block<3, 1>(0, col) = dnu_dp(s, cs, rx, b, k);
      // Orientation does not move the centroid, so the radial rate carries
      // no orientation information.
      jac.m.block<3, 1>(6, col) = dnu_dv(s, cs, rx, b, k);
    }
    jac.m(9 + 3 * b + 0, c0 + layout.beta_index()) = 1.0;
    jac.m(9 + 3 * b + 1, c0 + layout.delta_index()) = 1.0;
    jac.m(9 + 3 * b + 2, c0 + layout.eps_index()) = 1.0;
  }
  return jac;
}

}  // namespace leofim
