#pragma once

#include <Eigen/Dense>

#include "leofim/channel.hpp"
#include "leofim/geometry.hpp"

namespace leofim {

/// Derivatives of the channel parameters with respect to the location
/// parameters kappa = [p_U(3), Phi_U(3), v_U(3), zeta_1(3), ..., zeta_B(3)],
/// zeta_b = [beta_b, delta_b, eps_b]. Rows follow kappa, columns follow the
/// channel ordering of ChannelFim. Nuisance rows are identity onto their own
/// columns; entries that are identically zero stay exactly zero.
struct Jacobian {
  Eigen::MatrixXd m;           // (9 + 3 n_sats) x (n_sats * block)
  int n_sats = 0;
  int n_antennas = 0;
  int n_slots = 0;

  int rows_location() const { return 9; }
  int rows_total() const { return 9 + 3 * n_sats; }
  int col_offset(int b) const {
    return b * (n_antennas * n_slots + n_slots + 3);
  }
};

/// Delay gradient wrt centroid position: Delta_buk / c.
Vector3 dtau_dp(const GeometrySnapshot& s, int b, int u, int k);

/// Delay gradient wrt the orientation angles, using analytic rotation
/// derivatives. Zero whenever the antenna sits at the centroid.
Vector3 dtau_dphi(const GeometrySnapshot& s, const ReceiverState& rx, int b,
                  int u, int k);

/// Delay gradient wrt receiver velocity: (k-1) dt Delta_buk / c.
Vector3 dtau_dv(const GeometrySnapshot& s, double delta_t, int b, int u, int k);

/// Radial-rate gradient wrt centroid position: the component of the relative
/// velocity orthogonal to the line of sight, divided by range and by c.
Vector3 dnu_dp(const GeometrySnapshot& s, const ConstellationState& cs,
               const ReceiverState& rx, int b, int k);

/// Radial-rate gradient wrt receiver velocity. The direct term is
/// -Delta_bUk / c; slots after the first add the propagation chain term
/// (k-1) dt * dnu_dp because the slot-k centroid moves with v_U.
Vector3 dnu_dv(const GeometrySnapshot& s, const ConstellationState& cs,
               const ReceiverState& rx, int b, int k);

/// Assembles the full transformation matrix.
Jacobian build_jacobian(const ReceiverState& rx, const ConstellationState& cs);

}  // namespace leofim
