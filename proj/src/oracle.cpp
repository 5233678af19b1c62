#include "leofim/oracle.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace leofim {
namespace oracle {

namespace {

// h = max(|x|, floor) * eps^(1/3). The floor is the characteristic scale of
// the parameter block: 1 m and 1 rad suffice because positions sit at
// Earth-radius magnitudes and angles are order one, but velocity components
// can be arbitrarily small while the delay they act on is milliseconds, so
// the velocity floor is raised to keep the central difference above roundoff.
double step_for(double x, double floor_scale) {
  const double cbrt_eps =
      std::cbrt(std::numeric_limits<double>::epsilon());
  return std::max(std::abs(x), floor_scale) * cbrt_eps;
}

ReceiverState perturbed(const ReceiverState& rx, int param, double delta) {
  ReceiverState r = rx;
  if (param < 3) {
    r.p_u[param] += delta;
  } else if (param < 6) {
    r.phi_u[param - 3] += delta;
  } else {
    r.v_u[param - 6] += delta;
  }
  return r;
}

}  // namespace

Jacobian numeric_jacobian(const ReceiverState& rx,
                          const ConstellationState& cs) {
  ChannelFim layout;
  {
    const GeometrySnapshot s = snapshot(rx, cs);
    layout.n_sats = s.n_sats;
    layout.n_antennas = s.n_antennas;
    layout.n_slots = s.n_slots;
  }
  const int m = layout.block_size();

  Jacobian jac;
  jac.n_sats = layout.n_sats;
  jac.n_antennas = layout.n_antennas;
  jac.n_slots = layout.n_slots;
  jac.m = Eigen::MatrixXd::Zero(9 + 3 * layout.n_sats, m * layout.n_sats);

  for (int param = 0; param < 9; ++param) {
    const double x = (param < 3)   ? rx.p_u[param]
                     : (param < 6) ? rx.phi_u[param - 3]
                                   : rx.v_u[param - 6];
    const double floor_scale = (param < 6) ? 1.0 : 100.0;
    const double h = step_for(x, floor_scale);
    const ReceiverState hi = perturbed(rx, param, h);
    const ReceiverState lo = perturbed(rx, param, -h);

    const Matrix3 q_hi = rotation_matrix(hi.phi_u);
    const Matrix3 q_lo = rotation_matrix(lo.phi_u);
    for (int b = 0; b < layout.n_sats; ++b) {
      for (int k = 1; k <= layout.n_slots; ++k) {
        const Eigen::Vector3d p_sat = satellite_position(cs, b, k);
        const Eigen::Vector3d v_sat = satellite_velocity(cs, b, k);
        const Eigen::Vector3d c_hi =
            centroid_position(hi, cs.delta_t, k) - p_sat;
        const Eigen::Vector3d c_lo =
            centroid_position(lo, cs.delta_t, k) - p_sat;
        for (int u = 0; u < layout.n_antennas; ++u) {
          // Delay difference through the cancellation-free norm identity
          // |A| - |B| = (A - B).(A + B) / (|A| + |B|). The difference vector
          // is assembled term by term so the unperturbed range magnitude
          // never enters a subtraction.
          const Eigen::Vector3d off_hi = q_hi * rx.antenna_offsets[u];
          const Eigen::Vector3d off_lo = q_lo * rx.antenna_offsets[u];
          const Eigen::Vector3d a_hi = c_hi + off_hi;
          const Eigen::Vector3d a_lo = c_lo + off_lo;
          const Eigen::Vector3d diff = (c_hi - c_lo) + (off_hi - off_lo);
          const double range_diff =
              diff.dot(a_hi + a_lo) / (a_hi.norm() + a_lo.norm());
          jac.m(param, b * m + layout.tau_index(u, k)) =
              range_diff / (kSpeedOfLight * 2.0 * h);
        }
        const double nu_hi =
            c_hi.dot(v_sat - hi.v_u) / (c_hi.norm() * kSpeedOfLight);
        const double nu_lo =
            c_lo.dot(v_sat - lo.v_u) / (c_lo.norm() * kSpeedOfLight);
        jac.m(param, b * m + layout.nu_index(k)) = (nu_hi - nu_lo) / (2.0 * h);
      }
    }
  }
  for (int b = 0; b < layout.n_sats; ++b) {
    jac.m(9 + 3 * b + 0, b * m + layout.beta_index()) = 1.0;
    jac.m(9 + 3 * b + 1, b * m + layout.delta_index()) = 1.0;
    jac.m(9 + 3 * b + 2, b * m + layout.eps_index()) = 1.0;
  }
  return jac;
}

Eigen::MatrixXd congruence_fim(const Jacobian& jac, const ChannelFim& fim) {
  const Eigen::MatrixXd dense = fim.dense();
  if (jac.m.cols() != dense.rows()) {
    throw std::invalid_argument("jacobian/channel dimension mismatch");
  }
  return jac.m * dense * jac.m.transpose();
}

Eigen::MatrixXd schur(const Eigen::MatrixXd& j, int keep) {
  const int n = static_cast<int>(j.rows());
  if (keep <= 0 || keep > n) {
    throw std::invalid_argument("invalid keep size");
  }
  if (keep == n) {
    return j;
  }
  const int r = n - keep;
  const Eigen::MatrixXd j11 = j.topLeftCorner(keep, keep);
  const Eigen::MatrixXd j12 = j.topRightCorner(keep, r);
  const Eigen::MatrixXd j22 = j.bottomRightCorner(r, r);

  // Equilibrate the trailing block; its diagonal mixes scales that differ by
  // tens of orders of magnitude, which would defeat the pivot threshold.
  Eigen::VectorXd d(r);
  for (int i = 0; i < r; ++i) {
    const double v = std::abs(j22(i, i));
    d[i] = (std::isfinite(v) && v > 0.0) ? std::sqrt(v) : 1.0;
  }
  Eigen::MatrixXd m(r, r);
  for (int a = 0; a < r; ++a) {
    for (int b = 0; b < r; ++b) {
      m(a, b) = j22(a, b) / (d[a] * d[b]);
    }
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(m);
  lu.setThreshold(1e-12);
  if (!lu.isInvertible()) {
    throw std::domain_error("trailing block is singular");
  }
  const Eigen::MatrixXd b12 = j12 * d.cwiseInverse().asDiagonal();
  return j11 - b12 * lu.solve(b12.transpose());
}

Eigen::MatrixXd schur_keep(const Eigen::MatrixXd& j,
                           const std::vector<int>& keep) {
  const int n = static_cast<int>(j.rows());
  std::vector<int> reduce;
  std::vector<bool> kept(n, false);
  for (int i : keep) kept[i] = true;
  for (int i = 0; i < n; ++i) {
    if (!kept[i]) reduce.push_back(i);
  }
  const int nk = static_cast<int>(keep.size());
  const int nr = static_cast<int>(reduce.size());
  Eigen::MatrixXd perm(nk + nr, nk + nr);
  std::vector<int> order = keep;
  order.insert(order.end(), reduce.begin(), reduce.end());
  for (int r = 0; r < nk + nr; ++r) {
    for (int c = 0; c < nk + nr; ++c) {
      perm(r, c) = j(order[r], order[c]);
    }
  }
  return schur(perm, nk);
}

}  // namespace oracle
}  // namespace leofim
