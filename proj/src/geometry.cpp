#include "leofim/geometry.hpp"

#include <cmath>
#include <stdexcept>

namespace leofim {

namespace {

Matrix3 rot_z(double a) {
  Matrix3 m;
  m << std::cos(a), -std::sin(a), 0.0,
       std::sin(a),  std::cos(a), 0.0,
       0.0,          0.0,         1.0;
  return m;
}

Matrix3 rot_y(double a) {
  Matrix3 m;
  m <<  std::cos(a), 0.0, std::sin(a),
        0.0,         1.0, 0.0,
       -std::sin(a), 0.0, std::cos(a);
  return m;
}

Matrix3 rot_x(double a) {
  Matrix3 m;
  m << 1.0, 0.0,          0.0,
       0.0, std::cos(a), -std::sin(a),
       0.0, std::sin(a),  std::cos(a);
  return m;
}

Matrix3 drot_z(double a) {
  Matrix3 m;
  m << -std::sin(a), -std::cos(a), 0.0,
        std::cos(a), -std::sin(a), 0.0,
        0.0,          0.0,         0.0;
  return m;
}

Matrix3 drot_y(double a) {
  Matrix3 m;
  m << -std::sin(a), 0.0,  std::cos(a),
        0.0,         0.0,  0.0,
       -std::cos(a), 0.0, -std::sin(a);
  return m;
}

Matrix3 drot_x(double a) {
  Matrix3 m;
  m << 0.0,  0.0,          0.0,
       0.0, -std::sin(a), -std::cos(a),
       0.0,  std::cos(a), -std::sin(a);
  return m;
}

}  // namespace

Matrix3 rotation_matrix(const Vector3& phi_u) {
  return rot_z(phi_u[0]) * rot_y(phi_u[1]) * rot_x(phi_u[2]);
}

std::array<Matrix3, 3> rotation_matrix_derivatives(const Vector3& phi_u) {
  const Matrix3 rz = rot_z(phi_u[0]);
  const Matrix3 ry = rot_y(phi_u[1]);
  const Matrix3 rx = rot_x(phi_u[2]);
  return {drot_z(phi_u[0]) * ry * rx,
          rz * drot_y(phi_u[1]) * rx,
          rz * ry * drot_x(phi_u[2])};
}

Vector3 centroid_position(const ReceiverState& rx, double delta_t, int slot) {
  return rx.p_u + (slot - 1) * delta_t * rx.v_u;
}

Vector3 antenna_position(const ReceiverState& rx, double delta_t, int antenna,
                         int slot) {
  if (antenna < 0 || antenna >= rx.n_antennas()) {
    throw std::out_of_range("antenna index out of range");
  }
  return centroid_position(rx, delta_t, slot) +
         rotation_matrix(rx.phi_u) * rx.antenna_offsets[antenna];
}

namespace {

// Rotation of the slot-1 state about the Earth center at constant angular
// rate |v| / |p|. Falls back to the straight line when the geometry leaves
// the rate undefined.
Eigen::AngleAxisd arc_rotation(const ConstellationState& cs, int sat,
                               int slot) {
  const Vector3& p = cs.sat_positions[sat];
  const Vector3& v = cs.sat_velocities[sat];
  const Vector3 axis = p.cross(v);
  const double pn = p.norm();
  if (axis.norm() <= 1e-9 * pn * v.norm() || pn == 0.0) {
    return Eigen::AngleAxisd(0.0, Vector3::UnitZ());
  }
  const double theta = v.norm() / pn * (slot - 1) * cs.delta_t;
  return Eigen::AngleAxisd(theta, axis.normalized());
}

void check_sat_slot(const ConstellationState& cs, int sat, int slot) {
  if (sat < 0 || sat >= cs.n_sats()) {
    throw std::out_of_range("satellite index out of range");
  }
  if (slot < 1 || slot > cs.n_slots) {
    throw std::out_of_range("slot index out of range");
  }
}

}  // namespace

Vector3 satellite_position(const ConstellationState& cs, int sat, int slot) {
  check_sat_slot(cs, sat, slot);
  if (cs.propagation == Propagation::Arc) {
    const Eigen::AngleAxisd rot = arc_rotation(cs, sat, slot);
    if (rot.angle() != 0.0) {
      return rot * cs.sat_positions[sat];
    }
  }
  return cs.sat_positions[sat] + (slot - 1) * cs.delta_t * cs.sat_velocities[sat];
}

Vector3 satellite_velocity(const ConstellationState& cs, int sat, int slot) {
  check_sat_slot(cs, sat, slot);
  if (cs.propagation == Propagation::Arc) {
    const Eigen::AngleAxisd rot = arc_rotation(cs, sat, slot);
    if (rot.angle() != 0.0) {
      return rot * cs.sat_velocities[sat];
    }
  }
  return cs.sat_velocities[sat];
}

GeometrySnapshot snapshot(const ReceiverState& rx,
                          const ConstellationState& cs) {
  const int nb = cs.n_sats();
  const int nu = rx.n_antennas();
  const int nk = cs.n_slots;
  if (nb < 1 || nu < 1 || nk < 1) {
    throw std::invalid_argument("snapshot requires at least one satellite, antenna and slot");
  }

  GeometrySnapshot s;
  s.n_sats = nb;
  s.n_antennas = nu;
  s.n_slots = nk;
  s.range.assign(nb, std::vector<std::vector<double>>(nk, std::vector<double>(nu)));
  s.dir.assign(nb, std::vector<std::vector<Vector3>>(nk, std::vector<Vector3>(nu)));
  s.delay.assign(nb, std::vector<std::vector<double>>(nk, std::vector<double>(nu)));
  s.range_centroid.assign(nb, std::vector<double>(nk));
  s.dir_centroid.assign(nb, std::vector<Vector3>(nk));
  s.doppler.assign(nb, std::vector<double>(nk));

  const Matrix3 q = rotation_matrix(rx.phi_u);
  for (int b = 0; b < nb; ++b) {
    for (int k = 1; k <= nk; ++k) {
      const Vector3 p_b = satellite_position(cs, b, k);
      const Vector3 p_c = centroid_position(rx, cs.delta_t, k);
      const double d_c = (p_c - p_b).norm();
      if (d_c <= 0.0) {
        throw std::domain_error("degenerate geometry: satellite coincides with centroid");
      }
      s.range_centroid[b][k - 1] = d_c;
      s.dir_centroid[b][k - 1] = (p_c - p_b) / d_c;
      s.doppler[b][k - 1] = s.dir_centroid[b][k - 1].dot(
                                satellite_velocity(cs, b, k) - rx.v_u) /
                            kSpeedOfLight;
      for (int u = 0; u < nu; ++u) {
        const Vector3 p_a = p_c + q * rx.antenna_offsets[u];
        const double d = (p_a - p_b).norm();
        if (d <= 0.0) {
          throw std::domain_error("degenerate geometry: satellite coincides with antenna");
        }
        s.range[b][k - 1][u] = d;
        s.dir[b][k - 1][u] = (p_a - p_b) / d;
        s.delay[b][k - 1][u] = d / kSpeedOfLight;
      }
    }
  }
  return s;
}

}  // namespace leofim
