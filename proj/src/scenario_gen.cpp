#include "leofim/scenario_gen.hpp"

#include <cmath>

#include "leofim/constants.hpp"

namespace leofim {

std::vector<Vector3> square_array(int n_antennas, double spacing) {
  std::vector<Vector3> out;
  out.reserve(n_antennas);
  const int side = static_cast<int>(std::ceil(std::sqrt(double(n_antennas))));
  const double mid = 0.5 * (side - 1);
  for (int i = 0; i < n_antennas; ++i) {
    const int r = i / side;
    const int c = i % side;
    out.emplace_back((r - mid) * spacing, (c - mid) * spacing, 0.0);
  }
  return out;
}

std::vector<Vector3> nested_array(int n_antennas, double spacing) {
  std::vector<Vector3> out;
  out.reserve(n_antennas);
  // Shell s contributes the grid points with max(r, c) == s.
  for (int s = 0; static_cast<int>(out.size()) < n_antennas; ++s) {
    for (int c = 0; c <= s && static_cast<int>(out.size()) < n_antennas; ++c) {
      out.emplace_back(s * spacing, c * spacing, 0.0);
    }
    for (int r = 0; r < s && static_cast<int>(out.size()) < n_antennas; ++r) {
      out.emplace_back(r * spacing, s * spacing, 0.0);
    }
  }
  return out;
}

Vector3 shell_position(double altitude, double zenith_rad, double azimuth_rad) {
  const double cz = std::cos(zenith_rad);
  const double slant =
      -kEarthRadius * cz +
      std::sqrt(kEarthRadius * kEarthRadius * cz * cz +
                altitude * altitude + 2.0 * kEarthRadius * altitude);
  return slant * Vector3(std::sin(zenith_rad) * std::cos(azimuth_rad),
                         std::sin(zenith_rad) * std::sin(azimuth_rad), cz);
}

Scenario draw_scenario(const GeometryConfig& geom, const SignalSpec& spec,
                       const OffsetConfig& offsets_cfg, int n_sats,
                       int n_antennas, int n_slots, double delta_t,
                       SplitMix64& rng) {
  Scenario sc;
  sc.spec = spec;
  sc.offsets = offsets_cfg;
  sc.cs.n_slots = n_slots;
  sc.cs.delta_t = delta_t;
  sc.cs.propagation = geom.propagation;

  // Receiver at a random point on the Earth sphere, in Earth-centered
  // coordinates; the cone is drawn in the local up/east/north frame.
  const Vector3 up = rng.unit_vector();
  const Vector3 p_rx = kEarthRadius * up;
  Vector3 east = up.cross(std::abs(up.z()) < 0.9 ? Vector3(0, 0, 1)
                                                 : Vector3(1, 0, 0));
  east.normalize();
  const Vector3 north = up.cross(east);

  const double max_z = geom.max_zenith_deg * kPi / 180.0;
  for (int b = 0; b < n_sats; ++b) {
    // Uniform over the spherical cap.
    const double cz = rng.uniform(std::cos(max_z), 1.0);
    const double zenith = std::acos(cz);
    const double az = rng.uniform(0.0, 2.0 * kPi);
    const Vector3 local = shell_position(geom.altitude, zenith, az);
    const Vector3 pos =
        p_rx + local.x() * east + local.y() * north + local.z() * up;
    const Vector3 radial = pos.normalized();
    Vector3 tangent;
    do {
      const Vector3 r = rng.unit_vector();
      tangent = r - r.dot(radial) * radial;
    } while (tangent.norm() < 1e-6);
    tangent.normalize();
    sc.cs.sat_positions.push_back(pos);
    sc.cs.sat_velocities.push_back(geom.sat_speed * tangent);
  }

  sc.rx.p_u = p_rx;
  sc.rx.v_u = geom.rx_speed * rng.unit_vector();
  sc.rx.phi_u = Vector3(rng.uniform(-kPi, kPi), rng.uniform(-1.2, 1.2),
                        rng.uniform(-kPi, kPi));
  const double spacing = geom.array_spacing > 0.0
                             ? geom.array_spacing
                             : 0.5 * kSpeedOfLight / spec.fc;
  sc.rx.antenna_offsets = square_array(n_antennas, spacing);
  return sc;
}

}  // namespace leofim
