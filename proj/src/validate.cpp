#include "leofim/validate.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "leofim/oracle.hpp"
#include "leofim/scenario_gen.hpp"

namespace leofim {

double relative_difference(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  const double denom =
      std::max(a.cwiseAbs().maxCoeff(), b.cwiseAbs().maxCoeff());
  if (denom == 0.0) return 0.0;
  return (a - b).cwiseAbs().maxCoeff() / denom;
}

Scenario draw_validation_scenario(SplitMix64& rng, int max_sats, int max_slots,
                                  int max_antennas) {
  GeometryConfig geom;
  geom.array_spacing = rng.uniform(20.0, 200.0);
  geom.rx_speed = rng.uniform(1.0, 30.0);

  SignalSpec spec;
  spec.fc = std::exp(rng.uniform(std::log(5e8), std::log(4e10)));
  spec.alpha1 = rng.uniform(1e4, 5e6);
  spec.alpha2 = rng.uniform(-0.6, 0.6);
  spec.snr = std::pow(10.0, rng.uniform(-20.0, 30.0) / 10.0);
  spec.t2_eff = rng.uniform(1e-4, 400.0);
  spec.gain_mag = rng.uniform(0.5, 2.0);

  const int nb = 1 + static_cast<int>(rng.next() % max_sats);
  const int nk = 1 + static_cast<int>(rng.next() % max_slots);
  const int nu = 1 + static_cast<int>(rng.next() % max_antennas);
  const double delta_t = rng.uniform(0.5, 2.0);

  const OffsetConfig all[4] = {OffsetConfig::none(), OffsetConfig::time(),
                               OffsetConfig::frequency(), OffsetConfig::both()};
  const OffsetConfig off = all[rng.next() % 4];

  return draw_scenario(geom, spec, off, nb, nu, nk, delta_t, rng);
}

namespace {

// Central-difference noise floor for a derivative of observable f: the
// roundoff eps*|f|/h at the eps^(1/3) step is eps^(2/3)*|f|.
double noise_floor(double observable) {
  const double e = std::numeric_limits<double>::epsilon();
  return std::cbrt(e) * std::cbrt(e) * std::abs(observable) * 8.0;
}

}  // namespace

ValidationSummary validate_oracles(int n_scenarios, uint64_t seed,
                                   const ValidationTolerances& tol,
                                   int max_sats, int max_slots,
                                   int max_antennas) {
  const auto t0 = std::chrono::steady_clock::now();
  ValidationSummary sum;
  sum.scenarios = n_scenarios;

  for (int i = 0; i < n_scenarios; ++i) {
    SplitMix64 rng(hash_mix(seed, static_cast<uint64_t>(i) + 17));
    const Scenario sc =
        draw_validation_scenario(rng, max_sats, max_slots, max_antennas);

    // --- analytic vs finite-difference transformation matrix ---
    const Jacobian analytic = build_jacobian(sc.rx, sc.cs);
    const Jacobian numeric = oracle::numeric_jacobian(sc.rx, sc.cs);
    const GeometrySnapshot snap = snapshot(sc.rx, sc.cs);
    ChannelFim layout;
    layout.n_sats = snap.n_sats;
    layout.n_antennas = snap.n_antennas;
    layout.n_slots = snap.n_slots;
    const int m = layout.block_size();

    bool jac_ok = true;
    auto check_column = [&](int col, double observable) {
      const double floor = noise_floor(observable);
      for (int blk = 0; blk < 3; ++blk) {
        const Eigen::Vector3d a = analytic.m.block<3, 1>(3 * blk, col);
        const Eigen::Vector3d n = numeric.m.block<3, 1>(3 * blk, col);
        const double denom = std::max(a.norm(), n.norm());
        if (denom <= floor) continue;  // both numerically zero
        const double rel = (a - n).norm() / denom;
        sum.max_jacobian_rel = std::max(sum.max_jacobian_rel, rel);
        if (rel > tol.jacobian_rel) jac_ok = false;
      }
    };
    for (int b = 0; b < snap.n_sats; ++b) {
      for (int k = 1; k <= snap.n_slots; ++k) {
        for (int u = 0; u < snap.n_antennas; ++u) {
          check_column(b * m + layout.tau_index(u, k),
                       snap.delay[b][k - 1][u]);
        }
        check_column(b * m + layout.nu_index(k), snap.doppler[b][k - 1]);
      }
    }
    if (!jac_ok) ++sum.jacobian_failures;

    // --- closed-form blocks vs congruence product ---
    const ChannelFim cf = assemble_channel_fim(sc.rx, sc.cs, sc.spec);
    const Eigen::MatrixXd j_kappa = oracle::congruence_fim(analytic, cf);
    const LocationFim lf(sc);
    const double block_rel =
        relative_difference(lf.fim(), j_kappa.topLeftCorner(9, 9));
    sum.max_block_rel = std::max(sum.max_block_rel, block_rel);
    if (block_rel > tol.block_rel) ++sum.block_failures;

    // --- offset losses vs brute-force Schur complement ---
    // Keep the location rows, reduce over the gains and any unknown offsets,
    // drop known offsets entirely.
    std::vector<int> sub;
    for (int r = 0; r < 9; ++r) sub.push_back(r);
    for (int b = 0; b < snap.n_sats; ++b) {
      sub.push_back(9 + 3 * b + 0);
      if (!sc.offsets.time_known) sub.push_back(9 + 3 * b + 1);
      if (!sc.offsets.freq_known) sub.push_back(9 + 3 * b + 2);
    }
    Eigen::MatrixXd j_sub(sub.size(), sub.size());
    for (size_t r = 0; r < sub.size(); ++r) {
      for (size_t c = 0; c < sub.size(); ++c) {
        j_sub(r, c) = j_kappa(sub[r], sub[c]);
      }
    }
    const Eigen::MatrixXd efim_num = oracle::schur(j_sub, 9);
    const Eigen::MatrixXd loss_num = j_kappa.topLeftCorner(9, 9) - efim_num;
    const double loss_rel = relative_difference(lf.loss(), loss_num);
    sum.max_loss_rel = std::max(sum.max_loss_rel, loss_rel);
    if (loss_rel > tol.loss_rel) ++sum.loss_failures;

    // --- inverse identity on positive-definite scenarios ---
    if (pd_check(j_sub).pd) {
      ++sum.pd_scenarios;
      const Eigen::MatrixXd inv_full = stable_inverse(j_sub);
      const Eigen::MatrixXd inv_e = stable_inverse(lf.efim_kappa1());
      const double rel =
          relative_difference(inv_e, inv_full.topLeftCorner(9, 9));
      sum.max_identity_rel = std::max(sum.max_identity_rel, rel);
      if (rel > tol.identity_rel) ++sum.identity_failures;
    }
  }

  sum.elapsed_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return sum;
}

std::string ValidationSummary::to_string() const {
  std::ostringstream os;
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "scenarios=%d pd=%d elapsed=%.2fs\n"
                "  jacobian   max_rel=%.3e failures=%d\n"
                "  blocks     max_rel=%.3e failures=%d\n"
                "  losses     max_rel=%.3e failures=%d\n"
                "  inverse-id max_rel=%.3e failures=%d\n",
                scenarios, pd_scenarios, elapsed_s, max_jacobian_rel,
                jacobian_failures, max_block_rel, block_failures, max_loss_rel,
                loss_failures, max_identity_rel, identity_failures);
  os << buf;
  return os.str();
}

}  // namespace leofim
