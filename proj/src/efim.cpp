#include "leofim/efim.hpp"

#include <cmath>

#include "leofim/constants.hpp"

namespace leofim {

namespace {

int block_offset(Block b) {
  switch (b) {
    case Block::Position: return 0;
    case Block::Orientation: return 3;
    case Block::Velocity: return 6;
  }
  return 0;
}

Matrix3 sub3(const Matrix9& j, Block r, Block c) {
  return j.block<3, 3>(block_offset(r), block_offset(c));
}

using Vector9 = Eigen::Matrix<double, 9, 1>;

}  // namespace

const char* block_name(Block b) {
  switch (b) {
    case Block::Position: return "position";
    case Block::Orientation: return "orientation";
    case Block::Velocity: return "velocity";
  }
  return "?";
}

PdResult pd_check(const Eigen::MatrixXd& j) {
  const Eigen::MatrixXd sym = 0.5 * (j + j.transpose());
  const int n = static_cast<int>(sym.rows());
  Eigen::VectorXd d(n);
  for (int i = 0; i < n; ++i) {
    const double v = std::abs(sym(i, i));
    d[i] = (std::isfinite(v) && v > 0.0) ? std::sqrt(v) : 1.0;
  }
  Eigen::MatrixXd m = sym;
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      m(r, c) /= d[r] * d[c];
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  PdResult out;
  out.min_eig = es.eigenvalues().minCoeff();
  out.max_eig = es.eigenvalues().maxCoeff();
  out.pd = std::isfinite(out.min_eig) &&
           out.min_eig > 1e-9 * std::max(out.max_eig, 1.0);
  return out;
}

Eigen::MatrixXd stable_inverse(const Eigen::MatrixXd& j) {
  const Eigen::MatrixXd sym = 0.5 * (j + j.transpose());
  const int n = static_cast<int>(sym.rows());
  Eigen::VectorXd d(n);
  for (int i = 0; i < n; ++i) {
    const double v = std::abs(sym(i, i));
    d[i] = (std::isfinite(v) && v > 0.0) ? std::sqrt(v) : 1.0;
  }
  Eigen::MatrixXd m = sym;
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      m(r, c) /= d[r] * d[c];
    }
  }
  const Eigen::MatrixXd minv =
      m.ldlt().solve(Eigen::MatrixXd::Identity(n, n));
  Eigen::MatrixXd inv = minv;
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      inv(r, c) /= d[r] * d[c];
    }
  }
  return inv;
}

std::string FeasibilityTrace::failing_tag() const {
  for (const auto& c : conditions) {
    if (!c.ok) return c.name;
  }
  return {};
}

LocationFim::LocationFim(const Scenario& sc) {
  const GeometrySnapshot s = snapshot(sc.rx, sc.cs);
  const SignalSpec& spec = sc.spec;
  delta_t_ = sc.cs.delta_t;
  delay_pp_.assign(s.n_sats, std::vector<Matrix3>(s.n_slots, Matrix3::Zero()));

  Matrix3 f_pp = Matrix3::Zero(), f_pphi = Matrix3::Zero(),
          f_pv = Matrix3::Zero(), f_phiphi = Matrix3::Zero(),
          f_phiv = Matrix3::Zero(), f_vv = Matrix3::Zero();

  for (int b = 0; b < s.n_sats; ++b) {
    // Per-satellite marginalization pieces for the two offset channels.
    Vector9 a_delta = Vector9::Zero();
    Vector9 a_eps = Vector9::Zero();
    double s_delta = 0.0;
    double s_eps = 0.0;

    for (int k = 1; k <= s.n_slots; ++k) {
      const double q = (k - 1) * delta_t_;
      const double f_ob = observed_frequency(spec, s.doppler[b][k - 1], 0.0);
      const double w = fim_tau_tau(spec, spec.snr, f_ob);

      Matrix3 d_pp = Matrix3::Zero();
      Matrix3 d_pphi = Matrix3::Zero();
      Matrix3 d_phiphi = Matrix3::Zero();
      Vector3 sum_dp = Vector3::Zero();
      Vector3 sum_dphi = Vector3::Zero();
      for (int u = 0; u < s.n_antennas; ++u) {
        const Vector3 dp = dtau_dp(s, b, u, k);
        const Vector3 dphi = dtau_dphi(s, sc.rx, b, u, k);
        d_pp += w * dp * dp.transpose();
        d_pphi += w * dp * dphi.transpose();
        d_phiphi += w * dphi * dphi.transpose();
        sum_dp += w * dp;
        sum_dphi += w * dphi;
        s_delta += w;
      }
      delay_pp_[b][k - 1] = d_pp;

      const double fnn = s.n_antennas * fim_nu_nu(spec, spec.snr);
      const double fne = s.n_antennas * fim_nu_eps(spec, spec.snr);
      s_eps += s.n_antennas * fim_eps_eps(spec, spec.snr);
      const Vector3 np = dnu_dp(s, sc.cs, sc.rx, b, k);
      const Vector3 nv = dnu_dv(s, sc.cs, sc.rx, b, k);

      f_pp += d_pp + fnn * np * np.transpose();
      f_pphi += d_pphi;
      f_pv += q * d_pp + fnn * np * nv.transpose();
      f_phiphi += d_phiphi;
      f_phiv += q * d_pphi.transpose();
      f_vv += (q * q) * d_pp + fnn * nv * nv.transpose();

      // F(tau, delta) = -w per measurement; F(nu, eps) = fne per slot.
      a_delta.segment<3>(0) += -sum_dp;
      a_delta.segment<3>(3) += -sum_dphi;
      a_delta.segment<3>(6) += -q * sum_dp;
      a_eps.segment<3>(0) += fne * np;
      a_eps.segment<3>(6) += fne * nv;
    }

    if (!sc.offsets.time_known) {
      if (s_delta <= 0.0) {
        throw SingularNuisanceError(
            "time offset flagged unknown but delay information is zero");
      }
      loss_ += (a_delta * a_delta.transpose()) / s_delta;
    }
    if (!sc.offsets.freq_known) {
      if (s_eps <= 0.0) {
        throw SingularNuisanceError(
            "frequency offset flagged unknown but its information is zero");
      }
      loss_ += (a_eps * a_eps.transpose()) / s_eps;
    }
  }

  fim_.block<3, 3>(0, 0) = f_pp;
  fim_.block<3, 3>(0, 3) = f_pphi;
  fim_.block<3, 3>(0, 6) = f_pv;
  fim_.block<3, 3>(3, 3) = f_phiphi;
  fim_.block<3, 3>(3, 6) = f_phiv;
  fim_.block<3, 3>(6, 6) = f_vv;
  fim_.block<3, 3>(3, 0) = f_pphi.transpose();
  fim_.block<3, 3>(6, 0) = f_pv.transpose();
  fim_.block<3, 3>(6, 3) = f_phiv.transpose();
}

Matrix3 LocationFim::delay_term_pp(int b, int k) const {
  return delay_pp_[b][k - 1];
}

Matrix3 LocationFim::delay_term_vv(int b, int k) const {
  const double q = (k - 1) * delta_t_;
  return (q * q) * delay_pp_[b][k - 1];
}

EfimResult efim_3d(Block which, const Scenario& sc) {
  const LocationFim lf(sc);
  EfimResult out;
  out.efim = sub3(lf.efim_kappa1(), which, which);
  const PdResult pd = pd_check(out.efim);
  out.trace.conditions.push_back({std::string("efim_") + block_name(which) +
                                      "_pd",
                                  pd.pd, pd.min_eig, pd.max_eig});
  out.feasible = pd.pd;
  out.trace.feasible = pd.pd;
  return out;
}

Efim6Result efim_6d(Block first, Block second, const Scenario& sc) {
  const LocationFim lf(sc);
  const Matrix9 je = lf.efim_kappa1();
  const Matrix3 a = sub3(je, first, first);
  const Matrix3 b = sub3(je, second, second);
  const Matrix3 c = sub3(je, first, second);

  Efim6Result out;
  out.joint.block<3, 3>(0, 0) = a;
  out.joint.block<3, 3>(0, 3) = c;
  out.joint.block<3, 3>(3, 0) = c.transpose();
  out.joint.block<3, 3>(3, 3) = b;

  const PdResult pa = pd_check(a);
  const PdResult pb = pd_check(b);
  out.trace.conditions.push_back({std::string("efim_") + block_name(first) +
                                      "_pd",
                                  pa.pd, pa.min_eig, pa.max_eig});
  out.trace.conditions.push_back({std::string("efim_") + block_name(second) +
                                      "_pd",
                                  pb.pd, pb.min_eig, pb.max_eig});

  bool first_pd = false;
  bool second_pd = false;
  if (pb.pd) {
    out.first = a - c * stable_inverse(b) * c.transpose();
    out.first_valid = true;
    const PdResult p = pd_check(out.first);
    first_pd = p.pd;
    out.trace.conditions.push_back({std::string("efim2_") +
                                        block_name(first) + "_pd",
                                    p.pd, p.min_eig, p.max_eig});
  } else {
    out.trace.conditions.push_back({std::string("inner_") +
                                        block_name(second) +
                                        "_efim_singular",
                                    false, pb.min_eig, pb.max_eig});
  }
  if (pa.pd) {
    out.second = b - c.transpose() * stable_inverse(a) * c;
    out.second_valid = true;
    const PdResult p = pd_check(out.second);
    second_pd = p.pd;
    out.trace.conditions.push_back({std::string("efim2_") +
                                        block_name(second) + "_pd",
                                    p.pd, p.min_eig, p.max_eig});
  } else {
    out.trace.conditions.push_back({std::string("inner_") +
                                        block_name(first) + "_efim_singular",
                                    false, pa.min_eig, pa.max_eig});
  }

  out.feasible = pa.pd && pb.pd && (first_pd || second_pd);
  out.trace.feasible = out.feasible;
  return out;
}

EfimResult efim_9d(Block which, const Scenario& sc) {
  const LocationFim lf(sc);
  const Matrix9 je = lf.efim_kappa1();
  const Matrix3 p = sub3(je, Block::Position, Block::Position);
  const Matrix3 o = sub3(je, Block::Orientation, Block::Orientation);
  const Matrix3 v = sub3(je, Block::Velocity, Block::Velocity);
  const Matrix3 x = sub3(je, Block::Position, Block::Orientation);   // p-phi
  const Matrix3 y = sub3(je, Block::Position, Block::Velocity);      // p-v
  const Matrix3 z = sub3(je, Block::Orientation, Block::Velocity);   // phi-v

  EfimResult out;
  Matrix3 base;      // the block whose inverse seeds the reduction
  std::string base_name;
  if (which == Block::Position) {
    base = o;
    base_name = "efim_orientation_pd";
  } else {
    base = p;
    base_name = "efim_position_pd";
  }
  const PdResult pbase = pd_check(base);
  out.trace.conditions.push_back(
      {base_name, pbase.pd, pbase.min_eig, pbase.max_eig});
  if (!pbase.pd) {
    out.trace.feasible = false;
    return out;
  }
  const Matrix3 base_inv = stable_inverse(base);

  Matrix3 schur;
  if (which == Block::Position) {
    schur = v - z.transpose() * base_inv * z;
  } else if (which == Block::Velocity) {
    schur = o - x.transpose() * base_inv * x;
  } else {
    schur = v - y.transpose() * base_inv * y;
  }
  const PdResult ps = pd_check(schur);
  out.trace.conditions.push_back(
      {"schur_s_pd", ps.pd, ps.min_eig, ps.max_eig});
  if (!ps.pd) {
    out.trace.feasible = false;
    return out;
  }
  const Matrix3 s_inv = stable_inverse(schur);

  Matrix3 nuisance;
  if (which == Block::Position) {
    nuisance = x * base_inv * x.transpose() +
               x * base_inv * z * s_inv * z.transpose() * base_inv *
                   x.transpose() -
               y * s_inv * z.transpose() * base_inv * x.transpose() -
               x * base_inv * z * s_inv * y.transpose() +
               y * s_inv * y.transpose();
    out.efim = p - nuisance;
  } else if (which == Block::Velocity) {
    nuisance = y.transpose() * base_inv * y +
               y.transpose() * base_inv * x * s_inv * x.transpose() *
                   base_inv * y -
               z.transpose() * s_inv * x.transpose() * base_inv * y -
               y.transpose() * base_inv * x * s_inv * z +
               z.transpose() * s_inv * z;
    out.efim = v - nuisance;
  } else {
    nuisance = x.transpose() * base_inv * x +
               x.transpose() * base_inv * y * s_inv * y.transpose() *
                   base_inv * x -
               z * s_inv * y.transpose() * base_inv * x -
               x.transpose() * base_inv * y * s_inv * z.transpose() +
               z * s_inv * z.transpose();
    out.efim = o - nuisance;
  }

  const PdResult pe = pd_check(out.efim);
  out.trace.conditions.push_back({std::string("efim3_") + block_name(which) +
                                      "_pd",
                                  pe.pd, pe.min_eig, pe.max_eig});
  out.feasible = pe.pd;
  out.trace.feasible = pe.pd;
  return out;
}

double crlb_rms(const Matrix3& efim) {
  return std::sqrt(stable_inverse(efim).trace());
}

}  // namespace leofim
