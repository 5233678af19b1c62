#include <doctest.h>

#include "leofim/constants.hpp"
#include "leofim/efim.hpp"
#include "leofim/oracle.hpp"
#include "leofim/rng.hpp"
#include "leofim/scenario_gen.hpp"
#include "leofim/validate.hpp"

using namespace leofim;

namespace {

Scenario random_scenario(uint64_t seed, int nb, int nu, int nk,
                         OffsetConfig off, double spacing = 60.0,
                         double t2 = 25.0, double delta_t = 0.5) {
  SplitMix64 rng(seed);
  GeometryConfig geom;
  geom.array_spacing = spacing;
  SignalSpec spec;
  spec.fc = 1e9;
  spec.alpha1 = 1e6;
  spec.snr = 3.0;
  spec.t2_eff = t2;
  return draw_scenario(geom, spec, off, nb, nu, nk, delta_t, rng);
}

}  // namespace

TEST_CASE("position block with zero relative velocity is delay-only") {
  Scenario sc = random_scenario(21, 2, 2, 2, OffsetConfig::none());
  for (auto& v : sc.cs.sat_velocities) v = sc.rx.v_u;
  const GeometrySnapshot s = snapshot(sc.rx, sc.cs);
  const LocationFim lf(sc);

  Matrix3 expect = Matrix3::Zero();
  for (int b = 0; b < s.n_sats; ++b) {
    for (int k = 1; k <= s.n_slots; ++k) {
      const double f_ob = observed_frequency(sc.spec, s.doppler[b][k - 1], 0.0);
      const double w = sc.spec.snr * omega(sc.spec, f_ob);
      for (int u = 0; u < s.n_antennas; ++u) {
        const Vector3 d = s.dir[b][k - 1][u] / kSpeedOfLight;
        expect += w * d * d.transpose();
      }
    }
  }
  CHECK(relative_difference(lf.fim_pp(), expect) < 1e-14);
}

TEST_CASE("one satellite, one antenna, one slot never pins 3d position") {
  const Scenario sc = random_scenario(22, 1, 1, 1, OffsetConfig::none());
  const LocationFim lf(sc);
  CHECK_FALSE(pd_check(lf.fim_pp()).pd);
}

TEST_CASE("orientation blocks vanish for centroid-only arrays") {
  Scenario sc = random_scenario(23, 2, 3, 2, OffsetConfig::none());
  for (auto& off : sc.rx.antenna_offsets) off = Vector3::Zero();
  const LocationFim lf(sc);
  CHECK(lf.fim_pphi().cwiseAbs().maxCoeff() == 0.0);
  CHECK(lf.fim_phiphi().cwiseAbs().maxCoeff() == 0.0);
  CHECK(lf.fim_phiv().cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("single-slot delay terms carry no velocity information") {
  Scenario sc = random_scenario(24, 2, 2, 1, OffsetConfig::none());
  sc.spec.t2_eff = 0.0;
  sc.spec.slot_duration = 0.0;  // removes the radial-rate terms entirely
  const LocationFim lf(sc);
  CHECK(lf.fim_pv().cwiseAbs().maxCoeff() == 0.0);
  CHECK(lf.fim_vv().cwiseAbs().maxCoeff() == 0.0);
  CHECK(lf.fim_pp().cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("slot velocity delay term is the scaled position delay term") {
  const Scenario sc = random_scenario(25, 2, 3, 3, OffsetConfig::none());
  const LocationFim lf(sc);
  for (int b = 0; b < 2; ++b) {
    for (int k = 1; k <= 3; ++k) {
      const double q = (k - 1) * sc.cs.delta_t;
      const Matrix3 pp = lf.delay_term_pp(b, k);
      const Matrix3 vv = lf.delay_term_vv(b, k);
      CHECK((vv - (q * q) * pp).cwiseAbs().maxCoeff() == 0.0);
    }
  }
}

TEST_CASE("blocks match the congruence product") {
  for (uint64_t seed : {31, 32, 33}) {
    const Scenario sc = random_scenario(seed, 3, 4, 3, OffsetConfig::none());
    const LocationFim lf(sc);
    const Jacobian jac = build_jacobian(sc.rx, sc.cs);
    const ChannelFim cf = assemble_channel_fim(sc.rx, sc.cs, sc.spec);
    const Eigen::MatrixXd j = oracle::congruence_fim(jac, cf);
    CHECK(relative_difference(lf.fim(), j.topLeftCorner(9, 9)) < 1e-8);
  }
}

TEST_CASE("losses") {
  SUBCASE("known offsets lose nothing") {
    const Scenario sc = random_scenario(41, 2, 2, 2, OffsetConfig::none());
    const LocationFim lf(sc);
    CHECK(lf.loss().cwiseAbs().maxCoeff() == 0.0);
    CHECK((lf.efim_kappa1() - lf.fim()).cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("one delay measurement is fully spent on an unknown time offset") {
    Scenario sc = random_scenario(42, 1, 1, 1, OffsetConfig::time());
    sc.spec.t2_eff = 0.0;
    sc.spec.slot_duration = 0.0;
    const LocationFim lf(sc);
    const Matrix9 e = lf.efim_kappa1();
    CHECK(e.cwiseAbs().maxCoeff() <=
          1e-12 * lf.fim().cwiseAbs().maxCoeff());
  }
  SUBCASE("losses match the brute-force reduction") {
    for (uint64_t seed : {43, 44}) {
      for (OffsetConfig off : {OffsetConfig::time(), OffsetConfig::frequency(),
                               OffsetConfig::both()}) {
        const Scenario sc = random_scenario(seed, 3, 2, 3, off);
        const LocationFim lf(sc);
        const Jacobian jac = build_jacobian(sc.rx, sc.cs);
        const ChannelFim cf = assemble_channel_fim(sc.rx, sc.cs, sc.spec);
        const Eigen::MatrixXd j = oracle::congruence_fim(jac, cf);

        std::vector<int> sub;
        for (int r = 0; r < 9; ++r) sub.push_back(r);
        for (int b = 0; b < 3; ++b) {
          sub.push_back(9 + 3 * b);
          if (!off.time_known) sub.push_back(9 + 3 * b + 1);
          if (!off.freq_known) sub.push_back(9 + 3 * b + 2);
        }
        Eigen::MatrixXd jsub(sub.size(), sub.size());
        for (size_t r = 0; r < sub.size(); ++r) {
          for (size_t c = 0; c < sub.size(); ++c) {
            jsub(r, c) = j(sub[r], sub[c]);
          }
        }
        const Eigen::MatrixXd loss_num =
            j.topLeftCorner(9, 9) - oracle::schur(jsub, 9);
        CHECK(relative_difference(lf.loss(), loss_num) < 1e-8);
      }
    }
  }
  SUBCASE("information never grows when offsets become unknown") {
    const Scenario sc = random_scenario(45, 2, 4, 2, OffsetConfig::both());
    const LocationFim lf(sc);
    Eigen::SelfAdjointEigenSolver<Matrix9> es(lf.loss());
    CHECK(es.eigenvalues().minCoeff() >=
          -1e-9 * std::max(1.0, es.eigenvalues().maxCoeff()));
  }
  SUBCASE("zero-information nuisance raises the dedicated error") {
    Scenario sc = random_scenario(46, 1, 1, 1, OffsetConfig::frequency());
    sc.spec.t2_eff = 0.0;
    sc.spec.slot_duration = 0.0;
    CHECK_THROWS_AS(LocationFim{sc}, SingularNuisanceError);
  }
}

TEST_CASE("positive definiteness check") {
  Matrix3 j = Matrix3::Zero();
  CHECK_FALSE(pd_check(j).pd);
  j.diagonal() << 1.0, 2.0, 3.0;
  CHECK(pd_check(j).pd);
  // Badly scaled but well conditioned after equilibration.
  j.diagonal() << 1e-20, 1.0, 1e20;
  CHECK(pd_check(j).pd);
  // Rank two.
  Matrix3 r2 = Vector3(1, 2, 3) * Vector3(1, 2, 3).transpose() +
               Vector3(0, 1, 1) * Vector3(0, 1, 1).transpose();
  CHECK_FALSE(pd_check(r2).pd);
}

TEST_CASE("three-dimensional reductions") {
  SUBCASE("position from one satellite needs the full array geometry") {
    const Scenario sc =
        random_scenario(51, 1, 8, 1, OffsetConfig::none(), 100.0);
    const EfimResult r = efim_3d(Block::Position, sc);
    CHECK(r.feasible);
  }
  SUBCASE("velocity from radial rates alone, time offset present") {
    const Scenario sc = random_scenario(52, 3, 1, 1, OffsetConfig::time());
    const EfimResult r = efim_3d(Block::Velocity, sc);
    CHECK(r.feasible);
  }
  SUBCASE("orientation is invisible to a centroid-only array") {
    Scenario sc = random_scenario(53, 3, 1, 2, OffsetConfig::none());
    const EfimResult r = efim_3d(Block::Orientation, sc);
    CHECK_FALSE(r.feasible);
    CHECK(r.efim.cwiseAbs().maxCoeff() == 0.0);
    CHECK(r.trace.failing_tag() == "efim_orientation_pd");
  }
}

TEST_CASE("six-dimensional reductions") {
  SUBCASE("orientation alone is estimable under every offset configuration") {
    for (OffsetConfig off : {OffsetConfig::none(), OffsetConfig::time(),
                             OffsetConfig::frequency(), OffsetConfig::both()}) {
      const Scenario sc = random_scenario(61, 2, 4, 1, off, 80.0);
      CHECK(efim_3d(Block::Orientation, sc).feasible);
    }
  }
  SUBCASE("position and orientation jointly, two satellites and an array") {
    for (OffsetConfig off : {OffsetConfig::none(), OffsetConfig::time()}) {
      const Scenario sc = random_scenario(61, 2, 4, 1, off, 80.0);
      const Efim6Result r = efim_6d(Block::Position, Block::Orientation, sc);
      CHECK(r.feasible);
      CHECK(r.first_valid);
      CHECK(r.second_valid);
    }
  }
  SUBCASE("position and velocity jointly from two satellites, both offsets") {
    SplitMix64 rng(100);
    GeometryConfig geom;
    geom.array_spacing = 60.0;
    geom.propagation = Propagation::Arc;
    SignalSpec spec;
    spec.fc = 1e9;
    spec.alpha1 = 1e6;
    spec.snr = 3.0;
    spec.t2_eff = 25.0;
    const Scenario sc = draw_scenario(geom, spec, OffsetConfig::both(), 2, 1,
                                      3, 5.0, rng);
    const Efim6Result r = efim_6d(Block::Position, Block::Velocity, sc);
    CHECK(r.feasible);
  }
  SUBCASE("three radial rates cannot pin six unknowns") {
    Scenario sc = random_scenario(63, 3, 1, 1, OffsetConfig::time());
    const Efim6Result r = efim_6d(Block::Position, Block::Velocity, sc);
    CHECK_FALSE(r.feasible);
  }
  SUBCASE("a single straight track never leaves its plane") {
    const Scenario sc =
        random_scenario(62, 1, 1, 4, OffsetConfig::none(), 60.0, 25.0, 2.0);
    const LocationFim lf(sc);
    const Vector3 r0 = sc.cs.sat_positions[0] - sc.rx.p_u;
    const Vector3 w = sc.cs.sat_velocities[0] - sc.rx.v_u;
    const Vector3 n = r0.cross(w).normalized();
    CHECK(std::abs(n.dot(lf.fim_pp() * n)) <=
          1e-12 * lf.fim_pp().cwiseAbs().maxCoeff());
    CHECK_FALSE(pd_check(lf.fim_pp()).pd);
  }
  SUBCASE("joint block mirrors the marginals") {
    const Scenario sc = random_scenario(64, 3, 4, 2, OffsetConfig::none());
    const Efim6Result r = efim_6d(Block::Position, Block::Velocity, sc);
    const LocationFim lf(sc);
    const Matrix9 e = lf.efim_kappa1();
    CHECK(relative_difference(r.joint.block<3, 3>(0, 0),
                              e.block<3, 3>(0, 0)) == 0.0);
    CHECK(relative_difference(r.joint.block<3, 3>(0, 3),
                              e.block<3, 3>(0, 6)) == 0.0);
    CHECK(relative_difference(r.joint.block<3, 3>(3, 3),
                              e.block<3, 3>(6, 6)) == 0.0);
  }
}

TEST_CASE("nine-dimensional reductions") {
  SUBCASE("full setup stays estimable with both offsets unknown") {
    const Scenario sc =
        random_scenario(71, 3, 4, 3, OffsetConfig::both(), 80.0);
    for (Block which :
         {Block::Position, Block::Orientation, Block::Velocity}) {
      const EfimResult r = efim_9d(which, sc);
      CHECK(r.feasible);
    }
  }
  SUBCASE("expanded reduction equals the direct sub-block inverse") {
    for (uint64_t seed : {72, 73, 74}) {
      const Scenario sc =
          random_scenario(seed, 3, 4, 3, OffsetConfig::both(), 80.0);
      const LocationFim lf(sc);
      const Matrix9 e = lf.efim_kappa1();
      REQUIRE(pd_check(e).pd);
      const Eigen::MatrixXd inv = stable_inverse(e);

      const EfimResult p = efim_9d(Block::Position, sc);
      CHECK(relative_difference(
                stable_inverse(p.efim),
                inv.topLeftCorner(3, 3)) < 1e-6);
      const EfimResult o = efim_9d(Block::Orientation, sc);
      CHECK(relative_difference(stable_inverse(o.efim),
                                inv.block(3, 3, 3, 3)) < 1e-6);
      const EfimResult v = efim_9d(Block::Velocity, sc);
      CHECK(relative_difference(stable_inverse(v.efim),
                                inv.block(6, 6, 3, 3)) < 1e-6);
    }
  }
  SUBCASE("singular inner blocks surface as structured infeasibility") {
    Scenario sc = random_scenario(75, 3, 1, 3, OffsetConfig::none());
    // No array: orientation block is zero, so the position reduction cannot
    // even start.
    const EfimResult r = efim_9d(Block::Position, sc);
    CHECK_FALSE(r.feasible);
    CHECK(r.trace.failing_tag() == "efim_orientation_pd");
  }
}

TEST_CASE("adding hardware never hurts") {
  // Nested geometries: prefix satellites / slots / antennas of one draw.
  SplitMix64 rng(81);
  GeometryConfig geom;
  geom.array_spacing = 70.0;
  SignalSpec spec;
  spec.fc = 1e9;
  spec.alpha1 = 1e6;
  spec.snr = 2.0;
  spec.t2_eff = 25.0;
  const Scenario big = [&] {
    Scenario sc = draw_scenario(geom, spec, OffsetConfig::time(), 3, 9, 3,
                                0.5, rng);
    sc.rx.antenna_offsets = nested_array(9, 70.0);
    return sc;
  }();

  auto prefix = [&](int nb, int nu, int nk) {
    Scenario sc = big;
    sc.cs.sat_positions.resize(nb);
    sc.cs.sat_velocities.resize(nb);
    sc.cs.n_slots = nk;
    sc.rx.antenna_offsets.resize(nu);
    return sc;
  };

  auto efim_of = [](const Scenario& sc) {
    return LocationFim(sc).efim_kappa1();
  };

  const Matrix9 base = efim_of(prefix(2, 4, 2));
  for (const Matrix9& bigger :
       {efim_of(prefix(3, 4, 2)), efim_of(prefix(2, 9, 2)),
        efim_of(prefix(2, 4, 3))}) {
    Eigen::SelfAdjointEigenSolver<Matrix9> es(bigger - base);
    CHECK(es.eigenvalues().minCoeff() >=
          -1e-9 * std::max(1.0, es.eigenvalues().maxCoeff()));
  }
}

TEST_CASE("every reduction stays symmetric") {
  const Scenario sc = random_scenario(85, 3, 4, 3, OffsetConfig::both(), 80.0);
  const LocationFim lf(sc);
  auto sym_rel = [](const Eigen::MatrixXd& m) {
    const double scale = m.cwiseAbs().maxCoeff();
    return scale == 0.0 ? 0.0
                        : (m - m.transpose()).cwiseAbs().maxCoeff() / scale;
  };
  CHECK(sym_rel(lf.fim()) < 1e-12);
  CHECK(sym_rel(lf.loss()) < 1e-12);
  CHECK(sym_rel(lf.efim_kappa1()) < 1e-12);
  const Efim6Result p6 = efim_6d(Block::Position, Block::Orientation, sc);
  CHECK(sym_rel(p6.first) < 1e-12);
  CHECK(sym_rel(p6.second) < 1e-12);
  for (Block which : {Block::Position, Block::Orientation, Block::Velocity}) {
    CHECK(sym_rel(efim_9d(which, sc).efim) < 1e-12);
  }
}

TEST_CASE("knowing more offsets never loses information") {
  // Same draw under each offset configuration; the loss matrices are nested
  // in the Loewner order.
  SplitMix64 rng(86);
  GeometryConfig geom;
  geom.array_spacing = 70.0;
  SignalSpec spec;
  spec.fc = 1e9;
  spec.alpha1 = 1e6;
  spec.snr = 2.0;
  spec.t2_eff = 25.0;
  const Scenario base =
      draw_scenario(geom, spec, OffsetConfig::none(), 3, 4, 2, 0.5, rng);

  auto loss_of = [&](OffsetConfig off) {
    Scenario sc = base;
    sc.offsets = off;
    return LocationFim(sc).loss();
  };
  const Matrix9 none = loss_of(OffsetConfig::none());
  const Matrix9 time = loss_of(OffsetConfig::time());
  const Matrix9 freq = loss_of(OffsetConfig::frequency());
  const Matrix9 both = loss_of(OffsetConfig::both());

  CHECK(none.cwiseAbs().maxCoeff() == 0.0);
  auto psd = [](const Matrix9& m) {
    Eigen::SelfAdjointEigenSolver<Matrix9> es(m);
    return es.eigenvalues().minCoeff() >=
           -1e-9 * std::max(1.0, es.eigenvalues().maxCoeff());
  };
  CHECK(psd(time));
  CHECK(psd(freq));
  CHECK(psd(Matrix9(both - time)));
  CHECK(psd(Matrix9(both - freq)));
}

TEST_CASE("scaling every snr scales information exactly") {
  Scenario sc = random_scenario(91, 3, 4, 2, OffsetConfig::both(), 80.0);
  const LocationFim lf(sc);
  Scenario scaled = sc;
  scaled.spec.snr *= 4.0;
  const LocationFim lf4(scaled);

  CHECK((lf4.efim_kappa1() - 4.0 * lf.efim_kappa1()).cwiseAbs().maxCoeff() ==
        0.0);
  const EfimResult r = efim_9d(Block::Position, sc);
  const EfimResult r4 = efim_9d(Block::Position, scaled);
  CHECK(r.feasible == r4.feasible);
  CHECK(crlb_rms(r4.efim) == 0.5 * crlb_rms(r.efim));
}

TEST_CASE("scalar bound examples") {
  CHECK(crlb_rms(Matrix3::Identity()) ==
        doctest::Approx(std::sqrt(3.0)).epsilon(1e-12));
  CHECK(crlb_rms(4.0 * Matrix3::Identity()) ==
        doctest::Approx(std::sqrt(3.0) / 2.0).epsilon(1e-12));
}
