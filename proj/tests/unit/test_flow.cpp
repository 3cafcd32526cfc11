#include <gtest/gtest.h>

#include <Eigen/LU>

#include <random>

#include "pvortex/dynamics.hpp"
#include "pvortex/error.hpp"
#include "pvortex/flow.hpp"

using namespace pvortex;

namespace {

// dz/dt = -J z: counter-clockwise rotation with unit angular speed.
System<2> rotation(double omega = 1.0) {
  System<2> sys;
  sys.field = [omega](const StateVec<2>& y) { return StateVec<2>{-omega * y[1], omega * y[0]}; };
  return sys;
}

template <std::size_t N>
double dist(const StateVec<N>& a, const StateVec<N>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < N; ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

template <std::size_t N>
Trajectory<N> slice(const Trajectory<N>& traj, std::size_t first, std::size_t last) {
  Trajectory<N> out;
  out.times.assign(traj.times.begin() + first, traj.times.begin() + last + 1);
  out.states.assign(traj.states.begin() + first, traj.states.begin() + last + 1);
  out.segments.assign(traj.segments.begin() + first, traj.segments.begin() + last);
  return out;
}

const WVec kPairStart = pack(PairState{{0.35, 0.1}, {0.25, 0.05}});

}  // namespace

TEST(Integrate, QuarterTurnOfRotation) {
  const Trajectory<2> traj =
      integrate(rotation(), StateVec<2>{1.0, 0.0}, 0.0, kPi / 2, IntegratorSettings{1e-12, 1e-14});
  EXPECT_NEAR(traj.final_state()[0], 0.0, 1e-10);
  EXPECT_NEAR(traj.final_state()[1], 1.0, 1e-10);
  const StateVec<2> mid = traj.at(kPi / 4);
  EXPECT_NEAR(mid[0], std::sqrt(0.5), 1e-10);
  EXPECT_NEAR(mid[1], std::sqrt(0.5), 1e-10);
}

TEST(Integrate, SingleDiskVortexFollowsCircle) {
  const DomainModel disk = DomainModel::unit_disk();
  const Trajectory<2> traj = integrate(center_system(disk, 1.0), StateVec<2>{0.6, 0.0}, 0.0,
                                       13.0, IntegratorSettings{1e-12, 1e-14});
  const double c = disk.h({0.6, 0.0});
  for (const StateVec<2>& y : traj.states) {
    EXPECT_NEAR(std::hypot(y[0], y[1]), 0.6, 1e-9);
    EXPECT_NEAR(disk.h({y[0], y[1]}), c, 1e-9);
  }
}

TEST(Integrate, EnergyDriftOverOneFastTurn) {
  const DomainModel disk = DomainModel::unit_disk();
  const VortexConfig cfg = VortexConfig::create(0.5, 0.5);
  const System<4> sys = z_system(disk, cfg);
  // z-frame pair rotation rate (k1 + k2) / (pi d^2).
  const double d = std::hypot(0.1, 0.05);
  const double turn = 2.0 * kPi * kPi * d * d;
  const Trajectory<4> coarse = integrate(sys, kPairStart, 0.0, turn, IntegratorSettings{});
  const Trajectory<4> fine = integrate(sys, kPairStart, 0.0, turn, IntegratorSettings{5e-11, 5e-13});
  const double H0 = coarse.energy.front();
  EXPECT_LE(coarse.energy_drift(), 1e-9 * std::abs(H0));
  // The halved-tolerance run checks that the end state is converged.
  EXPECT_LE(fine.energy_drift(), 1e-9 * std::abs(H0));
  EXPECT_LT(dist(coarse.final_state(), fine.final_state()), 10.0 * coarse.error_estimate);
}

TEST(Integrate, ErrorsAreTyped) {
  System<2> drift;
  drift.field = [](const StateVec<2>&) { return StateVec<2>{1.0, 0.0}; };
  drift.admissible = [](const StateVec<2>& y) { return std::hypot(y[0], y[1]) < 1.0; };
  try {
    integrate(drift, StateVec<2>{0.0, 0.0}, 0.0, 5.0, IntegratorSettings{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DomainExit);
    EXPECT_NEAR(e.value(), 1.0, 1e-6);
  }
  IntegratorSettings tiny;
  tiny.max_steps = 3;
  tiny.max_step = 0.01;
  try {
    integrate(rotation(), StateVec<2>{1.0, 0.0}, 0.0, 1.0, tiny);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::BudgetExceeded);
  }
  EXPECT_THROW(integrate(rotation(), StateVec<2>{1.0, 0.0}, 0.0, 1.0, IntegratorSettings{-1.0}),
               Error);
}

TEST(FlowMap, IdentitySemigroupAndReversibility) {
  const DomainModel disk = DomainModel::unit_disk();
  const System<4> sys = w_system(disk, VortexConfig::create(1.5, -0.5));
  const WVec w0 = pack(WState{{0.08, 0.02}, {0.4, -0.2}});
  const IntegratorSettings s{1e-12, 1e-14};
  EXPECT_EQ(flow_map(sys, w0, 0.0, s), w0);
  const WVec direct = flow_map(sys, w0, 1.7, s);
  const WVec split = flow_map(sys, flow_map(sys, w0, 0.6, s), 1.1, s);
  EXPECT_LT(dist(direct, split), 1e-9);
  const Trajectory<4> back = integrate(sys, direct, 1.7, 0.0, s);
  EXPECT_LT(dist(back.final_state(), w0), 1e-8);
}

TEST(FlowMap, ToleranceHalvingWithinErrorEstimate) {
  const DomainModel disk = DomainModel::unit_disk();
  const System<4> sys = w_system(disk, VortexConfig::create(0.5, 0.5));
  const WVec w0 = pack(WState{{0.05, 0.0}, {0.5, 0.1}});
  for (double tol : {1e-8, 1e-10}) {
    IntegratorSettings s{tol, tol * 1e-2};
    s.store_dense = false;
    IntegratorSettings h{tol / 2, tol * 5e-3};
    h.store_dense = false;
    const Trajectory<4> a = integrate(sys, w0, 0.0, 2.0, s);
    const Trajectory<4> b = integrate(sys, w0, 0.0, 2.0, h);
    EXPECT_LT(dist(a.final_state(), b.final_state()), 10.0 * a.error_estimate);
  }
}

TEST(FlowMap, ConjugacyOfZAndWFlows) {
  const DomainModel disk = DomainModel::unit_disk();
  const VortexConfig cfg = VortexConfig::create(0.5, 0.5);
  const IntegratorSettings s{1e-12, 1e-14};
  const PairState z0{{0.3, 0.1}, {0.1, -0.2}};
  const PairState zT = unpack_z(flow_map(z_system(disk, cfg), pack(z0), 1.3, s));
  const WState wT = unpack_w(flow_map(w_system(disk, cfg), pack(to_w(cfg, z0)), 1.3, s));
  const WState mapped = to_w(cfg, zT);
  EXPECT_LT(norm(mapped.w1 - wT.w1) + norm(mapped.w2 - wT.w2), 1e-9);
}

TEST(FlowJacobian, RotationAndVolume) {
  EXPECT_TRUE(flow_jacobian(rotation(), StateVec<2>{1.0, 0.0}, 0.0, IntegratorSettings{})
                  .isApprox(Eigen::Matrix2d::Identity()));
  const Eigen::Matrix2d J =
      flow_jacobian(rotation(), StateVec<2>{1.0, 0.0}, kPi / 2, IntegratorSettings{1e-12, 1e-14});
  Eigen::Matrix2d R;
  R << 0.0, -1.0, 1.0, 0.0;
  EXPECT_LT((J - R).norm(), 1e-6);
  const DomainModel disk = DomainModel::unit_disk();
  const System<4> sys = w_system(disk, VortexConfig::create(0.5, 0.5));
  const Eigen::Matrix4d M =
      flow_jacobian(sys, pack(WState{{0.06, 0.0}, {0.5, 0.0}}), 1.0, IntegratorSettings{1e-12, 1e-14});
  EXPECT_NEAR(M.determinant(), 1.0, 1e-4);
}

TEST(Conservation, RandomDiskTrajectories) {
  const DomainModel disk = DomainModel::unit_disk();
  const VortexConfig cfg = VortexConfig::create(0.5, 0.5);
  const System<4> sys = z_system(disk, cfg);
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(-0.8, 0.8);
  for (int i = 0; i < 5; ++i) {
    PairState z;
    do {
      z = {{u(rng), u(rng)}, {u(rng), u(rng)}};
    } while (norm(z.z1) > 0.8 || norm(z.z2) > 0.8 || norm(z.z1 - z.z2) < 0.05);
    IntegratorSettings s;
    s.store_dense = false;
    const Trajectory<4> traj = integrate(sys, pack(z), 0.0, 5.0, s);
    const double H0 = eval_H(disk, cfg, z);
    const double I0 = angular_impulse(cfg, z);
    for (const WVec& y : traj.states) {
      EXPECT_LE(std::abs(eval_H(disk, cfg, unpack_z(y)) - H0), 1e-9 * (1.0 + std::abs(H0)));
      EXPECT_LE(std::abs(angular_impulse(cfg, unpack_z(y)) - I0), 1e-9 * (1.0 + std::abs(I0)));
    }
  }
}

TEST(AngleLift, UniformRotation) {
  const double omega = 3.0;
  const Trajectory<2> traj = integrate(rotation(omega), StateVec<2>{0.0, 2.0}, 0.0, 10.0,
                                       IntegratorSettings{1e-12, 1e-14});
  const AngleLift lift = lift_angle(traj, [](const StateVec<2>& y) { return Point2{y[0], y[1]}; });
  for (std::size_t i = 0; i < lift.times.size(); ++i) {
    EXPECT_NEAR(lift.theta[i], kPi / 2 + omega * lift.times[i], 1e-8);
  }
}

TEST(AngleLift, Additivity) {
  const DomainModel disk = DomainModel::unit_disk();
  const Trajectory<4> traj = integrate(w_system(disk, VortexConfig::create(0.5, 0.5)),
                                       pack(WState{{0.05, 0.0}, {0.5, 0.0}}), 0.0, 3.0,
                                       IntegratorSettings{});
  const auto w1 = [](const WVec& v) { return Point2{v[0], v[1]}; };
  const std::size_t k = traj.times.size() / 3;
  const double whole = lift_angle(traj, w1).increment();
  const double parts = lift_angle(slice(traj, 0, k), w1).increment() +
                       lift_angle(slice(traj, k, traj.times.size() - 1), w1).increment();
  EXPECT_NEAR(whole, parts, 1e-12 * std::abs(whole));
}

TEST(AngleLift, FastPairWithoutBoundary) {
  const VortexConfig cfg = VortexConfig::create(0.5, 0.5);
  const double R1 = 0.1;
  const double T = 1.0;
  const Trajectory<4> traj = integrate(w_system(user_models::zero(), cfg),
                                       pack(WState{{R1, 0.0}, {0.3, 0.2}}), 0.0, T,
                                       IntegratorSettings{1e-12, 1e-14});
  const WLifts lifts = lift_angles(traj);
  EXPECT_NEAR(lifts.theta1.increment(), cfg.kappa_product() / kPi * T / (R1 * R1), 1e-8);
  EXPECT_NEAR(lifts.theta2.increment(), 0.0, 1e-15);
}

TEST(Section, ReturnTimes) {
  const double omega = 2.5;
  const Trajectory<2> circ = integrate(rotation(omega), StateVec<2>{1.0, 0.0}, 0.0, 10.0,
                                       IntegratorSettings{1e-12, 1e-14});
  const auto pt = [](const StateVec<2>& y) { return Point2{y[0], y[1]}; };
  const auto spin = [omega](const StateVec<2>& y) { return Point2{-omega * y[1], omega * y[0]}; };
  const auto crossings = section_crossings(circ, Ray{{0.0, 0.0}, {0.0, 1.0}}, pt, spin);
  ASSERT_GE(crossings.size(), 3u);
  for (std::size_t i = 1; i < crossings.size(); ++i) {
    EXPECT_NEAR(crossings[i].t - crossings[i - 1].t, 2.0 * kPi / omega, 1e-10);
    EXPECT_EQ(crossings[i].orientation, 1);
  }

  const DomainModel disk = DomainModel::unit_disk();
  const System<2> sys = center_system(disk, 1.0);
  const Trajectory<2> lvl = integrate(sys, StateVec<2>{0.6, 0.0}, 0.0, 14.0,
                                      IntegratorSettings{1e-12, 1e-14});
  const auto vel = [&](const StateVec<2>& y) {
    const StateVec<2> v = sys.field(y);
    return Point2{v[0], v[1]};
  };
  const auto hits = section_crossings(lvl, Ray{{0.0, 0.0}, {1.0, 0.0}}, pt, vel);
  std::vector<double> returns;
  for (const Crossing& c : hits) {
    if (c.t > 1.0) returns.push_back(c.t);
  }
  ASSERT_FALSE(returns.empty());
  EXPECT_NEAR(returns.front(), 2.0 * kPi * kPi * 0.64, 1e-8);
  EXPECT_NEAR(returns.front(), 12.633, 5e-4);
}
