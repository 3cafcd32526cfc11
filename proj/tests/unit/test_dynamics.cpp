#include <gtest/gtest.h>

#include <random>

#include "pvortex/dynamics.hpp"
#include "pvortex/error.hpp"
#include "pvortex/flow.hpp"

using namespace pvortex;

namespace {

PairState random_pair(std::mt19937& rng, double radius) {
  std::uniform_real_distribution<double> u(-radius, radius);
  while (true) {
    const PairState s{{u(rng), u(rng)}, {u(rng), u(rng)}};
    if (norm(s.z1) < radius && norm(s.z2) < radius && norm(s.z1 - s.z2) > 0.05) return s;
  }
}

Point2 fd_grad(const std::function<double(Point2)>& f, Point2 z) {
  const double e = 1e-6 * (1.0 + norm(z));
  return {(f(z + Point2{e, 0}) - f(z - Point2{e, 0})) / (2 * e),
          (f(z + Point2{0, e}) - f(z - Point2{0, e})) / (2 * e)};
}

}  // namespace

TEST(VortexConfig, RejectsVanishingTotalStrength) {
  try {
    VortexConfig::create(1.0, -1.0);
    FAIL() << "expected InvalidArgument";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InvalidArgument);
    EXPECT_NE(std::string(e.what()).find("kappa1 + kappa2"), std::string::npos);
  }
  EXPECT_THROW(VortexConfig::create(0.0, 1.0), Error);
}

TEST(VortexConfig, TransformIsInvertible) {
  for (auto [k1, k2] : {std::pair{0.5, 0.5}, {1.5, -0.5}, {2.0, -1.0}, {0.3, 1.1}}) {
    const VortexConfig cfg = VortexConfig::create(k1, k2);
    EXPECT_LT((cfg.A() * cfg.A_inv() - Mat4::Identity()).norm(), 1e-14);
    std::mt19937 rng(1);
    for (int i = 0; i < 20; ++i) {
      const PairState s = random_pair(rng, 0.9);
      const PairState back = from_w(cfg, to_w(cfg, s));
      EXPECT_LT(norm(back.z1 - s.z1) + norm(back.z2 - s.z2), 1e-14);
    }
  }
}

TEST(VortexConfig, TransformExamples) {
  const WState w = to_w(VortexConfig::create(0.5, 0.5), {{1.0, 0.0}, {0.0, 0.0}});
  EXPECT_NEAR(w.w1.x, 0.5, 1e-15);
  EXPECT_NEAR(w.w1.y, 0.0, 1e-15);
  EXPECT_NEAR(w.w2.x, 0.5, 1e-15);
  EXPECT_NEAR(w.w2.y, 0.0, 1e-15);
  // sigma < 0 reflects the first coordinate of the difference.
  const VortexConfig neg = VortexConfig::create(2.0, -1.0);
  const PairState z{{0.3, 0.2}, {-0.1, 0.5}};
  const WState wn = to_w(neg, z);
  EXPECT_NEAR(wn.w1.x, -std::sqrt(2.0) * 0.4, 1e-15);
  EXPECT_NEAR(wn.w1.y, std::sqrt(2.0) * -0.3, 1e-15);
  EXPECT_NEAR(wn.w2.x, 2.0 * 0.3 + 0.1, 1e-15);
  EXPECT_NEAR(wn.w2.y, 2.0 * 0.2 - 0.5, 1e-15);
}

TEST(Hamiltonian, ClosedFormValues) {
  const VortexConfig cfg = VortexConfig::create(1.0, 1.0);
  EXPECT_NEAR(eval_H(user_models::zero(), cfg, {{0.5, 0.0}, {-0.5, 0.0}}), 0.0, 1e-16);
  const double expected = -std::log(0.2) / kPi + std::log(1.0201) / (2.0 * kPi) +
                          std::log(0.99) / kPi;
  const double H = eval_H(DomainModel::unit_disk(), cfg, {{0.1, 0.0}, {-0.1, 0.0}});
  EXPECT_NEAR(H, expected, 1e-14);
  EXPECT_NEAR(H, 0.51226, 1e-5);
  const PairState s{{0.2, 0.3}, {-0.4, 0.1}};
  EXPECT_NEAR(eval_H(DomainModel::unit_disk(), VortexConfig::create(0.7, 0.4), s),
              eval_H(DomainModel::unit_disk(), VortexConfig::create(-0.7, -0.4), s), 1e-15);
}

TEST(Hamiltonian, CoRotatingPairWithoutBoundary) {
  const double d = 0.4;
  const PairState v =
      z_field(user_models::zero(), VortexConfig::create(1.0, 1.0), {{d / 2, 0.0}, {-d / 2, 0.0}});
  EXPECT_NEAR(v.z1.x, 0.0, 1e-15);
  EXPECT_NEAR(v.z1.y, 1.0 / (kPi * d), 1e-14);
  EXPECT_NEAR(v.z2.x, 0.0, 1e-15);
  EXPECT_NEAR(v.z2.y, -1.0 / (kPi * d), 1e-14);
}

TEST(Hamiltonian, FieldIsHamiltonianAndConservesEnergy) {
  const DomainModel disk = DomainModel::unit_disk();
  const VortexConfig cfg = VortexConfig::create(1.5, -0.5);
  std::mt19937 rng(3);
  for (int i = 0; i < 20; ++i) {
    const PairState s = random_pair(rng, 0.8);
    const Point2 g1 = fd_grad([&](Point2 z) { return eval_H(disk, cfg, {z, s.z2}); }, s.z1);
    const Point2 g2 = fd_grad([&](Point2 z) { return eval_H(disk, cfg, {s.z1, z}); }, s.z2);
    const PairState v = z_field(disk, cfg, s);
    EXPECT_LT(norm(v.z1 - apply_J(g1) / cfg.kappa1()), 1e-6 * (1.0 + norm(v.z1)));
    EXPECT_LT(norm(v.z2 - apply_J(g2) / cfg.kappa2()), 1e-6 * (1.0 + norm(v.z2)));
    EXPECT_NEAR(dot(g1, v.z1) + dot(g2, v.z2), 0.0, 1e-6 * (1.0 + norm(g1) * norm(v.z1)));
  }
}

TEST(Hamiltonian, WFieldIsPushForward) {
  const DomainModel disk = DomainModel::unit_disk();
  std::mt19937 rng(4);
  for (const VortexConfig& cfg : {VortexConfig::create(0.5, 0.5), VortexConfig::create(1.5, -0.5)}) {
    for (int i = 0; i < 20; ++i) {
      const PairState s = random_pair(rng, 0.8);
      const WState a = w_field(disk, cfg, to_w(cfg, s));
      const WState b = to_w(cfg, z_field(disk, cfg, s));
      EXPECT_LT(norm(a.w1 - b.w1) + norm(a.w2 - b.w2), 1e-10 * (1.0 + norm(b.w1)));
    }
  }
  const WState frozen =
      w_field(user_models::zero(), VortexConfig::create(0.5, 0.5), {{0.1, 0.02}, {0.3, 0.1}});
  EXPECT_EQ(frozen.w2.x, 0.0);
  EXPECT_EQ(frozen.w2.y, 0.0);
}

TEST(Remainder, VanishesForBilinearModel) {
  // g = <z,w>, h = |z|^2: the regular terms add up to |k1 z1 + k2 z2|^2 = |w2|^2,
  // so grad_{w2} H1 = -2 w2 = -grad h(w2) and Q = 0.
  const VortexConfig cfg = VortexConfig::create(1.5, -0.5);
  for (double r : {1e-1, 1e-2, 1e-3}) {
    const Point2 q = remainder_Q(user_models::bilinear(), cfg, {{r, 0.3 * r}, {0.2, -0.4}});
    EXPECT_LT(norm(q), 1e-12);
  }
}

TEST(Remainder, DecaysOnDisk) {
  const DomainModel disk = DomainModel::unit_disk();
  const VortexConfig cfg = VortexConfig::create(0.5, 0.5);
  // Bound from the Hessian of h on the disk of radius 0.6: |Q| <= C |w1|.
  double C = 0.0;
  for (double r = 0.0; r <= 0.6; r += 0.01) {
    const SymMat2 H = disk.hess_h({r, 0.0});
    C = std::max(C, std::abs(H.xx) + std::abs(H.yy) + 2.0 * std::abs(H.xy));
  }
  const double q3 = norm(remainder_Q(disk, cfg, {{1e-3, 0.0}, {0.5, 0.0}}));
  EXPECT_LE(q3, C * 1e-3);
  double prev = std::numeric_limits<double>::infinity();
  for (double r : {1e-1, 1e-2, 1e-3, 1e-4}) {
    double sup = 0.0;
    for (int k = 0; k < 16; ++k) {
      const Point2 w2 = 0.5 * unit(2 * kPi * k / 16);
      sup = std::max(sup, norm(remainder_Q(disk, cfg, {r * unit(0.3 + k), w2})));
    }
    EXPECT_LT(sup, prev);
    EXPECT_LE(sup, C * r);
    prev = sup;
  }
}

TEST(Remainder, FirstOrderTermCancelsForSymmetricG) {
  // With g symmetric the d-derivative of the regular terms vanishes at d = 0,
  // so Q is quadratic in |w1|: Q(r) / r^2 settles to a constant.
  const DomainModel disk = DomainModel::unit_disk();
  for (const VortexConfig& cfg : {VortexConfig::create(0.5, 0.5), VortexConfig::create(1.5, -0.5)}) {
    const WState a{{1e-2, 0.0}, {0.4, 0.2}};
    const WState b{{1e-3, 0.0}, {0.4, 0.2}};
    const double ratio = norm(remainder_Q(disk, cfg, a)) / norm(remainder_Q(disk, cfg, b));
    EXPECT_NEAR(ratio, 100.0, 2.0);
  }
}

TEST(Remainder, NeedsNormalizedConfig) {
  EXPECT_THROW(remainder_Q(DomainModel::unit_disk(), VortexConfig::create(1.0, 1.0),
                           {{0.01, 0.0}, {0.2, 0.0}}),
               Error);
}

TEST(PolarForm, AngularRate) {
  const VortexConfig cfg = VortexConfig::create(0.5, 0.5);
  const double R1 = 0.05;
  EXPECT_DOUBLE_EQ(angular_rate_f(user_models::zero(), cfg, R1, 0.3, 0.2, 1.0),
                   0.25 / (kPi * R1 * R1));
  const DomainModel disk = DomainModel::unit_disk();
  for (const VortexConfig& c : {cfg, VortexConfig::create(1.5, -0.5)}) {
    for (double r : {1e-2, 1e-3, 1e-4}) {
      const double scaled = r * r * angular_rate_f(disk, c, r, 0.5, 0.7, 2.0);
      EXPECT_NEAR(scaled, c.kappa_product() / kPi, 2.0 * r);
    }
  }
}

TEST(PolarForm, RateMatchesIntegratedLift) {
  const DomainModel disk = DomainModel::unit_disk();
  for (const VortexConfig& cfg : {VortexConfig::create(0.5, 0.5), VortexConfig::create(1.5, -0.5)}) {
    const WState w0{{0.04, 0.01}, {0.45, -0.1}};
    const Trajectory<4> traj =
        integrate(w_system(disk, cfg), pack(w0), 0.0, 0.3, IntegratorSettings{1e-12, 1e-14});
    for (double t : {0.0, 0.1, 0.2, 0.3}) {
      const WVec y = traj.at(t);
      const WVec v = traj.derivative_at(t);
      const Point2 w1{y[0], y[1]};
      const double lift_rate = cross(w1, Point2{v[0], v[1]}) / norm2(w1);
      const Point2 w2{y[2], y[3]};
      const double f = angular_rate_f(disk, cfg, norm(w1), norm(w2), arg(w1), arg(w2));
      EXPECT_NEAR(f, lift_rate, 1e-6 * std::abs(lift_rate));
    }
  }
}

TEST(Impulse, CenterOfVorticity) {
  const VortexConfig cfg = VortexConfig::create(1.5, -0.5);
  const PairState s{{0.2, 0.1}, {-0.3, 0.4}};
  EXPECT_NEAR(angular_impulse(cfg, s), 1.5 * 0.05 - 0.5 * 0.25, 1e-15);
  const Point2 c = center_of_vorticity(cfg, s);
  EXPECT_NEAR(c.x, (1.5 * 0.2 + 0.5 * 0.3), 1e-15);
  EXPECT_NEAR(c.y, (1.5 * 0.1 - 0.5 * 0.4), 1e-15);
}
