#include <gtest/gtest.h>

#include <random>

#include "pvortex/domain.hpp"
#include "pvortex/error.hpp"

using namespace pvortex;

namespace {

// Independent closed forms of the disk regular part.
double disk_g(Point2 z, Point2 w) {
  return -std::log(1.0 - 2.0 * dot(z, w) + norm2(z) * norm2(w)) / (4.0 * kPi);
}
double disk_h(Point2 z) { return -std::log(1.0 - norm2(z)) / (2.0 * kPi); }

std::vector<Point2> random_points(int n, double radius, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<Point2> out;
  while (static_cast<int>(out.size()) < n) {
    const Point2 p{radius * u(rng), radius * u(rng)};
    if (norm(p) < radius) out.push_back(p);
  }
  return out;
}

std::vector<DomainModel> all_models() {
  return {DomainModel::unit_disk(), DomainModel::radial_power(2.0),
          DomainModel::radial_power(1.5), user_models::shifted_paraboloid({0.1, -0.2}),
          user_models::bilinear()};
}

}  // namespace

TEST(UnitDisk, RobinValues) {
  const DomainModel disk = DomainModel::unit_disk();
  EXPECT_EQ(disk.h({0.0, 0.0}), 0.0);
  EXPECT_NEAR(disk.h({0.6, 0.0}), -std::log(0.64) / (2.0 * kPi), 1e-15);
  EXPECT_NEAR(disk.h({0.6, 0.0}), 0.0710, 5e-5);
  for (const Point2& z : random_points(50, 0.95, 1)) {
    EXPECT_NEAR(disk.h(z), disk_h(z), 1e-14);
  }
}

TEST(UnitDisk, RegularPartMatchesClosedForm) {
  const DomainModel disk = DomainModel::unit_disk();
  const auto a = random_points(40, 0.9, 2);
  const auto b = random_points(40, 0.9, 3);
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(disk.g(a[i], b[i]), disk_g(a[i], b[i]), 1e-14);
}

TEST(UnitDisk, HessianAtOriginIsIdentityOverPi) {
  const SymMat2 H = DomainModel::unit_disk().hess_h({0.0, 0.0});
  EXPECT_NEAR(H.xx, 1.0 / kPi, 1e-14);
  EXPECT_NEAR(H.yy, 1.0 / kPi, 1e-14);
  EXPECT_NEAR(H.xy, 0.0, 1e-14);
}

TEST(UnitDisk, RobinBlowsUpAtBoundary) {
  const DomainModel disk = DomainModel::unit_disk();
  double prev = disk.h({0.9, 0.0});
  for (int k = 2; k <= 8; ++k) {
    const double v = disk.h({1.0 - std::pow(10.0, -k), 0.0});
    EXPECT_GT(v, prev);
    prev = v;
  }
}

TEST(UnitDisk, GradientIsRadialWithBoundaryLaw) {
  const DomainModel disk = DomainModel::unit_disk();
  for (const Point2& z : random_points(30, 0.99, 4)) {
    const Point2 g = disk.grad_h(z);
    EXPECT_NEAR(cross(g, z), 0.0, 1e-12 * (1.0 + norm(g)));
    EXPECT_NEAR(norm(g), norm(z) / (kPi * (1.0 - norm2(z))), 1e-10 * norm(g) + 1e-14);
  }
  // |grad h| = 1/(2 pi delta) + O(1) at distance delta from the circle.
  for (double delta : {1e-2, 1e-3, 1e-4, 1e-5}) {
    const double mag = norm(disk.grad_h({1.0 - delta, 0.0}));
    EXPECT_LT(std::abs(mag - 1.0 / (2.0 * kPi * delta)), 1.0);
  }
}

TEST(RadialPower, ClosedForms) {
  const DomainModel m = DomainModel::radial_power(2.0);
  EXPECT_DOUBLE_EQ(m.h({1.0, 1.0}), 4.0);
  const Point2 g = m.grad_h({1.0, 0.0});
  EXPECT_NEAR(g.x, 4.0, 1e-14);
  EXPECT_NEAR(g.y, 0.0, 1e-14);
  EXPECT_THROW(DomainModel::radial_power(1.0), Error);
}

TEST(AllModels, SymmetricRegularPart) {
  for (const DomainModel& m : all_models()) {
    const auto a = random_points(1000, 0.9, 5);
    const auto b = random_points(1000, 0.9, 6);
    for (std::size_t i = 0; i < a.size(); ++i) {
      ASSERT_NEAR(m.g(a[i], b[i]), m.g(b[i], a[i]), 1e-15 * (1.0 + std::abs(m.g(a[i], b[i]))))
          << m.name();
    }
  }
}

TEST(AllModels, DerivativesAgreeWithFiniteDifferences) {
  for (const DomainModel& m : all_models()) {
    for (const Point2& z : random_points(40, 0.85, 7)) {
      const double step = 1e-5 * (1.0 + norm(z));
      const Point2 fd{(m.h(z + Point2{step, 0}) - m.h(z - Point2{step, 0})) / (2.0 * step),
                      (m.h(z + Point2{0, step}) - m.h(z - Point2{0, step})) / (2.0 * step)};
      const Point2 g = m.grad_h(z);
      EXPECT_LE(norm(fd - g), 1e-6 * std::max(norm(g), 1e-3)) << m.name();
      const Point2 chain = m.grad1_g(z, z) + m.grad2_g(z, z);
      EXPECT_LE(norm(chain - g), 1e-6 * std::max(norm(g), 1e-3)) << m.name();
      EXPECT_NEAR(m.h(z), m.g(z, z), 1e-14) << m.name();
    }
  }
}

TEST(HarmonicCenter, KnownMinima) {
  const HarmonicCenter disk = harmonic_center(DomainModel::unit_disk(), {0.3, -0.2});
  EXPECT_LT(norm(disk.z0), 1e-10);
  EXPECT_NEAR(disk.m, 0.0, 1e-18);
  // h = |z|^4 has a degenerate minimum; the gradient test stops early.
  const HarmonicCenter quartic = harmonic_center(DomainModel::radial_power(2.0), {0.5, 0.5});
  EXPECT_LT(norm(quartic.z0), 1e-3);
  const Point2 a{0.1, -0.2};
  const HarmonicCenter shifted = harmonic_center(user_models::shifted_paraboloid(a), {0.0, 0.0});
  EXPECT_LT(norm(shifted.z0 - a), 1e-8);
}

TEST(UserModels, InsideDefaultsToPlane) {
  const DomainModel m = user_models::zero();
  EXPECT_TRUE(m.inside({100.0, -50.0}));
  EXPECT_EQ(m.h({0.3, 0.4}), 0.0);
  EXPECT_FALSE(DomainModel::unit_disk().inside({1.0, 0.0}));
}
