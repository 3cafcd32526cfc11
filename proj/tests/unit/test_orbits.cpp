#include <gtest/gtest.h>

#include "pvortex/error.hpp"
#include "pvortex/orbits.hpp"

using namespace pvortex;

namespace {

const VortexConfig kHalf = VortexConfig::create(0.5, 0.5);

struct Fixture {
  DomainModel disk = DomainModel::unit_disk();
  LevelOrbit level;
  TwistCertificate cert;
};

// A certificate carrying only what seeding needs: period, b1 and the level.
const Fixture& setup() {
  static const Fixture s = [] {
    Fixture out;
    out.level = trace_level(out.disk, kHalf, 0.1);
    out.cert.c = 0.1;
    out.cert.period = out.level.period;
    out.cert.b1 = 0.1;
    out.cert.sigma = 1;
    return out;
  }();
  return s;
}

const PeriodicOrbit& orbit15() {
  static const PeriodicOrbit o = [] {
    const Fixture& s = setup();
    const WState seed = seed_orbit(s.disk, kHalf, s.cert, s.level, 15);
    const WState locked = lock_seed_index(s.disk, kHalf, seed, s.level.period, 15);
    return refine_orbit(s.disk, kHalf, locked, s.level.period, s.level.star_center);
  }();
  return o;
}

double dist(const WVec& a, const WVec& b) {
  double s = 0.0;
  for (int i = 0; i < 4; ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

}  // namespace

TEST(GaussLegendre, ExactForPolynomials) {
  for (int n : {2, 4, 8}) {
    std::vector<double> x, w;
    gauss_legendre(n, x, w);
    double sum = 0.0;
    for (double wi : w) sum += wi;
    EXPECT_NEAR(sum, 2.0, 1e-14);
    for (int deg = 0; deg < 2 * n; ++deg) {
      double q = 0.0;
      for (int i = 0; i < n; ++i) q += w[i] * std::pow(x[i], deg);
      const double exact = deg % 2 ? 0.0 : 2.0 / (deg + 1);
      EXPECT_NEAR(q, exact, 1e-13) << n << ' ' << deg;
    }
  }
}

TEST(Seed, RadiusScalesAsInverseSquareRootOfIndex) {
  const Fixture& s = setup();
  const WState a = seed_orbit(s.disk, kHalf, s.cert, s.level, 16);
  const WState b = seed_orbit(s.disk, kHalf, s.cert, s.level, 64);
  EXPECT_NEAR(norm(a.w1) / norm(b.w1), 2.0, 1e-12);
  EXPECT_EQ(a.w2, s.level.samples.front());
  EXPECT_THROW(seed_orbit(s.disk, kHalf, s.cert, s.level, -16), Error);
  EXPECT_THROW(seed_orbit(s.disk, kHalf, s.cert, s.level, 1), Error);
}

TEST(Seed, ResidualShrinksWithIndex) {
  const Fixture& s = setup();
  const System<4> sys = w_system(s.disk, kHalf);
  double prev = std::numeric_limits<double>::infinity();
  for (int nu : {15, 45, 135}) {
    const WVec w = pack(seed_orbit(s.disk, kHalf, s.cert, s.level, nu));
    const double res = dist(flow_map(sys, w, s.level.period, IntegratorSettings{1e-12, 1e-14}), w);
    EXPECT_LT(res, prev);
    prev = res;
  }
}

TEST(Seed, OppositeOrientationForNegativeSigma) {
  const Fixture& s = setup();
  const VortexConfig neg = VortexConfig::create(1.5, -0.5);
  const LevelOrbit level = trace_level(s.disk, neg, 0.1);
  TwistCertificate cert = s.cert;
  cert.period = level.period;
  cert.sigma = -1;
  const WState w = seed_orbit(s.disk, neg, cert, level, -120);
  EXPECT_LT(rot1(s.disk, neg, w, level.period), 0.0);
  EXPECT_THROW(seed_orbit(s.disk, neg, cert, level, 120), Error);
}

TEST(Refine, ConvergedOrbitProperties) {
  const PeriodicOrbit& o = orbit15();
  EXPECT_LE(o.residual, 1e-9);
  EXPECT_EQ(o.nu_measured, 15);
  EXPECT_LE(o.energy_drift, 1e-9);
  EXPECT_EQ(o.center_winding, 1);
  ASSERT_EQ(o.subperiod_distance.size(), 11u);
  EXPECT_GE(o.min_subperiod_distance, 1e-3);
  EXPECT_NEAR(o.action, o.action_coarse, 1e-8 * std::abs(o.action));
  EXPECT_NEAR(o.r1, norm(o.w0.w1), 1e-15);
  EXPECT_NEAR(o.d0, o.r1 / kHalf.scale(), 1e-15);
}

TEST(Refine, TimeTranslatesAreFixedPoints) {
  const Fixture& s = setup();
  const PeriodicOrbit& o = orbit15();
  const System<4> sys = w_system(s.disk, kHalf);
  const IntegratorSettings st{1e-12, 1e-14};
  const WVec shifted = flow_map(sys, pack(o.w0), o.period / 3.0, st);
  EXPECT_LE(dist(flow_map(sys, shifted, o.period, st), shifted), 1e-9);
}

TEST(Refine, ExactInputNeedsNoIteration) {
  const Fixture& s = setup();
  const PeriodicOrbit& o = orbit15();
  const PeriodicOrbit again = refine_orbit(s.disk, kHalf, o.w0, o.period, s.level.star_center);
  EXPECT_EQ(again.iterations, 0);
  EXPECT_EQ(again.w0, o.w0);
}

TEST(Refine, PerturbedStartReconverges) {
  const Fixture& s = setup();
  const PeriodicOrbit& o = orbit15();
  WState w = o.w0;
  w.w1.x += 1e-3;
  w.w2.y += 1e-3;
  const PeriodicOrbit back = refine_orbit(s.disk, kHalf, w, o.period, s.level.star_center);
  EXPECT_LE(back.residual, 1e-9);
}

TEST(Refine, NeedsNormalizedConfig) {
  const Fixture& s = setup();
  EXPECT_THROW(refine_orbit(s.disk, VortexConfig::create(1.0, 1.0), orbit15().w0, 1.0,
                            s.level.star_center),
               Error);
}

TEST(Family, SweepAndVerify) {
  const Fixture& s = setup();
  const FamilyReport family = sweep_family(s.disk, kHalf, s.cert, s.level, {135, 15, 45});
  ASSERT_EQ(family.converged().size(), 3u);
  EXPECT_EQ(family.members.front().nu, 15);
  for (const FamilyMember& m : family.members) EXPECT_EQ(m.orbit->nu_measured, m.nu);
  const VerificationReport rep = verify_theorem(family, s.level);
  EXPECT_TRUE(rep.separation_decreasing);
  EXPECT_TRUE(rep.center_decreasing);
  EXPECT_TRUE(rep.rate_decreasing);
  EXPECT_EQ(rep.action_divergence_sign, -1);
  // d0 follows nu^(-1/2) up to the index offset.
  EXPECT_NEAR(rep.d0[0] / rep.d0[2], 3.0, 0.1);

  FamilyReport small = family;
  small.members.resize(2);
  EXPECT_THROW(verify_theorem(small, s.level), Error);
}
