#include "pvortex/twist.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <random>
#include <vector>

#include "pvortex/error.hpp"
#include "pvortex/parallel.hpp"

namespace pvortex {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_normalized(const VortexConfig& config) {
  if (!config.is_normalized()) {
    throw Error(ErrorKind::NotNormalized, "rotation numbers are defined for kappa1 + kappa2 = 1",
                config.kappa_sum());
  }
}

struct Range {
  double min = kInf;
  double max = -kInf;
  /// Smallest slack of the inequality under test.
  double margin = kInf;
  bool failed = false;

  void merge(const Range& o) {
    min = std::min(min, o.min);
    max = std::max(max, o.max);
    margin = std::min(margin, o.margin);
    failed = failed || o.failed;
  }
};

// One sampled state and the inequality it is tested against.
struct Sample {
  WState w;
  Point2 star_center;
  int orientation = 1;
};

enum class Which { Rot1, Rot2 };

class GridRunner {
 public:
  GridRunner(const DomainModel& model, const VortexConfig& config, double T,
             const IntegratorSettings& settings)
      : model_(model), config_(config), T_(T), settings_(settings) {}

  // Evaluates the oriented rotation number of every sample and its slack;
  // with `early_exit` the remaining samples are skipped after the first
  // violation. An integration failure counts as a violation.
  template <class Slack>
  Range run(const std::vector<Sample>& samples, Which which, Slack&& slack, bool early_exit) {
    Range range;
    std::mutex mutex;
    std::atomic<bool> stop{false};
    detail::parallel_for(samples.size(), [&](std::size_t i) {
      if (early_exit && stop.load()) return;
      const Sample& s = samples[i];
      double value = std::numeric_limits<double>::quiet_NaN();
      try {
        const RotationNumbers rn =
            rotation_numbers(model_, config_, s.w, T_, s.star_center, settings_);
        value = which == Which::Rot1 ? rn.rot1 : s.orientation * rn.rot2;
      } catch (const Error&) {
        // Leaves value NaN: the state is not admissible over the window.
      }
      ++integrations_;
      const double m = std::isnan(value) ? -kInf : slack(value);
      std::lock_guard<std::mutex> lock(mutex);
      if (!std::isnan(value)) {
        range.min = std::min(range.min, value);
        range.max = std::max(range.max, value);
      }
      range.margin = std::min(range.margin, m);
      if (!(m > 0.0)) {
        range.failed = true;
        stop = true;
      }
    });
    return range;
  }

  long integrations() const { return integrations_.load(); }

 private:
  const DomainModel& model_;
  const VortexConfig& config_;
  double T_;
  IntegratorSettings settings_;
  std::atomic<long> integrations_{0};
};

std::vector<Point2> boundary_points(const LevelOrbit& orbit, int n) {
  std::vector<Point2> pts;
  const std::size_t m = orbit.samples.size();
  for (int k = 0; k < n; ++k) pts.push_back(orbit.samples[(static_cast<std::size_t>(k) * m) / n]);
  return pts;
}

std::vector<double> jittered_angles(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> jitter(0.0, 1.0);
  std::vector<double> out;
  for (int j = 0; j < n; ++j) out.push_back(2.0 * kPi * (j + jitter(rng)) / n);
  return out;
}

std::vector<Sample> make_samples(const std::vector<double>& radii, const std::vector<double>& thetas,
                                 const std::vector<const LevelOrbit*>& levels, int n_boundary) {
  std::vector<Sample> out;
  for (double r : radii) {
    for (const LevelOrbit* level : levels) {
      for (const Point2& p : boundary_points(*level, n_boundary)) {
        for (double th : thetas) {
          out.push_back({{r * unit(th), p}, level->star_center, level->orientation});
        }
      }
    }
  }
  return out;
}

}  // namespace

double rot1_leading(const VortexConfig& config, double T, double r1) {
  return config.kappa_product() * T / (2.0 * kPi * kPi * r1 * r1);
}

namespace {

Trajectory<4> window(const DomainModel& model, const VortexConfig& config, const WState& w,
                     double T, const IntegratorSettings& settings) {
  require_normalized(config);
  IntegratorSettings s = settings;
  s.store_dense = false;
  return integrate(w_system(model, config), pack(w), 0.0, T, s);
}

}  // namespace

RotationNumbers rotation_numbers(const DomainModel& model, const VortexConfig& config,
                                 const WState& w, double T, Point2 star_center,
                                 const IntegratorSettings& settings) {
  const WLifts lifts = lift_angles(window(model, config, w, T, settings), star_center);
  return {lifts.theta1.rotation_number(), lifts.theta2.rotation_number()};
}

double rot1(const DomainModel& model, const VortexConfig& config, const WState& w, double T,
            const IntegratorSettings& settings) {
  return lift_angle(window(model, config, w, T, settings), [](const WVec& v) {
           return Point2{v[0], v[1]};
         }).rotation_number();
}

double rot2(const DomainModel& model, const VortexConfig& config, const WState& w, double T,
            Point2 star_center, const IntegratorSettings& settings) {
  return lift_angle(
             window(model, config, w, T, settings),
             [](const WVec& v) { return Point2{v[2], v[3]}; }, star_center)
      .rotation_number();
}

LevelSetup prepare_levels(const DomainModel& model, const VortexConfig& config, double c,
                          double c1, double d1, std::optional<Point2> star_center,
                          const LevelOptions& options) {
  if (!(c1 < c && c < d1)) throw Error(ErrorKind::InvalidArgument, "twist needs c1 < c < d1");
  const VortexConfig cfg = config.normalized();
  const Point2 z0 = star_center ? *star_center : default_star_center(model);
  LevelSetup setup;
  setup.c = c;
  setup.c1 = c1;
  setup.d1 = d1;
  setup.orbit_c = trace_level(model, cfg, c, z0, options);
  setup.orbit_c1 = trace_level(model, cfg, c1, z0, options);
  setup.orbit_d1 = trace_level(model, cfg, d1, z0, options);
  const double t0 = setup.orbit_c1.period;
  const double t1 = setup.orbit_c.period;
  const double t2 = setup.orbit_d1.period;
  // Differences below the period accuracy are not a direction.
  const double eps = 1e-8 * std::max({t0, t1, t2});
  if (t0 - t1 > eps && t1 - t2 > eps) {
    setup.period_direction = -1;
  } else if (t1 - t0 > eps && t2 - t1 > eps) {
    setup.period_direction = 1;
  } else {
    throw Error(ErrorKind::InvalidArgument, "period is not strictly monotone on c1 < c < d1");
  }
  return setup;
}

TwistCertificate certify_twist(const DomainModel& model, const VortexConfig& config, double c,
                               double c1, double d1, const TwistOptions& options) {
  return certify_twist(model, config, prepare_levels(model, config, c, c1, d1, {}, options.level),
                       options);
}

TwistCertificate certify_twist(const DomainModel& model, const VortexConfig& config,
                               const LevelSetup& levels, const TwistOptions& options) {
  if (options.n_boundary < 1 || options.n_theta < 1 || options.n_radius < 2 ||
      !(options.trial_b1 > 0.0) || options.halving_budget < 1) {
    throw Error(ErrorKind::InvalidArgument, "twist grids, trial radius and budget must be positive");
  }
  const VortexConfig cfg = config.normalized();
  const double T = levels.period();
  const int sigma = cfg.sigma();
  const int dir = levels.period_direction;
  GridRunner runner(model, cfg, T, options.integrator);
  const std::vector<double> thetas = jittered_angles(options.n_theta, options.seed);
  const int nr = options.n_radius;

  auto too_fast = [&](double r) {
    return std::abs(rot1_leading(cfg, T, r)) > options.max_fast_turns;
  };
  // rot2 < 1 on the level with the longer period, > 1 on the shorter one.
  auto slack_c1 = [dir](double r) { return dir < 0 ? 1.0 - r : r - 1.0; };
  auto slack_d1 = [dir](double r) { return dir < 0 ? r - 1.0 : 1.0 - r; };

  struct Rot2Check {
    Range c1;
    Range d1;
    double margin() const { return std::min(c1.margin, d1.margin); }
  };
  // Radius by radius, largest first, so a violation stops the check before
  // the expensive small radii are integrated.
  auto check_rot2 = [&](const std::vector<double>& radii) {
    Rot2Check out;
    for (double r : radii) {
      out.c1.merge(runner.run(make_samples({r}, thetas, {&levels.orbit_c1}, options.n_boundary),
                              Which::Rot2, slack_c1, true));
      if (out.c1.failed) return out;
      out.d1.merge(runner.run(make_samples({r}, thetas, {&levels.orbit_d1}, options.n_boundary),
                              Which::Rot2, slack_d1, true));
      if (out.d1.failed) return out;
    }
    return out;
  };
  const std::vector<const LevelOrbit*> annulus = {&levels.orbit_c1, &levels.orbit_c,
                                                  &levels.orbit_d1};

  TwistCertificate cert;
  cert.kappa1 = cfg.kappa1();
  cert.kappa2 = cfg.kappa2();
  cert.c = levels.c;
  cert.c1 = levels.c1;
  cert.d1 = levels.d1;
  cert.period = T;
  cert.period_direction = dir;
  cert.sigma = sigma;
  cert.n_boundary = options.n_boundary;
  cert.n_theta = options.n_theta;
  cert.n_radius = nr;
  cert.seed = options.seed;
  cert.integrator = options.integrator;
  cert.nu_margin = options.nu_margin;
  cert.max_fast_turns = options.max_fast_turns;

  double b1 = options.trial_b1;
  double best_rot2 = -kInf;
  double best_rot1 = -kInf;
  for (int b_halvings = 0;; ++b_halvings, b1 *= 0.5) {
    if (b_halvings > options.halving_budget || too_fast(b1 / nr)) {
      throw Error(ErrorKind::CannotCertify, "rot2 inequalities fail on every sampled b1",
                  best_rot2, "rot2");
    }
    // (i) rot2 on both boundary levels for |w1| in (0, b1].
    std::vector<double> radii;
    for (int j = 0; j < nr; ++j) radii.push_back(b1 * (nr - j) / nr);
    const Rot2Check outer = check_rot2(radii);
    best_rot2 = std::max(best_rot2, outer.margin());
    if (!(outer.margin() > 0.0)) continue;

    // (ii) nu just beyond rot1 on |w1| = b1.
    const Range r_outer = runner.run(make_samples({b1}, thetas, annulus, options.n_boundary),
                                     Which::Rot1, [](double) { return 1.0; }, false);
    if (!std::isfinite(r_outer.min) || r_outer.margin == -kInf) continue;
    const int nu = sigma > 0 ? static_cast<int>(std::ceil(r_outer.max + options.nu_margin))
                             : static_cast<int>(std::floor(r_outer.min - options.nu_margin));

    // (iii) a1 with rot1 beyond nu, pre-screened by the angular-rate bound.
    double a1 = 0.5 * b1;
    Range r_inner;
    double f_min = kInf;
    bool inner_ok = false;
    for (int a_halvings = 1; a_halvings <= options.halving_budget; ++a_halvings, a1 *= 0.5) {
      if (too_fast(a1)) break;
      f_min = kInf;
      for (const LevelOrbit* level : annulus) {
        for (const Point2& p : boundary_points(*level, options.n_boundary)) {
          for (double th : thetas) {
            f_min = std::min(f_min, sigma * angular_rate_f(model, cfg, a1, norm(p), th, arg(p)));
          }
        }
      }
      if (!(f_min > 2.0 * kPi * std::abs(nu) / T)) continue;
      r_inner = runner.run(make_samples({a1}, thetas, annulus, options.n_boundary), Which::Rot1,
                           [&](double r) { return sigma * (r - nu); }, true);
      best_rot1 = std::max(best_rot1, r_inner.margin);
      if (!r_inner.failed) {
        inner_ok = true;
        cert.a1_halvings = a_halvings;
        break;
      }
    }
    if (!inner_ok) {
      throw Error(ErrorKind::CannotCertify, "rot1 does not pass nu on any sampled a1", best_rot1,
                  "rot1");
    }

    // (iv) rot2 again on geometric radii spanning [a1, b1].
    radii.clear();
    for (int j = 0; j < nr; ++j) radii.push_back(a1 * std::pow(b1 / a1, double(j) / (nr - 1)));
    std::reverse(radii.begin(), radii.end());
    const Rot2Check full = check_rot2(radii);
    best_rot2 = std::max(best_rot2, std::min(outer.margin(), full.margin()));
    if (!(full.margin() > 0.0)) continue;

    cert.a1 = a1;
    cert.b1 = b1;
    cert.nu = nu;
    cert.b1_halvings = b_halvings;
    cert.rot1_inner_min = r_inner.min;
    cert.rot1_inner_max = r_inner.max;
    cert.rot1_outer_min = r_outer.min;
    cert.rot1_outer_max = r_outer.max;
    cert.margin_rot1_inner = r_inner.margin;
    cert.margin_rot1_outer = sigma > 0 ? nu - r_outer.max : r_outer.min - nu;
    cert.rot2_c1_min = std::min(outer.c1.min, full.c1.min);
    cert.rot2_c1_max = std::max(outer.c1.max, full.c1.max);
    cert.rot2_d1_min = std::min(outer.d1.min, full.d1.min);
    cert.rot2_d1_max = std::max(outer.d1.max, full.d1.max);
    cert.margin_rot2_c1 = std::min(outer.c1.margin, full.c1.margin);
    cert.margin_rot2_d1 = std::min(outer.d1.margin, full.d1.margin);
    cert.f_inner_min = f_min;
    cert.integrations = runner.integrations();
    return cert;
  }
}

}  // namespace pvortex
