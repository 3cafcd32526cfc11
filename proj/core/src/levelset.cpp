#include "pvortex/levelset.hpp"

#include <algorithm>
#include <cmath>

#include "pvortex/error.hpp"

namespace pvortex {

namespace {

// Solves h(z0 + t e) = c for t > 0: bracket expansion, then Newton steps
// kept inside the bracket with bisection as fallback.
double ray_root(const DomainModel& model, Point2 z0, Point2 e, double c, double theta) {
  auto f = [&](double t) {
    const Point2 z = z0 + t * e;
    if (!model.inside(z)) return std::numeric_limits<double>::infinity();
    const double v = model.h(z) - c;
    return std::isnan(v) ? std::numeric_limits<double>::infinity() : v;
  };
  if (!(f(0.0) < 0.0)) {
    throw Error(ErrorKind::RayRootNotBracketed, "level lies below h at the star center", theta);
  }
  double lo = 0.0;
  double hi = 0.1 * (1.0 + norm(z0));
  int expansions = 0;
  while (f(hi) < 0.0) {
    lo = hi;
    hi *= 2.0;
    if (++expansions > 60) {
      throw Error(ErrorKind::RayRootNotBracketed, "no sign change along the ray", theta);
    }
  }
  double t = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    const double ft = f(t);
    if (ft < 0.0) {
      lo = t;
    } else {
      hi = t;
    }
    if (std::abs(ft) <= 1e-15 * (1.0 + std::abs(c)) || hi - lo <= 1e-15 * (1.0 + hi)) break;
    const double slope = dot(model.grad_h(z0 + t * e), e);
    const double newton = t - ft / slope;
    t = (std::isfinite(newton) && newton > lo && newton < hi) ? newton : 0.5 * (lo + hi);
  }
  return t;
}

// +1 / -1 when consecutive values strictly increase / decrease by more than
// 1e-10, 0 otherwise (including fewer than two values).
int strict_direction(const std::vector<double>& v) {
  int sign = 0;
  for (std::size_t i = 1; i < v.size(); ++i) {
    const double d = v[i] - v[i - 1];
    const int s = d > 1e-10 ? 1 : (d < -1e-10 ? -1 : 0);
    if (s == 0 || (sign != 0 && s != sign)) return 0;
    sign = s;
  }
  return sign;
}

}  // namespace

Point2 LevelOrbit::position(double t) const {
  double tm = std::fmod(t, period);
  if (tm < 0.0) tm += period;
  const StateVec<2> y = path.at(std::min(tm, path.t_end()));
  return {y[0], y[1]};
}

Point2 default_star_center(const DomainModel& model) {
  return harmonic_center(model, {0.0, 0.0}).z0;
}

LevelOrbit trace_level(const DomainModel& model, const VortexConfig& config, double c,
                       std::optional<Point2> star_center, const LevelOptions& options) {
  return trace_level(model, config.kappa_sum(), c, star_center, options);
}

LevelOrbit trace_level(const DomainModel& model, double kappa, double c,
                       std::optional<Point2> star_center, const LevelOptions& options) {
  if (options.n_samples < 3) {
    throw Error(ErrorKind::InvalidArgument, "trace_level needs at least 3 samples");
  }
  if (!std::isfinite(c)) throw Error(ErrorKind::InvalidArgument, "level must be finite", c);

  LevelOrbit orbit;
  orbit.c = c;
  orbit.kappa = kappa;
  orbit.star_center = star_center ? *star_center : default_star_center(model);
  const Point2 z0 = orbit.star_center;

  orbit.star_margin = 1.0;
  for (int i = 0; i < options.n_samples; ++i) {
    const double theta = 2.0 * kPi * i / options.n_samples;
    const double r = ray_root(model, z0, unit(theta), c, theta);
    const Point2 z = z0 + r * unit(theta);
    const Point2 grad = model.grad_h(z);
    if (!(norm(grad) >= 1e-10)) {
      throw Error(ErrorKind::GradientVanishes, "grad h vanishes on the level", theta);
    }
    orbit.angles.push_back(theta);
    orbit.radii.push_back(r);
    orbit.samples.push_back(z);
    orbit.sample_level_error = std::max(orbit.sample_level_error, std::abs(model.h(z) - c));
    orbit.star_margin = std::min(orbit.star_margin, dot(grad, z - z0) / (norm(grad) * r));
  }

  System<2> sys = center_system(model, kappa);
  const Point2 start = orbit.samples.front();
  const Point2 v0 = -kappa * apply_J(model.grad_h(start));
  const double rate0 = cross(start - z0, v0) / norm2(start - z0);
  if (!(std::abs(rate0) >= 1e-8)) {
    throw Error(ErrorKind::NonTransversal, "center motion is not transversal to the ray", rate0);
  }
  orbit.orientation = rate0 > 0.0 ? 1 : -1;
  const double estimate = 2.0 * kPi / std::abs(rate0);

  IntegratorSettings settings = options.integrator;
  settings.max_step = std::min(settings.max_step, estimate / 32.0);
  settings.store_dense = true;
  orbit.integrator = settings;

  // Stop once the lifted angle passed a full turn plus an eighth.
  double acc = 0.0;
  double prev = arg(start - z0);
  const std::function<bool(const Trajectory<2>&)> stop = [&](const Trajectory<2>& tr) {
    const StateVec<2>& y = tr.states.back();
    const double a = arg(Point2{y[0], y[1]} - z0);
    acc += std::remainder(a - prev, 2.0 * kPi);
    prev = a;
    return std::abs(acc) > 2.0 * kPi + kPi / 4.0;
  };
  orbit.path = integrate(sys, StateVec<2>{start.x, start.y}, 0.0, 1000.0 * estimate, settings, stop);

  auto project = [](const StateVec<2>& y) { return Point2{y[0], y[1]}; };
  auto velocity = [&sys](const StateVec<2>& y) {
    const StateVec<2> f = sys.field(y);
    return Point2{f[0], f[1]};
  };
  const auto crossings = section_crossings(orbit.path, Ray{z0, start - z0}, project, velocity);
  bool found = false;
  for (const Crossing& cr : crossings) {
    if (cr.t > 1e-6 * estimate && cr.orientation == orbit.orientation) {
      orbit.period = cr.t;
      found = true;
      break;
    }
  }
  if (!found) {
    throw Error(ErrorKind::NoConvergence, "center motion did not return to the section",
                orbit.path.t_end());
  }

  const AngleLift lift = lift_angle(orbit.path, project, z0);
  orbit.winding = static_cast<int>(std::lround(std::abs(lift.increment()) / (2.0 * kPi)));
  for (const StateVec<2>& y : orbit.path.states) {
    orbit.orbit_level_error = std::max(orbit.orbit_level_error, std::abs(model.h(project(y)) - c));
  }
  return orbit;
}

PeriodTable period_function(const DomainModel& model, const VortexConfig& config,
                            const std::vector<double>& c_grid, std::optional<Point2> star_center,
                            const LevelOptions& options) {
  PeriodTable table;
  table.integrator = options.integrator;
  const Point2 z0 = star_center ? *star_center : default_star_center(model);
  for (double c : c_grid) {
    table.c.push_back(c);
    table.period.push_back(trace_level(model, config, c, z0, options).period);
  }
  table.direction = strict_direction(table.period);
  table.monotone = table.direction != 0;
  return table;
}

double hessian_period_limit(const DomainModel& model, const VortexConfig& config, Point2 z0) {
  const SymMat2 hess = model.hess_h(z0);
  if (!hess.positive_definite()) {
    throw Error(ErrorKind::NotPositiveDefinite, "h'' is not positive definite at z0", hess.det());
  }
  return 2.0 * kPi / (std::abs(config.kappa_sum()) * std::sqrt(hess.det()));
}

AssumptionCertificate certify_assumption(const DomainModel& model, const VortexConfig& config,
                                         double c, double c0, double d0,
                                         std::optional<Point2> star_center, int grid_size,
                                         double margin_floor, const LevelOptions& options) {
  if (!(c0 < c && c < d0)) {
    throw Error(ErrorKind::InvalidArgument, "certify_assumption needs c0 < c < d0");
  }
  if (grid_size < 2) throw Error(ErrorKind::InvalidArgument, "grid needs at least 2 levels");

  AssumptionCertificate cert;
  cert.c = c;
  cert.c0 = c0;
  cert.d0 = d0;
  cert.margin_floor = margin_floor;
  cert.integrator = options.integrator;
  cert.star_center = star_center ? *star_center : default_star_center(model);
  for (int i = 0; i < grid_size; ++i) {
    cert.grid.push_back(c0 + (d0 - c0) * i / (grid_size - 1));
  }
  cert.grid.push_back(c);
  std::sort(cert.grid.begin(), cert.grid.end());
  cert.grid.erase(std::unique(cert.grid.begin(), cert.grid.end(),
                              [](double a, double b) { return std::abs(a - b) <= 1e-14; }),
                  cert.grid.end());

  cert.min_margin = 1.0;
  for (double level : cert.grid) {
    const LevelOrbit orbit = trace_level(model, config, level, cert.star_center, options);
    cert.period.push_back(orbit.period);
    cert.star_margin.push_back(orbit.star_margin);
    cert.min_margin = std::min(cert.min_margin, orbit.star_margin);
  }
  cert.direction = strict_direction(cert.period);
  cert.monotone = cert.direction != 0;
  cert.positive = cert.monotone && cert.min_margin > margin_floor;
  return cert;
}

}  // namespace pvortex
