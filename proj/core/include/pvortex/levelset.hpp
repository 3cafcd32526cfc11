#pragma once

#include <optional>
#include <vector>

#include "pvortex/domain.hpp"
#include "pvortex/dynamics.hpp"
#include "pvortex/flow.hpp"

namespace pvortex {

/// A traced level line of h together with the periodic center motion on it.
struct LevelOrbit {
  double c = 0.0;
  Point2 star_center;
  /// Ray angles, radii r(theta) and points star_center + r e(theta).
  std::vector<double> angles;
  std::vector<double> radii;
  std::vector<Point2> samples;
  /// Minimal period of dz/dt = -kappa J grad h on the level (first return).
  double period = 0.0;
  /// kappa used for the center motion (kappa1 + kappa2 of the config).
  double kappa = 0.0;
  /// +1 counter-clockwise around the star center, -1 clockwise.
  int orientation = 0;
  /// Winding of the center motion over one period.
  int winding = 0;
  /// min over samples of <grad h, z - z0*> / (|grad h| |z - z0*|); 1 on circles.
  double star_margin = 0.0;
  /// max |h - c| over the samples and over the integrated period.
  double sample_level_error = 0.0;
  double orbit_level_error = 0.0;
  /// Center motion from samples.front(), integrated slightly past one period.
  Trajectory<2> path;
  IntegratorSettings integrator;

  /// Point of the periodic center motion at time t (any real t).
  Point2 position(double t) const;
};

struct LevelOptions {
  int n_samples = 64;
  IntegratorSettings integrator{1e-12, 1e-14};
};

/// Traces the component of h = c that is star-shaped around `star_center`
/// (default: the harmonic center found from the origin).
///
/// Errors: RayRootNotBracketed (value() = ray angle), GradientVanishes,
/// NonTransversal, and integration errors.
LevelOrbit trace_level(const DomainModel& model, const VortexConfig& config, double c,
                       std::optional<Point2> star_center = std::nullopt,
                       const LevelOptions& options = {});

/// Same, for center motion with strength `kappa`.
LevelOrbit trace_level(const DomainModel& model, double kappa, double c,
                       std::optional<Point2> star_center = std::nullopt,
                       const LevelOptions& options = {});

struct PeriodTable {
  std::vector<double> c;
  std::vector<double> period;
  /// Consecutive differences all of one sign and larger than 1e-10.
  bool monotone = false;
  /// +1 increasing, -1 decreasing, 0 when not monotone.
  int direction = 0;
  IntegratorSettings integrator;
};

PeriodTable period_function(const DomainModel& model, const VortexConfig& config,
                            const std::vector<double>& c_grid,
                            std::optional<Point2> star_center = std::nullopt,
                            const LevelOptions& options = {});

/// 2 pi / (|kappa1 + kappa2| sqrt(det h''(z0))). NotPositiveDefinite otherwise.
double hessian_period_limit(const DomainModel& model, const VortexConfig& config, Point2 z0);

struct AssumptionCertificate {
  double c = 0.0;
  double c0 = 0.0;
  double d0 = 0.0;
  Point2 star_center;
  std::vector<double> grid;
  std::vector<double> period;
  std::vector<double> star_margin;
  bool monotone = false;
  int direction = 0;
  double min_margin = 0.0;
  double margin_floor = 1e-3;
  /// All margins above the floor and T strictly monotone on the grid.
  bool positive = false;
  IntegratorSettings integrator;
};

/// Samples the strict star-shape and period monotonicity hypothesis on
/// `grid_size` equispaced levels of [c0, d0] plus c itself. A negative report
/// is a result, not an error. InvalidArgument unless c0 < c < d0.
AssumptionCertificate certify_assumption(const DomainModel& model, const VortexConfig& config,
                                         double c, double c0, double d0,
                                         std::optional<Point2> star_center = std::nullopt,
                                         int grid_size = 9, double margin_floor = 1e-3,
                                         const LevelOptions& options = {});

/// Default star center: harmonic center searched from the origin.
Point2 default_star_center(const DomainModel& model);

}  // namespace pvortex
