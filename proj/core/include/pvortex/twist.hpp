#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>

#include "pvortex/levelset.hpp"

namespace pvortex {

struct RotationNumbers {
  double rot1 = 0.0;
  double rot2 = 0.0;
};

/// rot_i = (arg W_i(T) - arg w_i) / 2 pi with continuous arguments; W2 is
/// measured around `star_center`. Needs a normalized configuration.
RotationNumbers rotation_numbers(const DomainModel& model, const VortexConfig& config,
                                 const WState& w, double T, Point2 star_center,
                                 const IntegratorSettings& settings = {});
double rot1(const DomainModel& model, const VortexConfig& config, const WState& w, double T,
            const IntegratorSettings& settings = {});
double rot2(const DomainModel& model, const VortexConfig& config, const WState& w, double T,
            Point2 star_center, const IntegratorSettings& settings = {});

/// Leading-order fast rotation kappa1 kappa2 T / (2 pi^2 |w1|^2) of a normalized pair.
double rot1_leading(const VortexConfig& config, double T, double r1);

/// The three traced levels the twist is certified on.
struct LevelSetup {
  double c = 0.0;
  double c1 = 0.0;
  double d1 = 0.0;
  LevelOrbit orbit_c;
  LevelOrbit orbit_c1;
  LevelOrbit orbit_d1;
  /// -1 when T(c1) > T(c) > T(d1), +1 when increasing. InvalidArgument otherwise.
  int period_direction = 0;
  double period() const { return orbit_c.period; }
};

/// Traces C_c, C_c1, C_d1 for the normalized configuration.
LevelSetup prepare_levels(const DomainModel& model, const VortexConfig& config, double c,
                          double c1, double d1, std::optional<Point2> star_center = std::nullopt,
                          const LevelOptions& options = {});

struct TwistOptions {
  double trial_b1 = 0.2;
  int n_boundary = 16;
  int n_theta = 8;
  int n_radius = 4;
  int halving_budget = 40;
  /// Required distance between nu and the sampled rot1 on |w1| = b1.
  double nu_margin = 0.05;
  /// Radii whose leading fast rotation exceeds this many turns over T are not
  /// sampled; halving stops there.
  double max_fast_turns = 1e5;
  /// Seeds the jitter of the theta1 grid.
  std::uint64_t seed = 0;
  IntegratorSettings integrator{1e-10, 1e-12};
  LevelOptions level;
};

struct TwistCertificate {
  double kappa1 = 0.0;
  double kappa2 = 0.0;
  double c = 0.0;
  double c1 = 0.0;
  double d1 = 0.0;
  double period = 0.0;
  int period_direction = 0;
  double a1 = 0.0;
  double b1 = 0.0;
  int nu = 0;
  int sigma = 0;
  double rot1_inner_min = 0.0;
  double rot1_inner_max = 0.0;
  double rot1_outer_min = 0.0;
  double rot1_outer_max = 0.0;
  double rot2_c1_min = 0.0;
  double rot2_c1_max = 0.0;
  double rot2_d1_min = 0.0;
  double rot2_d1_max = 0.0;
  /// Minimum over sampled states of the signed slack of each inequality.
  double margin_rot1_inner = 0.0;
  double margin_rot1_outer = 0.0;
  double margin_rot2_c1 = 0.0;
  double margin_rot2_d1 = 0.0;
  /// min over the inner grid of sigma f, compared with 2 pi |nu| / T.
  double f_inner_min = 0.0;
  int n_boundary = 0;
  int n_theta = 0;
  int n_radius = 0;
  std::uint64_t seed = 0;
  int b1_halvings = 0;
  int a1_halvings = 0;
  long integrations = 0;
  double nu_margin = 0.0;
  double max_fast_turns = 0.0;
  IntegratorSettings integrator;

  std::array<double, 4> margins() const {
    return {margin_rot1_inner, margin_rot1_outer, margin_rot2_c1, margin_rot2_d1};
  }
  bool positive() const {
    return margin_rot1_inner > 0.0 && margin_rot1_outer > 0.0 && margin_rot2_c1 > 0.0 &&
           margin_rot2_d1 > 0.0;
  }
};

/// Shrinks b1 until the rot2 inequalities hold on both boundary levels,
/// picks nu just beyond rot1 on |w1| = b1, shrinks a1 until rot1 passes nu
/// on |w1| = a1, then rechecks rot2 on [a1, b1]. All quantities refer to the
/// normalized configuration.
///
/// Errors: CannotCertify with stage() in {"rot2", "rot1"} and value() the
/// best margin seen; InvalidArgument unless c1 < c < d1.
TwistCertificate certify_twist(const DomainModel& model, const VortexConfig& config, double c,
                               double c1, double d1, const TwistOptions& options = {});

/// Same on precomputed levels. The levels may come from another model; this
/// is how degenerate models without traceable levels are exercised.
TwistCertificate certify_twist(const DomainModel& model, const VortexConfig& config,
                               const LevelSetup& levels, const TwistOptions& options = {});

}  // namespace pvortex
