#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pvortex/twist.hpp"

namespace pvortex {

/// Downsampled series along a periodic orbit.
struct OrbitDiagnostics {
  std::vector<double> t;
  /// Center of vorticity C(t) and difference D(t) = z1 - z2.
  std::vector<Point2> center;
  std::vector<Point2> difference;
  /// Lifted argument of w1 and |w1(0)|^2 times its rate.
  std::vector<double> theta;
  std::vector<double> scaled_rate;
};

struct PeriodicOrbit {
  double kappa1 = 0.0;
  double kappa2 = 0.0;
  int sigma = 0;
  double c = 0.0;
  double period = 0.0;
  WState w0;
  /// |flow_map(w0, T) - w0|.
  double residual = 0.0;
  double tolerance = 0.0;
  int iterations = 0;
  double energy = 0.0;
  /// max |H1(t) - H1(0)| / (1 + |H1(0)|) over the nodes of one period.
  double energy_drift = 0.0;
  double rot1 = 0.0;
  double rot2 = 0.0;
  int nu_measured = 0;
  int center_winding = 0;
  /// |z1(0) - z2(0)| and |w1(0)|.
  double d0 = 0.0;
  double r1 = 0.0;
  double action = 0.0;
  /// Action with half the quadrature nodes, for the refinement check.
  double action_coarse = 0.0;
  /// |flow_map(w0, T/p) - w0| for p = 2..12.
  std::vector<double> subperiod_distance;
  double min_subperiod_distance = 0.0;
  OrbitDiagnostics diagnostics;
  IntegratorSettings integrator;
  Point2 star_center;
  /// Dense trajectory over [0, T] (not serialized).
  Trajectory<4> trajectory;
};

struct RefineOptions {
  double tol = 1e-9;
  int max_iterations = 30;
  int max_halvings = 8;
  IntegratorSettings integrator{1e-12, 1e-14};
  /// Also fix the phase along simultaneous rotations when the model is
  /// rotationally symmetric.
  bool rotation_phase = true;
  int diagnostic_samples = 256;
};

/// Slow center at the start of C_c plus a fast pair whose leading rotation
/// number over T(c) equals nu: |w1|^2 = kappa1 kappa2 T / (2 pi^2 nu), theta1 = 0.
/// InvalidArgument if sgn(nu) != sigma; SeparationOutOfRange unless 0 < |w1| < b1.
WState seed_orbit(const DomainModel& model, const VortexConfig& config,
                  const TwistCertificate& cert, const LevelOrbit& level_c, int nu);

/// Rescales |w1| of a seed by sqrt(rot1 / nu) with rot1 measured over T,
/// until |rot1 - nu| < 0.25 or `max_rounds` is reached. The leading-order
/// seed is off by an O(1) number of turns; Gauss-Newton then locks onto the
/// neighbouring index.
WState lock_seed_index(const DomainModel& model, const VortexConfig& config, const WState& seed,
                       double T, int nu, const IntegratorSettings& settings = {},
                       int max_rounds = 6);

/// Gauss-Newton on [flow_map(w, T) - w; phase conditions] starting at `guess`.
/// Errors: SingularJacobian, NoDecrease (after max_halvings), BudgetExceeded.
PeriodicOrbit refine_orbit(const DomainModel& model, const VortexConfig& config,
                           const WState& guess, double T, Point2 star_center,
                           const RefineOptions& options = {});

/// Action 1/2 sum_j kappa_j int <dz_j/dt, J z_j> dt - int H dt over one period
/// of `traj`, by Gauss-Legendre quadrature with `nodes` points per step.
double action(const DomainModel& model, const VortexConfig& config, const Trajectory<4>& traj,
              int nodes = 8);

/// Gauss-Legendre nodes on [-1, 1] and weights (Golub-Welsch).
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

struct FamilyMember {
  int nu = 0;
  bool converged = false;
  std::string error;
  /// Leading-order seed, and the seed after index locking.
  WState seed;
  WState locked_seed;
  double seed_residual = 0.0;
  std::optional<PeriodicOrbit> orbit;
};

struct FamilyReport {
  double c = 0.0;
  double period = 0.0;
  std::vector<FamilyMember> members;
  std::vector<const PeriodicOrbit*> converged() const;
};

/// Seeds and refines one orbit per nu (sorted by |nu|); failures are recorded.
FamilyReport sweep_family(const DomainModel& model, const VortexConfig& config,
                          const TwistCertificate& cert, const LevelOrbit& level_c,
                          std::vector<int> nu_list, const RefineOptions& options = {});

struct VerificationReport {
  int sigma = 0;
  double kappa_product = 0.0;
  std::vector<int> nu;
  std::vector<double> d0;
  std::vector<double> r1;
  /// Phase-aligned sup_t |C(t) - Z(t)| against the level motion.
  std::vector<double> center_error;
  std::vector<double> separation_sup;
  /// max_t | |w1(0)|^2 dtheta1/dt - k1 k2 / pi | and the same for the z-frame
  /// difference, d0^2 dtheta_D/dt against (k1 + k2) / pi.
  std::vector<double> rate_error;
  std::vector<double> rate_error_z;
  std::vector<double> rot1;
  std::vector<double> rot1_leading;
  std::vector<double> action;
  /// max | |u(s)| - 1 | for the rescaled difference u(s) = D(d0^2 s) / d0.
  std::vector<double> u_deviation;

  bool center_decreasing = false;
  bool separation_decreasing = false;
  bool rate_decreasing = false;
  double rate_final_relative = 0.0;
  double center_ratio = 0.0;
  double separation_ratio = 0.0;
  double rot1_max_relative_error = 0.0;
  /// Index from which action differences all have sign -sigma (-1 if never).
  int action_monotone_from = -1;
  int action_divergence_sign = 0;
  double u_deviation_smallest = 0.0;
};

/// Checks the asymptotics on the converged members (InsufficientFamily below 3).
VerificationReport verify_theorem(const FamilyReport& family, const LevelOrbit& level_c);

/// Rotation generator of simultaneous rotations in w coordinates.
WState rotation_generator(const VortexConfig& config, const WState& w);

}  // namespace pvortex
