#include "pvortex/orbits.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

#include "pvortex/error.hpp"
#include "pvortex/parallel.hpp"

namespace pvortex {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double distance(const WVec& a, const WVec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < 4; ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

WVec unit_vec(const WVec& v) {
  const double n = distance(v, WVec{});
  if (!(n > 0.0)) throw Error(ErrorKind::SingularJacobian, "phase direction vanishes");
  return {v[0] / n, v[1] / n, v[2] / n, v[3] / n};
}

double dot4(const WVec& a, const WVec& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3];
}

bool strictly_decreasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (!(v[i] < v[i - 1])) return false;
  }
  return true;
}

// Nodes plus three interior points per step.
std::vector<double> fine_times(const Trajectory<4>& traj) {
  std::vector<double> out;
  for (std::size_t i = 0; i + 1 < traj.times.size(); ++i) {
    const double a = traj.times[i];
    const double h = traj.times[i + 1] - a;
    for (int k = 0; k < 4; ++k) out.push_back(a + 0.25 * k * h);
  }
  out.push_back(traj.t_end());
  return out;
}

PeriodicOrbit make_record(const DomainModel& model, const VortexConfig& config, const WState& w0,
                          double T, Point2 star_center, const RefineOptions& options) {
  PeriodicOrbit orbit;
  orbit.kappa1 = config.kappa1();
  orbit.kappa2 = config.kappa2();
  orbit.sigma = config.sigma();
  orbit.period = T;
  orbit.w0 = w0;
  orbit.tolerance = options.tol;
  orbit.integrator = options.integrator;
  orbit.star_center = star_center;

  IntegratorSettings settings = options.integrator;
  settings.store_dense = true;
  orbit.trajectory = integrate(w_system(model, config), pack(w0), 0.0, T, settings);
  const Trajectory<4>& traj = orbit.trajectory;

  orbit.residual = distance(traj.final_state(), pack(w0));
  orbit.energy = traj.energy.front();
  orbit.energy_drift = traj.energy_drift() / (1.0 + std::abs(orbit.energy));

  const WLifts lifts = lift_angles(traj, star_center);
  orbit.rot1 = lifts.theta1.rotation_number();
  orbit.rot2 = lifts.theta2.rotation_number();
  orbit.nu_measured = static_cast<int>(std::lround(orbit.rot1));
  orbit.center_winding = static_cast<int>(std::lround(orbit.rot2));

  const PairState z0 = from_w(config, w0);
  orbit.d0 = norm(z0.z1 - z0.z2);
  orbit.r1 = norm(w0.w1);

  orbit.min_subperiod_distance = kInf;
  for (int p = 2; p <= 12; ++p) {
    const double d = distance(traj.at(T / p), pack(w0));
    orbit.subperiod_distance.push_back(d);
    orbit.min_subperiod_distance = std::min(orbit.min_subperiod_distance, d);
  }

  orbit.action = action(model, config, traj, 8);
  orbit.action_coarse = action(model, config, traj, 4);

  const int n = std::max(2, options.diagnostic_samples);
  const double r1_sq = orbit.r1 * orbit.r1;
  for (int k = 0; k < n; ++k) {
    const double t = T * k / (n - 1);
    const std::size_t seg = traj.segment_index(t);
    const WState w = unpack_w(traj.at(t));
    const WState wdot = unpack_w(traj.derivative_at(t));
    const PairState z = from_w(config, w);
    // Lift at t from the node that starts the step (increments below pi/2).
    const Point2 node_w1{traj.states[seg][0], traj.states[seg][1]};
    const double theta =
        lifts.theta1.theta[seg] + std::remainder(arg(w.w1) - arg(node_w1), 2.0 * kPi);
    orbit.diagnostics.t.push_back(t);
    orbit.diagnostics.center.push_back(center_of_vorticity(config, z));
    orbit.diagnostics.difference.push_back(z.z1 - z.z2);
    orbit.diagnostics.theta.push_back(theta);
    orbit.diagnostics.scaled_rate.push_back(r1_sq * cross(w.w1, wdot.w1) / norm2(w.w1));
  }
  return orbit;
}

}  // namespace

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "Gauss-Legendre needs n >= 1");
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    const double beta = k / std::sqrt(4.0 * k * k - 1.0);
    jacobi(k, k - 1) = beta;
    jacobi(k - 1, k) = beta;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(jacobi);
  nodes.assign(eig.eigenvalues().data(), eig.eigenvalues().data() + n);
  weights.resize(n);
  for (int k = 0; k < n; ++k) {
    const double v = eig.eigenvectors()(0, k);
    weights[k] = 2.0 * v * v;
  }
}

WState rotation_generator(const VortexConfig& config, const WState& w) {
  const PairState z = from_w(config, w);
  return to_w(config, {rot90(z.z1), rot90(z.z2)});
}

WState seed_orbit(const DomainModel&, const VortexConfig& config, const TwistCertificate& cert,
                  const LevelOrbit& level_c, int nu) {
  const VortexConfig cfg = config.normalized();
  if (nu == 0 || (nu > 0) != (cfg.sigma() > 0)) {
    throw Error(ErrorKind::InvalidArgument, "nu must be nonzero with the sign of kappa1 kappa2",
                nu);
  }
  const double r1_sq = cfg.kappa_product() * cert.period / (2.0 * kPi * kPi * nu);
  const double r1 = std::sqrt(r1_sq);
  if (!(r1 > 0.0 && r1 < cert.b1)) {
    throw Error(ErrorKind::SeparationOutOfRange, "seed radius outside (0, b1)", r1);
  }
  return {{r1, 0.0}, level_c.samples.front()};
}

WState lock_seed_index(const DomainModel& model, const VortexConfig& config, const WState& seed,
                       double T, int nu, const IntegratorSettings& settings, int max_rounds) {
  WState w = seed;
  for (int round = 0; round < max_rounds; ++round) {
    const double measured = rot1(model, config, w, T, settings);
    if (std::abs(measured - nu) < 0.25) break;
    if (!(measured / nu > 0.0)) {
      throw Error(ErrorKind::SeparationOutOfRange, "seed rotates against the requested index",
                  measured);
    }
    w.w1 = w.w1 * std::sqrt(measured / nu);
  }
  return w;
}

double action(const DomainModel& model, const VortexConfig& config, const Trajectory<4>& traj,
              int nodes) {
  if (traj.segments.empty()) {
    throw Error(ErrorKind::InvalidArgument, "action needs a dense trajectory");
  }
  std::vector<double> x;
  std::vector<double> wts;
  gauss_legendre(nodes, x, wts);
  const double k1 = config.kappa1();
  const double k2 = config.kappa2();
  double total = 0.0;
  for (const DenseSegment<4>& seg : traj.segments) {
    double part = 0.0;
    for (int k = 0; k < nodes; ++k) {
      const double t = seg.t0 + 0.5 * (x[k] + 1.0) * seg.h;
      const PairState z = from_w(config, unpack_w(seg.eval(t)));
      const PairState v = z_field(model, config, z);
      const double kinetic =
          0.5 * (k1 * dot(v.z1, apply_J(z.z1)) + k2 * dot(v.z2, apply_J(z.z2)));
      part += wts[k] * (kinetic - eval_H(model, config, z));
    }
    total += 0.5 * seg.h * part;
  }
  return total;
}

PeriodicOrbit refine_orbit(const DomainModel& model, const VortexConfig& config,
                           const WState& guess, double T, Point2 star_center,
                           const RefineOptions& options) {
  if (!config.is_normalized()) {
    throw Error(ErrorKind::NotNormalized, "orbit search runs on kappa1 + kappa2 = 1",
                config.kappa_sum());
  }
  if (!(T > 0.0) || !(options.tol > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "period and tolerance must be positive");
  }
  const System<4> sys = w_system(model, config);
  const WVec g = pack(guess);
  std::vector<WVec> phases{unit_vec(sys.field(g))};
  if (options.rotation_phase && model.rotationally_symmetric()) {
    phases.push_back(unit_vec(pack(rotation_generator(config, guess))));
  }
  const int m = 4 + static_cast<int>(phases.size());
  IntegratorSettings settings = options.integrator;
  settings.store_dense = false;

  // Returns the bordered residual; periodicity part norm in *gap.
  auto residual = [&](const WVec& w, double* gap) {
    Eigen::VectorXd r(m);
    const WVec image = flow_map(sys, w, T, settings);
    for (int i = 0; i < 4; ++i) r(i) = image[i] - w[i];
    for (std::size_t j = 0; j < phases.size(); ++j) {
      WVec d;
      for (int i = 0; i < 4; ++i) d[i] = w[i] - g[i];
      r(4 + static_cast<int>(j)) = dot4(d, phases[j]);
    }
    if (gap) *gap = r.head(4).norm();
    return r;
  };

  WVec w = g;
  double gap = 0.0;
  Eigen::VectorXd r = residual(w, &gap);
  int it = 0;
  for (; gap > options.tol; ++it) {
    if (it >= options.max_iterations) {
      throw Error(ErrorKind::BudgetExceeded, "Gauss-Newton iteration budget exhausted", gap);
    }
    Eigen::MatrixXd jac(m, 4);
    jac.topRows(4) = flow_jacobian(sys, w, T, settings) - Eigen::Matrix4d::Identity();
    for (std::size_t j = 0; j < phases.size(); ++j) {
      for (int i = 0; i < 4; ++i) jac(4 + static_cast<int>(j), i) = phases[j][i];
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(jac, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd sv = svd.singularValues();
    if (!(sv(3) > 1e-10 * sv(0))) {
      throw Error(ErrorKind::SingularJacobian, "bordered shooting Jacobian has rank < 4",
                  sv(3) / sv(0));
    }
    const Eigen::VectorXd step = svd.solve(-r);

    double lambda = 1.0;
    bool accepted = false;
    for (int k = 0; k <= options.max_halvings; ++k, lambda *= 0.5) {
      WVec trial;
      for (int i = 0; i < 4; ++i) trial[i] = w[i] + lambda * step(i);
      double trial_gap = 0.0;
      Eigen::VectorXd trial_r;
      try {
        trial_r = residual(trial, &trial_gap);
      } catch (const Error&) {
        continue;
      }
      if (trial_r.norm() < r.norm()) {
        w = trial;
        r = trial_r;
        gap = trial_gap;
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      throw Error(ErrorKind::NoDecrease, "no residual decrease along the Gauss-Newton step", gap);
    }
  }
  PeriodicOrbit orbit = make_record(model, config, unpack_w(w), T, star_center, options);
  orbit.iterations = it;
  return orbit;
}

std::vector<const PeriodicOrbit*> FamilyReport::converged() const {
  std::vector<const PeriodicOrbit*> out;
  for (const FamilyMember& m : members) {
    if (m.converged && m.orbit) out.push_back(&*m.orbit);
  }
  return out;
}

FamilyReport sweep_family(const DomainModel& model, const VortexConfig& config,
                          const TwistCertificate& cert, const LevelOrbit& level_c,
                          std::vector<int> nu_list, const RefineOptions& options) {
  const VortexConfig cfg = config.normalized();
  std::sort(nu_list.begin(), nu_list.end(),
            [](int a, int b) { return std::abs(a) < std::abs(b); });
  FamilyReport report;
  report.c = cert.c;
  report.period = cert.period;
  report.members.resize(nu_list.size());
  detail::parallel_for(nu_list.size(), [&](std::size_t i) {
    FamilyMember& member = report.members[i];
    member.nu = nu_list[i];
    try {
      member.seed = seed_orbit(model, cfg, cert, level_c, member.nu);
      IntegratorSettings s = options.integrator;
      s.store_dense = false;
      member.seed_residual =
          distance(flow_map(w_system(model, cfg), pack(member.seed), cert.period, s),
                   pack(member.seed));
      member.locked_seed = lock_seed_index(model, cfg, member.seed, cert.period, member.nu, s);
      member.orbit = refine_orbit(model, cfg, member.locked_seed, cert.period,
                                  level_c.star_center, options);
      member.orbit->c = cert.c;
      member.converged = true;
    } catch (const Error& e) {
      member.error = e.what();
    }
  });
  return report;
}

VerificationReport verify_theorem(const FamilyReport& family, const LevelOrbit& level_c) {
  std::vector<const PeriodicOrbit*> orbits = family.converged();
  if (orbits.size() < 3) {
    throw Error(ErrorKind::InsufficientFamily, "verification needs at least 3 converged orbits",
                static_cast<double>(orbits.size()));
  }
  std::sort(orbits.begin(), orbits.end(),
            [](const PeriodicOrbit* a, const PeriodicOrbit* b) { return a->r1 > b->r1; });

  VerificationReport rep;
  const VortexConfig cfg = VortexConfig::create(orbits.front()->kappa1, orbits.front()->kappa2);
  rep.sigma = cfg.sigma();
  rep.kappa_product = cfg.kappa_product();
  const double rate_limit = cfg.kappa_product() / kPi;
  const double rate_limit_z = cfg.kappa_sum() / kPi;
  const double Tc = level_c.period;

  for (const PeriodicOrbit* o : orbits) {
    const Trajectory<4>& traj = o->trajectory;
    const std::vector<double> times = fine_times(traj);
    rep.nu.push_back(o->nu_measured);
    rep.d0.push_back(o->d0);
    rep.r1.push_back(o->r1);

    // Phase of the level motion closest to C(0): coarse scan, then golden section.
    const Point2 c0 = o->w0.w2;
    const int scan = 2048;
    double best_t = 0.0;
    double best_d = kInf;
    for (int k = 0; k < scan; ++k) {
      const double t = Tc * k / scan;
      const double d = norm(level_c.position(t) - c0);
      if (d < best_d) {
        best_d = d;
        best_t = t;
      }
    }
    double lo = best_t - Tc / scan;
    double hi = best_t + Tc / scan;
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    for (int k = 0; k < 80; ++k) {
      const double a = hi - gr * (hi - lo);
      const double b = lo + gr * (hi - lo);
      if (norm(level_c.position(a) - c0) < norm(level_c.position(b) - c0)) {
        hi = b;
      } else {
        lo = a;
      }
    }
    const double phase = 0.5 * (lo + hi);

    const double fast_period = 2.0 * kPi * kPi * o->r1 * o->r1 / std::abs(cfg.kappa_product());
    const double u_window = std::min(o->period, 10.0 * fast_period);
    double center_err = 0.0;
    double sep = 0.0;
    double rate_err = 0.0;
    double rate_err_z = 0.0;
    double u_dev = 0.0;
    for (double t : times) {
      const WState w = unpack_w(traj.at(t));
      const WState wdot = unpack_w(traj.derivative_at(t));
      const PairState z = from_w(cfg, w);
      const Point2 d = z.z1 - z.z2;
      const Point2 ddot = cfg.reflect(wdot.w1) / cfg.scale();
      center_err = std::max(center_err, norm(center_of_vorticity(cfg, z) -
                                             level_c.position(phase + t)));
      sep = std::max(sep, norm(d));
      const double rate = o->r1 * o->r1 * cross(w.w1, wdot.w1) / norm2(w.w1);
      rate_err = std::max(rate_err, std::abs(rate - rate_limit));
      const double rate_z = o->d0 * o->d0 * cross(d, ddot) / norm2(d);
      rate_err_z = std::max(rate_err_z, std::abs(rate_z - rate_limit_z));
      if (t <= u_window) u_dev = std::max(u_dev, std::abs(norm(w.w1) / o->r1 - 1.0));
    }
    rep.center_error.push_back(center_err);
    rep.separation_sup.push_back(sep);
    rep.rate_error.push_back(rate_err);
    rep.rate_error_z.push_back(rate_err_z);
    rep.rot1.push_back(o->rot1);
    rep.rot1_leading.push_back(std::abs(rot1_leading(cfg, o->period, o->r1)));
    rep.action.push_back(o->action);
    rep.u_deviation.push_back(u_dev);
  }

  rep.center_decreasing = strictly_decreasing(rep.center_error);
  rep.separation_decreasing = strictly_decreasing(rep.separation_sup);
  rep.rate_decreasing = strictly_decreasing(rep.rate_error);
  rep.rate_final_relative = rep.rate_error.back() / std::abs(rate_limit);
  rep.center_ratio = *std::min_element(rep.center_error.begin(), rep.center_error.end()) /
                     *std::max_element(rep.center_error.begin(), rep.center_error.end());
  rep.separation_ratio =
      *std::min_element(rep.separation_sup.begin(), rep.separation_sup.end()) /
      *std::max_element(rep.separation_sup.begin(), rep.separation_sup.end());
  for (std::size_t i = 0; i < rep.rot1.size(); ++i) {
    rep.rot1_max_relative_error =
        std::max(rep.rot1_max_relative_error,
                 std::abs(std::abs(rep.rot1[i]) - rep.rot1_leading[i]) / rep.rot1_leading[i]);
  }

  const std::size_t nd = rep.action.size() - 1;
  rep.action_monotone_from = -1;
  for (std::size_t k = nd; k-- > 0;) {
    const double diff = rep.action[k + 1] - rep.action[k];
    if (!(diff * -rep.sigma > 0.0)) break;
    rep.action_monotone_from = static_cast<int>(k);
  }
  const double last = rep.action[nd] - rep.action[nd - 1];
  rep.action_divergence_sign = last > 0.0 ? 1 : (last < 0.0 ? -1 : 0);
  rep.u_deviation_smallest = rep.u_deviation.back();
  return rep;
}

}  // namespace pvortex
