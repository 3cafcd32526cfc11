#pragma once

#include <Eigen/Core>
#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include "pvortex/dop853.hpp"
#include "pvortex/dynamics.hpp"
#include "pvortex/error.hpp"
#include "pvortex/geometry.hpp"

namespace pvortex {

template <std::size_t N>
using StateVec = std::array<double, N>;

struct IntegratorSettings {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  double max_step = std::numeric_limits<double>::infinity();
  long max_steps = 2'000'000;
  /// Keep the continuous extension of every step (three extra evaluations
  /// per step). Rotation numbers only need the nodes.
  bool store_dense = true;

  void validate() const {
    if (!(rel_tol > 0.0) || !(abs_tol > 0.0) || !(max_step > 0.0) || max_steps <= 0) {
      throw Error(ErrorKind::InvalidArgument, "integrator tolerances and budget must be positive");
    }
  }
};

/// Autonomous vector field with optional admissibility, energy monitor and a
/// state-dependent step cap.
template <std::size_t N>
struct System {
  std::function<StateVec<N>(const StateVec<N>&)> field;
  std::function<bool(const StateVec<N>&)> admissible;
  std::function<double(const StateVec<N>&)> energy;
  std::function<double(const StateVec<N>&)> step_cap;
};

/// Seventh-order interpolant over one accepted step [t0, t0 + h].
template <std::size_t N>
struct DenseSegment {
  double t0 = 0.0;
  double h = 0.0;
  std::array<StateVec<N>, 8> rc{};

  StateVec<N> eval(double t) const {
    const double s = (t - t0) / h;
    const double s1 = 1.0 - s;
    StateVec<N> out;
    for (std::size_t i = 0; i < N; ++i) {
      out[i] = rc[0][i] +
               s * (rc[1][i] +
                    s1 * (rc[2][i] +
                          s * (rc[3][i] +
                               s1 * (rc[4][i] + s * (rc[5][i] + s1 * (rc[6][i] + s * rc[7][i]))))));
    }
    return out;
  }

  /// Time derivative of the interpolant.
  StateVec<N> derivative(double t) const {
    const double s = (t - t0) / h;
    const double s1 = 1.0 - s;
    StateVec<N> out;
    for (std::size_t i = 0; i < N; ++i) {
      // Forward-mode differentiation of the nested form in s (ds1/ds = -1).
      double p = rc[6][i] + s * rc[7][i];
      double dp = rc[7][i];
      dp = -p + s1 * dp, p = rc[5][i] + s1 * p;
      dp = p + s * dp, p = rc[4][i] + s * p;
      dp = -p + s1 * dp, p = rc[3][i] + s1 * p;
      dp = p + s * dp, p = rc[2][i] + s * p;
      dp = -p + s1 * dp, p = rc[1][i] + s1 * p;
      dp = p + s * dp;
      out[i] = dp / h;
    }
    return out;
  }
};

template <std::size_t N>
class Trajectory {
 public:
  std::vector<double> times;
  std::vector<StateVec<N>> states;
  /// segments[i] spans [times[i], times[i + 1]] when dense output is stored.
  std::vector<DenseSegment<N>> segments;
  /// Energy per node (empty when the system has no energy monitor).
  std::vector<double> energy;
  long rejected_steps = 0;
  long evaluations = 0;
  /// Sum over accepted steps of the local error norm times the tolerance
  /// scale atol + rtol |y|_inf; a crude bound on the global error.
  double error_estimate = 0.0;

  bool has_dense() const { return !segments.empty() || times.size() <= 1; }
  double t_begin() const { return times.front(); }
  double t_end() const { return times.back(); }
  const StateVec<N>& final_state() const { return states.back(); }

  /// max |E(t_i) - E(t_0)| over the nodes.
  double energy_drift() const {
    double drift = 0.0;
    for (double e : energy) drift = std::max(drift, std::abs(e - energy.front()));
    return drift;
  }

  /// Index of the segment containing t (clamped to the ends).
  std::size_t segment_index(double t) const {
    const bool forward = times.back() >= times.front();
    auto it = forward ? std::upper_bound(times.begin(), times.end(), t)
                      : std::upper_bound(times.begin(), times.end(), t, std::greater<>());
    std::size_t idx = it == times.begin() ? 0 : static_cast<std::size_t>(it - times.begin()) - 1;
    return std::min(idx, times.size() >= 2 ? times.size() - 2 : 0);
  }

  /// Dense-output evaluation. Throws InvalidArgument without dense data or
  /// outside the integrated window.
  StateVec<N> at(double t) const {
    const double lo = std::min(t_begin(), t_end());
    const double hi = std::max(t_begin(), t_end());
    const double slack = 1e-12 * (1.0 + std::abs(hi));
    if (t < lo - slack || t > hi + slack) {
      throw Error(ErrorKind::InvalidArgument, "dense output requested outside the trajectory", t);
    }
    if (times.size() == 1) return states.front();
    if (segments.empty()) {
      throw Error(ErrorKind::InvalidArgument, "trajectory was integrated without dense output");
    }
    return segments[segment_index(t)].eval(t);
  }

  StateVec<N> derivative_at(double t) const {
    if (segments.empty()) {
      throw Error(ErrorKind::InvalidArgument, "trajectory was integrated without dense output");
    }
    return segments[segment_index(t)].derivative(t);
  }
};

namespace detail {

template <std::size_t N>
bool all_finite(const StateVec<N>& v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

template <std::size_t N>
double initial_step(const System<N>& sys, const StateVec<N>& y, const StateVec<N>& f0, double hmax,
                    double dir, const IntegratorSettings& s) {
  double dnf = 0.0;
  double dny = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    const double sk = s.abs_tol + s.rel_tol * std::abs(y[i]);
    dnf += (f0[i] / sk) * (f0[i] / sk);
    dny += (y[i] / sk) * (y[i] / sk);
  }
  double h = (dnf <= 1e-10 || dny <= 1e-10) ? 1e-6 : std::sqrt(dny / dnf) * 0.01;
  h = std::min(h, hmax);
  StateVec<N> y1;
  for (std::size_t i = 0; i < N; ++i) y1[i] = y[i] + dir * h * f0[i];
  const StateVec<N> f1 = sys.field(y1);
  double der2 = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    const double q = (f1[i] - f0[i]) / (s.abs_tol + s.rel_tol * std::abs(y[i]));
    der2 += q * q;
  }
  der2 = std::isfinite(der2) ? std::sqrt(der2) / h : 0.0;
  const double der12 = std::max(der2, std::sqrt(dnf));
  const double h1 = der12 <= 1e-15 ? std::max(1e-6, h * 1e-3) : std::pow(0.01 / der12, 0.125);
  return std::min({100.0 * h, h1, hmax});
}

}  // namespace detail

/// Adaptive DOP853 integration of `sys` from (t0, y0) to t1 (either
/// direction). `stop`, if given, is called after every accepted step and may
/// end the integration early by returning true.
///
/// Errors: StepFailure (step underflow), BudgetExceeded (max_steps),
/// DomainExit (value() = exit time) when the solution leaves the admissible set.
template <std::size_t N>
Trajectory<N> integrate(const System<N>& sys, const StateVec<N>& y0, double t0, double t1,
                        const IntegratorSettings& settings,
                        const std::function<bool(const Trajectory<N>&)>& stop = {}) {
  settings.validate();
  if (!std::isfinite(t0) || !std::isfinite(t1)) {
    throw Error(ErrorKind::InvalidArgument, "integration window must be finite");
  }
  if (sys.admissible && !sys.admissible(y0)) {
    throw Error(ErrorKind::DomainExit, "initial state is not admissible", t0);
  }
  Trajectory<N> traj;
  traj.times.push_back(t0);
  traj.states.push_back(y0);
  if (sys.energy) traj.energy.push_back(sys.energy(y0));
  if (t1 == t0) return traj;

  const double dir = t1 > t0 ? 1.0 : -1.0;
  const double span = std::abs(t1 - t0);
  long evals = 0;
  auto f = [&](const StateVec<N>& y) {
    ++evals;
    return sys.field(y);
  };

  detail::Dop853Step<N> step;
  StateVec<N> y = y0;
  double t = t0;
  step.k[0] = f(y);
  auto cap_for = [&](const StateVec<N>& state) {
    double cap = std::min(settings.max_step, span);
    if (sys.step_cap) cap = std::min(cap, sys.step_cap(state));
    return cap;
  };
  double h = detail::initial_step(sys, y, step.k[0], cap_for(y), dir, settings);
  bool reject = false;
  bool exit_suspected = false;
  long nsteps = 0;
  constexpr double kUround = 2.3e-16;

  while (true) {
    if (nsteps++ > settings.max_steps) {
      throw Error(ErrorKind::BudgetExceeded, "integration step budget exhausted", t);
    }
    const double hmax = cap_for(y);
    h = std::min(h, hmax);
    if (0.1 * h <= std::abs(t) * kUround || h < 1e-15 * span) {
      if (exit_suspected) {
        throw Error(ErrorKind::DomainExit, "trajectory leaves the admissible set", t);
      }
      throw Error(ErrorKind::StepFailure, "step size underflow", t);
    }
    bool last = false;
    if ((t + dir * 1.01 * h - t1) * dir > 0.0) {
      h = std::abs(t1 - t);
      last = true;
    }
    const double hs = dir * h;
    const double err = step.advance(f, y, hs, settings.rel_tol, settings.abs_tol);

    const bool finite = std::isfinite(err) && detail::all_finite(step.y_new);
    const bool admissible = finite && (!sys.admissible || sys.admissible(step.y_new));
    if (!admissible) {
      exit_suspected = true;
      h *= 0.25;
      reject = true;
      ++traj.rejected_steps;
      continue;
    }

    const double fac11 = std::pow(err, 0.125);
    const double fac = std::clamp(fac11 / 0.9, 1.0 / 6.0, 3.0);
    double hnew = h / fac;

    if (err <= 1.0) {
      double ymax = 0.0;
      for (double v : y) ymax = std::max(ymax, std::abs(v));
      traj.error_estimate += err * (settings.abs_tol + settings.rel_tol * ymax);
      step.f_new = f(step.y_new);
      if (settings.store_dense) {
        DenseSegment<N> seg;
        seg.t0 = t;
        seg.h = hs;
        seg.rc = step.dense(f, y, hs);
        traj.segments.push_back(seg);
      }
      y = step.y_new;
      t = last ? t1 : t + hs;
      step.k[0] = step.f_new;
      traj.times.push_back(t);
      traj.states.push_back(y);
      if (sys.energy) traj.energy.push_back(sys.energy(y));
      exit_suspected = false;

      if (last) break;
      if (stop && stop(traj)) break;
      if (reject) hnew = std::min(hnew, h);
      reject = false;
    } else {
      hnew = h / std::min(3.0, fac11 / 0.9);
      reject = true;
      ++traj.rejected_steps;
    }
    h = hnew;
  }
  traj.evaluations = evals;
  return traj;
}

/// Time-T map.
template <std::size_t N>
StateVec<N> flow_map(const System<N>& sys, const StateVec<N>& y0, double T,
                     const IntegratorSettings& settings) {
  if (T == 0.0) return y0;
  IntegratorSettings s = settings;
  s.store_dense = false;
  return integrate(sys, y0, 0.0, T, s).final_state();
}

/// Jacobian of the time-T map by central differences with per-component
/// step 1e-6 * (1 + |y_i|); one pair of independent integrations per column.
template <std::size_t N>
Eigen::Matrix<double, N, N> flow_jacobian(const System<N>& sys, const StateVec<N>& y0, double T,
                                          const IntegratorSettings& settings) {
  Eigen::Matrix<double, N, N> jac;
  if (T == 0.0) return Eigen::Matrix<double, N, N>::Identity();
  for (std::size_t j = 0; j < N; ++j) {
    const double step = 1e-6 * (1.0 + std::abs(y0[j]));
    StateVec<N> plus = y0;
    StateVec<N> minus = y0;
    plus[j] += step;
    minus[j] -= step;
    const StateVec<N> fp = flow_map(sys, plus, T, settings);
    const StateVec<N> fm = flow_map(sys, minus, T, settings);
    for (std::size_t i = 0; i < N; ++i) jac(i, j) = (fp[i] - fm[i]) / (2.0 * step);
  }
  return jac;
}

/// Continuous argument of a planar quantity extracted from a trajectory.
struct AngleLift {
  std::vector<double> times;
  std::vector<double> theta;

  double increment() const { return theta.back() - theta.front(); }
  double rotation_number() const { return increment() / (2.0 * kPi); }
};

/// Lifts arg(project(y) - center) along the nodes of `traj`. Where two
/// consecutive nodes differ by pi/2 or more the interval is resampled from
/// the dense output (up to 2^12 sub-intervals); LiftAmbiguity if that fails.
template <std::size_t N, class Project>
AngleLift lift_angle(const Trajectory<N>& traj, Project&& project, Point2 center = {}) {
  AngleLift lift;
  lift.times = traj.times;
  lift.theta.reserve(traj.times.size());
  auto angle_of = [&](const StateVec<N>& y) {
    const Point2 v = project(y) - center;
    if (norm(v) == 0.0) {
      throw Error(ErrorKind::LiftAmbiguity, "curve passes through the lift center");
    }
    return arg(v);
  };
  auto wrap = [](double d) { return std::remainder(d, 2.0 * kPi); };

  double prev_raw = angle_of(traj.states.front());
  double acc = prev_raw;
  lift.theta.push_back(acc);
  for (std::size_t i = 1; i < traj.states.size(); ++i) {
    const double raw = angle_of(traj.states[i]);
    double d = wrap(raw - prev_raw);
    if (std::abs(d) >= kPi / 2.0) {
      if (traj.segments.empty()) {
        throw Error(ErrorKind::LiftAmbiguity, "angle increment too large and no dense output",
                    traj.times[i]);
      }
      const DenseSegment<N>& seg = traj.segments[i - 1];
      bool resolved = false;
      for (int sub = 4; sub <= 4096 && !resolved; sub *= 4) {
        double total = 0.0;
        double p = prev_raw;
        bool ok = true;
        for (int j = 1; j <= sub; ++j) {
          const double tj = seg.t0 + seg.h * static_cast<double>(j) / sub;
          const double r = j == sub ? raw : angle_of(seg.eval(tj));
          const double dj = wrap(r - p);
          if (std::abs(dj) >= kPi / 2.0) {
            ok = false;
            break;
          }
          total += dj;
          p = r;
        }
        if (ok) {
          d = total;
          resolved = true;
        }
      }
      if (!resolved) {
        throw Error(ErrorKind::LiftAmbiguity, "cannot bound angle increments by refinement",
                    traj.times[i]);
      }
    }
    acc += d;
    lift.theta.push_back(acc);
    prev_raw = raw;
  }
  return lift;
}

/// A ray {origin + s * direction : s >= 0}.
struct Ray {
  Point2 origin;
  Point2 direction;
};

struct Crossing {
  double t = 0.0;
  /// +1 when the curve crosses counter-clockwise around the origin.
  int orientation = 0;
  /// Angular rate d/dt arg(p - origin) at the crossing.
  double angular_rate = 0.0;
};

/// Crossings of project(y(t)) with a ray, located on the dense output to
/// 1e-13 in time. NonTransversal if |angular rate| < 1e-8 at a crossing.
template <std::size_t N, class Project, class Velocity>
std::vector<Crossing> section_crossings(const Trajectory<N>& traj, const Ray& ray,
                                        Project&& project, Velocity&& velocity) {
  if (traj.segments.empty() && traj.times.size() > 1) {
    throw Error(ErrorKind::InvalidArgument, "section_crossings needs dense output");
  }
  const Point2 dir = ray.direction / norm(ray.direction);

  std::vector<Crossing> out;
  for (std::size_t i = 0; i + 1 < traj.times.size(); ++i) {
    const DenseSegment<N>& seg = traj.segments[i];
    // Two sub-intervals per step catch a double crossing inside one step.
    constexpr int kSub = 2;
    for (int j = 0; j < kSub; ++j) {
      double a = seg.t0 + seg.h * static_cast<double>(j) / kSub;
      double b = seg.t0 + seg.h * static_cast<double>(j + 1) / kSub;
      if (j + 1 == kSub) b = traj.times[i + 1];
      double fa = cross(dir, project(seg.eval(a)) - ray.origin);
      double fb = cross(dir, project(seg.eval(b)) - ray.origin);
      if (fa == 0.0 && a != traj.times.front()) continue;  // counted in the previous interval
      if (!((fa < 0.0 && fb >= 0.0) || (fa > 0.0 && fb <= 0.0))) continue;
      if (fa == 0.0) continue;
      // Illinois regula falsi on the interpolant.
      double side_a = fa;
      double side_b = fb;
      double lo = a;
      double hi = b;
      int last_kept = 0;
      for (int it = 0; it < 200 && std::abs(hi - lo) > 1e-13 * (1.0 + std::abs(hi)); ++it) {
        double m = hi - side_b * (hi - lo) / (side_b - side_a);
        if (!(std::min(lo, hi) < m && m < std::max(lo, hi))) m = 0.5 * (lo + hi);
        const double fm = cross(dir, project(seg.eval(m)) - ray.origin);
        if (fm == 0.0) {
          lo = hi = m;
          break;
        }
        if ((fm > 0.0) == (side_b > 0.0)) {
          hi = m;
          side_b = fm;
          if (last_kept == -1) side_a *= 0.5;
          last_kept = -1;
        } else {
          lo = m;
          side_a = fm;
          if (last_kept == 1) side_b *= 0.5;
          last_kept = 1;
        }
      }
      const double tc = 0.5 * (lo + hi);
      const StateVec<N> yc = seg.eval(tc);
      const Point2 rel = project(yc) - ray.origin;
      if (dot(rel, dir) <= 0.0) continue;  // opposite half-line
      const Point2 vel = velocity(yc);
      const double rate = cross(rel, vel) / norm2(rel);
      if (std::abs(rate) < 1e-8) {
        throw Error(ErrorKind::NonTransversal, "non-transversal section crossing", tc);
      }
      out.push_back({tc, rate > 0.0 ? 1 : -1, rate});
    }
  }
  return out;
}

// --- Vortex systems -------------------------------------------------------

using WVec = StateVec<4>;

inline WVec pack(const WState& w) { return {w.w1.x, w.w1.y, w.w2.x, w.w2.y}; }
inline WState unpack_w(const WVec& v) { return {{v[0], v[1]}, {v[2], v[3]}}; }
inline WVec pack(const PairState& z) { return {z.z1.x, z.z1.y, z.z2.x, z.z2.y}; }
inline PairState unpack_z(const WVec& v) { return {{v[0], v[1]}, {v[2], v[3]}}; }

/// The transformed two-vortex system in w coordinates. Admissible while both
/// vortices are inside the domain and w1 is off the collision set; energy is
/// H1; the step cap keeps each step below an eighth of a fast turn of w1.
System<4> w_system(const DomainModel& model, const VortexConfig& config);

/// The original two-vortex system in z coordinates (energy H).
System<4> z_system(const DomainModel& model, const VortexConfig& config);

/// Single vortex of strength kappa: dz/dt = -kappa J grad h(z) (energy h).
System<2> center_system(const DomainModel& model, double kappa);

/// Lifted arguments of w1 (about the origin) and of w2 (about `star_center`).
struct WLifts {
  AngleLift theta1;
  AngleLift theta2;
};
WLifts lift_angles(const Trajectory<4>& traj, Point2 star_center = {});

}  // namespace pvortex
