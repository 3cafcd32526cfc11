#include "pvortex/flow.hpp"

#include <cmath>
#include <limits>

namespace pvortex {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool pair_inside(const DomainModel& model, const PairState& z) {
  return model.inside(z.z1) && model.inside(z.z2) && is_finite(z.z1) && is_finite(z.z2);
}

// Step bound resolving an eighth of a turn of the fast pair rotation, whose
// angular speed is |k1 k2| |k1 + k2| / (pi |w1|^2).
double fast_turn_cap(double r1_sq_over_rate_scale) {
  return (kPi / 4.0) * kPi * r1_sq_over_rate_scale;
}

}  // namespace

System<4> w_system(const DomainModel& model, const VortexConfig& config) {
  System<4> sys;
  sys.field = [model, config](const WVec& v) -> WVec {
    const WState w = unpack_w(v);
    if (!(norm(w.w1) >= kCollisionRadius)) return {kNaN, kNaN, kNaN, kNaN};
    return pack(w_field(model, config, w));
  };
  sys.admissible = [model, config](const WVec& v) {
    const WState w = unpack_w(v);
    return norm(w.w1) >= kCollisionRadius && pair_inside(model, from_w(config, w));
  };
  sys.energy = [model, config](const WVec& v) { return eval_H1(model, config, unpack_w(v)); };
  const double rate_scale = std::abs(config.kappa_product() * config.kappa_sum());
  sys.step_cap = [rate_scale](const WVec& v) {
    return fast_turn_cap((v[0] * v[0] + v[1] * v[1]) / rate_scale);
  };
  return sys;
}

System<4> z_system(const DomainModel& model, const VortexConfig& config) {
  System<4> sys;
  sys.field = [model, config](const WVec& v) -> WVec {
    const PairState z = unpack_z(v);
    if (!(norm(z.z1 - z.z2) >= kCollisionRadius)) return {kNaN, kNaN, kNaN, kNaN};
    return pack(z_field(model, config, z));
  };
  sys.admissible = [model](const WVec& v) {
    const PairState z = unpack_z(v);
    return norm(z.z1 - z.z2) >= kCollisionRadius && pair_inside(model, z);
  };
  sys.energy = [model, config](const WVec& v) { return eval_H(model, config, unpack_z(v)); };
  const double rate_scale = std::abs(config.kappa_sum());
  sys.step_cap = [rate_scale](const WVec& v) {
    const double dx = v[0] - v[2];
    const double dy = v[1] - v[3];
    return fast_turn_cap((dx * dx + dy * dy) / rate_scale);
  };
  return sys;
}

System<2> center_system(const DomainModel& model, double kappa) {
  if (!std::isfinite(kappa) || kappa == 0.0) {
    throw Error(ErrorKind::InvalidArgument, "center_system needs a finite nonzero strength", kappa);
  }
  System<2> sys;
  sys.field = [model, kappa](const StateVec<2>& v) -> StateVec<2> {
    const Point2 d = -kappa * apply_J(model.grad_h({v[0], v[1]}));
    return {d.x, d.y};
  };
  sys.admissible = [model](const StateVec<2>& v) {
    const Point2 z{v[0], v[1]};
    return is_finite(z) && model.inside(z);
  };
  sys.energy = [model](const StateVec<2>& v) { return model.h({v[0], v[1]}); };
  return sys;
}

WLifts lift_angles(const Trajectory<4>& traj, Point2 star_center) {
  WLifts out;
  out.theta1 = lift_angle(traj, [](const WVec& v) { return Point2{v[0], v[1]}; });
  out.theta2 = lift_angle(traj, [](const WVec& v) { return Point2{v[2], v[3]}; }, star_center);
  return out;
}

}  // namespace pvortex
