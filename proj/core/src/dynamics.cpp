#include "pvortex/dynamics.hpp"

#include <cmath>

#include "pvortex/error.hpp"

namespace pvortex {

namespace {

void require_normalized(const VortexConfig& config, const char* what) {
  if (!config.is_normalized()) {
    throw Error(ErrorKind::NotNormalized,
                std::string(what) + " needs kappa1 + kappa2 = 1; normalize the configuration first",
                config.kappa_sum());
  }
}

Point2 checked_difference(const Point2& a, const Point2& b) {
  const Point2 d = a - b;
  if (!(norm(d) >= kCollisionRadius)) {
    throw Error(ErrorKind::SingularConfiguration, "vortices collide", norm(d));
  }
  return d;
}

// Regular part G = -2 k1 k2 g(z1,z2) - k1^2 h(z1) - k2^2 h(z2): its gradients.
struct RegularGradient {
  Point2 dz1;
  Point2 dz2;
};

RegularGradient regular_gradient(const DomainModel& model, const VortexConfig& config,
                                 const PairState& s) {
  const double k1 = config.kappa1();
  const double k2 = config.kappa2();
  return {-2.0 * k1 * k2 * model.grad1_g(s.z1, s.z2) - k1 * k1 * model.grad_h(s.z1),
          -2.0 * k1 * k2 * model.grad2_g(s.z1, s.z2) - k2 * k2 * model.grad_h(s.z2)};
}

// Vortex positions encoded by polar w-coordinates of a normalized config.
PairState polar_positions(const VortexConfig& config, double R1, double R2, double Th1,
                          double Th2) {
  const Point2 d = config.reflect(R1 * unit(Th1)) / config.scale();
  const Point2 w2 = R2 * unit(Th2);
  return {w2 + config.kappa2() * d, w2 - config.kappa1() * d};
}

}  // namespace

VortexConfig::VortexConfig(double kappa1, double kappa2)
    : kappa1_(kappa1),
      kappa2_(kappa2),
      sigma_(kappa1 * kappa2 > 0.0 ? 1 : -1),
      scale_(std::sqrt(std::abs(kappa1 * kappa2))) {
  Eigen::Matrix2d e_sigma = Eigen::Matrix2d::Identity();
  e_sigma(0, 0) = sigma_;
  const Eigen::Matrix2d eye = Eigen::Matrix2d::Identity();
  a_.setZero();
  a_.block<2, 2>(0, 0) = scale_ * e_sigma;
  a_.block<2, 2>(0, 2) = -scale_ * e_sigma;
  a_.block<2, 2>(2, 0) = kappa1_ * eye;
  a_.block<2, 2>(2, 2) = kappa2_ * eye;

  // z1 = (w2 + k2 E w1 / s) / (k1 + k2), z2 = (w2 - k1 E w1 / s) / (k1 + k2).
  const double sum = kappa1_ + kappa2_;
  a_inv_.setZero();
  a_inv_.block<2, 2>(0, 0) = (kappa2_ / (scale_ * sum)) * e_sigma;
  a_inv_.block<2, 2>(0, 2) = (1.0 / sum) * eye;
  a_inv_.block<2, 2>(2, 0) = (-kappa1_ / (scale_ * sum)) * e_sigma;
  a_inv_.block<2, 2>(2, 2) = (1.0 / sum) * eye;
}

VortexConfig VortexConfig::create(double kappa1, double kappa2) {
  if (!std::isfinite(kappa1) || !std::isfinite(kappa2) || kappa1 == 0.0 || kappa2 == 0.0) {
    throw Error(ErrorKind::InvalidArgument, "vortex strengths must be finite and nonzero");
  }
  if (kappa1 + kappa2 == 0.0) {
    throw Error(ErrorKind::InvalidArgument,
                "kappa1 + kappa2 = 0 is excluded: periodic solutions require kappa1, kappa2, "
                "kappa1 + kappa2 != 0");
  }
  return VortexConfig(kappa1, kappa2);
}

double eval_H(const DomainModel& model, const VortexConfig& config, const PairState& s) {
  const Point2 d = checked_difference(s.z1, s.z2);
  const double k1 = config.kappa1();
  const double k2 = config.kappa2();
  return -(k1 * k2 / kPi) * std::log(norm(d)) - 2.0 * k1 * k2 * model.g(s.z1, s.z2) -
         k1 * k1 * model.h(s.z1) - k2 * k2 * model.h(s.z2);
}

PairState z_field(const DomainModel& model, const VortexConfig& config, const PairState& s) {
  const Point2 d = checked_difference(s.z1, s.z2);
  const Point2 log_grad = d / norm2(d);  // grad_{z1} ln|z1 - z2|
  const RegularGradient reg = regular_gradient(model, config, s);
  const double k1 = config.kappa1();
  const double k2 = config.kappa2();
  // grad_{z1} H = -(k1 k2 / pi) log_grad + reg.dz1, grad_{z2} H = +(k1 k2 / pi) log_grad + reg.dz2
  return {apply_J(-(k2 / kPi) * log_grad + reg.dz1 / k1),
          apply_J((k1 / kPi) * log_grad + reg.dz2 / k2)};
}

WState to_w(const VortexConfig& config, const PairState& s) {
  return {config.scale() * config.reflect(s.z1 - s.z2),
          config.kappa1() * s.z1 + config.kappa2() * s.z2};
}

PairState from_w(const VortexConfig& config, const WState& w) {
  const Point2 d = config.reflect(w.w1) / config.scale();
  const double sum = config.kappa_sum();
  return {(w.w2 + config.kappa2() * d) / sum, (w.w2 - config.kappa1() * d) / sum};
}

WState w_field(const DomainModel& model, const VortexConfig& config, const WState& w) {
  if (!(norm(w.w1) >= kCollisionRadius)) {
    throw Error(ErrorKind::SingularConfiguration, "w1 at the collision set", norm(w.w1));
  }
  const PairState z = from_w(config, w);
  const Point2 d = z.z1 - z.z2;
  const RegularGradient reg = regular_gradient(model, config, z);
  const double k1 = config.kappa1();
  const double k2 = config.kappa2();
  // d/dt (z1 - z2): the two log contributions combine into -(k1+k2)/pi J d/|d|^2.
  const Point2 ddot =
      apply_J(-(config.kappa_sum() / kPi) * d / norm2(d) + reg.dz1 / k1 - reg.dz2 / k2);
  // k1 dz1/dt + k2 dz2/dt: the log contributions cancel exactly.
  const Point2 w2dot = apply_J(reg.dz1 + reg.dz2);
  return {config.scale() * config.reflect(ddot), w2dot};
}

double eval_H1(const DomainModel& model, const VortexConfig& config, const WState& w) {
  return eval_H(model, config, from_w(config, w));
}

Point2 remainder_Q(const DomainModel& model, const VortexConfig& config, const WState& w) {
  require_normalized(config, "remainder_Q");
  const PairState z = from_w(config, w);
  const RegularGradient reg = regular_gradient(model, config, z);
  return reg.dz1 + reg.dz2 + model.grad_h(w.w2);
}

Point2 k_term(const DomainModel& model, const VortexConfig& config, double R1, double R2,
              double Th1, double Th2) {
  require_normalized(config, "k_term");
  const PairState z = polar_positions(config, R1, R2, Th1, Th2);
  const double s = config.scale();
  const double k1 = config.kappa1();
  const double k2 = config.kappa2();
  return 2.0 * (k2 * s * model.grad1_g(z.z1, z.z2) - k1 * s * model.grad2_g(z.z1, z.z2)) +
         k1 * s * model.grad_h(z.z1) - k2 * s * model.grad_h(z.z2);
}

double angular_rate_f(const DomainModel& model, const VortexConfig& config, double R1, double R2,
                      double Th1, double Th2) {
  if (!(R1 > 0.0)) throw Error(ErrorKind::InvalidArgument, "angular_rate_f needs R1 > 0", R1);
  const Point2 k = k_term(model, config, R1, R2, Th1, Th2);
  return config.kappa_product() / (kPi * R1 * R1) +
         config.sigma() * dot(config.reflect(k), unit(Th1)) / R1;
}

double radial_rate(const DomainModel& model, const VortexConfig& config, double R1, double R2,
                   double Th1, double Th2) {
  const Point2 k = k_term(model, config, R1, R2, Th1, Th2);
  return config.sigma() * dot(config.reflect(k), apply_J(unit(Th1)));
}

double angular_impulse(const VortexConfig& config, const PairState& s) {
  return config.kappa1() * norm2(s.z1) + config.kappa2() * norm2(s.z2);
}

Point2 center_of_vorticity(const VortexConfig& config, const PairState& s) {
  return (config.kappa1() * s.z1 + config.kappa2() * s.z2) / config.kappa_sum();
}

}  // namespace pvortex
