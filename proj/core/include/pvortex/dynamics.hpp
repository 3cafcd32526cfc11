#pragma once

#include <Eigen/Core>

#include "pvortex/domain.hpp"
#include "pvortex/geometry.hpp"

namespace pvortex {

using Mat4 = Eigen::Matrix4d;

/// Vortex positions (z1, z2); also used for velocities in the same frame.
struct PairState {
  Point2 z1;
  Point2 z2;
  friend constexpr bool operator==(const PairState&, const PairState&) = default;
};

/// Transformed coordinates w = A z; w1 is the scaled (and for sigma < 0
/// reflected) difference z1 - z2, w2 = kappa1 z1 + kappa2 z2.
struct WState {
  Point2 w1;
  Point2 w2;
  friend constexpr bool operator==(const WState&, const WState&) = default;
};

/// Vortex strengths together with the linear change of variables w = A z.
class VortexConfig {
 public:
  /// Throws InvalidArgument unless kappa1, kappa2 and kappa1 + kappa2 are
  /// finite and nonzero.
  static VortexConfig create(double kappa1, double kappa2);

  double kappa1() const { return kappa1_; }
  double kappa2() const { return kappa2_; }
  double kappa_sum() const { return kappa1_ + kappa2_; }
  double kappa_product() const { return kappa1_ * kappa2_; }
  /// sgn(kappa1 kappa2).
  int sigma() const { return sigma_; }
  /// sqrt(|kappa1 kappa2|).
  double scale() const { return scale_; }
  const Mat4& A() const { return a_; }
  const Mat4& A_inv() const { return a_inv_; }

  bool is_normalized(double tol = 1e-12) const { return std::abs(kappa_sum() - 1.0) <= tol; }
  /// Strengths divided by kappa1 + kappa2. A solution z~(t) of the normalized
  /// system gives the solution z(t) = z~((kappa1 + kappa2) t) of this one.
  VortexConfig normalized() const { return create(kappa1_ / kappa_sum(), kappa2_ / kappa_sum()); }

  /// E_2^sigma applied to v: flips the first coordinate when sigma < 0.
  Point2 reflect(Point2 v) const { return sigma_ > 0 ? v : Point2{-v.x, v.y}; }

 private:
  VortexConfig(double kappa1, double kappa2);

  double kappa1_;
  double kappa2_;
  int sigma_;
  double scale_;
  Mat4 a_;
  Mat4 a_inv_;
};

/// Collision guard: |z1 - z2| (or |w1|) below this raises SingularConfiguration.
inline constexpr double kCollisionRadius = 1e-30;

/// Two-vortex Hamiltonian
///   H = -(k1 k2/pi) ln|z1 - z2| - 2 k1 k2 g(z1,z2) - k1^2 h(z1) - k2^2 h(z2).
double eval_H(const DomainModel& model, const VortexConfig& config, const PairState& state);

/// (dz1/dt, dz2/dt) with kappa_j dz_j/dt = J grad_{z_j} H.
PairState z_field(const DomainModel& model, const VortexConfig& config, const PairState& state);

WState to_w(const VortexConfig& config, const PairState& state);
PairState from_w(const VortexConfig& config, const WState& w);

/// Push-forward A * z_field(A^-1 w). For a normalized configuration this is
/// the Hamiltonian field J grad H1 of H1(w) = H(A^-1 w). The logarithmic
/// term is evaluated in closed form in both components.
WState w_field(const DomainModel& model, const VortexConfig& config, const WState& w);

/// H1(w) = H(A^-1 w).
double eval_H1(const DomainModel& model, const VortexConfig& config, const WState& w);

/// Q(w) = grad_{w2} H1(w) + grad h(w2). Requires a normalized configuration
/// (NotNormalized otherwise); Q vanishes as w1 -> 0.
Point2 remainder_Q(const DomainModel& model, const VortexConfig& config, const WState& w);

/// The vector k(R, Theta) built from g and h gradients at the vortex
/// positions encoded by w1 = R1 e(Th1), w2 = R2 e(Th2). Normalized configs only.
Point2 k_term(const DomainModel& model, const VortexConfig& config, double R1, double R2,
              double Th1, double Th2);

/// Angular rate of w1: dTh1/dt = k1 k2 / (pi R1^2) + (sigma / R1) <E^sigma k, e(Th1)>.
/// For sigma > 0 this is the printed polar form; the E^sigma reflection
/// accounts for the flipped first coordinate when sigma < 0.
double angular_rate_f(const DomainModel& model, const VortexConfig& config, double R1, double R2,
                      double Th1, double Th2);

/// Radial rate dR1/dt = sigma <E^sigma k, J e(Th1)>.
double radial_rate(const DomainModel& model, const VortexConfig& config, double R1, double R2,
                   double Th1, double Th2);

/// Angular impulse k1 |z1|^2 + k2 |z2|^2 (conserved for rotation invariant g).
double angular_impulse(const VortexConfig& config, const PairState& state);

/// Center of vorticity (k1 z1 + k2 z2) / (k1 + k2).
Point2 center_of_vorticity(const VortexConfig& config, const PairState& state);

}  // namespace pvortex
