#pragma once

#include <functional>
#include <memory>
#include <string>

#include "pvortex/geometry.hpp"

namespace pvortex {

enum class DomainKind { UnitDisk, RadialPower, UserG };

/// A user-supplied regular part g. Only `g` is required; missing derivatives
/// are taken by central differences with step 1e-5 * (1 + |z|).
struct UserGreen {
  std::string name = "user";
  std::function<double(Point2, Point2)> g;
  /// Gradient of g in its first argument (optional).
  std::function<Point2(Point2, Point2)> grad1_g;
  /// Hessian of h(z) = g(z, z) (optional).
  std::function<SymMat2(Point2)> hess_h;
  /// Admissible set; defaults to the whole plane.
  std::function<bool(Point2)> inside;
  /// Set when g is invariant under simultaneous rotation about the origin.
  bool rotationally_symmetric = false;
};

/// Geometric data of a planar domain: the symmetric regular part g of a
/// hydrodynamic Green's function and its Robin function h(z) = g(z, z).
///
/// Immutable and cheap to copy; all evaluations are pure and may be called
/// concurrently.
class DomainModel {
 public:
  /// Unit disk: g(z,w) = -(1/4pi) ln(1 - 2<z,w> + |z|^2 |w|^2),
  /// h(z) = -(1/2pi) ln(1 - |z|^2).
  static DomainModel unit_disk();

  /// Synthetic radial model g(z,w) = (|z|^{2p} + |w|^{2p}) / 2, h = |z|^{2p}.
  /// Throws InvalidArgument for p <= 1.
  static DomainModel radial_power(double p);

  static DomainModel user(UserGreen spec);

  DomainKind kind() const;
  const std::string& name() const;
  /// Exponent of a RadialPower model, 0 otherwise.
  double power() const;
  /// True when g(Rz, Rw) = g(z, w) for every rotation R about the origin.
  bool rotationally_symmetric() const;

  double g(Point2 z, Point2 w) const;
  double h(Point2 z) const;
  Point2 grad1_g(Point2 z, Point2 w) const;
  Point2 grad2_g(Point2 z, Point2 w) const;
  Point2 grad_h(Point2 z) const;
  SymMat2 hess_h(Point2 z) const;
  bool inside(Point2 z) const;

  class Impl;

 private:
  explicit DomainModel(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;
};

/// Named user models used by the CLI and the negative controls.
namespace user_models {
/// g == 0: no boundary influence, h == 0.
DomainModel zero();
/// g(z,w) = <z,w>, h = |z|^2. Level sets are isochronous circles.
DomainModel bilinear();
/// g(z,w) = (|z|^2 + |w|^2) / 2, h = |z|^2 (isochronous, separable).
DomainModel isochronous();
/// g(z,w) = (|z-a|^2 + |w-a|^2) / 2, minimum of h at a. No analytic derivatives.
DomainModel shifted_paraboloid(Point2 a);
}  // namespace user_models

struct HarmonicCenter {
  Point2 z0;
  /// h(z0), the minimum value m.
  double m = 0.0;
  double grad_norm = 0.0;
  int iterations = 0;
};

/// Locates a non-degenerate (or at least isolated) minimum of h by damped
/// Newton steps, falling back to gradient descent where the Hessian is not
/// positive definite. Throws NoConvergence when |grad h| does not drop below
/// `tol` within `max_iterations`.
HarmonicCenter harmonic_center(const DomainModel& model, Point2 seed, double tol = 1e-10,
                               int max_iterations = 500);

}  // namespace pvortex
