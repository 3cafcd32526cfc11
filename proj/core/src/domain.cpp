#include "pvortex/domain.hpp"

#include <cmath>
#include <limits>

#include "pvortex/error.hpp"

namespace pvortex {

class DomainModel::Impl {
 public:
  virtual ~Impl() = default;
  virtual DomainKind kind() const = 0;
  virtual const std::string& name() const = 0;
  virtual double power() const { return 0.0; }
  virtual bool rotationally_symmetric() const = 0;
  virtual double g(Point2 z, Point2 w) const = 0;
  virtual double h(Point2 z) const = 0;
  virtual Point2 grad1_g(Point2 z, Point2 w) const = 0;
  virtual Point2 grad_h(Point2 z) const = 0;
  virtual SymMat2 hess_h(Point2 z) const = 0;
  virtual bool inside(Point2 z) const = 0;
};

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();

class UnitDisk final : public DomainModel::Impl {
 public:
  DomainKind kind() const override { return DomainKind::UnitDisk; }
  const std::string& name() const override { return name_; }
  bool rotationally_symmetric() const override { return true; }

  double g(Point2 z, Point2 w) const override {
    const double phi = 1.0 - 2.0 * dot(z, w) + norm2(z) * norm2(w);
    if (!(phi > 0.0)) return kNaN;
    return -std::log(phi) / (4.0 * kPi);
  }
  double h(Point2 z) const override {
    const double s = 1.0 - norm2(z);
    if (!(s > 0.0)) return kInf;
    return -std::log(s) / (2.0 * kPi);
  }
  Point2 grad1_g(Point2 z, Point2 w) const override {
    const double w2 = norm2(w);
    const double phi = 1.0 - 2.0 * dot(z, w) + norm2(z) * w2;
    if (!(phi > 0.0)) return {kNaN, kNaN};
    return (w - w2 * z) / (2.0 * kPi * phi);
  }
  Point2 grad_h(Point2 z) const override {
    const double s = 1.0 - norm2(z);
    if (!(s > 0.0)) return {kNaN, kNaN};
    return z / (kPi * s);
  }
  SymMat2 hess_h(Point2 z) const override {
    const double s = 1.0 - norm2(z);
    const double a = 1.0 / (kPi * s);
    const double b = 2.0 / (kPi * s * s);
    return {a + b * z.x * z.x, b * z.x * z.y, a + b * z.y * z.y};
  }
  bool inside(Point2 z) const override { return norm2(z) < 1.0; }

 private:
  std::string name_ = "disk";
};

class RadialPower final : public DomainModel::Impl {
 public:
  explicit RadialPower(double p) : p_(p) {}
  DomainKind kind() const override { return DomainKind::RadialPower; }
  const std::string& name() const override { return name_; }
  double power() const override { return p_; }
  bool rotationally_symmetric() const override { return true; }

  double g(Point2 z, Point2 w) const override {
    return 0.5 * (std::pow(norm2(z), p_) + std::pow(norm2(w), p_));
  }
  double h(Point2 z) const override { return std::pow(norm2(z), p_); }
  Point2 grad1_g(Point2 z, Point2) const override {
    return p_ * std::pow(norm2(z), p_ - 1.0) * z;
  }
  Point2 grad_h(Point2 z) const override { return 2.0 * p_ * std::pow(norm2(z), p_ - 1.0) * z; }
  SymMat2 hess_h(Point2 z) const override {
    const double r2 = norm2(z);
    if (r2 == 0.0) return {};
    const double a = 2.0 * p_ * std::pow(r2, p_ - 1.0);
    const double b = 4.0 * p_ * (p_ - 1.0) * std::pow(r2, p_ - 2.0);
    return {a + b * z.x * z.x, b * z.x * z.y, a + b * z.y * z.y};
  }
  bool inside(Point2) const override { return true; }

 private:
  double p_;
  std::string name_ = "radial_power";
};

double fd_step(Point2 z) { return 1e-5 * (1.0 + norm(z)); }

class UserModel final : public DomainModel::Impl {
 public:
  explicit UserModel(UserGreen spec) : spec_(std::move(spec)) {}
  DomainKind kind() const override { return DomainKind::UserG; }
  const std::string& name() const override { return spec_.name; }
  bool rotationally_symmetric() const override { return spec_.rotationally_symmetric; }

  double g(Point2 z, Point2 w) const override { return spec_.g(z, w); }
  double h(Point2 z) const override { return spec_.g(z, z); }

  Point2 grad1_g(Point2 z, Point2 w) const override {
    if (spec_.grad1_g) return spec_.grad1_g(z, w);
    const double s = fd_step(z);
    return {(spec_.g({z.x + s, z.y}, w) - spec_.g({z.x - s, z.y}, w)) / (2.0 * s),
            (spec_.g({z.x, z.y + s}, w) - spec_.g({z.x, z.y - s}, w)) / (2.0 * s)};
  }
  Point2 grad_h(Point2 z) const override {
    if (spec_.grad1_g) return spec_.grad1_g(z, z) + spec_.grad1_g(z, z);
    const double s = fd_step(z);
    return {(h({z.x + s, z.y}) - h({z.x - s, z.y})) / (2.0 * s),
            (h({z.x, z.y + s}) - h({z.x, z.y - s})) / (2.0 * s)};
  }
  SymMat2 hess_h(Point2 z) const override {
    if (spec_.hess_h) return spec_.hess_h(z);
    const double s = fd_step(z);
    const double c = h(z);
    const double xx = (h({z.x + s, z.y}) - 2.0 * c + h({z.x - s, z.y})) / (s * s);
    const double yy = (h({z.x, z.y + s}) - 2.0 * c + h({z.x, z.y - s})) / (s * s);
    const double xy = (h({z.x + s, z.y + s}) - h({z.x + s, z.y - s}) - h({z.x - s, z.y + s}) +
                       h({z.x - s, z.y - s})) /
                      (4.0 * s * s);
    return {xx, xy, yy};
  }
  bool inside(Point2 z) const override { return spec_.inside ? spec_.inside(z) : true; }

 private:
  UserGreen spec_;
};

}  // namespace

DomainModel DomainModel::unit_disk() { return DomainModel(std::make_shared<UnitDisk>()); }

DomainModel DomainModel::radial_power(double p) {
  if (!(p > 1.0) || !std::isfinite(p)) {
    throw Error(ErrorKind::InvalidArgument, "radial_power requires p > 1", p);
  }
  return DomainModel(std::make_shared<RadialPower>(p));
}

DomainModel DomainModel::user(UserGreen spec) {
  if (!spec.g) throw Error(ErrorKind::InvalidArgument, "user model needs a g callable");
  return DomainModel(std::make_shared<UserModel>(std::move(spec)));
}

DomainKind DomainModel::kind() const { return impl_->kind(); }
const std::string& DomainModel::name() const { return impl_->name(); }
double DomainModel::power() const { return impl_->power(); }
bool DomainModel::rotationally_symmetric() const { return impl_->rotationally_symmetric(); }
double DomainModel::g(Point2 z, Point2 w) const { return impl_->g(z, w); }
double DomainModel::h(Point2 z) const { return impl_->h(z); }
Point2 DomainModel::grad1_g(Point2 z, Point2 w) const { return impl_->grad1_g(z, w); }
Point2 DomainModel::grad2_g(Point2 z, Point2 w) const { return impl_->grad1_g(w, z); }
Point2 DomainModel::grad_h(Point2 z) const { return impl_->grad_h(z); }
SymMat2 DomainModel::hess_h(Point2 z) const { return impl_->hess_h(z); }
bool DomainModel::inside(Point2 z) const { return impl_->inside(z); }

namespace user_models {

DomainModel zero() {
  UserGreen spec;
  spec.name = "zero";
  spec.g = [](Point2, Point2) { return 0.0; };
  spec.grad1_g = [](Point2, Point2) { return Point2{}; };
  spec.hess_h = [](Point2) { return SymMat2{}; };
  spec.rotationally_symmetric = true;
  return DomainModel::user(std::move(spec));
}

DomainModel bilinear() {
  UserGreen spec;
  spec.name = "bilinear";
  spec.g = [](Point2 z, Point2 w) { return dot(z, w); };
  spec.grad1_g = [](Point2, Point2 w) { return w; };
  spec.hess_h = [](Point2) { return 2.0 * SymMat2::identity(); };
  spec.rotationally_symmetric = true;
  return DomainModel::user(std::move(spec));
}

DomainModel isochronous() {
  UserGreen spec;
  spec.name = "isochronous";
  spec.g = [](Point2 z, Point2 w) { return 0.5 * (norm2(z) + norm2(w)); };
  spec.rotationally_symmetric = true;
  return DomainModel::user(std::move(spec));
}

DomainModel shifted_paraboloid(Point2 a) {
  UserGreen spec;
  spec.name = "shifted_paraboloid";
  spec.g = [a](Point2 z, Point2 w) { return 0.5 * (norm2(z - a) + norm2(w - a)); };
  return DomainModel::user(std::move(spec));
}

}  // namespace user_models

HarmonicCenter harmonic_center(const DomainModel& model, Point2 seed, double tol,
                               int max_iterations) {
  if (!model.inside(seed) || !std::isfinite(model.h(seed))) {
    throw Error(ErrorKind::InvalidArgument, "harmonic_center seed outside the domain");
  }
  Point2 z = seed;
  double hz = model.h(z);
  for (int it = 0; it < max_iterations; ++it) {
    const Point2 grad = model.grad_h(z);
    const double gn = norm(grad);
    if (gn <= tol) return {z, hz, gn, it};

    const SymMat2 hess = model.hess_h(z);
    Point2 step = -grad;
    if (hess.positive_definite()) {
      const double det = hess.det();
      step = -Point2{(hess.yy * grad.x - hess.xy * grad.y) / det,
                     (hess.xx * grad.y - hess.xy * grad.x) / det};
    } else {
      // Indefinite or degenerate Hessian: steepest descent, initial length 0.1.
      step = step * (0.1 / gn);
    }

    double lambda = 1.0;
    bool accepted = false;
    for (int k = 0; k < 60; ++k, lambda *= 0.5) {
      const Point2 trial = z + lambda * step;
      if (!model.inside(trial)) continue;
      const double ht = model.h(trial);
      if (std::isfinite(ht) && ht <= hz + 1e-4 * lambda * dot(grad, step)) {
        z = trial;
        hz = ht;
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      // Flat h: line search stalls at round-off level; accept the full Newton
      // point if it does not increase h noticeably.
      const Point2 trial = z + step;
      if (model.inside(trial) && model.h(trial) <= hz + 1e-14 * (1.0 + std::abs(hz))) {
        z = trial;
        hz = model.h(z);
      } else {
        throw Error(ErrorKind::NoConvergence, "harmonic_center line search failed", gn);
      }
    }
  }
  const double gn = norm(model.grad_h(z));
  if (gn <= tol) return {z, hz, gn, max_iterations};
  throw Error(ErrorKind::NoConvergence, "harmonic_center did not reach tolerance", gn);
}

}  // namespace pvortex
