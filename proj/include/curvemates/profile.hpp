#pragma once

#include <Eigen/Core>

#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "curvemates/errors.hpp"
#include "curvemates/expression.hpp"
#include "curvemates/lie_algebra.hpp"

namespace curvemates {

struct Domain {
  double lo = 0.0;
  double hi = 1.0;
  [[nodiscard]] double length() const { return hi - lo; }
};

/// Uniform grid s_i = s0 + i h, i = 0 .. count-1.
struct UniformGrid {
  double s0 = 0.0;
  double h = 1.0;
  std::size_t count = 0;

  /// Largest grid with step h that fits in the domain (the last point may
  /// fall short of hi by less than one step).
  static UniformGrid over(const Domain& d, double h);

  [[nodiscard]] double at(std::size_t i) const { return s0 + static_cast<double>(i) * h; }
  [[nodiscard]] double last() const { return at(count - 1); }
  [[nodiscard]] std::vector<double> points() const;
};

/// One scalar function of s (kappa or tau), either a closed-form expression
/// or uniform samples.
class ProfileFunction {
 public:
  static ProfileFunction from_expr(Expr e);
  static ProfileFunction constant(double c) { return from_expr(Expr::number(c)); }
  /// At least 5 samples; derivatives come from 5-point stencils and values
  /// between nodes from cubic interpolation.
  static ProfileFunction from_samples(double s0, double h, std::vector<double> values);

  [[nodiscard]] bool is_expression() const { return exprs_.has_value(); }
  /// order 0, 1 or 2.
  [[nodiscard]] const Expr& expression(int order = 0) const { return (*exprs_)[order]; }

  [[nodiscard]] const std::vector<double>& samples(int order = 0) const { return nodes_[order]; }
  [[nodiscard]] double sample_origin() const { return s0_; }
  [[nodiscard]] double sample_step() const { return h_; }

  template <typename T>
  [[nodiscard]] T value(T s) const {
    return eval(s, 0);
  }
  /// order 1 or 2.
  template <typename T>
  [[nodiscard]] T derivative(T s, int order = 1) const {
    return eval(s, order);
  }

  [[nodiscard]] std::string describe() const;

 private:
  std::optional<std::array<Expr, 3>> exprs_;
  std::array<std::vector<double>, 3> nodes_;
  double s0_ = 0.0;
  double h_ = 1.0;

  template <typename T>
  T eval(T s, int order) const;
};

/// kappa(s), tau(s) on a domain, with the grid step used for validation and
/// classification.
class CurvatureProfile {
 public:
  CurvatureProfile(ProfileFunction kappa, ProfileFunction tau, Domain domain, double step);
  /// Parses both expressions; step defaults to length / 2000.
  static CurvatureProfile parse(const std::string& kappa, const std::string& tau, Domain domain,
                                double step = 0.0);

  [[nodiscard]] const ProfileFunction& kappa() const { return kappa_; }
  [[nodiscard]] const ProfileFunction& tau() const { return tau_; }
  [[nodiscard]] const Domain& domain() const { return domain_; }
  [[nodiscard]] double step() const { return step_; }
  [[nodiscard]] UniformGrid grid() const { return UniformGrid::over(domain_, step_); }

  /// Same functions over a different domain (and optionally step).
  [[nodiscard]] CurvatureProfile restricted(Domain d, double step = 0.0) const;

 private:
  ProfileFunction kappa_;
  ProfileFunction tau_;
  Domain domain_;
  double step_;
};

/// Threshold below which H' counts as zero.
inline constexpr double kSingularSigmaThreshold = 1e-12;

/// H = (tau - tau_G) / kappa. Throws FrenetViolation when kappa <= 0.
double harmonic_curvature(const CurvatureProfile& p, const GroupSpec& spec, double s);
/// H'.
double harmonic_curvature_derivative(const CurvatureProfile& p, const GroupSpec& spec, double s);
/// sigma = kappa (H^2 + 1)^{3/2} / H'. Throws SingularSigma when |H'| <= 1e-12.
double sigma(const CurvatureProfile& p, const GroupSpec& spec, double s);
/// omega = sqrt((tau - tau_G)^2 + kappa^2).
double omega(const CurvatureProfile& p, const GroupSpec& spec, double s);

/// Darboux vector D, extrinsic Darboux vector Omega and co-Darboux vector
/// Omega*, as coefficients in the (T, N, B) frame.
struct DarbouxVectors {
  Eigen::Vector3d darboux;
  Eigen::Vector3d extrinsic;
  Eigen::Vector3d co_extrinsic;
};
DarbouxVectors darboux_vectors(const CurvatureProfile& p, const GroupSpec& spec, double s);

struct ApparatusSample {
  double s = 0.0;
  double kappa = 0.0;
  double tau = 0.0;
  double tau_g = 0.0;
  double harmonic = 0.0;
  double harmonic_derivative = 0.0;
  std::optional<double> sigma;  // empty where H' vanishes
  double omega = 0.0;
  DarbouxVectors vectors;
};
ApparatusSample apparatus(const CurvatureProfile& p, const GroupSpec& spec, double s);

/// Result of checking kappa > 0 on the profile grid.
struct FrenetCheck {
  bool satisfied = true;
  std::vector<double> violations;
  /// Set when violations are confined to the two ends of the domain.
  std::optional<Domain> suggested_domain;
};
FrenetCheck check_frenet(const CurvatureProfile& p, double tolerance = 1e-12);
/// Throws FrenetViolation ("Frenet condition violated ...") when check_frenet fails.
void require_frenet(const CurvatureProfile& p, double tolerance = 1e-12);

// ---------------------------------------------------------------------------

namespace detail {

/// Cubic Lagrange interpolation of uniformly spaced nodes.
template <typename T>
T interpolate_cubic(const std::vector<double>& nodes, double s0, double h, T s) {
  const std::size_t n = nodes.size();
  const double x = (static_cast<double>(s) - s0) / h;
  const double last = static_cast<double>(n - 1);
  if (x < -1e-9 || x > last + 1e-9) throw DomainError("sampled profile", static_cast<double>(s));
  std::ptrdiff_t i = static_cast<std::ptrdiff_t>(std::floor(x));
  i = std::clamp<std::ptrdiff_t>(i, 1, static_cast<std::ptrdiff_t>(n) - 3);
  const T u = (s - T(s0)) / T(h) - T(static_cast<double>(i));
  const T one(1), two(2), six(6);
  const T wm = -u * (u - one) * (u - two) / six;
  const T w0 = (u + one) * (u - one) * (u - two) / two;
  const T w1 = -(u + one) * u * (u - two) / two;
  const T w2 = (u + one) * u * (u - one) / six;
  return wm * T(nodes[i - 1]) + w0 * T(nodes[i]) + w1 * T(nodes[i + 1]) + w2 * T(nodes[i + 2]);
}

/// Five-point first (order 1) or second (order 2) derivative of uniform samples,
/// central in the interior and one-sided at the two boundary pairs.
std::vector<double> stencil_derivative(const std::vector<double>& f, double h, int order);

}  // namespace detail

template <typename T>
T ProfileFunction::eval(T s, int order) const {
  if (exprs_) return (*exprs_)[order].eval(s);
  return detail::interpolate_cubic(nodes_[order], s0_, h_, s);
}

}  // namespace curvemates
