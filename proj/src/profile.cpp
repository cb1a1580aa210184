#include "curvemates/profile.hpp"

#include <algorithm>
#include <sstream>

namespace curvemates {

UniformGrid UniformGrid::over(const Domain& d, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("grid step must be positive");
  if (!(d.hi > d.lo)) throw std::invalid_argument("domain must satisfy lo < hi");
  const auto steps = static_cast<std::size_t>(std::floor(d.length() / h + 1e-9));
  return UniformGrid{d.lo, h, steps + 1};
}

std::vector<double> UniformGrid::points() const {
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i) out[i] = at(i);
  return out;
}

namespace detail {

std::vector<double> stencil_derivative(const std::vector<double>& f, double h, int order) {
  const std::size_t n = f.size();
  if (n < 5) throw std::invalid_argument("five-point stencils need at least 5 samples");
  std::vector<double> d(n);
  if (order == 1) {
    const double c = 1.0 / (12.0 * h);
    d[0] = c * (-25 * f[0] + 48 * f[1] - 36 * f[2] + 16 * f[3] - 3 * f[4]);
    d[1] = c * (-3 * f[0] - 10 * f[1] + 18 * f[2] - 6 * f[3] + f[4]);
    for (std::size_t i = 2; i + 2 < n; ++i) d[i] = c * (f[i - 2] - 8 * f[i - 1] + 8 * f[i + 1] - f[i + 2]);
    d[n - 2] = -c * (-3 * f[n - 1] - 10 * f[n - 2] + 18 * f[n - 3] - 6 * f[n - 4] + f[n - 5]);
    d[n - 1] = -c * (-25 * f[n - 1] + 48 * f[n - 2] - 36 * f[n - 3] + 16 * f[n - 4] - 3 * f[n - 5]);
  } else if (order == 2) {
    const double c = 1.0 / (12.0 * h * h);
    d[0] = c * (35 * f[0] - 104 * f[1] + 114 * f[2] - 56 * f[3] + 11 * f[4]);
    d[1] = c * (11 * f[0] - 20 * f[1] + 6 * f[2] + 4 * f[3] - f[4]);
    for (std::size_t i = 2; i + 2 < n; ++i)
      d[i] = c * (-f[i - 2] + 16 * f[i - 1] - 30 * f[i] + 16 * f[i + 1] - f[i + 2]);
    d[n - 2] = c * (11 * f[n - 1] - 20 * f[n - 2] + 6 * f[n - 3] + 4 * f[n - 4] - f[n - 5]);
    d[n - 1] = c * (35 * f[n - 1] - 104 * f[n - 2] + 114 * f[n - 3] - 56 * f[n - 4] + 11 * f[n - 5]);
  } else {
    throw std::invalid_argument("stencil order must be 1 or 2");
  }
  return d;
}

}  // namespace detail

ProfileFunction ProfileFunction::from_expr(Expr e) {
  ProfileFunction f;
  Expr d1 = differentiate(e);
  Expr d2 = differentiate(d1);
  f.exprs_ = std::array<Expr, 3>{std::move(e), std::move(d1), std::move(d2)};
  return f;
}

ProfileFunction ProfileFunction::from_samples(double s0, double h, std::vector<double> values) {
  if (values.size() < 5) throw std::invalid_argument("sampled profile needs at least 5 points");
  if (!(h > 0.0)) throw std::invalid_argument("sample step must be positive");
  ProfileFunction f;
  f.s0_ = s0;
  f.h_ = h;
  f.nodes_[1] = detail::stencil_derivative(values, h, 1);
  f.nodes_[2] = detail::stencil_derivative(values, h, 2);
  f.nodes_[0] = std::move(values);
  return f;
}

std::string ProfileFunction::describe() const {
  if (exprs_) return (*exprs_)[0].to_string();
  std::ostringstream os;
  os << "samples(" << nodes_[0].size() << " points from " << s0_ << ", step " << h_ << ")";
  return os.str();
}

CurvatureProfile::CurvatureProfile(ProfileFunction kappa, ProfileFunction tau, Domain domain, double step)
    : kappa_(std::move(kappa)), tau_(std::move(tau)), domain_(domain), step_(step) {
  if (!(domain_.hi > domain_.lo)) throw std::invalid_argument("profile domain must satisfy lo < hi");
  if (!(step_ > 0.0)) step_ = domain_.length() / 2000.0;
}

CurvatureProfile CurvatureProfile::parse(const std::string& kappa, const std::string& tau, Domain domain,
                                         double step) {
  return CurvatureProfile(ProfileFunction::from_expr(curvemates::parse(kappa)),
                          ProfileFunction::from_expr(curvemates::parse(tau)), domain, step);
}

CurvatureProfile CurvatureProfile::restricted(Domain d, double step) const {
  return CurvatureProfile(kappa_, tau_, d, step > 0.0 ? step : step_);
}

double harmonic_curvature(const CurvatureProfile& p, const GroupSpec& spec, double s) {
  const double k = p.kappa().value(s);
  if (!(k > 0.0)) throw FrenetViolation("Frenet condition violated: kappa <= 0", {s});
  return (p.tau().value(s) - spec.lie_torsion()) / k;
}

double harmonic_curvature_derivative(const CurvatureProfile& p, const GroupSpec& spec, double s) {
  const double k = p.kappa().value(s);
  if (!(k > 0.0)) throw FrenetViolation("Frenet condition violated: kappa <= 0", {s});
  const double delta = p.tau().value(s) - spec.lie_torsion();
  return (p.tau().derivative(s) * k - delta * p.kappa().derivative(s)) / (k * k);
}

double sigma(const CurvatureProfile& p, const GroupSpec& spec, double s) {
  const double dh = harmonic_curvature_derivative(p, spec, s);
  if (std::abs(dh) <= kSingularSigmaThreshold) throw SingularSigma(s);
  const double h = harmonic_curvature(p, spec, s);
  return p.kappa().value(s) * std::pow(h * h + 1.0, 1.5) / dh;
}

double omega(const CurvatureProfile& p, const GroupSpec& spec, double s) {
  return std::hypot(p.tau().value(s) - spec.lie_torsion(), p.kappa().value(s));
}

DarbouxVectors darboux_vectors(const CurvatureProfile& p, const GroupSpec& spec, double s) {
  const double k = p.kappa().value(s);
  const double t = p.tau().value(s);
  const double delta = t - spec.lie_torsion();
  return DarbouxVectors{Eigen::Vector3d(t, 0.0, k), Eigen::Vector3d(delta, 0.0, k), Eigen::Vector3d(-k, 0.0, delta)};
}

ApparatusSample apparatus(const CurvatureProfile& p, const GroupSpec& spec, double s) {
  ApparatusSample a;
  a.s = s;
  a.kappa = p.kappa().value(s);
  a.tau = p.tau().value(s);
  a.tau_g = spec.lie_torsion();
  a.harmonic = harmonic_curvature(p, spec, s);
  a.harmonic_derivative = harmonic_curvature_derivative(p, spec, s);
  if (std::abs(a.harmonic_derivative) > kSingularSigmaThreshold)
    a.sigma = a.kappa * std::pow(a.harmonic * a.harmonic + 1.0, 1.5) / a.harmonic_derivative;
  a.omega = std::hypot(a.tau - a.tau_g, a.kappa);
  a.vectors = darboux_vectors(p, spec, s);
  return a;
}

FrenetCheck check_frenet(const CurvatureProfile& p, double tolerance) {
  const UniformGrid g = p.grid();
  FrenetCheck check;
  std::vector<bool> bad(g.count, false);
  for (std::size_t i = 0; i < g.count; ++i) {
    const double s = g.at(i);
    if (!(p.kappa().value(s) > tolerance)) {
      bad[i] = true;
      check.violations.push_back(s);
    }
  }
  if (check.violations.empty()) return check;
  check.satisfied = false;
  std::size_t first = 0;
  while (first < g.count && bad[first]) ++first;
  std::size_t last = g.count;
  while (last > first && bad[last - 1]) --last;
  if (first < last && last - first >= 5 &&
      std::none_of(bad.begin() + static_cast<std::ptrdiff_t>(first), bad.begin() + static_cast<std::ptrdiff_t>(last),
                   [](bool b) { return b; })) {
    check.suggested_domain = Domain{g.at(first), g.at(last - 1)};
  }
  return check;
}

void require_frenet(const CurvatureProfile& p, double tolerance) {
  const FrenetCheck check = check_frenet(p, tolerance);
  if (check.satisfied) return;
  std::ostringstream os;
  os.precision(17);
  os << "Frenet condition violated: kappa <= 0 at " << check.violations.size() << " grid point(s), first at s="
     << check.violations.front();
  if (check.suggested_domain)
    os << "; usable domain " << check.suggested_domain->lo << ":" << check.suggested_domain->hi;
  if (check.suggested_domain)
    throw FrenetViolation(os.str(), check.violations, {check.suggested_domain->lo, check.suggested_domain->hi}, true);
  throw FrenetViolation(os.str(), check.violations);
}

}  // namespace curvemates
