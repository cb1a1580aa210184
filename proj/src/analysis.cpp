#include "curvemates/analysis.hpp"

#include <algorithm>
#include <functional>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <Eigen/QR>

namespace curvemates {

namespace {

/// Estimated profiles carry finite-difference noise that 1/(tau - tau_G)
/// amplifies near zeros; those samples are left out of spherical checks.
constexpr double kEstimatedZeroThreshold = 0.1;
/// Bertrand comparisons skip samples where the conjugate normal is ill defined.
constexpr double kBertrandWindow = 1e-3;

struct Samples {
  std::vector<double> s, k, dk, d2k, d, dd;
  [[nodiscard]] std::size_t size() const { return s.size(); }
};

Samples sample(const CurvatureProfile& p, const GroupSpec& spec) {
  const UniformGrid g = p.grid();
  const double tg = spec.lie_torsion();
  Samples out;
  for (std::size_t i = 0; i < g.count; ++i) {
    const double s = g.at(i);
    out.s.push_back(s);
    out.k.push_back(p.kappa().value(s));
    out.dk.push_back(p.kappa().derivative(s, 1));
    out.d2k.push_back(p.kappa().derivative(s, 2));
    out.d.push_back(p.tau().value(s) - tg);
    out.dd.push_back(p.tau().derivative(s, 1));
  }
  return out;
}

double max_abs(const std::vector<double>& x) {
  double m = 0.0;
  for (double v : x) m = std::max(m, std::abs(v));
  return m;
}

double mean(const std::vector<double>& x) {
  double m = 0.0;
  for (double v : x) m += v;
  return x.empty() ? 0.0 : m / static_cast<double>(x.size());
}

std::vector<double> harmonic_values(const Samples& a) {
  std::vector<double> h(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) h[i] = a.d[i] / a.k[i];
  return h;
}

std::vector<double> harmonic_derivatives(const Samples& a) {
  std::vector<double> h(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) h[i] = (a.dd[i] * a.k[i] - a.d[i] * a.dk[i]) / (a.k[i] * a.k[i]);
  return h;
}

Verdict general_helix_verdict(const Samples& a, double tol) {
  const double spread = relative_spread(harmonic_values(a));
  return Verdict{spread <= tol, spread, tol, {}};
}

Verdict slant_verdict(const Samples& a, const ToleranceSet& tols, double tol) {
  const auto h = harmonic_values(a);
  const auto dh = harmonic_derivatives(a);
  std::vector<double> sig(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::abs(dh[i]) <= tols.singular_sigma) {
      std::ostringstream os;
      os << "sigma undefined: H' = 0 at s=" << a.s[i];
      return Verdict{false, std::nullopt, tol, os.str()};
    }
    sig[i] = a.k[i] * std::pow(h[i] * h[i] + 1.0, 1.5) / dh[i];
  }
  const double spread = relative_spread(sig);
  return Verdict{spread <= tol, spread, tol, {}};
}

Verdict rectifying_verdict(const Samples& a, const ToleranceSet& tols, double tol) {
  const auto h = harmonic_values(a);
  const std::size_t n = a.size();
  Eigen::MatrixXd m(n, 2);
  Eigen::VectorXd y(n);
  for (std::size_t i = 0; i < n; ++i) {
    m(static_cast<Eigen::Index>(i), 0) = a.s[i];
    m(static_cast<Eigen::Index>(i), 1) = 1.0;
    y(static_cast<Eigen::Index>(i)) = h[i];
  }
  const Eigen::Vector2d coef = m.colPivHouseholderQr().solve(y);
  const double rms = std::sqrt((m * coef - y).squaredNorm() / static_cast<double>(n));
  const auto [lo, hi] = std::minmax_element(h.begin(), h.end());
  const double range = *hi - *lo;
  Verdict v;
  v.tolerance = tol;
  std::ostringstream os;
  os.precision(17);
  os << "H = " << coef(0) << " s + " << coef(1);
  v.note = os.str();
  if (std::abs(coef(0)) < tols.rectifying_slope) {
    v.note += " (slope below threshold)";
    v.residual = rms;
    return v;
  }
  v.residual = rms / range;
  v.pass = rms <= tol * range;
  return v;
}

Verdict spread_verdict(const std::vector<double>& x, double tol, bool want_constant) {
  const double spread = relative_spread(x);
  return Verdict{want_constant ? spread <= tol : spread > tol, spread, tol, {}};
}

VerificationReport make_report(std::string theorem, double tol) {
  VerificationReport r;
  r.theorem = std::move(theorem);
  r.tolerance = tol;
  return r;
}

void not_applicable(VerificationReport& r, std::string note) {
  r.hypothesis = false;
  r.hypothesis_note = std::move(note);
  r.status = VerificationStatus::NotApplicable;
}

void settle(VerificationReport& r) {
  r.status = r.residual <= r.tolerance ? VerificationStatus::Pass : VerificationStatus::Fail;
}

/// Biconditional: passes when the two verdicts agree.
void settle_iff(VerificationReport& r, bool lhs, bool rhs) {
  r.details.emplace_back("lhs", lhs ? 1.0 : 0.0);
  r.details.emplace_back("rhs", rhs ? 1.0 : 0.0);
  r.residual = lhs == rhs ? 0.0 : 1.0;
  r.tolerance = 0.0;
  r.status = lhs == rhs ? VerificationStatus::Pass : VerificationStatus::Fail;
}

double constancy_tol(const MatePair& pair, const ToleranceSet& tols) {
  return pair.estimated ? tols.constancy_estimated : tols.constancy;
}

double verify_tol(const MatePair& pair, const ToleranceSet& tols) {
  return pair.estimated ? tols.verify_estimated : tols.verify_analytic;
}

double zero_tol(const MatePair& pair, const ToleranceSet& tols) {
  return pair.estimated ? kEstimatedZeroThreshold : tols.mate_zero;
}

/// base = +-q checked as base^2 = q^2, which needs no square root near the
/// zeros of q and leaves the sign free to switch only where both vanish.
double squared_residual(const std::vector<double>& base, const std::vector<double>& q2,
                        const std::vector<bool>& exempt, std::vector<double>& trace) {
  trace.assign(base.size(), 0.0);
  double worst = 0.0;
  for (std::size_t i = 0; i < base.size(); ++i) {
    if (exempt[i]) continue;
    trace[i] = std::abs(base[i] * base[i] - q2[i]);
    worst = std::max(worst, trace[i]);
  }
  return worst;
}

double golden_section(const std::function<double(double)>& f, double a, double b, int iterations = 80) {
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = f(c), fd = f(d);
  for (int i = 0; i < iterations; ++i) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = f(d);
    }
  }
  return fc < fd ? c : d;
}

std::vector<Eigen::Vector3d> normals_from_tangents(const std::vector<Eigen::Vector3d>& t, double h,
                                                   std::vector<bool>& ok) {
  const auto dt = detail::five_point(t, h);
  std::vector<Eigen::Vector3d> n(t.size(), Eigen::Vector3d::Zero());
  ok.assign(t.size(), false);
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double k = dt[i].norm();
    if (k >= 1e-9) {
      n[i] = dt[i] / k;
      ok[i] = true;
    }
  }
  return n;
}

bool torsion_vanishes(const std::vector<double>& delta, double threshold) {
  return std::all_of(delta.begin(), delta.end(), [&](double d) { return std::abs(d) <= threshold; });
}

}  // namespace

std::vector<std::pair<std::string, double>> ToleranceSet::entries() const {
  return {{"constancy", constancy},
          {"constancy_estimated", constancy_estimated},
          {"singular_sigma", singular_sigma},
          {"mate_zero", mate_zero},
          {"rectifying_slope", rectifying_slope},
          {"verify_analytic", verify_analytic},
          {"verify_estimated", verify_estimated},
          {"tangency", tangency},
          {"bertrand", bertrand},
          {"orthogonality", orthogonality}};
}

bool ToleranceSet::set(std::string_view name, double value) {
  std::string key(name);
  std::replace(key.begin(), key.end(), '-', '_');
  double ToleranceSet::*fields[] = {&ToleranceSet::constancy,        &ToleranceSet::constancy_estimated,
                                    &ToleranceSet::singular_sigma,   &ToleranceSet::mate_zero,
                                    &ToleranceSet::rectifying_slope, &ToleranceSet::verify_analytic,
                                    &ToleranceSet::verify_estimated, &ToleranceSet::tangency,
                                    &ToleranceSet::bertrand,         &ToleranceSet::orthogonality};
  const auto names = entries();
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i].first == key) {
      this->*fields[i] = value;
      return true;
    }
  }
  return false;
}

double relative_spread(const std::vector<double>& x) {
  if (x.empty()) return 0.0;
  const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
  return (*hi - *lo) / std::max(1.0, max_abs(x));
}

SphericalCheck spherical_check(const CurvatureProfile& p, const GroupSpec& spec, double tol, double zero_threshold) {
  const Samples a = sample(p, spec);
  SphericalCheck out;
  if (torsion_vanishes(a.d, zero_threshold)) {
    out.case_name = "planar_case";
    out.radius_spread = relative_spread(a.k);
    out.radius = 1.0 / mean(a.k);
    out.is_spherical = out.radius_spread <= tol;
    return out;
  }
  out.case_name = "general_case";
  std::vector<double> r2;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double k = a.k[i], d = a.d[i];
    if (std::abs(d) <= zero_threshold) continue;
    const double rho1 = -a.dk[i] / (k * k);
    const double rho2 = -a.d2k[i] / (k * k) + 2.0 * a.dk[i] * a.dk[i] / (k * k * k);
    const double g = rho1 / d;
    const double dg = (rho2 * d - rho1 * a.dd[i]) / (d * d);
    out.curvature_residual = std::max(out.curvature_residual, std::abs(dg + d / k));
    out.trace_s.push_back(a.s[i]);
    out.trace_r.push_back(g * g + 1.0 / (k * k));
  }
  const double mr = mean(out.trace_r);
  for (double v : out.trace_r) out.radius_spread = std::max(out.radius_spread, std::abs(v - mr) / mr);
  out.radius = std::sqrt(mr);
  out.is_spherical = out.radius_spread <= tol && out.curvature_residual <= tol;

  std::size_t i = 0;
  while (i < a.size()) {
    if (std::abs(a.d[i]) <= zero_threshold) {
      ++i;
      continue;
    }
    const int sg = a.d[i] > 0 ? 1 : -1;
    std::size_t j = i;
    std::vector<double> seg_r;
    while (j < a.size() && std::abs(a.d[j]) > zero_threshold && (a.d[j] > 0 ? 1 : -1) == sg) {
      const auto it = std::lower_bound(out.trace_s.begin(), out.trace_s.end(), a.s[j]);
      seg_r.push_back(out.trace_r[static_cast<std::size_t>(it - out.trace_s.begin())]);
      ++j;
    }
    out.segments.push_back({Domain{a.s[i], a.s[j - 1]}, sg, std::sqrt(mean(seg_r))});
    i = j;
  }
  return out;
}

const Verdict& ClassificationReport::at(std::string_view name) const {
  for (const auto& [n, v] : verdicts)
    if (n == name) return v;
  throw std::out_of_range("no verdict named " + std::string(name));
}

ClassificationReport classify(const CurvatureProfile& p, const GroupSpec& spec, const ToleranceSet& tols,
                              double tol) {
  require_frenet(p);
  const Samples a = sample(p, spec);
  ClassificationReport r;
  r.tolerance = tol;
  const Verdict general = general_helix_verdict(a, tol);
  r.verdicts.emplace_back("general_helix", general);
  r.verdicts.emplace_back("slant_helix", slant_verdict(a, tols, tol));
  r.verdicts.emplace_back("rectifying", rectifying_verdict(a, tols, tol));
  r.spherical = spherical_check(p, spec, tol, tols.mate_zero);
  Verdict sph{r.spherical.is_spherical, std::max(r.spherical.radius_spread, r.spherical.curvature_residual), tol,
              r.spherical.case_name};
  r.verdicts.emplace_back("spherical", sph);
  const Verdict k_const = spread_verdict(a.k, tol, true);
  const Verdict t_const = spread_verdict(a.d, tol, true);
  r.verdicts.emplace_back("salkowski", Verdict{k_const.pass && !t_const.pass, k_const.residual, tol, {}});
  r.verdicts.emplace_back("anti_salkowski", Verdict{!k_const.pass && t_const.pass, t_const.residual, tol, {}});
  r.verdicts.emplace_back("circular_helix", Verdict{k_const.pass && t_const.pass,
                                                    std::max(*k_const.residual, *t_const.residual), tol, {}});
  r.segments = torsion_sign_segments(p, spec);
  return r;
}

std::optional<double> VerificationReport::detail(std::string_view name) const {
  for (const auto& [n, v] : details)
    if (n == name) return v;
  return std::nullopt;
}

std::string_view to_string(VerificationStatus s) {
  switch (s) {
    case VerificationStatus::Pass:
      return "pass";
    case VerificationStatus::Fail:
      return "fail";
    case VerificationStatus::NotApplicable:
      return "not_applicable";
  }
  return "fail";
}

MatePair analytic_natural_pair(const CurvatureProfile& p, const GroupSpec& spec) {
  return MatePair{spec, p, natural_mate_apparatus(p, spec).profile, false};
}

MatePair estimated_natural_pair(const CurvatureProfile& p, const GroupSpec& spec, double h, std::size_t stride) {
  const auto traj = synthesize<double>(p, spec, h);
  const auto curve = integrate_direction_curve(traj, DirectionField::PrincipalNormal);
  const auto parent_est = estimate_apparatus(traj);
  const auto mate_est = estimate_apparatus(curve, traj.s0, traj.h, spec);
  // the outermost samples carry one-sided stencils
  const CurvatureProfile parent = parent_est.to_profile(stride);
  const CurvatureProfile mate = mate_est.to_profile(stride);
  const double trim = 2.0 * parent.step();
  const Domain inner{parent.domain().lo + trim, parent.domain().hi - trim};
  return MatePair{spec, parent.restricted(inner), mate.restricted(inner), true};
}

VerificationReport verify_thm_4_1(const MatePair& pair, const ToleranceSet& tols) {
  VerificationReport r = make_report("thm4_1", verify_tol(pair, tols));
  const Samples parent = sample(pair.parent, pair.spec);
  const double spread = relative_spread(parent.k);
  r.details.emplace_back("kappa_spread", spread);
  const SphericalCheck sc = spherical_check(pair.mate, pair.spec, r.tolerance, zero_tol(pair, tols));
  if (spread > constancy_tol(pair, tols)) {
    not_applicable(r, "kappa is not constant");
    return r;
  }
  const double c = mean(parent.k);
  const double expected = 1.0 / c;
  const double radius = sc.radius.value_or(std::numeric_limits<double>::infinity());
  r.residual = std::max({sc.radius_spread, sc.curvature_residual, std::abs(radius - expected)});
  r.details.emplace_back("c", c);
  r.details.emplace_back("expected_radius", expected);
  r.details.emplace_back("radius", radius);
  r.details.emplace_back("radius_spread", sc.radius_spread);
  r.details.emplace_back("curvature_residual", sc.curvature_residual);
  r.trace_s = sc.trace_s;
  for (double v : sc.trace_r) r.trace.push_back(std::abs(std::sqrt(v) - expected));
  settle(r);
  return r;
}

VerificationReport verify_thm_5_1(const MatePair& pair, const ToleranceSet& tols) {
  VerificationReport r = make_report("thm5_1", verify_tol(pair, tols));
  const Samples mate = sample(pair.mate, pair.spec);
  const double spread = relative_spread(mate.k);
  r.details.emplace_back("mate_kappa_spread", spread);
  if (spread > constancy_tol(pair, tols)) {
    not_applicable(r, "natural mate curvature is not constant");
    return r;
  }
  const double c = mean(mate.k);
  const double lo = pair.mate.domain().lo;
  const double phi0 = std::atan2(pair.parent.tau().value(lo) - pair.spec.lie_torsion(), pair.parent.kappa().value(lo));
  const CurvatureProfile rec =
      constant_curvature_inverse(pair.mate.tau(), c, pair.spec, pair.mate.domain(), pair.mate.step(), phi0);
  const UniformGrid g = rec.grid();
  for (std::size_t i = 0; i < g.count; ++i) {
    const double s = g.at(i);
    const double e = std::max(std::abs(rec.kappa().samples()[i] - pair.parent.kappa().value(s)),
                              std::abs(rec.tau().samples()[i] - pair.parent.tau().value(s)));
    r.trace_s.push_back(s);
    r.trace.push_back(e);
    r.residual = std::max(r.residual, e);
  }
  r.details.emplace_back("c", c);
  r.details.emplace_back("phi0", phi0);
  settle(r);
  return r;
}

VerificationReport verify_thm_5_2(const MatePair& pair, const ToleranceSet& tols) {
  VerificationReport r = make_report("thm5_2", verify_tol(pair, tols));
  const Samples mate = sample(pair.mate, pair.spec);
  const double spread = relative_spread(mate.k);
  r.details.emplace_back("mate_kappa_spread", spread);
  if (spread > constancy_tol(pair, tols)) {
    not_applicable(r, "natural mate curvature is not constant");
    return r;
  }
  const SphericalCheck sc = spherical_check(pair.parent, pair.spec, r.tolerance, zero_tol(pair, tols));
  if (!sc.is_spherical || !sc.radius) {
    not_applicable(r, "parent is not spherical");
    return r;
  }
  const double c = mean(mate.k), rad = *sc.radius, a = c * c * rad;
  r.details.emplace_back("c", c);
  r.details.emplace_back("radius", rad);
  r.details.emplace_back("a", a);
  if (a < c - r.tolerance) {
    r.residual = c - a;
    r.hypothesis_note = "a = c^2 r is below c";
    r.status = VerificationStatus::Fail;
    return r;
  }
  const double b2 = std::max(0.0, a * a - c * c);
  auto closed = [&](double x) {
    const double sn = std::sin(c * x);
    return c * c * std::sqrt(b2) * std::cos(c * x) / (c * c + b2 * sn * sn);
  };
  auto residual = [&](double phi) {
    double worst = 0.0;
    for (std::size_t i = 0; i < mate.size(); ++i)
      worst = std::max(worst, std::abs(std::abs(mate.d[i]) - std::abs(closed(mate.s[i] + phi))));
    return worst;
  };
  const double period = 2.0 * std::numbers::pi / c;
  constexpr int kScan = 256;
  double best = 0.0, best_val = std::numeric_limits<double>::infinity();
  for (int i = 0; i < kScan; ++i) {
    const double phi = period * i / kScan;
    const double v = residual(phi);
    if (v < best_val) {
      best_val = v;
      best = phi;
    }
  }
  const double step = period / kScan;
  const double phi = golden_section(residual, best - step, best + step);
  r.residual = std::min(best_val, residual(phi));
  const double used = residual(phi) <= best_val ? phi : best;
  r.details.emplace_back("phase", used);
  for (std::size_t i = 0; i < mate.size(); ++i) {
    r.trace_s.push_back(mate.s[i]);
    r.trace.push_back(std::abs(std::abs(mate.d[i]) - std::abs(closed(mate.s[i] + used))));
  }
  settle(r);
  return r;
}

VerificationReport verify_thm_6_2(const MatePair& pair, const ToleranceSet& tols) {
  VerificationReport r = make_report("thm6_2", verify_tol(pair, tols));
  const Samples parent = sample(pair.parent, pair.spec);
  const double spread = relative_spread(parent.d);
  const double c = mean(parent.d);
  r.details.emplace_back("delta_spread", spread);
  if (spread > constancy_tol(pair, tols) || std::abs(c) <= tols.mate_zero) {
    not_applicable(r, "tau - tau_G is not a nonzero constant");
    return r;
  }
  const SphericalCheck sc = spherical_check(pair.mate, pair.spec, r.tolerance, zero_tol(pair, tols));
  const double expected = 1.0 / std::abs(c);
  const double radius = sc.radius.value_or(std::numeric_limits<double>::infinity());
  r.residual = std::max({sc.radius_spread, sc.curvature_residual, std::abs(radius - expected)});
  r.details.emplace_back("c", c);
  r.details.emplace_back("expected_radius", expected);
  r.details.emplace_back("radius", radius);
  r.details.emplace_back("radius_spread", sc.radius_spread);
  r.details.emplace_back("curvature_residual", sc.curvature_residual);
  r.trace_s = sc.trace_s;
  for (double v : sc.trace_r) r.trace.push_back(std::abs(std::sqrt(v) - expected));
  settle(r);
  return r;
}

VerificationReport verify_cor_3_1(const MatePair& pair, const ToleranceSet& tols) {
  VerificationReport r = make_report("cor3_1", 0.0);
  const double ct = constancy_tol(pair, tols);
  const Samples parent = sample(pair.parent, pair.spec);
  const Samples mate = sample(pair.mate, pair.spec);
  const double spread = relative_spread(harmonic_values(parent));
  const double offset = max_abs(mate.d);
  r.details.emplace_back("h_spread", spread);
  r.details.emplace_back("max_mate_torsion_offset", offset);
  r.trace_s = mate.s;
  for (double d : mate.d) r.trace.push_back(std::abs(d));
  settle_iff(r, spread <= ct, offset <= ct);
  return r;
}

VerificationReport verify_cor_3_2(const MatePair& pair, const ToleranceSet& tols) {
  VerificationReport r = make_report("cor3_2", 0.0);
  const double ct = constancy_tol(pair, tols);
  const Samples parent = sample(pair.parent, pair.spec);
  const Samples mate = sample(pair.mate, pair.spec);
  const auto dh = harmonic_derivatives(parent);
  if (std::all_of(dh.begin(), dh.end(), [&](double v) { return std::abs(v) <= tols.singular_sigma; })) {
    not_applicable(r, "H is constant: sigma undefined everywhere");
    return r;
  }
  const Verdict slant = slant_verdict(parent, tols, ct);
  const Verdict mate_general = general_helix_verdict(mate, ct);
  if (slant.residual) r.details.emplace_back("sigma_spread", *slant.residual);
  r.details.emplace_back("mate_h_spread", *mate_general.residual);
  settle_iff(r, slant.pass, mate_general.pass);
  return r;
}

VerificationReport verify_cor_3_3(const MatePair& pair, const ToleranceSet& tols) {
  VerificationReport r = make_report("cor3_3", 0.0);
  const double ct = constancy_tol(pair, tols);
  const Samples parent = sample(pair.parent, pair.spec);
  const Samples mate = sample(pair.mate, pair.spec);
  const Verdict rect = rectifying_verdict(parent, tols, ct);
  std::vector<double> q(parent.size());
  for (std::size_t i = 0; i < q.size(); ++i) q[i] = mate.d[i] * mate.k[i] * mate.k[i] / (parent.k[i] * parent.k[i]);
  const double a = mean(q);
  const bool rhs = relative_spread(q) <= ct && std::abs(a) >= tols.rectifying_slope;
  double identity = 0.0;
  r.trace_s = parent.s;
  for (std::size_t i = 0; i < q.size(); ++i) {
    const double e = std::abs(a * parent.k[i] * parent.k[i] - mate.d[i] * mate.k[i] * mate.k[i]);
    r.trace.push_back(e);
    identity = std::max(identity, e);
  }
  r.details.emplace_back("a", a);
  r.details.emplace_back("ratio_spread", relative_spread(q));
  r.details.emplace_back("identity_residual", identity);
  settle_iff(r, rect.pass, rhs);
  return r;
}

VerificationReport verify_cor_3_4(const MatePair& pair, const ToleranceSet& tols) {
  VerificationReport r = make_report("cor3_4", verify_tol(pair, tols));
  const Samples parent = sample(pair.parent, pair.spec);
  const Samples mate = sample(pair.mate, pair.spec);
  if (relative_spread(parent.k) <= constancy_tol(pair, tols)) {
    not_applicable(r, "kappa is constant: R = 1/kappa^2 for any torsion");
    return r;
  }
  const SphericalCheck sc = spherical_check(pair.parent, pair.spec, r.tolerance, zero_tol(pair, tols));
  const double rad = sc.radius.value_or(1.0 / mean(parent.k));
  std::vector<double> base(parent.size()), q(parent.size());
  std::vector<bool> exempt(parent.size(), false);
  for (std::size_t i = 0; i < parent.size(); ++i) {
    const double k = parent.k[i];
    base[i] = mate.dk[i] / mate.k[i] - mate.d[i] * parent.d[i] / k;
    q[i] = parent.d[i] * parent.d[i] * (rad * rad * k * k - 1.0);
  }
  const double identity = squared_residual(base, q, exempt, r.trace);
  r.trace_s = parent.s;
  r.details.emplace_back("r", rad);
  r.details.emplace_back("identity_residual", identity);
  settle_iff(r, sc.is_spherical, identity <= verify_tol(pair, tols));
  r.residual = identity;
  r.tolerance = verify_tol(pair, tols);
  return r;
}

VerificationReport verify_cor_5_2(const MatePair& pair, const ToleranceSet& tols) {
  VerificationReport r = make_report("cor5_2", verify_tol(pair, tols));
  const Samples parent = sample(pair.parent, pair.spec);
  const Samples mate = sample(pair.mate, pair.spec);
  if (relative_spread(mate.k) > constancy_tol(pair, tols)) {
    not_applicable(r, "natural mate curvature is not constant");
    return r;
  }
  const SphericalCheck sc = spherical_check(pair.parent, pair.spec, r.tolerance, zero_tol(pair, tols));
  if (!sc.is_spherical || !sc.radius) {
    not_applicable(r, "parent is not spherical");
    return r;
  }
  const double rad = *sc.radius;
  std::vector<double> base(parent.size()), q(parent.size());
  std::vector<bool> exempt(parent.size());
  for (std::size_t i = 0; i < parent.size(); ++i) {
    const double k = parent.k[i];
    base[i] = mate.d[i];
    q[i] = k * k * (rad * rad * k * k - 1.0);
    exempt[i] = std::abs(parent.d[i]) <= tols.mate_zero;
  }
  r.residual = squared_residual(base, q, exempt, r.trace);
  r.trace_s = parent.s;
  r.details.emplace_back("r", rad);
  settle(r);
  return r;
}

namespace {

/// Maximal runs of grid samples with |tau - tau_G| > threshold and one sign.
std::vector<MateSegment> torsion_runs(const CurvatureProfile& p, const GroupSpec& spec, double threshold) {
  const Samples a = sample(p, spec);
  std::vector<MateSegment> runs;
  std::size_t i = 0;
  while (i < a.size()) {
    if (std::abs(a.d[i]) <= threshold) {
      ++i;
      continue;
    }
    const int sg = a.d[i] > 0 ? 1 : -1;
    std::size_t j = i;
    while (j < a.size() && std::abs(a.d[j]) > threshold && (a.d[j] > 0 ? 1 : -1) == sg) ++j;
    runs.push_back({Domain{a.s[i], a.s[j - 1]}, sg});
    i = j;
  }
  return runs;
}

VerificationReport conjugate_iff(const char* id, const CurvatureProfile& p, const GroupSpec& spec,
                                 const ToleranceSet& tols, bool slant) {
  VerificationReport r = make_report(id, 0.0);
  std::optional<MateApparatus> found;
  try {
    found = conjugate_mate_apparatus(p, spec);
  } catch (const NotAFrenetMate&) {
    not_applicable(r, "tau - tau_G vanishes identically: conjugate mate is not a Frenet curve");
    return r;
  }
  const MateApparatus& conj = *found;
  bool lhs = true, rhs = true;
  int used = 0;
  double spread_a = 0.0, spread_b = 0.0;
  for (const MateSegment& seg : torsion_runs(p, spec, tols.mate_zero)) {
    if (seg.domain.length() < 4.0 * p.step()) continue;
    const Samples a = sample(p.restricted(seg.domain), spec);
    const Samples b = sample(conj.profile.restricted(seg.domain), spec);
    const Verdict va = slant ? slant_verdict(a, tols, tols.constancy) : general_helix_verdict(a, tols.constancy);
    const Verdict vb = slant ? slant_verdict(b, tols, tols.constancy) : general_helix_verdict(b, tols.constancy);
    spread_a = std::max(spread_a, va.residual.value_or(std::numeric_limits<double>::infinity()));
    spread_b = std::max(spread_b, vb.residual.value_or(std::numeric_limits<double>::infinity()));
    lhs = lhs && va.pass;
    rhs = rhs && vb.pass;
    ++used;
  }
  if (used == 0) {
    not_applicable(r, "no conjugate segment long enough to classify");
    return r;
  }
  r.details.emplace_back("segments", used);
  r.details.emplace_back("parent_spread", spread_a);
  r.details.emplace_back("conjugate_spread", spread_b);
  settle_iff(r, lhs, rhs);
  return r;
}

}  // namespace

VerificationReport verify_cor_6_1(const CurvatureProfile& p, const GroupSpec& spec, const ToleranceSet& tols) {
  return conjugate_iff("cor6_1", p, spec, tols, false);
}

VerificationReport verify_cor_6_2(const CurvatureProfile& p, const GroupSpec& spec, const ToleranceSet& tols) {
  return conjugate_iff("cor6_2", p, spec, tols, true);
}

MateCurves integrate_mate_curves(const CurvatureProfile& p, const GroupSpec& spec, double h) {
  MateCurves c{synthesize<double>(p, spec, h), {}, {}};
  c.natural = integrate_direction_curve(c.parent, DirectionField::PrincipalNormal);
  c.conjugate = integrate_direction_curve(c.parent, DirectionField::Binormal);
  return c;
}

VerificationReport verify_mate_geometry(const FrameTrajectory<double>& parent,
                                        const std::vector<GroupElement<double>>& mate, MateKind kind,
                                        const ToleranceSet& tols) {
  if (mate.size() != parent.size()) {
    std::ostringstream os;
    os << "mate has " << mate.size() << " samples, parent has " << parent.size();
    throw GridMismatch(os.str());
  }
  const bool conj = kind == MateKind::Conjugate;
  VerificationReport r = make_report(conj ? "conjugate_geometry" : "natural_geometry", 1.0);
  if (conj && torsion_vanishes(parent.delta, tols.mate_zero)) {
    not_applicable(r, "tau - tau_G vanishes identically: conjugate mate is not a Frenet curve");
    return r;
  }
  const auto t = estimate_tangents(mate, parent.h);
  std::vector<bool> ok;
  const auto n = normals_from_tangents(t, parent.h, ok);
  double tangency = 0.0, bertrand = 0.0;
  for (std::size_t i = kEstimatorMargin; i + kEstimatorMargin < parent.size(); ++i) {
    const Frame<double>& f = parent.frames[i];
    const double e = (t[i] - (conj ? f.b : f.n)).norm();
    tangency = std::max(tangency, e);
    double b = 0.0;
    if (conj && ok[i] && std::abs(parent.delta[i]) >= kBertrandWindow) {
      b = std::min((n[i] - f.n).norm(), (n[i] + f.n).norm());
      bertrand = std::max(bertrand, b);
    }
    r.trace_s.push_back(parent.s(i));
    r.trace.push_back(std::max(e / tols.tangency, b / tols.bertrand));
  }
  r.details.emplace_back("tangency_residual", tangency);
  r.details.emplace_back("tangency_tolerance", tols.tangency);
  if (conj) {
    r.details.emplace_back("bertrand_residual", bertrand);
    r.details.emplace_back("bertrand_tolerance", tols.bertrand);
  }
  r.residual = std::max(tangency / tols.tangency, conj ? bertrand / tols.bertrand : 0.0);
  settle(r);
  return r;
}

VerificationReport verify_cor_6_3(const MateCurves& curves, const ToleranceSet& tols) {
  VerificationReport r = make_report("cor6_3", tols.orthogonality);
  const std::size_t n = curves.parent.size();
  if (curves.natural.size() != n || curves.conjugate.size() != n)
    throw GridMismatch("mate curves and parent have different sample counts");
  if (torsion_vanishes(curves.parent.delta, tols.mate_zero)) {
    not_applicable(r, "tau - tau_G vanishes identically");
    return r;
  }
  const double h = curves.parent.h;
  const auto t = estimate_tangents(curves.parent.positions, h);
  const auto tn = estimate_tangents(curves.natural, h);
  const auto tc = estimate_tangents(curves.conjugate, h);
  double a = 0.0, b = 0.0, c = 0.0;
  for (std::size_t i = kEstimatorMargin; i + kEstimatorMargin < n; ++i) {
    const double x = std::abs(t[i].dot(tn[i])), y = std::abs(tn[i].dot(tc[i])), z = std::abs(t[i].dot(tc[i]));
    a = std::max(a, x);
    b = std::max(b, y);
    c = std::max(c, z);
    r.trace_s.push_back(curves.parent.s(i));
    r.trace.push_back(std::max({x, y, z}));
  }
  r.details.emplace_back("gamma_natural", a);
  r.details.emplace_back("natural_conjugate", b);
  r.details.emplace_back("gamma_conjugate", c);
  r.residual = std::max({a, b, c});
  settle(r);
  return r;
}

VerificationReport verify_cor_6_4(const MateCurves& curves, const ToleranceSet& tols) {
  VerificationReport r = verify_mate_geometry(curves.parent, curves.conjugate, MateKind::Conjugate, tols);
  r.theorem = "cor6_4";
  return r;
}

SphereFit left_shift_sphere_fit(const std::vector<Eigen::Vector3d>& alpha) {
  const auto n = static_cast<Eigen::Index>(alpha.size());
  if (n < 4) throw DegenerateFit("sphere fit needs at least 4 points");
  Eigen::MatrixXd a(n, 4);
  Eigen::VectorXd b(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Vector3d& p = alpha[static_cast<std::size_t>(i)];
    a.row(i) << 2.0 * p.x(), 2.0 * p.y(), 2.0 * p.z(), 1.0;
    b(i) = p.squaredNorm();
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
  qr.setThreshold(1e-10);
  if (qr.rank() < 4) throw DegenerateFit("sphere fit is singular (points are coplanar or collinear)");
  const Eigen::Vector4d x = qr.solve(b);
  SphereFit fit;
  fit.center = x.head<3>();
  const double r2 = x(3) + fit.center.squaredNorm();
  if (!(r2 > 0.0)) throw DegenerateFit("sphere fit produced a non-positive squared radius");
  fit.radius = std::sqrt(r2);
  double ss = 0.0;
  for (const auto& p : alpha) ss += std::pow((p - fit.center).norm() - fit.radius, 2);
  fit.rms = std::sqrt(ss / static_cast<double>(n));
  return fit;
}

const std::vector<std::string>& theorem_ids() {
  static const std::vector<std::string> ids{"thm4_1", "thm5_1", "thm5_2", "thm6_2", "cor3_1", "cor3_2", "cor3_3",
                                            "cor3_4", "cor5_2", "cor6_1", "cor6_2", "cor6_3", "cor6_4"};
  return ids;
}

VerificationReport verify(std::string_view id, const CurvatureProfile& p, const GroupSpec& spec,
                          const ToleranceSet& tols, VerificationPath path, double h) {
  if (std::find(theorem_ids().begin(), theorem_ids().end(), id) == theorem_ids().end())
    throw std::invalid_argument("unknown theorem id '" + std::string(id) + "'");
  if (id == "cor6_3" || id == "cor6_4") {
    const MateCurves curves = integrate_mate_curves(p, spec, h);
    return id == "cor6_3" ? verify_cor_6_3(curves, tols) : verify_cor_6_4(curves, tols);
  }
  require_frenet(p);
  const MatePair pair =
      path == VerificationPath::Estimated ? estimated_natural_pair(p, spec, h) : analytic_natural_pair(p, spec);
  if (id == "cor6_1" || id == "cor6_2") {
    ToleranceSet t = tols;
    if (pair.estimated) {
      t.constancy = tols.constancy_estimated;
      t.mate_zero = std::max(tols.mate_zero, kEstimatedZeroThreshold);
    }
    return id == "cor6_1" ? verify_cor_6_1(pair.parent, spec, t) : verify_cor_6_2(pair.parent, spec, t);
  }
  if (id == "thm4_1") return verify_thm_4_1(pair, tols);
  if (id == "thm5_1") return verify_thm_5_1(pair, tols);
  if (id == "thm5_2") return verify_thm_5_2(pair, tols);
  if (id == "thm6_2") return verify_thm_6_2(pair, tols);
  if (id == "cor3_1") return verify_cor_3_1(pair, tols);
  if (id == "cor3_2") return verify_cor_3_2(pair, tols);
  if (id == "cor3_3") return verify_cor_3_3(pair, tols);
  if (id == "cor3_4") return verify_cor_3_4(pair, tols);
  return verify_cor_5_2(pair, tols);
}

}  // namespace curvemates
