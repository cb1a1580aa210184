#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "curvemates/errors.hpp"
#include "curvemates/integrator.hpp"
#include "curvemates/lie_algebra.hpp"
#include "curvemates/mates.hpp"
#include "curvemates/profile.hpp"

namespace curvemates {

/// Default thresholds, one table for every verdict.
struct ToleranceSet {
  double constancy = 1e-6;
  double constancy_estimated = 1e-3;
  double singular_sigma = 1e-12;
  double mate_zero = 1e-9;
  double rectifying_slope = 1e-6;
  double verify_analytic = 1e-8;
  double verify_estimated = 1e-3;
  double tangency = 1e-5;
  double bertrand = 1e-4;
  double orthogonality = 1e-5;

  /// (name, value) in table order.
  [[nodiscard]] std::vector<std::pair<std::string, double>> entries() const;
  /// Sets one entry by name (dashes or underscores). Returns false for unknown names.
  bool set(std::string_view name, double value);
};

// ---------------------------------------------------------------------------
// Finite-difference estimator

/// Sample margin at each end affected by one-sided stencils.
inline constexpr std::size_t kEstimatorMargin = 6;

template <typename Scalar>
struct EstimatedApparatus {
  Scalar s0 = Scalar(0);
  Scalar h = Scalar(0);
  std::vector<Scalar> kappa;
  std::vector<Scalar> tau;
  std::vector<Scalar> tau_g;
  std::vector<Frame<Scalar>> frames;
  std::vector<bool> valid;

  [[nodiscard]] std::size_t size() const { return kappa.size(); }
  [[nodiscard]] Scalar s(std::size_t i) const { return s0 + Scalar(static_cast<double>(i)) * h; }
  [[nodiscard]] std::size_t first_valid() const { return kEstimatorMargin; }
  [[nodiscard]] std::size_t last_valid() const { return size() - 1 - kEstimatorMargin; }

  /// Sampled (kappa, tau) over the interior, keeping every `stride`-th sample.
  [[nodiscard]] CurvatureProfile to_profile(std::size_t stride = 1) const;
};

namespace detail {

/// Five-point first derivative of uniformly sampled vectors, central in the
/// interior and one-sided at the two boundary pairs.
template <typename V, typename Scalar>
std::vector<V> five_point(const std::vector<V>& f, Scalar h) {
  const std::size_t n = f.size();
  if (n < 5) throw std::invalid_argument("five-point stencils need at least 5 samples");
  const Scalar c = Scalar(1) / (Scalar(12) * h);
  auto k = [](double x) { return Scalar(x); };
  std::vector<V> d(n);
  d[0] = c * (k(-25) * f[0] + k(48) * f[1] - k(36) * f[2] + k(16) * f[3] - k(3) * f[4]);
  d[1] = c * (k(-3) * f[0] - k(10) * f[1] + k(18) * f[2] - k(6) * f[3] + f[4]);
  for (std::size_t i = 2; i + 2 < n; ++i) d[i] = c * (f[i - 2] - k(8) * f[i - 1] + k(8) * f[i + 1] - f[i + 2]);
  d[n - 2] = -c * (k(-3) * f[n - 1] - k(10) * f[n - 2] + k(18) * f[n - 3] - k(6) * f[n - 4] + f[n - 5]);
  d[n - 1] = -c * (k(-25) * f[n - 1] + k(48) * f[n - 2] - k(36) * f[n - 3] + k(16) * f[n - 4] - k(3) * f[n - 5]);
  return d;
}

}  // namespace detail

/// Unit tangent components dL_{g^-1} g' / |g'| from five-point velocities.
template <typename Scalar>
std::vector<Vector3<Scalar>> estimate_tangents(const std::vector<GroupElement<Scalar>>& positions, Scalar h) {
  std::vector<VectorX<Scalar>> ambient(positions.size());
  for (std::size_t i = 0; i < positions.size(); ++i) ambient[i] = positions[i].ambient();
  const auto velocity = detail::five_point(ambient, h);
  std::vector<Vector3<Scalar>> t(positions.size());
  for (std::size_t i = 0; i < positions.size(); ++i) t[i] = pull_back_tangent(positions[i], velocity[i]).normalized();
  return t;
}

/// Frenet apparatus of a sampled group-valued curve: t from the pulled-back
/// five-point velocity, kappa = |t'|, N = t'/kappa, B = t x N,
/// tau = <N' + [t, N]/2, B>, tau_G = <[t, N], B>/2. Samples within
/// kEstimatorMargin of either end, and samples with kappa below 1e-9, are
/// marked invalid. Throws FrenetViolation when kappa stays below 1e-9 over 5
/// consecutive interior samples.
template <typename Scalar>
EstimatedApparatus<Scalar> estimate_apparatus(const std::vector<GroupElement<Scalar>>& positions, Scalar s0,
                                              Scalar h, const GroupSpec& spec) {
  const std::size_t n = positions.size();
  if (n < 2 * kEstimatorMargin + 1)
    throw std::invalid_argument("estimation needs at least " + std::to_string(2 * kEstimatorMargin + 1) + " samples");
  const std::vector<Vector3<Scalar>> t = estimate_tangents(positions, h);
  const auto dt = detail::five_point(t, h);

  EstimatedApparatus<Scalar> out;
  out.s0 = s0;
  out.h = h;
  out.kappa.resize(n);
  out.tau.resize(n);
  out.tau_g.resize(n);
  out.frames.resize(n);
  out.valid.assign(n, false);

  const Scalar floor_kappa(1e-9);
  std::vector<Vector3<Scalar>> normal(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.kappa[i] = dt[i].norm();
    normal[i] = out.kappa[i] > Scalar(0) ? Vector3<Scalar>(dt[i] / out.kappa[i]) : Vector3<Scalar>::Zero();
  }
  const auto dn = detail::five_point(normal, h);

  std::size_t flat_run = 0;
  for (std::size_t i = 0; i < n; ++i) {
    Frame<Scalar>& f = out.frames[i];
    f.t = t[i];
    f.n = normal[i];
    f.b = t[i].cross(normal[i]);
    const Vector3<Scalar> tn = bracket(f.t, f.n, spec);
    out.tau[i] = (dn[i] + tn / Scalar(2)).dot(f.b);
    out.tau_g[i] = tn.dot(f.b) / Scalar(2);
    const bool interior = i >= kEstimatorMargin && i + kEstimatorMargin < n;
    const bool curved = out.kappa[i] >= floor_kappa;
    out.valid[i] = interior && curved;
    if (interior && !curved) {
      if (++flat_run >= 5)
        throw FrenetViolation("estimated curvature below 1e-9 on an interior window (not a Frenet curve)",
                              {static_cast<double>(out.s(i))});
    } else {
      flat_run = 0;
    }
  }
  return out;
}

template <typename Scalar>
EstimatedApparatus<Scalar> estimate_apparatus(const FrameTrajectory<Scalar>& traj) {
  return estimate_apparatus(traj.positions, traj.s0, traj.h, traj.spec);
}

template <typename Scalar>
CurvatureProfile EstimatedApparatus<Scalar>::to_profile(std::size_t stride) const {
  if (stride == 0) stride = 1;
  std::vector<double> k, t;
  for (std::size_t i = first_valid(); i <= last_valid(); i += stride) {
    k.push_back(static_cast<double>(kappa[i]));
    t.push_back(static_cast<double>(tau[i]));
  }
  const double start = static_cast<double>(s(first_valid()));
  const double step = static_cast<double>(h) * static_cast<double>(stride);
  const double end = start + step * static_cast<double>(k.size() - 1);
  return CurvatureProfile(ProfileFunction::from_samples(start, step, std::move(k)),
                          ProfileFunction::from_samples(start, step, std::move(t)), Domain{start, end}, step);
}

// ---------------------------------------------------------------------------
// Classification

/// (max - min) / max(1, max |x|).
double relative_spread(const std::vector<double>& x);

struct SphericalCheck {
  bool is_spherical = false;
  /// "planar_case" (tau = tau_G everywhere) or "general_case".
  std::string case_name;
  std::optional<double> radius;
  /// max |R - mean R| / mean R (general case) or kappa spread (planar case).
  double radius_spread = 0.0;
  /// max |((1/kappa)'/(tau - tau_G))' + H| over samples with tau != tau_G.
  double curvature_residual = 0.0;
  /// R(s) on the samples used (general case).
  std::vector<double> trace_s;
  std::vector<double> trace_r;
  /// Per torsion-sign segment: domain, sign and radius.
  struct Segment {
    Domain domain;
    int sign = 1;
    double radius = 0.0;
  };
  std::vector<Segment> segments;
};

/// Sphere test R = (rho' / delta)^2 + rho^2, rho = 1/kappa, on the profile grid.
/// Samples with |tau - tau_G| <= zero_threshold are excluded from the general
/// case. Spherical requires both a constant R and a vanishing curvature
/// residual, each within tol.
SphericalCheck spherical_check(const CurvatureProfile& p, const GroupSpec& spec, double tol,
                               double zero_threshold = kMateZeroThreshold);

struct Verdict {
  bool pass = false;
  std::optional<double> residual;
  double tolerance = 0.0;
  std::string note;
};

struct ClassificationReport {
  std::vector<std::pair<std::string, Verdict>> verdicts;
  SphericalCheck spherical;
  std::vector<MateSegment> segments;
  double tolerance = 0.0;

  [[nodiscard]] const Verdict& at(std::string_view name) const;
  [[nodiscard]] bool is(std::string_view name) const { return at(name).pass; }
};

/// Verdicts general_helix, slant_helix, rectifying, spherical, salkowski,
/// anti_salkowski, circular_helix on the profile grid, with constancy
/// tolerance tol.
ClassificationReport classify(const CurvatureProfile& p, const GroupSpec& spec, const ToleranceSet& tols,
                              double tol);
inline ClassificationReport classify(const CurvatureProfile& p, const GroupSpec& spec,
                                     const ToleranceSet& tols = {}) {
  return classify(p, spec, tols, tols.constancy);
}

// ---------------------------------------------------------------------------
// Verification

enum class VerificationStatus { Pass, Fail, NotApplicable };

struct VerificationReport {
  std::string theorem;
  bool hypothesis = true;
  std::string hypothesis_note;
  double residual = 0.0;
  double tolerance = 0.0;
  VerificationStatus status = VerificationStatus::Fail;
  std::vector<std::pair<std::string, double>> details;
  std::vector<double> trace_s;
  std::vector<double> trace;

  [[nodiscard]] bool passed() const { return status == VerificationStatus::Pass; }
  [[nodiscard]] bool ok() const { return status != VerificationStatus::Fail; }
  [[nodiscard]] std::optional<double> detail(std::string_view name) const;
};

std::string_view to_string(VerificationStatus s);

/// Parent and mate profiles on which the theorem checks run: either the
/// analytic mate (mates module) or profiles estimated from integrated curves.
struct MatePair {
  GroupSpec spec;
  CurvatureProfile parent;
  CurvatureProfile mate;
  bool estimated = false;
};

MatePair analytic_natural_pair(const CurvatureProfile& p, const GroupSpec& spec);

/// Integrates the parent and its natural mate on the grid of step h, estimates
/// both apparatus and keeps every `stride`-th interior sample, dropping two
/// decimated samples at each end.
MatePair estimated_natural_pair(const CurvatureProfile& p, const GroupSpec& spec, double h, std::size_t stride = 4);

/// Constant kappa = c implies the natural mate is spherical with r = 1/c.
VerificationReport verify_thm_4_1(const MatePair& pair, const ToleranceSet& tols);
/// Constant mate curvature c: the parent is recovered by constant_curvature_inverse.
VerificationReport verify_thm_5_1(const MatePair& pair, const ToleranceSet& tols);
/// Spherical parent with constant mate curvature c: a = c^2 r >= c and tau-bar
/// matches the closed form up to a fitted s-translation.
VerificationReport verify_thm_5_2(const MatePair& pair, const ToleranceSet& tols);
/// tau - tau_G = c != 0 implies the natural mate is spherical with r = 1/|c|.
VerificationReport verify_thm_6_2(const MatePair& pair, const ToleranceSet& tols);

/// H constant iff tau-bar = tau_G.
VerificationReport verify_cor_3_1(const MatePair& pair, const ToleranceSet& tols);
/// Slant helix iff the natural mate is a general helix.
VerificationReport verify_cor_3_2(const MatePair& pair, const ToleranceSet& tols);
/// Rectifying iff a kappa^2 = (tau-bar - tau_G) kappa-bar^2 for a constant a != 0.
VerificationReport verify_cor_3_3(const MatePair& pair, const ToleranceSet& tols);
/// Spherical with radius r iff kappa-bar'/kappa-bar = (tau-bar - tau_G) H +- (tau - tau_G) sqrt(r^2 kappa^2 - 1).
VerificationReport verify_cor_3_4(const MatePair& pair, const ToleranceSet& tols);
/// Spherical parent, constant mate curvature: tau = tau_G or tau-bar - tau_G = -+ kappa sqrt(r^2 kappa^2 - 1).
VerificationReport verify_cor_5_2(const MatePair& pair, const ToleranceSet& tols);
/// General helix iff the conjugate mate is a general helix (per segment).
VerificationReport verify_cor_6_1(const CurvatureProfile& p, const GroupSpec& spec, const ToleranceSet& tols);
/// Slant helix iff the conjugate mate is a slant helix (per segment).
VerificationReport verify_cor_6_2(const CurvatureProfile& p, const GroupSpec& spec, const ToleranceSet& tols);

/// gamma, its natural mate and its conjugate mate integrated on one grid.
struct MateCurves {
  FrameTrajectory<double> parent;
  std::vector<GroupElement<double>> natural;
  std::vector<GroupElement<double>> conjugate;
};
MateCurves integrate_mate_curves(const CurvatureProfile& p, const GroupSpec& spec, double h);

/// Estimated mate tangent equals N (natural) or B (conjugate); for conjugate
/// mates also the Bertrand check N* = +-N. Throws GridMismatch when the mate
/// has a different sample count.
VerificationReport verify_mate_geometry(const FrameTrajectory<double>& parent,
                                        const std::vector<GroupElement<double>>& mate, MateKind kind,
                                        const ToleranceSet& tols);
/// Tangents of gamma, natural mate and conjugate mate pairwise orthogonal.
VerificationReport verify_cor_6_3(const MateCurves& curves, const ToleranceSet& tols);
/// gamma and its conjugate mate share principal normal lines.
VerificationReport verify_cor_6_4(const MateCurves& curves, const ToleranceSet& tols);

struct SphereFit {
  Eigen::Vector3d center;
  double radius = 0.0;
  double rms = 0.0;
};
/// Algebraic least-squares sphere through the samples. Throws DegenerateFit.
SphereFit left_shift_sphere_fit(const std::vector<Eigen::Vector3d>& alpha);

/// Theorem ids accepted by verify().
const std::vector<std::string>& theorem_ids();

enum class VerificationPath { Analytic, Estimated };

/// Runs one theorem by id on a profile. Throws std::invalid_argument for unknown ids.
VerificationReport verify(std::string_view id, const CurvatureProfile& p, const GroupSpec& spec,
                          const ToleranceSet& tols, VerificationPath path = VerificationPath::Analytic,
                          double h = 1e-3);

}  // namespace curvemates
