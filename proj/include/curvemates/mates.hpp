#pragma once

#include <optional>
#include <vector>

#include "curvemates/lie_algebra.hpp"
#include "curvemates/profile.hpp"

namespace curvemates {

enum class MateKind { Natural, Conjugate };

/// Threshold on |tau - tau_G| below which a sample counts as a zero.
inline constexpr double kMateZeroThreshold = 1e-9;

/// Maximal interval on which a mate is a Frenet curve. sign is sign(tau - tau_G)
/// for conjugate mates and +1 for natural mates.
struct MateSegment {
  Domain domain;
  int sign = 1;
};

/// Curvature, torsion and frames of a natural or conjugate mate.
struct MateApparatus {
  MateKind kind = MateKind::Natural;
  GroupSpec spec;
  CurvatureProfile parent;
  /// kappa-bar / tau-bar (natural) or kappa* / tau* (conjugate), on the parent's domain.
  CurvatureProfile profile;
  std::vector<MateSegment> segments;
  /// Points where tau - tau_G vanishes (conjugate only).
  std::vector<double> zero_crossings;

  [[nodiscard]] double lie_torsion() const { return spec.lie_torsion(); }
  /// Segment containing s, if any.
  [[nodiscard]] const MateSegment* segment_at(double s) const;
  /// Mate frame in parent-frame (T, N, B) coordinates. Conjugate frames need s
  /// inside a segment.
  [[nodiscard]] Frame<double> frame(double s) const;
};

/// kappa-bar = kappa sqrt(1 + H^2), tau-bar = tau_G + H' / (1 + H^2).
MateApparatus natural_mate_apparatus(const CurvatureProfile& p, const GroupSpec& spec);

/// kappa* = |tau - tau_G|, tau* = kappa + tau_G, segments split at zeros of tau - tau_G.
/// Throws NotAFrenetMate when tau - tau_G vanishes on the whole grid.
MateApparatus conjugate_mate_apparatus(const CurvatureProfile& p, const GroupSpec& spec);

/// Segments where tau - tau_G keeps a strict sign (|tau - tau_G| > 1e-9 on the grid).
std::vector<MateSegment> torsion_sign_segments(const CurvatureProfile& p, const GroupSpec& spec,
                                               std::vector<double>* zeros = nullptr);

struct MateHarmonicSample {
  double harmonic = 0.0;
  std::optional<double> sigma;
};

/// H and sigma of the mate itself, evaluated from its own profile.
MateHarmonicSample mate_harmonic_data(const MateApparatus& m, double s);

/// Parent profile whose natural mate has constant curvature c and torsion
/// tau-bar: kappa = c cos(phi), tau = tau_G + c sin(phi), phi(s) = phi0 +
/// integral from domain.lo to s of (tau-bar - tau_G). Sampled on the grid of
/// step h. Throws FrenetViolation (with a usable subdomain when possible)
/// where kappa <= 0.
CurvatureProfile constant_curvature_inverse(const ProfileFunction& mate_tau, double c, const GroupSpec& spec,
                                            Domain domain, double h, double phi0 = 0.0);

/// Samples f at s0 + i h, i < count.
ProfileFunction resample(const ProfileFunction& f, double s0, double h, std::size_t count);

}  // namespace curvemates
