#include "curvemates/mates.hpp"

#include <cmath>
#include <sstream>

namespace curvemates {

namespace {

int sign_of(double x) { return x > 0.0 ? 1 : -1; }

/// Parent kappa / tau as samples on one grid, unless both are expressions.
struct SampledPair {
  UniformGrid grid;
  ProfileFunction kappa;
  ProfileFunction tau;
};

SampledPair sampled_pair(const CurvatureProfile& p) {
  const ProfileFunction* ref = !p.kappa().is_expression() ? &p.kappa() : &p.tau();
  const UniformGrid grid{ref->sample_origin(), ref->sample_step(), ref->samples().size()};
  return SampledPair{grid, resample(p.kappa(), grid.s0, grid.h, grid.count),
                     resample(p.tau(), grid.s0, grid.h, grid.count)};
}

double bisect_zero(const CurvatureProfile& p, double tau_g, double a, double b) {
  double fa = p.tau().value(a) - tau_g;
  for (int i = 0; i < 60; ++i) {
    const double m = 0.5 * (a + b);
    const double fm = p.tau().value(m) - tau_g;
    if ((fm > 0) == (fa > 0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

ProfileFunction resample(const ProfileFunction& f, double s0, double h, std::size_t count) {
  if (!f.is_expression() && f.sample_origin() == s0 && f.sample_step() == h && f.samples().size() == count)
    return f;
  std::vector<double> v(count);
  for (std::size_t i = 0; i < count; ++i) v[i] = f.value(s0 + static_cast<double>(i) * h);
  return ProfileFunction::from_samples(s0, h, std::move(v));
}

const MateSegment* MateApparatus::segment_at(double s) const {
  for (const auto& seg : segments)
    if (s >= seg.domain.lo && s <= seg.domain.hi) return &seg;
  return nullptr;
}

Frame<double> MateApparatus::frame(double s) const {
  if (kind == MateKind::Natural) {
    const double k = parent.kappa().value(s);
    const double d = parent.tau().value(s) - spec.lie_torsion();
    const double w = std::hypot(d, k);
    return Frame<double>{Eigen::Vector3d(0, 1, 0), Eigen::Vector3d(-k / w, 0, d / w), Eigen::Vector3d(d / w, 0, k / w)};
  }
  const MateSegment* seg = segment_at(s);
  if (!seg) throw std::out_of_range("conjugate mate frame requested outside its Frenet segments");
  const double sg = seg->sign;
  return Frame<double>{Eigen::Vector3d(0, 0, 1), Eigen::Vector3d(0, -sg, 0), Eigen::Vector3d(sg, 0, 0)};
}

MateApparatus natural_mate_apparatus(const CurvatureProfile& p, const GroupSpec& spec) {
  require_frenet(p);
  const double tg = spec.lie_torsion();
  MateApparatus m{MateKind::Natural, spec, p, p, {{p.domain(), 1}}, {}};
  if (p.kappa().is_expression() && p.tau().is_expression()) {
    const Expr k = p.kappa().expression(), dk = p.kappa().expression(1);
    const Expr t = p.tau().expression(), dt = p.tau().expression(1);
    const Expr d = t - Expr::number(tg);
    const Expr w2 = pow(k, Expr::number(2)) + pow(d, Expr::number(2));
    m.profile = CurvatureProfile(ProfileFunction::from_expr(sqrt(w2)),
                                 ProfileFunction::from_expr(Expr::number(tg) + (dt * k - d * dk) / w2), p.domain(),
                                 p.step());
    return m;
  }
  const SampledPair sp = sampled_pair(p);
  std::vector<double> kb(sp.grid.count), tb(sp.grid.count);
  for (std::size_t i = 0; i < sp.grid.count; ++i) {
    const double k = sp.kappa.samples(0)[i], dk = sp.kappa.samples(1)[i];
    const double d = sp.tau.samples(0)[i] - tg, dt = sp.tau.samples(1)[i];
    const double w2 = k * k + d * d;
    kb[i] = std::sqrt(w2);
    tb[i] = tg + (dt * k - d * dk) / w2;
  }
  m.profile = CurvatureProfile(ProfileFunction::from_samples(sp.grid.s0, sp.grid.h, std::move(kb)),
                               ProfileFunction::from_samples(sp.grid.s0, sp.grid.h, std::move(tb)), p.domain(),
                               p.step());
  return m;
}

std::vector<MateSegment> torsion_sign_segments(const CurvatureProfile& p, const GroupSpec& spec,
                                               std::vector<double>* zeros) {
  const double tg = spec.lie_torsion();
  const UniformGrid g = p.grid();
  std::vector<MateSegment> segments;
  std::vector<double> crossings;
  std::optional<std::size_t> start;
  int current = 0;
  auto close = [&](std::size_t end) {
    if (start) segments.push_back({{g.at(*start), g.at(end)}, current});
    start.reset();
  };
  for (std::size_t i = 0; i < g.count; ++i) {
    const double d = p.tau().value(g.at(i)) - tg;
    if (std::abs(d) <= kMateZeroThreshold) {
      if (start) close(i - 1);
      const bool run_continues = i + 1 < g.count && i > 0 && std::abs(p.tau().value(g.at(i - 1)) - tg) <= kMateZeroThreshold &&
                                 std::abs(p.tau().value(g.at(i + 1)) - tg) <= kMateZeroThreshold;
      if (!run_continues) crossings.push_back(g.at(i));
    } else if (start && sign_of(d) != current) {
      close(i - 1);
      crossings.push_back(bisect_zero(p, tg, g.at(i - 1), g.at(i)));
      start = i;
      current = sign_of(d);
    } else if (!start) {
      start = i;
      current = sign_of(d);
    }
  }
  if (start) close(g.count - 1);
  if (zeros) *zeros = std::move(crossings);
  return segments;
}

MateApparatus conjugate_mate_apparatus(const CurvatureProfile& p, const GroupSpec& spec) {
  require_frenet(p);
  const double tg = spec.lie_torsion();
  std::vector<double> zeros;
  auto segments = torsion_sign_segments(p, spec, &zeros);
  if (segments.empty()) {
    throw NotAFrenetMate("conjugate mate is not a Frenet curve: tau - tau_G vanishes on the whole domain", zeros);
  }
  MateApparatus m{MateKind::Conjugate, spec, p, p, std::move(segments), std::move(zeros)};
  if (p.kappa().is_expression() && p.tau().is_expression()) {
    m.profile = CurvatureProfile(ProfileFunction::from_expr(abs(p.tau().expression() - Expr::number(tg))),
                                 ProfileFunction::from_expr(p.kappa().expression() + Expr::number(tg)), p.domain(),
                                 p.step());
    return m;
  }
  const SampledPair sp = sampled_pair(p);
  std::vector<double> ks(sp.grid.count), ts(sp.grid.count);
  for (std::size_t i = 0; i < sp.grid.count; ++i) {
    ks[i] = std::abs(sp.tau.samples(0)[i] - tg);
    ts[i] = sp.kappa.samples(0)[i] + tg;
  }
  m.profile = CurvatureProfile(ProfileFunction::from_samples(sp.grid.s0, sp.grid.h, std::move(ks)),
                               ProfileFunction::from_samples(sp.grid.s0, sp.grid.h, std::move(ts)), p.domain(),
                               p.step());
  return m;
}

MateHarmonicSample mate_harmonic_data(const MateApparatus& m, double s) {
  if (m.kind == MateKind::Conjugate && !m.segment_at(s)) {
    std::ostringstream os;
    os << "conjugate harmonic curvature undefined at s=" << s << " (tau - tau_G = 0)";
    throw NotAFrenetMate(os.str(), m.zero_crossings);
  }
  MateHarmonicSample out;
  out.harmonic = harmonic_curvature(m.profile, m.spec, s);
  const double dh = harmonic_curvature_derivative(m.profile, m.spec, s);
  if (std::abs(dh) > kSingularSigmaThreshold)
    out.sigma = m.profile.kappa().value(s) * std::pow(out.harmonic * out.harmonic + 1.0, 1.5) / dh;
  return out;
}

CurvatureProfile constant_curvature_inverse(const ProfileFunction& mate_tau, double c, const GroupSpec& spec,
                                            Domain domain, double h, double phi0) {
  if (!(c > 0.0)) throw std::invalid_argument("mate curvature c must be positive");
  const UniformGrid g = UniformGrid::over(domain, h);
  const double tg = spec.lie_torsion();
  std::vector<double> integrand(g.count);
  for (std::size_t i = 0; i < g.count; ++i) integrand[i] = mate_tau.value(g.at(i)) - tg;
  const std::vector<double> phi = cumulative_simpson<double>(integrand, h);
  std::vector<double> kappa(g.count), tau(g.count);
  for (std::size_t i = 0; i < g.count; ++i) {
    kappa[i] = c * std::cos(phi0 + phi[i]);
    tau[i] = tg + c * std::sin(phi0 + phi[i]);
  }
  CurvatureProfile out(ProfileFunction::from_samples(g.s0, h, std::move(kappa)),
                       ProfileFunction::from_samples(g.s0, h, std::move(tau)), Domain{g.s0, g.last()}, h);
  require_frenet(out);
  return out;
}

}  // namespace curvemates
