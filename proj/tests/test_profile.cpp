#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "curvemates/profile.hpp"

using namespace curvemates;

namespace {

struct Figure {
  const char* kappa;
  const char* tau;
  Domain domain;
};

const Figure kFigures[] = {
    {"s-1", "s^2+s-2", {1.05, 3}},
    {"3*cos(s)", "3*sin(s)", {-1.5, 1.5}},
    {"2*(1+7*sin(2*s)^2)^(-1/2)", "2*sqrt(7)*sin(2*s)*(1+7*sin(2*s)^2)^(-1/2)", {0, std::numbers::pi}},
    {"3", "2*s", {-3, 3}},
    {"3*cos(s)", "sqrt(2)", {-1.5, 1.5}},
};

}  // namespace

TEST(Grid, CountRule) {
  EXPECT_EQ(UniformGrid::over({-1.5, 1.5}, 1e-3).count, 3001u);
  EXPECT_EQ(UniformGrid::over({0, 1}, 0.3).count, 4u);
  EXPECT_THROW(UniformGrid::over({1, 0}, 0.1), std::invalid_argument);
}

TEST(Harmonic, Examples) {
  const GroupSpec r3 = GroupSpec::r3();
  const auto fig1 = CurvatureProfile::parse("s-1", "s^2+s-2", {1.05, 3});
  EXPECT_DOUBLE_EQ(harmonic_curvature(fig1, r3, 2.0), 4.0);
  for (double s = 1.1; s < 3; s += 0.1) {
    EXPECT_NEAR(harmonic_curvature(fig1, r3, s), s + 2, 1e-13);
    EXPECT_NEAR(harmonic_curvature_derivative(fig1, r3, s), 1.0, 1e-12);
  }
  const auto equal = CurvatureProfile::parse("1+s^2", "1+s^2", {0, 1});
  EXPECT_DOUBLE_EQ(harmonic_curvature(equal, r3, 0.4), 1.0);
  const auto fig2 = CurvatureProfile::parse("3*cos(s)", "3*sin(s)", {-1.5, 1.5});
  EXPECT_EQ(harmonic_curvature(fig2, r3, 0.0), 0.0);
  EXPECT_THROW(harmonic_curvature(CurvatureProfile::parse("s", "1", {-1, 1}), r3, 0.0), FrenetViolation);
}

TEST(Sigma, Examples) {
  const GroupSpec r3 = GroupSpec::r3();
  const auto fig2 = CurvatureProfile::parse("3*cos(s)", "3*sin(s)", {-1.5, 1.5});
  EXPECT_NEAR(sigma(fig2, r3, 0.3), 3.0, 1e-13);
  EXPECT_DOUBLE_EQ(sigma(CurvatureProfile::parse("1", "s", {-1, 1}), r3, 0.0), 1.0);
  EXPECT_THROW(sigma(CurvatureProfile::parse("2", "5", {0, 1}), r3, 0.5), SingularSigma);
}

TEST(Omega, ExamplesAndDarboux) {
  const GroupSpec r3 = GroupSpec::r3();
  const auto fig4 = CurvatureProfile::parse("3", "2*s", {-3, 3});
  EXPECT_DOUBLE_EQ(omega(fig4, r3, 0.0), 3.0);
  const auto fig2 = CurvatureProfile::parse("3*cos(s)", "3*sin(s)", {-1.5, 1.5});
  for (double s = -1.5; s <= 1.5; s += 0.25) EXPECT_NEAR(omega(fig2, r3, s), 3.0, 1e-15);
  EXPECT_DOUBLE_EQ(omega(CurvatureProfile::parse("0.6", "1", {0, 1}), GroupSpec::s3(), 0.2), 0.6);

  const auto v = darboux_vectors(fig4, r3, 1.0);
  EXPECT_EQ(v.darboux, Eigen::Vector3d(2, 0, 3));
  EXPECT_EQ(v.extrinsic, Eigen::Vector3d(2, 0, 3));
  EXPECT_EQ(v.co_extrinsic, Eigen::Vector3d(-3, 0, 2));
  const auto w = darboux_vectors(CurvatureProfile::parse("0.6", "1", {0, 1}), GroupSpec::s3(), 0.0);
  EXPECT_EQ(w.extrinsic, Eigen::Vector3d(0, 0, 0.6));
  EXPECT_EQ(w.co_extrinsic, Eigen::Vector3d(-0.6, 0, 0));

  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.1, 5.0), t(-5.0, 5.0);
  for (int i = 0; i < 100; ++i) {
    const CurvatureProfile p(ProfileFunction::constant(u(rng)), ProfileFunction::constant(t(rng)), {0, 1}, 0.1);
    for (const GroupSpec spec : {GroupSpec::r3(), GroupSpec::so3(), GroupSpec::s3()}) {
      const auto a = apparatus(p, spec, 0.5);
      EXPECT_NEAR(a.vectors.extrinsic.dot(a.vectors.co_extrinsic), 0.0, 1e-12);
      EXPECT_NEAR(a.vectors.extrinsic.norm(), a.omega, 1e-12);
      EXPECT_NEAR(a.vectors.co_extrinsic.norm(), a.omega, 1e-12);
      EXPECT_NEAR(a.omega * a.omega, std::pow(a.tau - a.tau_g, 2) + a.kappa * a.kappa, 1e-12 * a.omega * a.omega);
      EXPECT_FALSE(a.sigma.has_value());
    }
  }
}

TEST(Sampled, StencilsMatchSymbolicDerivatives) {
  for (const auto& fig : kFigures) {
    for (const char* text : {fig.kappa, fig.tau}) {
      const auto exact = ProfileFunction::from_expr(parse(text));
      const auto grid = UniformGrid::over(fig.domain, 1e-3);
      std::vector<double> values(grid.count);
      for (std::size_t i = 0; i < grid.count; ++i) values[i] = exact.value(grid.at(i));
      const auto sampled = ProfileFunction::from_samples(grid.s0, grid.h, values);
      double scale = 0.0;
      for (std::size_t i = 0; i < grid.count; ++i) scale = std::max(scale, std::abs(exact.derivative(grid.at(i))));
      for (std::size_t i = 0; i < grid.count; ++i) {
        const double s = grid.at(i);
        EXPECT_LE(std::abs(sampled.derivative(s) - exact.derivative(s)), 1e-6 * std::max(1.0, scale)) << text;
      }
      for (double s = fig.domain.lo + 0.01; s < grid.last(); s += 0.0137)
        EXPECT_LE(std::abs(sampled.value(s) - exact.value(s)), 1e-9) << text;
    }
  }
}

TEST(Sampled, RejectsShortAndOutOfRange) {
  EXPECT_THROW(ProfileFunction::from_samples(0, 0.1, {1, 2, 3, 4}), std::invalid_argument);
  const auto f = ProfileFunction::from_samples(0, 0.5, {0, 1, 2, 3, 4});
  EXPECT_DOUBLE_EQ(f.value(1.25), 2.5);
  EXPECT_DOUBLE_EQ(f.derivative(2.0), 2.0);
  EXPECT_THROW(f.value(2.5), DomainError);
}

TEST(Frenet, TrimmingSuggestion) {
  const auto fig1 = CurvatureProfile::parse("s-1", "s^2+s-2", {1, 3}, 1e-3);
  const auto check = check_frenet(fig1);
  EXPECT_FALSE(check.satisfied);
  ASSERT_EQ(check.violations.size(), 1u);
  ASSERT_TRUE(check.suggested_domain.has_value());
  EXPECT_NEAR(check.suggested_domain->lo, 1.001, 1e-12);
  EXPECT_TRUE(check_frenet(fig1.restricted({1.05, 3})).satisfied);

  const auto interior = CurvatureProfile::parse("abs(s)", "1", {-1, 1}, 0.01);
  EXPECT_FALSE(check_frenet(interior).suggested_domain.has_value());
  try {
    require_frenet(CurvatureProfile::parse("-1", "0", {0, 1}));
    FAIL();
  } catch (const FrenetViolation& e) {
    EXPECT_NE(std::string(e.what()).find("Frenet condition violated"), std::string::npos);
  }
}
