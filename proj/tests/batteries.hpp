#pragma once

#include <string>
#include <vector>

#include "curvemates/profile.hpp"

namespace curvemates::testing {

struct Case {
  std::string group;
  std::string kappa;
  std::string tau;
  Domain domain;

  [[nodiscard]] GroupSpec spec() const { return GroupSpec::from_name(group); }
  [[nodiscard]] CurvatureProfile profile() const { return CurvatureProfile::parse(kappa, tau, domain); }
};

struct Figure {
  const char* name;
  Case c;
};

inline const std::vector<Figure>& figures() {
  static const std::vector<Figure> f{
      {"fig1", {"r3", "s-1", "s^2+s-2", {1.05, 3.0}}},
      {"fig2", {"r3", "3*cos(s)", "3*sin(s)", {-1.5, 1.5}}},
      {"fig3",
       {"r3", "2*(1+7*sin(2*s)^2)^(-1/2)", "2*sqrt(7)*sin(2*s)*(1+7*sin(2*s)^2)^(-1/2)", {0.0, 3.141592653589793}}},
      {"fig4", {"r3", "3", "2*s", {-3.0, 3.0}}},
      {"fig5", {"r3", "3*cos(s)", "sqrt(2)", {-1.5, 1.5}}},
  };
  return f;
}

// H constant (tau - tau_G = H kappa)
inline const std::vector<Case>& general_helices() {
  static const std::vector<Case> c{
      {"r3", "2+sin(s)", "0.5*(2+sin(s))", {-2, 2}},
      {"r3", "1+s^2", "2*(1+s^2)", {-1, 1}},
      {"r3", "2", "1", {0, 3}},
      {"r3", "exp(s)", "-exp(s)", {-1, 1}},
      {"r3", "(exp(s)+exp(-s))/2", "3*(exp(s)+exp(-s))/2", {-1, 1}},
      {"r3", "3*cos(s)", "-0.25*3*cos(s)", {-1.2, 1.2}},
      {"so3", "1+s^2/4", "0.5+1.5*(1+s^2/4)", {-2, 2}},
      {"so3", "2+cos(s)", "0.5-(2+cos(s))", {0, 3}},
      {"s3", "1/(1+s^2)", "1+2/(1+s^2)", {-2, 2}},
      {"s3", "4", "3", {0, 2}},
  };
  return c;
}

// sigma constant: kappa = A cos(c s), tau - tau_G = A sin(c s), or kappa given
// and H = u / sqrt(1 - u^2) with u = (1/sigma) * integral of kappa
inline const std::vector<Case>& slant_helices() {
  static const std::vector<Case> c{
      {"r3", "3*cos(s)", "3*sin(s)", {-1.5, 1.5}},
      {"r3", "2*cos(2*s)", "2*sin(2*s)", {-0.7, 0.7}},
      {"r3", "cos(s/2)", "sin(s/2)", {-2, 2}},
      {"r3", "5*cos(s+0.3)", "5*sin(s+0.3)", {-1.5, 1.2}},
      {"r3", "1", "s/sqrt(4-s^2)", {-1.5, 1.5}},
      {"r3", "1", "s/sqrt(9-s^2)", {-2, 2}},
      {"r3", "2*s", "2*s^3/sqrt(4-s^4)", {0.2, 1.2}},
      {"r3", "4*cos(3*s)", "4*sin(3*s)", {-0.4, 0.4}},
      {"so3", "3*cos(s)", "0.5+3*sin(s)", {-1.5, 1.5}},
      {"s3", "2*cos(s)", "1+2*sin(s)", {-1.4, 1.4}},
  };
  return c;
}

// H non-constant, sigma non-constant
inline const std::vector<Case>& generic_curves() {
  static const std::vector<Case> c{
      {"r3", "s-1", "s^2+s-2", {1.05, 3}},
      {"r3", "2*(1+7*sin(2*s)^2)^(-1/2)", "2*sqrt(7)*sin(2*s)*(1+7*sin(2*s)^2)^(-1/2)", {0.1, 1.4}},
      {"r3", "3", "2*s", {-3, 3}},
      {"r3", "3*cos(s)", "sqrt(2)", {-1.5, 1.5}},
      {"r3", "1", "s", {-2, 2}},
      {"r3", "2+sin(s)", "cos(s)", {0, 3}},
      {"r3", "1+s^2", "s", {-1, 1}},
      {"r3", "exp(s/3)", "1+s^2", {-1, 2}},
      {"so3", "2", "exp(s/2)", {-1, 1}},
      {"s3", "1+s^2/2", "2+s^3", {-1, 1}},
  };
  return c;
}

}  // namespace curvemates::testing
