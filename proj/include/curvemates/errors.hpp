#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace curvemates {

/// Malformed expression text; offset is the byte position of the failure.
class SyntaxError : public std::runtime_error {
 public:
  SyntaxError(const std::string& what, std::size_t offset)
      : std::runtime_error(what + " at offset " + std::to_string(offset)), offset_(offset) {}
  [[nodiscard]] std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

/// Expression evaluated outside its domain (sqrt of a negative, division by zero, ...).
class DomainError : public std::runtime_error {
 public:
  DomainError(std::string subterm, double s)
      : std::runtime_error("domain error in '" + subterm + "' at s=" + std::to_string(s)),
        subterm_(std::move(subterm)),
        s_(s) {}
  [[nodiscard]] const std::string& subterm() const { return subterm_; }
  [[nodiscard]] double s() const { return s_; }

 private:
  std::string subterm_;
  double s_;
};

/// kappa <= 0 somewhere on the requested domain.
class FrenetViolation : public std::runtime_error {
 public:
  FrenetViolation(const std::string& what, std::vector<double> violations,
                  std::pair<double, double> usable = {0.0, 0.0}, bool has_usable = false)
      : std::runtime_error(what), violations_(std::move(violations)), usable_(usable), has_usable_(has_usable) {}
  [[nodiscard]] const std::vector<double>& violations() const { return violations_; }
  [[nodiscard]] bool has_usable_domain() const { return has_usable_; }
  [[nodiscard]] std::pair<double, double> usable_domain() const { return usable_; }

 private:
  std::vector<double> violations_;
  std::pair<double, double> usable_;
  bool has_usable_;
};

/// H' vanishes: sigma is undefined and the curve is locally a general helix.
class SingularSigma : public std::runtime_error {
 public:
  explicit SingularSigma(double s)
      : std::runtime_error("sigma undefined (H' = 0) at s=" + std::to_string(s)), s_(s) {}
  [[nodiscard]] double s() const { return s_; }

 private:
  double s_;
};

/// tau - tau_G vanishes identically; the conjugate mate is not a Frenet curve.
class NotAFrenetMate : public std::runtime_error {
 public:
  NotAFrenetMate(const std::string& what, std::vector<double> zero_crossings)
      : std::runtime_error(what), zero_crossings_(std::move(zero_crossings)) {}
  [[nodiscard]] const std::vector<double>& zero_crossings() const { return zero_crossings_; }

 private:
  std::vector<double> zero_crossings_;
};

/// Singular normal equations in a least-squares fit.
class DegenerateFit : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Two trajectories compared on different grids.
class GridMismatch : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace curvemates
