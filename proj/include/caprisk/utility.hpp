#pragma once

#include <cmath>
#include <string>

namespace caprisk {

/// CRRA period utility u(c) = c^(1-gamma)/(1-gamma), with log utility as the
/// gamma == 1 member of the family.
class UtilitySpec {
 public:
  enum class Kind { CRRA, Log };

  /// gamma == 1 yields the Log kind.
  static UtilitySpec crra(double gamma);
  static UtilitySpec log();

  Kind kind() const { return kind_; }
  double gamma() const { return gamma_; }
  std::string describe() const;

  double u(double c) const;
  double u_prime(double c) const;
  double u_prime_inv(double m) const;
  double u_second(double c) const;

  // Unchecked marginal utility for hot loops; c must be positive.
  double marginal(double c) const {
    if (kind_ == Kind::Log) return 1.0 / c;
    if (gamma_ == 2.0) return 1.0 / (c * c);
    return std::pow(c, -gamma_);
  }
  double marginal_inv(double m) const {
    if (kind_ == Kind::Log) return 1.0 / m;
    if (gamma_ == 2.0) return 1.0 / std::sqrt(m);
    return std::pow(m, -1.0 / gamma_);
  }

 private:
  UtilitySpec(Kind kind, double gamma) : kind_(kind), gamma_(gamma) {}

  Kind kind_;
  double gamma_;
};

}  // namespace caprisk
