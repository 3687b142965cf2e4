#include "caprisk/utility.hpp"

#include <sstream>
#include <stdexcept>

namespace caprisk {

UtilitySpec UtilitySpec::crra(double gamma) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw std::invalid_argument("CRRA coefficient must be positive and finite");
  }
  if (gamma == 1.0) return log();
  return UtilitySpec(Kind::CRRA, gamma);
}

UtilitySpec UtilitySpec::log() { return UtilitySpec(Kind::Log, 1.0); }

std::string UtilitySpec::describe() const {
  if (kind_ == Kind::Log) return "log";
  std::ostringstream os;
  os << "crra(" << gamma_ << ")";
  return os.str();
}

double UtilitySpec::u(double c) const {
  if (!(c > 0.0)) throw std::domain_error("utility requires positive consumption");
  if (kind_ == Kind::Log) return std::log(c);
  return std::pow(c, 1.0 - gamma_) / (1.0 - gamma_);
}

double UtilitySpec::u_prime(double c) const {
  if (!(c > 0.0)) throw std::domain_error("marginal utility requires positive consumption");
  return marginal(c);
}

double UtilitySpec::u_prime_inv(double m) const {
  if (!(m > 0.0)) throw std::domain_error("inverse marginal utility requires positive argument");
  return marginal_inv(m);
}

double UtilitySpec::u_second(double c) const {
  if (!(c > 0.0)) throw std::domain_error("utility requires positive consumption");
  return -gamma_ * marginal(c) / c;
}

}  // namespace caprisk
