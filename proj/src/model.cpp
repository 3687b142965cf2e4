#include "caprisk/model.hpp"

#include <cmath>
#include <stdexcept>

namespace caprisk {

ModelSpec::ModelSpec(double beta, UtilitySpec utility, ExogenousProcess process,
                     ExpectationRule expectation)
    : beta_(beta), utility_(utility), process_(std::move(process)), expectation_(expectation) {
  if (!(beta_ >= 0.0 && beta_ < 1.0)) throw std::invalid_argument("discount factor must lie in [0, 1)");
  if (expectation_.kind == ExpectationRule::Kind::GaussHermite && expectation_.nodes < 1) {
    throw std::invalid_argument("quadrature node count must be positive");
  }
  nodes_.reserve(process_.size());
  for (std::size_t j = 0; j < process_.size(); ++j) {
    nodes_.push_back(process_.conditional_nodes(j, expectation_));
  }
}

}  // namespace caprisk
