#pragma once

#include <cstdint>
#include <memory>
#include <utility>
#include <vector>

#include "proxnet/activation.hpp"
#include "proxnet/linalg.hpp"

namespace proxnet {

enum class OperatorStructure {
  separable,
  softmax,
  sandwich,
  convex_combination,
  complement,
  half_difference,
};

struct FirmnessReport {
  bool passed;
  double worst_violation;  // largest positive excess found, <= 0 if none
  Vector worst_x, worst_y;
};

// A finite-dimensional activation operator: the proximity operator of a
// potential minimal at 0.  Fixes 0, nonexpansive, firmly nonexpansive.
class ActivationOperator {
 public:
  static ActivationOperator separable(std::vector<ScalarActivation> coords);
  static ActivationOperator separable(int dim, const ScalarActivation& a);
  static ActivationOperator softmax(int n);
  // requires ||l|| <= 1 (+1e-12 slack); maps x to l^T inner(l x)
  static ActivationOperator sandwich(Matrix l, ActivationOperator inner);
  static ActivationOperator convex_combination(
      std::vector<std::pair<double, ActivationOperator>> terms);
  static ActivationOperator complement(ActivationOperator inner);
  static ActivationOperator half_difference(ActivationOperator a,
                                            ActivationOperator b);

  Vector apply(const Vector& x) const;

  int dim() const;
  OperatorStructure structure() const;
  bool range_bounded() const;
  // true when the domain of the underlying potential is bounded (for
  // separable operators: every coordinate domain bounded); conservative
  // (false) for structures without a closed rule
  bool potential_domain_bounded() const;
  // separable/softmax metadata used by the existence flags; conservative
  // (false) for structures without a closed rule
  bool all_conjugates_full() const;

  // Samples random pairs in [-5,5]^dim and checks
  // ||Rx-Ry||^2 <= ||x-y||^2 - ||x-y-Rx+Ry||^2 up to tol.
  FirmnessReport check_firm_nonexpansive(int samples, double tol,
                                         std::uint64_t seed) const;

  struct Impl;

 private:
  explicit ActivationOperator(std::shared_ptr<const Impl> impl);
  std::shared_ptr<const Impl> impl_;
};

}  // namespace proxnet
