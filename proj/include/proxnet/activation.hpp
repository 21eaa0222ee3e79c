#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "proxnet/kernels.hpp"

namespace proxnet {

// Tags for the catalog members and the combinators that stay inside the
// class of increasing, 1-Lipschitz maps vanishing at 0.
enum class ActKind {
  identity,
  satlin,
  relu,
  prelu,
  bent_identity,
  isru,
  isrlu,
  arctan2pi,
  tanh_,
  sigmoid_shifted,
  elliot,
  arcsinh,
  logarithmic,
  soft_threshold,
  // combinators
  scaled,
  convex_combination,
  composed,
  complement,
  half_difference,
  reflected_compose,
};

struct Interval {
  double lo;
  double hi;
  bool bounded() const;
};

// A scalar activation: an increasing, 1-Lipschitz map with value 0 at 0,
// i.e. the proximity operator of a potential minimal at 0.  Catalog members
// carry a closed-form potential (normalized so that phi(0) = 0); combinator
// nodes do not.  Immutable; cheap to copy (shared node tree).
class ScalarActivation {
 public:
  // catalog
  static ScalarActivation identity();
  static ScalarActivation satlin();
  static ScalarActivation relu();
  static ScalarActivation prelu(double slope);  // slope in (0,1)
  static ScalarActivation bent_identity();
  static ScalarActivation isru();
  static ScalarActivation isrlu();
  static ScalarActivation arctan2pi();
  static ScalarActivation tanh();
  static ScalarActivation sigmoid_shifted();
  static ScalarActivation elliot();
  static ScalarActivation arcsinh();
  static ScalarActivation logarithmic();
  static ScalarActivation soft_threshold();

  // all 14 catalog members (prelu with a representative slope 0.25)
  static std::vector<ScalarActivation> catalog();

  // string keys, e.g. "relu", "prelu:0.25"; throws std::invalid_argument
  static ScalarActivation from_key(std::string_view key);

  // closure operations
  static ScalarActivation scale(const ScalarActivation& a, double alpha,
                                double beta);
  static ScalarActivation convex_combination(
      const std::vector<std::pair<double, ScalarActivation>>& terms);
  static ScalarActivation compose(const ScalarActivation& outer,
                                  const ScalarActivation& inner);
  static ScalarActivation complement(const ScalarActivation& a);
  static ScalarActivation half_difference(const ScalarActivation& a1,
                                          const ScalarActivation& a2);
  static ScalarActivation reflected_compose(const ScalarActivation& a1,
                                            const ScalarActivation& a2);

  double eval(double x) const;

  // The potential phi, with phi(0) = 0 and phi >= 0 on its domain; +inf
  // outside.  Throws std::logic_error for combinator nodes (no closed form).
  double potential(double y) const;
  bool has_potential() const;

  Interval potential_domain() const;
  bool potential_domain_bounded() const;
  bool conjugate_full_domain() const;

  ActKind kind() const;
  std::string key() const;

  // Elementwise kernel description when this activation maps to a fast
  // kernel op (piecewise-linear catalog members); used by the separable
  // vector operator.
  struct KernelInfo {
    kernels::Op op;
    double param;
  };
  const KernelInfo* kernel() const;

  struct Node;  // implementation detail, defined in activation.cpp

 private:
  explicit ScalarActivation(std::shared_ptr<const Node> node);
  std::shared_ptr<const Node> node_;
};

// Brute-force minimizer of phi(y) + (x - y)^2 / 2 over the potential domain,
// by golden-section search to absolute accuracy tol.  Independent of eval().
double prox_oracle(const ScalarActivation& a, double x, double tol);

}  // namespace proxnet
