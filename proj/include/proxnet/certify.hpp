#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "proxnet/network.hpp"

namespace proxnet {

enum class CertCondition { zero_factor, norm_bound, eta_condition, none };

struct Certificate {
  std::optional<double> alpha;  // averagedness parameter, in [1/2, 1]
  CertCondition condition = CertCondition::none;
  std::vector<double> theta;  // theta_0 ... theta_m for the m layer weights
  std::optional<double> eta;
  std::optional<double> mu;
};

struct NormEstimate {
  double lower_bound;
  Vector witness;  // concatenated blocks achieving the bound
  int samples;
};

// theta_0 = 1; theta_i = sum_{k<i} theta_k ||W_i ... W_{k+1}|| with composite
// norms of explicitly multiplied products.  Returns theta_0 ... theta_l for a
// chain of l matrices.
std::vector<double> theta_sequence(const std::vector<Matrix>& weights);

// inf over the unit sphere of <Wx, x> = smallest eigenvalue of (W + W^T)/2.
double mu_lower(const Matrix& w);

// Norm-bound sufficient condition:
// ||W - 2^{m+1}(1-alpha) Id|| - ||W|| + 2 theta_{m+1} <= 2^{m+1} alpha,
// where the chain has m+1 matrices and W is their product.
bool check_condition_iii(const std::vector<Matrix>& weights, double alpha);

// Eta-search sufficient condition; returns the eta found, if any.  Requires
// alpha in [1/2, 1) and all weights nonzero.
std::optional<double> check_condition_iv(const std::vector<Matrix>& weights,
                                         double alpha, int eta_grid = 1000);

// Smallest alpha on a grid over [1/2, 1] certified by one of the sufficient
// conditions, applied to the network's m layer weights (chain index m-1).
Certificate certify_network(const Network& net, double alpha_step = 1e-3);

// Per-layer averagedness constants via ||W_i - 2(1-beta) Id|| + ||W_i|| <=
// 2 beta; requires equal-dimension square layers.
std::optional<std::vector<double>> certify_layerwise(const Network& net,
                                                     double beta_step = 1e-3);

// Sampled lower bound for the mixed operator norm behind the norm condition;
// a value > 1 refutes it, <= 1 is inconclusive.
NormEstimate m_norm_lower_bound(const std::vector<Matrix>& weights,
                                double alpha, int samples, std::uint64_t seed);

// L_{i}(x_0, ..., x_{i-1}) = sum_k (W_i o ... o W_{k+1}) x_k for a weight
// chain; blocks is x_0 ... x_{i-1}.  Exposed for the admissible-tuple tests.
Vector chain_combination(const std::vector<Matrix>& weights, int i,
                         const std::vector<Vector>& blocks);

const char* to_string(CertCondition c);

}  // namespace proxnet
