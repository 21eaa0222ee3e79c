#pragma once

#include <iosfwd>
#include <vector>

#include "proxnet/network.hpp"

namespace proxnet {

// One vector per layer output space: (x_1, ..., x_m).
using BlockPoint = std::vector<Vector>;

// The circular-shift permutation S: (x_1,...,x_m) -> (x_m, x_1,...,x_{m-1})
// and the block weight matrix, assembled on the concatenated space.  ws =
// wblk * s maps (x_1,...,x_m) to (W_1 x_m, W_2 x_1, ..., W_m x_{m-1}).
struct BlockOperators {
  Matrix s;
  Matrix wblk;
  Matrix ws;
};

BlockOperators block_operators(const Network& net);

struct ViResiduals {
  std::vector<double> per_layer;  // r_i = ||x_i - T_i x_{i-1}||, x_0 = x_m
  double max = 0.0;
};

// Residuals of the blockwise fixed-point characterization; a zero maximum
// certifies that the point solves the layerwise variational inequality.
ViResiduals vi_residual(const Network& net, const BlockPoint& p);

// (T_1 xm, (T_2 o T_1) xm, ..., (T_m o ... o T_1) xm); when xm is a fixed
// point of the network, the result has zero residuals.
BlockPoint lift_fixed_point(const Network& net, const Vector& xm);

// One application of the block map p -> (T_1 x_m, T_2 x_1, ..., T_m x_{m-1});
// its fixed points are exactly the zero-residual block points.
BlockPoint block_step(const Network& net, const BlockPoint& p);

struct MonotonicityReport {
  bool monotone;           // max eigenvalue of WS + (WS)^T is <= 2 (+1e-10)
  double max_eigenvalue;
  double margin;           // 2 - max_eigenvalue
};

MonotonicityReport monotonicity_check(const Network& net);

// Independent sufficient conditions for the solution set to be nonempty.
// The kernel/conjugate/domain flags additionally require monotonicity to
// certify existence.
struct ExistenceFlags {
  bool range_bounded;        // network output range bounded
  bool some_domain_bounded;  // some layer potential has bounded domain
  bool kernel_condition;     // ||W_i|| <= 1 and ker(S - Wblk^T) trivial
  bool conjugates_full;      // ||W_i|| <= 1 and all conjugates everywhere finite
  bool all_domains_bounded;  // every layer potential has bounded domain
};

ExistenceFlags existence_flags(const Network& net);

// Text format: m lines, one component vector per line, entries
// whitespace-separated.
BlockPoint read_block_point(std::istream& is, const Network& net);
void write_block_point(const BlockPoint& p, std::ostream& os);

}  // namespace proxnet
