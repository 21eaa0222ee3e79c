#pragma once

#include <cstddef>

// Elementwise kernels for the piecewise-linear activation maps.  Each op has a
// scalar reference implementation and, on x86-64 with AVX2, a vectorized
// variant selected once at runtime.  Both produce identical results: the maps
// are built from min/max/add/mul, so there is no rounding divergence.

namespace proxnet::kernels {

enum class Op {
  identity,
  relu,
  satlin,          // clamp to [-1, 1]
  soft_threshold,  // shrink toward 0 by 1
  prelu,           // param = negative-side slope
};

// y[i] = op(x[i]); x and y may alias.
void map(Op op, double param, const double* x, double* y, std::size_t n);

// Reference path, always scalar.  Exposed for equivalence tests.
void map_scalar(Op op, double param, const double* x, double* y,
                std::size_t n);

// "avx2" or "scalar", whichever map() dispatches to on this machine.
const char* active_backend();

}  // namespace proxnet::kernels
