#include "proxnet/kernels.hpp"

#include <algorithm>
#include <cmath>

namespace proxnet::kernels {

void map_scalar(Op op, double param, const double* x, double* y,
                std::size_t n) {
  switch (op) {
    case Op::identity:
      if (y != x) std::copy(x, x + n, y);
      break;
    case Op::relu:
      for (std::size_t i = 0; i < n; ++i) y[i] = std::max(x[i], 0.0);
      break;
    case Op::satlin:
      for (std::size_t i = 0; i < n; ++i)
        y[i] = std::min(std::max(x[i], -1.0), 1.0);
      break;
    case Op::soft_threshold:
      for (std::size_t i = 0; i < n; ++i) {
        const double v = x[i];
        y[i] = std::max(v - 1.0, 0.0) + std::min(v + 1.0, 0.0);
      }
      break;
    case Op::prelu:
      for (std::size_t i = 0; i < n; ++i) {
        const double v = x[i];
        y[i] = std::max(v, 0.0) + param * std::min(v, 0.0);
      }
      break;
  }
}

#if defined(PROXNET_HAVE_AVX2_TU)
namespace detail {
void map_avx2(Op op, double param, const double* x, double* y, std::size_t n);
bool avx2_supported();
}  // namespace detail
#endif

namespace {

using MapFn = void (*)(Op, double, const double*, double*, std::size_t);

MapFn select_backend() {
#if defined(PROXNET_HAVE_AVX2_TU)
  if (detail::avx2_supported()) return &detail::map_avx2;
#endif
  return &map_scalar;
}

const MapFn g_map = select_backend();

}  // namespace

void map(Op op, double param, const double* x, double* y, std::size_t n) {
  g_map(op, param, x, y, n);
}

const char* active_backend() {
  return g_map == &map_scalar ? "scalar" : "avx2";
}

}  // namespace proxnet::kernels
