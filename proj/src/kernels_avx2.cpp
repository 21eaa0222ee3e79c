#include <immintrin.h>

#include <algorithm>
#include <cstddef>

#include "proxnet/kernels.hpp"

// AVX2 variants of the elementwise activation kernels.  Only min/max/mul/add
// are used, so results are bit-identical to the scalar reference.

namespace proxnet::kernels::detail {

bool avx2_supported() { return __builtin_cpu_supports("avx2"); }

namespace {

template <class Body>
inline void vectorized(const double* x, double* y, std::size_t n, Body body) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(y + i, body(_mm256_loadu_pd(x + i)));
  }
  if (i < n) {
    alignas(32) double buf[4] = {0, 0, 0, 0};
    std::copy(x + i, x + n, buf);
    _mm256_store_pd(buf, body(_mm256_load_pd(buf)));
    std::copy(buf, buf + (n - i), y + i);
  }
}

}  // namespace

void map_avx2(Op op, double param, const double* x, double* y, std::size_t n) {
  const __m256d zero = _mm256_setzero_pd();
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d neg_one = _mm256_set1_pd(-1.0);
  switch (op) {
    case Op::identity:
      if (y != x) std::copy(x, x + n, y);
      break;
    case Op::relu:
      vectorized(x, y, n, [&](__m256d v) { return _mm256_max_pd(v, zero); });
      break;
    case Op::satlin:
      vectorized(x, y, n, [&](__m256d v) {
        return _mm256_min_pd(_mm256_max_pd(v, neg_one), one);
      });
      break;
    case Op::soft_threshold:
      vectorized(x, y, n, [&](__m256d v) {
        const __m256d hi = _mm256_max_pd(_mm256_sub_pd(v, one), zero);
        const __m256d lo = _mm256_min_pd(_mm256_add_pd(v, one), zero);
        return _mm256_add_pd(hi, lo);
      });
      break;
    case Op::prelu: {
      const __m256d slope = _mm256_set1_pd(param);
      vectorized(x, y, n, [&](__m256d v) {
        const __m256d pos = _mm256_max_pd(v, zero);
        const __m256d neg = _mm256_min_pd(v, zero);
        return _mm256_add_pd(pos, _mm256_mul_pd(slope, neg));
      });
      break;
    }
  }
}

}  // namespace proxnet::kernels::detail
