#ifndef INASIM_TRAFFIC_VALUES_HPP
#define INASIM_TRAFFIC_VALUES_HPP

#include <cstdint>

#include "inasim/layer.hpp"

namespace ina::traffic {

// splitmix64 finalizer; the whole payload universe derives from (seed, indices)
// so any run is reproducible and checkable end-to-end.
inline uint64_t mix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

// Weight element k (0 <= k < C*R*R) of one filter.
inline uint32_t weight_value(uint64_t seed, long long filter, long long k) {
  return static_cast<uint32_t>(
      mix64(seed ^ 0xa5e1c3b2d4f60917ull ^
            (static_cast<uint64_t>(filter) << 32) ^ static_cast<uint64_t>(k)));
}

// Input window element k feeding output pixel p. The window is indexed
// directly: no stride/padding arithmetic, O is given.
inline uint32_t input_value(uint64_t seed, long long pixel, long long k) {
  return static_cast<uint32_t>(
      mix64(seed ^ 0x5aa5c33c0f0f1111ull ^
            (static_cast<uint64_t>(pixel) << 32) ^ static_cast<uint64_t>(k)));
}

// Dot product over the element range [k_begin, k_end), mod 2^32 — one part's
// share of the output.
inline uint32_t partial_value(uint64_t seed, long long filter, long long pixel,
                              long long k_begin, long long k_end) {
  uint32_t acc = 0;
  for (long long k = k_begin; k < k_end; ++k) {
    acc += weight_value(seed, filter, k) * input_value(seed, pixel, k);
  }
  return acc;
}

// Full convolution oracle for one output word.
inline uint32_t output_value(uint64_t seed, const LayerShape& layer,
                             long long filter, long long pixel) {
  return partial_value(seed, filter, pixel, 0, layer.weight_elems());
}

}  // namespace ina::traffic

#endif
