#ifndef QPROG_RANDOM_HPP
#define QPROG_RANDOM_HPP

#include <cstdint>
#include <random>

#include "qprog/characters.hpp"

namespace qprog {

/// Independent generator for work item `index` of stream `stream`. Trial i
/// sees the same numbers however many trials run, so reports are
/// prefix-stable in the trial count.
inline std::mt19937_64 trial_rng(std::uint64_t seed, std::uint32_t stream, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), stream,
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

/// Uniform doubles in [-1, 1) via the raw 53-bit mantissa, independent of
/// the standard library's distribution implementations.
inline double uniform_pm1(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-52 - 1.0;
}

inline ComplexFn random_complex_fn(std::uint32_t q, std::mt19937_64& rng) {
  ComplexFn f(q);
  for (std::uint32_t i = 0; i < q; ++i) f.values[i] = Complex(uniform_pm1(rng), uniform_pm1(rng));
  return f;
}

inline ComplexFn random_sign_fn(std::uint32_t q, std::mt19937_64& rng) {
  ComplexFn f(q);
  for (std::uint32_t i = 0; i < q; ++i) f.values[i] = (rng() >> 63) ? 1.0 : -1.0;
  return f;
}

/// Indicator of a random set with each element present with probability 1/2.
/// Never returns the empty set.
inline ComplexFn random_indicator_fn(std::uint32_t q, std::mt19937_64& rng) {
  ComplexFn f(q);
  bool any = false;
  for (std::uint32_t i = 0; i < q; ++i) {
    const bool in = (rng() >> 63) != 0;
    f.values[i] = in ? 1.0 : 0.0;
    any = any || in;
  }
  if (!any) f.values[rng() % q] = 1.0;
  return f;
}

}  // namespace qprog

#endif  // QPROG_RANDOM_HPP
