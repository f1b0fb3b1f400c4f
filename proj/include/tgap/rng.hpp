#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <span>

namespace tgap {

/// Seedable random source with a pinned stream definition, so that fixtures
/// are bit-reproducible across platforms and library versions.
///
/// Stream semantics: the engine is std::mt19937_64 seeded directly with the
/// given seed (the mt19937_64 output sequence is fully specified by the C++
/// standard). Unit doubles are formed as (x >> 11) * 2^-53 from raw draws;
/// symmetric doubles as 2*unit - 1. Vector fills draw components in index
/// order, real part before imaginary part. Integer draws below a bound use
/// plain modulo reduction. None of this relies on std::*_distribution, whose
/// output is implementation-defined.
class PortableRng {
 public:
  explicit PortableRng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t raw() { return eng_(); }

  /// Uniform in [0, 1).
  double unit() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  /// Uniform in [-1, 1).
  double symmetric() { return 2.0 * unit() - 1.0; }

  std::complex<double> complex_symmetric() {
    const double re = symmetric();
    const double im = symmetric();
    return {re, im};
  }

  /// Uniform in {0, ..., bound-1} by modulo reduction.
  std::uint64_t below(std::uint64_t bound) { return bound ? eng_() % bound : 0; }

  void fill(std::span<std::complex<double>> v) {
    for (auto& x : v) x = complex_symmetric();
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace tgap
