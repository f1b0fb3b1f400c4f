#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

namespace tgap {

/// Ring elements are handled through their canonical code, an integer in
/// [0, |R|). For Z/N the code is the least nonnegative residue; for
/// GF(p)[X]/(f) it is sum(coeff_i * p^i) over the reduced representative.
using RingElement = std::uint32_t;

/// A finite commutative ring with unit: either Z/N or GF(p)[X]/(f) with f
/// monic of degree >= 1 (non-monic input is normalized by the inverse of its
/// leading coefficient, which leaves the quotient unchanged).
///
/// All arithmetic is on canonical codes. Polynomial quotients are backed by
/// precomputed operation tables; Z/N uses direct modular arithmetic.
class FiniteRing {
 public:
  enum class Kind { ZmodN, PolyQuotient };

  static std::shared_ptr<const FiniteRing> zmod(std::uint64_t n);
  /// f is listed low-degree-first over GF(p).
  static std::shared_ptr<const FiniteRing> poly_quotient(std::uint32_t p,
                                                         std::vector<std::uint32_t> f);

  Kind kind() const { return kind_; }
  std::uint64_t size() const { return size_; }

  RingElement zero() const { return 0; }
  RingElement one() const { return one_; }

  RingElement add(RingElement a, RingElement b) const;
  RingElement sub(RingElement a, RingElement b) const;
  RingElement mul(RingElement a, RingElement b) const;
  RingElement neg(RingElement a) const;

  /// Canonical image of an arbitrary integer (characteristic reduction).
  RingElement from_int(std::int64_t v) const;

  /// Z/N only: the modulus. Poly only: characteristic and reduced modulus.
  std::uint64_t modulus() const;
  std::uint32_t characteristic_p() const;
  const std::vector<std::uint32_t>& modulus_poly() const { return f_; }
  std::size_t extension_degree() const { return deg_; }

  /// Coefficient of X^j in the canonical representative (poly rings).
  std::uint32_t poly_coeff(RingElement a, std::size_t j) const;

  std::string element_str(RingElement a) const;
  nlohmann::ordered_json descriptor() const;
  bool same_as(const FiniteRing& other) const;

 private:
  FiniteRing() = default;

  Kind kind_ = Kind::ZmodN;
  std::uint64_t size_ = 0;
  RingElement one_ = 0;

  // ZmodN
  std::uint64_t n_ = 0;

  // PolyQuotient
  std::uint32_t p_ = 0;
  std::vector<std::uint32_t> f_;  // monic, reduced, low-degree-first
  std::size_t deg_ = 0;
  std::vector<RingElement> add_tab_, mul_tab_, neg_tab_;

  std::vector<std::uint32_t> decode(RingElement a) const;
  RingElement encode(const std::vector<std::uint32_t>& coeffs) const;
};

}  // namespace tgap
