#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "tgap/ring.hpp"

namespace tgap {

/// An element (v, g) of R^2 x| SL2(R), stored as six ring codes in the order
/// (v.x, v.y, g.a, g.b, g.c, g.d). Comparison of the raw arrays is the
/// canonical lexicographic order used for indexing.
using GroupElement = std::array<RingElement, 6>;

/// A 2x2 matrix (a, b, c, d) over a finite ring.
using Mat2 = std::array<RingElement, 4>;

struct BuildLimits {
  std::uint64_t max_sl2 = 1'000'000;
  std::uint64_t max_group = 10'000'000;
};

inline GroupElement make_elem(RingElement vx, RingElement vy, const Mat2& m) {
  return {vx, vy, m[0], m[1], m[2], m[3]};
}

Mat2 mat_of(const GroupElement& e);

/// Exhaustive determinant filter over all |R|^4 matrices. This is the
/// enumeration oracle; it refuses rings with |R| > 64.
std::vector<Mat2> sl2_enumerate_bruteforce(const FiniteRing& ring, std::uint64_t cap);

/// Closure of the elementary matrices E12(r), E21(r) under multiplication
/// (finite commutative rings are semilocal, so this generates all of SL2).
std::vector<Mat2> sl2_enumerate_closure(const FiniteRing& ring, std::uint64_t cap);

/// Brute force for |R| <= 64, generator closure above. Result is sorted
/// lexicographically by (a, b, c, d).
std::vector<Mat2> sl2_enumerate(const FiniteRing& ring, std::uint64_t cap = BuildLimits{}.max_sl2);

/// A finite group of (v, g) elements with a fixed element order and a
/// bijective index. Index 0 is always the identity; the remaining elements
/// are in lexicographic order of their canonical codes. Immutable after
/// construction and safe for concurrent reads.
class IndexedGroup : public std::enable_shared_from_this<IndexedGroup> {
 public:
  enum class Kind { Full, Translations, Linear, Custom };

  /// R^2 x| SL2(R).
  static std::shared_ptr<const IndexedGroup> full(std::shared_ptr<const FiniteRing> ring,
                                                  const BuildLimits& limits = {});
  /// The translation subgroup {(v, I)} ~ (R^2, +).
  static std::shared_ptr<const IndexedGroup> translations(std::shared_ptr<const FiniteRing> ring,
                                                          const BuildLimits& limits = {});
  /// The linear subgroup {(0, g)} ~ SL2(R).
  static std::shared_ptr<const IndexedGroup> linear(std::shared_ptr<const FiniteRing> ring,
                                                    const BuildLimits& limits = {});
  /// An explicit element list; must contain the identity and be closed under
  /// multiplication. Elements are checked for membership in `parent` when a
  /// parent is given.
  static std::shared_ptr<const IndexedGroup> subgroup(std::shared_ptr<const FiniteRing> ring,
                                                      std::vector<GroupElement> elements,
                                                      const IndexedGroup* parent = nullptr);

  std::size_t size() const { return elems_.size(); }
  const GroupElement& at(std::uint32_t i) const { return elems_[i]; }
  const std::vector<GroupElement>& elements() const { return elems_; }
  GroupElement identity() const;

  std::uint32_t index_of(const GroupElement& e) const;
  bool contains(const GroupElement& e) const;

  GroupElement mul(const GroupElement& x, const GroupElement& y) const;
  GroupElement inv(const GroupElement& x) const;

  const FiniteRing& ring() const { return *ring_; }
  std::shared_ptr<const FiniteRing> ring_ptr() const { return ring_; }
  Kind group_kind() const { return kind_; }

  /// Computed on first use; cached.
  bool is_abelian() const;

  std::string element_str(const GroupElement& e) const;
  nlohmann::ordered_json descriptor() const;

 private:
  IndexedGroup() = default;
  void build_index();
  std::uint64_t encode(const GroupElement& e) const;

  std::shared_ptr<const FiniteRing> ring_;
  std::vector<GroupElement> elems_;
  std::unordered_map<std::uint64_t, std::uint32_t> index_;
  Kind kind_ = Kind::Custom;

  mutable std::once_flag abelian_once_;
  mutable bool abelian_ = false;
};

/// Semidirect product law (v1, g1)(v2, g2) = (v1 + g1.v2, g1 g2), usable
/// without an element table.
GroupElement group_mul(const FiniteRing& ring, const GroupElement& x, const GroupElement& y);
GroupElement group_inv(const FiniteRing& ring, const GroupElement& x);
GroupElement group_identity(const FiniteRing& ring);

/// Letters of words in the infinite group: a = ((1,0), I),
/// S = ((0,0), [[0,-1],[1,0]]), T = ((0,0), [[1,1],[0,1]]), and inverses.
enum class Letter { A, AInv, S, SInv, T, TInv };
using Word = std::vector<Letter>;

/// Parse "aS", "SSSS", "a'T" (a trailing apostrophe marks the inverse
/// letter; whitespace is ignored).
Word parse_word(const std::string& text);
std::string word_str(const Word& w);

/// Evaluate the word's image under reduction into G. Evaluation is
/// homomorphic by construction: concatenation maps to products.
GroupElement reduce_word(const Word& w, const IndexedGroup& G);

/// Words for the generating tuple (g1, g2, e, ..., e) of length m,
/// with g1 = aS and g2 = T.
std::vector<Word> generator_words(int m);

/// generator_words evaluated in G.
std::vector<GroupElement> generator_tuple(const IndexedGroup& G, int m);

}  // namespace tgap
