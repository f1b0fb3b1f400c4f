#include "tgap/ring.hpp"

#include <algorithm>
#include <sstream>

#include "tgap/error.hpp"

namespace tgap {

namespace {

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

// Largest table-backed polynomial quotient. Keeps the op tables (size^2
// entries each) within a few hundred MB at the extreme and desk-scale in
// practice.
constexpr std::uint64_t kMaxPolySize = 4096;

std::uint32_t mod_inv(std::uint32_t a, std::uint32_t p) {
  // p prime, a != 0 mod p
  std::int64_t t = 0, new_t = 1, r = p, new_r = a % p;
  while (new_r != 0) {
    const std::int64_t q = r / new_r;
    std::swap(t -= q * new_t, new_t);
    std::swap(r -= q * new_r, new_r);
  }
  return static_cast<std::uint32_t>(((t % p) + p) % p);
}

}  // namespace

std::shared_ptr<const FiniteRing> FiniteRing::zmod(std::uint64_t n) {
  if (n == 0) throw PreconditionError("zmod: modulus must be positive");
  if (n > (1ull << 31)) throw CapExceededError("zmod: modulus too large");
  auto r = std::shared_ptr<FiniteRing>(new FiniteRing());
  r->kind_ = Kind::ZmodN;
  r->n_ = n;
  r->size_ = n;
  r->one_ = static_cast<RingElement>(1 % n);
  return r;
}

std::shared_ptr<const FiniteRing> FiniteRing::poly_quotient(std::uint32_t p,
                                                            std::vector<std::uint32_t> f) {
  if (!is_prime(p)) throw PreconditionError("poly_quotient: p must be prime");
  for (auto& c : f) c %= p;
  while (!f.empty() && f.back() == 0) f.pop_back();
  if (f.size() < 2) throw PreconditionError("poly_quotient: deg f must be >= 1");
  // normalize to monic
  const std::uint32_t lead = f.back();
  if (lead != 1) {
    const std::uint32_t s = mod_inv(lead, p);
    for (auto& c : f)
      c = static_cast<std::uint32_t>((std::uint64_t(c) * s) % p);
  }
  const std::size_t deg = f.size() - 1;
  std::uint64_t size = 1;
  for (std::size_t i = 0; i < deg; ++i) {
    size *= p;
    if (size > kMaxPolySize)
      throw CapExceededError("poly_quotient: ring larger than table cap");
  }

  auto r = std::shared_ptr<FiniteRing>(new FiniteRing());
  r->kind_ = Kind::PolyQuotient;
  r->p_ = p;
  r->f_ = std::move(f);
  r->deg_ = deg;
  r->size_ = size;
  r->one_ = 1;

  // residues have degree < deg; products need one reduction pass by the
  // monic modulus
  auto reduce = [&](std::vector<std::uint32_t> c) {
    while (c.size() > deg) {
      const std::uint32_t top = c.back();
      const std::size_t shift = c.size() - 1 - deg;
      if (top != 0) {
        for (std::size_t i = 0; i <= deg; ++i) {
          std::uint64_t v = c[shift + i] + std::uint64_t(p) * p -
                            std::uint64_t(top) * r->f_[i] % p;
          c[shift + i] = static_cast<std::uint32_t>(v % p);
        }
      }
      c.pop_back();
    }
    return c;
  };

  const std::size_t s = static_cast<std::size_t>(size);
  r->add_tab_.resize(s * s);
  r->mul_tab_.resize(s * s);
  r->neg_tab_.resize(s);
  for (std::size_t a = 0; a < s; ++a) {
    const auto ca = r->decode(static_cast<RingElement>(a));
    std::vector<std::uint32_t> na(deg);
    for (std::size_t i = 0; i < deg; ++i) na[i] = (p - ca[i]) % p;
    r->neg_tab_[a] = r->encode(na);
    for (std::size_t b = 0; b < s; ++b) {
      const auto cb = r->decode(static_cast<RingElement>(b));
      std::vector<std::uint32_t> sum(deg);
      for (std::size_t i = 0; i < deg; ++i) sum[i] = (ca[i] + cb[i]) % p;
      r->add_tab_[a * s + b] = r->encode(sum);
      std::vector<std::uint32_t> prod(2 * deg - 1, 0);
      for (std::size_t i = 0; i < deg; ++i)
        for (std::size_t j = 0; j < deg; ++j)
          prod[i + j] = static_cast<std::uint32_t>(
              (prod[i + j] + std::uint64_t(ca[i]) * cb[j]) % p);
      r->mul_tab_[a * s + b] = r->encode(reduce(std::move(prod)));
    }
  }
  return r;
}

RingElement FiniteRing::add(RingElement a, RingElement b) const {
  if (kind_ == Kind::ZmodN) return static_cast<RingElement>((std::uint64_t(a) + b) % n_);
  return add_tab_[std::size_t(a) * size_ + b];
}

RingElement FiniteRing::sub(RingElement a, RingElement b) const { return add(a, neg(b)); }

RingElement FiniteRing::mul(RingElement a, RingElement b) const {
  if (kind_ == Kind::ZmodN) return static_cast<RingElement>((std::uint64_t(a) * b) % n_);
  return mul_tab_[std::size_t(a) * size_ + b];
}

RingElement FiniteRing::neg(RingElement a) const {
  if (kind_ == Kind::ZmodN) return static_cast<RingElement>((n_ - a) % n_);
  return neg_tab_[a];
}

RingElement FiniteRing::from_int(std::int64_t v) const {
  if (kind_ == Kind::ZmodN) {
    const std::int64_t n = static_cast<std::int64_t>(n_);
    return static_cast<RingElement>(((v % n) + n) % n);
  }
  const std::int64_t p = p_;
  return static_cast<RingElement>(((v % p) + p) % p);
}

std::uint64_t FiniteRing::modulus() const {
  if (kind_ != Kind::ZmodN) throw PreconditionError("modulus(): not a Z/N ring");
  return n_;
}

std::uint32_t FiniteRing::characteristic_p() const {
  if (kind_ != Kind::PolyQuotient) throw PreconditionError("characteristic_p(): not a polynomial quotient");
  return p_;
}

std::uint32_t FiniteRing::poly_coeff(RingElement a, std::size_t j) const {
  if (kind_ != Kind::PolyQuotient) throw PreconditionError("poly_coeff(): not a polynomial quotient");
  if (j >= deg_) return 0;
  RingElement x = a;
  for (std::size_t i = 0; i < j; ++i) x /= p_;
  return x % p_;
}

std::vector<std::uint32_t> FiniteRing::decode(RingElement a) const {
  std::vector<std::uint32_t> c(deg_);
  for (std::size_t i = 0; i < deg_; ++i) {
    c[i] = a % p_;
    a /= p_;
  }
  return c;
}

RingElement FiniteRing::encode(const std::vector<std::uint32_t>& coeffs) const {
  RingElement a = 0;
  for (std::size_t i = coeffs.size(); i-- > 0;)
    a = static_cast<RingElement>(a * p_ + coeffs[i] % p_);
  return a;
}

std::string FiniteRing::element_str(RingElement a) const {
  if (kind_ == Kind::ZmodN) return std::to_string(a);
  const auto c = decode(a);
  std::ostringstream out;
  bool first = true;
  for (std::size_t i = deg_; i-- > 0;) {
    if (c[i] == 0) continue;
    if (!first) out << "+";
    if (i == 0 || c[i] != 1) out << c[i];
    if (i >= 1) {
      if (c[i] != 1) out << "*";
      out << "X";
      if (i > 1) out << "^" << i;
    }
    first = false;
  }
  if (first) out << "0";
  return out.str();
}

nlohmann::ordered_json FiniteRing::descriptor() const {
  nlohmann::ordered_json d;
  if (kind_ == Kind::ZmodN) {
    d["kind"] = "zmod";
    d["n"] = n_;
  } else {
    d["kind"] = "poly";
    d["p"] = p_;
    d["f"] = f_;
  }
  return d;
}

bool FiniteRing::same_as(const FiniteRing& other) const {
  return descriptor() == other.descriptor();
}

}  // namespace tgap
