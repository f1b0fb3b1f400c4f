#include "tgap/group.hpp"

#include <algorithm>
#include <deque>
#include <sstream>
#include <unordered_set>

#include "tgap/error.hpp"

namespace tgap {

namespace {

Mat2 mat_mul(const FiniteRing& R, const Mat2& x, const Mat2& y) {
  return {R.add(R.mul(x[0], y[0]), R.mul(x[1], y[2])),
          R.add(R.mul(x[0], y[1]), R.mul(x[1], y[3])),
          R.add(R.mul(x[2], y[0]), R.mul(x[3], y[2])),
          R.add(R.mul(x[2], y[1]), R.mul(x[3], y[3]))};
}

RingElement mat_det(const FiniteRing& R, const Mat2& m) {
  return R.sub(R.mul(m[0], m[3]), R.mul(m[1], m[2]));
}

Mat2 mat_identity(const FiniteRing& R) { return {R.one(), R.zero(), R.zero(), R.one()}; }

// det = 1, so the inverse is the adjugate.
Mat2 mat_inv(const FiniteRing& R, const Mat2& m) {
  return {m[3], R.neg(m[1]), R.neg(m[2]), m[0]};
}

std::array<RingElement, 2> mat_act(const FiniteRing& R, const Mat2& m,
                                   RingElement vx, RingElement vy) {
  return {R.add(R.mul(m[0], vx), R.mul(m[1], vy)),
          R.add(R.mul(m[2], vx), R.mul(m[3], vy))};
}

std::uint64_t mat_encode(const FiniteRing& R, const Mat2& m) {
  const std::uint64_t s = R.size();
  return ((std::uint64_t(m[0]) * s + m[1]) * s + m[2]) * s + m[3];
}

}  // namespace

Mat2 mat_of(const GroupElement& e) { return {e[2], e[3], e[4], e[5]}; }

GroupElement group_mul(const FiniteRing& R, const GroupElement& x, const GroupElement& y) {
  const Mat2 gx = mat_of(x), gy = mat_of(y);
  const auto v = mat_act(R, gx, y[0], y[1]);
  const Mat2 g = mat_mul(R, gx, gy);
  return {R.add(x[0], v[0]), R.add(x[1], v[1]), g[0], g[1], g[2], g[3]};
}

GroupElement group_inv(const FiniteRing& R, const GroupElement& x) {
  const Mat2 gi = mat_inv(R, mat_of(x));
  const auto v = mat_act(R, gi, x[0], x[1]);
  return {R.neg(v[0]), R.neg(v[1]), gi[0], gi[1], gi[2], gi[3]};
}

GroupElement group_identity(const FiniteRing& R) {
  return make_elem(R.zero(), R.zero(), mat_identity(R));
}

std::vector<Mat2> sl2_enumerate_bruteforce(const FiniteRing& R, std::uint64_t cap) {
  const std::uint64_t s = R.size();
  if (s > 64) throw CapExceededError("sl2_enumerate_bruteforce: |R| > 64");
  std::vector<Mat2> out;
  for (RingElement a = 0; a < s; ++a)
    for (RingElement b = 0; b < s; ++b)
      for (RingElement c = 0; c < s; ++c)
        for (RingElement d = 0; d < s; ++d) {
          const Mat2 m{a, b, c, d};
          if (mat_det(R, m) == R.one()) {
            out.push_back(m);
            if (out.size() > cap) throw CapExceededError("sl2_enumerate: cap exceeded");
          }
        }
  return out;  // generated in lexicographic order
}

std::vector<Mat2> sl2_enumerate_closure(const FiniteRing& R, std::uint64_t cap) {
  const std::uint64_t s = R.size();
  std::vector<Mat2> gens;
  for (RingElement r = 0; r < s; ++r) {
    if (r == R.zero()) continue;
    gens.push_back({R.one(), r, R.zero(), R.one()});
    gens.push_back({R.one(), R.zero(), r, R.one()});
  }
  const Mat2 id = mat_identity(R);
  std::unordered_set<std::uint64_t> seen{mat_encode(R, id)};
  std::deque<Mat2> queue{id};
  std::vector<Mat2> out{id};
  while (!queue.empty()) {
    const Mat2 m = queue.front();
    queue.pop_front();
    for (const Mat2& g : gens) {
      const Mat2 next = mat_mul(R, m, g);
      if (seen.insert(mat_encode(R, next)).second) {
        out.push_back(next);
        if (out.size() > cap) throw CapExceededError("sl2_enumerate: cap exceeded");
        queue.push_back(next);
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Mat2> sl2_enumerate(const FiniteRing& R, std::uint64_t cap) {
  if (R.size() <= 64) return sl2_enumerate_bruteforce(R, cap);
  return sl2_enumerate_closure(R, cap);
}

std::uint64_t IndexedGroup::encode(const GroupElement& e) const {
  const std::uint64_t s = ring_->size();
  std::uint64_t code = 0;
  for (const RingElement c : e) code = code * s + c;
  return code;
}

void IndexedGroup::build_index() {
  if (ring_->size() > 1625)
    throw CapExceededError("IndexedGroup: |R|^6 does not fit the 64-bit element code");
  index_.reserve(elems_.size() * 2);
  for (std::uint32_t i = 0; i < elems_.size(); ++i) {
    if (!index_.emplace(encode(elems_[i]), i).second)
      throw PreconditionError("IndexedGroup: duplicate element in list");
  }
}

namespace {

// Identity first, remaining elements in lexicographic order.
void identity_to_front(std::vector<GroupElement>& elems, const GroupElement& id) {
  auto it = std::find(elems.begin(), elems.end(), id);
  if (it == elems.end()) throw PreconditionError("IndexedGroup: identity missing");
  std::rotate(elems.begin(), it, it + 1);
}

}  // namespace

std::shared_ptr<const IndexedGroup> IndexedGroup::full(std::shared_ptr<const FiniteRing> ring,
                                                       const BuildLimits& limits) {
  const auto mats = sl2_enumerate(*ring, limits.max_sl2);
  const std::uint64_t s = ring->size();
  const std::uint64_t total = s * s * mats.size();
  if (total > limits.max_group) throw CapExceededError("group_build: group cap exceeded");
  auto g = std::shared_ptr<IndexedGroup>(new IndexedGroup());
  g->ring_ = ring;
  g->kind_ = Kind::Full;
  g->elems_.reserve(total);
  for (RingElement vx = 0; vx < s; ++vx)
    for (RingElement vy = 0; vy < s; ++vy)
      for (const Mat2& m : mats) g->elems_.push_back(make_elem(vx, vy, m));
  identity_to_front(g->elems_, group_identity(*ring));
  g->build_index();
  return g;
}

std::shared_ptr<const IndexedGroup> IndexedGroup::translations(
    std::shared_ptr<const FiniteRing> ring, const BuildLimits& limits) {
  const std::uint64_t s = ring->size();
  if (s * s > limits.max_group) throw CapExceededError("group_build: group cap exceeded");
  auto g = std::shared_ptr<IndexedGroup>(new IndexedGroup());
  g->ring_ = ring;
  g->kind_ = Kind::Translations;
  const Mat2 id = mat_identity(*ring);
  g->elems_.reserve(s * s);
  for (RingElement vx = 0; vx < s; ++vx)
    for (RingElement vy = 0; vy < s; ++vy) g->elems_.push_back(make_elem(vx, vy, id));
  // (0,0) is already first
  g->build_index();
  return g;
}

std::shared_ptr<const IndexedGroup> IndexedGroup::linear(std::shared_ptr<const FiniteRing> ring,
                                                         const BuildLimits& limits) {
  const auto mats = sl2_enumerate(*ring, limits.max_sl2);
  auto g = std::shared_ptr<IndexedGroup>(new IndexedGroup());
  g->ring_ = ring;
  g->kind_ = Kind::Linear;
  g->elems_.reserve(mats.size());
  for (const Mat2& m : mats) g->elems_.push_back(make_elem(ring->zero(), ring->zero(), m));
  identity_to_front(g->elems_, group_identity(*ring));
  g->build_index();
  return g;
}

std::shared_ptr<const IndexedGroup> IndexedGroup::subgroup(std::shared_ptr<const FiniteRing> ring,
                                                           std::vector<GroupElement> elements,
                                                           const IndexedGroup* parent) {
  std::sort(elements.begin(), elements.end());
  elements.erase(std::unique(elements.begin(), elements.end()), elements.end());
  if (elements.empty()) throw PreconditionError("subgroup: empty element list");
  auto g = std::shared_ptr<IndexedGroup>(new IndexedGroup());
  g->ring_ = ring;
  g->kind_ = Kind::Custom;
  g->elems_ = std::move(elements);
  identity_to_front(g->elems_, group_identity(*ring));
  g->build_index();
  if (parent) {
    for (const auto& e : g->elems_)
      if (!parent->contains(e)) throw PreconditionError("subgroup: element not in parent group");
  }
  for (const auto& x : g->elems_) {
    if (!g->contains(group_inv(*ring, x)))
      throw PreconditionError("subgroup: not closed under inverse");
    for (const auto& y : g->elems_)
      if (!g->contains(group_mul(*ring, x, y)))
        throw PreconditionError("subgroup: not closed under multiplication");
  }
  return g;
}

GroupElement IndexedGroup::identity() const { return group_identity(*ring_); }

std::uint32_t IndexedGroup::index_of(const GroupElement& e) const {
  const auto it = index_.find(encode(e));
  if (it == index_.end()) throw PreconditionError("index_of: element not in group");
  return it->second;
}

bool IndexedGroup::contains(const GroupElement& e) const {
  return index_.find(encode(e)) != index_.end();
}

GroupElement IndexedGroup::mul(const GroupElement& x, const GroupElement& y) const {
  return group_mul(*ring_, x, y);
}

GroupElement IndexedGroup::inv(const GroupElement& x) const { return group_inv(*ring_, x); }

bool IndexedGroup::is_abelian() const {
  std::call_once(abelian_once_, [this] {
    abelian_ = true;
    for (std::size_t i = 0; i < elems_.size() && abelian_; ++i)
      for (std::size_t j = i + 1; j < elems_.size(); ++j)
        if (mul(elems_[i], elems_[j]) != mul(elems_[j], elems_[i])) {
          abelian_ = false;
          break;
        }
  });
  return abelian_;
}

std::string IndexedGroup::element_str(const GroupElement& e) const {
  std::ostringstream out;
  out << "((" << ring_->element_str(e[0]) << "," << ring_->element_str(e[1]) << "),["
      << ring_->element_str(e[2]) << "," << ring_->element_str(e[3]) << ";"
      << ring_->element_str(e[4]) << "," << ring_->element_str(e[5]) << "])";
  return out.str();
}

nlohmann::ordered_json IndexedGroup::descriptor() const {
  nlohmann::ordered_json d;
  d["ring"] = ring_->descriptor();
  switch (kind_) {
    case Kind::Full: d["kind"] = "full"; break;
    case Kind::Translations: d["kind"] = "translations"; break;
    case Kind::Linear: d["kind"] = "linear"; break;
    case Kind::Custom: d["kind"] = "custom"; break;
  }
  d["order"] = elems_.size();
  return d;
}

Word parse_word(const std::string& text) {
  Word w;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char ch = text[i];
    if (ch == ' ' || ch == '\t') continue;
    const bool inv = (i + 1 < text.size() && text[i + 1] == '\'');
    switch (ch) {
      case 'a': w.push_back(inv ? Letter::AInv : Letter::A); break;
      case 'S': w.push_back(inv ? Letter::SInv : Letter::S); break;
      case 'T': w.push_back(inv ? Letter::TInv : Letter::T); break;
      default: throw PreconditionError(std::string("parse_word: bad letter '") + ch + "'");
    }
    if (inv) ++i;
  }
  return w;
}

std::string word_str(const Word& w) {
  std::string s;
  for (const Letter l : w) {
    switch (l) {
      case Letter::A: s += "a"; break;
      case Letter::AInv: s += "a'"; break;
      case Letter::S: s += "S"; break;
      case Letter::SInv: s += "S'"; break;
      case Letter::T: s += "T"; break;
      case Letter::TInv: s += "T'"; break;
    }
  }
  return s.empty() ? "e" : s;
}

GroupElement reduce_word(const Word& w, const IndexedGroup& G) {
  const FiniteRing& R = G.ring();
  const RingElement o = R.one(), z = R.zero();
  const GroupElement a = make_elem(o, z, mat_identity(R));
  const GroupElement s = make_elem(z, z, Mat2{z, R.neg(o), o, z});
  const GroupElement t = make_elem(z, z, Mat2{o, o, z, o});
  GroupElement acc = group_identity(R);
  for (const Letter l : w) {
    GroupElement img;
    switch (l) {
      case Letter::A: img = a; break;
      case Letter::AInv: img = group_inv(R, a); break;
      case Letter::S: img = s; break;
      case Letter::SInv: img = group_inv(R, s); break;
      case Letter::T: img = t; break;
      case Letter::TInv: img = group_inv(R, t); break;
      default: throw PreconditionError("reduce_word: bad letter");
    }
    acc = group_mul(R, acc, img);
  }
  return acc;
}

std::vector<Word> generator_words(int m) {
  if (m < 2) throw PreconditionError("generator tuple needs m >= 2");
  std::vector<Word> out;
  out.push_back(parse_word("aS"));
  out.push_back(parse_word("T"));
  for (int i = 2; i < m; ++i) out.push_back(Word{});
  return out;
}

std::vector<GroupElement> generator_tuple(const IndexedGroup& G, int m) {
  std::vector<GroupElement> out;
  for (const Word& w : generator_words(m)) out.push_back(reduce_word(w, G));
  return out;
}

}  // namespace tgap
