#pragma once

// Exact arithmetic in torus-bundle groups Z^2 x|_A Z.
//
// An element is written in normal form a^p b^q t^k and stored as (p, q, k).
// The group law is (u, k)(v, l) = (u + A^k v, k + l), which realizes the
// relations t a t^-1 = A(a), t b t^-1 = A(b) with A(a) the first column of A.

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "vtl/error.hpp"

namespace vtl {

using Vec2 = std::array<std::int64_t, 2>;

/// 2x2 integer matrix with determinant +-1, stored row-major.
class SL2Matrix {
 public:
  constexpr SL2Matrix() = default;

  SL2Matrix(std::int64_t m11, std::int64_t m12, std::int64_t m21, std::int64_t m22)
      : m11_(m11), m12_(m12), m21_(m21), m22_(m22) {
    std::int64_t d = 0;
    try {
      d = detail::checked_add(detail::checked_mul(m11, m22), detail::checked_neg(detail::checked_mul(m12, m21)));
    } catch (const Error&) {
      throw Error(ErrorKind::BadMatrix, "determinant overflows");
    }
    if (d != 1 && d != -1) {
      throw Error(ErrorKind::BadMatrix, "determinant " + std::to_string(d) + " is not +-1");
    }
  }

  static constexpr SL2Matrix identity() { return SL2Matrix(); }

  constexpr std::int64_t m11() const { return m11_; }
  constexpr std::int64_t m12() const { return m12_; }
  constexpr std::int64_t m21() const { return m21_; }
  constexpr std::int64_t m22() const { return m22_; }
  constexpr std::int64_t det() const { return m11_ * m22_ - m12_ * m21_; }
  constexpr bool is_identity() const { return m11_ == 1 && m12_ == 0 && m21_ == 0 && m22_ == 1; }

  constexpr bool operator==(const SL2Matrix&) const = default;

  SL2Matrix operator*(const SL2Matrix& o) const {
    using detail::checked_add;
    using detail::checked_mul;
    return unchecked(checked_add(checked_mul(m11_, o.m11_), checked_mul(m12_, o.m21_)),
                     checked_add(checked_mul(m11_, o.m12_), checked_mul(m12_, o.m22_)),
                     checked_add(checked_mul(m21_, o.m11_), checked_mul(m22_, o.m21_)),
                     checked_add(checked_mul(m21_, o.m12_), checked_mul(m22_, o.m22_)));
  }

  /// Exact inverse: adjugate divided by det, which is +-1.
  SL2Matrix inverse() const {
    using detail::checked_mul;
    using detail::checked_neg;
    const std::int64_t d = det();
    return unchecked(checked_mul(m22_, d), checked_mul(checked_neg(m12_), d), checked_mul(checked_neg(m21_), d),
                     checked_mul(m11_, d));
  }

 private:
  static SL2Matrix unchecked(std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d) {
    SL2Matrix m;
    m.m11_ = a;
    m.m12_ = b;
    m.m21_ = c;
    m.m22_ = d;
    return m;
  }

  std::int64_t m11_ = 1, m12_ = 0, m21_ = 0, m22_ = 1;
};

/// A^k by repeated squaring; negative k goes through the exact inverse.
inline SL2Matrix matrix_power(const SL2Matrix& a, std::int64_t k) {
  if (k > 1'000'000 || k < -1'000'000) throw Error(ErrorKind::BadValue, "matrix exponent out of range");
  SL2Matrix base = k < 0 ? a.inverse() : a;
  std::uint64_t e = static_cast<std::uint64_t>(k < 0 ? -k : k);
  SL2Matrix result;
  while (e != 0) {
    if (e & 1U) result = result * base;
    e >>= 1U;
    if (e != 0) base = base * base;
  }
  return result;
}

inline Vec2 apply(const SL2Matrix& a, const Vec2& v) {
  using detail::checked_add;
  using detail::checked_mul;
  return {checked_add(checked_mul(a.m11(), v[0]), checked_mul(a.m12(), v[1])),
          checked_add(checked_mul(a.m21(), v[0]), checked_mul(a.m22(), v[1]))};
}

/// Normal form a^p b^q t^k. Ordered by (k, p, q).
struct GroupElement {
  std::int64_t p = 0;
  std::int64_t q = 0;
  std::int32_t k = 0;

  constexpr bool operator==(const GroupElement&) const = default;
  constexpr std::strong_ordering operator<=>(const GroupElement& o) const {
    if (auto c = k <=> o.k; c != 0) return c;
    if (auto c = p <=> o.p; c != 0) return c;
    return q <=> o.q;
  }

  static constexpr GroupElement identity() { return {}; }
  constexpr bool is_identity() const { return p == 0 && q == 0 && k == 0; }
};

inline std::string to_string(const GroupElement& g) {
  return "(" + std::to_string(g.p) + "," + std::to_string(g.q) + "," + std::to_string(g.k) + ")";
}

struct GroupElementHash {
  std::size_t operator()(const GroupElement& g) const noexcept {
    std::uint64_t h = static_cast<std::uint64_t>(g.p) * 0x9E3779B97F4A7C15ULL;
    h ^= static_cast<std::uint64_t>(g.q) + 0x632BE59BD9B4E019ULL + (h << 6) + (h >> 2);
    h ^= static_cast<std::uint64_t>(static_cast<std::uint32_t>(g.k)) * 0xD6E8FEB86659FD93ULL;
    h ^= h >> 32;
    h *= 0x94D049BB133111EBULL;
    h ^= h >> 29;
    return static_cast<std::size_t>(h);
  }
};

enum class GroupKind { Abelian2, TorusBundle };

/// The group Z^2 x|_A Z, or plain Z^2 (no fiber letter).
class TorusBundleGroup {
 public:
  static TorusBundleGroup z2() { return TorusBundleGroup(GroupKind::Abelian2, SL2Matrix::identity()); }
  /// Integral Heisenberg group, A = [[1,1],[0,1]].
  static TorusBundleGroup nil() { return bundle(SL2Matrix(1, 1, 0, 1)); }
  /// Sol lattice, B = [[2,1],[1,1]].
  static TorusBundleGroup sol() { return bundle(SL2Matrix(2, 1, 1, 1)); }
  static TorusBundleGroup bundle(const SL2Matrix& a) { return TorusBundleGroup(GroupKind::TorusBundle, a); }

  GroupKind kind() const { return kind_; }
  const SL2Matrix& matrix() const { return matrix_; }

  bool operator==(const TorusBundleGroup& o) const { return kind_ == o.kind_ && matrix_ == o.matrix_; }

  /// A^k, served from a precomputed table where it fits in 64 bits.
  SL2Matrix power(std::int32_t k) const {
    const std::int64_t idx = static_cast<std::int64_t>(k) + kPowerSpan;
    if (idx >= 0 && idx < static_cast<std::int64_t>(powers_.size()) && valid_[static_cast<std::size_t>(idx)]) {
      return powers_[static_cast<std::size_t>(idx)];
    }
    return matrix_power(matrix_, k);
  }

  GroupElement multiply(const GroupElement& g, const GroupElement& h) const {
    if (kind_ == GroupKind::Abelian2) {
      require_planar(g);
      require_planar(h);
      return {detail::checked_add(g.p, h.p), detail::checked_add(g.q, h.q), 0};
    }
    Vec2 moved = h.k == 0 && h.p == 0 && h.q == 0 ? Vec2{0, 0} : vtl::apply(power(g.k), Vec2{h.p, h.q});
    return {detail::checked_add(g.p, moved[0]), detail::checked_add(g.q, moved[1]), detail::checked_add32(g.k, h.k)};
  }

  /// (u, k)^-1 = (-A^-k u, -k).
  GroupElement inverse(const GroupElement& g) const {
    if (kind_ == GroupKind::Abelian2) {
      require_planar(g);
      return {detail::checked_neg(g.p), detail::checked_neg(g.q), 0};
    }
    if (g.k == std::numeric_limits<std::int32_t>::min()) throw Error(ErrorKind::ArithmeticOverflow, "fiber negation");
    Vec2 u = vtl::apply(power(-g.k), Vec2{g.p, g.q});
    return {detail::checked_neg(u[0]), detail::checked_neg(u[1]), -g.k};
  }

 private:
  static constexpr std::int32_t kPowerSpan = 64;

  TorusBundleGroup(GroupKind kind, const SL2Matrix& a) : kind_(kind), matrix_(a) {
    powers_.resize(2 * kPowerSpan + 1);
    valid_.assign(2 * kPowerSpan + 1, false);
    powers_[kPowerSpan] = SL2Matrix::identity();
    valid_[kPowerSpan] = true;
    fill_powers(matrix_, +1);
    fill_powers(matrix_.inverse(), -1);
  }

  void fill_powers(const SL2Matrix& step, int dir) {
    SL2Matrix cur;
    for (std::int32_t i = 1; i <= kPowerSpan; ++i) {
      try {
        cur = cur * step;
      } catch (const Error&) {
        return;
      }
      const auto idx = static_cast<std::size_t>(kPowerSpan + dir * i);
      powers_[idx] = cur;
      valid_[idx] = true;
    }
  }

  static void require_planar(const GroupElement& g) {
    if (g.k != 0) throw Error(ErrorKind::BadValue, "element of Z^2 has nonzero fiber coordinate");
  }

  GroupKind kind_;
  SL2Matrix matrix_;
  std::vector<SL2Matrix> powers_;
  std::vector<bool> valid_;
};

/// One letter of a word over {a, b, t}; `inverse` marks the formal inverse.
struct Letter {
  char symbol = 'a';
  bool inverse = false;

  constexpr bool operator==(const Letter&) const = default;
};

struct Word {
  std::vector<Letter> letters;

  bool operator==(const Word&) const = default;

  /// Parses e.g. "tB" or "t b^-1" or "ta-" : lowercase letters, an uppercase
  /// letter, a trailing "^-1" or a trailing "-" denote the inverse. "e", "1"
  /// and "" are the empty word.
  static Word parse(std::string_view text) {
    Word w;
    for (std::size_t i = 0; i < text.size(); ++i) {
      const char c = text[i];
      if (c == ' ' || c == '*' || c == '.') continue;
      if ((c == 'e' || c == '1') && text.size() == 1) break;
      Letter l;
      if (c == 'a' || c == 'b' || c == 't') {
        l.symbol = c;
      } else if (c == 'A' || c == 'B' || c == 'T') {
        l.symbol = static_cast<char>(c - 'A' + 'a');
        l.inverse = true;
      } else {
        throw Error(ErrorKind::IllegalLetter, "unknown letter '" + std::string(1, c) + "' in word \"" +
                                                  std::string(text) + "\"");
      }
      if (text.substr(i + 1).starts_with("^-1")) {
        l.inverse = !l.inverse;
        i += 3;
      } else if (text.substr(i + 1).starts_with("-")) {
        l.inverse = !l.inverse;
        i += 1;
      }
      w.letters.push_back(l);
    }
    return w;
  }

  std::string str() const {
    std::string s;
    for (const auto& l : letters) s += l.inverse ? static_cast<char>(l.symbol - 'a' + 'A') : l.symbol;
    return s.empty() ? "e" : s;
  }
};

/// Left-to-right product of a = (1,0,0), b = (0,1,0), t = (0,0,1) and inverses.
inline GroupElement evaluate_word(const TorusBundleGroup& group, const Word& word) {
  GroupElement acc;
  for (const auto& l : word.letters) {
    GroupElement x;
    switch (l.symbol) {
      case 'a': x = {1, 0, 0}; break;
      case 'b': x = {0, 1, 0}; break;
      case 't':
        if (group.kind() == GroupKind::Abelian2) throw Error(ErrorKind::IllegalLetter, "t is not a letter of Z^2");
        x = {0, 0, 1};
        break;
      default: throw Error(ErrorKind::IllegalLetter, std::string("unknown letter ") + l.symbol);
    }
    if (l.inverse) x = group.inverse(x);
    acc = group.multiply(acc, x);
  }
  return acc;
}

}  // namespace vtl

template <>
struct std::hash<vtl::GroupElement> : vtl::GroupElementHash {};
