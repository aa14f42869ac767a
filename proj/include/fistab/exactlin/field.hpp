#pragma once

#include <cstdint>
#include <string>

#include "fistab/error.hpp"

namespace fistab::exactlin {

constexpr bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

// Z/p with p prime and p < 2^31, so a product of two residues fits in 64 bits.
class PrimeField {
 public:
  explicit PrimeField(std::uint32_t p) : p_(p) {
    if (p >= (1u << 31) || !is_prime(p)) throw InputError("modulus must be prime");
  }

  std::uint32_t modulus() const noexcept { return p_; }

  std::uint32_t reduce(std::int64_t x) const noexcept {
    std::int64_t r = x % static_cast<std::int64_t>(p_);
    return static_cast<std::uint32_t>(r < 0 ? r + p_ : r);
  }
  std::uint32_t add(std::uint32_t a, std::uint32_t b) const noexcept {
    std::uint32_t s = a + b;
    return s >= p_ ? s - p_ : s;
  }
  std::uint32_t sub(std::uint32_t a, std::uint32_t b) const noexcept {
    return a >= b ? a - b : a + p_ - b;
  }
  std::uint32_t neg(std::uint32_t a) const noexcept { return a == 0 ? 0 : p_ - a; }
  std::uint32_t mul(std::uint32_t a, std::uint32_t b) const noexcept {
    return static_cast<std::uint32_t>(static_cast<std::uint64_t>(a) * b % p_);
  }
  std::uint32_t inv(std::uint32_t a) const {
    if (a % p_ == 0) throw InputError("inverse of zero in F_" + std::to_string(p_));
    return pow(a, p_ - 2);
  }
  std::uint32_t pow(std::uint32_t a, std::uint64_t e) const noexcept {
    std::uint64_t r = 1 % p_, b = a % p_;
    while (e) {
      if (e & 1) r = r * b % p_;
      b = b * b % p_;
      e >>= 1;
    }
    return static_cast<std::uint32_t>(r);
  }

 private:
  std::uint32_t p_;
};

// Z/m for any m >= 1. Used for the rings of split partial bases.
class ModRing {
 public:
  explicit ModRing(std::uint32_t m) : m_(m) {
    if (m == 0) throw InputError("ring modulus must be positive");
  }
  std::uint32_t modulus() const noexcept { return m_; }
  std::uint32_t reduce(std::int64_t x) const noexcept {
    std::int64_t r = x % static_cast<std::int64_t>(m_);
    return static_cast<std::uint32_t>(r < 0 ? r + m_ : r);
  }
  std::uint32_t add(std::uint32_t a, std::uint32_t b) const noexcept {
    return static_cast<std::uint32_t>((static_cast<std::uint64_t>(a) + b) % m_);
  }
  std::uint32_t sub(std::uint32_t a, std::uint32_t b) const noexcept {
    return static_cast<std::uint32_t>((static_cast<std::uint64_t>(a) + m_ - b) % m_);
  }
  std::uint32_t mul(std::uint32_t a, std::uint32_t b) const noexcept {
    return static_cast<std::uint32_t>(static_cast<std::uint64_t>(a) * b % m_);
  }
  static std::uint32_t gcd(std::uint32_t a, std::uint32_t b) noexcept {
    while (b) {
      std::uint32_t t = a % b;
      a = b;
      b = t;
    }
    return a;
  }
  bool is_unit(std::uint32_t a) const noexcept { return gcd(a % m_, m_) == 1; }
  std::uint32_t inv(std::uint32_t a) const {
    std::int64_t t = 0, nt = 1, r = m_, nr = a % m_;
    while (nr) {
      std::int64_t q = r / nr;
      std::int64_t tmp = t - q * nt;
      t = nt;
      nt = tmp;
      tmp = r - q * nr;
      r = nr;
      nr = tmp;
    }
    if (r != 1) throw InputError(std::to_string(a) + " is not a unit mod " + std::to_string(m_));
    return reduce(t);
  }

 private:
  std::uint32_t m_;
};

// A residue tagged with its modulus; arithmetic across moduli is rejected.
struct ModRingScalar {
  std::uint32_t value = 0;
  std::uint32_t modulus = 1;

  ModRingScalar() = default;
  ModRingScalar(std::int64_t v, std::uint32_t m) : value(ModRing(m).reduce(v)), modulus(m) {}

  friend ModRingScalar operator+(ModRingScalar a, ModRingScalar b) {
    check(a, b);
    return {static_cast<std::int64_t>(ModRing(a.modulus).add(a.value, b.value)), a.modulus};
  }
  friend ModRingScalar operator-(ModRingScalar a, ModRingScalar b) {
    check(a, b);
    return {static_cast<std::int64_t>(ModRing(a.modulus).sub(a.value, b.value)), a.modulus};
  }
  friend ModRingScalar operator*(ModRingScalar a, ModRingScalar b) {
    check(a, b);
    return {static_cast<std::int64_t>(ModRing(a.modulus).mul(a.value, b.value)), a.modulus};
  }
  friend bool operator==(ModRingScalar a, ModRingScalar b) = default;

 private:
  static void check(ModRingScalar a, ModRingScalar b) {
    if (a.modulus != b.modulus) throw InputError("mixed moduli in ring arithmetic");
  }
};

}  // namespace fistab::exactlin
