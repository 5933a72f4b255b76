#pragma once

#include <Eigen/Core>

#include <compare>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace gradlab {

/// Element of the prime field F_P. Stored reduced in [0, P).
template <std::uint32_t P>
class Fp {
  static_assert(P >= 2 && P < (1u << 16), "small primes only");

 public:
  constexpr Fp() = default;
  constexpr Fp(long long v) : v_(reduce(v)) {}  // NOLINT: Eigen needs implicit int conversion

  constexpr std::uint32_t value() const { return v_; }

  constexpr Fp operator+(Fp o) const { return from_raw((v_ + o.v_) % P); }
  constexpr Fp operator-(Fp o) const { return from_raw((v_ + P - o.v_) % P); }
  constexpr Fp operator*(Fp o) const { return from_raw((v_ * o.v_) % P); }
  constexpr Fp operator-() const { return from_raw((P - v_) % P); }
  Fp operator/(Fp o) const { return *this * o.inverse(); }
  constexpr Fp& operator+=(Fp o) { return *this = *this + o; }
  constexpr Fp& operator-=(Fp o) { return *this = *this - o; }
  constexpr Fp& operator*=(Fp o) { return *this = *this * o; }
  Fp& operator/=(Fp o) { return *this = *this / o; }

  friend constexpr bool operator==(Fp a, Fp b) { return a.v_ == b.v_; }
  friend constexpr bool operator!=(Fp a, Fp b) { return a.v_ != b.v_; }

  Fp inverse() const {
    if (v_ == 0) throw std::domain_error("division by zero in F_p");
    // Fermat: a^(P-2).
    Fp r(1), b = *this;
    for (std::uint32_t e = P - 2; e; e >>= 1) {
      if (e & 1u) r *= b;
      b *= b;
    }
    return r;
  }

  std::string to_string() const { return std::to_string(v_); }

 private:
  static constexpr std::uint32_t reduce(long long v) {
    long long r = v % static_cast<long long>(P);
    return static_cast<std::uint32_t>(r < 0 ? r + P : r);
  }
  static constexpr Fp from_raw(std::uint32_t v) {
    Fp f;
    f.v_ = v;
    return f;
  }

  std::uint32_t v_ = 0;
};

/// Exact rational with 64-bit numerator/denominator. Arithmetic is carried out
/// in 128 bits and throws std::overflow_error instead of wrapping.
class Rational {
 public:
  Rational() = default;
  Rational(long long n) : num_(n), den_(1) {}  // NOLINT
  Rational(long long n, long long d);

  long long num() const { return num_; }
  long long den() const { return den_; }

  Rational operator+(const Rational& o) const;
  Rational operator-(const Rational& o) const;
  Rational operator*(const Rational& o) const;
  Rational operator/(const Rational& o) const;
  Rational operator-() const;
  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }
  Rational& operator*=(const Rational& o) { return *this = *this * o; }
  Rational& operator/=(const Rational& o) { return *this = *this / o; }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }

  Rational inverse() const;
  std::string to_string() const;
  /// Parses "p", "-p" or "p/q".
  static Rational parse(const std::string& s);

 private:
  static Rational make(__int128 n, __int128 d);

  long long num_ = 0;
  long long den_ = 1;
};

template <std::uint32_t P>
std::ostream& operator<<(std::ostream& os, Fp<P> x) {
  return os << x.value();
}
std::ostream& operator<<(std::ostream& os, const Rational& x);

using F2 = Fp<2>;
using F3 = Fp<3>;
using Q = Rational;

/// Static description of a supported exact field.
template <class F>
struct FieldTraits;

template <std::uint32_t P>
struct FieldTraits<Fp<P>> {
  static constexpr bool is_finite = true;
  static constexpr std::uint32_t characteristic = P;
  static constexpr std::uint32_t cardinality = P;
  static std::string name() { return "F" + std::to_string(P); }
  static std::vector<Fp<P>> elements() {
    std::vector<Fp<P>> out;
    for (std::uint32_t v = 0; v < P; ++v) out.emplace_back(static_cast<long long>(v));
    return out;
  }
};

template <>
struct FieldTraits<Rational> {
  static constexpr bool is_finite = false;
  static constexpr std::uint32_t characteristic = 0;
  static constexpr std::uint32_t cardinality = 0;
  static std::string name() { return "Q"; }
};

template <class F>
concept ExactField = requires(F a, F b) {
  { a + b } -> std::convertible_to<F>;
  { a * b } -> std::convertible_to<F>;
  { a / b } -> std::convertible_to<F>;
  { a == b } -> std::convertible_to<bool>;
  FieldTraits<F>::name();
};

template <class F>
inline bool is_zero(const F& x) {
  return x == F(0);
}

}  // namespace gradlab

namespace Eigen {

template <std::uint32_t P>
struct NumTraits<gradlab::Fp<P>> : GenericNumTraits<gradlab::Fp<P>> {
  using Real = gradlab::Fp<P>;
  using NonInteger = gradlab::Fp<P>;
  using Literal = gradlab::Fp<P>;
  using Nested = gradlab::Fp<P>;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 1,
    AddCost = 2,
    MulCost = 3
  };
  static inline Real epsilon() { return Real(0); }
  static inline Real dummy_precision() { return Real(0); }
  static inline int digits10() { return 0; }
};

template <>
struct NumTraits<gradlab::Rational> : GenericNumTraits<gradlab::Rational> {
  using Real = gradlab::Rational;
  using NonInteger = gradlab::Rational;
  using Literal = gradlab::Rational;
  using Nested = gradlab::Rational;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 2,
    AddCost = 20,
    MulCost = 20
  };
  static inline Real epsilon() { return Real(0); }
  static inline Real dummy_precision() { return Real(0); }
  static inline int digits10() { return 0; }
};

}  // namespace Eigen
