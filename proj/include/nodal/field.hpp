#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>

#include <Eigen/Core>
#include <boost/multiprecision/cpp_int.hpp>
#include <boost/multiprecision/eigen.hpp>

// Boost 1.74 probes `const_iterator` to detect byte containers; Eigen 3.4
// expressions declare it as void, which breaks the rational constructors.
namespace boost::multiprecision::detail {
template <class C>
  requires requires { typename C::StorageKind; }
struct is_byte_container_imp<C, true> : boost::false_type {};
}  // namespace boost::multiprecision::detail

namespace nodal {

// Prime field F_p. The modulus is process-wide and set once before any
// arithmetic; values are stored reduced in [0, p).
class Fp {
 public:
  constexpr Fp() = default;
  Fp(long long v) {  // NOLINT: implicit from integers is the point
    long long r = v % static_cast<long long>(p_);
    v_ = static_cast<uint32_t>(r < 0 ? r + p_ : r);
  }

  static void set_characteristic(uint32_t p);
  static uint32_t characteristic() { return p_; }

  uint32_t value() const { return v_; }
  bool is_zero() const { return v_ == 0; }

  Fp inv() const;
  Fp pow(uint64_t e) const;

  Fp& operator+=(Fp o) {
    v_ += o.v_;
    if (v_ >= p_) v_ -= p_;
    return *this;
  }
  Fp& operator-=(Fp o) {
    v_ = v_ >= o.v_ ? v_ - o.v_ : v_ + p_ - o.v_;
    return *this;
  }
  Fp& operator*=(Fp o) {
    v_ = static_cast<uint32_t>(static_cast<uint64_t>(v_) * o.v_ % p_);
    return *this;
  }
  Fp& operator/=(Fp o) { return *this *= o.inv(); }

  friend Fp operator+(Fp a, Fp b) { return a += b; }
  friend Fp operator-(Fp a, Fp b) { return a -= b; }
  friend Fp operator*(Fp a, Fp b) { return a *= b; }
  friend Fp operator/(Fp a, Fp b) { return a /= b; }
  Fp operator-() const { return Fp() - *this; }
  friend bool operator==(Fp a, Fp b) { return a.v_ == b.v_; }
  friend bool operator!=(Fp a, Fp b) { return a.v_ != b.v_; }

  // Signed representative in (-p/2, p/2], used for printing.
  long long centered() const {
    return v_ > p_ / 2 ? static_cast<long long>(v_) - p_ : v_;
  }

 private:
  uint32_t v_ = 0;
  static inline uint32_t p_ = 101;
};

std::ostream& operator<<(std::ostream& os, Fp x);

using Rational = boost::multiprecision::cpp_rational;

bool is_prime(uint64_t n);

// Uniform interface over the supported scalar types.
template <class S>
struct FieldTraits;

template <>
struct FieldTraits<Fp> {
  static uint64_t characteristic() { return Fp::characteristic(); }
  static bool is_zero(const Fp& x) { return x.is_zero(); }
  static Fp inv(const Fp& x) { return x.inv(); }
  static std::string str(const Fp& x) { return std::to_string(x.centered()); }
};

template <>
struct FieldTraits<Rational> {
  static uint64_t characteristic() { return 0; }
  static bool is_zero(const Rational& x) { return x == 0; }
  static Rational inv(const Rational& x) {
    if (x == 0) throw std::domain_error("division by zero");
    return Rational(1) / x;
  }
  static std::string str(const Rational& x) { return x.str(); }
};

// Scoped change of the prime, restored on exit.
class CharacteristicGuard {
 public:
  explicit CharacteristicGuard(uint32_t p) : old_(Fp::characteristic()) {
    Fp::set_characteristic(p);
  }
  ~CharacteristicGuard() { Fp::set_characteristic(old_); }
  CharacteristicGuard(const CharacteristicGuard&) = delete;
  CharacteristicGuard& operator=(const CharacteristicGuard&) = delete;

 private:
  uint32_t old_;
};

}  // namespace nodal

namespace Eigen {
template <>
struct NumTraits<nodal::Fp> : GenericNumTraits<nodal::Fp> {
  using Real = nodal::Fp;
  using NonInteger = nodal::Fp;
  using Literal = nodal::Fp;
  using Nested = nodal::Fp;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 0,
    ReadCost = 1,
    AddCost = 2,
    MulCost = 4
  };
  static nodal::Fp epsilon() { return nodal::Fp(0); }
  static nodal::Fp dummy_precision() { return nodal::Fp(0); }
  static nodal::Fp highest() { return nodal::Fp(-1); }
  static nodal::Fp lowest() { return nodal::Fp(0); }
  static int digits10() { return 0; }
};
}  // namespace Eigen
