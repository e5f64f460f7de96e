#pragma once

#include <gmpxx.h>

#include <Eigen/Core>
#include <cstdint>
#include <ostream>
#include <string>

#include "stabcoh/errors.hpp"

namespace stabcoh {

// Element of a prime field F_p with the modulus carried per value.
//
// A default-constructed or integer-converted Fp is "unbound": it remembers the
// integer but no modulus yet (generic code writes K(0), K(1), K(-3)).  An
// unbound value adopts the other operand's modulus on first contact; two
// values bound to different primes raise FieldMismatchError.
class Fp {
 public:
  Fp() = default;
  Fp(int v) : value_(v) {}            // NOLINT: implicit by design, Eigen needs it
  Fp(long long v) : value_(v) {}      // NOLINT
  Fp(long long v, long long p) : value_(v), mod_(p) { reduce(); }

  static Fp in_field(long long v, long long p) { return Fp(v, p); }

  bool bound() const { return mod_ != 0; }
  long long modulus() const { return mod_; }
  long long rep() const { return value_; }  // canonical in [0,p) once bound

  bool is_zero() const { return bound() ? value_ == 0 : value_ == 0; }

  Fp bound_like(const Fp& other) const {
    Fp r = *this;
    r.adopt(other.mod_);
    return r;
  }

  friend Fp operator+(Fp a, const Fp& b) {
    long long p = join(a, b);
    if (p == 0) return Fp(a.value_ + b.value_);
    return Fp(a.value_ + b.value_, p);
  }
  friend Fp operator-(Fp a, const Fp& b) {
    long long p = join(a, b);
    if (p == 0) return Fp(a.value_ - b.value_);
    return Fp(a.value_ - b.value_, p);
  }
  friend Fp operator*(const Fp& a, const Fp& b) {
    long long p = join(a, b);
    if (p == 0) return Fp(a.value_ * b.value_);
    return Fp(static_cast<long long>(static_cast<__int128>(a.value_) * b.value_ % p), p);
  }
  friend Fp operator/(const Fp& a, const Fp& b) { return a * b.inverse(); }
  Fp operator-() const { return bound() ? Fp(mod_ - value_, mod_) : Fp(-value_); }

  Fp& operator+=(const Fp& b) { return *this = *this + b; }
  Fp& operator-=(const Fp& b) { return *this = *this - b; }
  Fp& operator*=(const Fp& b) { return *this = *this * b; }
  Fp& operator/=(const Fp& b) { return *this = *this / b; }

  Fp inverse() const {
    if (!bound()) {
      if (value_ == 1 || value_ == -1) return *this;
      throw FieldMismatchError("cannot invert unbound scalar " + std::to_string(value_));
    }
    if (value_ == 0) throw Error("division by zero in F_" + std::to_string(mod_));
    // extended Euclid
    long long t = 0, nt = 1, r = mod_, nr = value_;
    while (nr != 0) {
      long long q = r / nr;
      long long tmp = t - q * nt;
      t = nt;
      nt = tmp;
      tmp = r - q * nr;
      r = nr;
      nr = tmp;
    }
    if (t < 0) t += mod_;
    return Fp(t, mod_);
  }

  friend bool operator==(const Fp& a, const Fp& b) {
    long long p = join(a, b);
    if (p == 0) return a.value_ == b.value_;
    long long av = ((a.value_ % p) + p) % p;
    long long bv = ((b.value_ % p) + p) % p;
    return av == bv;
  }
  friend bool operator!=(const Fp& a, const Fp& b) { return !(a == b); }

  friend std::ostream& operator<<(std::ostream& os, const Fp& a) { return os << a.value_; }

  std::string str() const { return std::to_string(value_); }

 private:
  void reduce() {
    if (mod_ != 0) {
      value_ %= mod_;
      if (value_ < 0) value_ += mod_;
    }
  }
  void adopt(long long p) {
    if (p == 0) return;
    if (mod_ == 0) {
      mod_ = p;
      reduce();
    } else if (mod_ != p) {
      throw FieldMismatchError("scalars from F_" + std::to_string(mod_) + " and F_" +
                               std::to_string(p) + " mixed in one expression");
    }
  }
  static long long join(const Fp& a, const Fp& b) {
    if (a.mod_ != 0 && b.mod_ != 0 && a.mod_ != b.mod_)
      throw FieldMismatchError("scalars from F_" + std::to_string(a.mod_) + " and F_" +
                               std::to_string(b.mod_) + " mixed in one expression");
    return a.mod_ != 0 ? a.mod_ : b.mod_;
  }

  long long value_ = 0;
  long long mod_ = 0;
};

// Arbitrary-precision rational, a thin veneer over GMP's mpq_class so that
// Fp and Rational expose the same generic surface.
class Rational {
 public:
  Rational() : v_(0) {}
  Rational(int v) : v_(v) {}        // NOLINT
  Rational(long long v) : v_(static_cast<long>(v)) {}  // NOLINT
  Rational(long long num, long long den) : v_(static_cast<long>(num), static_cast<long>(den)) {
    v_.canonicalize();
  }
  explicit Rational(const mpq_class& v) : v_(v) {}

  bool is_zero() const { return v_ == 0; }
  static long long modulus() { return 0; }
  Rational bound_like(const Rational&) const { return *this; }

  friend Rational operator+(const Rational& a, const Rational& b) { return Rational(mpq_class(a.v_ + b.v_)); }
  friend Rational operator-(const Rational& a, const Rational& b) { return Rational(mpq_class(a.v_ - b.v_)); }
  friend Rational operator*(const Rational& a, const Rational& b) { return Rational(mpq_class(a.v_ * b.v_)); }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.is_zero()) throw Error("division by zero in Q");
    return Rational(mpq_class(a.v_ / b.v_));
  }
  Rational operator-() const { return Rational(mpq_class(-v_)); }

  Rational& operator+=(const Rational& b) { v_ += b.v_; return *this; }
  Rational& operator-=(const Rational& b) { v_ -= b.v_; return *this; }
  Rational& operator*=(const Rational& b) { v_ *= b.v_; return *this; }
  Rational& operator/=(const Rational& b) { return *this = *this / b; }

  Rational inverse() const { return Rational(1) / *this; }

  friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
  friend bool operator!=(const Rational& a, const Rational& b) { return a.v_ != b.v_; }

  friend std::ostream& operator<<(std::ostream& os, const Rational& a) { return os << a.v_; }

  std::string str() const { return v_.get_str(); }

 private:
  mpq_class v_;
};

// Runtime descriptor of the coefficient field, shared by parser and printers.
struct FieldSpec {
  long long characteristic = 0;  // 0 means Q
  std::string name() const {
    return characteristic == 0 ? "Q" : "F" + std::to_string(characteristic);
  }
  bool operator==(const FieldSpec& o) const { return characteristic == o.characteristic; }
};

template <class K>
K make_scalar(long long v, const FieldSpec& f);

template <>
inline Fp make_scalar<Fp>(long long v, const FieldSpec& f) {
  return Fp(v, f.characteristic);
}
template <>
inline Rational make_scalar<Rational>(long long v, const FieldSpec&) {
  return Rational(v);
}

inline bool is_zero(const Fp& a) { return a.is_zero(); }
inline bool is_zero(const Rational& a) { return a.is_zero(); }

}  // namespace stabcoh

namespace Eigen {

template <>
struct NumTraits<stabcoh::Fp> {
  typedef stabcoh::Fp Real;
  typedef stabcoh::Fp NonInteger;
  typedef stabcoh::Fp Nested;
  typedef stabcoh::Fp Literal;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 1,
    AddCost = 3,
    MulCost = 6,
  };
  static inline Real epsilon() { return Real(0); }
  static inline Real dummy_precision() { return Real(0); }
  static inline int digits10() { return 0; }
};

template <>
struct NumTraits<stabcoh::Rational> {
  typedef stabcoh::Rational Real;
  typedef stabcoh::Rational NonInteger;
  typedef stabcoh::Rational Nested;
  typedef stabcoh::Rational Literal;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 2,
    AddCost = 10,
    MulCost = 10,
  };
  static inline Real epsilon() { return Real(0); }
  static inline Real dummy_precision() { return Real(0); }
  static inline int digits10() { return 0; }
};

}  // namespace Eigen
