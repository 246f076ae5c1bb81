#pragma once

#include <gmp.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>

namespace antrope {

// Thin RAII wrapper over GMP's mpq_t. Values are kept canonical, so
// equality and to_string behave like textbook rationals.
class Rational {
 public:
  Rational() { mpq_init(q_); }

  Rational(std::int64_t numerator, std::int64_t denominator) {
    if (denominator == 0) {
      throw std::domain_error("Rational: zero denominator");
    }
    mpq_init(q_);
    mpq_set_si(q_, numerator, 1);
    mpq_t den;
    mpq_init(den);
    mpq_set_si(den, denominator, 1);
    mpq_div(q_, q_, den);
    mpq_clear(den);
  }

  explicit Rational(std::int64_t value) : Rational(value, 1) {}

  // Exact conversion: every finite double is a dyadic rational.
  static Rational from_double(double value) {
    if (!(value == value) || value == 1.0 / 0.0 || value == -1.0 / 0.0) {
      throw std::domain_error("Rational::from_double: value must be finite");
    }
    Rational r;
    mpq_set_d(r.q_, value);
    return r;
  }

  Rational(const Rational& other) {
    mpq_init(q_);
    mpq_set(q_, other.q_);
  }

  Rational(Rational&& other) noexcept {
    mpq_init(q_);
    mpq_swap(q_, other.q_);
  }

  Rational& operator=(const Rational& other) {
    if (this != &other) mpq_set(q_, other.q_);
    return *this;
  }

  Rational& operator=(Rational&& other) noexcept {
    if (this != &other) mpq_swap(q_, other.q_);
    return *this;
  }

  ~Rational() { mpq_clear(q_); }

  Rational& operator+=(const Rational& rhs) {
    mpq_add(q_, q_, rhs.q_);
    return *this;
  }
  Rational& operator-=(const Rational& rhs) {
    mpq_sub(q_, q_, rhs.q_);
    return *this;
  }
  Rational& operator*=(const Rational& rhs) {
    mpq_mul(q_, q_, rhs.q_);
    return *this;
  }
  Rational& operator/=(const Rational& rhs) {
    if (mpq_sgn(rhs.q_) == 0) {
      throw std::domain_error("Rational: division by zero");
    }
    mpq_div(q_, q_, rhs.q_);
    return *this;
  }

  friend Rational operator+(Rational lhs, const Rational& rhs) {
    lhs += rhs;
    return lhs;
  }
  friend Rational operator-(Rational lhs, const Rational& rhs) {
    lhs -= rhs;
    return lhs;
  }
  friend Rational operator*(Rational lhs, const Rational& rhs) {
    lhs *= rhs;
    return lhs;
  }
  friend Rational operator/(Rational lhs, const Rational& rhs) {
    lhs /= rhs;
    return lhs;
  }

  friend bool operator==(const Rational& lhs, const Rational& rhs) {
    return mpq_equal(lhs.q_, rhs.q_) != 0;
  }
  friend bool operator!=(const Rational& lhs, const Rational& rhs) {
    return !(lhs == rhs);
  }
  friend bool operator<(const Rational& lhs, const Rational& rhs) {
    return mpq_cmp(lhs.q_, rhs.q_) < 0;
  }
  friend bool operator<=(const Rational& lhs, const Rational& rhs) {
    return mpq_cmp(lhs.q_, rhs.q_) <= 0;
  }
  friend bool operator>(const Rational& lhs, const Rational& rhs) {
    return mpq_cmp(lhs.q_, rhs.q_) > 0;
  }
  friend bool operator>=(const Rational& lhs, const Rational& rhs) {
    return mpq_cmp(lhs.q_, rhs.q_) >= 0;
  }

  int sign() const { return mpq_sgn(q_); }

  double to_double() const { return mpq_get_d(q_); }

  // Combined bit length of numerator and denominator; a growth gauge for
  // algorithms that must bail out before exact arithmetic gets expensive.
  std::size_t bit_size() const {
    return mpz_sizeinbase(mpq_numref(q_), 2) + mpz_sizeinbase(mpq_denref(q_), 2);
  }

  // Canonical "numerator/denominator"; integers render without the "/1".
  std::string to_string() const {
    char* raw = mpq_get_str(nullptr, 10, q_);
    std::string s(raw);
    void (*freefunc)(void*, size_t);
    mp_get_memory_functions(nullptr, nullptr, &freefunc);
    freefunc(raw, s.size() + 1);
    return s;
  }

 private:
  mpq_t q_;
};

}  // namespace antrope
