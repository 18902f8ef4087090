#pragma once

#include "logrank/bigint.hpp"

#include <string>

namespace logrank {

/// Exact rational number. Always normalized: denominator > 0, gcd(num, den) = 1,
/// zero is 0/1.
class Rational {
  public:
    Rational() : num_(0), den_(1) {}
    Rational(long long v) : num_(v), den_(1) {}
    Rational(int v) : num_(v), den_(1) {}
    Rational(BigInt v) : num_(std::move(v)), den_(1) {}
    Rational(BigInt num, BigInt den);
    Rational(long long num, long long den) : Rational(BigInt(num), BigInt(den)) {}

    /// Exact value of the double (all finite doubles are dyadic rationals).
    static Rational from_double(double v);

    [[nodiscard]] const BigInt& num() const { return num_; }
    [[nodiscard]] const BigInt& den() const { return den_; }
    [[nodiscard]] int sign() const { return num_.sign(); }
    [[nodiscard]] bool is_zero() const { return num_.is_zero(); }

    [[nodiscard]] Rational abs() const;
    [[nodiscard]] double to_double() const;
    [[nodiscard]] double log2() const;  // log2 of a positive rational
    [[nodiscard]] std::string to_string() const;  // "p/q", or "p" when q == 1

    Rational operator-() const;
    Rational& operator+=(const Rational& o);
    Rational& operator-=(const Rational& o);
    Rational& operator*=(const Rational& o);
    Rational& operator/=(const Rational& o);

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
    friend bool operator<(const Rational& a, const Rational& b);
    friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
    friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
    friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

  private:
    BigInt num_, den_;
    void normalize();
};

[[nodiscard]] Rational pow(const Rational& base, unsigned exp);

}  // namespace logrank
