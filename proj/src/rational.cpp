#include "logrank/rational.hpp"

#include <cmath>
#include <stdexcept>

namespace logrank {

Rational::Rational(BigInt num, BigInt den) : num_(std::move(num)), den_(std::move(den)) {
    if (den_.is_zero()) throw std::domain_error("Rational: zero denominator");
    normalize();
}

void Rational::normalize() {
    if (den_.sign() < 0) {
        num_ = num_.negate();
        den_ = den_.negate();
    }
    if (num_.is_zero()) {
        den_ = BigInt(1);
        return;
    }
    BigInt g = gcd(num_, den_);
    if (!g.is_one()) {
        num_ = BigInt::div_exact(num_, g);
        den_ = BigInt::div_exact(den_, g);
    }
}

Rational Rational::from_double(double v) {
    if (!std::isfinite(v)) throw std::domain_error("Rational: non-finite double");
    if (v == 0.0) return Rational();
    int exp = 0;
    double m = std::frexp(v, &exp);       // v = m * 2^exp, 0.5 <= |m| < 1
    long long mant = static_cast<long long>(std::ldexp(m, 53));  // integer
    exp -= 53;
    Rational r(mant);
    if (exp > 0) {
        r *= Rational(pow(BigInt(2), static_cast<unsigned>(exp)));
    } else if (exp < 0) {
        r /= Rational(pow(BigInt(2), static_cast<unsigned>(-exp)));
    }
    return r;
}

Rational Rational::abs() const {
    Rational r = *this;
    r.num_ = r.num_.abs();
    return r;
}

double Rational::to_double() const {
    // exact for modest sizes; for huge ones go through log space
    if (num_.bit_length() < 900 && den_.bit_length() < 900)
        return num_.to_double() / den_.to_double();
    double l2 = num_.log2_abs() - den_.log2_abs();
    double mag = std::exp2(l2);
    return num_.sign() < 0 ? -mag : mag;
}

double Rational::log2() const {
    if (sign() <= 0) throw std::domain_error("Rational::log2: requires positive value");
    return num_.log2_abs() - den_.log2_abs();
}

std::string Rational::to_string() const {
    if (den_.is_one()) return num_.to_string();
    return num_.to_string() + "/" + den_.to_string();
}

Rational Rational::operator-() const {
    Rational r = *this;
    r.num_ = r.num_.negate();
    return r;
}

Rational& Rational::operator+=(const Rational& o) {
    num_ = num_ * o.den_ + o.num_ * den_;
    den_ *= o.den_;
    normalize();
    return *this;
}

Rational& Rational::operator-=(const Rational& o) {
    num_ = num_ * o.den_ - o.num_ * den_;
    den_ *= o.den_;
    normalize();
    return *this;
}

Rational& Rational::operator*=(const Rational& o) {
    num_ *= o.num_;
    den_ *= o.den_;
    normalize();
    return *this;
}

Rational& Rational::operator/=(const Rational& o) {
    if (o.is_zero()) throw std::domain_error("Rational: division by zero");
    num_ *= o.den_;
    den_ *= o.num_;
    normalize();
    return *this;
}

bool operator<(const Rational& a, const Rational& b) {
    return a.num_ * b.den_ < b.num_ * a.den_;
}

Rational pow(const Rational& base, unsigned exp) {
    return Rational(pow(base.num(), exp), pow(base.den(), exp));
}

}  // namespace logrank
