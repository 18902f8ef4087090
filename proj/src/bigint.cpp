#include "logrank/bigint.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace logrank {

namespace {
constexpr std::uint64_t kBase = 1ull << 32;
}

BigInt::BigInt(long long v) {
    if (v == 0) return;
    sign_ = v > 0 ? 1 : -1;
    std::uint64_t m = v > 0 ? static_cast<std::uint64_t>(v)
                            : ~static_cast<std::uint64_t>(v) + 1;  // safe for LLONG_MIN
    set_from_u64(m);
}

void BigInt::set_from_u64(std::uint64_t v) {
    mag_.clear();
    while (v != 0) {
        mag_.push_back(static_cast<std::uint32_t>(v & 0xffffffffu));
        v >>= 32;
    }
}

void BigInt::trim() {
    while (!mag_.empty() && mag_.back() == 0) mag_.pop_back();
    if (mag_.empty()) sign_ = 0;
}

BigInt BigInt::from_string(std::string_view s) {
    if (s.empty()) throw std::invalid_argument("BigInt: empty string");
    int sign = 1;
    std::size_t i = 0;
    if (s[0] == '+' || s[0] == '-') {
        if (s[0] == '-') sign = -1;
        i = 1;
        if (i == s.size()) throw std::invalid_argument("BigInt: sign only");
    }
    BigInt out;
    const BigInt ten(10);
    for (; i < s.size(); ++i) {
        char c = s[i];
        if (c < '0' || c > '9') throw std::invalid_argument("BigInt: bad digit");
        out = out * ten + BigInt(c - '0');
    }
    if (sign < 0 && !out.is_zero()) out.sign_ = -1;
    return out;
}

bool BigInt::is_one() const { return sign_ == 1 && mag_.size() == 1 && mag_[0] == 1; }

BigInt BigInt::abs() const {
    BigInt r = *this;
    if (r.sign_ < 0) r.sign_ = 1;
    return r;
}

BigInt BigInt::negate() const {
    BigInt r = *this;
    r.sign_ = -r.sign_;
    return r;
}

std::size_t BigInt::bit_length() const {
    if (mag_.empty()) return 0;
    std::uint32_t top = mag_.back();
    std::size_t bits = (mag_.size() - 1) * 32;
    while (top != 0) {
        ++bits;
        top >>= 1;
    }
    return bits;
}

bool BigInt::fits_int64() const {
    std::size_t bl = bit_length();
    if (bl < 64) return true;
    // -2^63 fits exactly
    return bl == 64 && sign_ < 0 && mag_[0] == 0 && mag_[1] == 0x80000000u;
}

long long BigInt::to_int64() const {
    std::uint64_t m = 0;
    if (!mag_.empty()) m = mag_[0];
    if (mag_.size() >= 2) m |= static_cast<std::uint64_t>(mag_[1]) << 32;
    return sign_ < 0 ? -static_cast<long long>(m) : static_cast<long long>(m);
}

double BigInt::to_double() const {
    if (sign_ == 0) return 0.0;
    double r = 0.0;
    // accumulate from most significant limb; doubles absorb the rounding
    for (std::size_t i = mag_.size(); i-- > 0;) r = r * 4294967296.0 + mag_[i];
    return sign_ < 0 ? -r : r;
}

double BigInt::log2_abs() const {
    if (sign_ == 0) return -std::numeric_limits<double>::infinity();
    std::size_t bl = bit_length();
    if (bl <= 1000) return std::log2(std::fabs(to_double()));
    // top two limbs carry all the precision a double can hold
    std::uint64_t hi = 0;
    std::size_t got = 0;
    for (std::size_t i = mag_.size(); i-- > 0 && got < 2;) {
        hi = (hi << 32) | mag_[i];
        ++got;
    }
    std::size_t hi_bits = bl - (mag_.size() - got) * 32;
    return double(bl) - double(hi_bits) + std::log2(double(hi));
}

std::string BigInt::to_string() const {
    if (sign_ == 0) return "0";
    std::vector<std::uint32_t> m = mag_;
    std::string digits;
    while (!m.empty()) {
        // divide magnitude by 1e9, collect remainder
        std::uint64_t rem = 0;
        for (std::size_t i = m.size(); i-- > 0;) {
            std::uint64_t cur = (rem << 32) | m[i];
            m[i] = static_cast<std::uint32_t>(cur / 1000000000ull);
            rem = cur % 1000000000ull;
        }
        while (!m.empty() && m.back() == 0) m.pop_back();
        for (int k = 0; k < 9; ++k) {
            digits.push_back(char('0' + rem % 10));
            rem /= 10;
        }
    }
    while (digits.size() > 1 && digits.back() == '0') digits.pop_back();
    if (sign_ < 0) digits.push_back('-');
    std::reverse(digits.begin(), digits.end());
    return digits;
}

int BigInt::cmp_mag(const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b) {
    if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
    for (std::size_t i = a.size(); i-- > 0;)
        if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
    return 0;
}

std::vector<std::uint32_t> BigInt::add_mag(const std::vector<std::uint32_t>& a,
                                           const std::vector<std::uint32_t>& b) {
    const auto& lo = a.size() < b.size() ? a : b;
    const auto& hi = a.size() < b.size() ? b : a;
    std::vector<std::uint32_t> r(hi.size() + 1, 0);
    std::uint64_t carry = 0;
    for (std::size_t i = 0; i < hi.size(); ++i) {
        std::uint64_t s = carry + hi[i] + (i < lo.size() ? lo[i] : 0);
        r[i] = static_cast<std::uint32_t>(s);
        carry = s >> 32;
    }
    r[hi.size()] = static_cast<std::uint32_t>(carry);
    while (!r.empty() && r.back() == 0) r.pop_back();
    return r;
}

std::vector<std::uint32_t> BigInt::sub_mag(const std::vector<std::uint32_t>& a,
                                           const std::vector<std::uint32_t>& b) {
    std::vector<std::uint32_t> r(a.size(), 0);
    std::int64_t borrow = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        std::int64_t s = std::int64_t(a[i]) - borrow - (i < b.size() ? std::int64_t(b[i]) : 0);
        if (s < 0) {
            s += std::int64_t(kBase);
            borrow = 1;
        } else {
            borrow = 0;
        }
        r[i] = static_cast<std::uint32_t>(s);
    }
    while (!r.empty() && r.back() == 0) r.pop_back();
    return r;
}

std::vector<std::uint32_t> BigInt::mul_mag(const std::vector<std::uint32_t>& a,
                                           const std::vector<std::uint32_t>& b) {
    if (a.empty() || b.empty()) return {};
    std::vector<std::uint32_t> r(a.size() + b.size(), 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        std::uint64_t carry = 0;
        std::uint64_t ai = a[i];
        for (std::size_t j = 0; j < b.size(); ++j) {
            std::uint64_t cur = r[i + j] + ai * b[j] + carry;
            r[i + j] = static_cast<std::uint32_t>(cur);
            carry = cur >> 32;
        }
        std::size_t k = i + b.size();
        while (carry != 0) {
            std::uint64_t cur = r[k] + carry;
            r[k] = static_cast<std::uint32_t>(cur);
            carry = cur >> 32;
            ++k;
        }
    }
    while (!r.empty() && r.back() == 0) r.pop_back();
    return r;
}

// Knuth algorithm D on 32-bit limbs.
void BigInt::divmod_mag(const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b,
                        std::vector<std::uint32_t>& q, std::vector<std::uint32_t>& r) {
    q.clear();
    r.clear();
    if (b.empty()) throw std::domain_error("BigInt: division by zero");
    if (cmp_mag(a, b) < 0) {
        r = a;
        return;
    }
    if (b.size() == 1) {
        std::uint64_t d = b[0], rem = 0;
        q.assign(a.size(), 0);
        for (std::size_t i = a.size(); i-- > 0;) {
            std::uint64_t cur = (rem << 32) | a[i];
            q[i] = static_cast<std::uint32_t>(cur / d);
            rem = cur % d;
        }
        while (!q.empty() && q.back() == 0) q.pop_back();
        if (rem != 0) r.push_back(static_cast<std::uint32_t>(rem));
        return;
    }

    // normalize so that the divisor's top limb has its high bit set
    int shift = 0;
    {
        std::uint32_t top = b.back();
        while ((top & 0x80000000u) == 0) {
            top <<= 1;
            ++shift;
        }
    }
    auto shl = [&](const std::vector<std::uint32_t>& v) {
        std::vector<std::uint32_t> out(v.size() + 1, 0);
        for (std::size_t i = 0; i < v.size(); ++i) {
            out[i] |= shift ? (v[i] << shift) : v[i];
            if (shift) out[i + 1] = v[i] >> (32 - shift);
        }
        while (!out.empty() && out.back() == 0) out.pop_back();
        return out;
    };
    std::vector<std::uint32_t> u = shl(a), v = shl(b);
    std::size_t n = v.size(), m = u.size() - n;
    u.resize(u.size() + 1, 0);
    q.assign(m + 1, 0);

    const std::uint64_t vhi = v[n - 1], vlo = v[n - 2];
    for (std::size_t j = m + 1; j-- > 0;) {
        std::uint64_t num = (static_cast<std::uint64_t>(u[j + n]) << 32) | u[j + n - 1];
        std::uint64_t qhat = num / vhi, rhat = num % vhi;
        while (qhat >= kBase || qhat * vlo > ((rhat << 32) | u[j + n - 2])) {
            --qhat;
            rhat += vhi;
            if (rhat >= kBase) break;
        }
        // multiply-subtract qhat*v from u[j..j+n]
        std::int64_t borrow = 0;
        std::uint64_t carry = 0;
        for (std::size_t i = 0; i < n; ++i) {
            std::uint64_t p = qhat * v[i] + carry;
            carry = p >> 32;
            std::int64_t t = std::int64_t(u[i + j]) - borrow - std::int64_t(p & 0xffffffffu);
            if (t < 0) {
                t += std::int64_t(kBase);
                borrow = 1;
            } else {
                borrow = 0;
            }
            u[i + j] = static_cast<std::uint32_t>(t);
        }
        std::int64_t t = std::int64_t(u[j + n]) - borrow - std::int64_t(carry);
        if (t < 0) {
            // qhat was one too large; add back
            t += std::int64_t(kBase);
            --qhat;
            std::uint64_t c2 = 0;
            for (std::size_t i = 0; i < n; ++i) {
                std::uint64_t s = std::uint64_t(u[i + j]) + v[i] + c2;
                u[i + j] = static_cast<std::uint32_t>(s);
                c2 = s >> 32;
            }
            t += std::int64_t(c2);
            t &= 0xffffffffll;
        }
        u[j + n] = static_cast<std::uint32_t>(t);
        q[j] = static_cast<std::uint32_t>(qhat);
    }
    while (!q.empty() && q.back() == 0) q.pop_back();
    // denormalize remainder
    u.resize(n);
    if (shift) {
        for (std::size_t i = 0; i < n; ++i) {
            u[i] >>= shift;
            if (i + 1 < n) u[i] |= u[i + 1] << (32 - shift);
        }
    }
    while (!u.empty() && u.back() == 0) u.pop_back();
    r = std::move(u);
}

BigInt& BigInt::operator+=(const BigInt& o) {
    if (o.sign_ == 0) return *this;
    if (sign_ == 0) return *this = o;
    if (sign_ == o.sign_) {
        mag_ = add_mag(mag_, o.mag_);
        return *this;
    }
    int c = cmp_mag(mag_, o.mag_);
    if (c == 0) {
        sign_ = 0;
        mag_.clear();
    } else if (c > 0) {
        mag_ = sub_mag(mag_, o.mag_);
    } else {
        mag_ = sub_mag(o.mag_, mag_);
        sign_ = o.sign_;
    }
    return *this;
}

BigInt& BigInt::operator-=(const BigInt& o) { return *this += o.negate(); }

BigInt& BigInt::operator*=(const BigInt& o) {
    if (sign_ == 0 || o.sign_ == 0) {
        sign_ = 0;
        mag_.clear();
        return *this;
    }
    mag_ = mul_mag(mag_, o.mag_);
    sign_ = sign_ * o.sign_;
    return *this;
}

void BigInt::divmod(const BigInt& a, const BigInt& b, BigInt& q, BigInt& r) {
    std::vector<std::uint32_t> qm, rm;
    divmod_mag(a.mag_, b.mag_, qm, rm);
    q.mag_ = std::move(qm);
    r.mag_ = std::move(rm);
    q.sign_ = q.mag_.empty() ? 0 : a.sign_ * b.sign_;
    r.sign_ = r.mag_.empty() ? 0 : a.sign_;
}

BigInt& BigInt::operator/=(const BigInt& o) {
    BigInt q, r;
    divmod(*this, o, q, r);
    return *this = std::move(q);
}

BigInt& BigInt::operator%=(const BigInt& o) {
    BigInt q, r;
    divmod(*this, o, q, r);
    return *this = std::move(r);
}

BigInt BigInt::div_exact(const BigInt& a, const BigInt& b) {
    BigInt q, r;
    divmod(a, b, q, r);
    return q;
}

bool operator==(const BigInt& a, const BigInt& b) {
    return a.sign_ == b.sign_ && a.mag_ == b.mag_;
}

bool operator<(const BigInt& a, const BigInt& b) {
    if (a.sign_ != b.sign_) return a.sign_ < b.sign_;
    int c = BigInt::cmp_mag(a.mag_, b.mag_);
    return a.sign_ >= 0 ? c < 0 : c > 0;
}

BigInt gcd(BigInt a, BigInt b) {
    a = a.abs();
    b = b.abs();
    while (!b.is_zero()) {
        BigInt r = a % b;
        a = std::move(b);
        b = std::move(r);
    }
    return a;
}

BigInt pow(const BigInt& base, unsigned exp) {
    BigInt r(1), b = base;
    while (exp != 0) {
        if (exp & 1u) r *= b;
        exp >>= 1;
        if (exp) b *= b;
    }
    return r;
}

}  // namespace logrank
