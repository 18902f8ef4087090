#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace logrank {

/// Arbitrary-precision signed integer, sign-magnitude with 32-bit limbs.
///
/// Covers exactly what the exact linear algebra here needs: ring arithmetic,
/// truncated division, gcd, comparisons, and conversions. Magnitudes are
/// little-endian with no leading zero limbs; zero has sign 0 and empty
/// magnitude.
class BigInt {
  public:
    BigInt() = default;
    BigInt(long long v);
    BigInt(int v) : BigInt(static_cast<long long>(v)) {}

    static BigInt from_string(std::string_view s);

    [[nodiscard]] int sign() const { return sign_; }
    [[nodiscard]] bool is_zero() const { return sign_ == 0; }
    [[nodiscard]] bool is_one() const;
    [[nodiscard]] BigInt abs() const;
    [[nodiscard]] BigInt negate() const;

    /// Number of bits in the magnitude (0 for zero).
    [[nodiscard]] std::size_t bit_length() const;

    /// True if the value fits in int64_t.
    [[nodiscard]] bool fits_int64() const;
    [[nodiscard]] long long to_int64() const;

    [[nodiscard]] double to_double() const;
    /// log2(|x|), -inf for zero; accurate to double precision.
    [[nodiscard]] double log2_abs() const;

    [[nodiscard]] std::string to_string() const;

    BigInt operator-() const { return negate(); }
    BigInt& operator+=(const BigInt& o);
    BigInt& operator-=(const BigInt& o);
    BigInt& operator*=(const BigInt& o);
    /// Truncated division (C semantics): (-7)/2 == -3, (-7)%2 == -1.
    BigInt& operator/=(const BigInt& o);
    BigInt& operator%=(const BigInt& o);

    friend BigInt operator+(BigInt a, const BigInt& b) { return a += b; }
    friend BigInt operator-(BigInt a, const BigInt& b) { return a -= b; }
    friend BigInt operator*(BigInt a, const BigInt& b) { return a *= b; }
    friend BigInt operator/(BigInt a, const BigInt& b) { return a /= b; }
    friend BigInt operator%(BigInt a, const BigInt& b) { return a %= b; }

    friend bool operator==(const BigInt& a, const BigInt& b);
    friend bool operator<(const BigInt& a, const BigInt& b);
    friend bool operator!=(const BigInt& a, const BigInt& b) { return !(a == b); }
    friend bool operator>(const BigInt& a, const BigInt& b) { return b < a; }
    friend bool operator<=(const BigInt& a, const BigInt& b) { return !(b < a); }
    friend bool operator>=(const BigInt& a, const BigInt& b) { return !(a < b); }

    /// Quotient and remainder in one pass (truncated).
    static void divmod(const BigInt& a, const BigInt& b, BigInt& q, BigInt& r);

    /// Exact division; undefined behaviour unless b divides a.
    [[nodiscard]] static BigInt div_exact(const BigInt& a, const BigInt& b);

  private:
    int sign_ = 0;
    std::vector<std::uint32_t> mag_;

    void trim();
    void set_from_u64(std::uint64_t v);
    static int cmp_mag(const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b);
    static std::vector<std::uint32_t> add_mag(const std::vector<std::uint32_t>& a,
                                              const std::vector<std::uint32_t>& b);
    // requires |a| >= |b|
    static std::vector<std::uint32_t> sub_mag(const std::vector<std::uint32_t>& a,
                                              const std::vector<std::uint32_t>& b);
    static std::vector<std::uint32_t> mul_mag(const std::vector<std::uint32_t>& a,
                                              const std::vector<std::uint32_t>& b);
    static void divmod_mag(const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b,
                           std::vector<std::uint32_t>& q, std::vector<std::uint32_t>& r);
};

[[nodiscard]] BigInt gcd(BigInt a, BigInt b);

/// Small-exponent power.
[[nodiscard]] BigInt pow(const BigInt& base, unsigned exp);

}  // namespace logrank
