#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace fqdyn {

/// Result of the Euler-criterion test a^((q-1)/2).
/// Zero is kept separate from Square: evaluating a polynomial at an orbit
/// point can legitimately hit zero, and downstream logic treats that as a
/// degenerate (non-separable) instance rather than a square.
enum class Squareness { Square, NonSquare, Zero };

char squareness_letter(Squareness s);  // 's', 'n' or 'z'

/// A finite field F_q, q = p^k with p an odd prime.
///
/// Elements are handled as canonical integer codes in [0, q): for k = 1 the
/// code is the residue itself, for k > 1 it is the base-p encoding of the
/// coefficient vector of the representative modulo the modulus polynomial
/// (constant digit least significant). Equal elements always have equal
/// codes, so codes can be compared, hashed and sorted directly.
///
/// Arithmetic is exposed twice: code-level member functions (used by the
/// polynomial layer, no per-operation field check) and the FqElem value type
/// below (checked, operator-overloaded).
class FieldSpec {
public:
    /// Prime field F_p. Throws std::invalid_argument unless p is an odd prime.
    static FieldSpec prime(std::uint64_t p);

    /// Extension field F_{p^k} = F_p[t]/(modulus). The modulus is given
    /// constant-first, must be monic of degree k >= 2 and irreducible over
    /// F_p, with p^k < 2^63. Throws std::invalid_argument otherwise.
    static FieldSpec extension(std::uint64_t p, const std::vector<std::uint64_t>& modulus);

    std::uint64_t p() const { return p_; }
    unsigned k() const { return k_; }
    std::uint64_t q() const { return q_; }
    /// Modulus polynomial digits, constant-first, length k+1; empty when k = 1.
    const std::vector<std::uint64_t>& modulus() const { return modulus_; }

    // --- arithmetic on canonical codes (same field assumed) ---
    std::uint64_t add(std::uint64_t a, std::uint64_t b) const;
    std::uint64_t sub(std::uint64_t a, std::uint64_t b) const;
    std::uint64_t neg(std::uint64_t a) const;
    std::uint64_t mul(std::uint64_t a, std::uint64_t b) const;
    /// Multiplicative inverse; throws std::domain_error on zero.
    std::uint64_t inv(std::uint64_t a) const;
    /// a^e by square-and-multiply; pow(a, 0) = 1 including a = 0.
    std::uint64_t pow(std::uint64_t a, std::uint64_t e) const;
    Squareness squareness(std::uint64_t a) const;

    /// Embeds an integer into the prime subfield (reduces mod p, handles
    /// negative values).
    std::uint64_t from_int(std::int64_t v) const;
    /// a / 2; division by two is always defined in odd characteristic.
    std::uint64_t halve(std::uint64_t a) const { return mul(a, inv2_); }

    /// Base-p digit vector of length k for a code.
    std::vector<std::uint64_t> decode(std::uint64_t code) const;
    std::uint64_t encode(const std::vector<std::uint64_t>& digits) const;

    bool operator==(const FieldSpec& other) const;
    bool operator!=(const FieldSpec& other) const { return !(*this == other); }

    std::string to_string() const;  // "F_7" or "F_{3^2}"

private:
    FieldSpec() = default;

    std::uint64_t p_ = 0;
    unsigned k_ = 1;
    std::uint64_t q_ = 0;
    std::uint64_t inv2_ = 0;
    std::vector<std::uint64_t> modulus_;  // empty for k = 1
};

/// Value-semantic field element: a canonical code plus the field it lives in.
/// Mixed-field operations throw std::invalid_argument. Elements must not
/// outlive their FieldSpec.
class FqElem {
public:
    FqElem(const FieldSpec& spec, std::uint64_t code);

    const FieldSpec& field() const { return *spec_; }
    std::uint64_t code() const { return code_; }
    bool is_zero() const { return code_ == 0; }

    FqElem operator-() const { return FqElem(*spec_, spec_->neg(code_)); }

    friend FqElem operator+(const FqElem& a, const FqElem& b);
    friend FqElem operator-(const FqElem& a, const FqElem& b);
    friend FqElem operator*(const FqElem& a, const FqElem& b);
    friend bool operator==(const FqElem& a, const FqElem& b);
    friend bool operator!=(const FqElem& a, const FqElem& b) { return !(a == b); }

    std::string to_string() const { return std::to_string(code_); }

private:
    const FieldSpec* spec_;
    std::uint64_t code_;
};

FqElem inv(const FqElem& a);
FqElem pow(const FqElem& a, std::uint64_t e);
Squareness squareness(const FqElem& a);

}  // namespace fqdyn
