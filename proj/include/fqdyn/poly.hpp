#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fqdyn/ffield.hpp"

namespace fqdyn {

/// Default guard against runaway iterate/compose degrees.
inline constexpr std::size_t kDefaultDegreeCap = 512;

/// Thrown when a composition or iterate would exceed the configured cap.
class DegreeCapError : public std::length_error {
public:
    explicit DegreeCapError(const std::string& what) : std::length_error(what) {}
};

/// Degree value reported for the zero polynomial.
inline constexpr int kNegInfinityDegree = -1;

/// Dense univariate polynomial over a FieldSpec. Coefficients are stored as
/// canonical codes, constant term first, with no trailing zeros (the zero
/// polynomial is the empty vector). Polynomials must not outlive their field.
class Poly {
public:
    explicit Poly(const FieldSpec& field) : field_(&field) {}
    Poly(const FieldSpec& field, std::vector<std::uint64_t> codes);

    static Poly zero(const FieldSpec& field) { return Poly(field); }
    static Poly one(const FieldSpec& field) { return constant(field, 1); }
    static Poly x(const FieldSpec& field) { return Poly(field, {0, 1}); }
    static Poly constant(const FieldSpec& field, std::uint64_t code);
    /// Parses the CLI text format: comma-separated codes, constant term
    /// first, e.g. "6,4,1" is x^2+4x+6. Throws std::invalid_argument on
    /// malformed input.
    static Poly parse(const FieldSpec& field, const std::string& text);

    const FieldSpec& field() const { return *field_; }
    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    bool is_zero() const { return coeffs_.empty(); }
    bool is_monic() const { return !coeffs_.empty() && coeffs_.back() == 1; }
    bool is_constant() const { return coeffs_.size() <= 1; }

    std::uint64_t coeff_code(std::size_t i) const { return i < coeffs_.size() ? coeffs_[i] : 0; }
    FqElem coeff(std::size_t i) const { return FqElem(*field_, coeff_code(i)); }
    std::uint64_t leading_code() const;
    const std::vector<std::uint64_t>& coeff_codes() const { return coeffs_; }

    std::string to_string() const;  // comma-separated, constant first

    friend Poly operator+(const Poly& a, const Poly& b);
    friend Poly operator-(const Poly& a, const Poly& b);
    friend Poly operator*(const Poly& a, const Poly& b);
    friend bool operator==(const Poly& a, const Poly& b);
    friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

private:
    void normalize();

    const FieldSpec* field_;
    std::vector<std::uint64_t> coeffs_;
};

/// Canonical ordering: degree first, then the coefficient tuple compared as
/// a base-q integer (highest-degree coefficient most significant). This is
/// the order used for factor lists and enumeration streams.
bool poly_less(const Poly& a, const Poly& b);

Poly scale(const Poly& a, std::uint64_t code);

/// Quotient and remainder with deg(rem) < deg(b). Throws std::domain_error
/// when b is zero.
std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b);

/// Monic gcd. Throws std::domain_error for gcd(0, 0).
Poly gcd(const Poly& a, const Poly& b);

std::uint64_t eval_code(const Poly& a, std::uint64_t x);
FqElem eval(const Poly& a, const FqElem& x);

/// g(f) by Horner on polynomials. Throws DegreeCapError if the result degree
/// would exceed degree_cap.
Poly compose(const Poly& g, const Poly& f, std::size_t degree_cap = kDefaultDegreeCap);

Poly derivative(const Poly& a);

/// True iff a has no repeated factors: gcd(a, a') constant and a' != 0.
/// A vanishing derivative means a is a p-th power, hence not squarefree.
/// Throws std::domain_error on the zero polynomial.
bool is_squarefree(const Poly& a);

/// base^e mod m (m nonconstant).
Poly pow_mod(const Poly& base, std::uint64_t e, const Poly& m);

/// Divides by the leading coefficient; unit receives that coefficient.
Poly monicized(const Poly& a, std::uint64_t* unit = nullptr);

/// Monic quadratic f(x) = x^2 + a x + b together with its critical data:
/// the critical point gamma = -a/2 and the offset c with
/// f(x) = (x - gamma)^2 + gamma + c.
class MonicQuadratic {
public:
    MonicQuadratic(const FieldSpec& field, std::uint64_t a_code, std::uint64_t b_code);

    const FieldSpec& field() const { return *field_; }
    std::uint64_t a_code() const { return a_; }
    std::uint64_t b_code() const { return b_; }
    std::uint64_t gamma_code() const { return gamma_; }
    std::uint64_t c_code() const { return c_; }
    FqElem gamma() const { return FqElem(*field_, gamma_); }
    FqElem c() const { return FqElem(*field_, c_); }

    Poly to_poly() const;
    std::uint64_t eval_code(std::uint64_t x) const;

    /// f^n, degree 2^n (f^0 = x). Throws DegreeCapError past the cap.
    Poly iterate(unsigned n, std::size_t degree_cap = kDefaultDegreeCap) const;

    std::string to_string() const;  // text form "b,a,1"

    bool operator==(const MonicQuadratic& o) const {
        return *field_ == *o.field_ && a_ == o.a_ && b_ == o.b_;
    }

private:
    const FieldSpec* field_;
    std::uint64_t a_, b_, gamma_, c_;
};

}  // namespace fqdyn
