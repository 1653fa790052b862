#include "fqdyn/poly.hpp"

#include <algorithm>
#include <sstream>

namespace fqdyn {

namespace {
using u64 = std::uint64_t;
using u128 = unsigned __int128;

void require_same_field(const Poly& a, const Poly& b) {
    if (&a.field() != &b.field() && a.field() != b.field())
        throw std::invalid_argument("Poly: mismatched field specs");
}
}  // namespace

Poly::Poly(const FieldSpec& field, std::vector<std::uint64_t> codes)
    : field_(&field), coeffs_(std::move(codes)) {
    for (u64 c : coeffs_)
        if (c >= field.q()) throw std::invalid_argument("Poly: coefficient code out of range");
    normalize();
}

Poly Poly::constant(const FieldSpec& field, std::uint64_t code) {
    Poly r(field);
    if (code != 0) r.coeffs_.push_back(code);
    if (code >= field.q()) throw std::invalid_argument("Poly: coefficient code out of range");
    return r;
}

Poly Poly::parse(const FieldSpec& field, const std::string& text) {
    std::vector<u64> codes;
    std::string tok;
    std::istringstream in(text);
    while (std::getline(in, tok, ',')) {
        std::size_t pos = 0;
        unsigned long long v = 0;
        try {
            v = std::stoull(tok, &pos);
        } catch (const std::exception&) {
            throw std::invalid_argument("Poly::parse: bad coefficient '" + tok + "'");
        }
        while (pos < tok.size() && std::isspace(static_cast<unsigned char>(tok[pos]))) ++pos;
        if (pos != tok.size())
            throw std::invalid_argument("Poly::parse: bad coefficient '" + tok + "'");
        if (v >= field.q())
            throw std::invalid_argument("Poly::parse: coefficient " + tok + " out of range for " +
                                        field.to_string());
        codes.push_back(v);
    }
    if (codes.empty()) throw std::invalid_argument("Poly::parse: empty polynomial text");
    return Poly(field, std::move(codes));
}

std::uint64_t Poly::leading_code() const {
    if (coeffs_.empty()) throw std::domain_error("Poly: zero polynomial has no leading coefficient");
    return coeffs_.back();
}

void Poly::normalize() {
    while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

std::string Poly::to_string() const {
    if (coeffs_.empty()) return "0";
    std::string s;
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(coeffs_[i]);
    }
    return s;
}

Poly operator+(const Poly& a, const Poly& b) {
    require_same_field(a, b);
    const FieldSpec& F = a.field();
    std::vector<u64> r(std::max(a.coeffs_.size(), b.coeffs_.size()), 0);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = F.add(a.coeff_code(i), b.coeff_code(i));
    return Poly(F, std::move(r));
}

Poly operator-(const Poly& a, const Poly& b) {
    require_same_field(a, b);
    const FieldSpec& F = a.field();
    std::vector<u64> r(std::max(a.coeffs_.size(), b.coeffs_.size()), 0);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = F.sub(a.coeff_code(i), b.coeff_code(i));
    return Poly(F, std::move(r));
}

Poly operator*(const Poly& a, const Poly& b) {
    require_same_field(a, b);
    const FieldSpec& F = a.field();
    if (a.is_zero() || b.is_zero()) return Poly(F);
    std::vector<u64> r(a.coeffs_.size() + b.coeffs_.size() - 1, 0);
    const u64 p = F.p();
    if (F.k() == 1 && p <= 0xFFFFFFFFull) {
        // prime field fast path: accumulate in 128 bits, reduce once per cell
        for (std::size_t i = 0; i < r.size(); ++i) {
            u128 acc = 0;
            std::size_t lo = i >= b.coeffs_.size() ? i - b.coeffs_.size() + 1 : 0;
            std::size_t hi = std::min(i, a.coeffs_.size() - 1);
            for (std::size_t j = lo; j <= hi; ++j)
                acc += u128(a.coeffs_[j]) * b.coeffs_[i - j];
            r[i] = static_cast<u64>(acc % p);
        }
    } else {
        for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
            if (a.coeffs_[i] == 0) continue;
            for (std::size_t j = 0; j < b.coeffs_.size(); ++j)
                r[i + j] = F.add(r[i + j], F.mul(a.coeffs_[i], b.coeffs_[j]));
        }
    }
    return Poly(F, std::move(r));
}

bool operator==(const Poly& a, const Poly& b) {
    require_same_field(a, b);
    return a.coeffs_ == b.coeffs_;
}

bool poly_less(const Poly& a, const Poly& b) {
    if (a.degree() != b.degree()) return a.degree() < b.degree();
    const auto& ca = a.coeff_codes();
    const auto& cb = b.coeff_codes();
    for (std::size_t i = ca.size(); i-- > 0;) {
        if (ca[i] != cb[i]) return ca[i] < cb[i];
    }
    return false;
}

Poly scale(const Poly& a, std::uint64_t code) {
    const FieldSpec& F = a.field();
    std::vector<u64> r(a.coeff_codes());
    for (u64& c : r) c = F.mul(c, code);
    return Poly(F, std::move(r));
}

std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b) {
    require_same_field(a, b);
    const FieldSpec& F = a.field();
    if (b.is_zero()) throw std::domain_error("divmod: division by zero polynomial");
    if (a.degree() < b.degree()) return {Poly(F), a};
    const u64 ilc = F.inv(b.leading_code());
    std::vector<u64> rem(a.coeff_codes());
    std::vector<u64> quot(a.degree() - b.degree() + 1, 0);
    const auto& bc = b.coeff_codes();
    for (std::size_t top = rem.size(); top-- >= bc.size();) {
        u64 c = F.mul(rem[top], ilc);
        quot[top - (bc.size() - 1)] = c;
        if (c != 0) {
            for (std::size_t i = 0; i < bc.size(); ++i) {
                std::size_t idx = top - (bc.size() - 1) + i;
                rem[idx] = F.sub(rem[idx], F.mul(c, bc[i]));
            }
        }
        if (top + 1 == bc.size()) break;
    }
    rem.resize(bc.size() - 1);
    return {Poly(F, std::move(quot)), Poly(F, std::move(rem))};
}

Poly gcd(const Poly& a, const Poly& b) {
    require_same_field(a, b);
    if (a.is_zero() && b.is_zero()) throw std::domain_error("gcd: gcd(0, 0) is undefined");
    Poly u = a, v = b;
    while (!v.is_zero()) {
        Poly r = divmod(u, v).second;
        u = std::move(v);
        v = std::move(r);
    }
    return monicized(u);
}

std::uint64_t eval_code(const Poly& a, std::uint64_t x) {
    const FieldSpec& F = a.field();
    u64 r = 0;
    const auto& c = a.coeff_codes();
    for (std::size_t i = c.size(); i-- > 0;) r = F.add(F.mul(r, x), c[i]);
    return r;
}

FqElem eval(const Poly& a, const FqElem& x) {
    if (&a.field() != &x.field() && a.field() != x.field())
        throw std::invalid_argument("eval: mismatched field specs");
    return FqElem(a.field(), eval_code(a, x.code()));
}

Poly compose(const Poly& g, const Poly& f, std::size_t degree_cap) {
    require_same_field(g, f);
    const FieldSpec& F = g.field();
    if (g.degree() >= 1 && f.degree() >= 1) {
        std::size_t out = std::size_t(g.degree()) * std::size_t(f.degree());
        if (out > degree_cap)
            throw DegreeCapError("compose: result degree " + std::to_string(out) +
                                 " exceeds cap " + std::to_string(degree_cap));
    }
    if (g.is_zero()) return Poly(F);
    const auto& c = g.coeff_codes();
    Poly acc = Poly::constant(F, c.back());
    for (std::size_t i = c.size() - 1; i-- > 0;) {
        acc = acc * f;
        acc = acc + Poly::constant(F, c[i]);
    }
    return acc;
}

Poly derivative(const Poly& a) {
    const FieldSpec& F = a.field();
    if (a.degree() < 1) return Poly(F);
    std::vector<u64> r(a.degree(), 0);
    for (int i = 1; i <= a.degree(); ++i)
        r[i - 1] = F.mul(a.coeff_code(i), F.from_int(i % static_cast<int>(F.p())));
    return Poly(F, std::move(r));
}

bool is_squarefree(const Poly& a) {
    if (a.is_zero()) throw std::domain_error("is_squarefree: zero polynomial");
    Poly d = derivative(a);
    if (d.is_zero()) return false;  // p-th power
    return gcd(a, d).degree() == 0;
}

Poly pow_mod(const Poly& base, std::uint64_t e, const Poly& m) {
    require_same_field(base, m);
    if (m.degree() < 1) throw std::domain_error("pow_mod: modulus must be nonconstant");
    const FieldSpec& F = base.field();
    Poly r = Poly::one(F);
    Poly b = divmod(base, m).second;
    while (e) {
        if (e & 1) r = divmod(r * b, m).second;
        e >>= 1;
        if (e) b = divmod(b * b, m).second;
    }
    return r;
}

Poly monicized(const Poly& a, std::uint64_t* unit) {
    const FieldSpec& F = a.field();
    if (a.is_zero()) {
        if (unit) *unit = 1;
        return a;
    }
    u64 lc = a.leading_code();
    if (unit) *unit = lc;
    if (lc == 1) return a;
    return scale(a, F.inv(lc));
}

MonicQuadratic::MonicQuadratic(const FieldSpec& field, std::uint64_t a_code, std::uint64_t b_code)
    : field_(&field), a_(a_code), b_(b_code) {
    if (a_ >= field.q() || b_ >= field.q())
        throw std::invalid_argument("MonicQuadratic: coefficient code out of range");
    gamma_ = field.halve(field.neg(a_));
    // c = b - gamma^2 - gamma, so that f(x) = (x - gamma)^2 + gamma + c
    c_ = field.sub(field.sub(b_, field.mul(gamma_, gamma_)), gamma_);
}

Poly MonicQuadratic::to_poly() const { return Poly(*field_, {b_, a_, 1}); }

std::uint64_t MonicQuadratic::eval_code(std::uint64_t x) const {
    const FieldSpec& F = *field_;
    return F.add(F.mul(F.add(x, a_), x), b_);
}

Poly MonicQuadratic::iterate(unsigned n, std::size_t degree_cap) const {
    const FieldSpec& F = *field_;
    Poly r = Poly::x(F);
    const Poly gamma_poly = Poly::constant(F, gamma_);
    const Poly offset = Poly::constant(F, F.add(gamma_, c_));
    for (unsigned i = 0; i < n; ++i) {
        if (static_cast<std::size_t>(r.degree()) * 2 > degree_cap)
            throw DegreeCapError("iterate: degree " + std::to_string(2 * r.degree()) +
                                 " exceeds cap " + std::to_string(degree_cap));
        Poly t = r - gamma_poly;
        r = t * t + offset;
    }
    return r;
}

std::string MonicQuadratic::to_string() const {
    return std::to_string(b_) + "," + std::to_string(a_) + ",1";
}

}  // namespace fqdyn
