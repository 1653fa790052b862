#include "fqdyn/ffield.hpp"

#include <algorithm>
#include <stdexcept>

namespace fqdyn {

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

u64 mulmod_u64(u64 a, u64 b, u64 m) { return static_cast<u64>(u128(a) * b % m); }

u64 powmod_u64(u64 a, u64 e, u64 m) {
    u64 r = 1 % m;
    a %= m;
    while (e) {
        if (e & 1) r = mulmod_u64(r, a, m);
        a = mulmod_u64(a, a, m);
        e >>= 1;
    }
    return r;
}

// Deterministic Miller-Rabin, valid for all 64-bit inputs with this witness set.
bool is_prime_u64(u64 n) {
    if (n < 2) return false;
    for (u64 s : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % s == 0) return n == s;
    }
    u64 d = n - 1;
    int r = 0;
    while ((d & 1) == 0) { d >>= 1; ++r; }
    for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        u64 x = powmod_u64(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 1; i < r; ++i) {
            x = mulmod_u64(x, x, n);
            if (x == n - 1) { composite = false; break; }
        }
        if (composite) return false;
    }
    return true;
}

// --- tiny dense polynomial helpers over F_p, used only to vet extension
// --- moduli. Vectors are constant-first with no trailing zeros.

using PVec = std::vector<u64>;

void pv_trim(PVec& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

PVec pv_mul(const PVec& a, const PVec& b, u64 p) {
    if (a.empty() || b.empty()) return {};
    PVec r(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < b.size(); ++j)
            r[i + j] = (r[i + j] + u128(a[i]) * b[j]) % p;
    }
    pv_trim(r);
    return r;
}

// Remainder of a modulo monic m.
PVec pv_mod(PVec a, const PVec& m, u64 p) {
    while (a.size() >= m.size()) {
        u64 c = a.back();
        std::size_t shift = a.size() - m.size();
        if (c != 0) {
            for (std::size_t i = 0; i + 1 < m.size(); ++i) {
                u64 t = mulmod_u64(c, m[i], p);
                u64& ai = a[i + shift];
                ai = (ai >= t) ? ai - t : ai + p - t;
            }
        }
        a.pop_back();
        pv_trim(a);
        if (a.size() < m.size()) break;
    }
    return a;
}

PVec pv_gcd(PVec a, PVec b, u64 p) {
    while (!b.empty()) {
        // reduce a mod b after making b monic
        u64 lc = b.back();
        if (lc != 1) {
            u64 ilc = powmod_u64(lc, p - 2, p);
            for (auto& c : b) c = mulmod_u64(c, ilc, p);
        }
        PVec r = pv_mod(std::move(a), b, p);
        a = std::move(b);
        b = std::move(r);
    }
    return a;
}

PVec pv_powmod(PVec base, u64 e, const PVec& m, u64 p) {
    PVec r{1};
    base = pv_mod(std::move(base), m, p);
    while (e) {
        if (e & 1) r = pv_mod(pv_mul(r, base, p), m, p);
        base = pv_mod(pv_mul(base, base, p), m, p);
        e >>= 1;
    }
    return r;
}

// Rabin test: m (monic, degree k) is irreducible over F_p iff
// x^(p^k) = x mod m and gcd(x^(p^(k/r)) - x, m) = 1 for every prime r | k.
bool pv_irreducible(const PVec& m, u64 p) {
    std::size_t k = m.size() - 1;
    PVec x{0, 1};
    u64 pk = 1;
    for (std::size_t i = 0; i < k; ++i) pk *= p;
    PVec frob = pv_powmod(x, pk, m, p);
    if (frob != pv_mod(x, m, p)) return false;
    std::size_t kk = k;
    for (std::size_t r = 2; r * r <= kk; ++r) {
        if (kk % r) continue;
        while (kk % r == 0) kk /= r;
        u64 pe = 1;
        for (std::size_t i = 0; i < k / r; ++i) pe *= p;
        PVec h = pv_powmod(x, pe, m, p);
        // h - x
        PVec d = h;
        if (d.size() < 2) d.resize(2, 0);
        d[1] = (d[1] >= 1) ? d[1] - 1 : p - 1;
        pv_trim(d);
        PVec g = pv_gcd(m, d, p);
        if (g.size() != 1) return false;
    }
    if (kk > 1) {
        u64 pe = 1;
        for (std::size_t i = 0; i < k / kk; ++i) pe *= p;
        PVec h = pv_powmod(x, pe, m, p);
        PVec d = h;
        if (d.size() < 2) d.resize(2, 0);
        d[1] = (d[1] >= 1) ? d[1] - 1 : p - 1;
        pv_trim(d);
        PVec g = pv_gcd(m, d, p);
        if (g.size() != 1) return false;
    }
    return true;
}

}  // namespace

char squareness_letter(Squareness s) {
    switch (s) {
        case Squareness::Square: return 's';
        case Squareness::NonSquare: return 'n';
        case Squareness::Zero: return 'z';
    }
    return '?';
}

FieldSpec FieldSpec::prime(std::uint64_t p) {
    if (p < 3 || p % 2 == 0 || !is_prime_u64(p))
        throw std::invalid_argument("FieldSpec: characteristic must be an odd prime");
    FieldSpec s;
    s.p_ = p;
    s.k_ = 1;
    s.q_ = p;
    s.inv2_ = (p + 1) / 2;
    return s;
}

FieldSpec FieldSpec::extension(std::uint64_t p, const std::vector<std::uint64_t>& modulus) {
    if (p < 3 || p % 2 == 0 || !is_prime_u64(p))
        throw std::invalid_argument("FieldSpec: characteristic must be an odd prime");
    if (modulus.size() < 3)
        throw std::invalid_argument("FieldSpec: extension degree must be at least 2");
    if (modulus.back() != 1)
        throw std::invalid_argument("FieldSpec: modulus must be monic");
    for (u64 c : modulus)
        if (c >= p) throw std::invalid_argument("FieldSpec: modulus coefficients must lie in [0, p)");
    unsigned k = static_cast<unsigned>(modulus.size() - 1);
    u64 q = 1;
    for (unsigned i = 0; i < k; ++i) {
        if (q > (std::uint64_t(1) << 62) / p)
            throw std::invalid_argument("FieldSpec: p^k exceeds the supported range");
        q *= p;
    }
    if (!pv_irreducible(modulus, p))
        throw std::invalid_argument("FieldSpec: modulus is reducible over the prime field");
    FieldSpec s;
    s.p_ = p;
    s.k_ = k;
    s.q_ = q;
    s.modulus_ = modulus;
    // 1/2 lives in the prime subfield
    s.inv2_ = (p + 1) / 2;
    return s;
}

std::uint64_t FieldSpec::add(std::uint64_t a, std::uint64_t b) const {
    if (k_ == 1) {
        u64 s = a + b;
        return s >= p_ ? s - p_ : s;
    }
    u64 r = 0, pw = 1;
    for (unsigned i = 0; i < k_; ++i) {
        u64 da = a % p_, db = b % p_;
        a /= p_;
        b /= p_;
        u64 d = da + db;
        if (d >= p_) d -= p_;
        r += d * pw;
        pw *= p_;
    }
    return r;
}

std::uint64_t FieldSpec::sub(std::uint64_t a, std::uint64_t b) const { return add(a, neg(b)); }

std::uint64_t FieldSpec::neg(std::uint64_t a) const {
    if (k_ == 1) return a == 0 ? 0 : p_ - a;
    u64 r = 0, pw = 1;
    for (unsigned i = 0; i < k_; ++i) {
        u64 d = a % p_;
        a /= p_;
        r += (d == 0 ? 0 : p_ - d) * pw;
        pw *= p_;
    }
    return r;
}

std::uint64_t FieldSpec::mul(std::uint64_t a, std::uint64_t b) const {
    if (k_ == 1) return mulmod_u64(a, b, p_);
    PVec da = decode(a), db = decode(b);
    pv_trim(da);
    pv_trim(db);
    PVec prod = pv_mod(pv_mul(da, db, p_), modulus_, p_);
    prod.resize(k_, 0);
    return encode(prod);
}

std::uint64_t FieldSpec::inv(std::uint64_t a) const {
    if (a == 0) throw std::domain_error("FieldSpec::inv: inversion of zero");
    return pow(a, q_ - 2);
}

std::uint64_t FieldSpec::pow(std::uint64_t a, std::uint64_t e) const {
    u64 r = 1;
    while (e) {
        if (e & 1) r = mul(r, a);
        a = mul(a, a);
        e >>= 1;
    }
    return r;
}

Squareness FieldSpec::squareness(std::uint64_t a) const {
    if (a == 0) return Squareness::Zero;
    return pow(a, (q_ - 1) / 2) == 1 ? Squareness::Square : Squareness::NonSquare;
}

std::uint64_t FieldSpec::from_int(std::int64_t v) const {
    std::int64_t m = v % static_cast<std::int64_t>(p_);
    if (m < 0) m += static_cast<std::int64_t>(p_);
    return static_cast<std::uint64_t>(m);
}

std::vector<std::uint64_t> FieldSpec::decode(std::uint64_t code) const {
    std::vector<u64> d(k_);
    for (unsigned i = 0; i < k_; ++i) {
        d[i] = code % p_;
        code /= p_;
    }
    return d;
}

std::uint64_t FieldSpec::encode(const std::vector<std::uint64_t>& digits) const {
    u64 r = 0;
    for (unsigned i = k_; i-- > 0;) {
        u64 d = i < digits.size() ? digits[i] : 0;
        if (d >= p_) throw std::invalid_argument("FieldSpec::encode: digit out of range");
        r = r * p_ + d;
    }
    return r;
}

bool FieldSpec::operator==(const FieldSpec& other) const {
    return p_ == other.p_ && k_ == other.k_ && modulus_ == other.modulus_;
}

std::string FieldSpec::to_string() const {
    if (k_ == 1) return "F_" + std::to_string(p_);
    return "F_{" + std::to_string(p_) + "^" + std::to_string(k_) + "}";
}

FqElem::FqElem(const FieldSpec& spec, std::uint64_t code) : spec_(&spec), code_(code) {
    if (code >= spec.q()) throw std::invalid_argument("FqElem: code out of range");
}

namespace {
void require_same_field(const FqElem& a, const FqElem& b) {
    if (&a.field() != &b.field() && a.field() != b.field())
        throw std::invalid_argument("FqElem: mismatched field specs");
}
}  // namespace

FqElem operator+(const FqElem& a, const FqElem& b) {
    require_same_field(a, b);
    return FqElem(a.field(), a.field().add(a.code(), b.code()));
}

FqElem operator-(const FqElem& a, const FqElem& b) {
    require_same_field(a, b);
    return FqElem(a.field(), a.field().sub(a.code(), b.code()));
}

FqElem operator*(const FqElem& a, const FqElem& b) {
    require_same_field(a, b);
    return FqElem(a.field(), a.field().mul(a.code(), b.code()));
}

bool operator==(const FqElem& a, const FqElem& b) {
    require_same_field(a, b);
    return a.code() == b.code();
}

FqElem inv(const FqElem& a) { return FqElem(a.field(), a.field().inv(a.code())); }

FqElem pow(const FqElem& a, std::uint64_t e) { return FqElem(a.field(), a.field().pow(a.code(), e)); }

Squareness squareness(const FqElem& a) { return a.field().squareness(a.code()); }

}  // namespace fqdyn
