#include "fqdyn/factor.hpp"

#include <algorithm>
#include <cassert>
#include <random>
#include <stdexcept>

namespace fqdyn {

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

Poly sub_x(const Poly& h) {
    return h - Poly::x(h.field());
}

/// Fixed-modulus multiply/power kernel over prime fields. Works on plain
/// coefficient-code vectors of logical length deg(m) (trailing zeros allowed)
/// and reuses its product buffer, which is where the factoring loops spend
/// their time. Extension fields take the generic Poly route instead.
class ModCtx {
public:
    explicit ModCtx(const Poly& m)
        : F_(m.field()),
          p_(F_.p()),
          mod_(m.coeff_codes()),
          deg_(mod_.size() - 1),
          small_(p_ <= 0xFFFFFFFFull &&
                 u128(p_ - 1) * (p_ - 1) * (2 * deg_ + 1) < (u128(1) << 64)) {
        if (deg_ < 1 || mod_.back() != 1 || F_.k() != 1)
            throw std::invalid_argument("ModCtx: monic nonconstant prime-field modulus required");
    }

    std::size_t deg() const { return deg_; }

    std::vector<u64> load(const Poly& a) {
        std::vector<u64> v(a.coeff_codes());
        reduce(v);
        v.resize(deg_, 0);
        return v;
    }

    Poly unload(std::vector<u64> v) const { return Poly(F_, std::move(v)); }

    void mulmod(const std::vector<u64>& a, const std::vector<u64>& b, std::vector<u64>& out) {
        buf_.assign(2 * deg_, 0);
        if (small_) {
            for (std::size_t i = 0; i < deg_; ++i) {
                const u64 ai = i < a.size() ? a[i] : 0;
                if (!ai) continue;
                for (std::size_t j = 0; j < deg_; ++j) {
                    const u64 bj = j < b.size() ? b[j] : 0;
                    buf_[i + j] += ai * bj;
                }
            }
            for (auto& c : buf_) c %= p_;
        } else {
            for (std::size_t k = 0; k < 2 * deg_ - 1; ++k) {
                u128 acc = 0;
                const std::size_t lo = k >= deg_ ? k - deg_ + 1 : 0;
                const std::size_t hi = std::min(k, deg_ - 1);
                for (std::size_t i = lo; i <= hi; ++i) {
                    const u64 ai = i < a.size() ? a[i] : 0;
                    const u64 bj = k - i < b.size() ? b[k - i] : 0;
                    acc += u128(ai) * bj;
                }
                buf_[k] = static_cast<u64>(acc % p_);
            }
        }
        reduce(buf_);
        out.assign(buf_.begin(), buf_.begin() + deg_);
    }

    /// out = base^e mod m; base must already be loaded (length deg).
    void powmod(const std::vector<u64>& base, u64 e, std::vector<u64>& out) {
        std::vector<u64> acc(deg_, 0);
        acc[0] = 1 % p_;
        std::vector<u64> b = base;
        std::vector<u64> tmp;
        while (e) {
            if (e & 1) {
                mulmod(acc, b, tmp);
                acc.swap(tmp);
            }
            e >>= 1;
            if (e) {
                mulmod(b, b, tmp);
                b.swap(tmp);
            }
        }
        out = std::move(acc);
    }

private:
    void reduce(std::vector<u64>& v) const {
        for (std::size_t top = v.size(); top-- > deg_;) {
            const u64 c = v[top];
            if (c) {
                v[top] = 0;
                const std::size_t base = top - deg_;
                for (std::size_t i = 0; i < deg_; ++i) {
                    if (!mod_[i]) continue;
                    const u64 t = small_ ? (c * mod_[i]) % p_ : static_cast<u64>(u128(c) * mod_[i] % p_);
                    u64& x = v[base + i];
                    x = x >= t ? x - t : x + p_ - t;
                }
            }
        }
    }

    const FieldSpec& F_;
    const u64 p_;
    const std::vector<u64> mod_;
    const std::size_t deg_;
    const bool small_;
    std::vector<u64> buf_;
};

// x^(q^j) mod m, advanced one Frobenius step at a time by the callers.
Poly frobenius_step(const Poly& h, const Poly& m) {
    if (m.field().k() == 1 && m.degree() >= 1 && m.is_monic()) {
        ModCtx ctx(m);
        std::vector<u64> out;
        ctx.powmod(ctx.load(h), m.field().q(), out);
        return ctx.unload(std::move(out));
    }
    return pow_mod(h, m.field().q(), m);
}

std::vector<int> prime_divisors(int n) {
    std::vector<int> ps;
    for (int r = 2; r * r <= n; ++r) {
        if (n % r == 0) {
            ps.push_back(r);
            while (n % r == 0) n /= r;
        }
    }
    if (n > 1) ps.push_back(n);
    return ps;
}

Poly random_poly_below(const FieldSpec& F, int degree_bound, std::mt19937_64& rng) {
    std::vector<u64> codes(static_cast<std::size_t>(degree_bound));
    for (auto& c : codes) c = rng() % F.q();
    return Poly(F, std::move(codes));
}

// r^((q^d - 1)/2) mod a via the norm chain (r^(1+q+...+q^(d-1)))^((q-1)/2),
// which keeps every exponent within 64 bits.
Poly norm_power_half(const Poly& r, int d, const Poly& a) {
    const FieldSpec& F = a.field();
    const u64 q = F.q();
    if (F.k() == 1) {
        ModCtx ctx(a);
        std::vector<u64> t = ctx.load(r);
        const std::vector<u64> rr = t;
        std::vector<u64> tmp;
        for (int i = 1; i < d; ++i) {
            ctx.powmod(t, q, tmp);
            ctx.mulmod(tmp, rr, t);
        }
        std::vector<u64> s;
        ctx.powmod(t, (q - 1) / 2, s);
        return ctx.unload(std::move(s));
    }
    Poly t = divmod(r, a).second;
    for (int i = 1; i < d; ++i) t = divmod(pow_mod(t, q, a) * r, a).second;
    return pow_mod(t, (q - 1) / 2, a);
}

void edf_recurse(const Poly& a, int d, std::mt19937_64& rng, std::vector<Poly>& out) {
    const FieldSpec& F = a.field();
    if (a.degree() == d) {
        out.push_back(monicized(a));
        return;
    }
    if (a.degree() <= 0) return;

    constexpr int kRetryCap = 256;
    for (int attempt = 0; attempt < kRetryCap; ++attempt) {
        Poly r = random_poly_below(F, a.degree(), rng);
        if (r.degree() < 1) continue;
        Poly s = norm_power_half(r, d, a);
        Poly g = gcd(s - Poly::one(F), a);
        if (g.degree() > 0 && g.degree() < a.degree()) {
            edf_recurse(g, d, rng, out);
            edf_recurse(divmod(a, g).first, d, rng, out);
            return;
        }
    }
    throw std::runtime_error("equal_degree_split: retry cap exceeded");
}

}  // namespace

Poly Factorization::expand() const {
    Poly r = Poly::constant(input.field(), unit);
    for (const auto& [f, mult] : parts)
        for (int i = 0; i < mult; ++i) r = r * f;
    return r;
}

bool is_irreducible(const Poly& a) {
    if (a.degree() < 1) throw std::domain_error("is_irreducible: constant or zero input");
    const FieldSpec& F = a.field();
    const int n = a.degree();
    if (n == 1) return true;

    // checkpoints n/r for the proper prime divisors of n, visited while the
    // Frobenius chain h = x^(q^j) mod a is advanced up to j = n
    std::vector<int> checks;
    for (int r : prime_divisors(n)) checks.push_back(n / r);
    std::sort(checks.begin(), checks.end());

    Poly h = Poly::x(F);
    std::size_t next = 0;
    for (int j = 1; j <= n; ++j) {
        h = frobenius_step(h, a);
        while (next < checks.size() && checks[next] == j) {
            if (gcd(sub_x(h), a).degree() != 0) return false;
            ++next;
        }
    }
    return sub_x(h).is_zero();
}

std::vector<std::pair<Poly, int>> squarefree_decomposition(const Poly& a) {
    if (a.degree() < 1)
        throw std::domain_error("squarefree_decomposition: input must be nonconstant");
    const FieldSpec& F = a.field();
    const u64 p = F.p();

    Poly f = monicized(a);
    std::vector<std::pair<Poly, int>> result;

    Poly df = derivative(f);
    if (df.is_zero()) {
        // f(x) = g(x^p); p-th roots of the coefficients give g
        std::vector<u64> g_codes(static_cast<std::size_t>(f.degree() / p) + 1, 0);
        for (int i = 0; i <= f.degree(); i += static_cast<int>(p))
            g_codes[i / p] = F.pow(f.coeff_code(i), F.q() / p);
        for (auto& [part, mult] : squarefree_decomposition(Poly(F, std::move(g_codes))))
            result.emplace_back(std::move(part), mult * static_cast<int>(p));
        return result;
    }

    Poly c = gcd(f, df);
    Poly w = divmod(f, c).first;
    int i = 1;
    while (w.degree() > 0) {
        Poly y = gcd(w, c);
        Poly z = divmod(w, y).first;
        if (z.degree() > 0) result.emplace_back(monicized(z), i);
        c = divmod(c, y).first;
        w = std::move(y);
        ++i;
    }
    if (c.degree() > 0) {
        // leftover p-th power part
        for (auto& [part, mult] : squarefree_decomposition(c))
            result.emplace_back(std::move(part), mult);
    }
    return result;
}

std::vector<std::pair<Poly, int>> distinct_degree(const Poly& a) {
    if (a.degree() < 1 || !a.is_monic())
        throw std::domain_error("distinct_degree: input must be monic nonconstant");
    const FieldSpec& F = a.field();
    std::vector<std::pair<Poly, int>> result;
    Poly rest = a;
    Poly h = Poly::x(F);
    for (int d = 1; 2 * d <= rest.degree(); ++d) {
        h = frobenius_step(h, rest);
        Poly g = gcd(sub_x(h), rest);
        if (g.degree() > 0) {
            result.emplace_back(g, d);
            rest = divmod(rest, g).first;
            if (rest.degree() == 0) return result;
            h = divmod(h, rest).second;
        }
    }
    if (rest.degree() > 0) result.emplace_back(rest, rest.degree());
    return result;
}

std::vector<Poly> equal_degree_split(const Poly& a, int d, std::uint64_t seed) {
    if (a.degree() < 1 || d < 1 || a.degree() % d != 0)
        throw std::domain_error("equal_degree_split: degree mismatch");
    std::mt19937_64 rng(seed);
    std::vector<Poly> out;
    edf_recurse(monicized(a), d, rng, out);
    std::sort(out.begin(), out.end(), poly_less);
    return out;
}

Factorization factor(const Poly& a, std::uint64_t seed) {
    if (a.is_zero()) throw std::domain_error("factor: zero polynomial");
    Factorization fac{a, 1, {}};
    if (a.degree() == 0) {
        fac.unit = a.coeff_code(0);
        return fac;
    }
    Poly f = monicized(a, &fac.unit);
    for (const auto& [sf_part, mult] : squarefree_decomposition(f)) {
        for (const auto& [dd_part, d] : distinct_degree(sf_part)) {
            for (Poly& irr : equal_degree_split(dd_part, d, seed)) {
#ifndef NDEBUG
                if (irr.degree() <= 24) assert(is_irreducible(irr));
#endif
                fac.parts.emplace_back(std::move(irr), mult);
            }
        }
    }
    std::sort(fac.parts.begin(), fac.parts.end(),
              [](const auto& x, const auto& y) { return poly_less(x.first, y.first); });
    return fac;
}

}  // namespace fqdyn
