#include "fqdyn/dynamics.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_map>

namespace fqdyn {

namespace {
using u64 = std::uint64_t;

char letters_product(char a, char b) { return (a == 'n') != (b == 'n') ? 'n' : 's'; }
}  // namespace

OrbitProfile::OrbitProfile(MonicQuadratic f, int m, int n, std::vector<std::uint64_t> orbit)
    : f_(std::move(f)), m_(m), n_(n), orbit_(std::move(orbit)) {
    int expect = m_ == 0 ? n_ : m_ + n_ - 1;
    if (m_ < 0 || n_ < 1 || static_cast<int>(orbit_.size()) != expect)
        throw std::invalid_argument("OrbitProfile: inconsistent orbit data");
}

int OrbitProfile::position(int t) const {
    if (t < 1) throw std::invalid_argument("OrbitProfile::position: t must be >= 1");
    int o = size();
    if (t <= o) return t;
    if (m_ == 0) return (t - 1) % n_ + 1;
    return m_ + (t - m_) % n_;
}

std::string OrbitProfile::orbit_type_string() const {
    return "(" + std::to_string(m_) + "," + std::to_string(n_) + ")";
}

OrbitProfile orbit_profile(const MonicQuadratic& f) {
    std::unordered_map<u64, int> seen;
    std::vector<u64> seq;  // seq[i] = f^(i+1)(gamma)
    u64 x = f.gamma_code();
    seen.emplace(x, 0);
    for (int i = 1;; ++i) {
        x = f.eval_code(x);
        auto [it, fresh] = seen.emplace(x, i);
        if (!fresh) {
            int m = it->second;
            int n = i - m;
            int o = m == 0 ? n : m + n - 1;
            // seq holds b_1 .. b_(i-1); for m = 0 the colliding value gamma
            // itself is b_n and still belongs to the orbit
            seq.push_back(x);
            seq.resize(static_cast<std::size_t>(o));
            return OrbitProfile(f, m, n, std::move(seq));
        }
        seq.push_back(x);
    }
}

FType ftype(const Poly& g, const OrbitProfile& profile) {
    if (!g.is_monic())
        throw std::invalid_argument("ftype: g must be monic (types of non-monic polynomials are undefined)");
    if (g.degree() < 1) throw std::invalid_argument("ftype: g must be nonconstant");
    if (g.field() != profile.field()) throw std::invalid_argument("ftype: mismatched field specs");
    FType t;
    t.letters.reserve(profile.orbit().size());
    for (u64 b : profile.orbit()) {
        char c = squareness_letter(profile.field().squareness(eval_code(g, b)));
        if (c == 'z') t.degenerate = true;
        t.letters.push_back(c);
    }
    return t;
}

FType shift_type(const FType& t, const OrbitProfile& profile) {
    if (t.degenerate) throw std::invalid_argument("shift_type: degenerate type");
    if (static_cast<int>(t.letters.size()) != profile.size())
        throw std::invalid_argument("shift_type: type length does not match orbit size");
    FType r;
    char recycled = t.letters[profile.recycle_index() - 1];
    r.letters = t.letters.substr(1);
    r.letters.push_back(recycled);
    return r;
}

bool allowable(const FType& parent, const FType& child, const OrbitProfile& profile) {
    if (parent.degenerate || child.degenerate)
        throw std::invalid_argument("allowable: degenerate type");
    int o = profile.size();
    if (static_cast<int>(parent.letters.size()) != o ||
        static_cast<int>(child.letters.size()) != o)
        throw std::invalid_argument("allowable: type length does not match orbit size");
    if (parent.first() != 's')
        throw std::invalid_argument("allowable: parent type must start with 's' (no split occurs otherwise)");
    int m = profile.m();
    if (m == 0) return true;
    char last = child.letters[o - 1];
    if (m == 1) return last == parent.letters[0];
    return letters_product(child.letters[m - 2], last) == parent.letters[m - 1];
}

std::vector<DescendantEntry> immediate_descendants(const Poly& H, const OrbitProfile& profile,
                                                   std::uint64_t seed, std::size_t degree_cap) {
    Factorization fac = factor(compose(H, profile.f().to_poly(), degree_cap), seed);
    std::vector<DescendantEntry> out;
    for (const auto& [part, mult] : fac.parts) {
        FType t = ftype(part, profile);
        for (int i = 0; i < mult; ++i) out.push_back({part, t});
    }
    return out;
}

std::string level_signature(std::vector<std::string> types) {
    std::sort(types.begin(), types.end());
    std::string s;
    for (std::size_t i = 0; i < types.size(); ++i) {
        if (i) s += '/';
        s += types[i];
    }
    return s;
}

std::string join_levels(const std::vector<std::string>& levels) {
    std::string s;
    for (std::size_t i = 0; i < levels.size(); ++i) {
        if (i) s += "→";
        s += levels[i];
    }
    return s;
}

std::vector<std::string> TransitionRecord::level_type_strings(std::size_t level) const {
    std::vector<std::string> types;
    types.reserve(levels[level].size());
    for (const auto& e : levels[level]) types.push_back(e.type.letters);
    std::sort(types.begin(), types.end());
    return types;
}

std::string TransitionRecord::signature() const {
    std::vector<std::string> parts;
    parts.reserve(levels.size());
    for (std::size_t i = 0; i < levels.size(); ++i)
        parts.push_back(level_signature(level_type_strings(i)));
    return join_levels(parts);
}

TransitionRecord transition_chain(const Poly& g, const OrbitProfile& profile, int depth,
                                  std::uint64_t seed, std::size_t degree_cap) {
    if (depth < 0) throw std::invalid_argument("transition_chain: depth must be >= 0");
    TransitionRecord rec{profile.f(), g, {}, {}, false, -1};
    rec.levels.push_back({ChainEntry{g, ftype(g, profile), -1}});
    for (int lvl = 0; lvl < depth; ++lvl) {
        const auto& cur = rec.levels[lvl];
        bool bad = std::any_of(cur.begin(), cur.end(),
                               [](const ChainEntry& e) { return e.type.degenerate; });
        if (bad) {
            rec.degenerate = true;
            rec.truncated_at = lvl;
            return rec;
        }
        std::vector<ChainEntry> next;
        std::vector<u64> units(cur.size(), 1);
        for (std::size_t idx = 0; idx < cur.size(); ++idx) {
            Poly comp = compose(cur[idx].factor, profile.f().to_poly(), degree_cap);
            Factorization fac = factor(comp, seed);
            units[idx] = fac.unit;
            for (const auto& [part, mult] : fac.parts) {
                FType t = ftype(part, profile);
                for (int i = 0; i < mult; ++i)
                    next.push_back(ChainEntry{part, t, static_cast<int>(idx)});
            }
        }
        std::sort(next.begin(), next.end(), [](const ChainEntry& a, const ChainEntry& b) {
            if (a.factor != b.factor) return poly_less(a.factor, b.factor);
            return a.parent < b.parent;
        });
        rec.expansion_units.push_back(std::move(units));
        rec.levels.push_back(std::move(next));
    }
    return rec;
}

void for_each_monic_quadratic(const FieldSpec& field,
                              const std::function<void(const MonicQuadratic&)>& fn) {
    for (u64 a = 0; a < field.q(); ++a)
        for (u64 b = 0; b < field.q(); ++b) fn(MonicQuadratic(field, a, b));
}

std::vector<MonicQuadratic> enumerate_quadratics(const FieldSpec& field) {
    std::vector<MonicQuadratic> out;
    out.reserve(static_cast<std::size_t>(field.q() * field.q()));
    for_each_monic_quadratic(field, [&](const MonicQuadratic& f) { out.push_back(f); });
    return out;
}

void for_each_monic_irreducible(const FieldSpec& field, int degree,
                                const std::function<void(const Poly&)>& fn) {
    if (degree < 1) throw std::invalid_argument("for_each_monic_irreducible: degree must be >= 1");
    const u64 q = field.q();
    u64 total = 1;
    for (int i = 0; i < degree; ++i) {
        if (total > (u64(1) << 40) / q)
            throw std::invalid_argument("for_each_monic_irreducible: enumeration too large");
        total *= q;
    }
    std::vector<u64> codes(static_cast<std::size_t>(degree) + 1, 0);
    codes[degree] = 1;
    for (u64 v = 0; v < total; ++v) {
        u64 t = v;
        for (int i = 0; i < degree; ++i) {
            codes[i] = t % q;
            t /= q;
        }
        Poly cand(field, codes);
        if (degree == 1 || is_irreducible(cand)) fn(cand);
    }
}

std::vector<Poly> enumerate_irreducibles(const FieldSpec& field, int degree) {
    std::vector<Poly> out;
    for_each_monic_irreducible(field, degree, [&](const Poly& p) { out.push_back(p); });
    return out;
}

}  // namespace fqdyn
