#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "fqdyn/factor.hpp"
#include "fqdyn/poly.hpp"

namespace fqdyn {

/// Post-critical orbit data of a monic quadratic: minimal m >= 0, n >= 1 with
/// f^m(gamma) = f^(m+n)(gamma), plus the orbit points b_i = f^i(gamma).
/// The orbit holds b_1 .. b_o where o = m+n-1 for m >= 1 and o = n for m = 0
/// (the forward orbit of a periodic critical point has exactly n points).
class OrbitProfile {
public:
    OrbitProfile(MonicQuadratic f, int m, int n, std::vector<std::uint64_t> orbit);

    const MonicQuadratic& f() const { return f_; }
    const FieldSpec& field() const { return f_.field(); }
    int m() const { return m_; }
    int n() const { return n_; }
    int size() const { return static_cast<int>(orbit_.size()); }  // o_f
    const std::vector<std::uint64_t>& orbit() const { return orbit_; }

    /// b_t for 1-based t, wrapping cyclically past the orbit end.
    std::uint64_t point(int t) const { return orbit_[position(t) - 1]; }
    /// 1-based orbit position of b_t for arbitrary t >= 1.
    int position(int t) const;
    /// Index k with f^(o+1)(gamma) = f^k(gamma); the shift action recycles
    /// the former k-th letter (k = m for m >= 1, else 1).
    int recycle_index() const { return m_ >= 1 ? m_ : 1; }

    bool is_type_2n() const { return m_ == 2; }
    bool is_type_31() const { return m_ == 3 && n_ == 1; }
    std::string orbit_type_string() const;  // "(m,n)"

private:
    MonicQuadratic f_;
    int m_, n_;
    std::vector<std::uint64_t> orbit_;
};

/// Classifies the orbit by iterating gamma until the first repeat; the orbit
/// lives in a finite field, so this terminates within q+1 steps.
OrbitProfile orbit_profile(const MonicQuadratic& f);

/// f-type of a monic polynomial: one letter per orbit point, 's'/'n'/'z' for
/// square/nonsquare/zero value of g at that point. Any 'z' marks the type
/// degenerate (a non-separable instance downstream).
struct FType {
    std::string letters;
    bool degenerate = false;

    char first() const { return letters.empty() ? '?' : letters[0]; }
    bool starts_with(const char* prefix) const {
        return letters.rfind(prefix, 0) == 0;
    }
};

/// Throws std::invalid_argument unless g is monic and nonconstant.
/// Irreducibility of g is the caller's contract (the CLI enforces it).
FType ftype(const Poly& g, const OrbitProfile& profile);

/// The shift action on non-degenerate types: drop the first letter, append
/// the former letter at recycle_index(). Throws on degenerate input or
/// length mismatch.
FType shift_type(const FType& t, const OrbitProfile& profile);

/// The character condition for immediate descendants of an s-led type:
/// always allowed for m = 0; for m >= 2 requires
/// child[m-1] * child[m+n-1] = parent[m] under s = +1, n = -1. The m = 1
/// corner treats the out-of-range child[0] factor as the empty product, so
/// the condition becomes child[m+n-1] = parent[1]; census reports count how
/// often that convention is exercised. Throws std::invalid_argument when the
/// parent does not start with 's' (no split occurs) or on degenerate types.
bool allowable(const FType& parent, const FType& child, const OrbitProfile& profile);

struct DescendantEntry {
    Poly factor;
    FType type;
};

/// Irreducible factors of H(f(x)) with their f-types, in canonical order
/// (multiplicities flattened; repeated factors only arise from degenerate H).
std::vector<DescendantEntry> immediate_descendants(const Poly& H, const OrbitProfile& profile,
                                                   std::uint64_t seed,
                                                   std::size_t degree_cap = kDefaultDegreeCap);

struct ChainEntry {
    Poly factor;
    FType type;
    int parent = -1;  // index into the previous level; -1 at level 0
};

/// Factor chain of g, g(f), ..., g(f^depth): level i holds the canonically
/// sorted irreducible factors of g(f^i) with parent links into level i-1.
/// Expansion stops early when a degenerate (z-typed) factor appears; the
/// record is then marked degenerate and truncated_at names the last level
/// that was built.
struct TransitionRecord {
    MonicQuadratic f;
    Poly seed_g;
    std::vector<std::vector<ChainEntry>> levels;
    /// Unit of the factorization expanding levels[i] -> levels[i+1], one per
    /// entry of levels[i]; monic seeds always give 1.
    std::vector<std::vector<std::uint64_t>> expansion_units;
    bool degenerate = false;
    int truncated_at = -1;

    int steps() const { return static_cast<int>(levels.size()) - 1; }
    std::vector<std::string> level_type_strings(std::size_t level) const;  // sorted
    std::string signature() const;  // sorted types joined "/" per level, levels joined by arrows
};

/// Canonical multiset encoding shared by records and censuses: type strings
/// sorted and joined with "/", levels joined with an arrow.
std::string level_signature(std::vector<std::string> types);
std::string join_levels(const std::vector<std::string>& levels);

TransitionRecord transition_chain(const Poly& g, const OrbitProfile& profile, int depth,
                                  std::uint64_t seed, std::size_t degree_cap = kDefaultDegreeCap);

/// All q^2 monic quadratics x^2 + ax + b, a-major then b, both ascending.
void for_each_monic_quadratic(const FieldSpec& field,
                              const std::function<void(const MonicQuadratic&)>& fn);
std::vector<MonicQuadratic> enumerate_quadratics(const FieldSpec& field);

/// All monic irreducibles of exactly the given degree, ascending in the
/// canonical order (coefficient tuple read as a base-q integer).
void for_each_monic_irreducible(const FieldSpec& field, int degree,
                                const std::function<void(const Poly&)>& fn);
std::vector<Poly> enumerate_irreducibles(const FieldSpec& field, int degree);

}  // namespace fqdyn
