#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "fqdyn/dynamics.hpp"
#include "fqdyn/report.hpp"

namespace fqdyn {

/// Outcome of one executable check. A failed verdict always carries a
/// witness with enough data to re-run the instance; skip marks instances
/// whose preconditions ruled them out (never counted as passes).
struct Verdict {
    std::string claim;
    Json field = nullptr;
    Json f = nullptr;
    Json g = nullptr;
    bool passed = false;
    bool skip = false;
    Json witness = nullptr;
    std::uint64_t seed = 0;

    Json to_json() const;
};

/// Orbit-type (2,n) identity: (b_n - gamma)^2 = -2c, exact field equality.
/// Throws std::invalid_argument on any other orbit type.
Verdict check_identity_2n(const OrbitProfile& profile);

/// Orbit-type (3,1) identities: (b_1-gamma)^2 (b_2-gamma)^2 = 2(b_2-gamma)
/// and (b_1-gamma)^2 + (b_2-gamma)^2 = -2c.
Verdict check_identity_31(const OrbitProfile& profile);

/// Factor pairing at the first split: when g(f^i) is irreducible and
/// g(f^(i+1)) splits (and is squarefree), the two monic factors must be
/// exchanged by x -> 2*gamma - x up to the sign (-1)^deg, with the
/// factorization unit equal to g's leading coefficient. Precondition
/// violations throw std::invalid_argument.
Verdict check_pairing(const Poly& g, const OrbitProfile& profile, int i, std::uint64_t seed,
                      std::size_t degree_cap = kDefaultDegreeCap);

/// Orbit type (2,n), g monic irreducible of even degree with f-type starting
/// "ns": every irreducible factor of g(f^2) must have a square value at b_n.
/// Unmet hypotheses yield skip verdicts, not failures.
Verdict check_theorem_2n(const Poly& g, const OrbitProfile& profile, std::uint64_t seed,
                         std::size_t degree_cap = kDefaultDegreeCap);

/// Orbit type (3,1), g monic irreducible of even degree with g(f^2) still
/// irreducible (f-type prefix "nn", the hypothesis the factor-pairing lemma
/// needs): every irreducible factor H of g(f^3) must have H(b_1) * H(b_2)
/// square. Seeds that split before the third step genuinely violate the
/// conclusion and are skipped, not failed.
Verdict check_theorem_31(const Poly& g, const OrbitProfile& profile, std::uint64_t seed,
                         std::size_t degree_cap = kDefaultDegreeCap);

/// Structural observations gathered while walking factor chains: reflection
/// pairing of splits, factorization units, shift consistency of n-led steps
/// and the descendant character condition. The character condition is only
/// meaningful for even-degree parents and children (odd-degree splits pick up
/// a (-1)^deg twist), so pairs outside that range are not recorded.
struct CensusObservations {
    long split_steps = 0;
    long pairing_violations = 0;
    long unit_checks = 0;
    long unit_violations = 0;
    long descendant_pairs = 0;
    long allowability_violations = 0;
    long m1_condition_pairs = 0;  // judged under the m = 1 empty-product convention
    long shift_checks = 0;
    long shift_violations = 0;
    std::vector<Json> witnesses;

    long violation_total() const {
        return pairing_violations + unit_violations + allowability_violations + shift_violations;
    }
    void merge(const CensusObservations& o);
    Json to_json() const;
};

/// Occurrence table for the final levels of 2-step ((2,n)) or 3-step ((3,1))
/// windows. Classes are canonical sorted pairs: the last two letters of each
/// final type for (2,n), the full type strings for (3,1).
struct MissingTransitionTable {
    long windows = 0;
    long anomalies = 0;  // windows whose level shapes defied the one-step rules
    std::map<std::string, long> observed_classes;
    std::set<std::string> forbidden_classes;
    /// Classes the one-step model admits for the window roots actually seen;
    /// the census is expected to realize every one of them.
    std::set<std::string> expected_complement;
    std::map<std::string, long> full_signatures;
    std::vector<Json> forbidden_witnesses;

    long forbidden_total() const;
    std::vector<std::string> missing_complement() const;
    void merge(const MissingTransitionTable& o);
    Json to_json() const;
};

struct TheoremCensus {
    long exercised = 0;
    long skipped = 0;
    long degenerate = 0;
    long failures = 0;
    std::vector<Json> witnesses;

    void merge(const TheoremCensus& o);
    Json to_json() const;
};

/// Everything the census knows about one exceptional family across a scope.
struct FamilyCensus {
    long quadratic_count = 0;
    TheoremCensus theorem;
    MissingTransitionTable missing;
    CensusObservations observations;

    void merge(const FamilyCensus& o);
    Json to_json() const;
};

struct CensusScope {
    std::vector<FieldSpec> fields;
    int depth = 6;
    int g_degree_max = 4;
    std::uint64_t seed = 0;
    std::size_t degree_cap = kDefaultDegreeCap;

    static CensusScope over_primes(const std::vector<std::uint64_t>& primes);
};

/// Full census over every orbit-type (2,n) monic quadratic in scope: theorem
/// instances from degree-2..g_degree_max seeds and from factors of f^i
/// (i <= depth), forbidden-window occurrences, and chain observations.
FamilyCensus run_census_2n(const CensusScope& scope);
/// Same for orbit type (3,1).
FamilyCensus run_census_31(const CensusScope& scope);

struct IdentitySummary {
    long profiles_2n = 0;
    long profiles_31 = 0;
    long failures = 0;
    std::vector<Json> witnesses;

    Json to_json() const;
};

/// Exhaustive identity check over all monic quadratics of the given fields.
IdentitySummary run_identity_census(const std::vector<FieldSpec>& fields);

/// Forbidden-transition verdict for a single quadratic, seeded from the
/// irreducible factors of f (hence covering factors of f^i, i <= depth).
/// No qualifying window at all surfaces as skip = true (inconclusive).
Verdict check_missing_transitions(const OrbitProfile& profile, int depth, std::uint64_t seed,
                                  std::size_t degree_cap = kDefaultDegreeCap,
                                  MissingTransitionTable* table_out = nullptr,
                                  CensusObservations* obs_out = nullptr);

/// Realized vs unrealized allowable descendant pairs per orbit type over all
/// monic quadratics of one field. Reports evidence; asserts nothing.
CensusReport conjecture_evidence(const FieldSpec& field, int depth, std::uint64_t seed,
                                 int g_degree_max = 4,
                                 std::size_t degree_cap = kDefaultDegreeCap);

}  // namespace fqdyn
