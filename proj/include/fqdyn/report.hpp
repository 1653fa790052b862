#pragma once

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "fqdyn/dynamics.hpp"
#include "fqdyn/factor.hpp"

namespace fqdyn {

inline constexpr const char* kToolVersion = "fqdyn 0.1.0";

/// nlohmann::json with the default (std::map) object backend: keys always
/// serialize sorted, which is what makes report bytes reproducible.
using Json = nlohmann::json;

Json field_to_json(const FieldSpec& field);          // {"p", "k", "modulus"}
Json quadratic_to_json(const MonicQuadratic& f);     // [b, a], constant term first
Json poly_to_json(const Poly& a);                    // coefficient codes, constant first
Json factorization_to_json(const Factorization& f);  // {"unit", "parts"}
Json transition_record_to_json(const TransitionRecord& rec);

/// Aggregated census output: scope, per-orbit-type counts, canonical
/// signature counts and a (hopefully empty) counterexample list.
struct CensusReport {
    Json field;
    Json scope;
    std::map<std::string, long> orbit_type_counts;
    std::map<std::string, long> signature_counts;
    std::vector<Json> counterexamples;
    Json extra;
    std::string version = kToolVersion;

    Json to_json() const;
};

}  // namespace fqdyn
