#include "fqdyn/report.hpp"

namespace fqdyn {

Json field_to_json(const FieldSpec& field) {
    Json j;
    j["p"] = field.p();
    j["k"] = field.k();
    j["modulus"] = field.k() == 1 ? Json(nullptr) : Json(field.modulus());
    return j;
}

Json quadratic_to_json(const MonicQuadratic& f) { return Json{f.b_code(), f.a_code()}; }

Json poly_to_json(const Poly& a) { return Json(a.coeff_codes()); }

Json factorization_to_json(const Factorization& f) {
    Json parts = Json::array();
    for (const auto& [poly, mult] : f.parts) parts.push_back(Json{poly_to_json(poly), mult});
    return Json{{"unit", f.unit}, {"parts", parts}};
}

Json transition_record_to_json(const TransitionRecord& rec) {
    Json levels = Json::array();
    for (std::size_t i = 0; i < rec.levels.size(); ++i)
        levels.push_back(rec.level_type_strings(i));
    return Json{
        {"f", quadratic_to_json(rec.f)},
        {"g", poly_to_json(rec.seed_g)},
        {"levels", levels},
        {"signature", rec.signature()},
        {"degenerate", rec.degenerate},
        {"truncated_at", rec.degenerate ? Json(rec.truncated_at) : Json(nullptr)},
    };
}

Json CensusReport::to_json() const {
    return Json{
        {"field", field},
        {"scope", scope},
        {"orbit_type_counts", orbit_type_counts},
        {"signature_counts", signature_counts},
        {"counterexamples", counterexamples},
        {"extra", extra},
        {"version", version},
    };
}

}  // namespace fqdyn
