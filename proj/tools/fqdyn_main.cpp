#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fqdyn/dynamics.hpp"
#include "fqdyn/report.hpp"
#include "fqdyn/verify.hpp"

namespace {

using fqdyn::Json;

constexpr int kExitFailure = 1;
constexpr int kExitBadConfig = 2;
constexpr int kExitBadSeedPoly = 3;
constexpr int kExitInconclusive = 4;

struct Options {
    std::string primes_text;
    std::uint64_t p = 0;
    unsigned k = 0;
    std::string modulus_text;
    int depth = 6;
    std::uint64_t seed = 0;
    int g_degree_max = 4;
    std::size_t degree_cap = fqdyn::kDefaultDegreeCap;
    std::string format = "summary";
    std::string out_path;
};

// "3..13" expands to all odd primes in range; "3,5,7" is an explicit list.
std::vector<std::uint64_t> parse_primes(const std::string& text) {
    std::vector<std::uint64_t> out;
    if (text.empty()) return out;
    auto parse_u64 = [](const std::string& s) {
        std::size_t pos = 0;
        unsigned long long v = std::stoull(s, &pos);
        if (pos != s.size()) throw std::invalid_argument("bad number '" + s + "'");
        return static_cast<std::uint64_t>(v);
    };
    auto dots = text.find("..");
    if (dots != std::string::npos) {
        std::uint64_t lo = parse_u64(text.substr(0, dots));
        std::uint64_t hi = parse_u64(text.substr(dots + 2));
        for (std::uint64_t v = lo; v <= hi; ++v) {
            try {
                fqdyn::FieldSpec::prime(v);
            } catch (const std::invalid_argument&) {
                continue;  // skip non-primes (and 2) inside a range
            }
            out.push_back(v);
        }
        return out;
    }
    std::istringstream in(text);
    std::string tok;
    while (std::getline(in, tok, ',')) {
        std::uint64_t v = parse_u64(tok);
        fqdyn::FieldSpec::prime(v);  // throws on composites and even values
        out.push_back(v);
    }
    return out;
}

std::vector<fqdyn::FieldSpec> build_fields(const Options& opt) {
    std::vector<fqdyn::FieldSpec> fields;
    for (std::uint64_t p : parse_primes(opt.primes_text))
        fields.push_back(fqdyn::FieldSpec::prime(p));
    if (opt.p != 0) {
        if (opt.modulus_text.empty()) {
            if (opt.k > 1)
                throw std::invalid_argument("extension degree k > 1 requires --modulus");
            fields.push_back(fqdyn::FieldSpec::prime(opt.p));
        } else {
            std::vector<std::uint64_t> modulus;
            std::istringstream in(opt.modulus_text);
            std::string tok;
            while (std::getline(in, tok, ',')) modulus.push_back(std::stoull(tok));
            if (opt.k != 0 && modulus.size() != opt.k + 1)
                throw std::invalid_argument("--k disagrees with the modulus degree");
            fields.push_back(fqdyn::FieldSpec::extension(opt.p, modulus));
        }
    } else if (opt.k > 1 || !opt.modulus_text.empty()) {
        throw std::invalid_argument("--k/--modulus require --p");
    }
    return fields;
}

void validate_common(const Options& opt, bool allow_depth_zero = false) {
    if (opt.depth < (allow_depth_zero ? 0 : 1))
        throw std::invalid_argument("depth out of range");
    if (opt.g_degree_max < 2 || opt.g_degree_max % 2 != 0)
        throw std::invalid_argument("g-degree-max must be even and >= 2");
    if (opt.format != "jsonl" && opt.format != "csv" && opt.format != "summary")
        throw std::invalid_argument("format must be jsonl, csv or summary");
}

Json config_json(const Options& opt, const std::vector<fqdyn::FieldSpec>& fields) {
    Json fields_json = Json::array();
    for (const auto& F : fields) fields_json.push_back(fqdyn::field_to_json(F));
    return Json{{"fields", fields_json},   {"depth", opt.depth},
                {"seed", opt.seed},        {"g_degree_max", opt.g_degree_max},
                {"degree_cap", opt.degree_cap}, {"format", opt.format}};
}

class Output {
public:
    explicit Output(const std::string& path) {
        if (!path.empty()) {
            file_.open(path, std::ios::binary);
            if (!file_) throw std::invalid_argument("cannot open output path '" + path + "'");
        }
    }
    std::ostream& os() { return file_.is_open() ? file_ : std::cout; }
    void line(const std::string& s) { os() << s << "\n"; }
    void record(const Json& j) { os() << j.dump() << "\n"; }

private:
    std::ofstream file_;
};

void add_common_flags(CLI::App* cmd, Options& opt, bool with_primes) {
    if (with_primes)
        cmd->add_option("--primes", opt.primes_text, "odd primes, list '3,5,7' or range '3..61'");
    cmd->add_option("--p", opt.p, "single characteristic (use with --k/--modulus for extensions)");
    cmd->add_option("--k", opt.k, "extension degree (must match the modulus)");
    cmd->add_option("--modulus", opt.modulus_text,
                    "modulus polynomial for an extension field, constant term first");
    cmd->add_option("--depth", opt.depth, "iteration depth")->capture_default_str();
    cmd->add_option("--seed", opt.seed, "seed for the factorization splitter")
        ->capture_default_str();
    cmd->add_option("--g-degree-max", opt.g_degree_max, "largest seed degree (even)")
        ->capture_default_str();
    cmd->add_option("--degree-cap", opt.degree_cap, "polynomial degree guard")
        ->capture_default_str();
    cmd->add_option("--format", opt.format, "jsonl | csv | summary")->capture_default_str();
    cmd->add_option("--out", opt.out_path, "output path (default stdout)");
}

// ---------------------------------------------------------------------------
// orbit-census

int cmd_orbit_census(const Options& opt) {
    validate_common(opt);
    auto fields = build_fields(opt);
    Output out(opt.out_path);

    if (opt.format == "jsonl")
        out.record(Json{{"command", "orbit-census"},
                        {"config", config_json(opt, fields)},
                        {"version", fqdyn::kToolVersion}});
    else if (opt.format == "summary") {
        out.line(std::string(fqdyn::kToolVersion) + " orbit-census");
    } else {
        out.line(std::string("# ") + fqdyn::kToolVersion);
        out.line("p,k,m,n,count");
    }

    for (const auto& F : fields) {
        std::map<std::string, long> counts;
        std::map<std::string, std::pair<int, int>> parsed;
        std::vector<Json> exc_2n, exc_31;
        fqdyn::for_each_monic_quadratic(F, [&](const fqdyn::MonicQuadratic& f) {
            fqdyn::OrbitProfile prof = fqdyn::orbit_profile(f);
            counts[prof.orbit_type_string()]++;
            parsed[prof.orbit_type_string()] = {prof.m(), prof.n()};
            if (prof.is_type_2n()) exc_2n.push_back(fqdyn::quadratic_to_json(f));
            if (prof.is_type_31()) exc_31.push_back(fqdyn::quadratic_to_json(f));
        });
        if (opt.format == "jsonl") {
            out.record(Json{{"census", "orbit-types"},
                            {"field", fqdyn::field_to_json(F)},
                            {"counts", counts},
                            {"exceptional_2n", exc_2n},
                            {"exceptional_31", exc_31}});
        } else if (opt.format == "csv") {
            for (const auto& [type, count] : counts)
                out.line(std::to_string(F.p()) + "," + std::to_string(F.k()) + "," +
                         std::to_string(parsed[type].first) + "," +
                         std::to_string(parsed[type].second) + "," + std::to_string(count));
        } else {
            out.line(F.to_string() + ":");
            for (const auto& [type, count] : counts)
                out.line("  " + type + "  " + std::to_string(count));
            out.line("  exceptional (2,n): " + std::to_string(exc_2n.size()) +
                     ", (3,1): " + std::to_string(exc_31.size()));
        }
    }
    return 0;
}

// ---------------------------------------------------------------------------
// ftype

int cmd_ftype(const Options& opt, const std::string& f_text, const std::string& g_text) {
    validate_common(opt);
    auto fields = build_fields(opt);
    if (fields.size() != 1)
        throw std::invalid_argument("ftype needs exactly one field (--p or a single --primes entry)");
    const fqdyn::FieldSpec& F = fields.front();

    fqdyn::Poly f_poly = fqdyn::Poly::parse(F, f_text);
    if (f_poly.degree() != 2 || !f_poly.is_monic())
        throw std::invalid_argument("f must be a monic quadratic");
    fqdyn::MonicQuadratic f(F, f_poly.coeff_code(1), f_poly.coeff_code(0));

    fqdyn::Poly g = fqdyn::Poly::parse(F, g_text);
    if (!g.is_monic() || g.degree() < 1) {
        std::cerr << "fqdyn: g must be monic and nonconstant\n";
        return kExitBadSeedPoly;
    }
    if (!fqdyn::is_irreducible(g)) {
        std::cerr << "fqdyn: g is reducible over " << F.to_string() << "\n";
        return kExitBadSeedPoly;
    }

    fqdyn::OrbitProfile prof = fqdyn::orbit_profile(f);
    fqdyn::FType t = fqdyn::ftype(g, prof);

    Output out(opt.out_path);
    if (opt.format == "jsonl") {
        out.record(Json{{"command", "ftype"},
                        {"config", config_json(opt, fields)},
                        {"version", fqdyn::kToolVersion}});
        out.record(Json{{"field", fqdyn::field_to_json(F)},
                        {"f", fqdyn::quadratic_to_json(f)},
                        {"g", fqdyn::poly_to_json(g)},
                        {"gamma", f.gamma_code()},
                        {"c", f.c_code()},
                        {"orbit_type", prof.orbit_type_string()},
                        {"orbit", prof.orbit()},
                        {"ftype", t.letters},
                        {"degenerate", t.degenerate}});
    } else {
        out.line(std::string(fqdyn::kToolVersion) + " ftype");
        out.line("field: " + F.to_string());
        out.line("f: " + f.to_string() + "  gamma=" + std::to_string(f.gamma_code()) +
                 "  c=" + std::to_string(f.c_code()));
        out.line("orbit type: " + prof.orbit_type_string());
        std::string orbit = "orbit:";
        for (auto b : prof.orbit()) orbit += " " + std::to_string(b);
        out.line(orbit);
        out.line("f-type of g: " + t.letters + (t.degenerate ? " (degenerate)" : ""));
    }
    return 0;
}

// ---------------------------------------------------------------------------
// transitions

int cmd_transitions(const Options& opt, const std::string& f_text) {
    validate_common(opt, /*allow_depth_zero=*/true);
    auto fields = build_fields(opt);
    if (fields.size() != 1)
        throw std::invalid_argument("transitions needs exactly one field");
    const fqdyn::FieldSpec& F = fields.front();

    fqdyn::Poly f_poly = fqdyn::Poly::parse(F, f_text);
    if (f_poly.degree() != 2 || !f_poly.is_monic())
        throw std::invalid_argument("f must be a monic quadratic");
    fqdyn::MonicQuadratic f(F, f_poly.coeff_code(1), f_poly.coeff_code(0));
    fqdyn::OrbitProfile prof = fqdyn::orbit_profile(f);

    Output out(opt.out_path);
    if (opt.format == "jsonl")
        out.record(Json{{"command", "transitions"},
                        {"config", config_json(opt, fields)},
                        {"f", fqdyn::quadratic_to_json(f)},
                        {"version", fqdyn::kToolVersion}});
    else if (opt.format == "summary")
        out.line(std::string(fqdyn::kToolVersion) + " transitions for f=" + f.to_string() + " over " +
                 F.to_string());

    std::map<std::string, long> signature_counts;
    auto emit = [&](const fqdyn::Poly& g, const char* kind) {
        fqdyn::TransitionRecord rec =
            fqdyn::transition_chain(g, prof, opt.depth, opt.seed, opt.degree_cap);
        signature_counts[rec.signature()]++;
        if (opt.format == "jsonl") {
            Json j = fqdyn::transition_record_to_json(rec);
            j["seed_kind"] = kind;
            j["field"] = fqdyn::field_to_json(F);
            j["seed"] = opt.seed;
            out.record(j);
        } else if (opt.format == "summary") {
            out.line(g.to_string() + "  " + rec.signature() +
                     (rec.degenerate ? "  [degenerate]" : ""));
        }
    };

    for (int d = 2; d <= opt.g_degree_max; d += 2)
        fqdyn::for_each_monic_irreducible(F, d,
                                          [&](const fqdyn::Poly& g) { emit(g, "small-degree"); });
    fqdyn::Factorization base = fqdyn::factor(f.to_poly(), opt.seed);
    for (const auto& [g0, mult] : base.parts) emit(g0, "factor-of-f");

    if (opt.format == "csv") {
        out.line(std::string("# ") + fqdyn::kToolVersion);
        out.line("signature,count");
        for (const auto& [sig, count] : signature_counts)
            out.line("\"" + sig + "\"," + std::to_string(count));
    }
    return 0;
}

// ---------------------------------------------------------------------------
// verify

struct ClaimResult {
    bool failed = false;
    bool inconclusive = false;
};

int cmd_verify(const Options& opt, const std::string& claim) {
    static const std::set<std::string> kClaims = {
        "identities",   "theorem-2n",          "theorem-31", "pairing",
        "missing-transitions", "conjecture-evidence", "all"};
    if (!kClaims.count(claim))
        throw std::invalid_argument("unknown claim '" + claim + "'");
    validate_common(opt);
    auto fields = build_fields(opt);

    fqdyn::CensusScope scope;
    scope.fields = fields;
    scope.depth = opt.depth;
    scope.g_degree_max = opt.g_degree_max;
    scope.seed = opt.seed;
    scope.degree_cap = opt.degree_cap;

    const bool all = claim == "all";
    const bool need_census = all || claim == "theorem-2n" || claim == "theorem-31" ||
                             claim == "pairing" || claim == "missing-transitions";

    std::optional<fqdyn::FamilyCensus> fam2, fam31;
    if (need_census && (all || claim != "theorem-31")) fam2 = fqdyn::run_census_2n(scope);
    if (need_census && (all || claim != "theorem-2n")) fam31 = fqdyn::run_census_31(scope);

    Output out(opt.out_path);
    std::vector<std::string> summary_lines;
    std::vector<Json> records;
    ClaimResult total;

    auto note = [&](const std::string& name, bool passed, bool inconclusive, Json detail) {
        total.failed |= !passed && !inconclusive;
        total.inconclusive |= inconclusive;
        records.push_back(Json{{"claim", name},
                               {"passed", passed && !inconclusive},
                               {"inconclusive", inconclusive},
                               {"detail", std::move(detail)},
                               {"seed", opt.seed}});
        summary_lines.push_back(name + ": " +
                                (inconclusive ? "INCONCLUSIVE" : passed ? "PASS" : "FAIL"));
    };

    if (all || claim == "identities") {
        fqdyn::IdentitySummary s = fqdyn::run_identity_census(fields);
        note("identities", s.failures == 0, false, s.to_json());
    }
    if (all || claim == "theorem-2n") {
        const auto& fam = *fam2;
        note("theorem-2n", fam.theorem.failures == 0, fam.theorem.exercised == 0, fam.to_json());
    }
    if (all || claim == "theorem-31") {
        const auto& fam = *fam31;
        note("theorem-31", fam.theorem.failures == 0, fam.theorem.exercised == 0, fam.to_json());
    }
    if (all || claim == "pairing") {
        fqdyn::CensusObservations obs;
        if (fam2) obs.merge(fam2->observations);
        if (fam31) obs.merge(fam31->observations);
        note("pairing", obs.pairing_violations == 0 && obs.unit_violations == 0,
             obs.split_steps == 0, obs.to_json());
    }
    if (all || claim == "missing-transitions") {
        bool failed = false, inconclusive = false;
        for (const auto* fam : {&*fam2, &*fam31}) {
            const auto& tbl = fam->missing;
            // forbidden windows are failure witnesses; an unrealized
            // complement class is missing data, not a counterexample
            if (tbl.forbidden_total() != 0 || tbl.anomalies != 0) failed = true;
            if (tbl.windows == 0 || !tbl.missing_complement().empty()) inconclusive = true;
        }
        Json detail = Json{{"family_2n", fam2->missing.to_json()},
                           {"family_31", fam31->missing.to_json()}};
        note("missing-transitions", !failed, !failed && inconclusive, detail);
    }
    if (all || claim == "conjecture-evidence") {
        Json reports = Json::array();
        for (const auto& F : fields)
            reports.push_back(
                fqdyn::conjecture_evidence(F, opt.depth, opt.seed, opt.g_degree_max, opt.degree_cap)
                    .to_json());
        note("conjecture-evidence", true, false, reports);
    }

    if (opt.format == "jsonl") {
        out.record(Json{{"command", "verify"},
                        {"claim", claim},
                        {"config", config_json(opt, fields)},
                        {"version", fqdyn::kToolVersion}});
        for (const auto& r : records) out.record(r);
    } else if (opt.format == "summary") {
        out.line(std::string(fqdyn::kToolVersion) + " verify " + claim);
        for (const auto& l : summary_lines) out.line(l);
    } else {
        out.line(std::string("# ") + fqdyn::kToolVersion);
        out.line("claim,status");
        for (const auto& r : records)
            out.line(r["claim"].get<std::string>() + "," +
                     (r["inconclusive"].get<bool>() ? "inconclusive"
                      : r["passed"].get<bool>()     ? "pass"
                                                    : "fail"));
    }

    if (total.failed) return kExitFailure;
    if (total.inconclusive) return kExitInconclusive;
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"post-critical orbits, f-types and factorization censuses of iterated "
                 "monic quadratics over odd finite fields"};
    app.require_subcommand(1);

    Options opt;
    std::string f_text, g_text, claim;

    CLI::App* census = app.add_subcommand("orbit-census", "orbit-type frequency tables");
    add_common_flags(census, opt, true);

    CLI::App* ftype_cmd = app.add_subcommand("ftype", "orbit profile and f-type of one (f, g) pair");
    add_common_flags(ftype_cmd, opt, true);
    ftype_cmd->add_option("--f", f_text, "monic quadratic, constant term first (e.g. 6,4,1)")
        ->required();
    ftype_cmd->add_option("--g", g_text, "monic irreducible seed polynomial")->required();

    CLI::App* verify_cmd = app.add_subcommand("verify", "run verification censuses");
    add_common_flags(verify_cmd, opt, true);
    verify_cmd
        ->add_option("--claim", claim,
                     "identities | theorem-2n | theorem-31 | pairing | missing-transitions | "
                     "conjecture-evidence | all")
        ->required();

    CLI::App* trans_cmd = app.add_subcommand("transitions", "factor chains from every seed g");
    add_common_flags(trans_cmd, opt, true);
    trans_cmd->add_option("--f", f_text, "monic quadratic, constant term first")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitBadConfig;
    }

    try {
        if (census->parsed()) return cmd_orbit_census(opt);
        if (ftype_cmd->parsed()) return cmd_ftype(opt, f_text, g_text);
        if (verify_cmd->parsed()) return cmd_verify(opt, claim);
        if (trans_cmd->parsed()) return cmd_transitions(opt, f_text);
    } catch (const std::invalid_argument& e) {
        std::cerr << "fqdyn: " << e.what() << "\n";
        return kExitBadConfig;
    } catch (const std::exception& e) {
        std::cerr << "fqdyn: " << e.what() << "\n";
        return kExitBadConfig;
    }
    return kExitBadConfig;
}
