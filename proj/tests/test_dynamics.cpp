#include <doctest.h>

#include <algorithm>
#include <map>
#include <stdexcept>

#include "fqdyn/dynamics.hpp"
#include "oracles.hpp"

using namespace fqdyn;

TEST_CASE("orbit profiles of the worked examples") {
    FieldSpec F7 = FieldSpec::prime(7);
    OrbitProfile p1 = orbit_profile(MonicQuadratic(F7, 0, 1));  // x^2 + 1
    CHECK(p1.m() == 3);
    CHECK(p1.n() == 1);
    CHECK(p1.orbit() == std::vector<std::uint64_t>{1, 2, 5});
    CHECK(p1.is_type_31());
    CHECK(p1.orbit_type_string() == "(3,1)");

    FieldSpec F5 = FieldSpec::prime(5);
    // x^2 - 2x + 2: critical point 1 is fixed
    OrbitProfile p2 = orbit_profile(MonicQuadratic(F5, 3, 2));
    CHECK(p2.m() == 0);
    CHECK(p2.n() == 1);
    CHECK(p2.orbit() == std::vector<std::uint64_t>{1});

    OrbitProfile p3 = orbit_profile(MonicQuadratic(F5, 0, 2));  // x^2 + 2
    CHECK(p3.m() == 2);
    CHECK(p3.n() == 2);
    CHECK(p3.orbit() == std::vector<std::uint64_t>{2, 1, 3});
    CHECK(p3.is_type_2n());
}

TEST_CASE("the published example orbit disagrees with its own iteration") {
    // f = x^2+4x+6 over F_7: direct iteration gives 2, 4, 3, 6 with f(6) = 3,
    // i.e. orbit type (3,2); the iteration is what this library trusts.
    FieldSpec F7 = FieldSpec::prime(7);
    MonicQuadratic f(F7, 4, 6);
    CHECK(f.gamma_code() == 5);
    CHECK(f.eval_code(4) == 3);
    OrbitProfile prof = orbit_profile(f);
    CHECK(prof.m() == 3);
    CHECK(prof.n() == 2);
    CHECK(prof.orbit() == std::vector<std::uint64_t>{2, 4, 3, 6});

    Poly g = Poly::parse(F7, "1,1,0,1");
    FType t = ftype(g, prof);
    CHECK(t.letters.substr(0, 3) == "snn");  // the published letters
    CHECK(t.letters == "snnn");
    CHECK_FALSE(t.degenerate);
}

TEST_CASE("orbit minimality against the double-loop oracle (p <= 31)") {
    for (std::uint64_t p : {3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull}) {
        FieldSpec F = FieldSpec::prime(p);
        for_each_monic_quadratic(F, [&](const MonicQuadratic& f) {
            OrbitProfile prof = orbit_profile(f);
            const int m = prof.m(), n = prof.n();
            // recompute the value sequence directly
            std::vector<std::uint64_t> seq{f.gamma_code()};  // seq[i] = f^i(gamma)
            const int top = m + 2 + 3 * n;
            for (int i = 1; i <= 2 * top; ++i) seq.push_back(f.eval_code(seq.back()));
            // f^a(gamma) = f^(a+d)(gamma) holds exactly when a >= m and n | d,
            // which pins (m, n) as the simultaneous minimum
            for (int a = 0; a <= m + 2; ++a) {
                for (int d = 1; d <= 2 * n + 1; ++d) {
                    bool expect = a >= m && d % n == 0;
                    CHECK((seq[static_cast<std::size_t>(a)] ==
                           seq[static_cast<std::size_t>(a + d)]) == expect);
                }
            }
            // orbit points are the value sequence
            for (int i = 1; i <= prof.size(); ++i)
                CHECK(prof.orbit()[static_cast<std::size_t>(i - 1)] ==
                      seq[static_cast<std::size_t>(i)]);
            // tail length 1 cannot occur: the critical value's only preimage
            // is the critical point, so a periodic b_1 forces a periodic gamma
            CHECK(prof.m() != 1);
        });
    }
}

TEST_CASE("orbit values cross-checked through polynomial iterates (p <= 7)") {
    for (std::uint64_t p : {3ull, 5ull, 7ull}) {
        FieldSpec F = FieldSpec::prime(p);
        for_each_monic_quadratic(F, [&](const MonicQuadratic& f) {
            OrbitProfile prof = orbit_profile(f);
            for (int j = 1; j <= std::min(prof.size(), 6); ++j)
                CHECK(eval_code(f.iterate(static_cast<unsigned>(j)), f.gamma_code()) ==
                      prof.point(j));
        });
    }
}

TEST_CASE("cyclic orbit positions") {
    FieldSpec F5 = FieldSpec::prime(5);
    OrbitProfile prof = orbit_profile(MonicQuadratic(F5, 0, 2));  // (2,2), orbit [2,1,3]
    CHECK(prof.position(1) == 1);
    CHECK(prof.position(3) == 3);
    CHECK(prof.position(4) == 2);  // b_4 = b_2
    CHECK(prof.position(5) == 3);
    CHECK(prof.position(6) == 2);
    OrbitProfile fixed = orbit_profile(MonicQuadratic(F5, 3, 2));  // (0,1)
    CHECK(fixed.position(7) == 1);
}

TEST_CASE("ftype basics") {
    FieldSpec F5 = FieldSpec::prime(5);
    OrbitProfile prof = orbit_profile(MonicQuadratic(F5, 3, 2));  // (0,1), orbit [1]
    CHECK(ftype(Poly::x(F5), prof).letters == "s");  // g(1) = 1 square

    // z branch: a linear factor vanishing on the orbit is degenerate
    Poly gz = Poly::parse(F5, "4,1");  // x - 1
    FType tz = ftype(gz, prof);
    CHECK(tz.letters == "z");
    CHECK(tz.degenerate);

    CHECK_THROWS_AS(ftype(scale(Poly::x(F5), 2), prof), std::invalid_argument);  // non-monic
    CHECK_THROWS_AS(ftype(Poly::one(F5), prof), std::invalid_argument);          // constant
}

TEST_CASE("shift action") {
    FieldSpec F7 = FieldSpec::prime(7);
    OrbitProfile p31 = orbit_profile(MonicQuadratic(F7, 0, 1));  // (3,1)
    CHECK(shift_type(FType{"nns", false}, p31).letters == "nss");
    CHECK(shift_type(FType{"sss", false}, p31).letters == "sss");
    CHECK(shift_type(FType{"snn", false}, p31).letters == "nnn");

    FieldSpec F5 = FieldSpec::prime(5);
    OrbitProfile p22 = orbit_profile(MonicQuadratic(F5, 0, 2));  // (2,2)
    CHECK(shift_type(FType{"snn", false}, p22).letters == "nnn");

    // m = 0 is a pure rotation: find an orbit-type (0,2) quadratic
    bool found = false;
    for (std::uint64_t p : {3ull, 5ull, 7ull, 11ull, 13ull}) {
        FieldSpec F = FieldSpec::prime(p);
        for_each_monic_quadratic(F, [&](const MonicQuadratic& f) {
            if (found) return;
            OrbitProfile prof = orbit_profile(f);
            if (prof.m() == 0 && prof.n() == 2) {
                CHECK(shift_type(FType{"sn", false}, prof).letters == "ns");
                found = true;
            }
        });
        if (found) break;
    }
    CHECK(found);

    CHECK_THROWS_AS(shift_type(FType{"zns", true}, p31), std::invalid_argument);
    CHECK_THROWS_AS(shift_type(FType{"ss", false}, p31), std::invalid_argument);
}

TEST_CASE("allowability condition") {
    FieldSpec F7 = FieldSpec::prime(7);
    OrbitProfile p31 = orbit_profile(MonicQuadratic(F7, 0, 1));  // (3,1): d2*d3 = a3
    CHECK(allowable(FType{"sss", false}, FType{"nss", false}, p31));
    CHECK_FALSE(allowable(FType{"sss", false}, FType{"ssn", false}, p31));
    CHECK(allowable(FType{"sss", false}, FType{"snn", false}, p31));
    CHECK(allowable(FType{"sss", false}, FType{"nnn", false}, p31));
    CHECK_FALSE(allowable(FType{"sss", false}, FType{"sns", false}, p31));
    CHECK_THROWS_AS(allowable(FType{"nss", false}, FType{"sss", false}, p31),
                    std::invalid_argument);

    // m = 0: everything goes
    FieldSpec F3 = FieldSpec::prime(3);
    bool found = false;
    for_each_monic_quadratic(F3, [&](const MonicQuadratic& f) {
        if (found) return;
        OrbitProfile prof = orbit_profile(f);
        if (prof.m() == 0 && prof.n() == 2) {
            CHECK(allowable(FType{"sn", false}, FType{"nn", false}, prof));
            CHECK(allowable(FType{"ss", false}, FType{"sn", false}, prof));
            found = true;
        }
    });
    CHECK(found);
}

TEST_CASE("immediate descendants follow the one-step rules") {
    // exhaustive small census: n-led even g composes irreducibly, s-led even g
    // splits into two factors of equal degree
    for (std::uint64_t p : {3ull, 5ull, 7ull}) {
        FieldSpec F = FieldSpec::prime(p);
        std::vector<Poly> seeds;
        for (const Poly& g : oracles::all_monic(F, 2))
            if (oracles::slow_irreducible(g)) seeds.push_back(g);
        long splits = 0, straights = 0;
        for_each_monic_quadratic(F, [&](const MonicQuadratic& f) {
            OrbitProfile prof = orbit_profile(f);
            for (const Poly& g : seeds) {
                FType t = ftype(g, prof);
                if (t.degenerate) continue;
                auto desc = immediate_descendants(g, prof, 0);
                if (t.first() == 'n') {
                    ++straights;
                    REQUIRE(desc.size() == 1);
                    CHECK(desc[0].factor.degree() == 2 * g.degree());
                    CHECK(desc[0].type.letters == shift_type(t, prof).letters);
                } else {
                    ++splits;
                    REQUIRE(desc.size() == 2);
                    CHECK(desc[0].factor.degree() == g.degree());
                    CHECK(desc[1].factor.degree() == g.degree());
                }
            }
        });
        CHECK(splits > 0);
        CHECK(straights > 0);
    }
}

TEST_CASE("immediate descendants of linear seeds match brute-force factoring") {
    FieldSpec F5 = FieldSpec::prime(5);
    for_each_monic_quadratic(F5, [&](const MonicQuadratic& f) {
        OrbitProfile prof = orbit_profile(f);
        for (std::uint64_t beta = 0; beta < 5; ++beta) {
            Poly H(F5, {F5.neg(beta), 1});  // x - beta
            FType t = ftype(H, prof);
            if (t.degenerate) continue;
            auto desc = immediate_descendants(H, prof, 0);
            auto slow = oracles::slow_factor(compose(H, f.to_poly()));
            std::size_t slow_total = 0;
            for (const auto& [part, mult] : slow.parts) slow_total += mult;
            CHECK(desc.size() == slow_total);
            std::size_t di = 0;
            for (const auto& [part, mult] : slow.parts)
                for (int i = 0; i < mult; ++i) CHECK(desc[di++].factor == part);
        }
    });
}

TEST_CASE("transition chains") {
    FieldSpec F7 = FieldSpec::prime(7);
    MonicQuadratic f(F7, 0, 1);
    OrbitProfile prof = orbit_profile(f);

    // depth 0: a single level holding the seed itself
    Poly g = Poly::parse(F7, "1,0,1");  // x^2 + 1 as a seed polynomial
    if (is_irreducible(g)) {
        TransitionRecord rec = transition_chain(g, prof, 0, 0);
        CHECK(rec.levels.size() == 1);
        CHECK(rec.steps() == 0);
    }

    // nn-led seeds stay irreducible for two steps: level sizes 1, 1, 1
    bool found_nn = false;
    for (const Poly& seed : oracles::all_monic(F7, 2)) {
        if (!oracles::slow_irreducible(seed)) continue;
        FType t = ftype(seed, prof);
        if (t.degenerate || !t.starts_with("nn")) continue;
        TransitionRecord rec = transition_chain(seed, prof, 2, 0);
        REQUIRE(rec.levels.size() == 3);
        CHECK(rec.levels[0].size() == 1);
        CHECK(rec.levels[1].size() == 1);
        CHECK(rec.levels[2].size() == 1);
        found_nn = true;
        break;
    }
    CHECK(found_nn);

    // degenerate seeds truncate with a marker
    Poly gz(F7, {F7.neg(prof.point(1)), 1});
    TransitionRecord recz = transition_chain(gz, prof, 3, 0);
    CHECK(recz.degenerate);
    CHECK(recz.truncated_at == 0);
    CHECK(recz.levels.size() == 1);
}

TEST_CASE("chain levels partition the direct factorizations") {
    for (std::uint64_t p : {5ull, 7ull}) {
        FieldSpec F = FieldSpec::prime(p);
        std::vector<Poly> seeds;
        for (const Poly& g : oracles::all_monic(F, 2))
            if (is_irreducible(g)) seeds.push_back(g);
        int f_checked = 0;
        for_each_monic_quadratic(F, [&](const MonicQuadratic& f) {
            if (f.a_code() % 2 == 1) return;  // thin the census for speed
            OrbitProfile prof = orbit_profile(f);
            for (const Poly& g : seeds) {
                if (ftype(g, prof).degenerate) continue;
                TransitionRecord rec = transition_chain(g, prof, 3, 0);
                for (int i = 0; i <= 3; ++i) {
                    Factorization direct = factor(compose(g, f.iterate(static_cast<unsigned>(i))), 0);
                    std::vector<Poly> expect;
                    for (const auto& [part, mult] : direct.parts)
                        for (int j = 0; j < mult; ++j) expect.push_back(part);
                    REQUIRE(rec.levels[static_cast<std::size_t>(i)].size() == expect.size());
                    for (std::size_t e = 0; e < expect.size(); ++e)
                        CHECK(rec.levels[static_cast<std::size_t>(i)][e].factor == expect[e]);
                }
            }
            ++f_checked;
        });
        CHECK(f_checked > 0);
    }
}

TEST_CASE("signatures use the canonical encoding") {
    FieldSpec F7 = FieldSpec::prime(7);
    OrbitProfile prof = orbit_profile(MonicQuadratic(F7, 0, 1));
    for (const Poly& seed : oracles::all_monic(F7, 2)) {
        if (!is_irreducible(seed)) continue;
        FType t = ftype(seed, prof);
        if (t.degenerate || t.first() != 's') continue;
        TransitionRecord rec = transition_chain(seed, prof, 1, 0);
        std::string sig = rec.signature();
        CHECK(sig.find("→") != std::string::npos);
        auto types = rec.level_type_strings(1);
        CHECK(types.size() == 2);
        CHECK(std::is_sorted(types.begin(), types.end()));
        CHECK(sig == t.letters + "→" + types[0] + "/" + types[1]);
        return;
    }
    FAIL("no s-led seed found");
}

TEST_CASE("every irreducible factor of f^i has even degree (irreducible f, i <= 6)") {
    for (std::uint64_t p : {3ull, 5ull, 7ull, 11ull, 13ull}) {
        FieldSpec F = FieldSpec::prime(p);
        long checked = 0;
        for_each_monic_quadratic(F, [&](const MonicQuadratic& f) {
            if (!is_irreducible(f.to_poly())) return;
            OrbitProfile prof = orbit_profile(f);
            FType t = ftype(f.to_poly(), prof);
            REQUIRE_FALSE(t.degenerate);  // irreducible f cannot vanish on its orbit
            TransitionRecord rec = transition_chain(f.to_poly(), prof, 5, 0);
            CHECK_FALSE(rec.degenerate);
            for (const auto& level : rec.levels)
                for (const auto& e : level) {
                    CHECK(e.factor.degree() % 2 == 0);
                    ++checked;
                }
        });
        CHECK(checked > 0);
    }
}

TEST_CASE("enumeration streams") {
    FieldSpec F3 = FieldSpec::prime(3);
    CHECK(enumerate_quadratics(F3).size() == 9);
    FieldSpec F5 = FieldSpec::prime(5);
    CHECK(enumerate_quadratics(F5).size() == 25);

    FieldSpec F7 = FieldSpec::prime(7);
    auto quads = enumerate_quadratics(F7);
    auto has = [&](std::uint64_t a, std::uint64_t b) {
        return std::any_of(quads.begin(), quads.end(), [&](const MonicQuadratic& f) {
            return f.a_code() == a && f.b_code() == b;
        });
    };
    CHECK(has(4, 6));  // x^2+4x+6
    CHECK(has(0, 1));  // x^2+1

    CHECK(enumerate_irreducibles(F3, 2).size() == 3);
    CHECK(enumerate_irreducibles(F7, 2).size() == 21);
    CHECK(enumerate_irreducibles(F5, 1).size() == 5);
    auto irr = enumerate_irreducibles(F7, 2);
    CHECK(std::is_sorted(irr.begin(), irr.end(), poly_less));
    for (const Poly& g : irr) CHECK(oracles::slow_irreducible(g));
}
