#include <doctest.h>

#include <random>
#include <stdexcept>

#include "fqdyn/poly.hpp"
#include "oracles.hpp"

using namespace fqdyn;

TEST_CASE("poly construction and normalization") {
    FieldSpec F7 = FieldSpec::prime(7);
    Poly a(F7, {1, 2, 0, 0});
    CHECK(a.degree() == 1);
    CHECK(Poly(F7).degree() == kNegInfinityDegree);
    CHECK(Poly(F7).is_zero());
    CHECK(Poly::x(F7).degree() == 1);
    CHECK_THROWS_AS(Poly(F7, {9}), std::invalid_argument);
}

TEST_CASE("text format round-trip") {
    FieldSpec F7 = FieldSpec::prime(7);
    Poly g = Poly::parse(F7, "6,4,1");
    CHECK(g.degree() == 2);
    CHECK(g.coeff_code(0) == 6);
    CHECK(g.coeff_code(1) == 4);
    CHECK(g.to_string() == "6,4,1");
    CHECK_THROWS_AS(Poly::parse(F7, "7,1"), std::invalid_argument);
    CHECK_THROWS_AS(Poly::parse(F7, "1,x"), std::invalid_argument);
    CHECK_THROWS_AS(Poly::parse(F7, ""), std::invalid_argument);

    std::mt19937_64 rng(11);
    for (int i = 0; i < 200; ++i) {
        Poly r = oracles::random_poly(F7, 6, rng);
        if (r.is_zero()) continue;
        CHECK(Poly::parse(F7, r.to_string()) == r);
    }
}

TEST_CASE("ring operations match the worked examples") {
    FieldSpec F7 = FieldSpec::prime(7);
    Poly xp1 = Poly::parse(F7, "1,1");
    Poly xm1 = Poly::parse(F7, "6,1");
    CHECK(xp1 * xm1 == Poly::parse(F7, "6,0,1"));  // x^2 - 1 = x^2 + 6
    auto [q, r] = divmod(Poly::parse(F7, "6,0,1"), xp1);
    CHECK(q == Poly::parse(F7, "6,1"));
    CHECK(r.is_zero());
    Poly a = Poly::parse(F7, "3,1,4");
    CHECK(a + Poly(F7) == a);
    CHECK_THROWS_AS(divmod(a, Poly(F7)), std::domain_error);

    FieldSpec F5 = FieldSpec::prime(5);
    CHECK_THROWS_AS(a + Poly::x(F5), std::invalid_argument);
}

TEST_CASE("divmod reconstruction on random inputs") {
    std::mt19937_64 rng(17);
    for (std::uint64_t p : {3ull, 7ull, 13ull}) {
        FieldSpec F = FieldSpec::prime(p);
        for (int i = 0; i < 300; ++i) {
            Poly a = oracles::random_poly(F, 9, rng);
            Poly b = oracles::random_poly(F, 5, rng);
            if (b.is_zero()) continue;
            auto [q, r] = divmod(a, b);
            CHECK(b * q + r == a);
            CHECK(r.degree() < b.degree());
        }
    }
}

TEST_CASE("gcd examples and constructed oracle") {
    FieldSpec F5 = FieldSpec::prime(5);
    CHECK(gcd(Poly::parse(F5, "4,0,1"), Poly::parse(F5, "4,1")) == Poly::parse(F5, "4,1"));
    Poly one = Poly::one(F5);
    CHECK(gcd(Poly::parse(F5, "3,2,1"), one) == one);
    CHECK_THROWS_AS(gcd(Poly(F5), Poly(F5)), std::domain_error);

    // gcd(g*h, g*w) = g for distinct irreducible h, w coprime to g
    std::mt19937_64 rng(23);
    std::vector<Poly> irr;
    for (const Poly& c : oracles::all_monic(F5, 2))
        if (oracles::slow_irreducible(c)) irr.push_back(c);
    REQUIRE(irr.size() >= 2);
    for (int i = 0; i < 100; ++i) {
        Poly g = oracles::random_monic(F5, 3, rng);
        const Poly& h = irr[rng() % irr.size()];
        const Poly& w = irr[rng() % irr.size()];
        if (h == w) continue;
        if (divmod(g, h).second.is_zero() || divmod(g, w).second.is_zero()) continue;
        Poly d = gcd(g * h, g * w);
        CHECK(d == g);
        CHECK(divmod(g * h, d).second.is_zero());
        CHECK(divmod(g * w, d).second.is_zero());
    }
}

TEST_CASE("evaluation matches the worked example") {
    FieldSpec F7 = FieldSpec::prime(7);
    Poly g = Poly::parse(F7, "1,1,0,1");  // x^3 + x + 1
    CHECK(eval_code(g, 2) == 4);
    CHECK(eval_code(g, 4) == 6);
    CHECK(eval_code(g, 0) == g.coeff_code(0));
    CHECK(eval(g, FqElem(F7, 2)) == FqElem(F7, 4));
}

TEST_CASE("composition basics") {
    FieldSpec F7 = FieldSpec::prime(7);
    Poly f = Poly::parse(F7, "6,4,1");  // x^2 + 4x + 6
    Poly g = Poly::parse(F7, "1,1,0,1");
    CHECK(compose(Poly::x(F7), f) == f);
    CHECK(compose(g, Poly::x(F7)) == g);
    Poly gf = compose(g, f);
    CHECK(gf.degree() == 6);
    CHECK(eval_code(gf, 5) == 4);  // f(5) = 2, g(2) = 4
    CHECK(gf == oracles::slow_compose(g, f));
}

TEST_CASE("evaluation is a ring homomorphism (randomized)") {
    std::mt19937_64 rng(29);
    for (std::uint64_t p : {5ull, 7ull, 13ull}) {
        FieldSpec F = FieldSpec::prime(p);
        for (int i = 0; i < 500; ++i) {
            Poly a = oracles::random_poly(F, 5, rng);
            Poly b = oracles::random_poly(F, 5, rng);
            std::uint64_t x = rng() % p;
            CHECK(eval_code(a * b, x) == F.mul(eval_code(a, x), eval_code(b, x)));
            CHECK(eval_code(a + b, x) == F.add(eval_code(a, x), eval_code(b, x)));
            CHECK(eval_code(compose(a, b), x) == eval_code(a, eval_code(b, x)));
            CHECK(compose(a, b) == oracles::slow_compose(a, b));
        }
    }
}

TEST_CASE("monic quadratic critical data") {
    FieldSpec F7 = FieldSpec::prime(7);
    MonicQuadratic f(F7, 4, 6);  // x^2 + 4x + 6
    CHECK(f.gamma_code() == 5);  // gamma = -4/2 = 5 mod 7
    // f(x) = (x - gamma)^2 + gamma + c must hold identically
    const std::uint64_t off = F7.add(f.gamma_code(), f.c_code());
    for (std::uint64_t x = 0; x < 7; ++x) {
        std::uint64_t lhs = f.eval_code(x);
        std::uint64_t d = F7.sub(x, f.gamma_code());
        CHECK(lhs == F7.add(F7.mul(d, d), off));
    }
    CHECK(f.to_poly() == Poly::parse(F7, "6,4,1"));
}

TEST_CASE("iterates") {
    FieldSpec F7 = FieldSpec::prime(7);
    MonicQuadratic f(F7, 0, 1);  // x^2 + 1
    CHECK(f.iterate(0) == Poly::x(F7));
    CHECK(f.iterate(1) == Poly::parse(F7, "1,0,1"));
    CHECK(f.iterate(2) == Poly::parse(F7, "2,0,2,0,1"));  // (x^2+1)^2 + 1

    // iterate(m + n) = iterate(m) o iterate(n), all monic quadratics mod 5
    FieldSpec F5 = FieldSpec::prime(5);
    for (std::uint64_t a = 0; a < 5; ++a) {
        for (std::uint64_t b = 0; b < 5; ++b) {
            MonicQuadratic h(F5, a, b);
            for (unsigned m = 0; m <= 5; ++m) {
                for (unsigned n = 0; m + n <= 5; ++n) {
                    CHECK(h.iterate(m + n) == compose(h.iterate(m), h.iterate(n)));
                }
            }
        }
    }
}

TEST_CASE("degree cap guards") {
    FieldSpec F5 = FieldSpec::prime(5);
    MonicQuadratic f(F5, 0, 1);
    CHECK_THROWS_AS(f.iterate(10), DegreeCapError);  // 1024 > 512
    CHECK_NOTHROW(f.iterate(9));
    Poly big = f.iterate(5);  // degree 32
    CHECK_THROWS_AS(compose(big, big, 512), DegreeCapError);
    CHECK_THROWS_AS(f.iterate(4, 8), DegreeCapError);
}

TEST_CASE("derivative") {
    FieldSpec F7 = FieldSpec::prime(7);
    CHECK(derivative(Poly::parse(F7, "6,4,1")) == Poly::parse(F7, "4,2"));
    // d/dx x^7 = 0 in characteristic 7
    CHECK(derivative(Poly(F7, {0, 0, 0, 0, 0, 0, 0, 1})).is_zero());
    CHECK(derivative(Poly::parse(F7, "3")).is_zero());
}

TEST_CASE("squarefree detection") {
    FieldSpec F3 = FieldSpec::prime(3);
    CHECK(is_squarefree(Poly::parse(F3, "1,0,1")));
    FieldSpec F5 = FieldSpec::prime(5);
    Poly xm1 = Poly::parse(F5, "4,1");
    CHECK_FALSE(is_squarefree(xm1 * xm1));
    FieldSpec F7 = FieldSpec::prime(7);
    Poly x7mx(F7, {0, 6, 0, 0, 0, 0, 0, 1});  // x^7 - x
    // oracle: x^7 - x has all 7 field elements as roots, all distinct
    int roots = 0;
    for (std::uint64_t x = 0; x < 7; ++x)
        if (eval_code(x7mx, x) == 0) ++roots;
    CHECK(roots == 7);
    CHECK(is_squarefree(x7mx));
    CHECK_THROWS_AS(is_squarefree(Poly(F7)), std::domain_error);
}

TEST_CASE("canonical ordering") {
    FieldSpec F7 = FieldSpec::prime(7);
    CHECK(poly_less(Poly::parse(F7, "1,1"), Poly::parse(F7, "6,1")));
    CHECK(poly_less(Poly::parse(F7, "6,1"), Poly::parse(F7, "0,0,1")));
    CHECK(poly_less(Poly::parse(F7, "5,2,1"), Poly::parse(F7, "1,3,1")));
    CHECK_FALSE(poly_less(Poly::parse(F7, "1,1"), Poly::parse(F7, "1,1")));
}
