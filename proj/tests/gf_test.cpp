// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <random>

#include "breuil/gf.hpp"

using namespace breuil;

TEST_CASE("smallest irreducible moduli") {
    const FieldParams* f9 = FieldParams::get(3, 2);
    CHECK(f9->modulus == std::vector<int16_t>{1, 0, 1}); // x^2 + 1
    const FieldParams* f25 = FieldParams::get(5, 2);
    CHECK(f25->modulus == std::vector<int16_t>{2, 0, 1}); // x^2 + 2
    CHECK_THROWS_AS(FieldParams::get(4, 2), InvalidParams);
    // (x+1)^2 over GF(3) is rejected
    CHECK_THROWS_AS(FieldParams::get(3, std::vector<int64_t>{1, 2, 1}), InvalidParams);
}

TEST_CASE("field axioms, spot checks") {
    const FieldParams* k = FieldParams::get(5, 2);
    std::mt19937_64 rng(7);
    auto rnd = [&] { return FieldElem::decode(k, static_cast<int64_t>(rng() % 25)); };
    for (int it = 0; it < 200; ++it) {
        FieldElem a = rnd(), b = rnd(), c = rnd();
        CHECK(a + b == b + a);
        CHECK((a + b) + c == a + (b + c));
        CHECK(a * b == b * a);
        CHECK((a * b) * c == a * (b * c));
        CHECK(a * (b + c) == a * b + a * c);
        if (!a.is_zero()) CHECK(a * a.inverse() == FieldElem::one(k));
    }
}

TEST_CASE("frobenius_iter") {
    // epsilon in GF(9) with epsilon^2 = -1: frobenius sends it to -epsilon
    const FieldParams* f9 = FieldParams::get(3, 2);
    FieldElem eps = FieldElem::from_coeffs(f9, {0, 1}); // x, with x^2 = -1
    CHECK(eps * eps == -FieldElem::one(f9));
    CHECK(frobenius_iter(eps, 1) == -eps);
    // prime subfield fixed by any power
    for (int64_t v = 0; v < 3; ++v) {
        FieldElem x(f9, v);
        CHECK(frobenius_iter(x, 1) == x);
        CHECK(frobenius_iter(x, 5) == x);
    }
    // order of Frobenius
    std::mt19937_64 rng(11);
    for (int it = 0; it < 20; ++it) {
        FieldElem x = FieldElem::decode(f9, static_cast<int64_t>(rng() % 9));
        CHECK(frobenius_iter(x, 2) == x);
    }
}

TEST_CASE("frobenius additivity") {
    for (int64_t p : {3, 5}) {
        const FieldParams* k = FieldParams::get(p, 2);
        std::mt19937_64 rng(13);
        for (int it = 0; it < 100; ++it) {
            FieldElem x = FieldElem::decode(k, static_cast<int64_t>(rng() % static_cast<uint64_t>(k->card())));
            FieldElem y = FieldElem::decode(k, static_cast<int64_t>(rng() % static_cast<uint64_t>(k->card())));
            CHECK((x + y).pow(p) == x.pow(p) + y.pow(p));
        }
    }
}

TEST_CASE("trace examples") {
    const FieldParams* f9 = FieldParams::get(3, 2);
    CHECK(trace(FieldElem::zero(f9), 2).is_zero());
    CHECK(trace(FieldElem::one(f9), 2) == FieldElem(f9, 2));
    FieldElem eps = FieldElem::from_coeffs(f9, {0, 1});
    CHECK(trace(eps, 2).is_zero()); // eps + eps^3 = eps - eps

    // not in GF(3): trace at d=1 must be rejected
    CHECK_THROWS_AS(trace(eps, 1), NotInSubfield);
}

TEST_CASE("trace linearity and surjectivity") {
    for (int64_t p : {3, 5}) {
        for (int d = 1; d <= 3; ++d) {
            const FieldParams* k = FieldParams::get(p, d);
            bool hit_nonzero = false;
            for (int64_t i = 0; i < k->card(); ++i) {
                FieldElem x = FieldElem::decode(k, i);
                FieldElem t = trace(x, d);
                CHECK(t.in_prime_field());
                if (!t.is_zero()) hit_nonzero = true;
            }
            CHECK(hit_nonzero);
            // GF(p)-linearity on a few pairs
            std::mt19937_64 rng(17);
            for (int it = 0; it < 30; ++it) {
                FieldElem x = FieldElem::decode(k, static_cast<int64_t>(rng() % static_cast<uint64_t>(k->card())));
                FieldElem y = FieldElem::decode(k, static_cast<int64_t>(rng() % static_cast<uint64_t>(k->card())));
                int64_t lam = static_cast<int64_t>(rng() % static_cast<uint64_t>(p));
                CHECK(trace(x + y, d) == trace(x, d) + trace(y, d));
                CHECK(trace(x.scaled(lam), d) == trace(x, d).scaled(lam));
            }
        }
    }
}

TEST_CASE("twisted_roots") {
    SUBCASE("parity 0 gives the subfield") {
        const FieldParams* amb = FieldParams::get(3, 2);
        auto roots = twisted_roots(amb, 1, 0);
        CHECK(roots.size() == 3);
        for (const auto& x : roots) CHECK(frobenius_iter(x, 1) == x);
    }
    SUBCASE("p=3 d=1 parity 1: zero and the square roots of -1") {
        const FieldParams* amb = FieldParams::get(3, 2);
        auto roots = twisted_roots(amb, 1, 1);
        CHECK(roots.size() == 3);
        int nonzero = 0;
        for (const auto& x : roots) {
            if (x.is_zero()) continue;
            ++nonzero;
            CHECK(x * x == -FieldElem::one(amb));
        }
        CHECK(nonzero == 2);
    }
    SUBCASE("cardinality p^d over small grid") {
        for (int64_t p : {3, 5}) {
            for (int64_t d = 1; d <= 2; ++d) {
                const FieldParams* amb = FieldParams::get(p, static_cast<int>(2 * d));
                for (int parity : {0, 1}) {
                    auto roots = twisted_roots(amb, d, parity);
                    CHECK(static_cast<int64_t>(roots.size()) ==
                          [&] { int64_t q = 1; for (int64_t i = 0; i < d; ++i) q *= p; return q; }());
                }
            }
        }
    }
    SUBCASE("ambient too small") {
        const FieldParams* amb = FieldParams::get(3, 2);
        CHECK_THROWS_AS(twisted_roots(amb, 2, 1), AmbientTooSmall);
    }
}

TEST_CASE("epsilon scan") {
    const FieldParams* amb = FieldParams::get(3, 2);
    FieldElem eps = find_epsilon(amb);
    CHECK(eps.pow(2) == -FieldElem::one(amb));
    // deterministic: first in encode order
    for (int64_t i = 1; i < eps.encode(); ++i)
        CHECK(FieldElem::decode(amb, i).pow(2) != -FieldElem::one(amb));
}

TEST_CASE("ambient field sizing") {
    const FieldParams* amb = ambient_field(5, {2, 4});
    CHECK(amb->m == 4);
    CHECK(subfield_elements(amb, 2).size() == 25);
}
