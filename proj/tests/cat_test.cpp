// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <algorithm>
#include <random>

#include "breuil/cat.hpp"

using namespace breuil;

namespace {

const RingParams* ring_p5e2r1() {
    return RingParams::get(FieldParams::get(5, 1), 2, 1, {-5, 0, 1});
}
const RingParams* ring_p5e1r2() {
    return RingParams::get(FieldParams::get(5, 1), 1, 2, {-5, 1});
}
const RingParams* ring_p3e1r1() {
    return RingParams::get(FieldParams::get(3, 1), 1, 1, {-3, 1});
}

Mat random_invertible(const FieldParams* k, int64_t d, std::mt19937_64& rng) {
    while (true) {
        Mat g(k, static_cast<size_t>(d), static_cast<size_t>(d));
        for (size_t i = 0; i < g.rows(); ++i)
            for (size_t j = 0; j < g.cols(); ++j)
                g.at(i, j) = FieldElem::decode(k, static_cast<int64_t>(rng() % static_cast<uint64_t>(k->card())));
        if (inverse(g)) return g;
    }
}

SimpleObject random_simple(const RingParams* ring, int64_t d, std::mt19937_64& rng, bool cyclic = false) {
    std::vector<int64_t> weights;
    for (int64_t i = 0; i < d; ++i)
        weights.push_back(static_cast<int64_t>(rng() % static_cast<uint64_t>(ring->e * ring->r + 1)));
    if (cyclic) return SimpleObject::cyclic_simple(ring, weights);
    SimpleObject s;
    s.ring = ring;
    s.d = d;
    s.weights = weights;
    s.G = random_invertible(ring->field, d, rng);
    s.cyclic = false;
    return s;
}

// change of coordinates by a constant invertible matrix; keeps validity
TildeModule conjugate(const TildeModule& m, const Mat& u) {
    Mat v = *inverse(u);
    auto apply = [&](const Mat& mat, const TVec& x) {
        TVec out = tvec_zero(m.ring, m.d);
        for (int64_t i = 0; i < m.d; ++i)
            for (int64_t j = 0; j < m.d; ++j) {
                const FieldElem& w = mat.at(static_cast<size_t>(i), static_cast<size_t>(j));
                if (!w.is_zero())
                    out[static_cast<size_t>(i)] = out[static_cast<size_t>(i)] + x[static_cast<size_t>(j)].scaled(w);
            }
        return out;
    };
    TildeModule out;
    out.ring = m.ring;
    out.d = m.d;
    for (const auto& g : m.fil_gens) out.fil_gens.push_back(apply(v, g));
    for (const auto& f : m.phi_fil_gens) out.phi_fil_gens.push_back(apply(v, f));
    for (int64_t k = 0; k < m.d; ++k) {
        TVec acc = tvec_zero(m.ring, m.d);
        for (int64_t j = 0; j < m.d; ++j) {
            FieldElem w = u.at(static_cast<size_t>(j), static_cast<size_t>(k)).frobenius(1);
            if (!w.is_zero())
                acc = tvec_add(acc, tvec_scale_field(m.phi_uer_basis[static_cast<size_t>(j)], w));
        }
        out.phi_uer_basis.push_back(apply(v, acc));
    }
    out.n_mat = v * m.n_mat * u;
    return out;
}

// append a redundant generator (a random combination of existing ones)
void append_redundant(TildeModule& m, std::mt19937_64& rng) {
    FilSolver solver(m);
    auto gens = fil_generators(m);
    TVec x = tvec_zero(m.ring, m.d);
    for (const auto& [g, phi] : gens) {
        int64_t t = static_cast<int64_t>(rng() % static_cast<uint64_t>(m.ring->p()));
        int64_t w = static_cast<int64_t>(rng() % static_cast<uint64_t>(m.ring->field->card()));
        x = tvec_add(x, tvec_scale(g, TildeSElem::monomial(m.ring, t, FieldElem::decode(m.ring->field, w))));
    }
    auto pres = solver.present(x);
    REQUIRE(pres.has_value());
    TVec img = apply_phi_r(m, *pres);
    m.fil_gens.push_back(x);
    m.phi_fil_gens.push_back(img);
}

TildeModule random_valid_module(const RingParams* ring, int64_t d, std::mt19937_64& rng) {
    TildeModule m = make_simple(random_simple(ring, d, rng));
    m = conjugate(m, random_invertible(ring->field, d, rng));
    if (rng() % 2) append_redundant(m, rng);
    return m;
}

// the handcrafted nonzero-N object: p=5 e=2 r=1, d=2, weights (0,2),
// N(e_1) = e_2, phi(e_1) = e_1, phi(u^2 e_2) = c_pi e_2
TildeModule nonzero_n_module() {
    const RingParams* R = ring_p5e2r1();
    TildeModule m;
    m.ring = R;
    m.d = 2;
    m.fil_gens.push_back(tvec_basis(R, 2, 0));
    m.fil_gens.push_back(tvec_scale(tvec_basis(R, 2, 1),
                                    TildeSElem::monomial(R, 2, FieldElem::one(R->field))));
    m.phi_fil_gens.push_back(tvec_basis(R, 2, 0));
    m.phi_fil_gens.push_back(tvec_scale_field(tvec_basis(R, 2, 1), R->c_pi()));
    m.phi_uer_basis.push_back(tvec_zero(R, 2));
    m.phi_uer_basis.push_back(m.phi_fil_gens[1]);
    m.n_mat = Mat(R->field, 2, 2);
    m.n_mat.at(1, 0) = FieldElem::one(R->field);
    return m;
}

} // namespace

TEST_CASE("make_simple and validate") {
    SUBCASE("cyclic example p5 e2 r1 d2 n=(1,2)") {
        const RingParams* R = ring_p5e2r1();
        TildeModule m = make_simple(SimpleObject::cyclic_simple(R, {1, 2}));
        Report rep = validate(m);
        CHECK(rep.all_pass());
        // phi_1(u e_1) = e_2
        TVec x = tvec_scale(tvec_basis(R, 2, 0), TildeSElem::monomial(R, 1, FieldElem::one(R->field)));
        CHECK(apply_phi_r(m, x) == tvec_basis(R, 2, 1));
        // phi_1(u^2 e_1) = phi(u) phi_1(u e_1) = 0
        TVec y = tvec_scale(tvec_basis(R, 2, 0), TildeSElem::monomial(R, 2, FieldElem::one(R->field)));
        CHECK(tvec_is_zero(apply_phi_r(m, y)));
        // phi_1(u^2 e_2) = e_1
        TVec z = tvec_scale(tvec_basis(R, 2, 1), TildeSElem::monomial(R, 2, FieldElem::one(R->field)));
        CHECK(apply_phi_r(m, z) == tvec_basis(R, 2, 0));
        CHECK(tvec_is_zero(apply_phi_r(m, tvec_zero(R, 2))));
    }
    SUBCASE("unit object r=0") {
        const RingParams* R = RingParams::get(FieldParams::get(3, 1), 1, 0, {-3, 1});
        SimpleObject s;
        s.ring = R;
        s.d = 1;
        s.weights = {0};
        s.G = Mat::identity(R->field, 1);
        s.cyclic = true;
        TildeModule m = make_simple(s);
        CHECK(validate(m).all_pass());
        CHECK(apply_phi_r(m, tvec_basis(R, 1, 0)) == tvec_basis(R, 1, 0));
    }
    SUBCASE("weight out of range") {
        const RingParams* R = ring_p5e2r1();
        SimpleObject s;
        s.ring = R;
        s.d = 1;
        s.weights = {3}; // er = 2
        s.G = Mat::identity(R->field, 1);
        CHECK_THROWS_AS(make_simple(s), WeightOutOfRange);
    }
    SUBCASE("singular G") {
        const RingParams* R = ring_p5e2r1();
        SimpleObject s;
        s.ring = R;
        s.d = 2;
        s.weights = {1, 1};
        s.G = Mat(R->field, 2, 2);
        CHECK_THROWS_AS(make_simple(s), SingularG);
    }
    SUBCASE("zero phi fails generation") {
        const RingParams* R = ring_p5e2r1();
        TildeModule m = make_simple(SimpleObject::cyclic_simple(R, {1, 2}));
        for (auto& col : m.phi_fil_gens) col = tvec_zero(R, 2);
        for (auto& col : m.phi_uer_basis) col = tvec_zero(R, 2);
        Report rep = validate(m);
        CHECK(!rep.all_pass());
        bool gen_failed = false;
        for (const auto& c : rep.checks)
            if (c.name == "phi_image_generates" && !c.pass) gen_failed = true;
        CHECK(gen_failed);
    }
    SUBCASE("minimal Fil (no listed generators)") {
        const RingParams* R = ring_p5e2r1();
        TildeModule m;
        m.ring = R;
        m.d = 2;
        m.n_mat = Mat(R->field, 2, 2);
        m.phi_uer_basis.push_back(tvec_basis(R, 2, 0));
        m.phi_uer_basis.push_back(tvec_basis(R, 2, 1));
        CHECK(validate(m).all_pass());
    }
    SUBCASE("handcrafted object with nonzero N") {
        TildeModule m = nonzero_n_module();
        CHECK(validate(m).all_pass());
        // breaking the twist constant must break the square
        TildeModule bad = m;
        bad.phi_fil_gens[1] = tvec_basis(m.ring, 2, 1);
        bad.phi_uer_basis[1] = bad.phi_fil_gens[1];
        Report rep = validate(bad);
        bool square_failed = false;
        for (const auto& c : rep.checks)
            if (c.name == "phi_n_square" && !c.pass) square_failed = true;
        CHECK(square_failed);
    }
}

TEST_CASE("apply_phi_r presentation independence") {
    std::mt19937_64 rng(101);
    for (const RingParams* R : {ring_p5e2r1(), ring_p5e1r2(), ring_p3e1r1()}) {
        for (int64_t d = 1; d <= 3; ++d) {
            for (int rep = 0; rep < 10; ++rep) {
                TildeModule m = random_valid_module(R, d, rng);
                REQUIRE(validate(m).all_pass());
                FilSolver solver(m);
                auto gens = fil_generators(m);
                FilPresentation p1;
                p1.gen_coeffs.assign(m.fil_gens.size(), TildeSElem::zero(R));
                p1.uer_coeffs.assign(static_cast<size_t>(d), TildeSElem::zero(R));
                TVec x = tvec_zero(R, d);
                for (size_t j = 0; j < gens.size(); ++j) {
                    TildeSElem s = TildeSElem::monomial(
                        R, static_cast<int64_t>(rng() % static_cast<uint64_t>(R->p())),
                        FieldElem::decode(R->field, static_cast<int64_t>(rng() % static_cast<uint64_t>(R->field->card()))));
                    if (j < m.fil_gens.size())
                        p1.gen_coeffs[j] = s;
                    else
                        p1.uer_coeffs[j - m.fil_gens.size()] = s;
                    x = tvec_add(x, tvec_scale(gens[j].first, s));
                }
                auto p2 = solver.present(x);
                REQUIRE(p2.has_value());
                CHECK(apply_phi_r(m, p1) == apply_phi_r(m, *p2));
            }
        }
    }
}

TEST_CASE("adapted_basis") {
    SUBCASE("minimal Fil gives all weights er") {
        const RingParams* R = ring_p5e2r1();
        TildeModule m;
        m.ring = R;
        m.d = 2;
        m.n_mat = Mat(R->field, 2, 2);
        m.phi_uer_basis.push_back(tvec_basis(R, 2, 0));
        m.phi_uer_basis.push_back(tvec_basis(R, 2, 1));
        AdaptedBasis ab = adapted_basis(m);
        CHECK(ab.weights == std::vector<int64_t>{2, 2});
    }
    SUBCASE("full Fil gives all weights 0") {
        const RingParams* R = ring_p5e2r1();
        TildeModule m = make_simple(SimpleObject::cyclic_simple(R, {0, 0}));
        AdaptedBasis ab = adapted_basis(m);
        CHECK(ab.weights == std::vector<int64_t>{0, 0});
    }
    SUBCASE("worked example p=5 e=1 r=2 d=2") {
        const RingParams* R = ring_p5e1r2();
        TildeModule m;
        m.ring = R;
        m.d = 2;
        m.n_mat = Mat(R->field, 2, 2);
        // generators (u, 0) and (1, u^2)
        TVec g1 = tvec_zero(R, 2), g2 = tvec_zero(R, 2);
        g1[0] = TildeSElem::monomial(R, 1, FieldElem::one(R->field));
        g2[0] = TildeSElem::one(R);
        g2[1] = TildeSElem::monomial(R, 2, FieldElem::one(R->field));
        m.fil_gens = {g1, g2};
        m.phi_fil_gens = {tvec_zero(R, 2), tvec_zero(R, 2)}; // phi data irrelevant here
        m.phi_uer_basis = {tvec_zero(R, 2), tvec_zero(R, 2)};
        AdaptedBasis ab = adapted_basis(m);
        CHECK(ab.weights == std::vector<int64_t>{0, 2});
        // two-way span comparison against the claimed decomposition
        Mat before = FilSolver(m).matrix();
        TildeModule after;
        after.ring = R;
        after.d = 2;
        after.n_mat = Mat(R->field, 2, 2);
        for (size_t i = 0; i < 2; ++i) {
            after.fil_gens.push_back(tvec_scale(
                ab.basis_cols[i], TildeSElem::monomial(R, ab.weights[i], FieldElem::one(R->field))));
            after.phi_fil_gens.push_back(tvec_zero(R, 2));
            after.phi_uer_basis.push_back(tvec_zero(R, 2));
        }
        Mat reformed = FilSolver(after).matrix();
        Mat joint(R->field, before.rows(), before.cols() + reformed.cols());
        for (size_t i = 0; i < before.rows(); ++i) {
            for (size_t j = 0; j < before.cols(); ++j) joint.at(i, j) = before.at(i, j);
            for (size_t j = 0; j < reformed.cols(); ++j) joint.at(i, before.cols() + j) = reformed.at(i, j);
        }
        CHECK(rank(before) == rank(joint));
        CHECK(rank(reformed) == rank(joint));
    }
    SUBCASE("simple objects recover constructor weights") {
        std::mt19937_64 rng(202);
        for (const RingParams* R : {ring_p5e2r1(), ring_p5e1r2()}) {
            for (int64_t d = 1; d <= 3; ++d) {
                for (int it = 0; it < 10; ++it) {
                    SimpleObject s = random_simple(R, d, rng);
                    TildeModule m = conjugate(make_simple(s), random_invertible(R->field, d, rng));
                    AdaptedBasis ab = adapted_basis(m);
                    std::vector<int64_t> expect = s.weights;
                    std::sort(expect.begin(), expect.end());
                    CHECK(ab.weights == expect);
                }
            }
        }
    }
    SUBCASE("rank relation dim_k(Fil / u^e Fil) = d e") {
        std::mt19937_64 rng(303);
        for (const RingParams* R : {ring_p5e2r1(), ring_p5e1r2()}) {
            for (int64_t d = 1; d <= 3; ++d) {
                TildeModule m = random_valid_module(R, d, rng);
                Mat fil = FilSolver(m).matrix();
                Mat shifted(R->field, fil.rows(), fil.cols());
                const int64_t p = R->p(), e = R->e;
                for (size_t c = 0; c < fil.cols(); ++c)
                    for (int64_t kk = 0; kk < d; ++kk)
                        for (int64_t t = 0; t + e < p; ++t)
                            shifted.at(static_cast<size_t>(kk * p + t + e), c) =
                                fil.at(static_cast<size_t>(kk * p + t), c);
                CHECK(rank(fil) - rank(shifted) == static_cast<size_t>(d * e));
            }
        }
    }
}

TEST_CASE("admissible filtration") {
    const RingParams* R = ring_p5e1r2();
    std::mt19937_64 rng(404);
    SimpleObject s = random_simple(R, 2, rng);
    TildeModule m = make_simple(s);
    REQUIRE(validate(m).all_pass());

    SUBCASE("t = r is Fil^r, t = 0 is everything") {
        AdmissibleFiltration fr = admissible_filtration(m, R->r);
        FilSolver solver(m);
        CHECK(fr.basis.size() == solver.dim());
        for (const auto& v : fr.basis) CHECK(solver.contains(v));
        AdmissibleFiltration f0 = admissible_filtration(m, 0);
        CHECK(f0.basis.size() == static_cast<size_t>(m.d * R->p()));
    }
    SUBCASE("weights shift by e(r-t) on simples") {
        for (int64_t t = 0; t <= R->r; ++t) {
            AdmissibleFiltration ft = admissible_filtration(m, t);
            for (int64_t i = 0; i < m.d; ++i) {
                int64_t cut = std::max<int64_t>(0, s.weights[static_cast<size_t>(i)] - R->e * (R->r - t));
                for (int64_t deg = 0; deg < R->p(); ++deg) {
                    TVec v = tvec_scale(tvec_basis(R, m.d, i),
                                        TildeSElem::monomial(R, deg, FieldElem::one(R->field)));
                    CHECK(ft.contains(v) == (deg >= cut));
                }
            }
        }
    }
    SUBCASE("filtration axioms on random simples") {
        for (int it = 0; it < 5; ++it) {
            TildeModule mm = make_simple(random_simple(R, 2, rng));
            std::vector<AdmissibleFiltration> fil;
            for (int64_t t = 0; t <= R->r; ++t) fil.push_back(admissible_filtration(mm, t));
            for (int64_t t = 0; t <= R->r; ++t) {
                for (const auto& v : fil[static_cast<size_t>(t)].basis) {
                    for (int64_t tp = t; tp <= R->r; ++tp) {
                        TVec shifted = tvec_scale(
                            v, TildeSElem::monomial(mm.ring, mm.ring->e * (tp - t), FieldElem::one(R->field)));
                        CHECK(fil[static_cast<size_t>(tp)].contains(shifted));
                    }
                    if (t >= 1) CHECK(fil[static_cast<size_t>(t - 1)].contains(module_N(mm, v)));
                }
            }
        }
    }
    SUBCASE("phi_t at t=r matches phi_r") {
        AdmissibleFiltration fr = admissible_filtration(m, R->r);
        for (const auto& g : m.fil_gens) CHECK(fr.phi_t(g) == apply_phi_r(m, g));
    }
}

TEST_CASE("check_morphism") {
    SUBCASE("identity and prime-field scalars pass") {
        const RingParams* R = ring_p5e2r1();
        TildeModule m = make_simple(SimpleObject::cyclic_simple(R, {1, 2}));
        for (int64_t lam = 0; lam < 5; ++lam)
            CHECK(check_morphism(scalar_morphism(m, FieldElem(R->field, lam))).all_pass());
    }
    SUBCASE("non-prime scalar fails phi commutation") {
        const RingParams* R = RingParams::get(FieldParams::get(3, 2), 1, 1, {-3, 1});
        TildeModule m = make_simple(SimpleObject::cyclic_simple(R, {1}));
        FieldElem eps = FieldElem::from_coeffs(R->field, {0, 1}); // not in GF(3)
        Report rep = check_morphism(scalar_morphism(m, eps));
        CHECK(!rep.all_pass());
        bool phi_failed = false;
        for (const auto& c : rep.checks)
            if (c.name == "phi_commutes" && !c.pass) phi_failed = true;
        CHECK(phi_failed);
    }
    SUBCASE("dimension mismatch") {
        const RingParams* R = ring_p5e2r1();
        TildeModule m = make_simple(SimpleObject::cyclic_simple(R, {1, 2}));
        TildeMorphism f = scalar_morphism(m, FieldElem::one(R->field));
        f.mat_cols.pop_back();
        CHECK_THROWS_AS(check_morphism(f), DimensionMismatch);
    }
}
