// SPDX-License-Identifier: Apache-2.0
#include "breuil/inertia.hpp"

#include <string>

namespace breuil {

namespace {

int64_t ipow64(int64_t b, int64_t e) {
    int64_t r = 1;
    while (e-- > 0) r *= b;
    return r;
}

} // namespace

TameCharacter make_tame_character(int64_t p, int64_t h, int64_t exponent) {
    if (!is_prime(p)) throw InvalidParams("p must be prime");
    if (h < 1) throw InvalidParams("level h must be positive");
    int64_t q = 1;
    for (int64_t i = 0; i < h; ++i) {
        if (q > (int64_t(1) << 60) / p) throw InvalidParams("p^h too large for the exponent type");
        q *= p;
    }
    const int64_t order = q - 1;
    TameCharacter chi;
    chi.p = p;
    chi.h = h;
    chi.exponent = ((exponent % order) + order) % order;
    int64_t v = chi.exponent;
    for (int64_t j = 0; j < h; ++j) {
        chi.digits.push_back(v % p);
        v /= p;
    }
    return chi;
}

WeightData weight_exponents(const SimpleObject& simple) {
    CyclicExponents ce = cyclic_exponents(simple); // NotCyclic on bad input
    WeightData wd;
    wd.simple = simple;
    wd.s = ce.s;
    wd.t = ce.t;
    wd.m = ce.m;
    wd.v = ce.v;
    return wd;
}

CharacterInfo character_of_simple(const SimpleObject& simple) {
    CyclicExponents ce = cyclic_exponents(simple);
    CharacterInfo info;
    info.chi = make_tame_character(ce.p, ce.d, ce.d == 0 ? 0 : ce.s[0]);
    for (int64_t i = 0; i < ce.d; ++i)
        info.frobenius_orbit.push_back(ce.s[static_cast<size_t>(i)] % (ce.q - 1));
    info.group.assign(static_cast<size_t>(ce.d), ce.p);
    return info;
}

FieldElem character_apply(const TameCharacter& chi, const FieldElem& zeta) {
    if (zeta.field()->p != chi.p)
        throw InvalidParams("character and root of unity live over different characteristics");
    const int64_t order = ipow64(chi.p, chi.h) - 1;
    if (zeta.is_zero() || !(zeta.pow(order) == FieldElem::one(zeta.field())))
        throw NotRootOfUnity("zeta is not a (p^h - 1)-th root of unity");
    return zeta.pow(chi.exponent);
}

SerreReport serre_check(const TameCharacter& chi, int64_t e, int64_t r) {
    SerreReport rep;
    rep.bound = e * r;
    rep.digits = chi.digits;
    rep.ok = true;
    for (int64_t dgt : chi.digits)
        if (dgt < 0 || dgt > rep.bound) rep.ok = false;
    return rep;
}

FieldElem pairing(const FieldElem& a, const FieldElem& b, const SimpleObject& simple) {
    CyclicExponents ce = cyclic_exponents(simple);
    const int64_t r = simple.ring->r;
    const FieldParams* amb = a.field();
    if (b.field() != amb) throw BadSolutionPair("a and b live in different ambient fields");
    if (amb->p != ce.p) throw BadSolutionPair("ambient characteristic does not match the object");
    if (amb->m % (2 * ce.d) != 0)
        throw AmbientTooSmall("ambient field does not contain GF(p^{2d})");
    if (frobenius_iter(a, ce.d) != a)
        throw BadSolutionPair("a is not in F_q");
    const int parity = static_cast<int>((r * ce.d) % 2);
    const FieldElem tw = parity == 0 ? b : -b;
    if (frobenius_iter(b, ce.d) != tw)
        throw BadSolutionPair("b is not a twisted root of the required parity");

    // sum sigma_i (ab)^{p^i}, eta^v stripped; signs from the dual family
    std::vector<int> sigma = derived_signs(simple);
    const FieldElem z = a * b;
    FieldElem acc = FieldElem::zero(amb);
    for (int64_t i = 1; i <= ce.d; ++i) {
        FieldElem term = frobenius_iter(z, i);
        if (sigma[static_cast<size_t>(i - 1)] == -1) term = -term;
        acc = acc + term;
    }
    if (r % 2 == 1) acc = acc * find_epsilon(amb).inverse();
    if (!acc.in_prime_field())
        throw BadSolutionPair("pairing value failed to normalize into GF(p)");
    return acc;
}

Report weight_identity_report(const SimpleObject& simple) {
    CyclicExponents ce = cyclic_exponents(simple);
    Report rep;
    bool rec = true, sum = true, digits = true;
    for (int64_t i = 0; i < ce.d; ++i) {
        if (ce.p * ce.s[static_cast<size_t>(i)] !=
            ce.s[static_cast<size_t>((i + 1) % ce.d)] + ce.n[static_cast<size_t>(i)] * (ce.q - 1))
            rec = false;
        if (ce.s[static_cast<size_t>(i)] + ce.t[static_cast<size_t>(i)] != ce.v) sum = false;
        int64_t val = ce.s[static_cast<size_t>(i)];
        for (int64_t j = 0; j < ce.d; ++j) {
            if (val % ce.p != ce.n[static_cast<size_t>((i + ce.d - 1 - j) % ce.d)]) digits = false;
            val /= ce.p;
        }
    }
    rep.add("weight_recursion", rec, "p s_i = s_{i+1} + n_i (q-1)");
    rep.add("constant_sum", sum, "s_i + t_i = v");
    rep.add("digits_are_cyclic_weights", digits, "");
    return rep;
}

Report pairing_nondegeneracy_report(const SimpleObject& simple) {
    CyclicExponents ce = cyclic_exponents(simple);
    const int64_t r = simple.ring->r;
    const FieldParams* amb = ambient_field(ce.p, {2 * ce.d});
    auto fq = subfield_elements(amb, ce.d);
    auto roots = twisted_roots(amb, ce.d, static_cast<int>((r * ce.d) % 2));
    Report rep;
    bool nondeg = true;
    std::string witness;
    for (const auto& a : fq) {
        if (a.is_zero()) continue;
        bool hit = false;
        for (const auto& b : roots)
            if (!pairing(a, b, simple).is_zero()) { hit = true; break; }
        if (!hit) {
            nondeg = false;
            witness = "left radical contains " + a.str();
            break;
        }
    }
    for (const auto& b : roots) {
        if (b.is_zero() || !nondeg) break;
        bool hit = false;
        for (const auto& a : fq)
            if (!pairing(a, b, simple).is_zero()) { hit = true; break; }
        if (!hit) {
            nondeg = false;
            witness = "right radical contains " + b.str();
        }
    }
    rep.add("pairing_nondegenerate", nondeg,
            nondeg ? "exhaustive over F_q x twisted roots" : witness);
    return rep;
}

} // namespace breuil
