// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "breuil/cat.hpp"
#include "breuil/oracle.hpp"

namespace breuil {

/// A character of tame inertia through the fundamental character of level
/// h: the exponent n modulo p^h - 1 together with its base-p digits (the
/// exponents of tame inertia).
struct TameCharacter {
    int64_t p = 0;
    int64_t h = 0;
    int64_t exponent = 0;         // in [0, p^h - 1)
    std::vector<int64_t> digits;  // h base-p digits, little-endian
};

TameCharacter make_tame_character(int64_t p, int64_t h, int64_t exponent);

struct WeightData {
    SimpleObject simple;
    std::vector<int64_t> s, t, m; // index i in [0, d)
    int64_t v = 0;                // s_i + t_i, independent of i
};

/// Exponents attached to the cyclic weight sequence of a simple object.
/// Throws NotCyclic unless the object carries the cyclic form.
WeightData weight_exponents(const SimpleObject& simple);

struct CharacterInfo {
    TameCharacter chi;                    // level d, exponent s_1
    std::vector<int64_t> frobenius_orbit; // all s_i mod p^d - 1
    std::vector<int64_t> group;           // d copies of p: the group (Z/p)^d
};

CharacterInfo character_of_simple(const SimpleObject& simple);

/// zeta^exponent for zeta a (p^h - 1)-th root of unity; NotRootOfUnity
/// otherwise.
FieldElem character_apply(const TameCharacter& chi, const FieldElem& zeta);

struct SerreReport {
    bool ok = false;
    std::vector<int64_t> digits;
    int64_t bound = 0; // er
};

/// The tame-inertia bound: every base-p digit of the exponent in [0, er].
SerreReport serre_check(const TameCharacter& chi, int64_t e, int64_t r);

/// The duality pairing on solution families, with the formal eta^v factor
/// stripped and the result normalized into GF(p) (division by epsilon when
/// r is odd). a ranges over F_q, b over the twisted root set; both live in
/// a common ambient field containing GF(p^{2d}).
FieldElem pairing(const FieldElem& a, const FieldElem& b, const SimpleObject& simple);

/// The integer identities satisfied by the exponents: the p-power
/// recursion, the constant sum s_i + t_i = v, and the digit description.
Report weight_identity_report(const SimpleObject& simple);

/// Exhaustive non-degeneracy scan of the pairing over F_q x twisted roots.
Report pairing_nondegeneracy_report(const SimpleObject& simple);

} // namespace breuil
