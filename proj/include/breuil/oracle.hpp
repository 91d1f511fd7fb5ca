// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <utility>
#include <vector>

#include "breuil/cat.hpp"
#include "breuil/report.hpp"

namespace breuil {

/// Element of the monoid algebra F[eta] over a finite field F: finite sums
/// of coefficients times nonnegative powers of eta. No relation is imposed
/// on eta, so identity checks are exact monomial comparisons.
class EtaPoly {
public:
    EtaPoly() = default;
    explicit EtaPoly(const FieldParams* k) : k_(k) {}

    static EtaPoly zero(const FieldParams* k) { return EtaPoly(k); }
    static EtaPoly monomial(const FieldParams* k, const FieldElem& coeff, int64_t exp);

    const FieldParams* field() const { return k_; }
    const std::map<int64_t, FieldElem>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    EtaPoly operator+(const EtaPoly& o) const;
    EtaPoly operator-(const EtaPoly& o) const;
    EtaPoly operator*(const EtaPoly& o) const;
    bool operator==(const EtaPoly& o) const;
    bool operator!=(const EtaPoly& o) const { return !(*this == o); }

    /// p-th power via Frobenius on coefficients and scaling of exponents.
    EtaPoly pow_p() const;
    /// n-th power by square and multiply (independent route, for checks).
    EtaPoly pow(int64_t n) const;

private:
    const FieldParams* k_ = nullptr;
    std::map<int64_t, FieldElem> terms_;
};

/// Cyclic weight exponents s_i and t_i and the pairing level v, as plain
/// integer data shared by the verifiers and the tame-character layer.
struct CyclicExponents {
    int64_t p = 0, d = 0, er = 0, q = 0, v = 0;
    std::vector<int64_t> n, m, s, t; // index i in [0, d)
};

CyclicExponents cyclic_exponents(const SimpleObject& simple); // NotCyclic

/// Sign sequence sigma_i (i = 1..d) attached to the dual solution family,
/// derived from the twisted recursion and its cycle consistency; throws
/// NoConsistentSigns if the recursion fails on some twisted root.
std::vector<int> derived_signs(const SimpleObject& simple);

/// Exact verification that a_i = a^{p^i} eta^{s_i} solves the p-power
/// system for every a in F_q, plus the family cardinality count.
Report verify_solution_family(const SimpleObject& simple);

/// Exact verification of the sign-twisted dual system over the twisted
/// root set; returns the derived sign sequence.
std::pair<std::vector<int>, Report> verify_dual_family(const SimpleObject& simple);

/// The pairing sum: single eta^v monomial, scalar in GF(p) after the
/// epsilon normalization, non-degeneracy by exhaustion, and comparison
/// with the closed trace formula.
Report verify_pairing_identity(const SimpleObject& simple);

} // namespace breuil
