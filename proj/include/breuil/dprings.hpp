// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "breuil/gf.hpp"
#include "breuil/report.hpp"

namespace breuil {

class S1Elem;
class TildeSElem;

/// Shared parameters for the mod-p divided-power ring S1 (truncated in
/// u-degree) and its quotient k[u]/u^p.
///
/// S1 has k-basis u^i/q(i)! with q(i) = floor(i/e); E(u) is an Eisenstein
/// polynomial over the prime ring, and the filtration level r satisfies
/// e*r <= p-2. Instances are interned and immutable; all derived tables
/// (factorial valuations, the unit c = phi(E)/p, divided-Frobenius images
/// of basis elements) are precomputed at construction.
class RingParams {
public:
    const FieldParams* field = nullptr; // k = GF(p^m)
    int64_t e = 0;                      // absolute ramification index
    int64_t r = 0;                      // filtration level, e*r <= p-2
    std::vector<int64_t> eisenstein;    // E(u) coefficients a_0..a_e, a_e = 1
    int64_t trunc_degree = 0;           // D, u-degree bound for S1

    /// Interned accessor; validates all invariants (Eisenstein shape,
    /// e*r <= p-2, trunc_degree >= 2p^2) and runs the construction-time
    /// self-tests. trunc_degree = 0 selects the default 2p^2.
    static const RingParams* get(const FieldParams* field, int64_t e, int64_t r,
                                 const std::vector<int64_t>& eisenstein,
                                 int64_t trunc_degree = 0);

    int64_t p() const { return field->p; }
    int64_t q(int64_t i) const { return i / e; }

    /// The unit c = phi(E)/p of S1 (full divided-power expansion route).
    const S1Elem& c() const;
    /// c computed a second way (Wilson closed form); equal to c() by a
    /// construction-time assertion, kept separate for cross-checking.
    const S1Elem& c_closed_form() const;
    /// Image of c in k[u]/u^p: a nonzero constant.
    FieldElem c_pi() const;
    /// c^{-1} in S1.
    const S1Elem& c_inverse() const;

    /// phi_r of the basis element u^i/q(i)!, defined for q(i) >= r.
    /// Computed once via the mod p^{r+2} lift of the representative
    /// u^{i mod e} * E^{q(i)}/q(i)! inside Fil^r.
    const S1Elem& phi_r_basis(int64_t i) const;

    /// v_p(n!) and the p-free part of n! mod p.
    int64_t fact_val(int64_t n) const { return fact_val_[static_cast<size_t>(n)]; }
    int64_t fact_unit_mod_p(int64_t n) const { return fact_unit_p_[static_cast<size_t>(n)]; }

    /// Structure constant q(i+j)!/(q(i)! q(j)!) mod p (0 when its p-adic
    /// valuation is positive).
    int64_t dp_coeff_int(int64_t i, int64_t j) const;

private:
    friend struct RingParamsFactory;
    friend struct LiftOps;
    std::vector<int64_t> fact_val_, fact_unit_p_, fact_unit_pk_;
    int64_t pk_ = 0; // p^{r+2}
    std::vector<S1Elem> c_store_;       // [0] expansion route, [1] closed form, [2] inverse
    std::vector<S1Elem> phi_r_table_;   // index i, valid when q(i) >= r
    std::vector<char> phi_r_valid_;

    int64_t sc_residue_pk(int64_t i, int64_t j) const;
    void build_tables();
    void self_test() const;
};

/// Sparse element of S1: finite sum of w_i * u^i/q(i)!, support in [0, D).
class S1Elem {
public:
    S1Elem() = default;
    explicit S1Elem(const RingParams* ring) : ring_(ring) {}

    static S1Elem zero(const RingParams* ring) { return S1Elem(ring); }
    static S1Elem one(const RingParams* ring);
    static S1Elem basis(const RingParams* ring, int64_t i); // u^i/q(i)!
    static S1Elem monomial(const RingParams* ring, int64_t t); // u^t = q(t)! * basis(t)
    static S1Elem scalar(const RingParams* ring, const FieldElem& w);

    const RingParams* ring() const { return ring_; }
    const std::map<int64_t, FieldElem>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    FieldElem coeff(int64_t i) const;
    void set_coeff(int64_t i, const FieldElem& w);

    /// min over the support of q(i); a large sentinel for 0.
    int64_t fil_level() const;
    bool in_fil(int64_t n) const { return fil_level() >= n; }

    S1Elem operator+(const S1Elem& o) const;
    S1Elem operator-(const S1Elem& o) const;
    S1Elem operator-() const;
    S1Elem operator*(const S1Elem& o) const; // s1_mul
    S1Elem scaled(const FieldElem& w) const;
    bool operator==(const S1Elem& o) const;
    bool operator!=(const S1Elem& o) const { return !(*this == o); }

    /// Multiplicative inverse; requires a unit (nonzero constant term).
    S1Elem inverse() const;
    S1Elem pow(int64_t n) const;

private:
    const RingParams* ring_ = nullptr;
    std::map<int64_t, FieldElem> terms_;
};

/// Element of k[u]/u^p, dense coefficient vector.
class TildeSElem {
public:
    TildeSElem() = default;
    explicit TildeSElem(const RingParams* ring);

    static TildeSElem zero(const RingParams* ring) { return TildeSElem(ring); }
    static TildeSElem one(const RingParams* ring);
    static TildeSElem monomial(const RingParams* ring, int64_t t, const FieldElem& w);
    static TildeSElem scalar(const RingParams* ring, const FieldElem& w);

    const RingParams* ring() const { return ring_; }
    const FieldElem& coeff(int64_t i) const { return c_[static_cast<size_t>(i)]; }
    void set_coeff(int64_t i, const FieldElem& w) { c_[static_cast<size_t>(i)] = w; }

    bool is_zero() const;
    bool is_unit() const { return !c_[0].is_zero(); }
    /// least i with nonzero coefficient; p (the nilpotency order) for 0.
    int64_t u_valuation() const;
    /// Fil^n (k[u]/u^p) = u^{en} * (k[u]/u^p).
    bool in_fil(int64_t n) const;

    TildeSElem operator+(const TildeSElem& o) const;
    TildeSElem operator-(const TildeSElem& o) const;
    TildeSElem operator-() const;
    TildeSElem operator*(const TildeSElem& o) const;
    TildeSElem scaled(const FieldElem& w) const;
    TildeSElem inverse() const; // units only
    bool operator==(const TildeSElem& o) const;
    bool operator!=(const TildeSElem& o) const { return !(*this == o); }

    /// Frobenius: u maps to u^p = 0, so only sigma of the constant survives.
    TildeSElem phi() const;
    /// Monodromy: u^i maps to -i u^i.
    TildeSElem N() const;

private:
    const RingParams* ring_ = nullptr;
    std::vector<FieldElem> c_; // length p
};

/// Internal precision carrier for the divided Frobenius: an S1-shaped
/// element whose coefficients are residues mod p^{r+2}. Exposed for tests.
struct S1LiftElem {
    const RingParams* ring = nullptr;
    std::map<int64_t, int64_t> terms; // degree -> residue mod p^{r+2}

    /// Reduction mod p into S1 (prime-field coefficients).
    S1Elem reduce_mod_p() const;
};

// --- operations ---------------------------------------------------------

/// Structure constant of the divided-power basis as an element of GF(p)
/// inside k: (u^i/q(i)!)(u^j/q(j)!) = dp_coeff(i,j) u^{i+j}/q(i+j)!.
FieldElem dp_coeff(const RingParams* ring, int64_t i, int64_t j);

S1Elem s1_mul(const S1Elem& a, const S1Elem& b);

/// Frobenius on S1: sigma-semilinear, u^i/q(i)! -> u^{pi}/q(i)!.
S1Elem s1_phi(const S1Elem& a);

/// Monodromy on S1: k-linear, u^i/q(i)! -> -i u^i/q(i)!.
S1Elem s1_N(const S1Elem& a);

/// Divided Frobenius phi/p^r on Fil^r S1. Throws NotInFil when the
/// support of `a` violates the Fil^r criterion {i : q(i) >= r}.
S1Elem s1_phi_r(const S1Elem& a);

/// The projection S1 -> k[u]/u^p: u^i/q(i)! -> u^i/q(i)! (a unit multiple
/// of u^i) for i < p, and 0 for i >= p. Kernel is the ideal kappa.
TildeSElem project_tilde(const S1Elem& a);

/// Canonical section of project_tilde: u^i -> q(i)! u^i/q(i)! for i < p.
S1Elem canonical_section(const TildeSElem& a);

/// The pair (c, c_pi).
std::pair<S1Elem, FieldElem> c_pi(const RingParams* ring);

/// Expansion of u^a gamma_j(E) in the divided-power basis, coefficients
/// carried mod p^{r+2}. Building block of the phi_r pipeline; exposed for
/// tests and the construction self-test.
S1LiftElem lift_u_gamma_e(const RingParams* ring, int64_t a, int64_t j);

/// phi on a lift, exact residues mod p^{r+2}.
S1LiftElem lift_phi(const S1LiftElem& x);

/// Exact division by p^r then reduction mod p; asserts zero remainder.
S1Elem lift_divide_reduce(const S1LiftElem& x);

} // namespace breuil
