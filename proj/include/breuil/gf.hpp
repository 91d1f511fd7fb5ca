// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "breuil/errors.hpp"

namespace breuil {

/// Parameters of a finite field GF(p^m) in a fixed polynomial basis
/// 1, x, ..., x^{m-1} modulo a monic irreducible of degree m over GF(p).
///
/// Instances are interned: `get` returns a pointer that stays valid for the
/// lifetime of the process, so elements may hold plain pointers.
class FieldParams {
public:
    static constexpr int kMaxDegree = 12;

    int64_t p = 0;
    int m = 0;
    std::vector<int16_t> modulus; // length m+1, monic, coefficients in [0,p)

    /// Field with the basis-lexicographically smallest monic irreducible of
    /// degree m (coefficient tuples ordered as little-endian base-p integers).
    static const FieldParams* get(int64_t p, int m);
    /// Field with an explicit modulus; irreducibility is verified.
    static const FieldParams* get(int64_t p, const std::vector<int64_t>& modulus);

    int64_t card() const; // p^m
    int16_t inv_mod_p(int64_t a) const { return inv_table_[static_cast<size_t>(a)]; }

    // x^{m+t} reduced modulo the modulus, t in [0, m-2]; used by multiplication.
    const std::vector<std::array<int16_t, kMaxDegree>>& reduction_rows() const {
        return red_rows_;
    }

private:
    friend struct FieldParamsFactory;
    std::vector<int16_t> inv_table_;
    std::vector<std::array<int16_t, kMaxDegree>> red_rows_;
};

/// Element of GF(p^m), a length-m coefficient vector in the power basis.
/// Value type: cheap to copy, immutable in spirit (all operations pure).
class FieldElem {
public:
    FieldElem() = default;
    explicit FieldElem(const FieldParams* k) : k_(k) { c_.fill(0); }
    FieldElem(const FieldParams* k, int64_t scalar); // scalar * 1

    static FieldElem zero(const FieldParams* k) { return FieldElem(k); }
    static FieldElem one(const FieldParams* k) { return FieldElem(k, 1); }
    /// Element with coefficient tuple matching the little-endian base-p
    /// digits of `index`; index ranges over [0, p^m).
    static FieldElem decode(const FieldParams* k, int64_t index);
    static FieldElem from_coeffs(const FieldParams* k, const std::vector<int64_t>& coeffs);

    const FieldParams* field() const { return k_; }
    int64_t coeff(int i) const { return c_[static_cast<size_t>(i)]; }
    std::vector<int64_t> coeffs() const;
    int64_t encode() const;

    bool is_zero() const;
    bool is_one() const;
    /// True when the element lies in the prime subfield GF(p).
    bool in_prime_field() const;
    /// The value as an integer in [0,p); requires in_prime_field().
    int64_t prime_value() const;

    FieldElem operator+(const FieldElem& o) const;
    FieldElem operator-(const FieldElem& o) const;
    FieldElem operator-() const;
    FieldElem operator*(const FieldElem& o) const;
    FieldElem inverse() const; // throws InvalidParams on zero
    FieldElem operator/(const FieldElem& o) const { return *this * o.inverse(); }
    FieldElem pow(int64_t n) const; // negative n allowed for nonzero elements
    bool operator==(const FieldElem& o) const;
    bool operator!=(const FieldElem& o) const { return !(*this == o); }

    /// x^{p^j}; j-fold Frobenius.
    FieldElem frobenius(int64_t j = 1) const;

    FieldElem scaled(int64_t n) const; // multiply by n mod p

    std::string str() const;

private:
    const FieldParams* k_ = nullptr;
    std::array<int16_t, FieldParams::kMaxDegree> c_{};
};

/// x^{p^j}.
FieldElem frobenius_iter(const FieldElem& x, int64_t j);

/// Trace from GF(p^d) down to GF(p): sum of x^{p^j}, j < d.
/// Requires x to lie in the degree-d subfield (checked via Frobenius);
/// throws NotInSubfield otherwise.
FieldElem trace(const FieldElem& x, int64_t d);

/// All x in the ambient field with x^{p^d} = (-1)^parity * x.
/// The ambient field must contain GF(p^{2d}); throws AmbientTooSmall.
/// Result sorted by encode(), cardinality exactly p^d.
std::vector<FieldElem> twisted_roots(const FieldParams* ambient, int64_t d, int parity);

/// Elements of the subfield GF(p^d) of the ambient field (d must divide m).
std::vector<FieldElem> subfield_elements(const FieldParams* ambient, int64_t d);

/// First element (encode order) with x^{p-1} = -1. The ambient degree must
/// be even so that GF(p^2) is contained.
FieldElem find_epsilon(const FieldParams* ambient);

/// Ambient field GF(p^M) for a session: M = lcm of the requested degrees.
const FieldParams* ambient_field(int64_t p, const std::vector<int64_t>& degrees);

bool is_prime(int64_t n);

} // namespace breuil
