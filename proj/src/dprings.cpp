// SPDX-License-Identifier: Apache-2.0
#include "breuil/dprings.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>
#include <tuple>

namespace breuil {

namespace {

int64_t ipow64(int64_t b, int64_t e) {
    int64_t r = 1;
    while (e-- > 0) r *= b;
    return r;
}

int64_t mod_pos(int64_t a, int64_t m) {
    int64_t r = a % m;
    return r < 0 ? r + m : r;
}

// extended gcd inverse, m > 1, gcd(a, m) = 1
int64_t mod_inverse(int64_t a, int64_t m) {
    int64_t r0 = mod_pos(a, m), r1 = m;
    int64_t s0 = 1, s1 = 0;
    while (r1 != 0) {
        int64_t qq = r0 / r1;
        int64_t r2 = r0 - qq * r1;
        r0 = r1;
        r1 = r2;
        int64_t s2 = s0 - qq * s1;
        s0 = s1;
        s1 = s2;
    }
    return mod_pos(s0, m);
}

constexpr int64_t kInfLevel = INT64_MAX / 4;

} // namespace

// --- RingParams ----------------------------------------------------------

struct RingParamsFactory {
    using Key = std::tuple<const FieldParams*, int64_t, int64_t, std::vector<int64_t>, int64_t>;

    static const RingParams* build(const FieldParams* field, int64_t e, int64_t r,
                                   std::vector<int64_t> eis, int64_t D) {
        static std::mutex mu;
        static std::map<Key, std::unique_ptr<RingParams>> cache;
        std::lock_guard<std::mutex> lock(mu);
        Key key{field, e, r, eis, D};
        auto it = cache.find(key);
        if (it != cache.end()) return it->second.get();

        auto rp = std::make_unique<RingParams>();
        rp->field = field;
        rp->e = e;
        rp->r = r;
        rp->eisenstein = std::move(eis);
        rp->trunc_degree = D;
        rp->build_tables();
        rp->self_test();
        const RingParams* out = rp.get();
        cache.emplace(std::move(key), std::move(rp));
        return out;
    }
};

const RingParams* RingParams::get(const FieldParams* field, int64_t e, int64_t r,
                                  const std::vector<int64_t>& eisenstein, int64_t trunc_degree) {
    const int64_t p = field->p;
    if (e < 1) throw InvalidParams("ramification index e must be positive");
    if (r < 0) throw InvalidParams("filtration level r must be nonnegative");
    if (e * r > p - 2)
        throw InvalidParams("admissibility bound violated: e*r = " + std::to_string(e * r) +
                            " must be <= p-2 = " + std::to_string(p - 2));
    if (static_cast<int64_t>(eisenstein.size()) != e + 1)
        throw InvalidParams("eisenstein coefficient list must have length e+1");
    if (eisenstein[static_cast<size_t>(e)] != 1)
        throw InvalidParams("eisenstein polynomial must be monic");
    for (int64_t i = 0; i < e; ++i)
        if (mod_pos(eisenstein[static_cast<size_t>(i)], p) != 0)
            throw InvalidParams("eisenstein coefficient a_" + std::to_string(i) +
                                " is not divisible by p");
    if (mod_pos(eisenstein[0] / p, p) == 0)
        throw InvalidParams("eisenstein constant term must have p-valuation exactly 1");
    int64_t D = trunc_degree == 0 ? 2 * p * p : trunc_degree;
    if (D < 2 * p * p)
        throw InvalidParams("trunc_degree must be at least 2p^2 = " + std::to_string(2 * p * p));
    return RingParamsFactory::build(field, e, r, eisenstein, D);
}

// residue mod p^{r+2} of q(i+j)!/(q(i)! q(j)!)
int64_t RingParams::sc_residue_pk(int64_t i, int64_t j) const {
    int64_t qi = q(i), qj = q(j), qij = q(i + j);
    int64_t v = fact_val_[static_cast<size_t>(qij)] - fact_val_[static_cast<size_t>(qi)] -
                fact_val_[static_cast<size_t>(qj)];
    if (v >= r + 2) return 0;
    int64_t u = fact_unit_pk_[static_cast<size_t>(qij)];
    u = u * mod_inverse(fact_unit_pk_[static_cast<size_t>(qi)], pk_) % pk_;
    u = u * mod_inverse(fact_unit_pk_[static_cast<size_t>(qj)], pk_) % pk_;
    return ipow64(p(), v) * u % pk_;
}

int64_t RingParams::dp_coeff_int(int64_t i, int64_t j) const {
    int64_t qi = q(i), qj = q(j), qij = q(i + j);
    int64_t v = fact_val_[static_cast<size_t>(qij)] - fact_val_[static_cast<size_t>(qi)] -
                fact_val_[static_cast<size_t>(qj)];
    if (v > 0) return 0;
    int64_t u = fact_unit_p_[static_cast<size_t>(qij)];
    u = u * field->inv_mod_p(fact_unit_p_[static_cast<size_t>(qi)]) % p();
    u = u * field->inv_mod_p(fact_unit_p_[static_cast<size_t>(qj)]) % p();
    return u;
}

namespace {

// lift arithmetic: sparse maps degree -> residue mod p^{r+2}

void lift_add_term(std::map<int64_t, int64_t>& m, int64_t deg, int64_t val, int64_t pk) {
    if (val % pk == 0) return;
    auto [it, inserted] = m.emplace(deg, mod_pos(val, pk));
    if (!inserted) {
        it->second = mod_pos(it->second + val, pk);
        if (it->second == 0) m.erase(it);
    }
}

} // namespace

// The lift multiplication needs sc_residue_pk which is private; implement as
// member-adjacent free functions through a small accessor.
struct LiftOps {
    static S1LiftElem mul(const S1LiftElem& a, const S1LiftElem& b) {
        const RingParams* ring = a.ring;
        const int64_t pk = LiftOps::pk(ring);
        S1LiftElem out;
        out.ring = ring;
        for (const auto& [i, wi] : a.terms)
            for (const auto& [j, wj] : b.terms) {
                if (i + j >= ring->trunc_degree) continue;
                int64_t sc = ring->sc_residue_pk(i, j);
                if (sc == 0) continue;
                lift_add_term(out.terms, i + j, wi * wj % pk * sc % pk, pk);
            }
        return out;
    }
    static int64_t pk(const RingParams* ring) { return ring->pk_; }
    static S1LiftElem scale(const S1LiftElem& a, int64_t s) {
        const int64_t pkv = pk(a.ring);
        S1LiftElem out;
        out.ring = a.ring;
        s = mod_pos(s, pkv);
        if (s == 0) return out;
        for (const auto& [i, w] : a.terms) lift_add_term(out.terms, i, w * s % pkv, pkv);
        return out;
    }
    static void add_into(S1LiftElem& acc, const S1LiftElem& x) {
        const int64_t pkv = pk(acc.ring);
        for (const auto& [i, w] : x.terms) lift_add_term(acc.terms, i, w, pkv);
    }
    // residue of p^k / k!
    static int64_t dp_of_p_scalar(const RingParams* ring, int64_t k) {
        int64_t v = k - ring->fact_val(k);
        assert(v >= 0);
        if (v >= ring->r + 2) return 0;
        int64_t u = mod_inverse(ring->fact_unit_pk_[static_cast<size_t>(k)], pk(ring));
        return ipow64(ring->p(), v) * u % pk(ring);
    }
    static int64_t frob_factor(const RingParams* ring, int64_t t) {
        // residue of q(pt)!/q(t)!
        int64_t qpt = ring->q(ring->p() * t), qt = ring->q(t);
        int64_t v = ring->fact_val(qpt) - ring->fact_val(qt);
        assert(v >= 0);
        if (v >= ring->r + 2) return 0;
        int64_t u = ring->fact_unit_pk_[static_cast<size_t>(qpt)] *
                    mod_inverse(ring->fact_unit_pk_[static_cast<size_t>(qt)], pk(ring)) %
                    pk(ring);
        return ipow64(ring->p(), v) * u % pk(ring);
    }
};

S1LiftElem lift_u_gamma_e(const RingParams* ring, int64_t a, int64_t j) {
    // u^a * gamma_j(E) with E = u^e + p*B(u), via the divided-power binomial:
    // gamma_j(E) = sum_k gamma_{j-k}(u^e) * (p^k/k!) * B^k.
    const int64_t pk = LiftOps::pk(ring);
    S1LiftElem bpow; // B^k, divided-power form
    bpow.ring = ring;
    bpow.terms[0] = 1;
    S1LiftElem b_dp;
    b_dp.ring = ring;
    for (int64_t t = 0; t < ring->e; ++t) {
        int64_t bt = ring->eisenstein[static_cast<size_t>(t)] / ring->p();
        lift_add_term(b_dp.terms, t, mod_pos(bt, pk), pk);
    }
    S1LiftElem acc;
    acc.ring = ring;
    for (int64_t k = 0; k <= j; ++k) {
        if (k > 0) bpow = LiftOps::mul(bpow, b_dp);
        int64_t scal = LiftOps::dp_of_p_scalar(ring, k);
        if (scal == 0) continue;
        // shift by the basis element at degree e(j-k) (coefficient 1), then u^a
        S1LiftElem term = LiftOps::scale(bpow, scal);
        if (ring->e * (j - k) + a < ring->trunc_degree) {
            S1LiftElem sh1;
            sh1.ring = ring;
            sh1.terms[ring->e * (j - k)] = 1;
            term = LiftOps::mul(term, sh1);
            if (a > 0) {
                S1LiftElem sha;
                sha.ring = ring;
                sha.terms[a] = 1;
                term = LiftOps::mul(term, sha);
            }
            LiftOps::add_into(acc, term);
        }
    }
    return acc;
}

S1LiftElem lift_phi(const S1LiftElem& x) {
    const RingParams* ring = x.ring;
    const int64_t pk = LiftOps::pk(ring);
    S1LiftElem out;
    out.ring = ring;
    for (const auto& [t, w] : x.terms) {
        int64_t pt = ring->p() * t;
        if (pt >= ring->trunc_degree) continue;
        int64_t f = LiftOps::frob_factor(ring, t);
        if (f == 0) continue;
        lift_add_term(out.terms, pt, w * f % pk, pk);
    }
    return out;
}

S1Elem lift_divide_reduce(const S1LiftElem& x) {
    const RingParams* ring = x.ring;
    const int64_t pr = ipow64(ring->p(), ring->r);
    S1Elem out(ring);
    for (const auto& [t, w] : x.terms) {
        if (w % pr != 0)
            throw InvalidObject("divided Frobenius: nonzero remainder in exact division by p^r");
        int64_t red = (w / pr) % ring->p();
        if (red != 0) out.set_coeff(t, FieldElem(ring->field, red));
    }
    return out;
}

S1Elem S1LiftElem::reduce_mod_p() const {
    S1Elem out(ring);
    for (const auto& [t, w] : terms) {
        int64_t red = w % ring->p();
        if (red != 0) out.set_coeff(t, FieldElem(ring->field, red));
    }
    return out;
}

void RingParams::build_tables() {
    const int64_t P = p();
    pk_ = ipow64(P, r + 2);
    const int64_t nmax = P * trunc_degree + 1;
    fact_val_.assign(static_cast<size_t>(nmax) + 1, 0);
    fact_unit_p_.assign(static_cast<size_t>(nmax) + 1, 1);
    fact_unit_pk_.assign(static_cast<size_t>(nmax) + 1, 1);
    for (int64_t n = 1; n <= nmax; ++n) {
        int64_t t = n, v = 0;
        while (t % P == 0) { t /= P; ++v; }
        fact_val_[static_cast<size_t>(n)] = fact_val_[static_cast<size_t>(n - 1)] + v;
        fact_unit_p_[static_cast<size_t>(n)] = fact_unit_p_[static_cast<size_t>(n - 1)] * (t % P) % P;
        fact_unit_pk_[static_cast<size_t>(n)] = fact_unit_pk_[static_cast<size_t>(n - 1)] * (t % pk_) % pk_;
    }

    // c, expansion route: phi(E) = E(u^p) expanded monomial by monomial with
    // exact (valuation, unit) bookkeeping, then divided by p.
    S1Elem c_b(this);
    for (int64_t t = 0; t <= e; ++t) {
        int64_t at = eisenstein[static_cast<size_t>(t)];
        if (at == 0) continue;
        int64_t deg = P * t;
        if (deg >= trunc_degree) continue;
        int64_t va = 0, ua = at;
        while (ua % P == 0) { ua /= P; ++va; }
        int64_t v = va + fact_val_[static_cast<size_t>(q(deg))];
        if (v < 1) throw InvalidParams("phi(E) is not divisible by p"); // impossible for Eisenstein E
        if (v > 1) continue;
        int64_t unit = mod_pos(ua, P) * fact_unit_p_[static_cast<size_t>(q(deg))] % P;
        if (unit != 0) {
            FieldElem w(field, unit);
            c_b.set_coeff(deg, c_b.coeff(deg) + w);
        }
    }

    // c, closed form: (p-1)! basis(pe) + sum b_t q(pt)! basis(pt) mod p.
    S1Elem c_a(this);
    if (P * e < trunc_degree) {
        int64_t wilson = fact_unit_p_[static_cast<size_t>(P - 1)]; // (p-1)! is p-free
        c_a.set_coeff(P * e, FieldElem(field, wilson));
    }
    for (int64_t t = 0; t < e; ++t) {
        int64_t bt = eisenstein[static_cast<size_t>(t)] / P;
        int64_t deg = P * t;
        if (deg >= trunc_degree) continue;
        int64_t qf = fact_val_[static_cast<size_t>(q(deg))] > 0
                         ? 0
                         : fact_unit_p_[static_cast<size_t>(q(deg))];
        int64_t coeff = mod_pos(bt, P) * qf % P;
        if (coeff != 0) c_a.set_coeff(deg, c_a.coeff(deg) + FieldElem(field, coeff));
    }

    if (!(c_a == c_b))
        throw InvalidParams("internal: the two computations of c = phi(E)/p disagree");
    if (c_b.coeff(0).is_zero())
        throw InvalidParams("internal: c is not a unit");

    c_store_.push_back(c_b);              // [0] expansion route
    c_store_.push_back(c_a);              // [1] closed form
    c_store_.push_back(c_b.inverse());    // [2] inverse

    // phi_r images of basis elements u^i/q(i)!, q(i) >= r, via the lift of
    // the Fil^r representative u^{i mod e} gamma_{q(i)}(E).
    phi_r_table_.assign(static_cast<size_t>(trunc_degree), S1Elem(this));
    phi_r_valid_.assign(static_cast<size_t>(trunc_degree), 0);

    // gamma_j(E) table, built once
    const int64_t jmax = q(trunc_degree - 1);
    std::vector<S1LiftElem> gamma(static_cast<size_t>(jmax) + 1);
    {
        S1LiftElem bpow;
        bpow.ring = this;
        bpow.terms[0] = 1;
        S1LiftElem b_dp;
        b_dp.ring = this;
        for (int64_t t = 0; t < e; ++t) {
            int64_t bt = eisenstein[static_cast<size_t>(t)] / P;
            lift_add_term(b_dp.terms, t, mod_pos(bt, pk_), pk_);
        }
        std::vector<S1LiftElem> bpows(static_cast<size_t>(jmax) + 1);
        for (int64_t k = 0; k <= jmax; ++k) {
            if (k > 0) bpow = LiftOps::mul(bpow, b_dp);
            bpows[static_cast<size_t>(k)] = bpow;
        }
        for (int64_t j = 0; j <= jmax; ++j) {
            S1LiftElem acc;
            acc.ring = this;
            for (int64_t k = 0; k <= j; ++k) {
                int64_t scal = LiftOps::dp_of_p_scalar(this, k);
                if (scal == 0) continue;
                if (e * (j - k) >= trunc_degree) continue;
                S1LiftElem term = LiftOps::scale(bpows[static_cast<size_t>(k)], scal);
                S1LiftElem sh;
                sh.ring = this;
                sh.terms[e * (j - k)] = 1;
                term = LiftOps::mul(term, sh);
                LiftOps::add_into(acc, term);
            }
            gamma[static_cast<size_t>(j)] = std::move(acc);
        }
    }

    // c-power table for the closed-form cross-check
    std::vector<S1Elem> cpow;
    cpow.push_back(S1Elem::one(this));
    for (int64_t j = 1; j <= jmax; ++j) cpow.push_back(s1_mul(cpow.back(), c_b));

    for (int64_t i = 0; i < trunc_degree; ++i) {
        int64_t j = q(i);
        if (j < r) continue;
        int64_t a = i - e * j;
        S1LiftElem lift = gamma[static_cast<size_t>(j)];
        if (a > 0) {
            S1LiftElem sha;
            sha.ring = this;
            sha.terms[a] = 1;
            lift = LiftOps::mul(lift, sha);
        }
        S1Elem img = lift_divide_reduce(lift_phi(lift));

        // independent closed form: p^{j-r}/j! * u^{pa} * c^j
        S1Elem closed(this);
        int64_t v = j - r - fact_val_[static_cast<size_t>(j)];
        if (v < 0)
            throw InvalidParams("internal: negative valuation in phi_r closed form");
        if (v == 0) {
            int64_t unit = field->inv_mod_p(fact_unit_p_[static_cast<size_t>(j)]);
            closed = s1_mul(S1Elem::monomial(this, P * a), cpow[static_cast<size_t>(j)])
                         .scaled(FieldElem(field, unit));
        }
        if (!(img == closed))
            throw InvalidParams("internal: phi_r lift pipeline disagrees with closed form at i=" +
                                std::to_string(i));
        phi_r_table_[static_cast<size_t>(i)] = std::move(img);
        phi_r_valid_[static_cast<size_t>(i)] = 1;
    }
}

void RingParams::self_test() const {
    // Fil^n support criterion: gamma_n(E) reduces mod p to the basis element
    // at degree en, whose q-level is exactly n; and u^{en} = n! gamma_n(E)
    // with n! a unit for n <= r+1.
    for (int64_t n = 0; n <= r + 1; ++n) {
        if (e * n >= trunc_degree) break;
        S1LiftElem g = lift_u_gamma_e(this, 0, n);
        S1Elem red = g.reduce_mod_p();
        if (!(red == S1Elem::basis(this, e * n)))
            throw InvalidParams("Fil^n support self-test failed at n = " + std::to_string(n));
        if (fact_val_[static_cast<size_t>(n)] != 0)
            throw InvalidParams("Fil^n self-test: n! is not a unit at n = " + std::to_string(n));
    }
}

const S1Elem& RingParams::c() const { return c_store_[0]; }
const S1Elem& RingParams::c_closed_form() const { return c_store_[1]; }
const S1Elem& RingParams::c_inverse() const { return c_store_[2]; }

FieldElem RingParams::c_pi() const { return project_tilde(c()).coeff(0); }

const S1Elem& RingParams::phi_r_basis(int64_t i) const {
    if (i < 0 || i >= trunc_degree || !phi_r_valid_[static_cast<size_t>(i)])
        throw NotInFil("basis element at degree " + std::to_string(i) + " is not in Fil^r");
    return phi_r_table_[static_cast<size_t>(i)];
}

// --- S1Elem --------------------------------------------------------------

S1Elem S1Elem::one(const RingParams* ring) {
    S1Elem x(ring);
    x.terms_[0] = FieldElem::one(ring->field);
    return x;
}

S1Elem S1Elem::basis(const RingParams* ring, int64_t i) {
    S1Elem x(ring);
    if (i < 0 || i >= ring->trunc_degree)
        throw InvalidParams("basis degree out of range");
    x.terms_[i] = FieldElem::one(ring->field);
    return x;
}

S1Elem S1Elem::monomial(const RingParams* ring, int64_t t) {
    S1Elem x(ring);
    if (t < 0 || t >= ring->trunc_degree) return x; // truncated away
    int64_t qf = ring->fact_val(ring->q(t)) > 0 ? 0 : ring->fact_unit_mod_p(ring->q(t));
    if (qf != 0) x.terms_[t] = FieldElem(ring->field, qf);
    return x;
}

S1Elem S1Elem::scalar(const RingParams* ring, const FieldElem& w) {
    S1Elem x(ring);
    if (!w.is_zero()) x.terms_[0] = w;
    return x;
}

FieldElem S1Elem::coeff(int64_t i) const {
    auto it = terms_.find(i);
    return it == terms_.end() ? FieldElem::zero(ring_->field) : it->second;
}

void S1Elem::set_coeff(int64_t i, const FieldElem& w) {
    if (w.is_zero())
        terms_.erase(i);
    else
        terms_[i] = w;
}

int64_t S1Elem::fil_level() const {
    int64_t lvl = kInfLevel;
    for (const auto& [i, w] : terms_) lvl = std::min(lvl, ring_->q(i));
    return lvl;
}

S1Elem S1Elem::operator+(const S1Elem& o) const {
    S1Elem out = *this;
    for (const auto& [i, w] : o.terms_) out.set_coeff(i, out.coeff(i) + w);
    return out;
}

S1Elem S1Elem::operator-(const S1Elem& o) const {
    S1Elem out = *this;
    for (const auto& [i, w] : o.terms_) out.set_coeff(i, out.coeff(i) - w);
    return out;
}

S1Elem S1Elem::operator-() const {
    S1Elem out(ring_);
    for (const auto& [i, w] : terms_) out.terms_[i] = -w;
    return out;
}

S1Elem S1Elem::operator*(const S1Elem& o) const { return s1_mul(*this, o); }

S1Elem S1Elem::scaled(const FieldElem& w) const {
    S1Elem out(ring_);
    if (w.is_zero()) return out;
    for (const auto& [i, v] : terms_) {
        FieldElem prod = v * w;
        if (!prod.is_zero()) out.terms_[i] = prod;
    }
    return out;
}

bool S1Elem::operator==(const S1Elem& o) const {
    return ring_ == o.ring_ && terms_ == o.terms_;
}

S1Elem S1Elem::inverse() const {
    if (is_zero() || coeff(0).is_zero())
        throw InvalidParams("inverse of a non-unit in S1");
    FieldElem w0 = coeff(0);
    S1Elem nil = (*this).scaled(w0.inverse()) - one(ring_); // nilpotent part
    S1Elem acc = one(ring_);
    S1Elem pw = one(ring_);
    while (true) {
        pw = s1_mul(pw, -nil);
        if (pw.is_zero()) break;
        acc = acc + pw;
    }
    return acc.scaled(w0.inverse());
}

S1Elem S1Elem::pow(int64_t n) const {
    if (n < 0) return inverse().pow(-n);
    S1Elem acc = one(ring_);
    S1Elem b = *this;
    while (n > 0) {
        if (n & 1) acc = s1_mul(acc, b);
        b = s1_mul(b, b);
        n >>= 1;
    }
    return acc;
}

// --- TildeSElem ----------------------------------------------------------

TildeSElem::TildeSElem(const RingParams* ring)
    : ring_(ring), c_(static_cast<size_t>(ring->p()), FieldElem::zero(ring->field)) {}

TildeSElem TildeSElem::one(const RingParams* ring) {
    TildeSElem x(ring);
    x.c_[0] = FieldElem::one(ring->field);
    return x;
}

TildeSElem TildeSElem::monomial(const RingParams* ring, int64_t t, const FieldElem& w) {
    TildeSElem x(ring);
    if (t >= 0 && t < ring->p()) x.c_[static_cast<size_t>(t)] = w;
    return x;
}

TildeSElem TildeSElem::scalar(const RingParams* ring, const FieldElem& w) {
    return monomial(ring, 0, w);
}

bool TildeSElem::is_zero() const {
    for (const auto& w : c_)
        if (!w.is_zero()) return false;
    return true;
}

int64_t TildeSElem::u_valuation() const {
    for (size_t i = 0; i < c_.size(); ++i)
        if (!c_[i].is_zero()) return static_cast<int64_t>(i);
    return ring_->p();
}

bool TildeSElem::in_fil(int64_t n) const { return u_valuation() >= ring_->e * n; }

TildeSElem TildeSElem::operator+(const TildeSElem& o) const {
    TildeSElem out(ring_);
    for (size_t i = 0; i < c_.size(); ++i) out.c_[i] = c_[i] + o.c_[i];
    return out;
}

TildeSElem TildeSElem::operator-(const TildeSElem& o) const {
    TildeSElem out(ring_);
    for (size_t i = 0; i < c_.size(); ++i) out.c_[i] = c_[i] - o.c_[i];
    return out;
}

TildeSElem TildeSElem::operator-() const {
    TildeSElem out(ring_);
    for (size_t i = 0; i < c_.size(); ++i) out.c_[i] = -c_[i];
    return out;
}

TildeSElem TildeSElem::operator*(const TildeSElem& o) const {
    TildeSElem out(ring_);
    const int64_t P = ring_->p();
    for (int64_t i = 0; i < P; ++i) {
        if (c_[static_cast<size_t>(i)].is_zero()) continue;
        for (int64_t j = 0; i + j < P; ++j) {
            if (o.c_[static_cast<size_t>(j)].is_zero()) continue;
            out.c_[static_cast<size_t>(i + j)] =
                out.c_[static_cast<size_t>(i + j)] + c_[static_cast<size_t>(i)] * o.c_[static_cast<size_t>(j)];
        }
    }
    return out;
}

TildeSElem TildeSElem::scaled(const FieldElem& w) const {
    TildeSElem out(ring_);
    for (size_t i = 0; i < c_.size(); ++i) out.c_[i] = c_[i] * w;
    return out;
}

TildeSElem TildeSElem::inverse() const {
    if (!is_unit()) throw InvalidParams("inverse of a non-unit in k[u]/u^p");
    TildeSElem out(ring_);
    FieldElem w0inv = c_[0].inverse();
    out.c_[0] = w0inv;
    const int64_t P = ring_->p();
    for (int64_t n = 1; n < P; ++n) {
        FieldElem s = FieldElem::zero(ring_->field);
        for (int64_t t = 1; t <= n; ++t)
            s = s + c_[static_cast<size_t>(t)] * out.c_[static_cast<size_t>(n - t)];
        out.c_[static_cast<size_t>(n)] = -(w0inv * s);
    }
    return out;
}

bool TildeSElem::operator==(const TildeSElem& o) const {
    return ring_ == o.ring_ && c_ == o.c_;
}

TildeSElem TildeSElem::phi() const {
    TildeSElem out(ring_);
    out.c_[0] = c_[0].frobenius(1);
    return out;
}

TildeSElem TildeSElem::N() const {
    TildeSElem out(ring_);
    for (size_t i = 0; i < c_.size(); ++i)
        out.c_[i] = c_[i].scaled(-static_cast<int64_t>(i));
    return out;
}

// --- module operations ---------------------------------------------------

FieldElem dp_coeff(const RingParams* ring, int64_t i, int64_t j) {
    if (i < 0 || j < 0) throw InvalidParams("dp_coeff degrees must be nonnegative");
    return FieldElem(ring->field, ring->dp_coeff_int(i, j));
}

S1Elem s1_mul(const S1Elem& a, const S1Elem& b) {
    const RingParams* ring = a.ring();
    if (ring != b.ring()) throw InvalidParams("s1_mul operands from different rings");
    S1Elem out(ring);
    for (const auto& [i, wi] : a.terms())
        for (const auto& [j, wj] : b.terms()) {
            if (i + j >= ring->trunc_degree) continue;
            int64_t sc = ring->dp_coeff_int(i, j);
            if (sc == 0) continue;
            FieldElem add = (wi * wj).scaled(sc);
            if (!add.is_zero()) out.set_coeff(i + j, out.coeff(i + j) + add);
        }
    return out;
}

S1Elem s1_phi(const S1Elem& a) {
    const RingParams* ring = a.ring();
    S1Elem out(ring);
    const int64_t P = ring->p();
    for (const auto& [i, w] : a.terms()) {
        int64_t pi = P * i;
        if (pi >= ring->trunc_degree) continue;
        int64_t v = ring->fact_val(ring->q(pi)) - ring->fact_val(ring->q(i));
        if (v > 0) continue;
        int64_t unit = ring->fact_unit_mod_p(ring->q(pi)) *
                       ring->field->inv_mod_p(ring->fact_unit_mod_p(ring->q(i))) % P;
        FieldElem add = w.frobenius(1).scaled(unit);
        if (!add.is_zero()) out.set_coeff(pi, out.coeff(pi) + add);
    }
    return out;
}

S1Elem s1_N(const S1Elem& a) {
    S1Elem out(a.ring());
    for (const auto& [i, w] : a.terms()) {
        FieldElem add = w.scaled(-i);
        if (!add.is_zero()) out.set_coeff(i, add);
    }
    return out;
}

S1Elem s1_phi_r(const S1Elem& a) {
    const RingParams* ring = a.ring();
    if (!a.in_fil(ring->r))
        throw NotInFil("s1_phi_r argument is not in Fil^r (support violates q(i) >= r)");
    S1Elem out(ring);
    for (const auto& [i, w] : a.terms()) {
        const S1Elem& img = ring->phi_r_basis(i);
        if (img.is_zero()) continue;
        out = out + img.scaled(w.frobenius(1));
    }
    return out;
}

TildeSElem project_tilde(const S1Elem& a) {
    const RingParams* ring = a.ring();
    TildeSElem out(ring);
    for (const auto& [i, w] : a.terms()) {
        if (i >= ring->p()) continue;
        // q(i) < p here, so q(i)! is a unit
        int64_t inv = ring->field->inv_mod_p(ring->fact_unit_mod_p(ring->q(i)));
        out.set_coeff(i, w.scaled(inv));
    }
    return out;
}

S1Elem canonical_section(const TildeSElem& a) {
    const RingParams* ring = a.ring();
    S1Elem out(ring);
    for (int64_t t = 0; t < ring->p(); ++t) {
        const FieldElem& w = a.coeff(t);
        if (w.is_zero()) continue;
        out.set_coeff(t, w.scaled(ring->fact_unit_mod_p(ring->q(t))));
    }
    return out;
}

std::pair<S1Elem, FieldElem> c_pi(const RingParams* ring) {
    return {ring->c(), ring->c_pi()};
}

} // namespace breuil
