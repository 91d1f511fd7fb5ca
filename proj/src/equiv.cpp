// SPDX-License-Identifier: Apache-2.0
#include "breuil/equiv.hpp"

#include <algorithm>
#include <random>

namespace breuil {

namespace {

S1Elem s1_monomial(const RingParams* ring, int64_t t) { return S1Elem::monomial(ring, t); }

std::string describe(const SVec& x) {
    std::string s = "(";
    for (size_t i = 0; i < x.size(); ++i) {
        if (i) s += ", ";
        s += "{";
        bool first = true;
        for (const auto& [deg, w] : x[i].terms()) {
            if (!first) s += " ";
            first = false;
            s += std::to_string(deg) + ":" + std::to_string(w.encode());
        }
        s += "}";
    }
    return s + ")";
}

void check_shapes(const S1Module& m) {
    if (m.d <= 0) throw DimensionMismatch("rank must be positive");
    if (m.phi_fil_gens.size() != m.fil_gens.size())
        throw DimensionMismatch("phi_fil_gens size differs from fil_gens");
    if (m.phi_uer_basis.size() != static_cast<size_t>(m.d))
        throw DimensionMismatch("phi_uer_basis must have one column per basis vector");
    if (m.n_basis.size() != static_cast<size_t>(m.d))
        throw DimensionMismatch("n_basis must have one column per basis vector");
    for (const auto& col : m.fil_gens)
        if (col.size() != static_cast<size_t>(m.d)) throw DimensionMismatch("generator of wrong rank");
    for (const auto& col : m.phi_fil_gens)
        if (col.size() != static_cast<size_t>(m.d)) throw DimensionMismatch("phi image of wrong rank");
    for (const auto& col : m.phi_uer_basis)
        if (col.size() != static_cast<size_t>(m.d)) throw DimensionMismatch("phi image of wrong rank");
    for (const auto& col : m.n_basis)
        if (col.size() != static_cast<size_t>(m.d)) throw DimensionMismatch("N column of wrong rank");
}

// generator list gamma_t = fil_gens then u^{er} e_k, with phi images
std::vector<std::pair<SVec, SVec>> s1_fil_generators(const S1Module& m) {
    std::vector<std::pair<SVec, SVec>> out;
    for (size_t j = 0; j < m.fil_gens.size(); ++j)
        out.emplace_back(m.fil_gens[j], m.phi_fil_gens[j]);
    const S1Elem uer = s1_monomial(m.ring, m.ring->e * m.ring->r);
    for (int64_t k = 0; k < m.d; ++k)
        out.emplace_back(svec_scale(svec_basis(m.ring, m.d, k), uer),
                         m.phi_uer_basis[static_cast<size_t>(k)]);
    return out;
}

// expand target = sum_t s_t y_t with s_t in S1, where the y_t generate the
// module (their reductions mod u span); solved degree by degree.
std::vector<S1Elem> expand_in_images(const S1Module& m, const std::vector<SVec>& images,
                                     const SVec& target) {
    const RingParams* ring = m.ring;
    Mat y0(ring->field, static_cast<size_t>(m.d), images.size());
    for (size_t t = 0; t < images.size(); ++t)
        for (int64_t i = 0; i < m.d; ++i)
            y0.at(static_cast<size_t>(i), t) = images[t][static_cast<size_t>(i)].coeff(0);
    std::vector<S1Elem> coeffs(images.size(), S1Elem::zero(ring));
    SVec residual = target;
    for (int64_t deg = 0; deg < ring->trunc_degree; ++deg) {
        std::vector<FieldElem> rho(static_cast<size_t>(m.d), FieldElem::zero(ring->field));
        bool nonzero = false;
        for (int64_t i = 0; i < m.d; ++i) {
            rho[static_cast<size_t>(i)] = residual[static_cast<size_t>(i)].coeff(deg);
            if (!rho[static_cast<size_t>(i)].is_zero()) nonzero = true;
        }
        if (!nonzero) continue;
        auto sol = solve(y0, rho);
        if (!sol)
            throw LiftInconsistent("phi images do not generate the module (degree " +
                                   std::to_string(deg) + ")");
        for (size_t t = 0; t < images.size(); ++t) {
            if ((*sol)[t].is_zero()) continue;
            S1Elem mono = S1Elem::basis(ring, deg).scaled((*sol)[t]);
            coeffs[t] = coeffs[t] + mono;
            residual = svec_sub(residual, svec_scale(images[t], mono));
        }
    }
    for (const auto& comp : residual)
        if (!comp.is_zero()) throw LiftInconsistent("expansion left a nonzero residual");
    return coeffs;
}

} // namespace

SVec svec_zero(const RingParams* ring, int64_t d) {
    return SVec(static_cast<size_t>(d), S1Elem::zero(ring));
}

SVec svec_basis(const RingParams* ring, int64_t d, int64_t k) {
    SVec v = svec_zero(ring, d);
    v[static_cast<size_t>(k)] = S1Elem::one(ring);
    return v;
}

SVec svec_add(const SVec& a, const SVec& b) {
    if (a.size() != b.size()) throw DimensionMismatch("module element ranks differ");
    SVec out(a.size());
    for (size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
    return out;
}

SVec svec_sub(const SVec& a, const SVec& b) {
    if (a.size() != b.size()) throw DimensionMismatch("module element ranks differ");
    SVec out(a.size());
    for (size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
    return out;
}

SVec svec_scale(const SVec& a, const S1Elem& s) {
    SVec out(a.size());
    for (size_t i = 0; i < a.size(); ++i) out[i] = s1_mul(a[i], s);
    return out;
}

SVec svec_scale_field(const SVec& a, const FieldElem& w) {
    SVec out(a.size());
    for (size_t i = 0; i < a.size(); ++i) out[i] = a[i].scaled(w);
    return out;
}

bool svec_is_zero(const SVec& a) {
    for (const auto& c : a)
        if (!c.is_zero()) return false;
    return true;
}

TVec svec_project(const SVec& a) {
    TVec out(a.size());
    for (size_t i = 0; i < a.size(); ++i) out[i] = project_tilde(a[i]);
    return out;
}

SVec svec_section(const TVec& a) {
    SVec out(a.size());
    for (size_t i = 0; i < a.size(); ++i) out[i] = canonical_section(a[i]);
    return out;
}

SVec module_N(const S1Module& m, const SVec& x) {
    SVec out = svec_zero(m.ring, m.d);
    for (int64_t k = 0; k < m.d; ++k) {
        out[static_cast<size_t>(k)] = out[static_cast<size_t>(k)] + s1_N(x[static_cast<size_t>(k)]);
    }
    for (int64_t k = 0; k < m.d; ++k) {
        if (x[static_cast<size_t>(k)].is_zero()) continue;
        out = svec_add(out, svec_scale(m.n_basis[static_cast<size_t>(k)], x[static_cast<size_t>(k)]));
    }
    return out;
}

// --- S1FilSolver -----------------------------------------------------------

std::vector<FieldElem> S1FilSolver::low_coords(const SVec& x) const {
    const RingParams* ring = m_->ring;
    const int64_t low = ring->e * ring->r; // degrees with q(i) < r
    std::vector<FieldElem> out;
    out.reserve(static_cast<size_t>(m_->d * low));
    for (int64_t k = 0; k < m_->d; ++k)
        for (int64_t i = 0; i < low; ++i) out.push_back(x[static_cast<size_t>(k)].coeff(i));
    return out;
}

S1FilSolver::S1FilSolver(const S1Module& m) : m_(&m) {
    const RingParams* ring = m.ring;
    const int64_t low = ring->e * ring->r;
    std::vector<std::vector<FieldElem>> columns;
    for (size_t j = 0; j < m.fil_gens.size(); ++j) {
        for (int64_t t = 0; t < ring->trunc_degree; ++t) {
            SVec col = svec_scale(m.fil_gens[j], S1Elem::basis(ring, t));
            auto lc = low_coords(col);
            bool nonzero = false;
            for (const auto& w : lc)
                if (!w.is_zero()) { nonzero = true; break; }
            if (!nonzero) continue; // contributes only to the ideal part
            columns.push_back(std::move(lc));
            col_index_.emplace_back(static_cast<int64_t>(j), t);
        }
    }
    low_cols_ = Mat(ring->field, static_cast<size_t>(m.d * low), columns.size());
    for (size_t c = 0; c < columns.size(); ++c)
        for (size_t row = 0; row < columns[c].size(); ++row) low_cols_.at(row, c) = columns[c][row];
}

bool S1FilSolver::contains(const SVec& x) const { return present(x).has_value(); }

std::optional<S1Presentation> S1FilSolver::present(const SVec& x) const {
    const RingParams* ring = m_->ring;
    auto sol = solve(low_cols_, low_coords(x));
    if (!sol) return std::nullopt;
    S1Presentation pres;
    pres.gen_coeffs.assign(m_->fil_gens.size(), S1Elem::zero(ring));
    for (size_t c = 0; c < sol->size(); ++c) {
        if ((*sol)[c].is_zero()) continue;
        auto [j, t] = col_index_[c];
        pres.gen_coeffs[static_cast<size_t>(j)] =
            pres.gen_coeffs[static_cast<size_t>(j)] + S1Elem::basis(ring, t).scaled((*sol)[c]);
    }
    SVec residual = x;
    for (size_t j = 0; j < m_->fil_gens.size(); ++j)
        residual = svec_sub(residual, svec_scale(m_->fil_gens[j], pres.gen_coeffs[j]));
    // the residual must lie in Fil^r S1 . M by construction of the solve
    for (const auto& comp : residual)
        if (!comp.in_fil(ring->r)) return std::nullopt;
    pres.ideal_part = residual;
    return pres;
}

// --- phi_r -------------------------------------------------------------------

SVec apply_phi_r(const S1Module& m, const S1Presentation& pres) {
    if (pres.gen_coeffs.size() != m.fil_gens.size())
        throw DimensionMismatch("presentation does not match the module");
    const RingParams* ring = m.ring;
    SVec out = svec_zero(ring, m.d);
    for (size_t j = 0; j < pres.gen_coeffs.size(); ++j) {
        if (pres.gen_coeffs[j].is_zero()) continue;
        out = svec_add(out, svec_scale(m.phi_fil_gens[j], s1_phi(pres.gen_coeffs[j])));
    }
    if (!pres.ideal_part.empty()) {
        const S1Elem c_inv_r = ring->c_inverse().pow(ring->r);
        for (int64_t k = 0; k < m.d; ++k) {
            const S1Elem& s = pres.ideal_part[static_cast<size_t>(k)];
            if (s.is_zero()) continue;
            S1Elem factor = s1_mul(c_inv_r, s1_phi_r(s));
            if (factor.is_zero()) continue;
            out = svec_add(out, svec_scale(m.phi_uer_basis[static_cast<size_t>(k)], factor));
        }
    }
    return out;
}

SVec apply_phi_r(const S1Module& m, const SVec& x) {
    S1FilSolver solver(m);
    auto pres = solver.present(x);
    if (!pres) throw NotInFil("element is not in Fil^r of the S1-module");
    return apply_phi_r(m, *pres);
}

// --- validation ----------------------------------------------------------------

Report validate(const S1Module& m) {
    check_shapes(m);
    Report rep;
    const RingParams* ring = m.ring;
    auto gens = s1_fil_generators(m);

    rep.add("fil_contains_filr_module", true, "by representation");

    {
        Mat red(ring->field, static_cast<size_t>(m.d), gens.size());
        for (size_t j = 0; j < gens.size(); ++j)
            for (int64_t i = 0; i < m.d; ++i)
                red.at(static_cast<size_t>(i), j) = gens[j].second[static_cast<size_t>(i)].coeff(0);
        bool ok = rank(red) == static_cast<size_t>(m.d);
        rep.add("phi_image_generates", ok, ok ? "" : "phi images have rank < d modulo u");
    }

    // presentation independence, sampled: random presentations of random
    // Fil elements against the canonical one
    {
        S1FilSolver solver(m);
        bool ok = true;
        std::string witness;
        std::mt19937_64 rng(991);
        for (int it = 0; it < 12 && ok; ++it) {
            S1Presentation p1;
            p1.gen_coeffs.assign(m.fil_gens.size(), S1Elem::zero(ring));
            p1.ideal_part = svec_zero(ring, m.d);
            SVec x = svec_zero(ring, m.d);
            for (size_t j = 0; j < m.fil_gens.size(); ++j) {
                int64_t t = static_cast<int64_t>(rng() % static_cast<uint64_t>(ring->trunc_degree));
                FieldElem w = FieldElem::decode(
                    ring->field, static_cast<int64_t>(rng() % static_cast<uint64_t>(ring->field->card())));
                p1.gen_coeffs[j] = S1Elem::basis(ring, t).scaled(w);
                x = svec_add(x, svec_scale(m.fil_gens[j], p1.gen_coeffs[j]));
            }
            for (int64_t k = 0; k < m.d; ++k) {
                int64_t lo = ring->e * ring->r;
                int64_t t = lo + static_cast<int64_t>(
                                     rng() % static_cast<uint64_t>(ring->trunc_degree - lo));
                FieldElem w = FieldElem::decode(
                    ring->field, static_cast<int64_t>(rng() % static_cast<uint64_t>(ring->field->card())));
                p1.ideal_part[static_cast<size_t>(k)] = S1Elem::basis(ring, t).scaled(w);
                x[static_cast<size_t>(k)] = x[static_cast<size_t>(k)] + p1.ideal_part[static_cast<size_t>(k)];
            }
            auto p2 = solver.present(x);
            if (!p2) { ok = false; witness = "built element not recognized in Fil"; break; }
            SVec v1 = apply_phi_r(m, p1), v2 = apply_phi_r(m, *p2);
            if (!(v1 == v2)) {
                ok = false;
                witness = "presentations disagree: " + describe(v1) + " vs " + describe(v2);
            }
        }
        rep.add("phi_well_defined_sampled", ok, witness);
    }

    // N stability and the exact-c commutation square on all generators
    {
        S1FilSolver solver(m);
        bool stable = true, square = true;
        std::string w1, w2;
        const S1Elem& c = ring->c();
        const S1Elem ebar = s1_monomial(ring, ring->e);
        for (size_t j = 0; j < gens.size() && stable && square; ++j) {
            SVec en = svec_scale(module_N(m, gens[j].first), ebar);
            auto pres = solver.present(en);
            if (!pres) {
                stable = false;
                w1 = "E N(gen " + std::to_string(j) + ") leaves Fil^r";
                square = false;
                w2 = w1;
                break;
            }
            SVec lhs = apply_phi_r(m, *pres);
            SVec rhs = svec_scale(module_N(m, gens[j].second), c);
            if (!(lhs == rhs)) {
                square = false;
                w2 = "gen " + std::to_string(j) + ": phi_r(E N x) = " + describe(lhs) +
                     " but c N(phi_r x) = " + describe(rhs);
            }
        }
        rep.add("n_stability", stable, w1);
        rep.add("phi_n_square_exact_c", square, w2);
    }

    return rep;
}

// --- functor T ---------------------------------------------------------------

TildeModule functor_T(const S1Module& m) {
    check_shapes(m);
    TildeModule out;
    out.ring = m.ring;
    out.d = m.d;
    for (const auto& g : m.fil_gens) out.fil_gens.push_back(svec_project(g));
    for (const auto& f : m.phi_fil_gens) out.phi_fil_gens.push_back(svec_project(f));
    for (const auto& f : m.phi_uer_basis) out.phi_uer_basis.push_back(svec_project(f));
    out.n_mat = Mat(m.ring->field, static_cast<size_t>(m.d), static_cast<size_t>(m.d));
    for (int64_t k = 0; k < m.d; ++k) {
        TVec col = svec_project(m.n_basis[static_cast<size_t>(k)]);
        for (int64_t j = 0; j < m.d; ++j) {
            const TildeSElem& entry = col[static_cast<size_t>(j)];
            for (int64_t t = 1; t < m.ring->p(); ++t)
                if (!entry.coeff(t).is_zero())
                    throw InvalidObject(
                        "monodromy does not reduce to a constant matrix on this basis");
            out.n_mat.at(static_cast<size_t>(j), static_cast<size_t>(k)) = entry.coeff(0);
        }
    }
    return out;
}

// --- lift_object ---------------------------------------------------------------

namespace {

// one correction round of the monodromy operator through the square
// phi_r(E N_s x) = c N_{s+1}(phi_r x) on Fil^r
std::vector<SVec> correct_N(const S1Module& m, const std::vector<std::vector<S1Elem>>& expansions) {
    const RingParams* ring = m.ring;
    auto gens = s1_fil_generators(m);
    S1FilSolver solver(m);
    const S1Elem c_inv = ring->c_inverse();
    const S1Elem ebar = s1_monomial(ring, ring->e);
    std::vector<SVec> z; // N_{s+1}(phi_r gamma_t)
    for (const auto& [gamma, phi_gamma] : gens) {
        SVec en = svec_scale(module_N(m, gamma), ebar);
        auto pres = solver.present(en);
        if (!pres)
            throw InvalidObject("E N(generator) left Fil^r during the correction round");
        z.push_back(svec_scale(apply_phi_r(m, *pres), c_inv));
    }
    std::vector<SVec> out;
    for (int64_t j = 0; j < m.d; ++j) {
        const auto& coeffs = expansions[static_cast<size_t>(j)];
        SVec acc = svec_zero(ring, m.d);
        for (size_t t = 0; t < gens.size(); ++t) {
            if (!coeffs[t].is_zero()) {
                acc = svec_add(acc, svec_scale(gens[t].second, s1_N(coeffs[t])));
                acc = svec_add(acc, svec_scale(z[t], coeffs[t]));
            }
        }
        out.push_back(acc);
    }
    return out;
}

bool n_square_exact(const S1Module& m) {
    const RingParams* ring = m.ring;
    auto gens = s1_fil_generators(m);
    S1FilSolver solver(m);
    const S1Elem ebar = s1_monomial(ring, ring->e);
    for (const auto& [gamma, phi_gamma] : gens) {
        SVec en = svec_scale(module_N(m, gamma), ebar);
        auto pres = solver.present(en);
        if (!pres) return false;
        SVec lhs = apply_phi_r(m, *pres);
        SVec rhs = svec_scale(module_N(m, phi_gamma), ring->c());
        if (!(lhs == rhs)) return false;
    }
    return true;
}

} // namespace

S1Module lift_object(const TildeModule& tm, const LiftOptions& opts) {
    const RingParams* ring = tm.ring;
    const int64_t d = tm.d;

    AdaptedBasis ab = adapted_basis(tm);
    FilSolver tsolver(tm);

    S1Module m;
    m.ring = ring;
    m.d = d;

    // free module on the adapted basis; Fil generated by u^{n_i} e_i
    std::vector<TVec> phi_adapted;
    for (int64_t i = 0; i < d; ++i) {
        TVec gen_tilde = tvec_scale(ab.basis_cols[static_cast<size_t>(i)],
                                    TildeSElem::monomial(ring, ab.weights[static_cast<size_t>(i)],
                                                         FieldElem::one(ring->field)));
        auto pres = tsolver.present(gen_tilde);
        if (!pres) throw InvalidObject("adapted generator not recognized in Fil^r");
        phi_adapted.push_back(apply_phi_r(tm, *pres));
        m.fil_gens.push_back(svec_scale(svec_basis(ring, d, i), s1_monomial(ring, ab.weights[static_cast<size_t>(i)])));
    }

    // express phi values and N values in the adapted coordinates
    auto binv_cols = tilde_matrix_inverse(ring, ab.basis_cols);
    auto to_adapted = [&](const TVec& x) {
        TVec out = tvec_zero(ring, d);
        for (int64_t j = 0; j < d; ++j)
            if (!x[static_cast<size_t>(j)].is_zero())
                out = tvec_add(out, tvec_scale(binv_cols[static_cast<size_t>(j)], x[static_cast<size_t>(j)]));
        return out;
    };

    for (int64_t i = 0; i < d; ++i)
        m.phi_fil_gens.push_back(svec_section(to_adapted(phi_adapted[static_cast<size_t>(i)])));

    // phi_r(u^{er} e_k) = phi(u^{er-n_k}) phi_r(u^{n_k} e_k)
    const int64_t er = ring->e * ring->r;
    for (int64_t k = 0; k < d; ++k) {
        S1Elem factor = s1_phi(s1_monomial(ring, er - ab.weights[static_cast<size_t>(k)]));
        m.phi_uer_basis.push_back(svec_scale(m.phi_fil_gens[static_cast<size_t>(k)], factor));
    }

    // monodromy: Leibniz lift of N in the adapted coordinates
    for (int64_t i = 0; i < d; ++i) {
        TVec nf = module_N(tm, ab.basis_cols[static_cast<size_t>(i)]);
        m.n_basis.push_back(svec_section(to_adapted(nf)));
    }

    if (ring->r == 0) {
        // the square reads 0 = c N(phi_0 x); solve for kappa-corrections of
        // N(e_k) making N vanish on the phi images
        const int64_t D = ring->trunc_degree;
        std::vector<int64_t> kappa_degs;
        for (int64_t i = ring->p(); i < D; ++i) kappa_degs.push_back(i);
        const size_t nk = kappa_degs.size();
        const size_t unknowns = static_cast<size_t>(d * d) * nk;
        // N(y_k) = sum_j N(y_kj) e_j + sum_j y_kj nu_j = 0, nu_j = base_j + corr_j
        std::vector<SVec> base = m.n_basis;
        Mat a(ring->field, static_cast<size_t>(d * d * D), unknowns);
        std::vector<FieldElem> bvec(static_cast<size_t>(d * d * D), FieldElem::zero(ring->field));
        for (int64_t k = 0; k < d; ++k) {
            const SVec& y = m.phi_uer_basis[static_cast<size_t>(k)]; // phi_0(e_k)
            SVec rhs = svec_zero(ring, d);
            for (int64_t j = 0; j < d; ++j)
                rhs[static_cast<size_t>(j)] = s1_N(y[static_cast<size_t>(j)]);
            for (int64_t j = 0; j < d; ++j)
                rhs = svec_add(rhs, svec_scale(base[static_cast<size_t>(j)], y[static_cast<size_t>(j)]));
            // row block for equation N(y_k) = 0
            for (int64_t row_j = 0; row_j < d; ++row_j)
                for (int64_t deg = 0; deg < D; ++deg) {
                    size_t row = static_cast<size_t>((k * d + row_j) * D + deg);
                    bvec[row] = -rhs[static_cast<size_t>(row_j)].coeff(deg);
                }
            // coefficient of corr_j at kappa degree t contributes y_kj * basis(t)
            for (int64_t j = 0; j < d; ++j) {
                const S1Elem& ykj = y[static_cast<size_t>(j)];
                if (ykj.is_zero()) continue;
                for (size_t ti = 0; ti < nk; ++ti) {
                    S1Elem prod = s1_mul(ykj, S1Elem::basis(ring, kappa_degs[ti]));
                    // the correction of N(e_j) at component cc contributes to
                    // equation k at the same component
                    for (int64_t cc = 0; cc < d; ++cc) {
                        size_t colidx = (static_cast<size_t>(j * d + cc)) * nk + ti;
                        for (const auto& [deg, w] : prod.terms()) {
                            size_t row = static_cast<size_t>((k * d + cc) * D + deg);
                            a.at(row, colidx) = a.at(row, colidx) + w;
                        }
                    }
                }
            }
        }
        auto sol = solve(a, bvec);
        if (!sol)
            throw InvalidObject("no kappa-correction makes N vanish on the phi images (r = 0)");
        for (int64_t j = 0; j < d; ++j)
            for (int64_t cc = 0; cc < d; ++cc)
                for (size_t ti = 0; ti < nk; ++ti) {
                    const FieldElem& w = (*sol)[(static_cast<size_t>(j * d + cc)) * nk + ti];
                    if (!w.is_zero())
                        m.n_basis[static_cast<size_t>(j)][static_cast<size_t>(cc)] =
                            m.n_basis[static_cast<size_t>(j)][static_cast<size_t>(cc)] +
                            S1Elem::basis(ring, kappa_degs[ti]).scaled(w);
                }
        if (!n_square_exact(m))
            throw InvalidObject("r = 0 lift does not satisfy the commutation square");
        return m;
    }

    // two correction rounds; the kernel ideal dies after two divided
    // Frobenius applications, so the sequence stabilizes
    std::vector<std::vector<S1Elem>> expansions;
    {
        auto gens = s1_fil_generators(m);
        std::vector<SVec> images;
        for (const auto& g : gens) images.push_back(g.second);
        for (int64_t j = 0; j < d; ++j)
            expansions.push_back(expand_in_images(m, images, svec_basis(ring, d, j)));
    }
    m.n_basis = correct_N(m, expansions);
    m.n_basis = correct_N(m, expansions);
    if (opts.third_round_check) {
        auto third = correct_N(m, expansions);
        if (!(third == m.n_basis))
            throw InvalidObject("monodromy correction did not stabilize after two rounds");
    }
    if (!n_square_exact(m))
        throw InvalidObject("lifted object violates the exact commutation square");
    return m;
}

// --- lift_morphism ----------------------------------------------------------

std::vector<SVec> lift_morphism(const S1Module& m, const S1Module& mp, const TildeMorphism& f,
                                const LiftOptions& opts) {
    const RingParams* ring = m.ring;
    if (mp.ring != ring || f.source.ring != ring)
        throw DimensionMismatch("modules live over different rings");
    if (f.source.d != m.d || f.target.d != mp.d)
        throw DimensionMismatch("morphism ranks do not match the S1 objects");
    if (!check_morphism(f).all_pass())
        throw NotAMorphism("input is not a morphism of reduced objects");

    auto gens = s1_fil_generators(m);
    std::vector<SVec> images;
    for (const auto& g : gens) images.push_back(g.second);
    std::vector<std::vector<S1Elem>> expansions;
    for (int64_t j = 0; j < m.d; ++j)
        expansions.push_back(expand_in_images(m, images, svec_basis(ring, m.d, j)));

    S1FilSolver solver_p(mp);

    // f_0: coefficient-wise canonical lift of the reduced matrix
    std::vector<SVec> cur;
    for (int64_t k = 0; k < m.d; ++k) cur.push_back(svec_section(f.mat_cols[static_cast<size_t>(k)]));

    auto apply_cols = [&](const std::vector<SVec>& cols, const SVec& x) {
        SVec out = svec_zero(ring, mp.d);
        for (int64_t k = 0; k < m.d; ++k)
            if (!x[static_cast<size_t>(k)].is_zero())
                out = svec_add(out, svec_scale(cols[static_cast<size_t>(k)], x[static_cast<size_t>(k)]));
        return out;
    };

    const int rounds = ring->r == 0 ? 1 : 2;
    for (int round = 0; round < rounds; ++round) {
        // values of the next map on the phi images of the generators
        std::vector<SVec> vals;
        for (const auto& [gamma, phi_gamma] : gens) {
            SVec fg = apply_cols(cur, gamma);
            auto pres = solver_p.present(fg);
            if (!pres)
                throw LiftInconsistent("image of a Fil generator leaves Fil^r during lifting");
            vals.push_back(apply_phi_r(mp, *pres));
        }
        std::vector<SVec> next;
        for (int64_t j = 0; j < m.d; ++j) {
            SVec acc = svec_zero(ring, mp.d);
            for (size_t t = 0; t < gens.size(); ++t)
                if (!expansions[static_cast<size_t>(j)][t].is_zero())
                    acc = svec_add(acc, svec_scale(vals[t], expansions[static_cast<size_t>(j)][t]));
            next.push_back(acc);
        }
        cur = next;
    }

    if (opts.third_round_check && ring->r > 0) {
        std::vector<SVec> vals;
        for (const auto& [gamma, phi_gamma] : gens) {
            SVec fg = apply_cols(cur, gamma);
            auto pres = solver_p.present(fg);
            if (!pres) throw LiftInconsistent("stability round: image leaves Fil^r");
            vals.push_back(apply_phi_r(mp, *pres));
        }
        std::vector<SVec> next;
        for (int64_t j = 0; j < m.d; ++j) {
            SVec acc = svec_zero(ring, mp.d);
            for (size_t t = 0; t < gens.size(); ++t)
                if (!expansions[static_cast<size_t>(j)][t].is_zero())
                    acc = svec_add(acc, svec_scale(vals[t], expansions[static_cast<size_t>(j)][t]));
            next.push_back(acc);
        }
        if (!(next == cur)) throw LiftInconsistent("morphism correction did not stabilize");
    }

    // postconditions, all exact
    for (int64_t k = 0; k < m.d; ++k) {
        if (!(svec_project(cur[static_cast<size_t>(k)]) == f.mat_cols[static_cast<size_t>(k)]))
            throw LiftInconsistent("lift does not reduce to the given morphism");
    }
    for (const auto& [gamma, phi_gamma] : gens) {
        SVec fg = apply_cols(cur, gamma);
        auto pres = solver_p.present(fg);
        if (!pres) throw LiftInconsistent("lift does not preserve Fil^r");
        SVec lhs = apply_phi_r(mp, *pres);     // phi_r(f x)
        SVec rhs = apply_cols(cur, phi_gamma); // f(phi_r x)
        if (!(lhs == rhs)) throw LiftInconsistent("lift does not commute with phi_r exactly");
    }
    for (int64_t k = 0; k < m.d; ++k) {
        SVec lhs = module_N(mp, cur[static_cast<size_t>(k)]);
        SVec rhs = apply_cols(cur, m.n_basis[static_cast<size_t>(k)]);
        if (!(lhs == rhs))
            throw LiftInconsistent("lift does not commute with the monodromy operator");
    }
    return cur;
}

} // namespace breuil
