// SPDX-License-Identifier: Apache-2.0
#include "breuil/cat.hpp"

#include <algorithm>
#include <cassert>

namespace breuil {

namespace {

// flatten a module element into k-coordinates (d*p entries)
std::vector<FieldElem> flatten(const TVec& x) {
    const RingParams* ring = x.front().ring();
    std::vector<FieldElem> out;
    out.reserve(x.size() * static_cast<size_t>(ring->p()));
    for (const auto& comp : x)
        for (int64_t t = 0; t < ring->p(); ++t) out.push_back(comp.coeff(t));
    return out;
}

TildeSElem u_power(const RingParams* ring, int64_t t) {
    return TildeSElem::monomial(ring, t, FieldElem::one(ring->field));
}

std::string describe(const TVec& x) {
    std::string s = "(";
    for (size_t i = 0; i < x.size(); ++i) {
        if (i) s += ", ";
        s += "[";
        for (int64_t t = 0; t < x[i].ring()->p(); ++t) {
            if (t) s += " ";
            s += std::to_string(x[i].coeff(t).encode());
        }
        s += "]";
    }
    return s + ")";
}

void check_shapes(const TildeModule& m) {
    if (m.d <= 0) throw DimensionMismatch("rank must be positive");
    if (m.phi_fil_gens.size() != m.fil_gens.size())
        throw DimensionMismatch("phi_fil_gens size differs from fil_gens");
    if (m.phi_uer_basis.size() != static_cast<size_t>(m.d))
        throw DimensionMismatch("phi_uer_basis must have one column per basis vector");
    if (m.n_mat.rows() != static_cast<size_t>(m.d) || m.n_mat.cols() != static_cast<size_t>(m.d))
        throw DimensionMismatch("n_mat must be d x d");
    for (const auto& col : m.fil_gens)
        if (col.size() != static_cast<size_t>(m.d)) throw DimensionMismatch("fil generator has wrong rank");
    for (const auto& col : m.phi_fil_gens)
        if (col.size() != static_cast<size_t>(m.d)) throw DimensionMismatch("phi image has wrong rank");
    for (const auto& col : m.phi_uer_basis)
        if (col.size() != static_cast<size_t>(m.d)) throw DimensionMismatch("phi image has wrong rank");
}

} // namespace

TVec tvec_zero(const RingParams* ring, int64_t d) {
    return TVec(static_cast<size_t>(d), TildeSElem::zero(ring));
}

TVec tvec_basis(const RingParams* ring, int64_t d, int64_t k) {
    TVec v = tvec_zero(ring, d);
    v[static_cast<size_t>(k)] = TildeSElem::one(ring);
    return v;
}

TVec tvec_add(const TVec& a, const TVec& b) {
    if (a.size() != b.size()) throw DimensionMismatch("module element ranks differ");
    TVec out(a.size());
    for (size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
    return out;
}

TVec tvec_sub(const TVec& a, const TVec& b) {
    if (a.size() != b.size()) throw DimensionMismatch("module element ranks differ");
    TVec out(a.size());
    for (size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
    return out;
}

TVec tvec_scale(const TVec& a, const TildeSElem& s) {
    TVec out(a.size());
    for (size_t i = 0; i < a.size(); ++i) out[i] = a[i] * s;
    return out;
}

TVec tvec_scale_field(const TVec& a, const FieldElem& w) {
    TVec out(a.size());
    for (size_t i = 0; i < a.size(); ++i) out[i] = a[i].scaled(w);
    return out;
}

bool tvec_is_zero(const TVec& a) {
    for (const auto& c : a)
        if (!c.is_zero()) return false;
    return true;
}

SimpleObject SimpleObject::cyclic_simple(const RingParams* ring, const std::vector<int64_t>& weights) {
    SimpleObject s;
    s.ring = ring;
    s.d = static_cast<int64_t>(weights.size());
    s.weights = weights;
    s.G = Mat(ring->field, static_cast<size_t>(s.d), static_cast<size_t>(s.d));
    for (int64_t i = 0; i < s.d; ++i)
        s.G.at(static_cast<size_t>((i + 1) % s.d), static_cast<size_t>(i)) = FieldElem::one(ring->field);
    s.cyclic = true;
    return s;
}

std::vector<std::pair<TVec, TVec>> fil_generators(const TildeModule& m) {
    std::vector<std::pair<TVec, TVec>> out;
    for (size_t j = 0; j < m.fil_gens.size(); ++j)
        out.emplace_back(m.fil_gens[j], m.phi_fil_gens[j]);
    const TildeSElem uer = u_power(m.ring, m.ring->e * m.ring->r);
    for (int64_t k = 0; k < m.d; ++k)
        out.emplace_back(tvec_scale(tvec_basis(m.ring, m.d, k), uer),
                         m.phi_uer_basis[static_cast<size_t>(k)]);
    return out;
}

TVec module_N(const TildeModule& m, const TVec& x) {
    TVec out = tvec_zero(m.ring, m.d);
    for (int64_t j = 0; j < m.d; ++j) {
        TildeSElem acc = x[static_cast<size_t>(j)].N();
        for (int64_t k = 0; k < m.d; ++k) {
            const FieldElem& njk = m.n_mat.at(static_cast<size_t>(j), static_cast<size_t>(k));
            if (!njk.is_zero()) acc = acc + x[static_cast<size_t>(k)].scaled(njk);
        }
        out[static_cast<size_t>(j)] = acc;
    }
    return out;
}

// --- FilSolver ------------------------------------------------------------

FilSolver::FilSolver(const TildeModule& m) : m_(&m) {
    const RingParams* ring = m.ring;
    const int64_t p = ring->p();
    auto gens = fil_generators(m);
    std::vector<std::vector<FieldElem>> columns;
    for (size_t j = 0; j < gens.size(); ++j) {
        for (int64_t t = 0; t < p; ++t) {
            TVec col = tvec_scale(gens[j].first, u_power(ring, t));
            if (tvec_is_zero(col)) continue;
            columns.push_back(flatten(col));
            col_index_.emplace_back(static_cast<int64_t>(j), t);
        }
    }
    cols_ = Mat(ring->field, static_cast<size_t>(m.d * p), columns.size());
    for (size_t c = 0; c < columns.size(); ++c)
        for (size_t row = 0; row < columns[c].size(); ++row) cols_.at(row, c) = columns[c][row];
}

std::size_t FilSolver::dim() const { return rank(cols_); }

bool FilSolver::contains(const TVec& x) const {
    return solve(cols_, flatten(x)).has_value();
}

FilPresentation FilSolver::assemble(const std::vector<FieldElem>& coords) const {
    const RingParams* ring = m_->ring;
    FilPresentation pres;
    pres.gen_coeffs.assign(m_->fil_gens.size(), TildeSElem::zero(ring));
    pres.uer_coeffs.assign(static_cast<size_t>(m_->d), TildeSElem::zero(ring));
    for (size_t c = 0; c < coords.size(); ++c) {
        if (coords[c].is_zero()) continue;
        auto [j, t] = col_index_[c];
        TildeSElem mono = TildeSElem::monomial(ring, t, coords[c]);
        if (j < static_cast<int64_t>(m_->fil_gens.size()))
            pres.gen_coeffs[static_cast<size_t>(j)] = pres.gen_coeffs[static_cast<size_t>(j)] + mono;
        else {
            size_t k = static_cast<size_t>(j) - m_->fil_gens.size();
            pres.uer_coeffs[k] = pres.uer_coeffs[k] + mono;
        }
    }
    return pres;
}

std::optional<FilPresentation> FilSolver::present(const TVec& x) const {
    auto sol = solve(cols_, flatten(x));
    if (!sol) return std::nullopt;
    return assemble(*sol);
}

// --- phi_r ----------------------------------------------------------------

TVec apply_phi_r(const TildeModule& m, const FilPresentation& pres) {
    if (pres.gen_coeffs.size() != m.fil_gens.size() ||
        pres.uer_coeffs.size() != static_cast<size_t>(m.d))
        throw DimensionMismatch("presentation shape does not match the module");
    TVec out = tvec_zero(m.ring, m.d);
    // phi of a scalar from k[u]/u^p is sigma of its constant term
    for (size_t j = 0; j < pres.gen_coeffs.size(); ++j) {
        FieldElem w = pres.gen_coeffs[j].coeff(0).frobenius(1);
        if (!w.is_zero()) out = tvec_add(out, tvec_scale_field(m.phi_fil_gens[j], w));
    }
    for (int64_t k = 0; k < m.d; ++k) {
        FieldElem w = pres.uer_coeffs[static_cast<size_t>(k)].coeff(0).frobenius(1);
        if (!w.is_zero())
            out = tvec_add(out, tvec_scale_field(m.phi_uer_basis[static_cast<size_t>(k)], w));
    }
    return out;
}

TVec apply_phi_r(const TildeModule& m, const TVec& x) {
    FilSolver solver(m);
    auto pres = solver.present(x);
    if (!pres) throw NotInFil("element is not in Fil^r of the module");
    return apply_phi_r(m, *pres);
}

// --- validation -----------------------------------------------------------

Report validate(const TildeModule& m) {
    check_shapes(m);
    Report rep;
    const RingParams* ring = m.ring;
    auto gens = fil_generators(m);

    rep.add("fil_contains_uer_module", true, "by representation");

    // generation: phi images must span M mod u
    {
        Mat red(ring->field, static_cast<size_t>(m.d), gens.size());
        for (size_t j = 0; j < gens.size(); ++j)
            for (int64_t i = 0; i < m.d; ++i)
                red.at(static_cast<size_t>(i), j) = gens[j].second[static_cast<size_t>(i)].coeff(0);
        bool ok = rank(red) == static_cast<size_t>(m.d);
        rep.add("phi_image_generates", ok, ok ? "" : "phi images have rank < d modulo u");
    }

    // well-definedness: every syzygy among the generators is a difference of
    // two presentations of the same element, so phi_r evaluated on it must
    // vanish.
    FilSolver solver(m);
    {
        bool ok = true;
        std::string witness;
        for (const auto& vec : nullspace(solver.matrix())) {
            TVec img = apply_phi_r(m, solver.assemble(vec));
            if (!tvec_is_zero(img)) {
                ok = false;
                witness = "syzygy with nonzero phi value: " + describe(img);
                break;
            }
        }
        rep.add("phi_well_defined", ok, witness);
    }

    // N stability and the twisted commutation square
    {
        bool stable = true, square = true;
        std::string w1, w2;
        const FieldElem cpi = ring->c_pi();
        const TildeSElem ue = u_power(ring, ring->e);
        for (size_t j = 0; j < gens.size() && stable; ++j) {
            TVec ue_n_g = tvec_scale(module_N(m, gens[j].first), ue);
            auto pres = solver.present(ue_n_g);
            if (!pres) {
                stable = false;
                w1 = "u^e N(gen " + std::to_string(j) + ") leaves Fil^r: " + describe(ue_n_g);
                square = false;
                w2 = "cannot evaluate phi_r on u^e N(gen " + std::to_string(j) + ")";
                break;
            }
            TVec lhs = apply_phi_r(m, *pres);
            TVec rhs = tvec_scale_field(module_N(m, gens[j].second), cpi);
            if (square && !(lhs == rhs)) {
                square = false;
                w2 = "gen " + std::to_string(j) + ": phi_r(u^e N x) = " + describe(lhs) +
                     " but c_pi N(phi_r x) = " + describe(rhs);
            }
        }
        rep.add("n_stability", stable, w1);
        rep.add("phi_n_square", square, w2);
    }

    return rep;
}

// --- make_simple ------------------------------------------------------------

TildeModule make_simple(const SimpleObject& s) {
    const RingParams* ring = s.ring;
    const int64_t er = ring->e * ring->r;
    if (s.d <= 0) throw DimensionMismatch("rank must be positive");
    if (static_cast<int64_t>(s.weights.size()) != s.d)
        throw DimensionMismatch("weight list length differs from rank");
    for (int64_t n : s.weights)
        if (n < 0 || n > er)
            throw WeightOutOfRange("weight " + std::to_string(n) + " outside [0, " +
                                   std::to_string(er) + "]");
    if (s.G.rows() != static_cast<size_t>(s.d) || s.G.cols() != static_cast<size_t>(s.d))
        throw DimensionMismatch("G must be d x d");
    if (!inverse(s.G)) throw SingularG("G is not invertible over k");
    if (s.cyclic) {
        Mat shift(ring->field, static_cast<size_t>(s.d), static_cast<size_t>(s.d));
        for (int64_t i = 0; i < s.d; ++i)
            shift.at(static_cast<size_t>((i + 1) % s.d), static_cast<size_t>(i)) =
                FieldElem::one(ring->field);
        if (!(s.G == shift))
            throw InvalidParams("cyclic flag requires G to be the cyclic shift matrix");
    }

    TildeModule m;
    m.ring = ring;
    m.d = s.d;
    m.n_mat = Mat(ring->field, static_cast<size_t>(s.d), static_cast<size_t>(s.d));
    for (int64_t i = 0; i < s.d; ++i) {
        m.fil_gens.push_back(
            tvec_scale(tvec_basis(ring, s.d, i), u_power(ring, s.weights[static_cast<size_t>(i)])));
        // phi_r(u^{n_i} e_i) = sum_j G(j,i) e_j
        TVec img = tvec_zero(ring, s.d);
        for (int64_t j = 0; j < s.d; ++j)
            img[static_cast<size_t>(j)] =
                TildeSElem::scalar(ring, s.G.at(static_cast<size_t>(j), static_cast<size_t>(i)));
        m.phi_fil_gens.push_back(img);
    }
    for (int64_t k = 0; k < s.d; ++k) {
        // phi_r(u^{er} e_k) = phi(u^{er - n_k}) phi_r(u^{n_k} e_k), and phi
        // kills positive powers of u in k[u]/u^p
        if (s.weights[static_cast<size_t>(k)] == er)
            m.phi_uer_basis.push_back(m.phi_fil_gens[static_cast<size_t>(k)]);
        else
            m.phi_uer_basis.push_back(tvec_zero(ring, s.d));
    }
    return m;
}

// --- adapted basis ----------------------------------------------------------

namespace {

// exact division q = a / b in k[u]/u^p, valid when val(a) >= val(b);
// computed on the canonical polynomial representatives.
TildeSElem tilde_divide(const TildeSElem& a, const TildeSElem& b) {
    const RingParams* ring = a.ring();
    const int64_t p = ring->p();
    if (a.is_zero()) return TildeSElem::zero(ring);
    int64_t vb = b.u_valuation();
    if (a.u_valuation() < vb) throw InvalidParams("tilde_divide: valuation too small");
    TildeSElem a_shift(ring), b_shift(ring);
    for (int64_t t = vb; t < p; ++t) {
        a_shift.set_coeff(t - vb, a.coeff(t));
        b_shift.set_coeff(t - vb, b.coeff(t));
    }
    return a_shift * b_shift.inverse();
}

} // namespace

std::vector<TVec> tilde_matrix_inverse(const RingParams* ring, const std::vector<TVec>& cols) {
    const int64_t d = static_cast<int64_t>(cols.size());
    std::vector<std::vector<TildeSElem>> work(
        static_cast<size_t>(d), std::vector<TildeSElem>(static_cast<size_t>(d), TildeSElem::zero(ring)));
    std::vector<std::vector<TildeSElem>> inv = work;
    for (int64_t i = 0; i < d; ++i) {
        if (cols[static_cast<size_t>(i)].size() != static_cast<size_t>(d))
            throw DimensionMismatch("matrix inverse requires square column data");
        inv[static_cast<size_t>(i)][static_cast<size_t>(i)] = TildeSElem::one(ring);
        for (int64_t j = 0; j < d; ++j)
            work[static_cast<size_t>(i)][static_cast<size_t>(j)] = cols[static_cast<size_t>(j)][static_cast<size_t>(i)];
    }
    for (size_t col = 0; col < static_cast<size_t>(d); ++col) {
        size_t piv = col;
        while (piv < static_cast<size_t>(d) && !work[piv][col].is_unit()) ++piv;
        if (piv == static_cast<size_t>(d))
            throw InvalidParams("matrix over k[u]/u^p is not invertible");
        std::swap(work[piv], work[col]);
        std::swap(inv[piv], inv[col]);
        TildeSElem s = work[col][col].inverse();
        for (size_t j = 0; j < static_cast<size_t>(d); ++j) {
            work[col][j] = work[col][j] * s;
            inv[col][j] = inv[col][j] * s;
        }
        for (size_t i = 0; i < static_cast<size_t>(d); ++i) {
            if (i == col || work[i][col].is_zero()) continue;
            TildeSElem f = work[i][col];
            for (size_t j = 0; j < static_cast<size_t>(d); ++j) {
                work[i][j] = work[i][j] - f * work[col][j];
                inv[i][j] = inv[i][j] - f * inv[col][j];
            }
        }
    }
    std::vector<TVec> out;
    for (int64_t c = 0; c < d; ++c) {
        TVec colv = tvec_zero(ring, d);
        for (int64_t i = 0; i < d; ++i)
            colv[static_cast<size_t>(i)] = inv[static_cast<size_t>(i)][static_cast<size_t>(c)];
        out.push_back(colv);
    }
    return out;
}

AdaptedBasis adapted_basis(const TildeModule& m) {
    check_shapes(m);
    const RingParams* ring = m.ring;
    const int64_t d = m.d;
    const int64_t er = ring->e * ring->r;
    const int64_t p = ring->p();

    const size_t ncols = m.fil_gens.size() + static_cast<size_t>(d);
    std::vector<std::vector<TildeSElem>> a(static_cast<size_t>(d),
                                           std::vector<TildeSElem>(ncols, TildeSElem::zero(ring)));
    for (size_t j = 0; j < m.fil_gens.size(); ++j)
        for (int64_t i = 0; i < d; ++i) a[static_cast<size_t>(i)][j] = m.fil_gens[j][static_cast<size_t>(i)];
    for (int64_t k = 0; k < d; ++k)
        a[static_cast<size_t>(k)][m.fil_gens.size() + static_cast<size_t>(k)] = u_power(ring, er);
    std::vector<std::vector<TildeSElem>> u_mat(
        static_cast<size_t>(d), std::vector<TildeSElem>(static_cast<size_t>(d), TildeSElem::zero(ring)));
    for (int64_t i = 0; i < d; ++i) u_mat[static_cast<size_t>(i)][static_cast<size_t>(i)] = TildeSElem::one(ring);

    std::vector<int64_t> weights;
    for (int64_t s = 0; s < d; ++s) {
        // pivot with minimal u-valuation, ties by lowest row then column
        int64_t best_val = p + 1;
        size_t pr = 0, pc = 0;
        for (size_t i = static_cast<size_t>(s); i < static_cast<size_t>(d); ++i)
            for (size_t j = static_cast<size_t>(s); j < ncols; ++j) {
                int64_t v = a[i][j].u_valuation();
                if (v < best_val) { best_val = v; pr = i; pc = j; }
            }
        if (best_val >= p) throw InvalidFil("filtration has rank < d");
        if (pr != static_cast<size_t>(s)) {
            std::swap(a[pr], a[static_cast<size_t>(s)]);
            std::swap(u_mat[pr], u_mat[static_cast<size_t>(s)]);
        }
        if (pc != static_cast<size_t>(s))
            for (size_t i = 0; i < static_cast<size_t>(d); ++i)
                std::swap(a[i][pc], a[i][static_cast<size_t>(s)]);
        const TildeSElem pivot = a[static_cast<size_t>(s)][static_cast<size_t>(s)];
        for (size_t i = 0; i < static_cast<size_t>(d); ++i) {
            if (i == static_cast<size_t>(s) || a[i][static_cast<size_t>(s)].is_zero()) continue;
            TildeSElem f = tilde_divide(a[i][static_cast<size_t>(s)], pivot);
            for (size_t j = 0; j < ncols; ++j) a[i][j] = a[i][j] - f * a[static_cast<size_t>(s)][j];
            for (size_t j = 0; j < static_cast<size_t>(d); ++j)
                u_mat[i][j] = u_mat[i][j] - f * u_mat[static_cast<size_t>(s)][j];
        }
        for (size_t j = 0; j < ncols; ++j) {
            if (j == static_cast<size_t>(s) || a[static_cast<size_t>(s)][j].is_zero()) continue;
            TildeSElem f = tilde_divide(a[static_cast<size_t>(s)][j], pivot);
            for (size_t i = 0; i < static_cast<size_t>(d); ++i)
                a[i][j] = a[i][j] - f * a[i][static_cast<size_t>(s)];
        }
        weights.push_back(std::min(best_val, er));
    }

    // new basis vectors are the columns of U^{-1}; U is invertible since it
    // is a product of swaps and shears
    std::vector<TVec> u_cols;
    for (int64_t c = 0; c < d; ++c) {
        TVec colv = tvec_zero(ring, d);
        for (int64_t i = 0; i < d; ++i)
            colv[static_cast<size_t>(i)] = u_mat[static_cast<size_t>(i)][static_cast<size_t>(c)];
        u_cols.push_back(colv);
    }
    AdaptedBasis out;
    out.weights = weights;
    out.basis_cols = tilde_matrix_inverse(ring, u_cols);
    return out;
}

Report adapted_basis_report(const TildeModule& m, AdaptedBasis* out) {
    const RingParams* ring = m.ring;
    AdaptedBasis ab = adapted_basis(m);
    Report rep;
    bool in_range = true;
    for (int64_t n : ab.weights)
        if (n < 0 || n > ring->e * ring->r) in_range = false;
    rep.add("weights_in_range", in_range, "");

    TildeModule regen;
    regen.ring = ring;
    regen.d = m.d;
    regen.n_mat = Mat(ring->field, static_cast<size_t>(m.d), static_cast<size_t>(m.d));
    for (size_t i = 0; i < ab.basis_cols.size(); ++i) {
        regen.fil_gens.push_back(
            tvec_scale(ab.basis_cols[i],
                       TildeSElem::monomial(ring, ab.weights[i], FieldElem::one(ring->field))));
        regen.phi_fil_gens.push_back(tvec_zero(ring, m.d));
    }
    regen.phi_uer_basis.assign(static_cast<size_t>(m.d), tvec_zero(ring, m.d));
    Mat a = FilSolver(m).matrix();
    Mat b = FilSolver(regen).matrix();
    Mat joint(ring->field, a.rows(), a.cols() + b.cols());
    for (size_t i = 0; i < a.rows(); ++i) {
        for (size_t j = 0; j < a.cols(); ++j) joint.at(i, j) = a.at(i, j);
        for (size_t j = 0; j < b.cols(); ++j) joint.at(i, a.cols() + j) = b.at(i, j);
    }
    size_t ra = rank(a), rb = rank(b), rj = rank(joint);
    rep.add("decomposition_regenerates_fil", ra == rj && rb == rj,
            "rank " + std::to_string(ra) + "/" + std::to_string(rb) + "/" + std::to_string(rj));
    if (out) *out = std::move(ab);
    return rep;
}

// --- admissible filtration ---------------------------------------------------

bool AdmissibleFiltration::contains(const TVec& x) const {
    const RingParams* ring = module->ring;
    TVec shifted = tvec_scale(x, u_power(ring, ring->e * (ring->r - t)));
    FilSolver solver(*module);
    return solver.contains(shifted);
}

TVec AdmissibleFiltration::phi_t(const TVec& x) const {
    const RingParams* ring = module->ring;
    TVec shifted = tvec_scale(x, u_power(ring, ring->e * (ring->r - t)));
    TVec img = apply_phi_r(*module, shifted);
    return tvec_scale_field(img, ring->c_pi().pow(t - ring->r));
}

AdmissibleFiltration admissible_filtration(const TildeModule& m, int64_t t) {
    if (t < 0 || t > m.ring->r) throw InvalidParams("filtration index t outside [0, r]");
    AdmissibleFiltration out;
    out.t = t;
    out.module = &m;

    const RingParams* ring = m.ring;
    const int64_t p = ring->p();
    const int64_t dim = m.d * p;
    FilSolver solver(m);
    const Mat& fil_cols = solver.matrix();
    // kernel of [mu | -fil columns] where mu is multiplication by u^{e(r-t)};
    // the x-part spans Fil^t
    Mat big(ring->field, static_cast<size_t>(dim), static_cast<size_t>(dim) + fil_cols.cols());
    const TildeSElem shift = u_power(ring, ring->e * (ring->r - t));
    for (int64_t k = 0; k < m.d; ++k)
        for (int64_t tt = 0; tt < p; ++tt) {
            TVec v = tvec_scale(tvec_basis(ring, m.d, k), u_power(ring, tt));
            auto fl = flatten(tvec_scale(v, shift));
            size_t cidx = static_cast<size_t>(k * p + tt);
            for (size_t row = 0; row < fl.size(); ++row) big.at(row, cidx) = fl[row];
        }
    for (size_t c = 0; c < fil_cols.cols(); ++c)
        for (size_t row = 0; row < fil_cols.rows(); ++row)
            big.at(row, static_cast<size_t>(dim) + c) = -fil_cols.at(row, c);
    auto ker = nullspace(big);
    Mat xparts(ring->field, ker.size(), static_cast<size_t>(dim));
    for (size_t c = 0; c < ker.size(); ++c)
        for (size_t row = 0; row < static_cast<size_t>(dim); ++row)
            xparts.at(c, row) = ker[c][row];
    auto pivots = rref(xparts);
    for (size_t row = 0; row < pivots.size(); ++row) {
        TVec v = tvec_zero(ring, m.d);
        for (int64_t k = 0; k < m.d; ++k)
            for (int64_t tt = 0; tt < p; ++tt) {
                const FieldElem& w = xparts.at(row, static_cast<size_t>(k * p + tt));
                if (!w.is_zero())
                    v[static_cast<size_t>(k)] = v[static_cast<size_t>(k)] + TildeSElem::monomial(ring, tt, w);
            }
        out.basis.push_back(v);
    }
    return out;
}

// --- morphisms ---------------------------------------------------------------

namespace {

TVec apply_morphism(const TildeMorphism& f, const TVec& x) {
    TVec out = tvec_zero(f.target.ring, f.target.d);
    for (size_t k = 0; k < x.size(); ++k)
        out = tvec_add(out, tvec_scale(f.mat_cols[k], x[k]));
    return out;
}

} // namespace

Report check_morphism(const TildeMorphism& f) {
    if (f.mat_cols.size() != static_cast<size_t>(f.source.d))
        throw DimensionMismatch("morphism must have one column per source basis vector");
    for (const auto& col : f.mat_cols)
        if (col.size() != static_cast<size_t>(f.target.d))
            throw DimensionMismatch("morphism column has wrong target rank");
    if (f.source.ring != f.target.ring)
        throw DimensionMismatch("source and target live over different rings");

    Report rep;
    FilSolver target_solver(f.target);
    auto src_gens = fil_generators(f.source);

    {
        bool ok = true;
        std::string witness;
        for (size_t j = 0; j < src_gens.size(); ++j) {
            if (!target_solver.contains(apply_morphism(f, src_gens[j].first))) {
                ok = false;
                witness = "image of generator " + std::to_string(j) + " leaves Fil^r";
                break;
            }
        }
        rep.add("fil_preserved", ok, witness);
    }

    {
        bool ok = true;
        std::string witness;
        for (size_t j = 0; j < src_gens.size(); ++j) {
            auto pres = target_solver.present(apply_morphism(f, src_gens[j].first));
            if (!pres) { ok = false; witness = "image not in Fil^r"; break; }
            TVec lhs = apply_phi_r(f.target, *pres);
            TVec rhs = apply_morphism(f, src_gens[j].second);
            if (!(lhs == rhs)) {
                ok = false;
                witness = "generator " + std::to_string(j) + ": phi_r(f x) = " + describe(lhs) +
                          " but f(phi_r x) = " + describe(rhs);
                break;
            }
        }
        rep.add("phi_commutes", ok, witness);
    }

    {
        bool ok = true;
        std::string witness;
        for (int64_t k = 0; k < f.source.d; ++k) {
            TVec rhs = apply_morphism(f, module_N(f.source, tvec_basis(f.source.ring, f.source.d, k)));
            TVec lhs = module_N(f.target, f.mat_cols[static_cast<size_t>(k)]);
            if (!(lhs == rhs)) {
                ok = false;
                witness = "basis vector " + std::to_string(k) + ": N f != f N";
                break;
            }
        }
        rep.add("n_commutes", ok, witness);
    }

    return rep;
}

TildeMorphism scalar_morphism(const TildeModule& m, const FieldElem& lambda) {
    TildeMorphism f;
    f.source = m;
    f.target = m;
    for (int64_t k = 0; k < m.d; ++k)
        f.mat_cols.push_back(tvec_scale_field(tvec_basis(m.ring, m.d, k), lambda));
    return f;
}

} // namespace breuil
