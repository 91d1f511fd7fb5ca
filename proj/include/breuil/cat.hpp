// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <vector>

#include "breuil/dprings.hpp"
#include "breuil/linalg.hpp"
#include "breuil/report.hpp"

namespace breuil {

/// Element of a free module over k[u]/u^p: one coordinate per basis vector.
using TVec = std::vector<TildeSElem>;

TVec tvec_zero(const RingParams* ring, int64_t d);
TVec tvec_basis(const RingParams* ring, int64_t d, int64_t k);
TVec tvec_add(const TVec& a, const TVec& b);
TVec tvec_sub(const TVec& a, const TVec& b);
TVec tvec_scale(const TVec& a, const TildeSElem& s);
TVec tvec_scale_field(const TVec& a, const FieldElem& w);
bool tvec_is_zero(const TVec& a);

/// Object of the quotient category: free module over k[u]/u^p with a
/// filtration submodule Fil^r containing u^{er} M, a divided Frobenius
/// phi_r defined on Fil^r whose image generates M, and a monodromy
/// operator N given on the basis by a k-matrix and extended by Leibniz.
struct TildeModule {
    const RingParams* ring = nullptr;
    int64_t d = 0;
    std::vector<TVec> fil_gens;      // generator columns of Fil^r (besides u^{er} M)
    std::vector<TVec> phi_fil_gens;  // phi_r of each listed generator
    std::vector<TVec> phi_uer_basis; // phi_r(u^{er} e_k), one column per k
    Mat n_mat;                       // N(e_k) = sum_j n_mat(j,k) e_j
};

/// Simple object data: weights n_i in [0, er] and an invertible k-matrix G
/// with phi_r(u^{n_i} e_i) = (tG)_i . basis. `cyclic` marks the monomial
/// form phi_r(u^{n_i} e_i) = e_{i+1} (indices mod d).
struct SimpleObject {
    const RingParams* ring = nullptr;
    int64_t d = 0;
    std::vector<int64_t> weights;
    Mat G;
    bool cyclic = false;

    /// The cyclic-form simple with the given weights (G = cyclic shift).
    static SimpleObject cyclic_simple(const RingParams* ring, const std::vector<int64_t>& weights);
};

struct TildeMorphism {
    TildeModule source;
    TildeModule target;
    std::vector<TVec> mat_cols; // f(e_k) = mat_cols[k], length = target rank
};

/// A presentation of a Fil^r element as sum of s_j * gen_j + t_k * u^{er} e_k.
struct FilPresentation {
    std::vector<TildeSElem> gen_coeffs;
    std::vector<TildeSElem> uer_coeffs;
};

struct AdaptedBasis {
    std::vector<TVec> basis_cols; // columns = adapted basis vectors in old coordinates
    std::vector<int64_t> weights; // ascending, in [0, er]
};

/// Solver for membership / presentations in Fil^r M as a k-space.
class FilSolver {
public:
    explicit FilSolver(const TildeModule& m);
    bool contains(const TVec& x) const;
    std::optional<FilPresentation> present(const TVec& x) const;
    /// k-dimension of Fil^r M.
    std::size_t dim() const;
    /// The underlying column matrix (coordinates of u^t * generator).
    const Mat& matrix() const { return cols_; }
    /// Mapping column -> (generator index, power of u); generator indices
    /// beyond fil_gens.size() refer to the u^{er} e_k block.
    const std::vector<std::pair<int64_t, int64_t>>& column_index() const { return col_index_; }
    /// Turn a coordinate vector over the columns into a presentation.
    FilPresentation assemble(const std::vector<FieldElem>& coords) const;

private:
    const TildeModule* m_;
    Mat cols_;
    std::vector<std::pair<int64_t, int64_t>> col_index_;
};

/// N on a module element (coefficient rule plus the n_mat action).
TVec module_N(const TildeModule& m, const TVec& x);

/// Full generator list of Fil^r: the listed generators then u^{er} e_k,
/// paired with their phi_r images.
std::vector<std::pair<TVec, TVec>> fil_generators(const TildeModule& m);

/// Axiom-by-axiom validation; DimensionMismatch on malformed input.
Report validate(const TildeModule& m);

/// phi_r evaluated through a given presentation.
TVec apply_phi_r(const TildeModule& m, const FilPresentation& pres);
/// phi_r on a raw Fil^r element; solves for a presentation first
/// (NotInFil when the element is not in Fil^r).
TVec apply_phi_r(const TildeModule& m, const TVec& x);

/// Build the object attached to simple-object data.
TildeModule make_simple(const SimpleObject& s);

/// Basis change after which Fil^r = (+) u^{n_i} (k[u]/u^p) e_i.
AdaptedBasis adapted_basis(const TildeModule& m);

/// adapted_basis plus its own verification: weights within [0, er] and a
/// two-way span comparison between Fil^r and the claimed decomposition.
Report adapted_basis_report(const TildeModule& m, AdaptedBasis* out = nullptr);

/// Columns of the inverse of a square matrix over k[u]/u^p given by
/// columns; requires the reduction mod u to be invertible.
std::vector<TVec> tilde_matrix_inverse(const RingParams* ring, const std::vector<TVec>& cols);

/// The default admissible filtration Fil^t = {x : u^{e(r-t)} x in Fil^r}.
struct AdmissibleFiltration {
    int64_t t = 0;
    std::vector<TVec> basis; // k-basis of Fil^t
    const TildeModule* module = nullptr;

    bool contains(const TVec& x) const;
    /// phi_t(x) = c_pi^{t-r} phi_r(u^{e(r-t)} x).
    TVec phi_t(const TVec& x) const;
};

AdmissibleFiltration admissible_filtration(const TildeModule& m, int64_t t);

Report check_morphism(const TildeMorphism& f);

/// Identity / scalar morphisms (test and CLI helpers).
TildeMorphism scalar_morphism(const TildeModule& m, const FieldElem& lambda);

} // namespace breuil
