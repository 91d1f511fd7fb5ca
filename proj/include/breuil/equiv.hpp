// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <vector>

#include "breuil/cat.hpp"

namespace breuil {

/// Element of a free module over the truncated ring S1.
using SVec = std::vector<S1Elem>;

SVec svec_zero(const RingParams* ring, int64_t d);
SVec svec_basis(const RingParams* ring, int64_t d, int64_t k);
SVec svec_add(const SVec& a, const SVec& b);
SVec svec_sub(const SVec& a, const SVec& b);
SVec svec_scale(const SVec& a, const S1Elem& s);
SVec svec_scale_field(const SVec& a, const FieldElem& w);
bool svec_is_zero(const SVec& a);
TVec svec_project(const SVec& a);
SVec svec_section(const TVec& a);

/// Object over S1 killed by p (rank-d free module over the truncated S1).
/// Fil^r M = Fil^r S1 . M + sum_j S1 . fil_gens[j]; phi_uer_basis stores
/// phi_r(u^{er} e_k), which together with the category's twisting rule
/// determines phi_r on the whole of Fil^r M. N is given on the basis by
/// S1-coefficient columns and extended by the Leibniz rule.
struct S1Module {
    const RingParams* ring = nullptr;
    int64_t d = 0;
    std::vector<SVec> fil_gens;
    std::vector<SVec> phi_fil_gens;
    std::vector<SVec> phi_uer_basis;
    std::vector<SVec> n_basis; // N(e_k)
};

/// Presentation x = sum_j s_j gen_j + (ideal part in Fil^r S1 . M).
struct S1Presentation {
    std::vector<S1Elem> gen_coeffs;
    SVec ideal_part; // every component supported in {i : q(i) >= r}
};

/// Membership and presentations in Fil^r M. For r >= 1 an element lies in
/// Fil^r M exactly when its low part (degrees i < er in every coordinate)
/// is reachable from the explicit generators.
class S1FilSolver {
public:
    explicit S1FilSolver(const S1Module& m);
    bool contains(const SVec& x) const;
    std::optional<S1Presentation> present(const SVec& x) const;

private:
    const S1Module* m_;
    Mat low_cols_;
    std::vector<std::pair<int64_t, int64_t>> col_index_; // (gen j, degree t)
    std::vector<FieldElem> low_coords(const SVec& x) const;
};

SVec module_N(const S1Module& m, const SVec& x);

/// phi_r through a presentation: semilinear on the generator coefficients,
/// and c^{-r} phi_r(s) phi_r(u^{er} e_k) on the ideal part.
SVec apply_phi_r(const S1Module& m, const S1Presentation& pres);
SVec apply_phi_r(const S1Module& m, const SVec& x);

Report validate(const S1Module& m);

/// Reduction to the quotient category: projects all data through
/// S1 -> k[u]/u^p. The monodromy columns must project to constants
/// (InvalidObject otherwise), matching the k-matrix representation.
TildeModule functor_T(const S1Module& m);

struct LiftOptions {
    bool third_round_check = true; // assert the correction sequence stabilizes
};

/// Essential surjectivity: build an S1-object lifting the given one.
/// The output is free on the adapted basis of the input; N is constructed
/// as a Leibniz lift corrected twice through the commuting square.
S1Module lift_object(const TildeModule& m, const LiftOptions& opts = {});

/// Full faithfulness direction: the unique morphism of S1-objects lifting
/// a morphism between the reductions. Returns the matrix columns of the
/// lift (f(e_k) = column k). All exactness postconditions are asserted,
/// with hard errors on violation.
std::vector<SVec> lift_morphism(const S1Module& m, const S1Module& mp, const TildeMorphism& f,
                                const LiftOptions& opts = {});

} // namespace breuil
