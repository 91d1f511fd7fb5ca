// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <json.hpp>

#include "breuil/cat.hpp"
#include "breuil/equiv.hpp"
#include "breuil/inertia.hpp"
#include "breuil/report.hpp"

namespace breuil {

using nlohmann::json;

// field elements are arrays of m integers, little-endian in the power basis
json to_json(const FieldElem& x);
FieldElem field_elem_from_json(const FieldParams* k, const json& j);

json mat_to_json(const Mat& m);
Mat mat_from_json(const FieldParams* k, const json& j);

// {"p","m","modulus","e","r","eisenstein","trunc_degree"}; "m" and
// "modulus" may be omitted (prime field / smallest irreducible)
json params_to_json(const RingParams* ring);
const RingParams* params_from_json(const json& j, int64_t trunc_override = 0);

json to_json(const S1Elem& x);      // {"terms": [[degree, coeffs], ...]}
S1Elem s1_elem_from_json(const RingParams* ring, const json& j);

json to_json(const TildeSElem& x);  // array of p coefficient arrays
TildeSElem tilde_elem_from_json(const RingParams* ring, const json& j);

json to_json(const TildeModule& m);
TildeModule tilde_module_from_json(const RingParams* ring, const json& j);

json to_json(const SimpleObject& s);
SimpleObject simple_from_json(const RingParams* ring, const json& j);

json to_json(const S1Module& m);
S1Module s1_module_from_json(const RingParams* ring, const json& j);

json to_json(const Report& rep);

} // namespace breuil
