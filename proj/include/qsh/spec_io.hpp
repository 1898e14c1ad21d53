#pragma once

#include <string>

#include "json.hpp"
#include "qsh/carleson.hpp"
#include "qsh/norms.hpp"

namespace qsh {

using Json = nlohmann::ordered_json;

Json to_json(const Quaternion& q);
Quaternion quaternion_from_json(const Json& j);
ImaginaryUnit unit_from_json(const Json& j);

/// Function specs:
///   power_series {coeffs, r_max?}   no r_max: exact polynomial
///   log_alpha {alpha, unit?}, inv_sqrt_one_plus_s, gap_series {exponents, coeffs}
///   constant {value}, monomial {n, a?}, moebius {a, unit}, dilation {r, of}
SliceFunction function_from_json(const Json& j);

/// Measure specs: point_masses {atoms: [{point, mass}]}, density {name, function?},
/// pointmass_example {n_max}, zero.
SliceDecomposedMeasure measure_from_json(const Json& j, const CarlesonConfig& cfg = {});

Json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const Json& j);

/// Finite numbers as numbers; inf/nan as the strings "inf", "-inf", "nan".
Json number(double x);

Json to_json(const NormReport& r);
Json to_json(const CarlesonReport& r);
Json to_json(const SliceCarlesonReport& r);

}  // namespace qsh
