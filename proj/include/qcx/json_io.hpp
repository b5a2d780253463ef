#pragma once

#include <string>

#include "json.hpp"

#include "qcx/cohomology.hpp"
#include "qcx/hodge.hpp"
#include "qcx/quasicomplex.hpp"
#include "qcx/reduction.hpp"
#include "qcx/symbolcx.hpp"

namespace qcx {

using Json = nlohmann::json;

// {"rows": r, "cols": c, "re": [row-major], "im": [row-major]}; "im" is
// omitted when every imaginary part is exactly zero and defaults to zeros.
Json matrix_to_json(const Mat& m);
Mat matrix_from_json(const Json& j);

// {"spaces": [{"dim": n, "gram": <matrix|null>}...],
//  "diffs": [<matrix>...], "orders": [m_0,...] | null}
Json complex_to_json(const QuasiComplex& qc);
QuasiComplex complex_from_json(const Json& j);

// {"point_id": str, "xi_norm": r, "orders": [...], "mats": [<matrix>...]};
// fiber dimensions are recovered from the matrix shapes.
Json sample_to_json(const SymbolComplexSample& sample);
SymbolComplexSample sample_from_json(const Json& j);

// {"maps": [<matrix>...]}
std::vector<Mat> endo_maps_from_json(const Json& j);

Json hodge_to_json(const HodgeData& data);
Json reduction_to_json(const ReductionResult& res, bool embed_reduced);

// Parses a document and rethrows library failures as ParseError.
Json parse_json(const std::string& text);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

// Stable content fingerprint for reports: "fnv1a64:" + 16 hex digits.
std::string input_digest(const std::string& bytes);

// Throws InvalidInput if any float anywhere in the document is not finite.
void ensure_finite(const Json& j);

} // namespace qcx
