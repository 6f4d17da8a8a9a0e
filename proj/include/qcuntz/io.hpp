#pragma once

#include <string>

#include <json.hpp>

#include "qcuntz/analysis.hpp"
#include "qcuntz/classify.hpp"
#include "qcuntz/commutant.hpp"
#include "qcuntz/rep.hpp"
#include "qcuntz/sparse.hpp"
#include "qcuntz/wold.hpp"

namespace qcuntz::io {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchemaVersion = "1";

/// {rows, cols, entries: [[i, j, re, im], ...]} in column-major order.
Json to_json(const SparseMatrix& m);
SparseMatrix matrix_from_json(const Json& j);

Json to_json(const RepSpec& spec);
Json to_json(const TruncationParams& t);
Json to_json(const Basis& basis);

/// Everything `build` writes: spec, truncation, labels, interior_depth_1 and
/// the generators A_1..A_n.
Json family_document(const OperatorFamily& family);

/// Reads q, the generators ("generators" array or a single "matrix") and the
/// "interior" ordinals. Throws Error(Parse) on malformed input.
analysis::MatrixSystem system_from_json(const Json& doc);

Json to_json(const analysis::ResidualReport& r);
Json to_json(const analysis::WoldDecomposition& w);
Json to_json(const analysis::CommutantReport& r);
Json to_json(const classify::NormalizedParam& p);
Json to_json(const classify::EquivalenceDecision& d);

}  // namespace qcuntz::io
