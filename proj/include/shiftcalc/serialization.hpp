#pragma once

// JSON documents for every library type. All documents written here carry
// "schema": "shiftcalc/v1"; readers accept documents without it.

#include <json.hpp>

#include <string>

#include "shiftcalc/aligned_shift.hpp"
#include "shiftcalc/correspondence.hpp"
#include "shiftcalc/exact_linalg.hpp"
#include "shiftcalc/homotopy.hpp"
#include "shiftcalc/invariants.hpp"
#include "shiftcalc/shift_equivalence.hpp"

namespace shiftcalc {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchema = "shiftcalc/v1";

/// Parses JSON text. Syntax errors become ParseError with "name:line:column".
Json parse_json(const std::string& text, const std::string& name);
/// Reads and parses a file; a missing file is a ParseError as well.
Json read_json_file(const std::string& path);

/// {"rows": r, "cols": c, "entries": [[...], ...]}. Entries too large for a
/// 64-bit integer are written as decimal strings, and read back either way.
Json matrix_to_json(const IntMatrix& m);
/// `what` names the matrix in error messages. With require_nonnegative a
/// negative entry is a DomainError naming the entry.
IntMatrix matrix_from_json(const Json& j, const std::string& what,
                           bool require_nonnegative = true);
IntMatrix parse_matrix_file(const std::string& path, bool require_nonnegative = true);

/// {"schema", "a", "b", "r", "s", "lag"}
Json witness_to_json(const SEWitness& w);
SEWitness witness_from_json(const Json& j);

Json polynomial_to_json(const IntPolynomial& p);
Json group_to_json(const AbelianGroup& g);

/// {"left_index", "right_index", "dims", "factors"}. "factors" is optional
/// on input; without it the correspondence is X(dims).
Json correspondence_to_json(const GraphCorrespondence& c);
GraphCorrespondence correspondence_from_json(const Json& j);

/// {"left_index", "right_index", "dims", "blocks": {"v,w": [[[re, im], ...], ...]}}.
/// Blocks of dimension zero are omitted.
Json block_unitary_to_json(const BlockUnitary& u);
/// Source and target are both read as X(dims); rebase to attach other
/// factor chains of the same shape.
BlockUnitary block_unitary_from_json(const Json& j);

/// {"matrix", "index"}
Json object_to_json(const ObjectPair& obj);
ObjectPair object_from_json(const Json& j);

/// {"left", "right", "f", "phi"}
Json one_arrow_to_json(const OneArrow& a);
OneArrow one_arrow_from_json(const Json& j);

/// {"schema", "lag", "x", "y", "m", "n", "phi_m", "phi_n", "psi_x", "psi_y"}
Json shift_to_json(const AlignedShiftData& d);
AlignedShiftData shift_from_json(const Json& j);

Json path_to_json(const UnitaryPath& p);
Json homotopy_to_json(const ArrowHomotopy& h);
/// {"schema", "shift", "x_homotopy", "y_homotopy"}
Json bundle_to_json(const HomotopyShiftBundle& b);

}  // namespace shiftcalc
