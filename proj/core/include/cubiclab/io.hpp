#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cubiclab/forms.hpp"

namespace cubiclab {

using Json = nlohmann::json;

/// A form read from a document, with the factor used to clear denominators:
/// form = scale * (document form).
struct LoadedForm {
  CubicForm form;
  Rational scale;
};

/// Reads and parses a JSON file; throws ConfigError on I/O or syntax errors.
Json load_json_file(const std::string& path);

/// {"n": int, "monomials": [{"i","j","k" (1-based, i <= j <= k), "c": "p/q"}]}.
/// Throws ConfigError on schema violations.
LoadedForm form_from_json(const Json& doc);
Json form_to_json(const CubicForm& C);

/// {"r": int, "n": int, "rows": [[...]], "assume_irrational": bool}. A row whose
/// entries are all strings is rational-tagged; otherwise it is real-tagged.
LinearSystem linsys_from_json(const Json& doc);
Json linsys_to_json(const LinearSystem& L);

/// {"n": int, "pairs": [{"A": [...n rationals], "B": [{"i","j","c"}]}]}, 1-based.
HDecomposition decomposition_from_json(const Json& doc);
Json decomposition_to_json(const HDecomposition& D);

/// Non-throwing validators: each message names the offending location.
/// A witness for the document form, restated for the integer form
/// scale * (document form): every A_i is multiplied by scale.
HDecomposition rescale_decomposition(HDecomposition D, const Rational& scale);

std::vector<std::string> diagnose_form(const Json& doc, const std::string& where);
std::vector<std::string> diagnose_linsys(const Json& doc, const std::string& where);
std::vector<std::string> diagnose_decomposition(const Json& doc, const std::string& where);

}  // namespace cubiclab
