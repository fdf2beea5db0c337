#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"
#include "krein/core.hpp"

namespace krein::io {

using Json = nlohmann::json;

/// [[ [re, im], ... ], ...] row-major
Json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const Json& j, const std::string& what = "matrix");

Json signature_to_json(const Signature& s);
Signature signature_from_json(const Json& j, const std::string& what = "signature");

/// Operator file: {"signature_domain": [n+, n-], "signature_codomain": [n+, n-],
/// "matrix": rows of [re, im] pairs}. Extra keys are ignored on read.
Json operator_to_json(const KreinOperator& t);
KreinOperator operator_from_json(const Json& j);

/// Deterministic text form: sorted keys, two-space indent, arrays of scalars
/// on one line, floating point numbers printed as %.17g so that a write/read
/// cycle reproduces every double bit for bit.
std::string dump(const Json& j);

Json read_json_file(const std::filesystem::path& path);
std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

/// FNV-1a 64-bit digest, hex encoded. Identifies inputs in reports.
std::string digest(const std::string& bytes);

}  // namespace krein::io
