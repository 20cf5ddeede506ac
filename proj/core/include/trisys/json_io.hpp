#pragma once

#include <string>
#include <variant>

#include "trisys/galg.hpp"
#include "trisys/triples.hpp"

namespace trisys {

// Canonical JSON persistence. Format tags: "gsc-1" for graded algebras,
// "tsc-1" for triple systems. Keys sorted, pairs in canonical order, no
// floats, zero entries omitted; repeated exports are byte-identical.

struct ImportError : std::runtime_error {
  enum class Code { Parse, Validation, UnsupportedFormat };
  Code code;
  ImportError(Code c, const std::string& msg) : std::runtime_error(msg), code(c) {}
};

std::string export_json(const GradedAlgebra& g);
std::string export_json(const TripleSystem& t);

using Imported = std::variant<GradedAlgebra, TripleSystem>;
Imported import_json(const std::string& bytes);

}  // namespace trisys
