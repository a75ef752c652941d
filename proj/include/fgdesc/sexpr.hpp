#pragma once

#include <string>

#include "fgdesc/formula.hpp"

namespace fgdesc::fo {

/// S-expression text format, e.g. (forall x1 (exists x2 (= (mul x1 x2) e))).
/// Variables render canonically as x<i>; other identifiers are accepted on
/// parse and assigned indices in first-occurrence order.
std::string render(const FormulaP& f);
std::string render_term(const Term& t);

struct ParseError : std::runtime_error {
  std::size_t offset;
  ParseError(const std::string& what, std::size_t off)
      : std::runtime_error(what + " at offset " + std::to_string(off)), offset(off) {}
};

FormulaP parse(const std::string& text, const Signature& sig);
Term parse_term_text(const std::string& text, const Signature& sig);

/// Formula file: a "#sig <name>" header line followed by one S-expression.
struct FormulaFile {
  const Signature* sig;
  FormulaP formula;
};
std::string render_file(const Signature& sig, const FormulaP& f);
FormulaFile parse_file_text(const std::string& text);

/// Shortcut tags serialized separately (JSON), keyed by child-index paths
/// from the root, so a rendered formula can be re-tagged after parsing.
std::string tags_to_json(const FormulaP& f);
FormulaP apply_tags_json(const FormulaP& f, const std::string& json_text,
                         const Signature& sig);

}  // namespace fgdesc::fo
