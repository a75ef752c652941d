#pragma once

#include <memory>
#include <string>

#include "fgdesc/group.hpp"
#include "fgdesc/structure.hpp"

namespace fgdesc {

/// Group input: {"order": n, "table": [[...], ...]} or
/// {"permutations": ["(1 2)(3 4)", ...], "degree": n}, plus optional "label".
FiniteGroup group_from_json(const std::string& text);
std::string group_to_json(const FiniteGroup& g);

/// Structure input: a group input as above, or {"kind": "ring", "add": ...,
/// "mul": ..., "zero": i, "one": j, "sigma"?: [...]}, or {"kind": "zmod",
/// "m": n}, or {"kind": "field", "q": n, "frobenius_power"?: k}.
std::unique_ptr<fo::Structure> structure_from_json(const std::string& text);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace fgdesc
