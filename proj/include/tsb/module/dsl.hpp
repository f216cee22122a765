#pragma once

#include <string>
#include <vector>

#include "tsb/module/module.hpp"

namespace tsb::module {

/// Parses one module definition:
///
///   module C2 over A(2) {
///     class x0 : 0;
///     class x1 : 1;
///     action { Sq1 x0 = x1; }
///   }
///
/// Names that occur in several degrees are written name@degree inside action
/// lines. The result is validated; Adem failures raise AdemViolation.
GradedModule parse_module(const std::string& text);

/// Canonical text form; parse_module(serialize_module(m)) == m.
std::string serialize_module(const GradedModule& m);

/// Drops comment text and blank lines.
std::string strip_comments(const std::string& text);

/// Shipped module files by name (F2, C2, Ceta, Cnu, J, M, M1 ... M7, ...).
std::vector<std::string> builtin_module_names();
const std::string& builtin_module_text(const std::string& name);
GradedModule builtin_module(const std::string& name);

/// Resolves "builtin:NAME" or a file path.
GradedModule load_module(const std::string& source);

}  // namespace tsb::module
