#pragma once

#include <string>

#include "advisor/dsl/ast.hpp"

namespace advisor::dsl {

/// Canonical source for a construct: three-space indentation, one CE or
/// action per line, `(declare (salience N))` only when N is non-zero.
/// parse_source(pretty_print(c)) yields a construct equal to `c`.
std::string pretty_print(const Construct& construct);

/// Constructs separated by a blank line, with a trailing newline.
std::string pretty_print(const Program& program);

std::string to_source(const Expression& expr);

}  // namespace advisor::dsl
