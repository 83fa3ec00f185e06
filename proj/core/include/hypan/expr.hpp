#pragma once

#include <string>
#include <vector>

#include "hypan/poly.hpp"

namespace hypan {

/// Parses a polynomial expression over the named variables.
///
/// Grammar: + - * ^ ( ), decimal numbers, the imaginary unit `i`, and
/// variable names. `^` takes a nonnegative integer literal exponent.
/// Division is not part of the language. On error throws config_error
/// with a 1-based line/column position (line_offset shifts the reported
/// line for expressions embedded in larger files).
Polynomial parse_polynomial(const std::string& text, const std::vector<std::string>& variables,
                            int line_offset = 0);

/// Parses a complex scalar literal such as "2", "-1.5", "2i", "1+2i".
cplx parse_complex(const std::string& text);

}  // namespace hypan
