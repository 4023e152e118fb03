#pragma once

#include <string>

#include "convcool/assembly.hpp"

namespace convcool {

/// Built-in heat source profiles 1..4 used by the benchmark experiments.
SourceTerm example_source(int id);

/// Parse a heat source given as an arithmetic expression in x and y.
/// Grammar: + - * / ^ (right-assoc), sin cos exp, constant pi, parentheses.
/// Throws ParseError with the offending position on malformed input.
SourceTerm parse_source_expression(const std::string& expr);

}  // namespace convcool
