#pragma once

#include <string>

#include "bigd/expr.hpp"

namespace bigd {

// Compact prefix-notation text form of an expression tree, one operator per
// node. See docs/function-format.md for the grammar. Numeric literals are
// printed with round-trip precision; the format is not bit-critical.
std::string to_text(const EncodableFunction& f);

EncodableFunction parse_function(const std::string& text);

EncodableFunction load_function(const std::string& path);
void save_function(const EncodableFunction& f, const std::string& path);

}  // namespace bigd
