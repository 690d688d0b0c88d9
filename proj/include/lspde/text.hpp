#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace lspde {

// Shortest round-trip decimal form, locale independent. Integral values keep a
// trailing ".0" so that they read as reals ("2.0", not "2").
std::string format_real(double v);

std::optional<double> parse_real(std::string_view s);

}  // namespace lspde
