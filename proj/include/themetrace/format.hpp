#pragma once

#include <string>

namespace themetrace {

/// Rounds `v` to `digits` significant decimal digits. Used before JSON
/// serialization so artifacts are byte-stable across runs.
double round_sig(double v, int digits = 12);

/// Shortest decimal form of `v` at `digits` significant digits,
/// locale-independent (e.g. "0.3333333333333" -> "0.333333333333").
std::string format_sig(double v, int digits = 12);

/// Fixed-point form with `decimals` fractional digits (SVG coordinates).
std::string format_fixed(double v, int decimals = 2);

} // namespace themetrace
