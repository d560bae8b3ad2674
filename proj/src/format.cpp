#include "themetrace/format.hpp"

#include <cassert>
#include <charconv>
#include <cmath>
#include <system_error>

namespace themetrace {

std::string format_sig(double v, int digits) {
    if (v == 0.0) return "0"; // normalize -0
    assert(std::isfinite(v));
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, digits);
    return std::string(buf, res.ptr);
}

double round_sig(double v, int digits) {
    if (!std::isfinite(v) || v == 0.0) return v == 0.0 ? 0.0 : v;
    const std::string s = format_sig(v, digits);
    double out = v;
    std::from_chars(s.data(), s.data() + s.size(), out);
    return out;
}

std::string format_fixed(double v, int decimals) {
    if (!std::isfinite(v)) v = 0.0;
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed, decimals);
    std::string s(buf, res.ptr);
    if (!s.empty() && s[0] == '-' &&
        s.find_first_not_of("0.", 1) == std::string::npos)
        s.erase(0, 1); // normalize -0.00... to 0.00...
    return s;
}

} // namespace themetrace
