#include "twinscope/format.hpp"

#include <array>
#include <charconv>
#include <cmath>

namespace twinscope {

std::string format_double(double v) {
    if (std::isnan(v)) return "NA";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (v == 0.0) v = 0.0;  // no "-0"
    std::array<char, 64> buf{};
    auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), res.ptr);
}

std::string format_double(const std::optional<double>& v) { return v ? format_double(*v) : "NA"; }

}  // namespace twinscope
