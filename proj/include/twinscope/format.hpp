#pragma once

#include <optional>
#include <string>

namespace twinscope {

// Shortest decimal that round-trips to the same double. NaN -> "NA".
std::string format_double(double v);
std::string format_double(const std::optional<double>& v);

}  // namespace twinscope
