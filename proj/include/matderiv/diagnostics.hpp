#pragma once

#include <functional>
#include <string_view>

namespace matderiv {

using WarningHandler = std::function<void(std::string_view)>;

/// Replaces the process-wide warning sink (default: stderr). Returns the
/// previous handler. Passing an empty handler silences warnings.
WarningHandler set_warning_handler(WarningHandler handler);

void warn(std::string_view message);

}  // namespace matderiv
