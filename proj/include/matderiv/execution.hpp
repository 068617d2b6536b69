#pragma once

namespace matderiv {

/// How independent terms of a sum are evaluated. Both modes reduce in the
/// same canonical order, so results are bit-identical.
enum class Execution { sequential, parallel };

}  // namespace matderiv
