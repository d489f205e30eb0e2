#pragma once

namespace summakit {

/// Which form of an ambiguous formula to evaluate. `consistent` is the default
/// everywhere; `literal` takes the alternative verbatim form where the two
/// differ (the |Y| probe diagonal power, the c_nv difference term, the
/// column-sum exponent, Riesz criterion (a)). Exposed as --strict-paper-mode.
enum class Reading { consistent, literal };

} // namespace summakit
