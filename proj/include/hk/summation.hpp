#pragma once

#include <span>

namespace hk {

// Correctly rounded floating-point sum (Shewchuk's exact partials with a
// final round-half-even fix-up). The result depends only on the multiset of
// addends, never on their order.
double accurate_sum(std::span<const double> terms);

}  // namespace hk
