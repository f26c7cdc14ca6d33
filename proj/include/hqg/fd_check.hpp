#pragma once

#include "hqg/chart.hpp"

namespace hqg {

// Jet derivatives of a program against central differences of its order-0 values.
// Error per output component is max |jet - fd| / max(1, max |jet|) over its partials.
struct FdComparison {
  double first = 0;   // first partials, step h1
  double second = 0;  // second partials, 3/4-point stencils at h2 and h2/2, Richardson combined
};

// order: seed order of the jet evaluation (at least 2 when second is set; 0 picks the minimum).
FdComparison fd_compare(const Program& f, const Vec& p, bool second = true, double h1 = 1e-5,
                        double h2 = 1e-3, int order = 0);

}  // namespace hqg
