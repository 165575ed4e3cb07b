#pragma once

#include "sidak/exceedance.hpp"

namespace sidak::fixtures {

/// Lifetimes (minutes) of two groups of ten insulating-fluid specimens.
inline SamplePair insulating_fluid() {
  return SamplePair({0.49, 0.64, 0.82, 0.93, 1.08, 1.99, 2.06, 2.15, 2.57, 4.75},
                    {1.34, 1.49, 1.56, 2.10, 2.12, 3.83, 3.97, 5.13, 7.21, 8.71});
}

}  // namespace sidak::fixtures
