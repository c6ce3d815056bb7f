#pragma once

// Execution policy for the data-parallel kernels. Every kernel has a serial
// reference path and an OpenMP path that produce bitwise-identical results:
// reductions are summed over fixed-size blocks whose partials are combined in
// block order, so the result does not depend on the thread count.

namespace mshom {

enum class Exec { serial, parallel };

// Block length for deterministic reductions. Fixed: changing it changes
// rounding, which would break byte-stable CSV output across builds.
inline constexpr long kReduceBlock = 1024;

}  // namespace mshom
