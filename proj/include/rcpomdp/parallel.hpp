#pragma once

namespace rcpomdp {

/// Execution policy for the data-parallel kernels. Both variants produce
/// bit-identical results; the serial path is the reference.
enum class Exec { serial, parallel };

/// Number of OpenMP threads available (1 when built without OpenMP).
int max_threads();

}  // namespace rcpomdp
