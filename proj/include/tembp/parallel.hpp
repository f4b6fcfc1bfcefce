#pragma once

namespace tembp {

/// Execution policy for the data-parallel kernels. Every kernel has a serial
/// reference path; the parallel path must produce bit-identical results.
enum class Exec { serial, parallel };

/// Sets the OpenMP worker count. Values <= 0 leave the runtime default.
void set_worker_threads(int n);
int worker_threads();

}  // namespace tembp
