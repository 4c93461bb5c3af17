#pragma once
// Runtime switch between the serial reference kernels and the OpenMP paths.
// Results are bitwise identical in both modes: pivot choices and reduction
// orders never depend on the schedule, only independent row updates and
// batched products run concurrently.

#include <cstddef>

namespace invlab {

void set_jobs(int n);  // 1 = serial; 0 = hardware default
int get_jobs();

enum class Exec { Default, Serial, Parallel };

// True when `exec` (with the global jobs setting) asks for the parallel path
// over a workload of `work` independent items.
bool use_parallel(Exec exec, std::size_t work);

}  // namespace invlab
