#include "tembp/parallel.hpp"

#include <omp.h>

namespace tembp {

void set_worker_threads(int n) {
  if (n > 0) {
    omp_set_num_threads(n);
  }
}

int worker_threads() { return omp_get_max_threads(); }

}  // namespace tembp
