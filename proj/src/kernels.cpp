#include "lame/kernels.hpp"

#include <cstdlib>
#include <string>

namespace lame::kernels {

void configure_threads_from_env() {
  if (const char* env = std::getenv("LAME_THREADS")) {
    try {
      int t = std::stoi(env);
      if (t >= 1) omp_set_num_threads(t);
    } catch (...) {
      // ignored: malformed values leave the OpenMP default in place
    }
  }
}

int max_threads() { return omp_get_max_threads(); }

}  // namespace lame::kernels
