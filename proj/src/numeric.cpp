#include "gammaflow/numeric.hpp"

namespace gammaflow {

unsigned default_jobs() noexcept {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

}  // namespace gammaflow
