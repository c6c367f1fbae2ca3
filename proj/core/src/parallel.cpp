#include "locrad/parallel.hpp"

#include <cstdlib>
#include <string>

namespace locrad {

std::size_t worker_count() {
  if (const char* env = std::getenv("LOCRAD_THREADS"); env != nullptr && *env != '\0') {
    try {
      const long requested = std::stol(env);
      if (requested > 0) return static_cast<std::size_t>(requested);
    } catch (const std::exception&) {
      // fall through to hardware concurrency
    }
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

}  // namespace locrad
