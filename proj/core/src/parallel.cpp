#include "mrgg/parallel.hpp"

#include <cstdlib>
#include <string>

namespace mrgg {

unsigned resolve_jobs(unsigned requested) {
  if (const char* env = std::getenv("MRGG_JOBS"); env != nullptr && *env != '\0') {
    try {
      const long v = std::stol(env);
      if (v > 0) requested = static_cast<unsigned>(v);
    } catch (const std::exception&) {
      // unparsable override is ignored
    }
  }
  if (requested == 0) requested = std::max(1u, std::thread::hardware_concurrency());
  return requested;
}

}  // namespace mrgg
