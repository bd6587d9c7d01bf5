#include "sme/scheduler.hpp"

#include <cstdlib>
#include <string>

namespace sme {

std::size_t default_jobs()
{
  if (const char* env = std::getenv("SME_JOBS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1)
      return static_cast<std::size_t>(v);
  }
  const unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : hc;
}

} // namespace sme
