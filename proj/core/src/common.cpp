#include "ductmodes/common.hpp"

#include <atomic>
#include <cstdlib>
#include <thread>

namespace ductmodes {

namespace {
std::atomic<int> g_thread_override{0};
}

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::RangeExceeded: return "range-exceeded";
    case ErrorCode::Pole: return "pole";
    case ErrorCode::DegenerateArguments: return "degenerate-arguments";
    case ErrorCode::CompletenessFailure: return "completeness-failure";
    case ErrorCode::StepCollapse: return "step-collapse";
    case ErrorCode::NoConvergence: return "no-convergence";
    case ErrorCode::TripleRoot: return "triple-root";
    case ErrorCode::OutOfDisk: return "out-of-disk";
    case ErrorCode::TrackingFailure: return "tracking-failure";
    case ErrorCode::IllConditioned: return "ill-conditioned";
    case ErrorCode::InvalidArgument: return "invalid-argument";
  }
  return "unknown";
}

bool Error::is_convergence_failure() const noexcept {
  switch (code_) {
    case ErrorCode::CompletenessFailure:
    case ErrorCode::StepCollapse:
    case ErrorCode::NoConvergence:
    case ErrorCode::TripleRoot:
    case ErrorCode::TrackingFailure:
    case ErrorCode::IllConditioned:
    case ErrorCode::Pole:
      return true;
    default:
      return false;
  }
}

int worker_threads() {
  const int forced = g_thread_override.load();
  if (forced > 0) return forced;
  if (const char* env = std::getenv("DUCTMODES_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

void set_worker_threads(int n) { g_thread_override.store(n > 0 ? n : 0); }

}  // namespace ductmodes
