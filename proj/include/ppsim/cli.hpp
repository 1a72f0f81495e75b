#pragma once

namespace ppsim::cli {

// Exit codes: 0 success, 2 invalid config/arguments, 3 supercritical model,
// 4 I/O failure.
int run(int argc, const char* const* argv);

}  // namespace ppsim::cli
