#pragma once

namespace qsh {

/// Exit codes: 0 ok (possibly with warnings), 1 input error or failed check, 2 divergent result.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 1;
inline constexpr int kExitDivergent = 2;

int run_cli(int argc, char** argv);

}  // namespace qsh
