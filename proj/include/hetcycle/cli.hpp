#pragma once

namespace hetcycle {

// Exit codes: 0 ok, 1 usage/input error, 2 indeterminate regime,
// 3 internal numerical failure.
int run_cli(int argc, const char* const* argv);

} // namespace hetcycle
