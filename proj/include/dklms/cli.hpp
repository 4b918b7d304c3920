#pragma once

#include <iosfwd>

namespace dklms {

// Entry point behind the dklms-sim binary, factored out so tests can drive
// it with captured streams. Exit codes: 0 success, 2 configuration error,
// 3 a selected algorithm hit a non-finite network MSE (outputs are still
// written, truncated at the divergence point).
int cli_main(int argc, const char* const* argv, std::ostream& out,
             std::ostream& err);

}  // namespace dklms
