#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace omm::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitUnstable = 2;

/// Entry point shared by the omm-qcorr executable and the tests.
/// `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Worker count from OMM_QCORR_THREADS, else the hardware concurrency.
int default_threads();

}  // namespace omm::cli
