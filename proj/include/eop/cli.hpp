#pragma once

#include <iosfwd>

namespace eop::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConstraint = 1;
inline constexpr int kExitVerification = 2;
inline constexpr int kExitUsage = 64;
inline constexpr int kExitIo = 74;

/// Relative --out paths are resolved against this directory when it is set.
inline constexpr const char* kOutDirEnv = "EOPCTL_OUT_DIR";

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace eop::cli
