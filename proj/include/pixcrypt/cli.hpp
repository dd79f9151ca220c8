#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pixcrypt::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kUsage = 1;
inline constexpr int kIo = 2;
inline constexpr int kDomain = 3;

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
// argv[0] is supplied internally.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pixcrypt::cli
