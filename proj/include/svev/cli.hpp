#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace svev::cli {

// exit codes
constexpr int kOk = 0;
constexpr int kVerificationFailed = 1;
constexpr int kConfigError = 2;
constexpr int kNumericalFailure = 3;

// args excludes the program name; messages go to out/err
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

}  // namespace svev::cli
