#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace gpx {

/// Exit codes of cli_main.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumeric = 3;

/// Entry point of the gpx command-line tool. args excludes the program name.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Known values of the Pickands constant (alpha = 1 and 2).
bool known_pickands(double alpha, double& value);
/// Known values of the two-sided Piterbarg constant with penalty (1 + R)|t|^alpha
/// (alpha = 1 and 2).
bool known_piterbarg(double alpha, double R, double& value);

}  // namespace gpx
