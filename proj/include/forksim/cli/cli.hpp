#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace forksim::cli {

enum ExitCode { kOk = 0, kInvalid = 1, kFault = 2 };

/// "0x2000..0x40000" (doubling steps), "0x2000,0x8000" or a single value.
std::optional<std::vector<std::uint64_t>> parse_difficulties(const std::string& spec);

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace forksim::cli
