#pragma once

#include <chrono>
#include <iosfwd>
#include <string>

namespace shadowblade::cli {

enum ExitCode : int { kOk = 0, kRuntimeError = 1, kUsageError = 2 };

struct CliConfig {
    std::string api_base_url = "http://127.0.0.1:8750";
    std::string output_format = "table";  // table | json | dot
    std::chrono::milliseconds poll_interval{500};
    std::chrono::milliseconds poll_cap{15 * 60 * 1000};
};

/// Entry point shared by the executable and the tests. `defaults` supplies
/// the API base URL and polling cadence before flags and SHADOWBLADE_API
/// are applied.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err,
        CliConfig defaults = {});

} // namespace shadowblade::cli
