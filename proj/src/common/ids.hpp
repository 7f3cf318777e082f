#pragma once

#include <string>
#include <string_view>

namespace shadowblade::detail {

// prefix + 16 lowercase hex characters from a process-wide random engine.
std::string random_id(std::string_view prefix);

// Current UTC time as "YYYY-MM-DDTHH:MM:SS.mmmZ".
std::string utc_timestamp();

} // namespace shadowblade::detail
