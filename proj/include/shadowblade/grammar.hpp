#pragma once

#include <string_view>

namespace shadowblade {

// Input grammar shared by target registration and invocation building.
//
//   host     := ipv4 | hostname
//   ipv4     := octet "." octet "." octet "." octet      (octet 0-255, no leading zeros)
//   hostname := label ("." label)*                       (total length <= 253)
//   label    := [A-Za-z0-9] ([A-Za-z0-9-]{0,61} [A-Za-z0-9])?
//
// Anything outside this grammar (whitespace, shell metacharacters, a leading
// "-" that could be read as an option) is rejected.
bool is_valid_ipv4(std::string_view text) noexcept;
bool is_valid_hostname(std::string_view text) noexcept;
bool is_valid_host(std::string_view text) noexcept;

// URL path made of "/"-separated segments of unreserved characters
// [A-Za-z0-9._~-] plus percent escapes. "." and ".." segments are rejected.
bool is_valid_url_path(std::string_view text) noexcept;

} // namespace shadowblade
