#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace routeseal {

// Standard alphabet, '=' padding, no line wrapping.
std::string base64_encode(std::span<const std::uint8_t> data);

// Strict decode: rejects bad characters, bad lengths and misplaced padding.
std::optional<std::vector<std::uint8_t>> base64_decode(std::string_view text);

}  // namespace routeseal
