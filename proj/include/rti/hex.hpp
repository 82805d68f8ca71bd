#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace rti {

using Bytes = std::vector<std::uint8_t>;

std::string to_hex(std::span<const std::uint8_t> bytes);

// Fixed-width lowercase hex of the low `digits` nibbles of `value`.
std::string to_hex_fixed(std::uint64_t value, int digits);

// Strict lowercase/uppercase hex decoding; nullopt on odd length or bad digit.
std::optional<Bytes> from_hex(std::string_view hex);
std::optional<std::uint64_t> parse_hex_u64(std::string_view hex);

}  // namespace rti
