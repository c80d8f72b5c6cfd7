#pragma once
#include <cstdint>

namespace qw {
// Seed for the property-test generators; recorded in every run manifest.
inline constexpr std::uint64_t kPropertySeed = 0x5eed2024;
}  // namespace qw
