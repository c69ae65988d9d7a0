#pragma once

#include <bit>
#include <cstdint>
#include <span>

namespace tubelab::kernels::detail {

// Largest j such that a separation with the given squared distance (2-d) or
// absolute difference (1-d), in grid units 2^-k, lies within radius 2^-j.
// Returns -1 when the separation exceeds radius 1.
inline int radius_level(std::uint64_t dist, int k, bool one_dimensional) {
  int m;
  if (dist == 0) {
    m = 0;
  } else if (one_dimensional) {
    m = static_cast<int>(std::bit_width(dist - 1));
  } else {
    m = (static_cast<int>(std::bit_width(dist - 1)) + 1) / 2;
  }
  return m > k ? -1 : k - m;
}

inline void suffix_accumulate(std::span<std::uint32_t> row) {
  for (std::size_t j = row.size(); j-- > 1;) row[j - 1] += row[j];
}

}  // namespace tubelab::kernels::detail
