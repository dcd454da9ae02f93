#pragma once

// Counter-based random numbers: Philox4x32-10 with Box-Muller normals.
//
// Draw j of stream s under seed k uses counter {lo32(j), hi32(j), s, 0} and
// key {lo32(k), hi32(k)}. Outputs (o0, o1) form a 53-bit uniform u1 in (0, 1],
// (o2, o3) a 53-bit uniform u2 in [0, 1), and the draw is
// sqrt(-2 ln u1) cos(2 pi u2). Each draw is a pure function of (k, s, j), so
// lengthening a data set never changes the draws already made.

#include <array>
#include <cstdint>

namespace ddlqr::harness {

using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

PhiloxCounter philox4x32_10(PhiloxCounter ctr, PhiloxKey key);

double standard_normal(std::uint64_t seed, std::uint32_t stream, std::uint64_t index);

/// Substreams used by the data generator.
enum Stream : std::uint32_t { kStreamX = 1, kStreamU = 2, kStreamW = 3 };

}  // namespace ddlqr::harness
