#include "ddlqr/harness/rng.hpp"

#include <cmath>
#include <numbers>

namespace ddlqr::harness {

PhiloxCounter philox4x32_10(PhiloxCounter c, PhiloxKey k) {
  constexpr std::uint32_t kM0 = 0xD2511F53u, kM1 = 0xCD9E8D57u;
  constexpr std::uint32_t kW0 = 0x9E3779B9u, kW1 = 0xBB67AE85u;
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      k[0] += kW0;
      k[1] += kW1;
    }
    const std::uint64_t p0 = static_cast<std::uint64_t>(kM0) * c[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(kM1) * c[2];
    const auto hi0 = static_cast<std::uint32_t>(p0 >> 32), lo0 = static_cast<std::uint32_t>(p0);
    const auto hi1 = static_cast<std::uint32_t>(p1 >> 32), lo1 = static_cast<std::uint32_t>(p1);
    c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
  }
  return c;
}

double standard_normal(std::uint64_t seed, std::uint32_t stream, std::uint64_t index) {
  const PhiloxCounter out =
      philox4x32_10({static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32), stream, 0u},
                    {static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)});
  constexpr double kScale = 1.0 / 9007199254740992.0;  // 2^-53
  const std::uint64_t a = ((static_cast<std::uint64_t>(out[0]) << 32) | out[1]) >> 11;
  const std::uint64_t b = ((static_cast<std::uint64_t>(out[2]) << 32) | out[3]) >> 11;
  const double u1 = 1.0 - static_cast<double>(a) * kScale;
  const double u2 = static_cast<double>(b) * kScale;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace ddlqr::harness
