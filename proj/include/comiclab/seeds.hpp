#pragma once

#include <cstdint>

namespace comiclab {

/// Independent random streams derived from one master seed.
enum class Stream : std::uint64_t {
  data = 1,
  placement = 2,
  walk = 3,
  locations = 4,
  noise = 5,
};

std::uint64_t splitmix64(std::uint64_t& state);

/// Counter-based derivation: the seed for (stream, index) never depends on
/// how many other indices were drawn, so growing a realization count keeps
/// earlier realizations intact.
std::uint64_t derive_seed(std::uint64_t master, Stream stream, std::uint64_t index);

}  // namespace comiclab
