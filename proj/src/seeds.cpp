#include "comiclab/seeds.hpp"

namespace comiclab {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, Stream stream, std::uint64_t index) {
  std::uint64_t state = master;
  std::uint64_t a = splitmix64(state);
  state = a ^ (static_cast<std::uint64_t>(stream) * 0xd1342543de82ef95ULL);
  std::uint64_t b = splitmix64(state);
  state = b ^ (index * 0x2545f4914f6cdd1dULL + 0x632be59bd9b4e019ULL);
  return splitmix64(state);
}

}  // namespace comiclab
