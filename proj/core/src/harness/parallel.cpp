#include "ustlocal/harness/parallel.hpp"

#include <algorithm>

namespace ustlocal::harness {

unsigned resolve_threads(unsigned requested) noexcept {
  if (requested > 0) return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<Chunk> make_chunks(std::size_t items, std::size_t chunk_size) {
  chunk_size = std::max<std::size_t>(chunk_size, 1);
  std::vector<Chunk> chunks;
  for (std::size_t b = 0; b < items; b += chunk_size) chunks.push_back({b, std::min(items, b + chunk_size)});
  return chunks;
}

}  // namespace ustlocal::harness
