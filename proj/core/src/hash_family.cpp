#include "cuckoo_rw/hash_family.hpp"

#include <sodium.h>

#include <cstring>
#include <stdexcept>

#include "cuckoo_rw/seeding.hpp"

namespace cuckoo_rw {
namespace {

void store_le64(unsigned char* out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out[i] = static_cast<unsigned char>(v >> (8 * i));
}

std::uint64_t load_le64(const unsigned char* in) {
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | in[i];
  return v;
}

}  // namespace

HashFamily::HashFamily(int k, std::uint64_t n, std::uint64_t seed) : k_(k), n_(n), seed_(seed) {
  if (k < 2 || k > kMaxChoices) {
    throw std::domain_error("HashFamily: k must lie in [2, 16]");
  }
  if (n < 1 || n > (std::uint64_t{1} << 32)) {
    throw std::domain_error("HashFamily: n must lie in [1, 2^32]");
  }
  if (sodium_init() < 0) throw std::runtime_error("HashFamily: libsodium failed to initialize");
  static_assert(crypto_shorthash_KEYBYTES == 16);
  store_le64(key_.data(), splitmix64(seed));
  store_le64(key_.data() + 8, splitmix64(seed ^ 0x6a09e667f3bcc909ULL));
}

Vertex HashFamily::coordinate(ItemId item, int index) const {
  unsigned char msg[12];
  store_le64(msg, item);
  msg[8] = static_cast<unsigned char>(index);
  msg[9] = msg[10] = msg[11] = 0;
  unsigned char digest[crypto_shorthash_BYTES];
  crypto_shorthash(digest, msg, sizeof msg, key_.data());
  const auto wide = static_cast<unsigned __int128>(load_le64(digest)) * n_;
  return static_cast<Vertex>(wide >> 64);
}

std::span<const Vertex> HashFamily::positions(ItemId item) const {
  std::lock_guard lock(mu_);
  auto [it, inserted] = memo_.try_emplace(item);
  if (inserted) {
    for (int i = 0; i < k_; ++i) it->second[i] = coordinate(item, i);
  }
  return {it->second.data(), static_cast<std::size_t>(k_)};
}

void HashFamily::pin(ItemId item, std::span<const Vertex> slots) {
  if (slots.size() != static_cast<std::size_t>(k_)) {
    throw std::invalid_argument("HashFamily::pin: tuple length differs from k");
  }
  for (Vertex v : slots) {
    if (v >= n_) throw std::out_of_range("HashFamily::pin: slot out of range");
  }
  std::lock_guard lock(mu_);
  auto [it, inserted] = memo_.try_emplace(item);
  if (!inserted) throw std::logic_error("HashFamily::pin: item already materialized");
  std::memcpy(it->second.data(), slots.data(), slots.size() * sizeof(Vertex));
}

std::size_t HashFamily::memo_size() const {
  std::lock_guard lock(mu_);
  return memo_.size();
}

}  // namespace cuckoo_rw
