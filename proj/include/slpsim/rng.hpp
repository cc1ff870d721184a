#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace slpsim {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer. Used only to mix stream keys, never as a generator.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Folds a key sequence into one 64-bit stream id. Order-sensitive.
constexpr std::uint64_t stream_id(std::initializer_list<std::uint64_t> keys) noexcept {
  std::uint64_t h = 0x51ed270b27c9f3a1ULL;
  for (auto k : keys) h = mix64(h ^ mix64(k));
  return h;
}

/// Named sub-stream purposes inside one trial.
enum class StreamPurpose : std::uint64_t {
  SourceSelection = 1,
  CnPlacement = 2,
  Packet = 3,
};

/// Derives independent generators for one trial. Every draw a trial makes
/// comes from a stream keyed by (trial key, purpose, index), so results do
/// not depend on scheduling order or on how many draws other streams made.
class TrialStreams {
 public:
  TrialStreams() = default;
  explicit TrialStreams(std::uint64_t trial_key) : key_(trial_key) {}

  Rng stream(StreamPurpose purpose, std::uint64_t index = 0) const {
    return Rng(stream_id({key_, static_cast<std::uint64_t>(purpose), index}));
  }

  std::uint64_t key() const noexcept { return key_; }

 private:
  std::uint64_t key_ = 0;
};

}  // namespace slpsim
