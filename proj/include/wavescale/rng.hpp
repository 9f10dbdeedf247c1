#pragma once

#include <array>
#include <cstdint>

namespace wavescale {

// Philox4x32-10 counter-based generator (Salmon et al.). Every output block
// is a pure function of (seed, stream, block index), so independent streams
// can be consumed in parallel without any shared state and a given stream
// always replays the same sequence.
//
// Stream-splitting convention used throughout the library: the top byte of
// the stream id is a purpose tag, the low bits an index (e.g. replicate
// number). See make_stream().
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint32_t next_u32();
  std::uint64_t next_u64();

  // Uniform on [0,1) / (0,1], 53-bit resolution.
  double uniform();
  double uniform_oc();

  // Standard normal via Box-Muller; draws two uniforms per pair.
  double normal();

  // Raw block access: the i-th 128-bit block of (seed, stream).
  static std::array<std::uint32_t, 4> block(std::uint64_t seed, std::uint64_t stream,
                                            std::uint64_t index);

 private:
  void refill();

  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t block_index_ = 0;
  std::array<std::uint32_t, 4> buffer_{};
  int buffer_pos_ = 4;
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

enum class StreamPurpose : std::uint64_t {
  synthesis = 0,
  contamination = 1,
  shuffle = 2,
  aux = 3,
};

constexpr std::uint64_t make_stream(StreamPurpose purpose, std::uint64_t index) {
  return (static_cast<std::uint64_t>(purpose) << 56) | (index & 0x00FF'FFFF'FFFF'FFFFull);
}

}  // namespace wavescale
