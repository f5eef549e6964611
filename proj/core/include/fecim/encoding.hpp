#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace fecim {

/// Readout convention of a nibble: 2CM (signed, MSB weighs -8) or N2CM (unsigned).
enum class NibbleMode { TwosComplement, Unsigned };

using NibbleBits = std::array<std::uint8_t, 4>;  // index = bit position, LSB first

struct NibbleValue {
  NibbleMode mode = NibbleMode::Unsigned;
  int value = 0;

  NibbleBits bits() const;
};

/// 8-bit weight split into the signed high nibble (y7..y4) and unsigned low nibble (y3..y0).
struct WeightNibblePair {
  NibbleBits high_bits{};  // high_bits[3] is the sign cell y7
  NibbleBits low_bits{};
  int source_value = 0;

  int high_value() const;  // 2CM, -8..7
  int low_value() const;   // N2CM, 0..15
  int decode() const { return 16 * high_value() + low_value(); }
};

struct InputBitStream {
  std::vector<std::uint8_t> bits;  // x0 first
  int precision = 0;
  int source_value = 0;

  int decode() const;
};

int nibble_min(NibbleMode mode);
int nibble_max(NibbleMode mode);
int decode_nibble(const NibbleBits& bits, NibbleMode mode);

WeightNibblePair encode_weight_8b(int w);
NibbleValue encode_weight_4b(int w);
InputBitStream encode_input(int x, int precision);

}  // namespace fecim
