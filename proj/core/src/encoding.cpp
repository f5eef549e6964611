#include "fecim/encoding.hpp"

#include <string>

#include "fecim/errors.hpp"

namespace fecim {

int nibble_min(NibbleMode mode) { return mode == NibbleMode::TwosComplement ? -8 : 0; }
int nibble_max(NibbleMode mode) { return mode == NibbleMode::TwosComplement ? 7 : 15; }

int decode_nibble(const NibbleBits& bits, NibbleMode mode) {
  const int msb = mode == NibbleMode::TwosComplement ? -8 : 8;
  return msb * bits[3] + 4 * bits[2] + 2 * bits[1] + bits[0];
}

NibbleBits NibbleValue::bits() const {
  if (value < nibble_min(mode) || value > nibble_max(mode)) {
    throw EncodingError("nibble value " + std::to_string(value) + " outside mode range");
  }
  const unsigned raw = static_cast<unsigned>(value) & 0xFu;
  return {static_cast<std::uint8_t>(raw & 1u), static_cast<std::uint8_t>((raw >> 1) & 1u),
          static_cast<std::uint8_t>((raw >> 2) & 1u), static_cast<std::uint8_t>((raw >> 3) & 1u)};
}

int WeightNibblePair::high_value() const { return decode_nibble(high_bits, NibbleMode::TwosComplement); }
int WeightNibblePair::low_value() const { return decode_nibble(low_bits, NibbleMode::Unsigned); }

int InputBitStream::decode() const {
  int x = 0;
  for (std::size_t i = 0; i < bits.size(); ++i) x += bits[i] << i;
  return x;
}

WeightNibblePair encode_weight_8b(int w) {
  if (w < -128 || w > 127) throw EncodingError("8-bit weight " + std::to_string(w) + " outside [-128, 127]");
  const unsigned raw = static_cast<unsigned>(w) & 0xFFu;
  WeightNibblePair p;
  p.source_value = w;
  for (int j = 0; j < 4; ++j) {
    p.low_bits[j] = static_cast<std::uint8_t>((raw >> j) & 1u);
    p.high_bits[j] = static_cast<std::uint8_t>((raw >> (j + 4)) & 1u);
  }
  return p;
}

NibbleValue encode_weight_4b(int w) {
  if (w < -8 || w > 7) throw EncodingError("4-bit weight " + std::to_string(w) + " outside [-8, 7]");
  return {NibbleMode::TwosComplement, w};
}

InputBitStream encode_input(int x, int precision) {
  if (precision < 1 || precision > 8) {
    throw EncodingError("input precision " + std::to_string(precision) + " outside 1..8");
  }
  if (x < 0 || x >= (1 << precision)) {
    throw EncodingError("input " + std::to_string(x) + " does not fit " + std::to_string(precision) + " bits");
  }
  InputBitStream s;
  s.precision = precision;
  s.source_value = x;
  s.bits.resize(static_cast<std::size_t>(precision));
  for (int i = 0; i < precision; ++i) s.bits[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>((x >> i) & 1);
  return s;
}

}  // namespace fecim
