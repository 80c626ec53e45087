#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "qds/rng.hpp"

namespace qds {

// Fixed-length bit string packed into 64-bit words, bit i of the string at
// bit (i % 64) of word (i / 64).  Byte serialization is MSB-first within
// each byte so that hex dumps read in string order.
class BitString {
 public:
  BitString() = default;
  explicit BitString(std::size_t length);

  static BitString random(std::size_t length, Rng& rng);
  // Parses "0"/"1" characters; anything else is rejected.
  static BitString from_string(std::string_view bits);
  static BitString from_bytes(const std::vector<std::uint8_t>& bytes,
                              std::size_t length);

  std::size_t size() const { return size_; }
  bool empty() const { return size_ == 0; }

  bool bit(std::size_t i) const;
  void set_bit(std::size_t i, bool value);
  void flip_bit(std::size_t i);

  std::size_t count_ones() const;

  BitString operator^(const BitString& other) const;
  BitString& operator^=(const BitString& other);
  bool operator==(const BitString& other) const = default;

  BitString slice(std::size_t offset, std::size_t length) const;
  BitString concat(const BitString& tail) const;

  std::string to_string() const;
  std::string to_hex() const;
  std::vector<std::uint8_t> to_bytes() const;

  // Length-prefixed wire form: 8-byte little-endian bit count, then the
  // packed bytes.
  std::vector<std::uint8_t> serialize() const;
  static BitString deserialize(const std::vector<std::uint8_t>& wire);

  const std::vector<std::uint64_t>& words() const { return words_; }
  std::vector<std::uint64_t>& words() { return words_; }

 private:
  void check_index(std::size_t i) const;
  void clear_padding();

  std::vector<std::uint64_t> words_;
  std::size_t size_ = 0;
};

// Number of positions where a and b differ; lengths must match.
std::size_t hamming_distance(const BitString& a, const BitString& b);

}  // namespace qds
