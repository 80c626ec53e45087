#include "qds/bitstring.hpp"

#include <bit>
#include <stdexcept>

namespace qds {
namespace {

std::size_t word_count(std::size_t bits) { return (bits + 63) / 64; }

constexpr char kHexDigits[] = "0123456789abcdef";

}  // namespace

BitString::BitString(std::size_t length)
    : words_(word_count(length), 0), size_(length) {}

BitString BitString::random(std::size_t length, Rng& rng) {
  BitString out(length);
  for (auto& w : out.words_) w = rng.next_u64();
  out.clear_padding();
  return out;
}

BitString BitString::from_string(std::string_view bits) {
  BitString out(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] == '1') {
      out.set_bit(i, true);
    } else if (bits[i] != '0') {
      throw std::invalid_argument("BitString::from_string: bad character");
    }
  }
  return out;
}

BitString BitString::from_bytes(const std::vector<std::uint8_t>& bytes,
                                std::size_t length) {
  if (bytes.size() * 8 < length) {
    throw std::invalid_argument("BitString::from_bytes: too few bytes");
  }
  BitString out(length);
  for (std::size_t i = 0; i < length; ++i) {
    const std::uint8_t byte = bytes[i / 8];
    if ((byte >> (7 - (i % 8))) & 1u) out.set_bit(i, true);
  }
  return out;
}

void BitString::check_index(std::size_t i) const {
  if (i >= size_) throw std::out_of_range("BitString: index out of range");
}

void BitString::clear_padding() {
  const std::size_t tail = size_ % 64;
  if (tail != 0 && !words_.empty()) {
    words_.back() &= (~std::uint64_t{0}) >> (64 - tail);
  }
}

bool BitString::bit(std::size_t i) const {
  check_index(i);
  return (words_[i >> 6] >> (i & 63)) & 1u;
}

void BitString::set_bit(std::size_t i, bool value) {
  check_index(i);
  const std::uint64_t mask = std::uint64_t{1} << (i & 63);
  if (value) {
    words_[i >> 6] |= mask;
  } else {
    words_[i >> 6] &= ~mask;
  }
}

void BitString::flip_bit(std::size_t i) {
  check_index(i);
  words_[i >> 6] ^= std::uint64_t{1} << (i & 63);
}

std::size_t BitString::count_ones() const {
  std::size_t total = 0;
  for (std::uint64_t w : words_) total += std::popcount(w);
  return total;
}

BitString BitString::operator^(const BitString& other) const {
  BitString out = *this;
  out ^= other;
  return out;
}

BitString& BitString::operator^=(const BitString& other) {
  if (size_ != other.size_) {
    throw std::invalid_argument("BitString: xor length mismatch");
  }
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] ^= other.words_[i];
  return *this;
}

BitString BitString::slice(std::size_t offset, std::size_t length) const {
  if (offset + length > size_) {
    throw std::out_of_range("BitString::slice: range out of bounds");
  }
  BitString out(length);
  for (std::size_t i = 0; i < length; ++i) {
    if (bit(offset + i)) out.set_bit(i, true);
  }
  return out;
}

BitString BitString::concat(const BitString& tail) const {
  BitString out(size_ + tail.size_);
  for (std::size_t i = 0; i < size_; ++i) {
    if (bit(i)) out.set_bit(i, true);
  }
  for (std::size_t i = 0; i < tail.size_; ++i) {
    if (tail.bit(i)) out.set_bit(size_ + i, true);
  }
  return out;
}

std::string BitString::to_string() const {
  std::string s(size_, '0');
  for (std::size_t i = 0; i < size_; ++i) {
    if (bit(i)) s[i] = '1';
  }
  return s;
}

std::vector<std::uint8_t> BitString::to_bytes() const {
  std::vector<std::uint8_t> bytes((size_ + 7) / 8, 0);
  for (std::size_t i = 0; i < size_; ++i) {
    if (bit(i)) bytes[i / 8] |= std::uint8_t(1u << (7 - (i % 8)));
  }
  return bytes;
}

std::string BitString::to_hex() const {
  std::string out;
  for (std::uint8_t b : to_bytes()) {
    out.push_back(kHexDigits[b >> 4]);
    out.push_back(kHexDigits[b & 0xf]);
  }
  return out;
}

std::vector<std::uint8_t> BitString::serialize() const {
  std::vector<std::uint8_t> wire(8);
  const std::uint64_t n = size_;
  for (int i = 0; i < 8; ++i) wire[i] = std::uint8_t(n >> (8 * i));
  const auto body = to_bytes();
  wire.insert(wire.end(), body.begin(), body.end());
  return wire;
}

BitString BitString::deserialize(const std::vector<std::uint8_t>& wire) {
  if (wire.size() < 8) {
    throw std::invalid_argument("BitString::deserialize: truncated header");
  }
  std::uint64_t n = 0;
  for (int i = 0; i < 8; ++i) n |= std::uint64_t(wire[i]) << (8 * i);
  const std::size_t body_bytes = (n + 7) / 8;
  if (wire.size() != 8 + body_bytes) {
    throw std::invalid_argument("BitString::deserialize: length mismatch");
  }
  std::vector<std::uint8_t> body(wire.begin() + 8, wire.end());
  // Reject nonzero padding bits so deserialize(serialize(x)) is a bijection.
  if (n % 8 != 0 && !body.empty()) {
    const std::uint8_t pad_mask = std::uint8_t(0xffu >> (n % 8));
    if (body.back() & pad_mask) {
      throw std::invalid_argument("BitString::deserialize: nonzero padding");
    }
  }
  return from_bytes(body, n);
}

std::size_t hamming_distance(const BitString& a, const BitString& b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("hamming_distance: length mismatch");
  }
  std::size_t total = 0;
  for (std::size_t i = 0; i < a.words().size(); ++i) {
    total += std::popcount(a.words()[i] ^ b.words()[i]);
  }
  return total;
}

}  // namespace qds
