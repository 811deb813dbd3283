#pragma once

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace aplift {

// Fixed-length bit vector backed by 64-bit words. Bits past size() are kept
// zero so that word-level popcount and equality stay exact.
class Bitmap {
 public:
  using word_type = std::uint64_t;
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
  static constexpr std::size_t kWordBits = 64;

  Bitmap() = default;
  explicit Bitmap(std::size_t nbits) : size_(nbits), words_(word_count(nbits), 0) {}

  std::size_t size() const noexcept { return size_; }
  const std::vector<word_type>& words() const noexcept { return words_; }

  bool test(std::size_t i) const noexcept {
    return i < size_ && ((words_[i / kWordBits] >> (i % kWordBits)) & 1U) != 0;
  }

  void set(std::size_t i) noexcept { words_[i / kWordBits] |= word_type{1} << (i % kWordBits); }
  void reset(std::size_t i) noexcept { words_[i / kWordBits] &= ~(word_type{1} << (i % kWordBits)); }

  void set_all() noexcept {
    std::fill(words_.begin(), words_.end(), ~word_type{0});
    trim();
  }

  std::size_t count() const noexcept {
    std::size_t c = 0;
    for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }

  bool none() const noexcept {
    return std::all_of(words_.begin(), words_.end(), [](word_type w) { return w == 0; });
  }

  // First set bit at index >= from, or npos.
  std::size_t find_next(std::size_t from) const noexcept {
    if (from >= size_) return npos;
    std::size_t wi = from / kWordBits;
    word_type w = words_[wi] & (~word_type{0} << (from % kWordBits));
    while (true) {
      if (w != 0) return wi * kWordBits + static_cast<std::size_t>(std::countr_zero(w));
      if (++wi == words_.size()) return npos;
      w = words_[wi];
    }
  }
  std::size_t find_first() const noexcept { return find_next(0); }

  Bitmap& operator&=(const Bitmap& o) noexcept {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
    return *this;
  }
  Bitmap& operator|=(const Bitmap& o) noexcept {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
    return *this;
  }
  void flip() noexcept {
    for (auto& w : words_) w = ~w;
    trim();
  }

  // this[j] &= src[j + k]; reads past src.size() count as zero.
  void and_shifted_down(const Bitmap& src, std::size_t k) noexcept {
    const std::size_t ws = k / kWordBits;
    const std::size_t bs = k % kWordBits;
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= src.word_at(i + ws, bs);
  }

  // this[j] |= src[j - k] for j >= k (left shift toward higher indices).
  void or_shifted_up(const Bitmap& src, std::size_t k) noexcept {
    const std::size_t ws = k / kWordBits;
    const std::size_t bs = k % kWordBits;
    for (std::size_t i = words_.size(); i-- > ws;) {
      word_type w = i - ws < src.words_.size() ? src.words_[i - ws] << bs : 0;
      if (bs != 0 && i - ws >= 1 && i - ws - 1 < src.words_.size())
        w |= src.words_[i - ws - 1] >> (kWordBits - bs);
      words_[i] |= w;
    }
    trim();
  }

  // Bits [from, from + n) of this bitmap as a new bitmap of length n.
  Bitmap slice(std::size_t from, std::size_t n) const {
    Bitmap out(n);
    for (std::size_t i = 0; i < out.words_.size(); ++i)
      out.words_[i] = word_at(i + from / kWordBits, from % kWordBits);
    out.trim();
    return out;
  }

  // True iff every set bit of this is also set in o (same length).
  bool subset_of(const Bitmap& o) const noexcept {
    for (std::size_t i = 0; i < words_.size(); ++i)
      if ((words_[i] & ~o.words_[i]) != 0) return false;
    return true;
  }

  friend bool operator==(const Bitmap&, const Bitmap&) = default;

 private:
  static std::size_t word_count(std::size_t nbits) { return (nbits + kWordBits - 1) / kWordBits; }

  // 64 bits starting at bit (wi * 64 + bs).
  word_type word_at(std::size_t wi, std::size_t bs) const noexcept {
    word_type lo = wi < words_.size() ? words_[wi] : 0;
    if (bs == 0) return lo;
    word_type hi = wi + 1 < words_.size() ? words_[wi + 1] : 0;
    return (lo >> bs) | (hi << (kWordBits - bs));
  }

  void trim() noexcept {
    if (size_ % kWordBits != 0 && !words_.empty())
      words_.back() &= (word_type{1} << (size_ % kWordBits)) - 1;
  }

  std::size_t size_ = 0;
  std::vector<word_type> words_;
};

}  // namespace aplift
