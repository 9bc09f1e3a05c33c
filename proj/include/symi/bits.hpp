#pragma once

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

namespace symi {

  using point_t = std::uint8_t;

  // A subset of {0, ..., 63}; used for domains, images and spans.
  class PointSet {
   public:
    constexpr PointSet() noexcept = default;
    constexpr explicit PointSet(std::uint64_t bits) noexcept : bits_(bits) {}
    PointSet(std::initializer_list<point_t> pts) noexcept {
      for (auto p : pts) {
        insert(p);
      }
    }

    static constexpr PointSet full(std::size_t n) noexcept {
      return PointSet(n >= 64 ? ~std::uint64_t{0}
                              : (std::uint64_t{1} << n) - 1);
    }

    constexpr bool contains(std::size_t x) const noexcept {
      return (bits_ >> x) & 1U;
    }
    constexpr void insert(std::size_t x) noexcept {
      bits_ |= std::uint64_t{1} << x;
    }
    constexpr void erase(std::size_t x) noexcept {
      bits_ &= ~(std::uint64_t{1} << x);
    }
    constexpr std::size_t size() const noexcept {
      return static_cast<std::size_t>(std::popcount(bits_));
    }
    constexpr bool empty() const noexcept {
      return bits_ == 0;
    }
    constexpr std::uint64_t bits() const noexcept {
      return bits_;
    }
    // Smallest member; undefined on the empty set.
    constexpr point_t min() const noexcept {
      return static_cast<point_t>(std::countr_zero(bits_));
    }

    std::vector<point_t> to_vector() const {
      std::vector<point_t> out;
      out.reserve(size());
      for (auto b = bits_; b != 0; b &= b - 1) {
        out.push_back(static_cast<point_t>(std::countr_zero(b)));
      }
      return out;
    }

    constexpr bool subset_of(PointSet other) const noexcept {
      return (bits_ & ~other.bits_) == 0;
    }

    friend constexpr PointSet operator|(PointSet a, PointSet b) noexcept {
      return PointSet(a.bits_ | b.bits_);
    }
    friend constexpr PointSet operator&(PointSet a, PointSet b) noexcept {
      return PointSet(a.bits_ & b.bits_);
    }
    friend constexpr PointSet operator-(PointSet a, PointSet b) noexcept {
      return PointSet(a.bits_ & ~b.bits_);
    }
    friend constexpr bool operator==(PointSet, PointSet) noexcept = default;

   private:
    std::uint64_t bits_ = 0;
  };

  // Fixed-size dynamic bitset backed by 64-bit words.
  class Bitset {
   public:
    Bitset() = default;
    explicit Bitset(std::size_t nbits)
        : nbits_(nbits), words_((nbits + 63) / 64, 0) {}

    std::size_t size() const noexcept {
      return nbits_;
    }
    std::size_t num_words() const noexcept {
      return words_.size();
    }
    bool test(std::size_t i) const noexcept {
      return (words_[i >> 6] >> (i & 63)) & 1U;
    }
    void set(std::size_t i) noexcept {
      words_[i >> 6] |= std::uint64_t{1} << (i & 63);
    }
    void reset(std::size_t i) noexcept {
      words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63));
    }
    void clear() noexcept {
      std::fill(words_.begin(), words_.end(), 0);
    }
    std::size_t count() const noexcept {
      std::size_t c = 0;
      for (auto w : words_) {
        c += static_cast<std::size_t>(std::popcount(w));
      }
      return c;
    }
    bool any() const noexcept {
      for (auto w : words_) {
        if (w != 0) {
          return true;
        }
      }
      return false;
    }
    std::span<std::uint64_t> words() noexcept {
      return words_;
    }
    std::span<std::uint64_t const> words() const noexcept {
      return words_;
    }

    // Calls f(i) for every set bit in increasing order.
    template <typename F>
    void for_each(F&& f) const {
      for (std::size_t w = 0; w < words_.size(); ++w) {
        for (auto b = words_[w]; b != 0; b &= b - 1) {
          f(w * 64 + static_cast<std::size_t>(std::countr_zero(b)));
        }
      }
    }

    friend bool operator==(Bitset const&, Bitset const&) = default;

   private:
    std::size_t                nbits_ = 0;
    std::vector<std::uint64_t> words_;
  };

  // Square bit matrix with rows padded to whole 64-bit words.
  class BitMatrix {
   public:
    BitMatrix() = default;
    explicit BitMatrix(std::size_t n)
        : n_(n), stride_((n + 63) / 64), words_(n * stride_, 0) {}

    std::size_t size() const noexcept {
      return n_;
    }
    std::size_t stride() const noexcept {
      return stride_;
    }
    bool test(std::size_t i, std::size_t j) const noexcept {
      return (words_[i * stride_ + (j >> 6)] >> (j & 63)) & 1U;
    }
    void set(std::size_t i, std::size_t j) noexcept {
      words_[i * stride_ + (j >> 6)] |= std::uint64_t{1} << (j & 63);
    }
    std::span<std::uint64_t const> row(std::size_t i) const noexcept {
      return {words_.data() + i * stride_, stride_};
    }
    std::span<std::uint64_t> row(std::size_t i) noexcept {
      return {words_.data() + i * stride_, stride_};
    }
    std::size_t row_count(std::size_t i) const noexcept {
      std::size_t c = 0;
      for (auto w : row(i)) {
        c += static_cast<std::size_t>(std::popcount(w));
      }
      return c;
    }
    std::span<std::uint64_t const> data() const noexcept {
      return words_;
    }
    std::span<std::uint64_t> data() noexcept {
      return words_;
    }

    friend bool operator==(BitMatrix const&, BitMatrix const&) = default;

   private:
    std::size_t                n_      = 0;
    std::size_t                stride_ = 0;
    std::vector<std::uint64_t> words_;
  };

}  // namespace symi
