#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "enumerate.hpp"
#include "error.hpp"
#include "pinj.hpp"

namespace symi {

  struct SemigroupFlags {
    bool commutative       = false;
    bool nilpotent         = false;
    bool null              = false;
    bool inverse           = false;
    bool semilattice       = false;
    bool contains_zero     = false;
    bool contains_identity = false;

    friend bool operator==(SemigroupFlags const&,
                           SemigroupFlags const&) = default;
  };

  // A finite set of elements of I(n), kept sorted by element ID without
  // duplicates.  Classification flags are computed on first request.
  class SemigroupSet {
   public:
    SemigroupSet() = default;

    SemigroupSet(std::size_t n, std::vector<PInj> elems)
        : n_(n), elems_(std::move(elems)) {
      for (auto const& a : elems_) {
        if (a.degree() != n) {
          throw Error("SemigroupSet: element of degree "
                      + std::to_string(a.degree()) + " in a set of degree "
                      + std::to_string(n));
        }
      }
      sort_by_id(elems_);
      elems_.erase(std::unique(elems_.begin(), elems_.end()), elems_.end());
      if (n_ <= max_id_degree) {
        ids_.reserve(elems_.size());
        for (auto const& a : elems_) {
          ids_.push_back(element_id(a));
        }
      }
    }

    std::size_t degree() const noexcept {
      return n_;
    }
    std::size_t size() const noexcept {
      return elems_.size();
    }
    bool empty() const noexcept {
      return elems_.empty();
    }
    std::vector<PInj> const& elements() const noexcept {
      return elems_;
    }
    auto begin() const noexcept {
      return elems_.begin();
    }
    auto end() const noexcept {
      return elems_.end();
    }
    PInj const& operator[](std::size_t i) const {
      return elems_[i];
    }
    std::vector<std::uint64_t> const& ids() const noexcept {
      return ids_;
    }

    bool contains(PInj const& a) const {
      if (a.degree() != n_) {
        return false;
      }
      if (n_ <= max_id_degree) {
        return std::binary_search(ids_.begin(), ids_.end(), element_id(a));
      }
      return std::binary_search(elems_.begin(), elems_.end(), a, IdLess{});
    }

    bool is_closed() const {
      if (!closed_) {
        closed_ = true;
        for (auto const& a : elems_) {
          for (auto const& b : elems_) {
            if (!contains(a * b)) {
              closed_ = false;
              return false;
            }
          }
        }
      }
      return *closed_;
    }

    // Records flags computed elsewhere (see classify_semigroup).
    void set_flags(SemigroupFlags f) const {
      flags_ = f;
    }
    std::optional<SemigroupFlags> const& cached_flags() const noexcept {
      return flags_;
    }

    friend bool operator==(SemigroupSet const& a, SemigroupSet const& b) {
      return a.n_ == b.n_ && a.elems_ == b.elems_;
    }

   private:
    std::size_t                           n_ = 0;
    std::vector<PInj>                     elems_;
    std::vector<std::uint64_t>            ids_;
    mutable std::optional<bool>           closed_;
    mutable std::optional<SemigroupFlags> flags_;
  };

}  // namespace symi
