#pragma once

// Stable element IDs and rank-stratified enumeration of I(n).
//
// The ID of an element of rank r is
//
//   offset(r) + (dom_rank * C(n, r) + img_rank) * r! + bijection_rank
//
// where offset(r) counts the elements of smaller rank, dom_rank and
// img_rank are lexicographic ranks of the sorted domain and image among
// r-subsets, and bijection_rank is the lexicographic rank of the
// permutation sending the i-th domain point to the pi(i)-th image point.
// 64-bit IDs exist for n <= max_id_degree; id_less() realises the same
// order for every supported degree.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "error.hpp"
#include "pinj.hpp"

namespace symi {

  using BigInt = boost::multiprecision::cpp_int;

  inline constexpr std::size_t max_id_degree = 18;

  namespace detail {
    struct Tables {
      std::uint64_t binom[max_degree + 1][max_degree + 1] = {};
      std::uint64_t fact[21]                              = {};
      constexpr Tables() {
        for (std::size_t i = 0; i <= max_degree; ++i) {
          binom[i][0] = 1;
          for (std::size_t j = 1; j <= i; ++j) {
            binom[i][j] = binom[i - 1][j - 1] + (j < i ? binom[i - 1][j] : 0);
          }
        }
        fact[0] = 1;
        for (std::size_t i = 1; i <= 20; ++i) {
          fact[i] = fact[i - 1] * i;
        }
      }
    };
    inline constexpr Tables tables{};

    // Lexicographic rank of a sorted r-subset of {0..n-1}.
    inline std::uint64_t subset_rank(std::vector<point_t> const& c,
                                     std::size_t                 n) {
      std::uint64_t rank = 0;
      std::size_t   r    = c.size();
      std::size_t   lo   = 0;
      for (std::size_t i = 0; i < r; ++i) {
        for (std::size_t v = lo; v < c[i]; ++v) {
          rank += tables.binom[n - 1 - v][r - 1 - i];
        }
        lo = c[i] + 1;
      }
      return rank;
    }

    inline std::vector<point_t> subset_unrank(std::uint64_t rank,
                                              std::size_t   n,
                                              std::size_t   r) {
      std::vector<point_t> c;
      std::size_t          v = 0;
      for (std::size_t i = 0; i < r; ++i) {
        while (true) {
          auto block = tables.binom[n - 1 - v][r - 1 - i];
          if (rank < block) {
            break;
          }
          rank -= block;
          ++v;
        }
        c.push_back(static_cast<point_t>(v));
        ++v;
      }
      return c;
    }

    inline std::uint64_t perm_rank(std::vector<point_t> const& p) {
      std::uint64_t rank = 0;
      std::size_t   r    = p.size();
      for (std::size_t i = 0; i < r; ++i) {
        std::uint64_t smaller = 0;
        for (std::size_t j = i + 1; j < r; ++j) {
          smaller += (p[j] < p[i]);
        }
        rank += smaller * tables.fact[r - 1 - i];
      }
      return rank;
    }

    inline std::vector<point_t> perm_unrank(std::uint64_t rank,
                                            std::size_t   r) {
      std::vector<point_t> pool(r);
      std::iota(pool.begin(), pool.end(), point_t{0});
      std::vector<point_t> p;
      for (std::size_t i = 0; i < r; ++i) {
        auto f   = tables.fact[r - 1 - i];
        auto idx = static_cast<std::size_t>(rank / f);
        rank %= f;
        p.push_back(pool[idx]);
        pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(idx));
      }
      return p;
    }

    // Advances a sorted r-subset of {0..n-1} to its lexicographic
    // successor; false when c was the last one.
    inline bool next_subset(std::vector<point_t>& c, std::size_t n) {
      std::size_t r = c.size();
      for (std::size_t i = r; i-- > 0;) {
        if (c[i] < n - r + i) {
          ++c[i];
          for (std::size_t j = i + 1; j < r; ++j) {
            c[j] = static_cast<point_t>(c[j - 1] + 1);
          }
          return true;
        }
      }
      return false;
    }

    inline std::vector<point_t> first_subset(std::size_t r) {
      std::vector<point_t> c(r);
      std::iota(c.begin(), c.end(), point_t{0});
      return c;
    }

    // Sorted domain, sorted image, and the bijection between them.
    struct Coords {
      std::vector<point_t> dom, img, perm;
    };

    inline Coords coords(PInj const& a) {
      Coords c;
      c.dom = a.domain().to_vector();
      c.img = a.image().to_vector();
      for (auto x : c.dom) {
        auto it = std::lower_bound(c.img.begin(), c.img.end(), a[x]);
        c.perm.push_back(static_cast<point_t>(it - c.img.begin()));
      }
      return c;
    }

    inline PInj from_coords(std::size_t                 n,
                            std::vector<point_t> const& dom,
                            std::vector<point_t> const& img,
                            std::vector<point_t> const& perm) {
      PInj a(n);
      for (std::size_t i = 0; i < dom.size(); ++i) {
        a.set_unchecked(dom[i], img[perm[i]]);
      }
      return a;
    }
  }  // namespace detail

  inline std::uint64_t binomial(std::size_t n, std::size_t k) {
    if (k > n || n > max_degree) {
      return 0;
    }
    return detail::tables.binom[n][k];
  }

  inline BigInt big_binomial(std::size_t n, std::size_t k) {
    if (k > n) {
      return 0;
    }
    BigInt r = 1;
    for (std::size_t i = 1; i <= k; ++i) {
      r = r * (n - k + i) / i;
    }
    return r;
  }

  inline BigInt big_factorial(std::size_t n) {
    BigInt r = 1;
    for (std::size_t i = 2; i <= n; ++i) {
      r *= i;
    }
    return r;
  }

  // Number of elements of rank r in I(n): C(n,r)^2 r!.
  inline BigInt count_rank(std::size_t n, std::size_t r) {
    auto c = big_binomial(n, r);
    return c * c * big_factorial(r);
  }

  inline BigInt count_all(std::size_t n) {
    BigInt total = 0;
    for (std::size_t r = 0; r <= n; ++r) {
      total += count_rank(n, r);
    }
    return total;
  }

  namespace detail {
    inline std::uint64_t rank_offset(std::size_t n, std::size_t r) {
      std::uint64_t off = 0;
      for (std::size_t s = 0; s < r; ++s) {
        auto c = tables.binom[n][s];
        off += c * c * tables.fact[s];
      }
      return off;
    }

    inline void check_id_degree(std::size_t n) {
      if (n > max_id_degree) {
        throw Error("64-bit element IDs exist only for n <= "
                    + std::to_string(max_id_degree));
      }
    }
  }  // namespace detail

  inline std::uint64_t element_id(PInj const& a) {
    auto n = a.degree();
    detail::check_id_degree(n);
    auto c = detail::coords(a);
    auto r = c.dom.size();
    return detail::rank_offset(n, r)
           + (detail::subset_rank(c.dom, n) * detail::tables.binom[n][r]
              + detail::subset_rank(c.img, n))
                 * detail::tables.fact[r]
           + detail::perm_rank(c.perm);
  }

  inline std::uint64_t id_count(std::size_t n) {
    detail::check_id_degree(n);
    return detail::rank_offset(n, n + 1);
  }

  inline PInj element_from_id(std::size_t n, std::uint64_t id) {
    detail::check_id_degree(n);
    if (id >= id_count(n)) {
      throw Error("element ID " + std::to_string(id) + " out of range");
    }
    std::size_t r = 0;
    while (id >= detail::rank_offset(n, r + 1)) {
      ++r;
    }
    id -= detail::rank_offset(n, r);
    auto perm_idx = id % detail::tables.fact[r];
    id /= detail::tables.fact[r];
    auto img_idx = id % detail::tables.binom[n][r];
    auto dom_idx = id / detail::tables.binom[n][r];
    return detail::from_coords(n,
                               detail::subset_unrank(dom_idx, n, r),
                               detail::subset_unrank(img_idx, n, r),
                               detail::perm_unrank(perm_idx, r));
  }

  // Strict weak order agreeing with element_id(), valid for every degree.
  inline bool id_less(PInj const& a, PInj const& b) {
    if (a.rank() != b.rank()) {
      return a.rank() < b.rank();
    }
    auto ca = detail::coords(a);
    auto cb = detail::coords(b);
    if (ca.dom != cb.dom) {
      return ca.dom < cb.dom;
    }
    if (ca.img != cb.img) {
      return ca.img < cb.img;
    }
    return ca.perm < cb.perm;
  }

  struct IdLess {
    bool operator()(PInj const& a, PInj const& b) const {
      return id_less(a, b);
    }
  };

  inline void sort_by_id(std::vector<PInj>& v) {
    if (!v.empty() && v.front().degree() <= max_id_degree) {
      std::vector<std::pair<std::uint64_t, PInj>> keyed;
      keyed.reserve(v.size());
      for (auto& a : v) {
        keyed.emplace_back(element_id(a), a);
      }
      std::sort(keyed.begin(), keyed.end(), [](auto const& x, auto const& y) {
        return x.first < y.first;
      });
      for (std::size_t i = 0; i < v.size(); ++i) {
        v[i] = keyed[i].second;
      }
    } else {
      std::sort(v.begin(), v.end(), IdLess{});
    }
  }

  ////////////////////////////////////////////////////////////////////////
  // Filters and enumeration
  ////////////////////////////////////////////////////////////////////////

  struct Filter {
    enum class Kind { all, ideal, nilpotent, idempotent, permutation };
    Kind        kind     = Kind::all;
    std::size_t max_rank = 0;  // for ideal

    static Filter all() {
      return {};
    }
    // J_r: every element of rank at most r.
    static Filter ideal(std::size_t r) {
      return {Kind::ideal, r};
    }
    static Filter nilpotent() {
      return {Kind::nilpotent, 0};
    }
    static Filter idempotent() {
      return {Kind::idempotent, 0};
    }
    static Filter permutation() {
      return {Kind::permutation, 0};
    }

    bool accepts(PInj const& a) const {
      switch (kind) {
        case Kind::all: return true;
        case Kind::ideal: return a.rank() <= max_rank;
        case Kind::nilpotent: return !a.has_cycle();
        case Kind::idempotent: return a.is_idempotent();
        case Kind::permutation: return a.is_permutation();
      }
      return false;
    }

    std::string name() const {
      switch (kind) {
        case Kind::all: return "all";
        case Kind::ideal: return "ideal" + std::to_string(max_rank);
        case Kind::nilpotent: return "nilpotent";
        case Kind::idempotent: return "idempotent";
        case Kind::permutation: return "permutation";
      }
      return "?";
    }

    friend bool operator==(Filter const&, Filter const&) = default;
  };

  // Streams the elements of I(n) accepted by a filter, ascending by ID.
  // Strata of rank outside the filter's range are never visited.
  class Enumerator {
   public:
    explicit Enumerator(std::size_t n, Filter f = Filter::all())
        : n_(n), filter_(f) {
      if (n > max_degree) {
        throw Error("degree " + std::to_string(n) + " exceeds "
                    + std::to_string(max_degree));
      }
      if (f.kind == Filter::Kind::ideal && f.max_rank > n) {
        throw Error("ideal rank " + std::to_string(f.max_rank)
                    + " exceeds n = " + std::to_string(n));
      }
      lo_ = f.kind == Filter::Kind::permutation ? n : 0;
      hi_ = n;
      if (f.kind == Filter::Kind::ideal) {
        hi_ = f.max_rank;
      } else if (f.kind == Filter::Kind::nilpotent) {
        hi_ = n == 0 ? 0 : n - 1;
      }
      start_rank(lo_);
    }

    // Resumes at the first accepted element whose ID is >= start_id.
    Enumerator(std::size_t n, Filter f, std::uint64_t start_id)
        : Enumerator(n, f) {
      if (start_id == 0) {
        return;
      }
      if (start_id >= id_count(n)) {
        done_ = true;
        return;
      }
      if (filter_.kind == Filter::Kind::idempotent) {
        // Only 2^n states; skip forward.
        while (!done_
               && element_id(detail::from_coords(n_, dom_, img_, perm_))
                      < start_id) {
          advance();
        }
        return;
      }
      auto c = detail::coords(element_from_id(n, start_id));
      if (c.dom.size() < lo_) {
        return;
      }
      if (c.dom.size() > hi_) {
        done_ = true;
        return;
      }
      r_       = c.dom.size();
      dom_     = c.dom;
      img_     = c.img;
      perm_    = c.perm;
      pending_ = true;
    }

    std::optional<PInj> next() {
      while (!done_) {
        if (!pending_) {
          advance();
          continue;
        }
        pending_ = false;
        auto a   = detail::from_coords(n_, dom_, img_, perm_);
        if (filter_.kind == Filter::Kind::nilpotent && a.has_cycle()) {
          continue;
        }
        return a;
      }
      return std::nullopt;
    }

    std::size_t degree() const noexcept {
      return n_;
    }

   private:
    void start_rank(std::size_t r) {
      if (r > hi_) {
        done_ = true;
        return;
      }
      r_       = r;
      dom_     = detail::first_subset(r);
      img_     = dom_;
      perm_    = dom_;
      pending_ = true;
    }

    // Moves to the next state of the current filter's search space.
    void advance() {
      pending_ = true;
      if (filter_.kind == Filter::Kind::idempotent) {
        if (detail::next_subset(dom_, n_)) {
          img_ = dom_;
          return;
        }
      } else {
        if (std::next_permutation(perm_.begin(), perm_.end())) {
          return;
        }
        if (detail::next_subset(img_, n_)) {
          return;
        }
        img_ = detail::first_subset(r_);
        if (detail::next_subset(dom_, n_)) {
          return;
        }
      }
      start_rank(r_ + 1);
    }

    std::size_t          n_;
    Filter               filter_;
    std::size_t          lo_ = 0, hi_ = 0, r_ = 0;
    std::vector<point_t> dom_, img_, perm_;
    bool                 pending_ = false;
    bool                 done_    = false;
  };

  template <typename F>
  void for_each_element(std::size_t n, Filter f, F&& fn) {
    Enumerator e(n, f);
    while (auto a = e.next()) {
      fn(*a);
    }
  }

  inline std::vector<PInj> elements(std::size_t n, Filter f = Filter::all()) {
    std::vector<PInj> out;
    for_each_element(n, f, [&](PInj const& a) { out.push_back(a); });
    return out;
  }

  // Sum over k of the Lah numbers L(n,k) = C(n-1,k-1) n!/k!: the number of
  // ways to split X into chains and untouched points.
  inline BigInt count_nilpotent(std::size_t n) {
    if (n == 0) {
      return 1;
    }
    BigInt total = 0;
    for (std::size_t k = 1; k <= n; ++k) {
      total += big_binomial(n - 1, k - 1) * big_factorial(n) / big_factorial(k);
    }
    return total;
  }

  // Length of the corresponding stream, by closed form.
  inline BigInt count(std::size_t n, Filter f = Filter::all()) {
    switch (f.kind) {
      case Filter::Kind::all: return count_all(n);
      case Filter::Kind::ideal: {
        if (f.max_rank > n) {
          throw Error("ideal rank exceeds n");
        }
        BigInt total = 0;
        for (std::size_t r = 0; r <= f.max_rank; ++r) {
          total += count_rank(n, r);
        }
        return total;
      }
      case Filter::Kind::nilpotent: return count_nilpotent(n);
      case Filter::Kind::idempotent: return BigInt(1) << n;
      case Filter::Kind::permutation: return big_factorial(n);
    }
    return 0;
  }

}  // namespace symi
