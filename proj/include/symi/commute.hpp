#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <thread>
#include <vector>

#include "enumerate.hpp"
#include "error.hpp"
#include "pinj.hpp"
#include "semigroup_set.hpp"

namespace symi {

  // ab == ba, by composing both ways.
  inline bool commutes_naive(PInj const& a, PInj const& b) {
    detail::check_same_degree(a, b);
    for (std::size_t x = 0; x < a.degree(); ++x) {
      point_t ya = a[x];
      point_t ab = ya == undefined ? undefined : b[ya];
      point_t yb = b[x];
      point_t ba = yb == undefined ? undefined : a[yb];
      if (ab != ba) {
        return false;
      }
    }
    return true;
  }

  // Positions of the points of an element in its cycle/chain normal form.
  // Checking commutation against a fixed element through this view costs
  // O(n) per query.
  class PartView {
   public:
    static constexpr std::uint8_t none = 0xFF;

    explicit PartView(PInj const& a) : n_(a.degree()) {
      part_.fill(none);
      pos_.fill(0);
      auto d = decompose(a);
      for (auto const& c : d.cycles) {
        add(c, true);
      }
      for (auto const& c : d.chains) {
        add(c, false);
      }
    }

    std::size_t degree() const noexcept {
      return n_;
    }

    // Evaluates the three conditions of the commutation criterion: cycles
    // go onto cycles of equal length with a single rotation, initial
    // segments of chains go onto terminal segments of chains, and points
    // off the span go off the span or onto a chain end.  A chain whose
    // only point in dom(b) is its start x_0 may also send x_0 off the span
    // (then x_0 ab and x_0 ba are both undefined).
    bool commutes_with(PInj const& b) const {
      if (b.degree() != n_) {
        throw Error("mismatched degrees");
      }
      // Per source part: number of its points in dom(b), target part and
      // the offset implied by the first image seen.
      std::array<std::uint8_t, max_degree> hits{};
      std::array<std::uint8_t, max_degree> target;
      std::array<std::uint8_t, max_degree> shift{};
      std::array<bool, max_degree>         off_start{};
      target.fill(none);
      for (std::size_t x = 0; x < n_; ++x) {
        point_t y = b[x];
        if (y == undefined) {
          continue;
        }
        auto px = part_[x];
        auto py = part_[y];
        if (px == none) {
          if (py != none && (is_cycle_[py] || pos_[y] + 1 != len_[py])) {
            return false;
          }
          continue;
        }
        if (py == none) {
          if (is_cycle_[px] || pos_[x] != 0) {
            return false;
          }
          off_start[px] = true;
          ++hits[px];
          continue;
        }
        if (is_cycle_[px] != is_cycle_[py]) {
          return false;
        }
        if (is_cycle_[px]) {
          if (len_[px] != len_[py]) {
            return false;
          }
          auto s = static_cast<std::uint8_t>((pos_[y] + len_[py] - pos_[x])
                                             % len_[py]);
          if (target[px] == none) {
            target[px] = py;
            shift[px]  = s;
          } else if (target[px] != py || shift[px] != s) {
            return false;
          }
        } else {
          // x_i -> y_{m-p+i}: the offset pos(y) - pos(x) = m - p is the
          // same for every point of the prefix.
          if (pos_[y] < pos_[x]) {
            return false;
          }
          auto s = static_cast<std::uint8_t>(pos_[y] - pos_[x]);
          if (target[px] == none) {
            target[px] = py;
            shift[px]  = s;
          } else if (target[px] != py || shift[px] != s) {
            return false;
          }
        }
        ++hits[px];
      }
      for (std::size_t p = 0; p < num_parts_; ++p) {
        if (hits[p] == 0) {
          continue;
        }
        if (is_cycle_[p]) {
          if (hits[p] != len_[p]) {
            return false;
          }
        } else if (off_start[p]) {
          if (hits[p] != 1) {
            return false;
          }
        } else {
          // dom(b) meets the chain in a prefix x_0..x_p whose image ends
          // exactly at the target chain's last point.
          auto const& pts = members_[p];
          for (std::size_t i = 0; i < hits[p]; ++i) {
            if (b[pts[i]] == undefined) {
              return false;
            }
          }
          std::size_t last_pos = shift[p] + hits[p] - 1;
          if (last_pos + 1 != len_[target[p]]) {
            return false;
          }
        }
      }
      return true;
    }

   private:
    void add(std::vector<point_t> const& pts, bool is_cycle) {
      auto p = static_cast<std::uint8_t>(num_parts_++);
      for (std::size_t i = 0; i < pts.size(); ++i) {
        part_[pts[i]] = p;
        pos_[pts[i]]  = static_cast<std::uint8_t>(i);
      }
      is_cycle_[p] = is_cycle;
      len_[p]      = static_cast<std::uint8_t>(pts.size());
      members_[p]  = pts;
    }

    std::size_t                                  n_;
    std::size_t                                  num_parts_ = 0;
    std::array<std::uint8_t, max_degree>         part_;
    std::array<std::uint8_t, max_degree>         pos_;
    std::array<bool, max_degree>                 is_cycle_{};
    // Number of points of the part (cycle length, or chain length + 1).
    std::array<std::uint8_t, max_degree>         len_{};
    std::array<std::vector<point_t>, max_degree> members_;
  };

  inline bool commutes_structural(PInj const& a, PInj const& b) {
    detail::check_same_degree(a, b);
    return PartView(a).commutes_with(b);
  }

  inline bool commutes(PInj const& a, PInj const& b) {
    return commutes_structural(a, b);
  }

  ////////////////////////////////////////////////////////////////////////
  // Splitting partition
  ////////////////////////////////////////////////////////////////////////

  struct SplitPartition {
    PointSet A;
    PointSet B;
  };

  // Partition {A, B} of X preserved by every element commuting with g,
  // where g is an idempotent other than 0 and 1, or a permutation whose
  // cycles are not all of one length.
  inline SplitPartition split_partition(PInj const& g) {
    auto const n = g.degree();
    auto       X = PointSet::full(n);
    if (g.is_idempotent()) {
      if (g.is_zero() || g.is_identity()) {
        throw Error("split_partition: idempotent must differ from 0 and 1");
      }
      return {g.domain(), X - g.domain()};
    }
    if (!g.is_permutation()) {
      throw Error("split_partition: g must be an idempotent or a permutation");
    }
    auto d = decompose(g);
    // Cycles are sorted by least point, so d.cycles[0] contains point 0.
    auto     len = d.cycles[0].size();
    PointSet A;
    for (auto const& c : d.cycles) {
      if (c.size() == len) {
        for (auto x : c) {
          A.insert(x);
        }
      }
    }
    if (A == X) {
      throw Error("split_partition: all cycles have the same length");
    }
    return {A, X - A};
  }

  // True iff b maps the points of A into A.
  inline bool preserves(PInj const& b, PointSet A) {
    return b.restricted(A).image().subset_of(A);
  }

  ////////////////////////////////////////////////////////////////////////
  // Centralizers
  ////////////////////////////////////////////////////////////////////////

  // Elements of the stream commuting with a.
  template <typename Stream>
  SemigroupSet centralizer(PInj const& a, Stream&& universe) {
    PartView          view(a);
    std::vector<PInj> out;
    while (auto u = universe.next()) {
      if (view.commutes_with(*u)) {
        out.push_back(*u);
      }
    }
    return SemigroupSet(a.degree(), std::move(out));
  }

  inline SemigroupSet centralizer(PInj const&              a,
                                  std::vector<PInj> const& universe) {
    PartView          view(a);
    std::vector<PInj> out;
    for (auto const& u : universe) {
      if (view.commutes_with(u)) {
        out.push_back(u);
      }
    }
    return SemigroupSet(a.degree(), std::move(out));
  }

  // Centralizer of a within the filtered I(n), scanning ID ranges on
  // several threads.  The result does not depend on the thread count.
  inline SemigroupSet centralizer_scan(PInj const& a,
                                       Filter      f       = Filter::all(),
                                       std::size_t threads = 1) {
    auto const n = a.degree();
    if (threads <= 1 || n > max_id_degree) {
      return centralizer(a, Enumerator(n, f));
    }
    auto const                     total = id_count(n);
    std::vector<std::vector<PInj>> chunks(threads);
    std::vector<std::thread>       pool;
    PartView                       view(a);
    for (std::size_t t = 0; t < threads; ++t) {
      pool.emplace_back([&, t] {
        auto lo = total * t / threads;
        auto hi = total * (t + 1) / threads;
        Enumerator e(n, f, lo);
        while (auto u = e.next()) {
          if (element_id(*u) >= hi) {
            break;
          }
          if (view.commutes_with(*u)) {
            chunks[t].push_back(*u);
          }
        }
      });
    }
    for (auto& th : pool) {
      th.join();
    }
    std::vector<PInj> out;
    for (auto& c : chunks) {
      out.insert(out.end(), c.begin(), c.end());
    }
    return SemigroupSet(n, std::move(out));
  }

  // Centralizer of a permutation without scanning I(n): every commuting
  // element is a length-preserving partial injection f on the cycles of a
  // together with a rotation of each cycle in dom(f).
  template <typename F>
  void for_each_in_permutation_centralizer(PInj const& a, F&& fn) {
    if (!a.is_permutation()) {
      throw Error("centralizer_of_permutation: not a permutation");
    }
    auto const  n      = a.degree();
    auto        cycles = decompose(a).cycles;
    auto const  k      = cycles.size();
    std::vector<bool> used(k, false);
    PInj              b(n);
    std::function<void(std::size_t)> rec = [&](std::size_t i) {
      if (i == k) {
        fn(static_cast<PInj const&>(b));
        return;
      }
      rec(i + 1);  // cycle i outside dom(f)
      auto const& src = cycles[i];
      auto const  len = src.size();
      for (std::size_t j = 0; j < k; ++j) {
        if (used[j] || cycles[j].size() != len) {
          continue;
        }
        used[j]         = true;
        auto const& dst = cycles[j];
        for (std::size_t s = 0; s < len; ++s) {
          for (std::size_t t = 0; t < len; ++t) {
            b.set_unchecked(src[t], dst[(t + s) % len]);
          }
          rec(i + 1);
        }
        for (auto x : src) {
          b.set_unchecked(x, undefined);
        }
        used[j] = false;
      }
    };
    rec(0);
  }

  inline SemigroupSet centralizer_of_permutation(PInj const& a) {
    std::vector<PInj> out;
    for_each_in_permutation_centralizer(
        a, [&](PInj const& b) { out.push_back(b); });
    return SemigroupSet(a.degree(), std::move(out));
  }

  // Size of the permutation centralizer: sum over length-preserving
  // partial injections f on the cycles of the product of |c|, c in dom f.
  inline BigInt permutation_centralizer_size(PInj const& a) {
    if (!a.is_permutation()) {
      throw Error("not a permutation");
    }
    // Cycles of different lengths never interact, so the count factors
    // over length classes: for m cycles of length l it is
    // sum_r C(m,r)^2 r! l^r.
    std::vector<std::size_t> lens;
    for (auto const& c : decompose(a).cycles) {
      lens.push_back(c.size());
    }
    std::sort(lens.begin(), lens.end());
    BigInt total = 1;
    for (std::size_t i = 0; i < lens.size();) {
      std::size_t j = i;
      while (j < lens.size() && lens[j] == lens[i]) {
        ++j;
      }
      std::size_t m = j - i;
      BigInt      class_total = 0;
      BigInt      lpow        = 1;
      for (std::size_t r = 0; r <= m; ++r) {
        auto c = big_binomial(m, r);
        class_total += c * c * big_factorial(r) * lpow;
        lpow *= lens[i];
      }
      total *= class_total;
      i = j;
    }
    return total;
  }

}  // namespace symi
