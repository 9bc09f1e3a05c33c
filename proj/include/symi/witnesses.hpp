#pragma once

// Explicit elements and paths realizing the diameter bounds, plus the
// machinery that certifies distance 5 between two n-cycles.

#include <algorithm>
#include <cstddef>
#include <functional>
#include <numeric>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "commute.hpp"
#include "error.hpp"
#include "pinj.hpp"

namespace symi {

  ////////////////////////////////////////////////////////////////////////
  // Paths
  ////////////////////////////////////////////////////////////////////////

  struct PathWitness {
    std::vector<PInj> vertices;
    std::size_t       claimed_length = 0;

    std::size_t length() const noexcept {
      return vertices.empty() ? 0 : vertices.size() - 1;
    }
  };

  // Empty when w is a path from `from` to `to` avoiding `center`;
  // otherwise a description of the first defect.
  inline std::optional<std::string> path_defect(PathWitness const&    w,
                                                PInj const&           from,
                                                PInj const&           to,
                                                std::vector<PInj> const& center) {
    auto const& v = w.vertices;
    if (v.empty()) {
      return "empty path";
    }
    if (w.claimed_length != v.size() - 1) {
      return "claimed length " + std::to_string(w.claimed_length)
             + " but path has " + std::to_string(v.size() - 1) + " edges";
    }
    if (v.front() != from || v.back() != to) {
      return "wrong endpoints";
    }
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (std::find(center.begin(), center.end(), v[i]) != center.end()) {
        return "vertex " + std::to_string(i) + " (" + format(v[i])
               + ") is central";
      }
      for (std::size_t j = 0; j < i; ++j) {
        if (v[i] == v[j]) {
          return "vertex " + format(v[i]) + " repeats";
        }
      }
      if (i > 0 && !commutes_naive(v[i - 1], v[i])) {
        return format(v[i - 1]) + " and " + format(v[i]) + " do not commute";
      }
    }
    return std::nullopt;
  }

  inline std::vector<PInj> monoid_center(std::size_t n) {
    return {PInj(n), PInj::identity(n)};
  }

  // Loop erasure: drops the stretch between repeated vertices of a walk.
  inline PathWitness erase_loops(std::vector<PInj> const& walk) {
    PathWitness w;
    for (auto const& x : walk) {
      auto it = std::find(w.vertices.begin(), w.vertices.end(), x);
      if (it != w.vertices.end()) {
        w.vertices.erase(it + 1, w.vertices.end());
      } else {
        w.vertices.push_back(x);
      }
    }
    w.claimed_length = w.length();
    return w;
  }

  ////////////////////////////////////////////////////////////////////////
  // Action of a commuting element on the cycles of a permutation
  ////////////////////////////////////////////////////////////////////////

  // h[i] = j when gamma maps the span of cycle i onto the span of cycle j;
  // npos when gamma is undefined on cycle i.
  struct CycleActionMap {
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    PInj                              alpha;
    std::vector<std::vector<point_t>> cycles;
    std::vector<std::size_t>          h;

    bool is_injective() const {
      std::vector<bool> hit(cycles.size(), false);
      for (auto j : h) {
        if (j == npos) {
          continue;
        }
        if (hit[j]) {
          return false;
        }
        hit[j] = true;
      }
      return true;
    }

    bool is_length_preserving() const {
      for (std::size_t i = 0; i < h.size(); ++i) {
        if (h[i] != npos && cycles[i].size() != cycles[h[i]].size()) {
          return false;
        }
      }
      return true;
    }
  };

  inline CycleActionMap cycle_action_map(PInj const& alpha, PInj const& gamma) {
    if (!alpha.is_permutation()) {
      throw Error("cycle_action_map: alpha must be a permutation");
    }
    if (!commutes(alpha, gamma)) {
      throw Error("cycle_action_map: gamma does not commute with alpha");
    }
    CycleActionMap m;
    m.alpha  = alpha;
    m.cycles = decompose(alpha).cycles;
    std::vector<PointSet> spans;
    for (auto const& c : m.cycles) {
      PointSet s;
      for (auto x : c) {
        s.insert(x);
      }
      spans.push_back(s);
    }
    for (std::size_t i = 0; i < m.cycles.size(); ++i) {
      auto dom = spans[i] & gamma.domain();
      if (dom.empty()) {
        m.h.push_back(CycleActionMap::npos);
        continue;
      }
      if (dom != spans[i]) {
        throw Error("cycle_action_map: gamma is defined on part of a cycle");
      }
      PointSet img;
      for (auto x : m.cycles[i]) {
        img.insert(gamma[x]);
      }
      auto it = std::find(spans.begin(), spans.end(), img);
      if (it == spans.end()) {
        throw Error("cycle_action_map: image of a cycle is not a cycle");
      }
      m.h.push_back(static_cast<std::size_t>(it - spans.begin()));
    }
    return m;
  }

  ////////////////////////////////////////////////////////////////////////
  // Common centralizers
  ////////////////////////////////////////////////////////////////////////

  // All elements commuting with the permutation a and with b.  Elements
  // of the centralizer of a are built cycle by cycle; a partial choice is
  // abandoned as soon as it contradicts gamma b = b gamma at a point whose
  // both sides are already determined.  With permutations_only, only the
  // total ones are produced.
  template <typename F>
  void for_each_common_centralizer(PInj const& a, PInj const& b,
                                   bool permutations_only, F&& fn) {
    detail::check_same_degree(a, b);
    if (!a.is_permutation()) {
      throw Error("common centralizer: first argument must be a permutation");
    }
    auto const n      = a.degree();
    auto       cycles = decompose(a).cycles;
    auto const k      = cycles.size();
    auto const bi     = inverse(b);

    // Visit cycles so that each one meets b-edges to earlier ones early.
    std::vector<std::size_t> cycle_of(n);
    for (std::size_t i = 0; i < k; ++i) {
      for (auto x : cycles[i]) {
        cycle_of[x] = i;
      }
    }
    std::vector<std::size_t> order;
    std::vector<bool>        queued(k, false);
    for (std::size_t s = 0; s < k; ++s) {
      if (queued[s]) {
        continue;
      }
      queued[s] = true;
      order.push_back(s);
      for (std::size_t q = order.size() - 1; q < order.size(); ++q) {
        for (auto x : cycles[order[q]]) {
          for (auto y : {b[x], bi[x]}) {
            if (y != undefined && !queued[cycle_of[y]]) {
              queued[cycle_of[y]] = true;
              order.push_back(cycle_of[y]);
            }
          }
        }
      }
    }

    PInj              g(n);
    PointSet          decided;
    std::vector<bool> used(k, false);

    auto consistent = [&](std::vector<point_t> const& fresh) {
      // Points whose check could have changed: fresh ones and their
      // b-preimages.
      auto ok_at = [&](std::size_t x) {
        if (!decided.contains(x)) {
          return true;
        }
        auto gx  = g[x];
        auto rhs = gx == undefined ? undefined : b[gx];
        auto bx  = b[x];
        if (bx == undefined) {
          return rhs == undefined;
        }
        if (!decided.contains(bx)) {
          return true;
        }
        return g[bx] == rhs;
      };
      for (auto x : fresh) {
        if (!ok_at(x) || (bi[x] != undefined && !ok_at(bi[x]))) {
          return false;
        }
      }
      return true;
    };

    std::function<void(std::size_t)> rec = [&](std::size_t depth) {
      if (depth == k) {
        fn(static_cast<PInj const&>(g));
        return;
      }
      auto const& src = cycles[order[depth]];
      for (auto x : src) {
        decided.insert(x);
      }
      if (!permutations_only && consistent(src)) {
        rec(depth + 1);
      }
      auto const len = src.size();
      for (std::size_t j = 0; j < k; ++j) {
        if (used[j] || cycles[j].size() != len) {
          continue;
        }
        used[j]         = true;
        auto const& dst = cycles[j];
        for (std::size_t s = 0; s < len; ++s) {
          for (std::size_t t = 0; t < len; ++t) {
            g.set_unchecked(src[t], dst[(t + s) % len]);
          }
          if (consistent(src)) {
            rec(depth + 1);
          }
        }
        for (auto x : src) {
          g.set_unchecked(x, undefined);
        }
        used[j] = false;
      }
      for (auto x : src) {
        decided.erase(x);
      }
    };
    rec(0);
  }

  inline std::vector<PInj> common_centralizer(PInj const& a, PInj const& b,
                                              bool permutations_only = false) {
    std::vector<PInj> out;
    for_each_common_centralizer(a, b, permutations_only,
                                [&](PInj const& g) { out.push_back(g); });
    sort_by_id(out);
    return out;
  }

  ////////////////////////////////////////////////////////////////////////
  // Commuting idempotents
  ////////////////////////////////////////////////////////////////////////

  // An idempotent other than 0 and 1, of rank at most rank(a), commuting
  // with a.  a must not be 0, 1, an n-cycle or a nilpotent of index n.
  inline PInj commuting_idempotent(PInj const& a) {
    auto const n = a.degree();
    if (a.is_zero() || a.is_identity()) {
      throw Error("commuting_idempotent: a must differ from 0 and 1");
    }
    if (is_n_cycle(a)) {
      throw Error("commuting_idempotent: a is an n-cycle");
    }
    if (is_full_chain(a)) {
      throw Error("commuting_idempotent: a is a nilpotent of index n");
    }
    auto d = decompose(a);
    if (!d.cycles.empty() && !d.chains.empty()) {
      // A power that kills every chain and is the identity on every cycle.
      std::size_t l = 1;
      std::size_t longest = 0;
      for (auto const& c : d.cycles) {
        l = std::lcm(l, c.size());
      }
      for (auto const& c : d.chains) {
        longest = std::max(longest, c.size());
      }
      return power(a, l * ((longest + l - 1) / l));
    }
    auto const& first = d.cycles.empty() ? d.chains[0] : d.cycles[0];
    PointSet    s;
    for (auto x : first) {
      s.insert(x);
    }
    return PInj::identity_on(n, s);
  }

  ////////////////////////////////////////////////////////////////////////
  // Aligned involutions
  ////////////////////////////////////////////////////////////////////////

  struct Alignment {
    std::vector<point_t> a;  // a_1 .. a_r
    point_t              b1 = 0;
    std::vector<point_t> c;  // c_1 .. c_{r-1}
    PInj                 gamma;
    PInj                 delta;
    PInj                 middle;
  };

  namespace detail {
    // Fixed-point-free involution on its domain, as a partial map.
    inline bool is_pairing(PInj const& g) {
      for (std::size_t x = 0; x < g.degree(); ++x) {
        if (g[x] != undefined && (g[x] == x || g[g[x]] != x)) {
          return false;
        }
      }
      return !g.is_zero();
    }
  }  // namespace detail

  // Chases the alternating cycle of g and d through the least point of
  // their common span and returns the aligned parts with their middle
  // element (a_1 ... a_r) | (b_1 c_1 ... c_{r-1}).
  inline Alignment align(PInj const& g, PInj const& d) {
    detail::check_same_degree(g, d);
    auto const n = g.degree();
    if (!detail::is_pairing(g) || !detail::is_pairing(d)) {
      throw Error("align: inputs must be joins of 2-cycles");
    }
    if (g.domain() != d.domain()) {
      throw Error("align: inputs must have the same span");
    }
    for (std::size_t x = 0; x < n; ++x) {
      if (g[x] != undefined && g[x] == d[x]) {
        throw Error("align: inputs share the 2-cycle (" + std::to_string(x + 1)
                    + " " + std::to_string(g[x] + 1) + ")");
      }
    }
    Alignment al;
    point_t   a1 = g.domain().min();
    al.b1        = g[a1];
    al.a.push_back(a1);
    for (point_t ai = a1;;) {
      point_t next = d[ai];
      if (next == al.b1) {
        break;
      }
      al.c.push_back(next);
      ai = g[next];
      al.a.push_back(ai);
    }
    auto const r = al.a.size();
    PInj       gamma(n), delta(n);
    auto       pair = [](PInj& p, point_t x, point_t y) {
      p.set_unchecked(x, y);
      p.set_unchecked(y, x);
    };
    pair(gamma, al.a[0], al.b1);
    for (std::size_t i = 1; i < r; ++i) {
      pair(gamma, al.a[i], al.c[i - 1]);
    }
    for (std::size_t i = 0; i + 1 < r; ++i) {
      pair(delta, al.a[i], al.c[i]);
    }
    pair(delta, al.a[r - 1], al.b1);
    std::vector<point_t> bc{al.b1};
    bc.insert(bc.end(), al.c.begin(), al.c.end());
    al.gamma  = gamma;
    al.delta  = delta;
    al.middle = join({cycle(n, al.a), cycle(n, bc)}, n);
    return al;
  }

  // An element commuting with both g and d, built from their alignment.
  inline PInj align_middle(PInj const& g, PInj const& d) {
    auto eta = align(g, d).middle;
    if (!commutes_naive(g, eta) || !commutes_naive(eta, d)) {
      throw Error("align_middle: middle element does not commute");
    }
    return eta;
  }

  ////////////////////////////////////////////////////////////////////////
  // Paths of length at most 4 or 5
  ////////////////////////////////////////////////////////////////////////

  namespace detail {
    inline bool is_prime(std::size_t n) {
      if (n < 2) {
        return false;
      }
      for (std::size_t d = 2; d * d <= n; ++d) {
        if (n % d == 0) {
          return false;
        }
      }
      return true;
    }

    inline std::vector<std::size_t> proper_divisors(std::size_t n) {
      std::vector<std::size_t> out;
      for (std::size_t d = 2; d < n; ++d) {
        if (n % d == 0) {
          out.push_back(d);
        }
      }
      return out;
    }

    inline PInj idempotent_on(std::size_t n, std::span<point_t const> pts) {
      PointSet s;
      for (auto x : pts) {
        s.insert(x);
      }
      return PInj::identity_on(n, s);
    }

    // [x_1 x_n] for a = [x_1 ... x_n].
    inline PInj chain_ends(PInj const& a) {
      auto c = decompose(a).chains.at(0);
      return chain(a.degree(), {c.front(), c.back()});
    }

    inline std::vector<PInj> reversed(std::vector<PInj> v) {
      std::reverse(v.begin(), v.end());
      return v;
    }

    // Neither a nor b is an n-cycle.
    inline std::vector<PInj> walk_without_cycles(PInj const& a, PInj const& b) {
      auto const n  = a.degree();
      bool const fa = is_full_chain(a);
      bool const fb = is_full_chain(b);
      if (!fa && !fb) {
        return {a, commuting_idempotent(a), commuting_idempotent(b), b};
      }
      if (fa && !fb) {
        auto ends = chain_ends(a);
        auto e1   = PInj::identity_on(n, ends.span());
        return {a, ends, e1, commuting_idempotent(b), b};
      }
      if (!fa && fb) {
        return reversed(walk_without_cycles(b, a));
      }
      auto ea = chain_ends(a);
      auto eb = chain_ends(b);
      if ((ea.span() & eb.span()).empty()) {
        return {a, ea, eb, b};
      }
      auto rest = PointSet::full(n) - ea.span() - eb.span();
      if (rest.empty()) {
        throw Error("build_path: no point outside both chain ends (n < 4)");
      }
      return {a, ea, PInj::identity_on(n, PointSet{rest.min()}), eb, b};
    }

    // a is an n-cycle, b is not.
    inline std::vector<PInj> walk_from_cycle(PInj const& a, PInj const& b) {
      auto const n = a.degree();
      if (!is_full_chain(b)) {
        auto k  = proper_divisors(n).at(0);
        auto ak = power(a, k);
        return {a, ak, commuting_idempotent(ak), commuting_idempotent(b), b};
      }
      auto ends = chain_ends(b);
      if (n == 4) {
        auto a2 = power(a, 2);
        auto c  = decompose(b).chains[0];
        point_t x = c.front(), w = c.back();
        if (a2[x] == w) {
          return {a, a2, PInj::identity_on(n, ends.span()), ends, b};
        }
        auto mid = join({chain(n, {x, a2[w]}), chain(n, {a2[x], w})}, n);
        return {a, a2, mid, ends, b};
      }
      auto k  = proper_divisors(n).back();
      auto ak = power(a, k);
      for (auto const& rho : decompose(ak).cycles) {
        auto e = idempotent_on(n, rho);
        if ((e.domain() & ends.span()).empty()) {
          return {a, ak, e, ends, b};
        }
      }
      throw Error("build_path: no cycle of a^k avoids the chain ends");
    }

    // Both n-cycles, n even.
    inline std::vector<PInj> walk_even_cycles(PInj const& a, PInj const& b) {
      auto const n  = a.degree();
      auto       ak = power(a, n / 2);
      auto       bk = power(b, n / 2);
      for (std::size_t x = 0; x < n; ++x) {
        if (ak[x] == bk[x]) {
          return {a, ak, PInj::identity_on(n, PointSet{static_cast<point_t>(x), ak[x]}),
                  bk, b};
        }
      }
      return {a, ak, align_middle(ak, bk), bk, b};
    }

    // Both n-cycles, n odd and composite.
    inline std::vector<PInj> walk_odd_cycles(PInj const& a, PInj const& b) {
      auto const n  = a.degree();
      auto       k  = proper_divisors(n).at(0);
      auto       ak = power(a, k);
      auto       bk = power(b, k);
      auto       e1 = idempotent_on(n, decompose(ak).cycles[0]);
      auto       e2 = idempotent_on(n, decompose(bk).cycles[0]);
      return {a, ak, e1, e2, bk, b};
    }
  }  // namespace detail

  // A path from a to b in the commuting graph of I(n) following the
  // constructive upper-bound arguments.  The walk they produce is
  // loop-erased and checked edge by edge before it is returned.
  inline PathWitness build_path(PInj const& a, PInj const& b) {
    detail::check_same_degree(a, b);
    auto const n = a.degree();
    if (n < 4) {
      throw Error("build_path: needs n >= 4");
    }
    for (auto const& x : {a, b}) {
      if (x.is_zero() || x.is_identity()) {
        throw Error("build_path: " + format(x) + " is central");
      }
    }
    bool const ca = is_n_cycle(a);
    bool const cb = is_n_cycle(b);
    if ((ca || cb) && detail::is_prime(n)) {
      throw Error("build_path: n = " + std::to_string(n)
                  + " is prime and an input is an n-cycle; possibly "
                    "disconnected");
    }
    std::vector<PInj> walk;
    if (a == b) {
      walk = {a};
    } else if (!ca && !cb) {
      walk = detail::walk_without_cycles(a, b);
    } else if (ca && !cb) {
      walk = detail::walk_from_cycle(a, b);
    } else if (!ca && cb) {
      walk = detail::reversed(detail::walk_from_cycle(b, a));
    } else if (n % 2 == 0) {
      walk = detail::walk_even_cycles(a, b);
    } else {
      walk = detail::walk_odd_cycles(a, b);
    }
    auto w = erase_loops(walk);
    if (auto bad = path_defect(w, a, b, monoid_center(n))) {
      throw Error("build_path: internal error, " + *bad);
    }
    std::size_t bound = (ca && cb && n % 2 == 1) ? 5 : 4;
    if (w.length() > bound) {
      throw Error("build_path: internal error, path too long");
    }
    return w;
  }

  ////////////////////////////////////////////////////////////////////////
  // Extremal pairs
  ////////////////////////////////////////////////////////////////////////

  // [x_1 ... x_k y_1 ... y_m] and [y_m ... y_1 x_k ... x_1] with
  // k = ceil(n/2), labelled x_i = i-1 and y_j = k+j-1.
  inline std::pair<PInj, PInj> extremal_nilpotent_pair(std::size_t n) {
    if (n < 3) {
      throw Error("extremal_nilpotent_pair: needs n >= 3");
    }
    std::vector<point_t> pts(n);
    std::iota(pts.begin(), pts.end(), point_t{0});
    auto a = chain(n, pts);
    std::reverse(pts.begin(), pts.end());
    return {a, chain(n, pts)};
  }

  // Rank-r chains [x z_1 ... z_{r-1} y] and [y w_1 ... w_{r-1} x] whose
  // spans cover X.
  inline std::pair<PInj, PInj> ideal_witness_pair(std::size_t n,
                                                  std::size_t r) {
    if (n < 3 || r <= (n - 1) / 2 || r + 1 >= n) {
      throw Error("ideal_witness_pair: need floor((n-1)/2) < r < n-1, got n = "
                  + std::to_string(n) + ", r = " + std::to_string(r));
    }
    point_t const        x = 0;
    point_t const        y = static_cast<point_t>(r);
    std::vector<point_t> za{x};
    for (std::size_t i = 1; i < r; ++i) {
      za.push_back(static_cast<point_t>(i));
    }
    za.push_back(y);
    std::vector<point_t> wb{y};
    for (std::size_t i = r + 1; i < n; ++i) {
      wb.push_back(static_cast<point_t>(i));
    }
    for (std::size_t i = 1; wb.size() < r; ++i) {
      wb.push_back(static_cast<point_t>(i));
    }
    wb.push_back(x);
    return {chain(n, za), chain(n, wb)};
  }

  ////////////////////////////////////////////////////////////////////////
  // Prime-power pairs
  ////////////////////////////////////////////////////////////////////////

  struct PrimePowerPair {
    std::size_t p = 0, k = 0, n = 0, q = 0;
    PInj        alpha, beta;
    // alpha^q and beta^q.
    PInj        delta, eta;
  };

  // An n-cycle whose q-th power is the given join of q cycles of equal
  // length, listed in the given order: x_{i + jq} = cycles[i][j].
  inline PInj cycle_root(std::size_t n,
                         std::vector<std::vector<point_t>> const& cycles) {
    auto const q = cycles.size();
    if (q == 0 || n % q != 0) {
      throw Error("cycle_root: bad cycle count");
    }
    auto const           p = n / q;
    std::vector<point_t> xs(n);
    for (std::size_t i = 0; i < q; ++i) {
      if (cycles[i].size() != p) {
        throw Error("cycle_root: cycles of unequal length");
      }
      for (std::size_t j = 0; j < p; ++j) {
        xs[i + j * q] = cycles[i][j];
      }
    }
    return cycle(n, xs);
  }

  inline PrimePowerPair prime_power_pair(std::size_t p, std::size_t k) {
    PrimePowerPair out;
    out.p = p;
    out.k = k;
    std::size_t n = 1;
    for (std::size_t i = 0; i < k; ++i) {
      n *= p;
    }
    out.n = n;
    out.q = n / p;
    bool const supported = (p == 3 && k == 2) || (p == 5 && k == 2)
                           || (p == 3 && k == 3);
    if (!supported) {
      throw Error("prime_power_pair: supported (p, k) are (3, 2), (5, 2) and "
                  "(3, 3), got (" + std::to_string(p) + ", "
                  + std::to_string(k) + ")");
    }
    auto const q = out.q;
    // 1-indexed points throughout, shifted on output.
    auto to_cycles = [](std::vector<std::vector<std::size_t>> const& rows) {
      std::vector<std::vector<point_t>> cs;
      for (auto const& r : rows) {
        std::vector<point_t> c;
        for (auto x : r) {
          c.push_back(static_cast<point_t>(x - 1));
        }
        cs.push_back(std::move(c));
      }
      return cs;
    };
    auto join_cycles = [&](std::vector<std::vector<point_t>> const& cs) {
      std::vector<PInj> ps;
      for (auto const& c : cs) {
        ps.push_back(cycle(n, c));
      }
      return join(std::span<PInj const>(ps), n);
    };
    if (n == 9) {
      out.alpha = cycle(9, {0, 1, 2, 3, 4, 7, 6, 5, 8});
      out.beta  = cycle(9, {0, 3, 6, 1, 4, 7, 2, 5, 8});
      out.delta = power(out.alpha, q);
      out.eta   = power(out.beta, q);
      return out;
    }
    std::vector<std::vector<std::size_t>> drows, erows;
    for (std::size_t i = 0; i < q; ++i) {
      std::vector<std::size_t> r;
      for (std::size_t j = 1; j <= p; ++j) {
        r.push_back(i * p + j);
      }
      drows.push_back(r);
    }
    // Rows 1 .. q-1: (j, q-2+j, 2q-3+j, ...) with steps q-1 from the second
    // entry on; row q-1 starts at n-p+1 instead of q-1.  Row q is
    // (n-p+2 ... n n-p).
    for (std::size_t j = 1; j < q; ++j) {
      std::vector<std::size_t> r{j == q - 1 ? n - p + 1 : j};
      for (std::size_t i = 2; i <= p; ++i) {
        r.push_back(q - 2 + j + (i - 2) * (q - 1));
      }
      erows.push_back(r);
    }
    std::vector<std::size_t> tau;
    for (std::size_t x = n - p + 2; x <= n; ++x) {
      tau.push_back(x);
    }
    tau.push_back(n - p);
    erows.push_back(tau);

    auto dc   = to_cycles(drows);
    auto ec   = to_cycles(erows);
    out.delta = join_cycles(dc);
    out.eta   = join_cycles(ec);
    for (auto const* g : {&out.delta, &out.eta}) {
      auto d = decompose(*g);
      bool ok = g->is_permutation() && d.cycles.size() == q;
      for (auto const& c : d.cycles) {
        ok = ok && c.size() == p;
      }
      if (!ok) {
        throw Error("prime_power_pair: construction is not a join of q "
                    "p-cycles");
      }
    }
    out.alpha = cycle_root(n, dc);
    out.beta  = cycle_root(n, ec);
    if (power(out.alpha, q) != out.delta || power(out.beta, q) != out.eta) {
      throw Error("prime_power_pair: root construction failed");
    }
    return out;
  }

  ////////////////////////////////////////////////////////////////////////
  // Distance-5 certificates
  ////////////////////////////////////////////////////////////////////////

  // Classes of the transitive closure of "in a common cycle of g or h".
  inline std::vector<PointSet> cycle_closure_classes(PInj const& g,
                                                     PInj const& h) {
    detail::check_same_degree(g, h);
    auto const               n = g.degree();
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
      return parent[x] == x ? x : parent[x] = find(parent[x]);
    };
    for (auto const* p : {&g, &h}) {
      for (auto const& c : decompose(*p).cycles) {
        for (auto x : c) {
          parent[find(x)] = find(c[0]);
        }
      }
    }
    std::vector<PointSet> classes;
    std::vector<std::size_t> root_index(n, n);
    for (std::size_t x = 0; x < n; ++x) {
      auto r = find(x);
      if (root_index[r] == n) {
        root_index[r] = classes.size();
        classes.emplace_back();
      }
      classes[root_index[r]].insert(x);
    }
    return classes;
  }

  struct PowerCell {
    std::size_t       s = 0, t = 0;
    // Elements other than 0 and 1 commuting with a^s and b^t.
    std::vector<PInj> nontrivial;
    std::size_t       common_size = 0;
  };

  struct Distance5Report {
    std::size_t n = 0;
    // Centralizer of each endpoint is 0 together with its powers.
    bool a_centralizer_is_powers = false;
    bool b_centralizer_is_powers = false;
    // Pairs (s, t) in [1, n-1]^2 with a^s b^t = b^t a^s.
    std::size_t commuting_power_pairs = 0;
    // Reduced grid: maximal proper divisors of n.
    std::vector<PowerCell> cells;
    // Full (s, t) grid by filtering the structural centralizer of a^s
    // (only when requested).
    std::vector<PowerCell> full_grid;
    std::size_t            full_grid_nontrivial = 0;
    std::size_t            closure_classes = 0;
    std::size_t            centralizer_size_aq = 0;
    std::optional<PathWitness> path;
    bool                       lower_bound_5 = false;
    std::optional<std::size_t> distance;
  };

  namespace detail {
    // Proper divisors of n that divide no other proper divisor.
    inline std::vector<std::size_t> maximal_divisors(std::size_t n) {
      auto                     ds = proper_divisors(n);
      std::vector<std::size_t> out;
      for (auto d : ds) {
        bool maximal = true;
        for (auto e : ds) {
          maximal = maximal && !(e != d && e % d == 0);
        }
        if (maximal) {
          out.push_back(d);
        }
      }
      return out;
    }

    inline bool centralizer_is_powers(PInj const& a) {
      auto C = centralizer_of_permutation(a);
      if (C.size() != a.degree() + 1) {
        return false;
      }
      for (auto const& g : C) {
        if (g.is_zero()) {
          continue;
        }
        bool found = false;
        for (std::size_t s = 1; s <= a.degree() && !found; ++s) {
          found = power(a, s) == g;
        }
        if (!found) {
          return false;
        }
      }
      return true;
    }

    template <typename F>
    void parallel_for(std::size_t count, std::size_t threads, F&& fn) {
      threads = std::max<std::size_t>(1, std::min(threads, count));
      if (threads == 1) {
        for (std::size_t i = 0; i < count; ++i) {
          fn(i);
        }
        return;
      }
      std::vector<std::thread> pool;
      for (std::size_t t = 0; t < threads; ++t) {
        pool.emplace_back([&, t] {
          for (std::size_t i = t; i < count; i += threads) {
            fn(i);
          }
        });
      }
      for (auto& th : pool) {
        th.join();
      }
    }
  }  // namespace detail

  struct Distance5Options {
    // Also check every (s, t) by filtering the structural centralizer of
    // a^s; feasible when those centralizers are small (n = 9).
    bool        full_grid = false;
    std::size_t threads   = 1;
  };

  // Certifies d(a, b) >= 5 for n-cycles a, b: every neighbour of an
  // n-cycle is 0 or a power of it, no power of a commutes with a power of
  // b, and no element other than 0 and 1 commutes with a^s and b^t.  The
  // last check runs over maximal proper divisors s, t of n, since
  // C(a^s) = C(a^gcd(s,n)) grows along divisibility.
  inline Distance5Report verify_distance5(PInj const&             a,
                                          PInj const&             b,
                                          Distance5Options const& opt = {}) {
    detail::check_same_degree(a, b);
    auto const n = a.degree();
    if (!is_n_cycle(a) || !is_n_cycle(b)) {
      throw Error("verify_distance5: inputs must be n-cycles");
    }
    if (a == b) {
      throw Error("verify_distance5: inputs are equal");
    }
    Distance5Report rep;
    rep.n                       = n;
    rep.a_centralizer_is_powers = detail::centralizer_is_powers(a);
    rep.b_centralizer_is_powers = detail::centralizer_is_powers(b);

    std::vector<PInj> ap, bp;
    for (std::size_t s = 1; s < n; ++s) {
      ap.push_back(power(a, s));
      bp.push_back(power(b, s));
    }
    for (auto const& x : ap) {
      PartView v(x);
      for (auto const& y : bp) {
        rep.commuting_power_pairs += v.commutes_with(y);
      }
    }

    auto nontrivial = [n](std::vector<PInj> const& v) {
      std::vector<PInj> out;
      for (auto const& g : v) {
        if (!g.is_zero() && g != PInj::identity(n)) {
          out.push_back(g);
        }
      }
      return out;
    };

    auto divs = detail::maximal_divisors(n);
    for (auto s : divs) {
      for (auto t : divs) {
        rep.cells.push_back({s, t, {}, 0});
      }
    }
    detail::parallel_for(rep.cells.size(), opt.threads, [&](std::size_t i) {
      auto& c = rep.cells[i];
      auto  common = common_centralizer(power(a, c.s), power(b, c.t));
      c.common_size = common.size();
      c.nontrivial  = nontrivial(common);
    });

    if (opt.full_grid) {
      for (std::size_t s = 1; s < n; ++s) {
        for (std::size_t t = 1; t < n; ++t) {
          rep.full_grid.push_back({s, t, {}, 0});
        }
      }
      detail::parallel_for(rep.full_grid.size(), opt.threads,
                           [&](std::size_t i) {
        auto&             c  = rep.full_grid[i];
        auto const&       bt = bp[c.t - 1];
        PartView          v(bt);
        std::vector<PInj> common;
        for_each_in_permutation_centralizer(ap[c.s - 1], [&](PInj const& g) {
          if (v.commutes_with(g)) {
            common.push_back(g);
          }
        });
        c.common_size = common.size();
        c.nontrivial  = nontrivial(common);
      });
      for (auto const& c : rep.full_grid) {
        rep.full_grid_nontrivial += c.nontrivial.size();
      }
    }

    if (!divs.empty()) {
      auto q = divs.back();
      rep.closure_classes =
          cycle_closure_classes(power(a, q), power(b, q)).size();
      rep.centralizer_size_aq = static_cast<std::size_t>(
          permutation_centralizer_size(power(a, q)));
    }

    bool ok = rep.a_centralizer_is_powers && rep.b_centralizer_is_powers
              && rep.commuting_power_pairs == 0 && !divs.empty()
              && rep.full_grid_nontrivial == 0;
    for (auto const& c : rep.cells) {
      ok = ok && c.nontrivial.empty();
    }
    rep.lower_bound_5 = ok;
    if (n >= 4 && !detail::is_prime(n)) {
      rep.path = build_path(a, b);
      if (ok && rep.path->length() == 5) {
        rep.distance = 5;
      }
    }
    return rep;
  }

  ////////////////////////////////////////////////////////////////////////
  // Symmetric group
  ////////////////////////////////////////////////////////////////////////

  struct SymTriple {
    PInj rho, sigma, tau;
  };

  // rho - sigma - tau in the commuting graph of Sym(10) with sigma != 1,
  // although every cycle length of rho is coprime to every cycle length
  // of tau.
  inline SymTriple sym_counterexample() {
    auto const n = 10;
    SymTriple  t;
    t.rho   = parse("(1 2)|(3 4)|(5 6)|(7 8)|(9 10)", n);
    t.sigma = parse("(1 3 5)|(2 4 6)|(7)|(8)|(9)|(10)", n);
    t.tau   = parse("(1 3 5)|(2 4 6)|(7 8 9)|(10)", n);
    if (!commutes_naive(t.rho, t.sigma) || !commutes_naive(t.sigma, t.tau)
        || t.sigma.is_identity()) {
      throw Error("sym_counterexample: triple does not behave as claimed");
    }
    return t;
  }

  struct DolzanCell {
    std::size_t m = 0, k = 0;
    // Permutations other than 1 commuting with a^m and b^k.
    std::vector<PInj> nontrivial;
  };

  struct DolzanReport {
    std::size_t             n = 0;
    bool                    a_centralizer_is_powers = false;
    bool                    b_centralizer_is_powers = false;
    bool                    endpoints_commute = true;
    std::size_t             commuting_power_pairs = 0;
    std::vector<DolzanCell> cells;
    bool                    lower_bound_5 = false;
  };

  namespace detail {
    // Permutations in the centralizer of a are exactly its powers.
    inline bool sym_centralizer_is_powers(PInj const& a) {
      std::vector<PInj> perms;
      for_each_in_permutation_centralizer(a, [&](PInj const& g) {
        if (g.is_permutation()) {
          perms.push_back(g);
        }
      });
      std::vector<PInj> pw{PInj::identity(a.degree())};
      for (auto x = a; x != PInj::identity(a.degree()); x = x * a) {
        pw.push_back(x);
      }
      sort_by_id(perms);
      sort_by_id(pw);
      return perms == pw;
    }
  }  // namespace detail

  // d(a, b) >= 5 in the commuting graph of Sym(n) for a = (1 ... n) and
  // b = (1 ... n-1)(n), when neither n nor n-1 is prime.
  inline DolzanReport dolzan_distance_check(std::size_t n) {
    if (n < 4 || n > 16 || detail::is_prime(n) || detail::is_prime(n - 1)) {
      throw Error("dolzan_distance_check: need n <= 16 with n and n-1 both "
                  "composite, got " + std::to_string(n));
    }
    std::vector<point_t> pts(n);
    std::iota(pts.begin(), pts.end(), point_t{0});
    auto a = cycle(n, pts);
    pts.pop_back();
    auto b = join({cycle(n, pts), PInj::identity_on(n, PointSet{static_cast<point_t>(n - 1)})}, n);

    DolzanReport rep;
    rep.n                       = n;
    rep.a_centralizer_is_powers = detail::sym_centralizer_is_powers(a);
    rep.b_centralizer_is_powers = detail::sym_centralizer_is_powers(b);
    rep.endpoints_commute       = commutes_naive(a, b);
    for (std::size_t m = 1; m < n; ++m) {
      auto     am = power(a, m);
      PartView v(am);
      for (std::size_t k = 1; k + 1 < n; ++k) {
        rep.commuting_power_pairs += v.commutes_with(power(b, k));
      }
    }
    for (auto m : detail::proper_divisors(n)) {
      for (auto k : detail::proper_divisors(n - 1)) {
        DolzanCell c{m, k, {}};
        auto       common =
            common_centralizer(power(a, m), power(b, k), true);
        for (auto const& g : common) {
          if (!g.is_identity()) {
            c.nontrivial.push_back(g);
          }
        }
        rep.cells.push_back(std::move(c));
      }
    }
    bool ok = rep.a_centralizer_is_powers && rep.b_centralizer_is_powers
              && !rep.endpoints_commute && rep.commuting_power_pairs == 0;
    for (auto const& c : rep.cells) {
      ok = ok && c.nontrivial.empty();
    }
    rep.lower_bound_5 = ok;
    return rep;
  }

}  // namespace symi
