#pragma once

// Partial injective transformations on {0, ..., n-1}.  Maps are written on
// the right and composed left to right: x(ab) = (xa)b.  Text I/O is
// 1-indexed; everything else is 0-indexed.

#include <algorithm>
#include <array>
#include <cctype>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "bits.hpp"
#include "error.hpp"

namespace symi {

  inline constexpr std::size_t max_degree = 32;
  inline constexpr point_t     undefined  = 0xFF;

  class PInj {
   public:
    // The empty map on zero points.
    PInj() noexcept {
      img_.fill(undefined);
    }

    // The zero (empty) map on n points.
    explicit PInj(std::size_t n) : PInj() {
      if (n > max_degree) {
        throw Error("degree " + std::to_string(n) + " exceeds "
                    + std::to_string(max_degree));
      }
      n_ = static_cast<std::uint8_t>(n);
    }

    static PInj zero(std::size_t n) {
      return PInj(n);
    }

    static PInj identity(std::size_t n) {
      PInj a(n);
      for (std::size_t x = 0; x < n; ++x) {
        a.img_[x] = static_cast<point_t>(x);
      }
      return a;
    }

    static PInj identity_on(std::size_t n, PointSet pts) {
      PInj a(n);
      for (auto x : pts.to_vector()) {
        a.img_[x] = x;
      }
      return a;
    }

    // images[x] < 0 means undefined at x.  Throws unless injective.
    static PInj from_images(std::span<int const> images) {
      PInj     a(images.size());
      PointSet seen;
      for (std::size_t x = 0; x < images.size(); ++x) {
        int y = images[x];
        if (y < 0) {
          continue;
        }
        if (static_cast<std::size_t>(y) >= images.size()) {
          throw Error("image " + std::to_string(y) + " out of range");
        }
        if (seen.contains(static_cast<std::size_t>(y))) {
          throw Error("map is not injective: " + std::to_string(y)
                      + " has two preimages");
        }
        seen.insert(static_cast<std::size_t>(y));
        a.img_[x] = static_cast<point_t>(y);
      }
      return a;
    }

    static PInj from_images(std::initializer_list<int> images) {
      std::vector<int> v(images);
      return from_images(std::span<int const>(v));
    }

    std::size_t degree() const noexcept {
      return n_;
    }

    bool is_defined(std::size_t x) const noexcept {
      return img_[x] != undefined;
    }

    // Image of x, or `undefined`.
    point_t operator[](std::size_t x) const noexcept {
      return img_[x];
    }

    PointSet domain() const noexcept {
      PointSet d;
      for (std::size_t x = 0; x < n_; ++x) {
        if (img_[x] != undefined) {
          d.insert(x);
        }
      }
      return d;
    }

    PointSet image() const noexcept {
      PointSet d;
      for (std::size_t x = 0; x < n_; ++x) {
        if (img_[x] != undefined) {
          d.insert(img_[x]);
        }
      }
      return d;
    }

    PointSet span() const noexcept {
      return domain() | image();
    }

    std::size_t rank() const noexcept {
      std::size_t r = 0;
      for (std::size_t x = 0; x < n_; ++x) {
        r += (img_[x] != undefined);
      }
      return r;
    }

    bool is_zero() const noexcept {
      return rank() == 0;
    }

    bool is_identity() const noexcept {
      for (std::size_t x = 0; x < n_; ++x) {
        if (img_[x] != x) {
          return false;
        }
      }
      return true;
    }

    bool is_idempotent() const noexcept {
      for (std::size_t x = 0; x < n_; ++x) {
        if (img_[x] != undefined && img_[x] != x) {
          return false;
        }
      }
      return true;
    }

    bool is_permutation() const noexcept {
      return rank() == n_;
    }

    // True iff some point lies on a cycle; false exactly for nilpotents.
    bool has_cycle() const noexcept {
      // Points reached by walking forward from a chain start are on chains;
      // any remaining domain point is on a cycle.
      PointSet on_chain;
      PointSet img = image();
      for (std::size_t x = 0; x < n_; ++x) {
        if (img_[x] == undefined || img.contains(x)) {
          continue;
        }
        for (std::size_t y = x; y != undefined; y = img_[y]) {
          on_chain.insert(y);
        }
      }
      return !(domain() - on_chain).empty();
    }

    // Restriction to the points of A (the result is still on n points).
    PInj restricted(PointSet A) const {
      PInj r(n_);
      for (std::size_t x = 0; x < n_; ++x) {
        if (A.contains(x)) {
          r.img_[x] = img_[x];
        }
      }
      return r;
    }

    std::size_t hash() const noexcept {
      std::uint64_t h = 1469598103934665603ULL ^ n_;
      for (std::size_t x = 0; x < n_; ++x) {
        h = (h ^ img_[x]) * 1099511628211ULL;
      }
      return static_cast<std::size_t>(h);
    }

    friend bool operator==(PInj const&, PInj const&) noexcept = default;

    // Sets x -> y without any checking; used by the algorithms below.
    void set_unchecked(std::size_t x, point_t y) noexcept {
      img_[x] = y;
    }

   private:
    std::array<point_t, max_degree> img_;
    std::uint8_t                    n_ = 0;
  };

  namespace detail {
    inline void check_same_degree(PInj const& a, PInj const& b) {
      if (a.degree() != b.degree()) {
        throw Error("mismatched degrees " + std::to_string(a.degree())
                    + " and " + std::to_string(b.degree()));
      }
    }
  }  // namespace detail

  // x(ab) = (xa)b.
  inline PInj compose(PInj const& a, PInj const& b) {
    detail::check_same_degree(a, b);
    PInj r(a.degree());
    for (std::size_t x = 0; x < a.degree(); ++x) {
      point_t y = a[x];
      if (y != undefined) {
        r.set_unchecked(x, b[y]);
      }
    }
    return r;
  }

  inline PInj operator*(PInj const& a, PInj const& b) {
    return compose(a, b);
  }

  // The relational converse, which is the unique inverse in I(X).
  inline PInj inverse(PInj const& a) {
    PInj r(a.degree());
    for (std::size_t x = 0; x < a.degree(); ++x) {
      if (a[x] != undefined) {
        r.set_unchecked(a[x], static_cast<point_t>(x));
      }
    }
    return r;
  }

  // Relabels a by the permutation s: the result maps xs to (xa)s.
  inline PInj conjugate(PInj const& a, PInj const& s) {
    detail::check_same_degree(a, s);
    if (!s.is_permutation()) {
      throw Error("conjugate: not a permutation");
    }
    PInj r(a.degree());
    for (std::size_t x = 0; x < a.degree(); ++x) {
      if (a[x] != undefined) {
        r.set_unchecked(s[x], s[a[x]]);
      }
    }
    return r;
  }

  ////////////////////////////////////////////////////////////////////////
  // Cycle/chain normal form
  ////////////////////////////////////////////////////////////////////////

  // cycles: (x0 ... x_{k-1}), x_i -> x_{i+1 mod k}.
  // chains: [x0 ... x_k] with k >= 1, x_i -> x_{i+1}, undefined at x_k.
  // Canonical: each cycle starts at its least point; both lists are sorted
  // by least span point.
  struct CycleChainDecomp {
    std::size_t                       degree = 0;
    std::vector<std::vector<point_t>> cycles;
    std::vector<std::vector<point_t>> chains;

    friend bool operator==(CycleChainDecomp const&,
                           CycleChainDecomp const&) = default;
  };

  inline CycleChainDecomp decompose(PInj const& a) {
    CycleChainDecomp d;
    d.degree         = a.degree();
    auto const n     = a.degree();
    PointSet   img   = a.image();
    PointSet   done;
    // Chains start at domain points without a preimage.  Scanning x in
    // increasing order yields chains sorted by start point, but the least
    // span point of a chain need not be its start, so sort afterwards.
    for (std::size_t x = 0; x < n; ++x) {
      if (a[x] == undefined || img.contains(x)) {
        continue;
      }
      std::vector<point_t> chain;
      for (std::size_t y = x; y != undefined; y = a[y]) {
        chain.push_back(static_cast<point_t>(y));
        done.insert(y);
      }
      d.chains.push_back(std::move(chain));
    }
    for (std::size_t x = 0; x < n; ++x) {
      if (a[x] == undefined || done.contains(x)) {
        continue;
      }
      std::vector<point_t> cycle;
      std::size_t          y = x;
      do {
        cycle.push_back(static_cast<point_t>(y));
        done.insert(y);
        y = a[y];
      } while (y != x);
      // x is the least unvisited point, hence the least point of its cycle.
      d.cycles.push_back(std::move(cycle));
    }
    auto by_min = [](auto const& p, auto const& q) {
      return *std::min_element(p.begin(), p.end())
             < *std::min_element(q.begin(), q.end());
    };
    std::sort(d.chains.begin(), d.chains.end(), by_min);
    return d;
  }

  inline PInj cycle(std::size_t n, std::span<point_t const> pts) {
    PInj     r(n);
    PointSet seen;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (pts[i] >= n || seen.contains(pts[i])) {
        throw Error("cycle: repeated or out-of-range point");
      }
      seen.insert(pts[i]);
      r.set_unchecked(pts[i], pts[(i + 1) % pts.size()]);
    }
    return r;
  }

  inline PInj chain(std::size_t n, std::span<point_t const> pts) {
    if (pts.size() < 2) {
      throw Error("chain: a chain needs at least two points");
    }
    PInj     r(n);
    PointSet seen;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (pts[i] >= n || seen.contains(pts[i])) {
        throw Error("chain: repeated or out-of-range point");
      }
      seen.insert(pts[i]);
      if (i + 1 < pts.size()) {
        r.set_unchecked(pts[i], pts[i + 1]);
      }
    }
    return r;
  }

  inline PInj cycle(std::size_t n, std::initializer_list<point_t> pts) {
    return cycle(n, std::span<point_t const>(pts.begin(), pts.size()));
  }

  inline PInj chain(std::size_t n, std::initializer_list<point_t> pts) {
    return chain(n, std::span<point_t const>(pts.begin(), pts.size()));
  }

  // Union of pairwise completely disjoint maps; the empty join is 0.
  inline PInj join(std::span<PInj const> parts, std::size_t n) {
    PInj     r(n);
    PointSet used;
    for (auto const& p : parts) {
      if (p.degree() != n) {
        throw Error("join: mismatched degrees");
      }
      PointSet s = p.span();
      if (!(s & used).empty()) {
        throw Error("join: parts are not completely disjoint");
      }
      used = used | s;
      for (std::size_t x = 0; x < n; ++x) {
        if (p[x] != undefined) {
          r.set_unchecked(x, p[x]);
        }
      }
    }
    return r;
  }

  inline PInj join(std::initializer_list<PInj> parts, std::size_t n) {
    return join(std::span<PInj const>(parts.begin(), parts.size()), n);
  }

  inline std::vector<PInj> parts(CycleChainDecomp const& d) {
    std::vector<PInj> out;
    for (auto const& c : d.cycles) {
      out.push_back(cycle(d.degree, c));
    }
    for (auto const& c : d.chains) {
      out.push_back(chain(d.degree, c));
    }
    return out;
  }

  inline PInj join(CycleChainDecomp const& d) {
    auto ps = parts(d);
    return join(std::span<PInj const>(ps), d.degree);
  }

  // a^p for p >= 1, evaluated part by part on the normal form.
  inline PInj power(PInj const& a, std::size_t p) {
    if (p == 0) {
      throw Error("power: exponent must be at least 1");
    }
    auto d = decompose(a);
    PInj r(a.degree());
    for (auto const& c : d.cycles) {
      for (std::size_t i = 0; i < c.size(); ++i) {
        r.set_unchecked(c[i], c[(i + p) % c.size()]);
      }
    }
    for (auto const& c : d.chains) {
      for (std::size_t i = 0; i + p < c.size(); ++i) {
        r.set_unchecked(c[i], c[i + p]);
      }
    }
    return r;
  }

  ////////////////////////////////////////////////////////////////////////
  // Classification
  ////////////////////////////////////////////////////////////////////////

  enum class Kind {
    zero,
    identity,
    idempotent,
    permutation,
    nilpotent,
    mixed
  };

  inline char const* to_string(Kind k) noexcept {
    switch (k) {
      case Kind::zero: return "zero";
      case Kind::identity: return "identity";
      case Kind::idempotent: return "idempotent";
      case Kind::permutation: return "permutation";
      case Kind::nilpotent: return "nilpotent";
      case Kind::mixed: return "mixed";
    }
    return "?";
  }

  struct Classification {
    Kind                       kind = Kind::zero;
    std::size_t                rank = 0;
    bool                       is_n_cycle = false;
    // 1 + longest chain length, for nilpotents (including 0, index 1).
    std::optional<std::size_t> nilpotent_index;
  };

  inline Classification classify(PInj const& a) {
    Classification c;
    c.rank = a.rank();
    auto d = decompose(a);
    if (d.cycles.empty()) {
      std::size_t longest = 0;
      for (auto const& ch : d.chains) {
        longest = std::max(longest, ch.size() - 1);
      }
      c.nilpotent_index = longest + 1;
    }
    c.is_n_cycle = d.cycles.size() == 1 && d.chains.empty()
                   && d.cycles[0].size() == a.degree();
    if (c.rank == 0) {
      c.kind = Kind::zero;
    } else if (a.is_identity()) {
      c.kind = Kind::identity;
    } else if (a.is_idempotent()) {
      c.kind = Kind::idempotent;
    } else if (a.is_permutation()) {
      c.kind = Kind::permutation;
    } else if (d.cycles.empty()) {
      c.kind = Kind::nilpotent;
    } else {
      c.kind = Kind::mixed;
    }
    return c;
  }

  inline bool is_n_cycle(PInj const& a) {
    if (!a.is_permutation() || a.degree() == 0) {
      return false;
    }
    std::size_t len = 0;
    std::size_t y   = 0;
    do {
      y = a[y];
      ++len;
    } while (y != 0);
    return len == a.degree();
  }

  // Nilpotent of index n, i.e. a single chain through every point.
  inline bool is_full_chain(PInj const& a) {
    if (a.rank() + 1 != a.degree() || a.degree() < 2) {
      return false;
    }
    auto d = decompose(a);
    return d.cycles.empty() && d.chains.size() == 1;
  }

  ////////////////////////////////////////////////////////////////////////
  // Text form
  ////////////////////////////////////////////////////////////////////////

  // Canonical text: "0", "id", or parts joined by '|' in order of their
  // least point, 1-indexed.
  inline std::string format(PInj const& a) {
    if (a.is_zero()) {
      return "0";
    }
    if (a.is_identity()) {
      return "id";
    }
    auto d = decompose(a);
    std::vector<std::pair<point_t, std::string>> items;
    auto render = [](std::vector<point_t> const& pts, char open, char close) {
      std::string s(1, open);
      for (std::size_t i = 0; i < pts.size(); ++i) {
        if (i != 0) {
          s += ' ';
        }
        s += std::to_string(pts[i] + 1);
      }
      s += close;
      return s;
    };
    for (auto const& c : d.cycles) {
      items.emplace_back(c[0], render(c, '(', ')'));
    }
    for (auto const& c : d.chains) {
      items.emplace_back(*std::min_element(c.begin(), c.end()),
                         render(c, '[', ']'));
    }
    std::sort(items.begin(), items.end());
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
      if (i != 0) {
        out += '|';
      }
      out += items[i].second;
    }
    return out;
  }

  inline PInj parse(std::string_view text, std::size_t n) {
    if (n > max_degree) {
      throw Error("degree " + std::to_string(n) + " exceeds "
                  + std::to_string(max_degree));
    }
    std::size_t pos  = 0;
    auto        skip = [&] {
      while (pos < text.size()
             && std::isspace(static_cast<unsigned char>(text[pos]))) {
        ++pos;
      }
    };
    skip();
    auto rest_is_empty = [&] {
      skip();
      return pos == text.size();
    };
    if (text.substr(pos, 2) == "id") {
      pos += 2;
      if (!rest_is_empty()) {
        throw ParseError("unexpected trailing input", pos);
      }
      return PInj::identity(n);
    }
    if (pos < text.size() && text[pos] == '0') {
      ++pos;
      if (!rest_is_empty()) {
        throw ParseError("unexpected trailing input", pos);
      }
      return PInj::zero(n);
    }
    PInj     result(n);
    PointSet used;
    while (true) {
      skip();
      if (pos == text.size()) {
        throw ParseError("expected '(' or '['", pos);
      }
      char open = text[pos];
      if (open != '(' && open != '[') {
        throw ParseError(std::string("expected '(' or '[' but found '")
                             + open + "'",
                         pos);
      }
      char const  close = open == '(' ? ')' : ']';
      std::size_t start = pos++;
      std::vector<point_t> pts;
      while (true) {
        skip();
        if (pos == text.size()) {
          throw ParseError(std::string("missing '") + close + "'", pos);
        }
        if (text[pos] == close) {
          ++pos;
          break;
        }
        if (!std::isdigit(static_cast<unsigned char>(text[pos]))) {
          throw ParseError(std::string("unexpected character '") + text[pos]
                               + "'",
                           pos);
        }
        std::size_t num_pos = pos;
        std::size_t v       = 0;
        while (pos < text.size()
               && std::isdigit(static_cast<unsigned char>(text[pos]))) {
          v = v * 10 + static_cast<std::size_t>(text[pos] - '0');
          if (v > 1000) {
            throw ParseError("point out of range", num_pos);
          }
          ++pos;
        }
        if (v == 0 || v > n) {
          throw ParseError("point " + std::to_string(v) + " out of range 1.."
                               + std::to_string(n),
                           num_pos);
        }
        auto x = static_cast<point_t>(v - 1);
        if (used.contains(x)) {
          throw ParseError("repeated point " + std::to_string(v), num_pos);
        }
        used.insert(x);
        pts.push_back(x);
      }
      if (pts.empty()) {
        throw ParseError("empty part", start);
      }
      if (open == '[' && pts.size() < 2) {
        throw ParseError("a chain needs at least two points", start);
      }
      for (std::size_t i = 0; i < pts.size(); ++i) {
        if (open == '(') {
          result.set_unchecked(pts[i], pts[(i + 1) % pts.size()]);
        } else if (i + 1 < pts.size()) {
          result.set_unchecked(pts[i], pts[i + 1]);
        }
      }
      skip();
      if (pos == text.size()) {
        break;
      }
      if (text[pos] != '|') {
        throw ParseError("expected '|' between parts", pos);
      }
      ++pos;
    }
    return result;
  }

}  // namespace symi

template <>
struct std::hash<symi::PInj> {
  std::size_t operator()(symi::PInj const& a) const noexcept {
    return a.hash();
  }
};
