#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <chrono>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "bits.hpp"
#include "clique.hpp"
#include "commute.hpp"
#include "enumerate.hpp"
#include "error.hpp"
#include "pinj.hpp"

namespace symi {

  ////////////////////////////////////////////////////////////////////////
  // Conjugation by Sym(n)
  ////////////////////////////////////////////////////////////////////////

  struct CanonicalForm {
    PInj rep;
    // A permutation s with conjugate(a, s) == rep.
    PInj conjugator;
  };

  // The representative of a's conjugacy class under Sym(n): cycles by
  // decreasing length on consecutive points, then chains likewise, then
  // the points outside the span.
  inline CanonicalForm canonical_conjugate(PInj const& a) {
    auto const n = a.degree();
    auto       d = decompose(a);
    auto by_len  = [](auto const& p, auto const& q) {
      return p.size() > q.size();
    };
    std::stable_sort(d.cycles.begin(), d.cycles.end(), by_len);
    std::stable_sort(d.chains.begin(), d.chains.end(), by_len);
    PInj        s(n);
    PInj        rep(n);
    std::size_t next = 0;
    for (auto const& c : d.cycles) {
      auto first = next;
      for (std::size_t i = 0; i < c.size(); ++i) {
        s.set_unchecked(c[i], static_cast<point_t>(next));
        rep.set_unchecked(next,
                          static_cast<point_t>(first + (i + 1) % c.size()));
        ++next;
      }
    }
    for (auto const& c : d.chains) {
      for (std::size_t i = 0; i < c.size(); ++i) {
        s.set_unchecked(c[i], static_cast<point_t>(next));
        if (i + 1 < c.size()) {
          rep.set_unchecked(next, static_cast<point_t>(next + 1));
        }
        ++next;
      }
    }
    for (std::size_t x = 0; x < n; ++x) {
      if (s[x] == undefined) {
        s.set_unchecked(x, static_cast<point_t>(next++));
      }
    }
    return {rep, s};
  }

  ////////////////////////////////////////////////////////////////////////
  // Commuting graph
  ////////////////////////////////////////////////////////////////////////

  enum class CenterRule {
    // I(n): remove 0 and 1.
    full_monoid,
    // A proper ideal J_r: remove 0.
    ideal,
    // A group: remove the identity.
    group,
    // Remove an explicitly given set.
    explicit_set
  };

  inline char const* to_string(CenterRule c) noexcept {
    switch (c) {
      case CenterRule::full_monoid: return "monoid";
      case CenterRule::ideal: return "ideal";
      case CenterRule::group: return "group";
      case CenterRule::explicit_set: return "explicit";
    }
    return "?";
  }

  struct DistanceResult {
    // nullopt means infinite (disconnected).
    std::optional<std::size_t> value;
    std::vector<PInj>          path;
    // For diameters: an attaining pair of vertices.
    std::optional<std::pair<PInj, PInj>> pair;

    bool infinite() const noexcept {
      return !value.has_value();
    }
  };

  inline constexpr std::uint8_t unreachable = 0xFF;

  class CommutingGraph {
   public:
    CommutingGraph() = default;

    // Removes the center given by `rule` from `elems` and joins distinct
    // commuting elements.  Rows are computed on `threads` threads.
    static CommutingGraph build(std::size_t              n,
                                std::vector<PInj>        elems,
                                CenterRule               rule,
                                std::vector<PInj> const& explicit_center = {},
                                std::size_t              threads = 1) {
      CommutingGraph g;
      g.n_ = n;
      for (auto const& a : elems) {
        if (a.degree() != n) {
          throw Error("graph build: element of the wrong degree");
        }
      }
      sort_by_id(elems);
      elems.erase(std::unique(elems.begin(), elems.end()), elems.end());
      std::vector<PInj> center;
      auto has = [&](PInj const& c) {
        return std::binary_search(elems.begin(), elems.end(), c, IdLess{});
      };
      auto const zero = PInj::zero(n);
      auto const one  = PInj::identity(n);
      switch (rule) {
        case CenterRule::full_monoid:
          if (!has(zero) || !has(one)) {
            throw Error("center rule 'monoid' needs both 0 and 1 among the "
                        "vertices");
          }
          center = {zero, one};
          break;
        case CenterRule::ideal:
          if (!has(zero)) {
            throw Error("center rule 'ideal' needs 0 among the vertices");
          }
          if (n > 0 && has(one)) {
            throw Error("center rule 'ideal' applied to a set containing "
                        "the identity; use 'monoid'");
          }
          center = {zero};
          break;
        case CenterRule::group:
          if (!has(one)) {
            throw Error("center rule 'group' needs the identity among the "
                        "vertices");
          }
          center = {one};
          break;
        case CenterRule::explicit_set:
          for (auto const& c : explicit_center) {
            if (!has(c)) {
              throw Error("explicit center element " + format(c)
                          + " is not a vertex");
            }
          }
          center = explicit_center;
          break;
      }
      sort_by_id(center);
      for (auto const& a : elems) {
        if (!std::binary_search(center.begin(), center.end(), a, IdLess{})) {
          g.vertices_.push_back(a);
        }
      }
      g.center_ = std::move(center);
      g.rule_   = rule;
      g.index_ids();
      g.adj_ = BitMatrix(g.vertices_.size());
      g.compute_rows(threads);
      return g;
    }

    // The induced subgraph on the given vertex indices.
    CommutingGraph induced(std::vector<std::size_t> const& keep) const {
      CommutingGraph g;
      g.n_      = n_;
      g.rule_   = CenterRule::explicit_set;
      g.center_ = center_;
      for (auto i : keep) {
        g.vertices_.push_back(vertices_.at(i));
      }
      g.index_ids();
      g.adj_ = BitMatrix(keep.size());
      for (std::size_t a = 0; a < keep.size(); ++a) {
        for (std::size_t b = 0; b < keep.size(); ++b) {
          if (adj_.test(keep[a], keep[b])) {
            g.adj_.set(a, b);
          }
        }
      }
      return g;
    }

    std::size_t degree() const noexcept {
      return n_;
    }
    std::size_t size() const noexcept {
      return vertices_.size();
    }
    std::vector<PInj> const& vertices() const noexcept {
      return vertices_;
    }
    PInj const& vertex(std::size_t i) const {
      return vertices_.at(i);
    }
    std::vector<PInj> const& center() const noexcept {
      return center_;
    }
    CenterRule center_rule() const noexcept {
      return rule_;
    }
    BitMatrix const& adjacency() const noexcept {
      return adj_;
    }
    bool edge(std::size_t i, std::size_t j) const {
      return adj_.test(i, j);
    }
    std::size_t vertex_degree(std::size_t i) const {
      return adj_.row_count(i);
    }

    std::size_t edge_count() const {
      std::size_t total = 0;
      for (std::size_t i = 0; i < size(); ++i) {
        total += adj_.row_count(i);
      }
      return total / 2;
    }

    std::optional<std::size_t> index_of(PInj const& a) const {
      if (a.degree() != n_) {
        return std::nullopt;
      }
      if (n_ <= max_id_degree) {
        auto id = element_id(a);
        auto it = std::lower_bound(ids_.begin(), ids_.end(), id);
        if (it != ids_.end() && *it == id) {
          return static_cast<std::size_t>(it - ids_.begin());
        }
        return std::nullopt;
      }
      auto it = std::lower_bound(vertices_.begin(), vertices_.end(), a,
                                 IdLess{});
      if (it != vertices_.end() && *it == a) {
        return static_cast<std::size_t>(it - vertices_.begin());
      }
      return std::nullopt;
    }

    std::size_t require_index(PInj const& a) const {
      auto i = index_of(a);
      if (!i) {
        throw Error("unknown vertex " + format(a));
      }
      return *i;
    }

    std::uint64_t hash() const {
      std::uint64_t h = detail::matrix_hash(adj_);
      for (auto const& v : vertices_) {
        h = (h ^ v.hash()) * 1099511628211ULL;
      }
      return h;
    }

    friend bool operator==(CommutingGraph const& a, CommutingGraph const& b) {
      return a.n_ == b.n_ && a.vertices_ == b.vertices_ && a.adj_ == b.adj_;
    }

    // Adjacency from a cache file (see graph_cache below).
    static CommutingGraph from_parts(std::size_t       n,
                                     std::vector<PInj> vertices,
                                     BitMatrix         adj,
                                     std::vector<PInj> center,
                                     CenterRule        rule) {
      CommutingGraph g;
      g.n_        = n;
      g.vertices_ = std::move(vertices);
      g.adj_      = std::move(adj);
      g.center_   = std::move(center);
      g.rule_     = rule;
      g.index_ids();
      return g;
    }

   private:
    void index_ids() {
      ids_.clear();
      if (n_ <= max_id_degree) {
        for (auto const& v : vertices_) {
          ids_.push_back(element_id(v));
        }
      }
    }

    void compute_rows(std::size_t threads) {
      auto const V = vertices_.size();
      std::vector<PartView> views;
      views.reserve(V);
      for (auto const& v : vertices_) {
        views.emplace_back(v);
      }
      // Row i is computed against j > i only and mirrored afterwards, so
      // threads write disjoint words.
      auto work = [&](std::size_t t, std::size_t nt) {
        for (std::size_t i = t; i < V; i += nt) {
          auto const& view = views[i];
          for (std::size_t j = i + 1; j < V; ++j) {
            if (view.commutes_with(vertices_[j])) {
              adj_.set(i, j);
            }
          }
        }
      };
      threads = std::max<std::size_t>(1, threads);
      if (threads == 1) {
        work(0, 1);
      } else {
        std::vector<std::thread> pool;
        for (std::size_t t = 0; t < threads; ++t) {
          pool.emplace_back(work, t, threads);
        }
        for (auto& th : pool) {
          th.join();
        }
      }
      for (std::size_t i = 0; i < V; ++i) {
        auto row = adj_.row(i);
        for (std::size_t w = (i + 1) >> 6; w < row.size(); ++w) {
          for (auto b = row[w]; b != 0; b &= b - 1) {
            auto j = w * 64 + static_cast<std::size_t>(std::countr_zero(b));
            if (j > i) {
              adj_.set(j, i);
            }
          }
        }
      }
    }

    std::size_t                n_ = 0;
    std::vector<PInj>          vertices_;
    std::vector<std::uint64_t> ids_;
    BitMatrix                  adj_;
    std::vector<PInj>          center_;
    CenterRule                 rule_ = CenterRule::explicit_set;
  };

  // 𝒢(J_r) for r < n, or 𝒢(I(n)) for r = n.
  inline CommutingGraph ideal_graph(std::size_t n, std::size_t r,
                                    std::size_t threads = 1) {
    if (r >= n) {
      return CommutingGraph::build(n, elements(n), CenterRule::full_monoid,
                                   {}, threads);
    }
    return CommutingGraph::build(n, elements(n, Filter::ideal(r)),
                                 CenterRule::ideal, {}, threads);
  }

  inline CommutingGraph full_graph(std::size_t n, std::size_t threads = 1) {
    return ideal_graph(n, n, threads);
  }

  ////////////////////////////////////////////////////////////////////////
  // Breadth-first search
  ////////////////////////////////////////////////////////////////////////

  // Distances from src by frontier bit sweeps; `unreachable` marks the
  // vertices of other components.
  inline std::vector<std::uint8_t> bfs_distances(BitMatrix const& adj,
                                                 std::size_t      src) {
    auto const                 V = adj.size();
    auto const                 W = adj.stride();
    std::vector<std::uint8_t>  dist(V, unreachable);
    std::vector<std::uint64_t> visited(W, 0), frontier(W, 0), next(W, 0);
    visited[src >> 6] |= std::uint64_t{1} << (src & 63);
    frontier[src >> 6] |= std::uint64_t{1} << (src & 63);
    dist[src]         = 0;
    std::uint8_t level = 0;
    while (true) {
      std::fill(next.begin(), next.end(), 0);
      for (std::size_t w = 0; w < W; ++w) {
        for (auto b = frontier[w]; b != 0; b &= b - 1) {
          auto v   = w * 64 + static_cast<std::size_t>(std::countr_zero(b));
          auto row = adj.row(v);
          for (std::size_t x = 0; x < W; ++x) {
            next[x] |= row[x];
          }
        }
      }
      bool any = false;
      ++level;
      for (std::size_t x = 0; x < W; ++x) {
        next[x] &= ~visited[x];
        visited[x] |= next[x];
        for (auto b = next[x]; b != 0; b &= b - 1) {
          dist[x * 64 + static_cast<std::size_t>(std::countr_zero(b))] = level;
          any = true;
        }
      }
      if (!any) {
        break;
      }
      std::swap(frontier, next);
    }
    return dist;
  }

  // Shortest path src .. dst read off a distance array from src.
  inline std::vector<std::size_t> path_from(BitMatrix const&                 adj,
                                            std::vector<std::uint8_t> const& dist,
                                            std::size_t                      dst) {
    if (dist[dst] == unreachable) {
      return {};
    }
    std::vector<std::size_t> path{dst};
    auto                     cur = dst;
    while (dist[cur] != 0) {
      auto row = adj.row(cur);
      bool moved = false;
      for (std::size_t w = 0; w < row.size() && !moved; ++w) {
        for (auto b = row[w]; b != 0; b &= b - 1) {
          auto u = w * 64 + static_cast<std::size_t>(std::countr_zero(b));
          if (dist[u] + 1 == dist[cur]) {
            cur   = u;
            moved = true;
            break;
          }
        }
      }
      path.push_back(cur);
    }
    std::reverse(path.begin(), path.end());
    return path;
  }

  inline DistanceResult distance(CommutingGraph const& g, PInj const& u,
                                 PInj const& v) {
    auto iu = g.require_index(u);
    auto iv = g.require_index(v);
    auto d  = bfs_distances(g.adjacency(), iu);
    DistanceResult r;
    if (d[iv] == unreachable) {
      return r;
    }
    r.value = d[iv];
    for (auto i : path_from(g.adjacency(), d, iv)) {
      r.path.push_back(g.vertex(i));
    }
    return r;
  }

  inline std::vector<std::vector<std::size_t>> components(
      CommutingGraph const& g) {
    std::vector<std::vector<std::size_t>> out;
    std::vector<char>                     seen(g.size(), 0);
    for (std::size_t s = 0; s < g.size(); ++s) {
      if (seen[s]) {
        continue;
      }
      auto                     d = bfs_distances(g.adjacency(), s);
      std::vector<std::size_t> comp;
      for (std::size_t v = 0; v < g.size(); ++v) {
        if (d[v] != unreachable) {
          seen[v] = 1;
          comp.push_back(v);
        }
      }
      out.push_back(std::move(comp));
    }
    return out;
  }

  namespace detail {
    inline DistanceResult diameter_over(CommutingGraph const&           g,
                                        std::vector<std::size_t> const& sources,
                                        std::size_t threads) {
      DistanceResult r;
      auto const     V = g.size();
      if (V < 2) {
        r.value = 0;
        return r;
      }
      struct Best {
        std::size_t ecc = 0, src = 0, dst = 0;
        bool        disconnected = false;
        std::size_t bad_src = 0, bad_dst = 0;
      };
      std::vector<Best> per(std::max<std::size_t>(1, threads));
      auto work = [&](std::size_t t, std::size_t nt) {
        auto& b = per[t];
        for (std::size_t k = t; k < sources.size(); k += nt) {
          auto s = sources[k];
          auto d = bfs_distances(g.adjacency(), s);
          for (std::size_t v = 0; v < V; ++v) {
            if (d[v] == unreachable) {
              if (!b.disconnected) {
                b.disconnected = true;
                b.bad_src      = s;
                b.bad_dst      = v;
              }
            } else if (d[v] > b.ecc
                       || (d[v] == b.ecc && b.ecc > 0
                           && std::make_pair(s, v)
                                  < std::make_pair(b.src, b.dst))) {
              b.ecc = d[v];
              b.src = s;
              b.dst = v;
            }
          }
        }
      };
      if (per.size() == 1) {
        work(0, 1);
      } else {
        std::vector<std::thread> pool;
        for (std::size_t t = 0; t < per.size(); ++t) {
          pool.emplace_back(work, t, per.size());
        }
        for (auto& th : pool) {
          th.join();
        }
      }
      Best best;
      for (auto const& b : per) {
        if (b.disconnected
            && (!best.disconnected
                || std::make_pair(b.bad_src, b.bad_dst)
                       < std::make_pair(best.bad_src, best.bad_dst))) {
          best.disconnected = true;
          best.bad_src      = b.bad_src;
          best.bad_dst      = b.bad_dst;
        }
        if (b.ecc > best.ecc
            || (b.ecc == best.ecc && b.ecc > 0
                && std::make_pair(b.src, b.dst)
                       < std::make_pair(best.src, best.dst))) {
          best.ecc = b.ecc;
          best.src = b.src;
          best.dst = b.dst;
        }
      }
      if (best.disconnected) {
        r.pair = std::make_pair(g.vertex(best.bad_src), g.vertex(best.bad_dst));
        return r;
      }
      r.value = best.ecc;
      r.pair  = std::make_pair(g.vertex(best.src), g.vertex(best.dst));
      auto d  = bfs_distances(g.adjacency(), best.src);
      for (auto i : path_from(g.adjacency(), d, best.dst)) {
        r.path.push_back(g.vertex(i));
      }
      return r;
    }
  }  // namespace detail

  // Exact diameter from a BFS at every vertex.
  inline DistanceResult diameter_full(CommutingGraph const& g,
                                      std::size_t           threads = 1) {
    std::vector<std::size_t> all(g.size());
    for (std::size_t i = 0; i < all.size(); ++i) {
      all[i] = i;
    }
    return detail::diameter_over(g, all, threads);
  }

  // True iff conjugating any vertex by a permutation gives a vertex, so
  // that conjugation acts on the graph by automorphisms.
  inline bool conjugation_closed(CommutingGraph const& g) {
    auto const n = g.degree();
    if (n < 2) {
      return true;
    }
    std::vector<int> t(n), c(n);
    for (std::size_t x = 0; x < n; ++x) {
      t[x] = static_cast<int>(x);
      c[x] = static_cast<int>((x + 1) % n);
    }
    std::swap(t[0], t[1]);
    auto s1 = PInj::from_images(std::span<int const>(t));
    auto s2 = PInj::from_images(std::span<int const>(c));
    for (auto const& v : g.vertices()) {
      if (!g.index_of(conjugate(v, s1)) || !g.index_of(conjugate(v, s2))) {
        return false;
      }
    }
    return true;
  }

  // Indices of one vertex per conjugacy class (the canonical one).
  inline std::vector<std::size_t> orbit_representatives(
      CommutingGraph const& g) {
    std::vector<std::size_t> reps;
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (canonical_conjugate(g.vertex(i)).rep == g.vertex(i)) {
        reps.push_back(i);
      }
    }
    return reps;
  }

  // Exact diameter using that every vertex's eccentricity equals that of
  // its conjugacy-class representative.  Requires a conjugation-closed
  // vertex set; falls back to the full sweep otherwise.
  inline DistanceResult diameter(CommutingGraph const& g,
                                 std::size_t           threads = 1) {
    if (!conjugation_closed(g)) {
      return diameter_full(g, threads);
    }
    return detail::diameter_over(g, orbit_representatives(g), threads);
  }

  // d(u, v) for every pair by BFS from the class representatives only.
  class DistanceTable {
   public:
    explicit DistanceTable(CommutingGraph const& g) : g_(&g) {
      if (!conjugation_closed(g)) {
        throw Error("DistanceTable needs a conjugation-closed vertex set");
      }
      for (auto r : orbit_representatives(g)) {
        dist_.emplace(r, bfs_distances(g.adjacency(), r));
      }
    }

    // nullopt for infinite distance.
    std::optional<std::size_t> operator()(PInj const& u, PInj const& v) const {
      auto cf = canonical_conjugate(u);
      auto r  = g_->require_index(cf.rep);
      auto w  = g_->require_index(conjugate(v, cf.conjugator));
      auto d  = dist_.at(r)[w];
      if (d == unreachable) {
        return std::nullopt;
      }
      return d;
    }

   private:
    CommutingGraph const*                                  g_;
    std::map<std::size_t, std::vector<std::uint8_t>>       dist_;
  };

  ////////////////////////////////////////////////////////////////////////
  // Cliques
  ////////////////////////////////////////////////////////////////////////

  inline constexpr std::size_t max_clique_enumeration_vertices = 2500;

  struct GraphCliques {
    std::size_t                    size = 0;
    std::vector<std::vector<PInj>> cliques;
  };

  inline GraphCliques to_elements(CommutingGraph const& g,
                                  CliqueResult const&   r) {
    GraphCliques out;
    out.size = r.size;
    for (auto const& c : r.cliques) {
      std::vector<PInj> els;
      for (auto i : c) {
        els.push_back(g.vertex(i));
      }
      out.cliques.push_back(std::move(els));
    }
    return out;
  }

  inline GraphCliques clique_number(CommutingGraph const& g,
                                    CliqueOptions         opt = {}) {
    opt.all = false;
    return to_elements(g, maximum_cliques(g.adjacency(), opt));
  }

  // All maximum cliques.  Guarded to |V| <= 2500 unless `force`.
  inline GraphCliques all_maximum_cliques(CommutingGraph const& g,
                                          CliqueOptions         opt   = {},
                                          bool                  force = false) {
    if (!force && g.size() > max_clique_enumeration_vertices) {
      throw GuardError("maximum clique enumeration is limited to "
                       + std::to_string(max_clique_enumeration_vertices)
                       + " vertices (graph has "
                       + std::to_string(g.size()) + "); use --force");
    }
    opt.all = true;
    return to_elements(g, maximum_cliques(g.adjacency(), opt));
  }

  ////////////////////////////////////////////////////////////////////////
  // Export and cache
  ////////////////////////////////////////////////////////////////////////

  inline std::string to_dot(CommutingGraph const& g) {
    std::ostringstream os;
    os << "graph G {\n";
    for (std::size_t i = 0; i < g.size(); ++i) {
      os << "  v" << i << " [label=\"" << format(g.vertex(i)) << "\"];\n";
    }
    for (std::size_t i = 0; i < g.size(); ++i) {
      for (std::size_t j = i + 1; j < g.size(); ++j) {
        if (g.edge(i, j)) {
          os << "  v" << i << " -- v" << j << ";\n";
        }
      }
    }
    os << "}\n";
    return os.str();
  }

  // One line per edge: both endpoints in canonical text, quoted.
  inline std::string to_edge_csv(CommutingGraph const& g) {
    std::ostringstream os;
    for (std::size_t i = 0; i < g.size(); ++i) {
      for (std::size_t j = i + 1; j < g.size(); ++j) {
        if (g.edge(i, j)) {
          os << '"' << format(g.vertex(i)) << "\",\"" << format(g.vertex(j))
             << "\"\n";
        }
      }
    }
    return os.str();
  }

  inline constexpr std::uint8_t cache_format_version = 1;

  namespace detail {
    inline std::uint64_t fnv1a(std::string_view bytes) {
      std::uint64_t h = 1469598103934665603ULL;
      for (unsigned char c : bytes) {
        h = (h ^ c) * 1099511628211ULL;
      }
      return h;
    }

    inline void put_le(std::string& out, std::uint64_t v, std::size_t bytes) {
      for (std::size_t i = 0; i < bytes; ++i) {
        out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
      }
    }

    inline std::uint64_t get_le(std::string_view in, std::size_t& pos,
                                std::size_t bytes) {
      if (pos + bytes > in.size()) {
        throw Error("graph cache truncated");
      }
      std::uint64_t v = 0;
      for (std::size_t i = 0; i < bytes; ++i) {
        v |= std::uint64_t{static_cast<unsigned char>(in[pos + i])} << (8 * i);
      }
      pos += bytes;
      return v;
    }
  }  // namespace detail

  // "ICGR", version, n (u16), vertex count (u64), vertex IDs (u64 each),
  // adjacency rows padded to 64 bits (u64 words), all little-endian,
  // followed by an FNV-1a-64 checksum of everything before it.
  inline std::string to_cache_bytes(CommutingGraph const& g) {
    if (g.degree() > max_id_degree) {
      throw Error("graph cache needs element IDs (n <= 18)");
    }
    std::string out = "ICGR";
    out.push_back(static_cast<char>(cache_format_version));
    detail::put_le(out, g.degree(), 2);
    detail::put_le(out, g.size(), 8);
    for (auto const& v : g.vertices()) {
      detail::put_le(out, element_id(v), 8);
    }
    for (auto w : g.adjacency().data()) {
      detail::put_le(out, w, 8);
    }
    detail::put_le(out, detail::fnv1a(out), 8);
    return out;
  }

  inline CommutingGraph from_cache_bytes(std::string_view in,
                                         CenterRule rule = CenterRule::explicit_set,
                                         std::vector<PInj> center = {}) {
    if (in.size() < 4 + 1 + 2 + 8 + 8 || in.substr(0, 4) != "ICGR") {
      throw Error("not a graph cache (bad magic)");
    }
    auto body = in.substr(0, in.size() - 8);
    std::size_t tail = in.size() - 8;
    if (detail::get_le(in, tail, 8) != detail::fnv1a(body)) {
      throw Error("graph cache checksum mismatch");
    }
    std::size_t pos = 4;
    auto version    = static_cast<std::uint8_t>(in[pos++]);
    if (version != cache_format_version) {
      throw Error("graph cache version " + std::to_string(version)
                  + " is not supported (expected "
                  + std::to_string(cache_format_version) + ")");
    }
    auto n = detail::get_le(body, pos, 2);
    auto V = detail::get_le(body, pos, 8);
    if (n > max_id_degree) {
      throw Error("graph cache: degree out of range");
    }
    std::vector<PInj> vertices;
    vertices.reserve(V);
    for (std::uint64_t i = 0; i < V; ++i) {
      vertices.push_back(element_from_id(n, detail::get_le(body, pos, 8)));
    }
    BitMatrix adj(V);
    for (auto& w : adj.data()) {
      w = detail::get_le(body, pos, 8);
    }
    if (pos != body.size()) {
      throw Error("graph cache has trailing bytes");
    }
    return CommutingGraph::from_parts(n, std::move(vertices), std::move(adj),
                                      std::move(center), rule);
  }

  inline void save_cache(CommutingGraph const& g, std::string const& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
      throw Error("cannot write " + path);
    }
    auto bytes = to_cache_bytes(g);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) {
      throw Error("write failed: " + path);
    }
  }

  inline CommutingGraph load_cache(std::string const& path,
                                   CenterRule rule = CenterRule::explicit_set,
                                   std::vector<PInj> center = {}) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
      throw Error("cannot read " + path);
    }
    std::string bytes((std::istreambuf_iterator<char>(in)),
                      std::istreambuf_iterator<char>());
    return from_cache_bytes(bytes, rule, std::move(center));
  }

  // File name keyed by (n, filter, center rule, format version).
  inline std::string cache_file_name(std::size_t n, Filter f, CenterRule c) {
    return "icgr-n" + std::to_string(n) + "-" + f.name() + "-" + to_string(c)
           + "-v" + std::to_string(cache_format_version) + ".bin";
  }

  ////////////////////////////////////////////////////////////////////////
  // Implicit graphs (no stored adjacency)
  ////////////////////////////////////////////////////////////////////////

  // Neighbours of a in 𝒢 of the filtered I(n) with center removed.  Uses
  // the cycle-matching centralizer for permutations, a scan otherwise.
  inline std::vector<PInj> implicit_neighbors(PInj const&              a,
                                              Filter                   f,
                                              std::vector<PInj> const& center) {
    std::vector<PInj> out;
    auto keep = [&](PInj const& b) {
      if (b != a && f.accepts(b)
          && std::find(center.begin(), center.end(), b) == center.end()) {
        out.push_back(b);
      }
    };
    if (a.is_permutation()) {
      for_each_in_permutation_centralizer(a, keep);
    } else {
      PartView view(a);
      Enumerator e(a.degree(), f);
      while (auto b = e.next()) {
        if (view.commutes_with(*b)) {
          keep(*b);
        }
      }
    }
    return out;
  }

  // BFS distance without a stored graph, up to max_depth (nullopt when
  // the target is not reached within it).
  inline std::optional<std::size_t> implicit_distance(
      PInj const& u, PInj const& v, Filter f, std::vector<PInj> const& center,
      std::size_t max_depth, std::size_t max_visited = 2'000'000) {
    if (u == v) {
      return 0;
    }
    std::unordered_set<PInj> seen{u};
    std::vector<PInj>        frontier{u};
    for (std::size_t depth = 1; depth <= max_depth; ++depth) {
      std::vector<PInj> next;
      for (auto const& x : frontier) {
        for (auto const& y : implicit_neighbors(x, f, center)) {
          if (y == v) {
            return depth;
          }
          if (seen.insert(y).second) {
            next.push_back(y);
            if (seen.size() > max_visited) {
              throw BudgetExceeded("implicit BFS visited more than "
                                   + std::to_string(max_visited)
                                   + " elements");
            }
          }
        }
      }
      if (next.empty()) {
        return std::nullopt;
      }
      frontier = std::move(next);
    }
    return std::nullopt;
  }

}  // namespace symi
