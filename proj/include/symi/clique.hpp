#pragma once

// Exact maximum clique search on a packed adjacency matrix.  Bit-parallel
// branch and bound with greedy colouring bounds (San Segundo's BBMC).  The
// top level is split into one subproblem per root vertex on the induced
// neighbourhood of that root, which keeps the bitsets short and lets the
// roots run on several threads against a shared incumbent.

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <cstdint>
#include <fstream>
#include <functional>
#include <mutex>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "bits.hpp"
#include "error.hpp"
#include "json.hpp"

namespace symi {

  struct CliqueOptions {
    // Enumerate every maximum clique rather than stopping at one.
    bool        all             = false;
    std::size_t threads         = 1;
    // Zero means no limit.
    double      budget_seconds  = 0;
    // Root subproblems completed in an earlier interrupted run are read
    // from and written to this file when it is set.
    std::string checkpoint_path = {};
  };

  struct CliqueResult {
    std::size_t                           size = 0;
    // Sorted vertex lists, sorted lexicographically.
    std::vector<std::vector<std::size_t>> cliques;
    std::uint64_t                         nodes = 0;
  };

  namespace detail {

    inline std::uint64_t matrix_hash(BitMatrix const& m) {
      std::uint64_t h = 1469598103934665603ULL ^ m.size();
      for (auto w : m.data()) {
        h = (h ^ w) * 1099511628211ULL;
        h ^= h >> 29;
      }
      return h;
    }

    // BBMC on a small dense matrix whose vertices are already in the
    // preferred order.  Reports cliques through `found` with the vertices
    // in `stack`.
    class Bbmc {
     public:
      Bbmc(BitMatrix const&            m,
           std::atomic<std::size_t>&   best,
           bool                        all,
           std::function<void(std::vector<std::size_t> const&)> found,
           std::function<bool()>       stop)
          : m_(m),
            best_(best),
            all_(all),
            found_(std::move(found)),
            stop_(std::move(stop)),
            words_(m.stride()) {}

      // stack holds the vertices chosen outside this matrix (e.g. the
      // root); they count towards the clique size.
      void run(std::vector<std::size_t> prefix) {
        prefix_size_ = prefix.size();
        base_        = std::move(prefix);
        std::vector<std::uint64_t> P(words_, 0);
        for (std::size_t v = 0; v < m_.size(); ++v) {
          P[v >> 6] |= std::uint64_t{1} << (v & 63);
        }
        if (m_.size() == 0) {
          report();
          return;
        }
        expand(P);
      }

      std::uint64_t nodes() const noexcept {
        return nodes_;
      }

     private:
      std::size_t depth() const noexcept {
        return prefix_size_ + stack_.size();
      }

      void report() {
        std::vector<std::size_t> c = base_;
        c.insert(c.end(), stack_.begin(), stack_.end());
        found_(c);
      }

      // Smallest colour that can still matter for a clique of size
      // depth() + colour.
      std::size_t kmin() const noexcept {
        auto b = best_.load(std::memory_order_relaxed);
        auto d = depth();
        if (all_) {
          return b > d ? b - d : 1;
        }
        return b + 1 > d ? b + 1 - d : 1;
      }

      void expand(std::vector<std::uint64_t>& P) {
        if ((++nodes_ & 0xFFF) == 0 && stop_()) {
          throw BudgetExceeded("clique search budget exceeded");
        }
        std::vector<std::uint32_t> order;
        std::vector<std::uint32_t> color;
        colour_sort(P, order, color);
        for (std::size_t i = order.size(); i-- > 0;) {
          if (color[i] < kmin()) {
            return;
          }
          auto v = order[i];
          stack_.push_back(v);
          std::vector<std::uint64_t> NP(words_);
          auto                       row = m_.row(v);
          bool                       any = false;
          for (std::size_t w = 0; w < words_; ++w) {
            NP[w] = P[w] & row[w];
            any   = any || NP[w] != 0;
          }
          if (!any) {
            report();
          } else {
            expand(NP);
          }
          stack_.pop_back();
          P[v >> 6] &= ~(std::uint64_t{1} << (v & 63));
        }
      }

      // Greedy sequential colouring by independent sets in vertex order.
      // Only vertices whose colour reaches kmin() are listed.
      void colour_sort(std::vector<std::uint64_t> const& P,
                       std::vector<std::uint32_t>&       order,
                       std::vector<std::uint32_t>&       color) {
        auto                       km = kmin();
        std::vector<std::uint64_t> U  = P;
        std::vector<std::uint64_t> Q(words_);
        std::uint32_t              k  = 0;
        std::size_t                lo = 0;
        auto nonempty = [&](std::vector<std::uint64_t> const& S) {
          while (lo < words_ && U[lo] == 0) {
            ++lo;
          }
          for (std::size_t w = lo; w < words_; ++w) {
            if (S[w] != 0) {
              return true;
            }
          }
          return false;
        };
        while (nonempty(U)) {
          ++k;
          std::copy(U.begin(), U.end(), Q.begin());
          for (std::size_t w = lo; w < words_; ++w) {
            while (Q[w] != 0) {
              auto b = static_cast<std::size_t>(std::countr_zero(Q[w]));
              auto v = w * 64 + b;
              U[w] &= ~(std::uint64_t{1} << b);
              Q[w] &= ~(std::uint64_t{1} << b);
              auto row = m_.row(v);
              for (std::size_t x = w; x < words_; ++x) {
                Q[x] &= ~row[x];
              }
              if (k >= km) {
                order.push_back(static_cast<std::uint32_t>(v));
                color.push_back(k);
              }
            }
          }
        }
      }

      BitMatrix const&                                       m_;
      std::atomic<std::size_t>&                              best_;
      bool                                                   all_;
      std::function<void(std::vector<std::size_t> const&)> found_;
      std::function<bool()>                                  stop_;
      std::size_t                                            words_;
      std::size_t                                            prefix_size_ = 0;
      std::vector<std::size_t>                               base_;
      std::vector<std::size_t>                               stack_;
      std::uint64_t                                          nodes_ = 0;
    };

    // Greedy clique by repeatedly taking the highest-degree candidate.
    inline std::vector<std::size_t> greedy_clique(BitMatrix const& m) {
      std::vector<std::size_t> deg(m.size());
      for (std::size_t v = 0; v < m.size(); ++v) {
        deg[v] = m.row_count(v);
      }
      Bitset cand(m.size());
      for (std::size_t v = 0; v < m.size(); ++v) {
        cand.set(v);
      }
      std::vector<std::size_t> clique;
      while (cand.any()) {
        std::size_t best = 0, best_deg = 0;
        bool        have = false;
        cand.for_each([&](std::size_t v) {
          if (!have || deg[v] > best_deg) {
            best = v, best_deg = deg[v], have = true;
          }
        });
        clique.push_back(best);
        auto row = m.row(best);
        auto w   = cand.words();
        for (std::size_t i = 0; i < w.size(); ++i) {
          w[i] &= row[i];
        }
      }
      std::sort(clique.begin(), clique.end());
      return clique;
    }

  }  // namespace detail

  // Maximum clique(s) of the graph with adjacency m (symmetric,
  // irreflexive).  Throws BudgetExceeded if the budget runs out; with a
  // checkpoint path, finished roots are saved and skipped on the next call.
  inline CliqueResult maximum_cliques(BitMatrix const&     m,
                                      CliqueOptions const& opt = {}) {
    using clock     = std::chrono::steady_clock;
    auto const V    = m.size();
    auto const t0   = clock::now();
    auto const hash = detail::matrix_hash(m);

    CliqueResult result;
    if (V == 0) {
      result.cliques.push_back({});
      return result;
    }

    // Root order: ascending degree, so each root's subproblem (later
    // roots only) is a high-degree neighbourhood with few candidates.
    std::vector<std::size_t> deg(V);
    for (std::size_t v = 0; v < V; ++v) {
      deg[v] = m.row_count(v);
    }
    std::vector<std::size_t> order(V);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) {
      return deg[a] < deg[b];
    });
    std::vector<std::size_t> pos(V);
    for (std::size_t i = 0; i < V; ++i) {
      pos[order[i]] = i;
    }

    std::atomic<std::size_t>             best{0};
    std::mutex                           mu;
    std::set<std::vector<std::size_t>>   found;
    std::vector<char>                    done(V, 0);
    std::uint64_t                        nodes = 0;

    auto record = [&](std::vector<std::size_t> c) {
      std::sort(c.begin(), c.end());
      std::lock_guard lock(mu);
      auto cur = best.load();
      if (c.size() > cur) {
        best.store(c.size());
        found.clear();
        found.insert(std::move(c));
      } else if (c.size() == cur && (opt.all || found.empty())) {
        found.insert(std::move(c));
      }
    };

    if (!opt.checkpoint_path.empty()) {
      std::ifstream in(opt.checkpoint_path);
      if (in) {
        auto j = nlohmann::json::parse(in);
        if (j.at("hash").get<std::uint64_t>() != hash
            || j.at("all").get<bool>() != opt.all) {
          throw Error("clique checkpoint belongs to a different search");
        }
        for (auto r : j.at("done").get<std::vector<std::size_t>>()) {
          done[r] = 1;
        }
        best.store(j.at("best").get<std::size_t>());
        for (auto const& c :
             j.at("cliques").get<std::vector<std::vector<std::size_t>>>()) {
          found.insert(c);
        }
        nodes = j.at("nodes").get<std::uint64_t>();
      }
    }
    if (best.load() == 0) {
      auto g = detail::greedy_clique(m);
      // A lower bound only; the clique itself is found again by the search.
      best.store(opt.all ? g.size() : g.size() - 1);
    }

    std::atomic<bool> stop{false};
    auto              out_of_time = [&] {
      if (stop.load(std::memory_order_relaxed)) {
        return true;
      }
      if (opt.budget_seconds > 0
          && std::chrono::duration<double>(clock::now() - t0).count()
                 > opt.budget_seconds) {
        stop.store(true);
        return true;
      }
      return false;
    };

    auto solve_root = [&](std::size_t i) -> std::uint64_t {
      auto const v = order[i];
      // Candidates: neighbours of v later in the root order.
      std::vector<std::size_t> cand;
      auto                     row = m.row(v);
      for (std::size_t w = 0; w < row.size(); ++w) {
        for (auto b = row[w]; b != 0; b &= b - 1) {
          auto u = w * 64 + static_cast<std::size_t>(std::countr_zero(b));
          if (pos[u] > i) {
            cand.push_back(u);
          }
        }
      }
      auto need = best.load();
      if (cand.size() + 1 < need + (opt.all ? 0 : 1)) {
        return 0;
      }
      // Induced subgraph, highest degree first (within the subgraph).
      std::vector<std::size_t> sub_deg(cand.size(), 0);
      for (std::size_t a = 0; a < cand.size(); ++a) {
        for (std::size_t b = a + 1; b < cand.size(); ++b) {
          if (m.test(cand[a], cand[b])) {
            ++sub_deg[a];
            ++sub_deg[b];
          }
        }
      }
      std::vector<std::size_t> idx(cand.size());
      std::iota(idx.begin(), idx.end(), 0);
      std::stable_sort(idx.begin(), idx.end(), [&](auto a, auto b) {
        return sub_deg[a] > sub_deg[b];
      });
      BitMatrix sub(cand.size());
      for (std::size_t a = 0; a < idx.size(); ++a) {
        for (std::size_t b = a + 1; b < idx.size(); ++b) {
          if (m.test(cand[idx[a]], cand[idx[b]])) {
            sub.set(a, b);
            sub.set(b, a);
          }
        }
      }
      detail::Bbmc bb(
          sub, best, opt.all,
          [&](std::vector<std::size_t> const& c) {
            std::vector<std::size_t> mapped;
            mapped.push_back(c[0]);
            for (std::size_t k = 1; k < c.size(); ++k) {
              mapped.push_back(cand[idx[c[k]]]);
            }
            record(std::move(mapped));
          },
          out_of_time);
      bb.run({v});
      return bb.nodes();
    };

    std::atomic<std::size_t> next{0};
    std::exception_ptr       failure;
    auto                     worker = [&] {
      while (true) {
        if (out_of_time()) {
          return;
        }
        auto k = next.fetch_add(1);
        if (k >= V) {
          return;
        }
        auto i = V - 1 - k;  // high-degree roots first
        if (done[i]) {
          continue;
        }
        try {
          auto nn = solve_root(i);
          std::lock_guard lock(mu);
          nodes += nn;
          done[i] = 1;
        } catch (BudgetExceeded const&) {
          return;
        } catch (...) {
          std::lock_guard lock(mu);
          failure = std::current_exception();
          stop.store(true);
          return;
        }
      }
    };
    auto nthreads = std::max<std::size_t>(1, opt.threads);
    if (nthreads == 1) {
      worker();
    } else {
      std::vector<std::thread> pool;
      for (std::size_t t = 0; t < nthreads; ++t) {
        pool.emplace_back(worker);
      }
      for (auto& t : pool) {
        t.join();
      }
    }
    if (failure) {
      std::rethrow_exception(failure);
    }

    bool complete = std::all_of(done.begin(), done.end(),
                                [](char c) { return c != 0; });
    if (!opt.checkpoint_path.empty()) {
      nlohmann::json j;
      j["hash"]  = hash;
      j["all"]   = opt.all;
      j["best"]  = best.load();
      j["nodes"] = nodes;
      std::vector<std::size_t> d;
      for (std::size_t i = 0; i < V; ++i) {
        if (done[i]) {
          d.push_back(i);
        }
      }
      j["done"]    = d;
      j["cliques"] = std::vector<std::vector<std::size_t>>(found.begin(),
                                                           found.end());
      std::ofstream(opt.checkpoint_path) << j.dump();
    }
    if (!complete) {
      throw BudgetExceeded("clique search budget exceeded after "
                           + std::to_string(std::count(done.begin(),
                                                       done.end(), 1))
                           + " of " + std::to_string(V) + " roots");
    }
    result.size    = best.load();
    result.nodes   = nodes;
    for (auto const& c : found) {
      if (c.size() == result.size) {
        result.cliques.push_back(c);
      }
    }
    if (!opt.all && result.cliques.size() > 1) {
      result.cliques.resize(1);
    }
    return result;
  }

}  // namespace symi
