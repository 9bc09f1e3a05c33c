#pragma once

// Verification suites: each runs a fixed list of checks and records the
// expected value, where it comes from, what was computed and how long it
// took.  The CLI and the acceptance runner both go through run_suite.

#include <chrono>
#include <filesystem>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "symi/construct.hpp"
#include "symi/graph.hpp"
#include "symi/witnesses.hpp"

namespace symi {

  using ojson = nlohmann::ordered_json;

  // Where an expected value comes from: a published table or statement,
  // a fact immediate from the definitions, or an oracle run in-process.
  enum class Provenance { published, trivial, derived };

  inline char const* to_string(Provenance p) noexcept {
    switch (p) {
      case Provenance::published: return "published";
      case Provenance::trivial: return "trivial";
      case Provenance::derived: return "derived";
    }
    return "?";
  }

  struct Check {
    std::string claim;
    std::string anchor;
    ojson       expected;
    Provenance  provenance = Provenance::derived;
    ojson       computed;
    bool        pass = false;
    double      ms   = 0;
  };

  struct SuiteReport {
    std::string        suite;
    ojson              params = ojson::object();
    std::vector<Check> checks;

    bool pass() const {
      return std::all_of(checks.begin(), checks.end(),
                         [](Check const& c) { return c.pass; });
    }

    ojson to_json(bool timings = true) const {
      ojson j;
      j["suite"]  = suite;
      j["params"] = params;
      j["checks"] = ojson::array();
      for (auto const& c : checks) {
        ojson r;
        r["claim"]    = c.claim;
        r["anchor"]   = c.anchor;
        r["expected"] = {{"value", c.expected},
                         {"provenance", to_string(c.provenance)}};
        r["computed"] = c.computed;
        r["pass"]     = c.pass;
        r["ms"]       = timings ? c.ms : 0.0;
        j["checks"].push_back(std::move(r));
      }
      j["pass"] = pass();
      return j;
    }

    std::string table() const {
      std::ostringstream os;
      os << "suite " << suite << " " << params.dump() << "\n";
      for (auto const& c : checks) {
        os << (c.pass ? "  ok   " : "  FAIL ") << c.claim << "\n"
           << "         expected " << c.expected.dump() << " ("
           << to_string(c.provenance) << "; " << c.anchor << ")\n"
           << "         computed " << c.computed.dump() << "  ["
           << static_cast<long long>(c.ms) << " ms]\n";
      }
      os << (pass() ? "PASS" : "FAIL") << " " << suite << " ("
         << checks.size() << " checks)\n";
      return os.str();
    }
  };

  struct SuiteParams {
    std::optional<std::size_t> n;
    std::optional<std::size_t> ideal;
    std::optional<std::size_t> max_n;
    std::size_t                threads        = 1;
    double                     budget_seconds = 0;
    bool                       force          = false;
    std::string                cache_dir;
    std::optional<std::size_t> samples;
    std::uint64_t              seed    = 1;
  };

  inline constexpr std::size_t max_full_graph_degree = 6;

  namespace detail {

    inline ojson big_json(BigInt const& v) {
      if (v <= BigInt(std::numeric_limits<std::uint64_t>::max())) {
        return static_cast<std::uint64_t>(v);
      }
      return v.str();
    }

    inline ojson distance_json(std::optional<std::size_t> d) {
      if (!d) {
        return "infinite";
      }
      return *d;
    }

    inline ojson formatted(std::vector<PInj> const& v) {
      auto j = ojson::array();
      for (auto const& a : v) {
        j.push_back(format(a));
      }
      return j;
    }

    class Recorder {
     public:
      explicit Recorder(SuiteReport& r) : r_(r) {}

      void operator()(std::string claim, std::string anchor, ojson expected,
                      Provenance p, std::function<ojson()> const& compute) {
        auto  t0 = std::chrono::steady_clock::now();
        Check c;
        c.claim      = std::move(claim);
        c.anchor     = std::move(anchor);
        c.expected   = std::move(expected);
        c.provenance = p;
        c.computed   = compute();
        c.ms = std::chrono::duration<double, std::milli>(
                   std::chrono::steady_clock::now() - t0)
                   .count();
        c.pass = c.computed == c.expected;
        r_.checks.push_back(std::move(c));
      }

     private:
      SuiteReport& r_;
    };

    inline void guard(bool ok, SuiteParams const& p, std::string const& what) {
      if (!ok && !p.force) {
        throw GuardError(what + " (use --force to override)");
      }
    }

    inline std::vector<std::size_t> degrees(SuiteParams const& p,
                                            std::size_t lo, std::size_t hi) {
      if (p.n) {
        return {*p.n};
      }
      std::vector<std::size_t> out;
      for (auto n = lo; n <= p.max_n.value_or(hi); ++n) {
        out.push_back(n);
      }
      return out;
    }

    inline std::vector<PInj> standard_center(std::size_t n, CenterRule rule) {
      switch (rule) {
        case CenterRule::full_monoid:
          return {PInj::zero(n), PInj::identity(n)};
        case CenterRule::ideal: return {PInj::zero(n)};
        case CenterRule::group: return {PInj::identity(n)};
        case CenterRule::explicit_set: return {};
      }
      return {};
    }
  }  // namespace detail

  // 𝒢(J_r), or 𝒢(I(n)) for r >= n, read from the cache directory when a
  // file for it exists and written there otherwise.
  inline CommutingGraph cached_ideal_graph(std::size_t n, std::size_t r,
                                           std::string const& cache_dir,
                                           std::size_t threads = 1,
                                           bool*       loaded  = nullptr) {
    if (loaded) {
      *loaded = false;
    }
    if (cache_dir.empty()) {
      return ideal_graph(n, r, threads);
    }
    auto f    = r >= n ? Filter::all() : Filter::ideal(r);
    auto rule = r >= n ? CenterRule::full_monoid : CenterRule::ideal;
    auto path = std::filesystem::path(cache_dir) / cache_file_name(n, f, rule);
    if (std::filesystem::exists(path)) {
      if (loaded) {
        *loaded = true;
      }
      return load_cache(path.string(), rule, detail::standard_center(n, rule));
    }
    std::filesystem::create_directories(cache_dir);
    auto g = ideal_graph(n, r, threads);
    save_cache(g, path.string());
    return g;
  }

  ////////////////////////////////////////////////////////////////////////
  // Suites
  ////////////////////////////////////////////////////////////////////////

  namespace suites {

    using detail::Recorder;
    constexpr auto published = Provenance::published;
    constexpr auto trivial   = Provenance::trivial;
    constexpr auto derived   = Provenance::derived;

    inline void lambda(SuiteParams const& p, SuiteReport& rep) {
      static constexpr std::uint64_t table[] = {0,  0,   2,   3,   7,   13,
                                                34, 73,  209, 501, 1546, 4051};
      auto max_n = p.max_n.value_or(11);
      detail::guard(max_n <= 500, p, "lambda suite supports --max-n <= 500");
      rep.params["max_n"] = max_n;
      Recorder check(rep);
      for (std::size_t n = 2; n <= max_n; ++n) {
        auto ns = std::to_string(n);
        if (n <= 11) {
          check("lambda_" + ns + " by the closed form", "lambda table",
                table[n], published,
                [&] { return detail::big_json(symi::lambda(n)); });
          check("lambda_" + ns + " by the recurrence", "lambda table",
                table[n], published,
                [&] { return detail::big_json(lambda_recurrence(n)); });
        } else {
          check("lambda_" + ns + " closed form equals recurrence",
                "lambda recurrence",
                detail::big_json(lambda_recurrence(n)), derived,
                [&] { return detail::big_json(symi::lambda(n)); });
        }
      }
    }

    inline void balanced_null(SuiteParams const& p, SuiteReport& rep) {
      auto n = p.n.value_or(4);
      detail::guard(n >= 2 && n <= 12, p,
                    "balanced-null suite supports 2 <= n <= 12");
      rep.params["n"] = n;
      auto m          = balanced_split(n);
      auto K          = PointSet::full(m);
      auto L          = PointSet::full(n) - K;
      Recorder check(rep);
      if (n == 4) {
        std::vector<PInj> shown;
        for (auto const* s : {"0", "[1 3]", "[1 4]", "[2 3]", "[2 4]",
                              "[1 3]|[2 4]", "[1 4]|[2 3]"}) {
          shown.push_back(parse(s, 4));
        }
        sort_by_id(shown);
        check("S_{K,L} for K = {1,2}, L = {3,4}, element for element",
              "balanced null example", detail::formatted(shown), published,
              [&] {
                return detail::formatted(
                    symi::balanced_null(4, K, L).elements());
              });
      }
      check("order of a balanced null semigroup equals lambda_n",
            "balanced null order", detail::big_json(symi::lambda(n)),
            published, [&] {
              return ojson(symi::balanced_null(n, K, L).size());
            });
      check("S_{K,L} is a null semigroup", "balanced null definition", true,
            trivial, [&] {
              return ojson(
                  classify_semigroup(symi::balanced_null(n, K, L)).null);
            });
    }

    inline void extremal(SuiteParams const& p, SuiteReport& rep) {
      // Order and number of commutative nilpotent subsemigroups of maximum
      // order, from the published table for 4 <= n <= 7.
      static std::map<std::size_t, std::pair<std::size_t, std::size_t>> const
          table{{4, {7, 6}}, {5, {13, 20}}, {6, {34, 20}}, {7, {73, 70}}};
      auto ns = detail::degrees(p, 3, 6);
      rep.params["n"] = ns;
      Recorder check(rep);
      for (auto n : ns) {
        detail::guard(n >= 3 && n <= max_extremal_degree, p,
                      "extremal search is limited to 3 <= n <= "
                          + std::to_string(max_extremal_degree));
        CliqueOptions opt;
        opt.threads        = p.threads;
        opt.budget_seconds = p.budget_seconds;
        auto r   = max_commutative_nilpotent(n, opt, p.force);
        auto tag = "n=" + std::to_string(n) + ": ";
        check(tag + "maximum order equals lambda_n", "lambda_n formula",
              detail::big_json(symi::lambda(n)), published,
              [&] { return ojson(r.max_order); });
        if (auto it = table.find(n); it != table.end()) {
          check(tag + "maximum order", "extremal table", it->second.first,
                published, [&] { return ojson(r.max_order); });
          check(tag + "number of subsemigroups of maximum order",
                "extremal table", it->second.second, published,
                [&] { return ojson(r.num_max); });
        }
        // Every witness is balanced null; at n = 3 the cyclic ones are
        // also allowed.
        check(tag + "every witness is balanced null"
                  + (n == 3 ? " or cyclic" : ""),
              "uniqueness of balanced null semigroups", true, published, [&] {
                bool ok = true;
                for (auto const& S : r.witnesses) {
                  auto s = witness_shape(S);
                  ok     = ok
                       && (s == WitnessShape::balanced_null
                           || (n == 3 && s == WitnessShape::cyclic));
                }
                return ojson(ok);
              });
        check(tag + "structure bound holds for every witness",
              "bound on |A_c| and |B_c|", true, derived, [&] {
                bool ok = true;
                for (auto const& S : r.witnesses) {
                  ok = ok && structure_bound_holds(nilpotent_analysis(S), n);
                }
                return ojson(ok);
              });
      }
    }

    inline void clique(SuiteParams const& p, SuiteReport& rep) {
      auto ns = detail::degrees(p, 3, 4);
      rep.params["n"] = ns;
      Recorder check(rep);
      for (auto n : ns) {
        detail::guard(n >= 2 && n <= 4, p,
                      "clique suite enumerates maximum cliques for n <= 4");
        auto g = full_graph(n, p.threads);
        CliqueOptions opt;
        opt.threads        = p.threads;
        opt.budget_seconds = p.budget_seconds;
        auto all  = all_maximum_cliques(g, opt, p.force);
        auto tag  = "n=" + std::to_string(n) + ": ";
        check(tag + "clique number is 2^n - 2", "clique number 2^n - 2",
              (std::size_t{1} << n) - 2, published,
              [&] { return ojson(all.size); });
        auto E = elements(n, Filter::idempotent());
        std::vector<PInj> target;
        for (auto const& e : E) {
          if (!e.is_zero() && !e.is_identity()) {
            target.push_back(e);
          }
        }
        check(tag
                  + "every multiplication-closed maximum clique is "
                    "E(I(n)) - {0,1}",
              "unique commutative inverse subsemigroup of maximum order",
              ojson{{"closed", 1}, {"elements", detail::formatted(target)}},
              published, [&] {
                std::size_t       closed = 0;
                std::vector<PInj> last;
                for (auto const& c : all.cliques) {
                  auto els = c;
                  els.push_back(PInj::zero(n));
                  els.push_back(PInj::identity(n));
                  SemigroupSet S(n, els);
                  if (closure(n, els) == S) {
                    ++closed;
                    last = c;
                    sort_by_id(last);
                  }
                }
                return ojson{{"closed", closed},
                             {"elements", detail::formatted(last)}};
              });
      }
    }

    inline std::size_t ideal_expected(std::size_t n, std::size_t r) {
      if (r == n - 1) {
        return 4;
      }
      return r > ideal_threshold(n) ? 3 : 2;
    }

    inline void ideal_diameters(SuiteParams const& p, SuiteReport& rep) {
      auto ns = detail::degrees(p, 3, 6);
      rep.params["n"] = ns;
      if (p.ideal) {
        rep.params["ideal"] = *p.ideal;
      }
      Recorder check(rep);
      for (auto n : ns) {
        detail::guard(n >= 3 && n <= max_full_graph_degree, p,
                      "graph materialization is limited to n <= "
                          + std::to_string(max_full_graph_degree));
        for (std::size_t r = 1; r < n; ++r) {
          if (p.ideal && *p.ideal != r) {
            continue;
          }
          auto tag = "n=" + std::to_string(n) + ", r=" + std::to_string(r)
                     + ": ";
          auto g   = cached_ideal_graph(n, r, p.cache_dir, p.threads);
          check(tag + "diameter of the commuting graph of J_r",
                "ideal diameters", ideal_expected(n, r), published,
                [&] { return detail::distance_json(diameter(g, p.threads).value); });
          if (r > ideal_threshold(n) && r + 1 < n) {
            auto [a, b] = ideal_witness_pair(n, r);
            check(tag + "witness pair " + format(a) + ", " + format(b)
                      + " is at distance 3",
                  "ideal diameters", 3, published,
                  [&] { return detail::distance_json(distance(g, a, b).value); });
          }
        }
      }
    }

    inline void full_diameters(SuiteParams const& p, SuiteReport& rep) {
      auto ns = detail::degrees(p, 3, 6);
      rep.params["n"] = ns;
      Recorder check(rep);
      for (auto n : ns) {
        detail::guard(n >= 2 && n <= max_full_graph_degree, p,
                      "graph materialization is limited to n <= "
                          + std::to_string(max_full_graph_degree));
        auto  g = cached_ideal_graph(n, n, p.cache_dir, p.threads);
        ojson expected;
        auto  prov = published;
        if (n % 2 == 0 && n >= 4) {
          expected = 4;
        } else if (n % 2 == 1 && detail::is_prime(n)) {
          expected = "infinite";
        } else {
          expected = detail::distance_json(diameter_full(g, p.threads).value);
          prov     = derived;
        }
        check("n=" + std::to_string(n) + ": diameter of the commuting graph "
                  "of I(n)",
              n % 2 == 0 ? "diameter 4 for even n"
                         : "disconnected for prime n",
              expected, prov, [&] {
                return detail::distance_json(diameter(g, p.threads).value);
              });
      }
    }

    inline void distance5(SuiteParams const& p, SuiteReport& rep) {
      auto n = p.n.value_or(9);
      detail::guard(n == 9 || n == 25 || n == 27, p,
                    "distance-5 certificates are limited to n in {9, 25, 27}");
      rep.params["n"] = n;
      std::size_t pp = n == 25 ? 5 : 3;
      std::size_t k  = n == 27 ? 3 : 2;
      auto const  w  = prime_power_pair(pp, k);
      Recorder    check(rep);
      Distance5Options opt;
      opt.full_grid = n == 9;
      opt.threads   = p.threads;
      Distance5Report r;
      check("alpha and beta are distinct n-cycles", "prime power pair",
            true, trivial, [&] {
              return ojson(is_n_cycle(w.alpha) && is_n_cycle(w.beta)
                           && w.alpha != w.beta);
            });
      check("alpha^q and beta^q are the displayed joins of p-cycles",
            "prime power pair", ojson::array({format(w.delta), format(w.eta)}),
            published, [&] {
              return ojson::array({format(power(w.alpha, w.q)),
                                   format(power(w.beta, w.q))});
            });
      check("certificate computed", "distance-5 argument", true, trivial,
            [&] {
              r = verify_distance5(w.alpha, w.beta, opt);
              return ojson(true);
            });
      check("centralizers of alpha and beta are 0 and their powers",
            "centralizer of an n-cycle", ojson::array({true, true}), published,
            [&] {
              return ojson::array(
                  {r.a_centralizer_is_powers, r.b_centralizer_is_powers});
            });
      check("no power of alpha commutes with a power of beta",
            "distance-5 argument", 0, published,
            [&] { return ojson(r.commuting_power_pairs); });
      for (auto const& c : r.cells) {
        check("C(alpha^" + std::to_string(c.s) + ") and C(beta^"
                  + std::to_string(c.t) + ") meet in {0, 1}",
              "distance-5 argument", 2, published,
              [&] { return ojson(c.common_size); });
      }
      check("the closure of the cycle relation is X x X",
            "cycle relation closure", 1, published,
            [&] { return ojson(r.closure_classes); });
      if (n == 9) {
        auto aq = power(w.alpha, 3);
        check("|C(alpha^3)| by the cycle-matching construction",
              "centralizer of alpha^3", 352, published,
              [&] { return ojson(centralizer_of_permutation(aq).size()); });
        check("C(alpha^3) equals the filtered enumeration of I(9)",
              "centralizer of alpha^3", true, derived, [&] {
                return ojson(centralizer_scan(aq, Filter::all(), p.threads)
                             == centralizer_of_permutation(aq));
              });
        check("all 64 (s, t) cells meet only in {0, 1}",
              "distance-5 argument", ojson::array({64, 0}), derived, [&] {
                return ojson::array(
                    {r.full_grid.size(), r.full_grid_nontrivial});
              });
      } else {
        check("|C(alpha^q)| by the cycle-length formula",
              "centralizer size", detail::big_json(permutation_centralizer_size(
                                      power(w.alpha, w.q))),
              derived, [&] { return ojson(r.centralizer_size_aq); });
      }
      check("constructed path has length 5 and is valid",
            "odd composite path construction", 5, published, [&] {
              if (!r.path) {
                return ojson("none");
              }
              if (auto d = path_defect(*r.path, w.alpha, w.beta,
                                       monoid_center(n))) {
                return ojson(*d);
              }
              return ojson(r.path->length());
            });
      check("distance is exactly 5", "distance 5 for prime powers", 5,
            published, [&] { return detail::distance_json(r.distance); });
    }

    inline void nilpotent_pairs(SuiteParams const& p, SuiteReport& rep) {
      auto ns = detail::degrees(p, 3, 6);
      rep.params["n"] = ns;
      Recorder check(rep);
      for (auto n : ns) {
        detail::guard(n >= 3 && n <= max_full_graph_degree, p,
                      "graph materialization is limited to n <= "
                          + std::to_string(max_full_graph_degree));
        auto [a, b] = extremal_nilpotent_pair(n);
        auto g      = cached_ideal_graph(n, n - 1, p.cache_dir, p.threads);
        check("n=" + std::to_string(n) + ": d(" + format(a) + ", " + format(b)
                  + ") in the commuting graph of J_{n-1}",
              "index-n nilpotent pair", 4, published,
              [&] { return detail::distance_json(distance(g, a, b).value); });
      }
    }

    inline void sym(SuiteParams const& p, SuiteReport& rep) {
      auto n = p.n.value_or(10);
      rep.params["n"] = n;
      Recorder check(rep);
      auto     t = sym_counterexample();
      check("rho - sigma - tau commute in Sym(10) with sigma != 1",
            "symmetric group counterexample", true, published, [&] {
              return ojson(commutes_naive(t.rho, t.sigma)
                           && commutes_naive(t.sigma, t.tau)
                           && !t.sigma.is_identity());
            });
      check("every cycle length of rho is coprime to every one of tau",
            "symmetric group counterexample", true, published, [&] {
              bool ok = true;
              for (auto const& x : decompose(t.rho).cycles) {
                for (auto const& y : decompose(t.tau).cycles) {
                  ok = ok && std::gcd(x.size(), y.size()) == 1;
                }
              }
              return ojson(ok);
            });
      DolzanReport r;
      check("check computed", "lower bound in Sym(n)", true, trivial, [&] {
        r = dolzan_distance_check(n);
        return ojson(true);
      });
      check("centralizers in Sym(n) are the powers",
            "lower bound in Sym(n)", ojson::array({true, true}), published,
            [&] {
              return ojson::array(
                  {r.a_centralizer_is_powers, r.b_centralizer_is_powers});
            });
      check("no powers commute", "lower bound in Sym(n)", 0, published,
            [&] { return ojson(r.commuting_power_pairs); });
      for (auto const& c : r.cells) {
        check("C(alpha^" + std::to_string(c.m) + ") and C(beta^"
                  + std::to_string(c.k) + ") meet in {1} within Sym(n)",
              "lower bound in Sym(n)", 0, published,
              [&] { return ojson(c.nontrivial.size()); });
      }
      check("d(alpha, beta) >= 5 certified", "lower bound in Sym(n)", true,
            published, [&] { return ojson(r.lower_bound_5); });
    }

    inline void properties(SuiteParams const& p, SuiteReport& rep) {
      auto samples       = p.samples.value_or(100000);
      rep.params["seed"] = p.seed;
      rep.params["random_pairs"] = samples;
      Recorder        check(rep);
      std::mt19937_64 rng(p.seed);

      check("structural and pointwise commutation agree on I(n)^2, n <= 4",
            "commutation criterion", 0, derived, [&] {
              std::size_t bad = 0;
              for (std::size_t n = 1; n <= 4; ++n) {
                auto all = elements(n);
                for (auto const& a : all) {
                  for (auto const& b : all) {
                    bad += commutes_structural(a, b) != commutes_naive(a, b);
                  }
                }
              }
              return ojson(bad);
            });
      check("structural and pointwise commutation agree on random pairs, "
            "5 <= n <= 10",
            "commutation criterion", 0, derived, [&] {
              std::size_t bad = 0;
              for (std::size_t i = 0; i < samples; ++i) {
                auto n = 5 + i % 6;
                auto a = element_from_id(n, rng() % id_count(n));
                PInj b;
                switch (rng() % 3) {
                  case 0: b = element_from_id(n, rng() % id_count(n)); break;
                  case 1: b = power(a, 1 + rng() % (n + 1)); break;
                  default:
                    b = a.restricted(PointSet(rng() & ((1u << n) - 1)));
                }
                bad += commutes_structural(a, b) != commutes_naive(a, b);
                bad += commutes_structural(b, a) != commutes_naive(b, a);
              }
              return ojson(bad);
            });
      check("join(decompose(a)) == a and parse(format(a)) == a on I(n), "
            "n <= 5",
            "cycle-chain decomposition", 0, trivial, [&] {
              std::size_t bad = 0;
              for (std::size_t n = 1; n <= 5; ++n) {
                for (auto const& a : elements(n)) {
                  bad += join(decompose(a)) != a;
                  bad += parse(format(a), n) != a;
                }
              }
              return ojson(bad);
            });
      check("reordered and rotated decompositions render identically",
            "uniqueness of the decomposition", 0, derived, [&] {
              std::size_t bad = 0;
              for (int i = 0; i < 2000; ++i) {
                auto n = 2 + static_cast<std::size_t>(rng() % 17);
                auto a = element_from_id(n, rng() % id_count(n));
                auto d = decompose(a);
                for (auto& c : d.cycles) {
                  std::rotate(c.begin(), c.begin() + rng() % c.size(),
                              c.end());
                }
                std::shuffle(d.cycles.begin(), d.cycles.end(), rng);
                std::shuffle(d.chains.begin(), d.chains.end(), rng);
                auto b = join(d);
                bad += b != a || format(b) != format(a);
              }
              return ojson(bad);
            });
      check("commuting pairs preserve im(a) under b and dom(a) under "
            "b^-1, n <= 4",
            "image and domain closure", 0, published, [&] {
              std::size_t bad = 0;
              for (std::size_t n = 1; n <= 4; ++n) {
                auto all = elements(n);
                for (auto const& a : all) {
                  for (auto const& b : all) {
                    if (!commutes(a, b)) {
                      continue;
                    }
                    auto bi = inverse(b);
                    for (auto x : a.image().to_vector()) {
                      bad += b.is_defined(x) && !a.image().contains(b[x]);
                    }
                    for (auto x : a.domain().to_vector()) {
                      bad += bi.is_defined(x) && !a.domain().contains(bi[x]);
                    }
                  }
                }
              }
              return ojson(bad);
            });
      check("centralizers of n-cycles and index-n nilpotents are their "
            "powers, n <= 5",
            "centralizers of n-cycles and index-n nilpotents", 0, published,
            [&] {
              std::size_t bad = 0;
              for (std::size_t n = 2; n <= 5; ++n) {
                for (auto const& a : elements(n)) {
                  bool cyc = is_n_cycle(a), nil = is_full_chain(a);
                  if (!cyc && !nil) {
                    continue;
                  }
                  std::vector<PInj> expect{PInj::zero(n),
                                           PInj::identity(n)};
                  for (std::size_t q = 1; q < n; ++q) {
                    expect.push_back(power(a, q));
                  }
                  bad += centralizer_scan(a) != SemigroupSet(n, expect);
                }
              }
              return ojson(bad);
            });
      check("lambda closed form equals the recurrence, 4 <= n <= 40",
            "lambda recurrence", 0, published, [&] {
              std::size_t bad = 0;
              for (std::size_t n = 4; n <= 40; ++n) {
                bad += symi::lambda(n) != lambda_recurrence(n);
              }
              return ojson(bad);
            });
      check("lambda_n > 2 lambda_{n-1} for 6 <= n <= 40", "growth of lambda",
            0, published, [&] {
              std::size_t bad = 0;
              for (std::size_t n = 6; n <= 40; ++n) {
                bad += !(symi::lambda(n) > 2 * symi::lambda(n - 1));
              }
              return ojson(bad);
            });
      check("lambda_n + 1 > 2(lambda_{n-1} + 1) for 10 < n <= 40 and "
            "lambda_n + 1 > (lambda_k + 1)(lambda_{n-k} + 1) for k, n-k >= 10",
            "growth of lambda", 0, published, [&] {
              std::size_t bad = 0;
              for (std::size_t n = 11; n <= 40; ++n) {
                BigInt ln = symi::lambda(n) + 1;
                bad += !(ln > 2 * (symi::lambda(n - 1) + 1));
                for (std::size_t k = 10; n - k >= 10; ++k) {
                  bad += !(ln > (symi::lambda(k) + 1)
                                    * (symi::lambda(n - k) + 1));
                }
              }
              return ojson(bad);
            });
      check("null order strictly increases from (a, b) to (a+1, b-1) while "
            "a < floor(n/2), n <= 40",
            "balancing increases the order", 0, published, [&] {
              std::size_t bad = 0;
              for (std::size_t n = 2; n <= 40; ++n) {
                for (std::size_t a = 1; a < balanced_split(n); ++a) {
                  bad += !(null_order(a, n - a) < null_order(a + 1, n - a - 1));
                }
              }
              return ojson(bad);
            });
      check("build_path is valid and no shorter than BFS on random eligible "
            "pairs at n = 6",
            "path constructions", 0, derived, [&] {
              std::size_t const n = 6;
              auto              g = cached_ideal_graph(n, n, p.cache_dir,
                                                       p.threads);
              DistanceTable     t(g);
              auto              center = monoid_center(n);
              std::size_t       bad    = 0;
              auto              draw   = [&] {
                while (true) {
                  auto a = element_from_id(n, rng() % id_count(n));
                  if (!a.is_zero() && !a.is_identity()) {
                    return a;
                  }
                }
              };
              auto const count = std::min<std::size_t>(samples, 10000);
              for (std::size_t i = 0; i < count; ++i) {
                auto a = draw();
                auto b = draw();
                if (i % 4 == 1) {
                  std::vector<point_t> pts{0, 1, 2, 3, 4, 5};
                  std::shuffle(pts.begin(), pts.end(), rng);
                  a = cycle(n, pts);
                } else if (i % 4 == 2) {
                  std::vector<point_t> pts{0, 1, 2, 3, 4, 5};
                  std::shuffle(pts.begin(), pts.end(), rng);
                  b = chain(n, pts);
                }
                auto w = build_path(a, b);
                auto d = t(a, b);
                bad += path_defect(w, a, b, center).has_value();
                bad += w.length() > 4 || !d || w.length() < *d;
              }
              return ojson(bad);
            });
    }

    inline void cache(SuiteParams const& p, SuiteReport& rep) {
      auto n = p.n.value_or(4);
      detail::guard(n >= 2 && n <= max_full_graph_degree, p,
                    "graph materialization is limited to n <= "
                        + std::to_string(max_full_graph_degree));
      auto dir = p.cache_dir.empty()
                     ? (std::filesystem::temp_directory_path()
                        / ("symi-cache-" + std::to_string(std::random_device{}())))
                           .string()
                     : p.cache_dir;
      rep.params["n"] = n;
      Recorder check(rep);
      auto     rule = CenterRule::full_monoid;
      auto     path = std::filesystem::path(dir)
                  / cache_file_name(n, Filter::all(), rule);
      auto built = full_graph(n, p.threads);
      check("cache round trip is bit-exact", "packed cache format", true,
            trivial, [&] {
              std::filesystem::create_directories(dir);
              save_cache(built, path.string());
              auto again = load_cache(path.string(), rule,
                                      detail::standard_center(n, rule));
              return ojson(to_cache_bytes(again) == to_cache_bytes(built));
            });
      check("diameter from the cache equals the diameter of a fresh build",
            "determinism", detail::distance_json(diameter(built).value),
            derived, [&] {
              bool loaded = false;
              auto g = cached_ideal_graph(n, n, dir, p.threads, &loaded);
              return loaded ? detail::distance_json(diameter(g).value)
                            : ojson("not loaded");
            });
      check("a corrupted byte is rejected by the checksum", "packed cache format",
            "graph cache checksum mismatch", trivial, [&] {
              auto bytes = to_cache_bytes(built);
              bytes[bytes.size() / 2] ^= 0x10;
              try {
                from_cache_bytes(bytes);
              } catch (Error const& e) {
                return ojson(e.what());
              }
              return ojson("accepted");
            });
      if (p.cache_dir.empty()) {
        std::filesystem::remove_all(dir);
      }
    }
  }  // namespace suites

  inline std::vector<std::string> suite_names() {
    return {"lambda",          "balanced-null",  "extremal",
            "clique",          "ideal-diameters", "full-diameters",
            "distance5",       "nilpotent-pairs", "sym",
            "properties",      "cache"};
  }

  inline SuiteReport run_suite(std::string const& name,
                               SuiteParams const& p = {}) {
    using F = void (*)(SuiteParams const&, SuiteReport&);
    static std::map<std::string, F> const table{
        {"lambda", suites::lambda},
        {"balanced-null", suites::balanced_null},
        {"extremal", suites::extremal},
        {"clique", suites::clique},
        {"ideal-diameters", suites::ideal_diameters},
        {"full-diameters", suites::full_diameters},
        {"distance5", suites::distance5},
        {"nilpotent-pairs", suites::nilpotent_pairs},
        {"sym", suites::sym},
        {"properties", suites::properties},
        {"cache", suites::cache},
    };
    auto it = table.find(name);
    if (it == table.end()) {
      std::string known;
      for (auto const& s : suite_names()) {
        known += (known.empty() ? "" : ", ") + s;
      }
      throw Error("unknown suite '" + name + "' (known: " + known + ")");
    }
    SuiteReport rep;
    rep.suite = name;
    it->second(p, rep);
    return rep;
  }

  ////////////////////////////////////////////////////////////////////////
  // Search mode for odd n that is neither prime nor a prime power
  ////////////////////////////////////////////////////////////////////////

  struct OpenSearchReport {
    std::size_t n       = 0;
    std::size_t samples = 0;
    // Pairs for which no path of length <= 4 exists.
    std::size_t at_least_5 = 0;
    // Pairs joined by a path of length <= 4 found by build_path or a
    // common power-centralizer element.
    std::size_t at_most_4 = 0;
    std::size_t undecided = 0;
    std::vector<std::pair<PInj, PInj>> examples_at_least_5;
  };

  // Samples random pairs of n-cycles and classifies d(a, b) as >= 5 or
  // <= 4 where the centralizer argument decides it.  Reports counts only.
  inline OpenSearchReport search_open(std::size_t n, std::size_t samples,
                                      std::uint64_t seed, std::size_t threads = 1) {
    auto prime_power = [](std::size_t m) {
      std::size_t p = 2;
      while (m % p != 0) {
        ++p;
      }
      while (m % p == 0) {
        m /= p;
      }
      return m == 1;
    };
    if (n < 15 || n % 2 == 0 || prime_power(n) || n > max_degree) {
      throw GuardError("search-open needs odd n <= "
                       + std::to_string(max_degree)
                       + " that is not a prime power");
    }
    OpenSearchReport rep;
    rep.n       = n;
    rep.samples = samples;
    std::mt19937_64      rng(seed);
    std::vector<point_t> pts(n);
    std::iota(pts.begin(), pts.end(), point_t{0});
    for (std::size_t i = 0; i < samples; ++i) {
      std::shuffle(pts.begin(), pts.end(), rng);
      auto a = cycle(n, pts);
      std::shuffle(pts.begin(), pts.end(), rng);
      auto b = cycle(n, pts);
      if (a == b) {
        continue;
      }
      Distance5Options opt;
      opt.threads = threads;
      auto r      = verify_distance5(a, b, opt);
      if (r.lower_bound_5) {
        ++rep.at_least_5;
        if (rep.examples_at_least_5.size() < 3) {
          rep.examples_at_least_5.emplace_back(a, b);
        }
        continue;
      }
      bool short_path = r.commuting_power_pairs > 0;
      for (auto const& c : r.cells) {
        short_path = short_path || !c.nontrivial.empty();
      }
      if (short_path || (r.path && r.path->length() <= 4)) {
        ++rep.at_most_4;
      } else {
        ++rep.undecided;
      }
    }
    return rep;
  }

}  // namespace symi
