#include <numeric>
#include <random>

#include "catch_print.hpp"
#include "oracles.hpp"
#include "symi/graph.hpp"
#include "symi/witnesses.hpp"

using namespace symi;

namespace {
  PInj P(char const* s, std::size_t n) {
    return parse(s, n);
  }

  // Path validity re-checked with the pointwise oracle.
  bool oracle_valid(PathWitness const& w, PInj const& a, PInj const& b,
                    std::vector<PInj> const& center) {
    auto const& v = w.vertices;
    if (v.empty() || v.front() != a || v.back() != b
        || w.claimed_length + 1 != v.size()) {
      return false;
    }
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (std::find(center.begin(), center.end(), v[i]) != center.end()) {
        return false;
      }
      for (std::size_t j = i + 1; j < v.size(); ++j) {
        if (v[i] == v[j]) {
          return false;
        }
      }
      if (i > 0 && !oracle::commutes(v[i - 1], v[i])) {
        return false;
      }
    }
    return true;
  }

  std::vector<PInj> filter_common(std::size_t n, PInj const& a, PInj const& b) {
    std::vector<PInj> out;
    for (auto const& g : oracle::all_pinj(n)) {
      if (oracle::commutes(a, g) && oracle::commutes(b, g)) {
        out.push_back(g);
      }
    }
    return out;
  }

  template <typename Rng>
  PInj random_n_cycle(std::size_t n, Rng& rng) {
    std::vector<point_t> pts(n);
    std::iota(pts.begin(), pts.end(), point_t{0});
    std::shuffle(pts.begin(), pts.end(), rng);
    return cycle(n, pts);
  }

  template <typename Rng>
  PInj random_full_chain(std::size_t n, Rng& rng) {
    std::vector<point_t> pts(n);
    std::iota(pts.begin(), pts.end(), point_t{0});
    std::shuffle(pts.begin(), pts.end(), rng);
    return chain(n, pts);
  }
}  // namespace

TEST_CASE("path validation", "[witnesses]") {
  auto        a = P("(1)", 3), b = P("(2)", 3), c = P("(1)|(2)", 3);
  PathWitness w{{a, c, b}, 2};
  REQUIRE(!path_defect(w, a, b, monoid_center(3)));
  REQUIRE(path_defect(PathWitness{{a, c, b}, 3}, a, b, monoid_center(3)));
  REQUIRE(path_defect(PathWitness{{a, c, a, b}, 3}, a, b, monoid_center(3)));
  REQUIRE(path_defect(PathWitness{{a, PInj::identity(3), b}, 2}, a, b,
                      monoid_center(3)));
  REQUIRE(path_defect(PathWitness{{P("[1 2]", 3), P("[2 1]", 3)}, 1},
                      P("[1 2]", 3), P("[2 1]", 3), monoid_center(3)));
  REQUIRE(path_defect(PathWitness{{a, c}, 1}, a, b, monoid_center(3)));
  auto e = erase_loops({a, c, b, c, a, c, b});
  REQUIRE(e.vertices == std::vector<PInj>{a, c, b});
  REQUIRE(e.claimed_length == 2);
}

TEST_CASE("commuting_idempotent", "[witnesses]") {
  auto e1 = commuting_idempotent(P("(1 2)|(3 4 5)", 5));
  REQUIRE(e1 == PInj::identity_on(5, PointSet{0, 1}));
  auto e2 = commuting_idempotent(P("[1 2]|[3 4]", 5));
  REQUIRE(e2 == PInj::identity_on(5, PointSet{0, 1}));
  REQUIRE(e2.rank() <= 2);

  for (std::size_t n = 1; n <= 4; ++n) {
    for (auto const& a : oracle::all_pinj(n)) {
      bool eligible = !a.is_zero() && !a.is_identity() && !is_n_cycle(a)
                      && !is_full_chain(a);
      if (!eligible) {
        REQUIRE_THROWS_AS(commuting_idempotent(a), Error);
        continue;
      }
      auto e = commuting_idempotent(a);
      REQUIRE(oracle::compose(e, e) == e);
      REQUIRE(!e.is_zero());
      REQUIRE(!e.is_identity());
      REQUIRE(commutes_naive(a, e));
    }
  }
  // Mixed case: the power of a that is idempotent.
  auto m = P("(1 2 3)|[4 5 6 7]", 8);
  auto e = commuting_idempotent(m);
  REQUIRE(e == PInj::identity_on(8, PointSet{0, 1, 2}));
}

TEST_CASE("cycle action map", "[witnesses]") {
  for (std::size_t n = 1; n <= 5; ++n) {
    auto all = oracle::all_pinj(n);
    for (auto const& a : all) {
      if (!a.is_permutation()) {
        continue;
      }
      for (auto const& g : all) {
        if (!oracle::commutes(a, g)) {
          continue;
        }
        auto h = cycle_action_map(a, g);
        REQUIRE(h.is_injective());
        REQUIRE(h.is_length_preserving());
        // dom(h) is the set of cycles meeting dom(g).
        for (std::size_t i = 0; i < h.cycles.size(); ++i) {
          bool meets = false;
          for (auto x : h.cycles[i]) {
            meets = meets || g.is_defined(x);
          }
          REQUIRE(meets == (h.h[i] != CycleActionMap::npos));
        }
      }
    }
  }
  REQUIRE_THROWS_AS(cycle_action_map(P("[1 2]", 3), PInj(3)), Error);
  REQUIRE_THROWS_AS(cycle_action_map(P("(1 2)|(3)", 3), P("[1 3]", 3)), Error);
}

TEST_CASE("common centralizer search equals the filter", "[witnesses]") {
  std::mt19937_64 rng(4);
  for (int i = 0; i < 60; ++i) {
    std::size_t n = 3 + static_cast<std::size_t>(i % 3);
    auto        a = oracle::random_permutation(n, rng);
    auto        b = i % 2 ? oracle::random_pinj(n, rng)
                          : oracle::random_permutation(n, rng);
    auto expect = filter_common(n, a, b);
    sort_by_id(expect);
    REQUIRE(common_centralizer(a, b) == expect);
    std::vector<PInj> perms;
    for (auto const& g : expect) {
      if (g.is_permutation()) {
        perms.push_back(g);
      }
    }
    REQUIRE(common_centralizer(a, b, true) == perms);
  }
  REQUIRE_THROWS_AS(common_centralizer(P("[1 2]", 3), PInj(3)), Error);
}

TEST_CASE("centralizers of n-cycles and index-n nilpotents", "[witnesses]") {
  for (std::size_t n = 2; n <= 5; ++n) {
    auto all = oracle::all_pinj(n);
    for (auto const& a : all) {
      bool cyc = is_n_cycle(a);
      bool nil = is_full_chain(a);
      if (!cyc && !nil) {
        continue;
      }
      std::vector<PInj> expect{PInj(n)};
      if (nil) {
        expect.push_back(PInj::identity(n));
      }
      for (std::size_t q = 1; q < n; ++q) {
        expect.push_back(oracle::power(a, q));
      }
      if (cyc) {
        expect.push_back(PInj::identity(n));
      }
      std::vector<PInj> got;
      for (auto const& g : all) {
        if (oracle::commutes(a, g)) {
          got.push_back(g);
        }
      }
      sort_by_id(expect);
      sort_by_id(got);
      REQUIRE(got == expect);
    }
  }
}

TEST_CASE("align_middle", "[witnesses]") {
  auto g = P("(1 2)|(3 4)", 4);
  auto d = P("(1 3)|(2 4)", 4);
  auto al = align(g, d);
  REQUIRE(al.a == std::vector<point_t>{0, 3});
  REQUIRE(al.b1 == 1);
  REQUIRE(al.c == std::vector<point_t>{2});
  auto eta = align_middle(g, d);
  REQUIRE(eta == P("(1 4)|(2 3)", 4));
  REQUIRE(oracle::commutes(g, eta));
  REQUIRE(oracle::commutes(eta, d));

  REQUIRE_THROWS_AS(align_middle(g, P("(1 2)|(3 4)", 4)), Error);
  REQUIRE_THROWS_AS(align_middle(g, P("(1 3)|(2 4)", 5) ), Error);
  REQUIRE_THROWS_AS(align_middle(P("(1 2 3)", 3), P("(1 3 2)", 3)), Error);
  REQUIRE_THROWS_AS(align_middle(P("(1 2)|(3 4)", 6), P("(1 5)|(2 6)", 6)),
                    Error);

  // Every pair of perfect matchings on 6 points without a common pair.
  std::vector<PInj> matchings;
  for (auto const& a : oracle::all_pinj(6)) {
    if (a.is_permutation() && !a.is_identity() && detail::is_pairing(a)) {
      matchings.push_back(a);
    }
  }
  REQUIRE(matchings.size() == 15);
  std::size_t pairs = 0;
  for (auto const& x : matchings) {
    for (auto const& y : matchings) {
      bool share = false;
      for (std::size_t p = 0; p < 6; ++p) {
        share = share || x[p] == y[p];
      }
      if (share) {
        continue;
      }
      ++pairs;
      auto a   = align(x, y);
      auto mid = align_middle(x, y);
      REQUIRE(oracle::commutes(x, mid));
      REQUIRE(oracle::commutes(mid, y));
      REQUIRE(mid.span() == a.gamma.span());
      REQUIRE(a.gamma.span() == a.delta.span());
      // gamma and delta are sub-joins of the inputs.
      for (auto p : a.gamma.span().to_vector()) {
        REQUIRE(a.gamma[p] == x[p]);
        REQUIRE(a.delta[p] == y[p]);
      }
    }
  }
  REQUIRE(pairs == 15 * 8);
}

TEST_CASE("build_path: proof cases", "[witnesses]") {
  auto c4 = monoid_center(4);
  // Index-n nilpotent against an ordinary element.
  auto a = P("[1 2 3 4 5]", 5);
  auto b = P("(1 2)|[3 4]", 5);
  auto w = build_path(a, b);
  REQUIRE(oracle_valid(w, a, b, monoid_center(5)));
  REQUIRE(w.length() <= 4);
  REQUIRE(w.vertices[1] == P("[1 5]", 5));

  // n = 4: a 4-cycle against every index-4 nilpotent.
  auto cyc = P("(1 2 3 4)", 4);
  for (auto const& x : oracle::all_pinj(4)) {
    if (!is_full_chain(x)) {
      continue;
    }
    auto p = build_path(cyc, x);
    REQUIRE(oracle_valid(p, cyc, x, c4));
    REQUIRE(p.length() <= 4);
    REQUIRE(p.vertices[1] == P("(1 3)|(2 4)", 4));
    auto q = build_path(x, cyc);
    REQUIRE(oracle_valid(q, x, cyc, c4));
  }

  // Both n-cycles, n even: shared 2-cycle and aligned cases.
  for (auto const& x : oracle::all_pinj(4)) {
    for (auto const& y : oracle::all_pinj(4)) {
      if (is_n_cycle(x) && is_n_cycle(y)) {
        auto p = build_path(x, y);
        REQUIRE(oracle_valid(p, x, y, c4));
        REQUIRE(p.length() <= 4);
      }
    }
  }

  // Odd composite: n = 9 cycles get a path of length at most 5.
  std::mt19937_64 rng(9);
  for (int i = 0; i < 50; ++i) {
    auto x = random_n_cycle(9, rng);
    auto y = random_n_cycle(9, rng);
    auto p = build_path(x, y);
    REQUIRE(oracle_valid(p, x, y, monoid_center(9)));
    REQUIRE(p.length() <= 5);
    auto z = oracle::random_pinj(9, rng);
    if (!z.is_zero() && !z.is_identity() && !is_n_cycle(z)) {
      auto q = build_path(x, z);
      REQUIRE(oracle_valid(q, x, z, monoid_center(9)));
      REQUIRE(q.length() <= 4);
    }
  }

  REQUIRE_THROWS_AS(build_path(P("(1 2 3 4 5)", 5), P("(1)", 5)), Error);
  REQUIRE_THROWS_AS(build_path(PInj(5), P("(1)", 5)), Error);
  REQUIRE_THROWS_AS(build_path(P("[1 2 3]", 3), P("[3 2 1]", 3)), Error);
}

TEST_CASE("build_path on random eligible pairs at n = 6 against BFS",
          "[witnesses][slow]") {
  auto const n = 6;
  auto       g = full_graph(n);
  DistanceTable   t(g);
  std::mt19937_64 rng(66);
  auto draw = [&]() {
    while (true) {
      PInj x;
      switch (rng() % 4) {
        case 0: x = random_n_cycle(n, rng); break;
        case 1: x = random_full_chain(n, rng); break;
        default: x = oracle::random_pinj(n, rng);
      }
      if (!x.is_zero() && !x.is_identity()) {
        return x;
      }
    }
  };
  for (int i = 0; i < 10000; ++i) {
    auto a = draw();
    auto b = draw();
    auto w = build_path(a, b);
    REQUIRE(oracle_valid(w, a, b, monoid_center(n)));
    REQUIRE(w.length() <= 4);
    auto d = t(a, b);
    REQUIRE(d);
    REQUIRE(w.length() >= *d);
  }
}

TEST_CASE("extremal nilpotent pairs", "[witnesses]") {
  auto [a3, b3] = extremal_nilpotent_pair(3);
  REQUIRE(a3 == P("[1 2 3]", 3));
  REQUIRE(b3 == P("[3 2 1]", 3));
  for (std::size_t n = 3; n <= 6; ++n) {
    auto [a, b] = extremal_nilpotent_pair(n);
    REQUIRE(is_full_chain(a));
    REQUIRE(is_full_chain(b));
    REQUIRE(!oracle::commutes(a, b));
    if (n <= 5) {
      auto g = ideal_graph(n, n - 1);
      REQUIRE(distance(g, a, b).value == 4u);
      auto f = full_graph(n);
      REQUIRE(distance(f, a, b).value == 4u);
    }
  }
  REQUIRE_THROWS_AS(extremal_nilpotent_pair(2), Error);
}

TEST_CASE("ideal witness pairs", "[witnesses]") {
  auto [a, b] = ideal_witness_pair(5, 3);
  REQUIRE(a.rank() == 3);
  REQUIRE(b.rank() == 3);
  REQUIRE((a.span() | b.span()) == PointSet::full(5));
  REQUIRE(decompose(a).chains.size() == 1);
  REQUIRE(decompose(b).chains.size() == 1);
  auto g = ideal_graph(5, 3);
  REQUIRE(distance(g, a, b).value == 3u);

  for (std::size_t n = 4; n <= 6; ++n) {
    for (std::size_t r = (n - 1) / 2 + 1; r + 1 < n; ++r) {
      auto [x, y] = ideal_witness_pair(n, r);
      REQUIRE((x.span() | y.span()) == PointSet::full(n));
      auto common = filter_common(n, x, y);
      sort_by_id(common);
      REQUIRE(common == std::vector<PInj>{PInj(n), PInj::identity(n)});
    }
  }
  REQUIRE_THROWS_AS(ideal_witness_pair(5, 2), Error);
  REQUIRE_THROWS_AS(ideal_witness_pair(5, 4), Error);
}

TEST_CASE("prime power pairs", "[witnesses]") {
  auto p9 = prime_power_pair(3, 2);
  REQUIRE(p9.alpha == P("(1 2 3 4 5 8 7 6 9)", 9));
  REQUIRE(p9.beta == P("(1 4 7 2 5 8 3 6 9)", 9));
  REQUIRE(p9.delta == P("(1 4 7)|(2 5 6)|(3 8 9)", 9));
  REQUIRE(p9.eta == P("(1 2 3)|(4 5 6)|(7 8 9)", 9));

  auto p25 = prime_power_pair(5, 2);
  REQUIRE(p25.delta
          == P("(1 2 3 4 5)|(6 7 8 9 10)|(11 12 13 14 15)|(16 17 18 19 20)"
               "|(21 22 23 24 25)",
               25));
  // Last cycle (n-p+2 ... n n-p).
  REQUIRE(p25.eta[21] == 22);
  REQUIRE(p25.eta[24] == 19);
  REQUIRE(p25.eta[19] == 21);
  REQUIRE(is_n_cycle(p25.alpha));
  REQUIRE(is_n_cycle(p25.beta));
  REQUIRE(oracle::power(p25.alpha, p25.q) == p25.delta);
  REQUIRE(oracle::power(p25.beta, p25.q) == p25.eta);
  // Away from the special cycle, consecutive points mostly step by q - 1.
  auto const q = p25.q;
  for (auto const& c : decompose(p25.eta).cycles) {
    if (std::find(c.begin(), c.end(), point_t{24}) != c.end()) {
      continue;
    }
    std::size_t steps = 0;
    for (std::size_t i = 0; i < c.size(); ++i) {
      steps += c[(i + 1) % c.size()] == c[i] + (q - 1);
    }
    REQUIRE(steps + 2 >= c.size());
  }

  auto p27 = prime_power_pair(3, 3);
  REQUIRE(is_n_cycle(p27.alpha));
  REQUIRE(power(p27.beta, 9) == p27.eta);
  REQUIRE_THROWS_AS(prime_power_pair(7, 2), Error);
  REQUIRE_THROWS_AS(prime_power_pair(3, 1), Error);
}

TEST_CASE("verify_distance5: the n = 9 pair", "[witnesses]") {
  auto             p = prime_power_pair(3, 2);
  Distance5Options opt;
  opt.full_grid = true;
  auto rep      = verify_distance5(p.alpha, p.beta, opt);
  REQUIRE(rep.a_centralizer_is_powers);
  REQUIRE(rep.b_centralizer_is_powers);
  REQUIRE(rep.commuting_power_pairs == 0);
  REQUIRE(rep.cells.size() == 1);
  REQUIRE(rep.cells[0].s == 3);
  REQUIRE(rep.cells[0].common_size == 2);
  REQUIRE(rep.full_grid.size() == 64);
  REQUIRE(rep.full_grid_nontrivial == 0);
  REQUIRE(rep.centralizer_size_aq == 352);
  REQUIRE(rep.closure_classes == 1);
  REQUIRE(rep.lower_bound_5);
  REQUIRE(rep.path);
  REQUIRE(oracle_valid(*rep.path, p.alpha, p.beta, monoid_center(9)));
  REQUIRE(rep.distance == 5u);

  auto C = centralizer_of_permutation(power(p.alpha, 3));
  REQUIRE(C.size() == 352);
  REQUIRE(permutation_centralizer_size(power(p.alpha, 3)) == 352);
  for (auto const& g : C) {
    REQUIRE(oracle::commutes(g, power(p.alpha, 3)));
  }
  REQUIRE(centralizer_scan(power(p.alpha, 3)) == C);

  REQUIRE_THROWS_AS(verify_distance5(p.alpha, p.alpha), Error);
  REQUIRE_THROWS_AS(verify_distance5(p.alpha, p.delta), Error);
}

TEST_CASE("verify_distance5: pairs at distance 4 are not certified",
          "[witnesses]") {
  // Two 9-cycles sharing a power.
  auto a   = P("(1 2 3 4 5 6 7 8 9)", 9);
  auto rep = verify_distance5(a, power(a, 2));
  REQUIRE(!rep.lower_bound_5);
  REQUIRE(rep.commuting_power_pairs > 0);
  REQUIRE(!rep.distance);
}

TEST_CASE("closure classes", "[witnesses]") {
  auto p = prime_power_pair(5, 2);
  REQUIRE(cycle_closure_classes(p.delta, p.eta).size() == 1);
  auto d = P("(1 2)|(3 4)", 4);
  auto c = cycle_closure_classes(d, d);
  REQUIRE(c.size() == 2);
}

TEST_CASE("sym counterexample", "[witnesses]") {
  auto t = sym_counterexample();
  REQUIRE(oracle::commutes(t.rho, t.sigma));
  REQUIRE(oracle::commutes(t.sigma, t.tau));
  REQUIRE(!t.sigma.is_identity());
  for (auto const& r : decompose(t.rho).cycles) {
    for (auto const& s : decompose(t.tau).cycles) {
      REQUIRE(std::gcd(r.size(), s.size()) == 1);
    }
  }
  for (point_t x : {6, 7, 8, 9}) {
    REQUIRE(t.sigma[x] == x);
  }
  REQUIRE(t.rho.is_permutation());
  REQUIRE(t.tau.is_permutation());
}

TEST_CASE("dolzan distance check", "[witnesses]") {
  auto rep = dolzan_distance_check(10);
  REQUIRE(rep.a_centralizer_is_powers);
  REQUIRE(rep.b_centralizer_is_powers);
  REQUIRE(!rep.endpoints_commute);
  REQUIRE(rep.commuting_power_pairs == 0);
  REQUIRE(rep.cells.size() == 2);
  REQUIRE(rep.cells[0].m == 2);
  REQUIRE(rep.cells[1].m == 5);
  REQUIRE(rep.cells[0].k == 3);
  for (auto const& c : rep.cells) {
    REQUIRE(c.nontrivial.empty());
  }
  REQUIRE(rep.lower_bound_5);

  // Second route: filter the full permutation centralizer of a^m.
  std::vector<point_t> pts(10);
  std::iota(pts.begin(), pts.end(), point_t{0});
  auto a = cycle(10, pts);
  pts.pop_back();
  auto b = join({cycle(10, pts), P("(10)", 10)}, 10);
  for (std::size_t m : {2, 5}) {
    std::size_t count = 0;
    for_each_in_permutation_centralizer(power(a, m), [&](PInj const& g) {
      if (g.is_permutation() && oracle::commutes(g, power(b, 3))) {
        ++count;
        REQUIRE(g.is_identity());
      }
    });
    REQUIRE(count == 1);
  }

  REQUIRE(dolzan_distance_check(16).lower_bound_5);
  REQUIRE_THROWS_AS(dolzan_distance_check(11), Error);
  REQUIRE_THROWS_AS(dolzan_distance_check(12), Error);
}
