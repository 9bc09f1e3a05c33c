#include <functional>
#include <map>
#include <random>

#include "catch_print.hpp"
#include "oracles.hpp"
#include "symi/construct.hpp"

using namespace symi;

namespace {
  PInj P(char const* s, std::size_t n) {
    return parse(s, n);
  }

  // Direct-definition flags, by brute force over all pairs.
  SemigroupFlags oracle_flags(std::vector<PInj> const& S) {
    SemigroupFlags f;
    auto const     n = S.front().degree();
    auto in          = [&](PInj const& x) {
      return std::find(S.begin(), S.end(), x) != S.end();
    };
    f.contains_zero     = in(PInj(n));
    f.contains_identity = in(PInj::identity(n));
    f.commutative = f.null = true;
    f.nilpotent = f.semilattice = f.inverse = true;
    for (auto const& a : S) {
      bool has_zero_power = false;
      for (std::size_t p = 1; p <= n + 1; ++p) {
        has_zero_power = has_zero_power || oracle::power(a, p).is_zero();
      }
      f.nilpotent   = f.nilpotent && has_zero_power;
      f.semilattice = f.semilattice && oracle::compose(a, a) == a;
      std::size_t inverses = 0;
      for (auto const& b : S) {
        auto ab = oracle::compose(a, b);
        f.commutative = f.commutative && ab == oracle::compose(b, a);
        f.null        = f.null && ab.is_zero();
        inverses += oracle::compose(ab, a) == a
                    && oracle::compose(oracle::compose(b, a), b) == b;
      }
      f.inverse = f.inverse && inverses == 1;
    }
    f.semilattice = f.semilattice && f.commutative;
    return f;
  }

  std::vector<PInj> oracle_closure(std::vector<PInj> seed) {
    std::vector<PInj> s;
    for (auto const& x : seed) {
      if (std::find(s.begin(), s.end(), x) == s.end()) {
        s.push_back(x);
      }
    }
    while (true) {
      auto before = s.size();
      for (std::size_t i = 0; i < before; ++i) {
        for (std::size_t j = 0; j < before; ++j) {
          auto p = oracle::compose(s[i], s[j]);
          if (std::find(s.begin(), s.end(), p) == s.end()) {
            s.push_back(p);
          }
        }
      }
      if (s.size() == before) {
        return s;
      }
    }
  }

  // Maximal cliques by Bron-Kerbosch with pivoting, on an explicit
  // adjacency list.
  void maximal_cliques(std::vector<std::vector<bool>> const&      adj,
                       std::vector<std::size_t>                   R,
                       std::vector<std::size_t>                   Pv,
                       std::vector<std::size_t>                   X,
                       std::vector<std::vector<std::size_t>>&     out) {
    if (Pv.empty() && X.empty()) {
      out.push_back(R);
      return;
    }
    std::size_t pivot = Pv.empty() ? X[0] : Pv[0];
    std::size_t best  = 0;
    for (auto const* set : {&Pv, &X}) {
      for (auto u : *set) {
        std::size_t c = 0;
        for (auto v : Pv) {
          c += adj[u][v];
        }
        if (c >= best) {
          best  = c;
          pivot = u;
        }
      }
    }
    auto cand = Pv;
    for (auto v : cand) {
      if (adj[pivot][v]) {
        continue;
      }
      std::vector<std::size_t> P2, X2;
      for (auto u : Pv) {
        if (adj[v][u]) {
          P2.push_back(u);
        }
      }
      for (auto u : X) {
        if (adj[v][u]) {
          X2.push_back(u);
        }
      }
      auto R2 = R;
      R2.push_back(v);
      maximal_cliques(adj, R2, P2, X2, out);
      Pv.erase(std::find(Pv.begin(), Pv.end(), v));
      X.push_back(v);
    }
  }
}  // namespace

TEST_CASE("enumerate: counts and filters", "[construct][enumerate]") {
  REQUIRE(elements(3).size() == 34);
  REQUIRE(elements(3).size() == oracle::all_pinj(3).size());
  for (std::size_t n = 0; n <= 8; ++n) {
    REQUIRE(elements(n, Filter::idempotent()).size() == (std::size_t{1} << n));
  }
  auto j2 = elements(4, Filter::ideal(2));
  REQUIRE(j2.size() == 89);
  std::size_t brute = 0;
  for (auto const& a : oracle::all_pinj(4)) {
    brute += a.rank() <= 2;
  }
  REQUIRE(brute == 89);
  REQUIRE(count(5) == 1546);
  REQUIRE(count(5) == BigInt(oracle::all_pinj(5).size()));
  std::uint64_t f = 1;
  for (std::size_t n = 1; n <= 7; ++n) {
    f *= n;
    REQUIRE(count(n, Filter::permutation()) == BigInt(f));
    REQUIRE(elements(n, Filter::permutation()).size() == f);
  }
  // I(9): formula against a brute count of ranks 0..2.
  std::uint64_t total = 0, low = 0;
  for (std::uint64_t r = 0; r <= 9; ++r) {
    std::uint64_t fr = 1;
    for (std::uint64_t i = 2; i <= r; ++i) {
      fr *= i;
    }
    auto t = oracle::binom(9, r) * oracle::binom(9, r) * fr;
    total += t;
    low += r <= 2 ? t : 0;
  }
  REQUIRE(count(9) == BigInt(total));
  REQUIRE(elements(9, Filter::ideal(2)).size() == low);

  // Ascending IDs, each element once, restartable from an offset.
  auto all4 = elements(4);
  for (std::size_t i = 1; i < all4.size(); ++i) {
    REQUIRE(element_id(all4[i - 1]) < element_id(all4[i]));
  }
  Enumerator tail(4, Filter::ideal(2), 100);
  std::vector<PInj> rest;
  while (auto a = tail.next()) {
    rest.push_back(*a);
  }
  std::vector<PInj> expect;
  for (auto const& a : j2) {
    if (element_id(a) >= 100) {
      expect.push_back(a);
    }
  }
  REQUIRE(rest == expect);
  REQUIRE_THROWS_AS(Enumerator(3, Filter::ideal(4)), Error);
}

TEST_CASE("lambda: table values and recurrence", "[construct][lambda]") {
  std::vector<int> table{2, 3, 7, 13, 34, 73, 209, 501, 1546};
  for (std::size_t n = 2; n <= 10; ++n) {
    REQUIRE(lambda(n) == table[n - 2]);
    REQUIRE(lambda_recurrence(n) == table[n - 2]);
  }
  REQUIRE(lambda(11) == 4051);
  REQUIRE(lambda(1) == 1);
  for (std::size_t n = 4; n <= 40; ++n) {
    REQUIRE(lambda(n) == lambda_recurrence(n));
  }
  // Independent evaluation in 64-bit arithmetic for n <= 20.
  for (std::size_t n = 1; n <= 20; ++n) {
    std::uint64_t m = n / 2, s = 0, fr = 1;
    for (std::uint64_t r = 0; r <= m; ++r) {
      if (r > 0) {
        fr *= r;
      }
      s += oracle::binom(m, r) * oracle::binom(n - m, r) * fr;
    }
    REQUIRE(lambda(n) == BigInt(s));
  }
  REQUIRE_THROWS_AS(lambda(0), Error);
}

TEST_CASE("lambda: growth inequalities", "[construct][lambda]") {
  for (std::size_t n = 6; n <= 60; ++n) {
    REQUIRE(lambda(n) > 2 * lambda(n - 1));
  }
  for (std::size_t n = 11; n <= 60; ++n) {
    REQUIRE(lambda(n) + 1 > 2 * (lambda(n - 1) + 1));
  }
  for (std::size_t n = 20; n <= 60; ++n) {
    for (std::size_t k = 10; n - k >= 10; ++k) {
      REQUIRE(lambda(n) + 1 > (lambda(k) + 1) * (lambda(n - k) + 1));
    }
  }
  // Moving a point to the smaller side increases the order.
  for (std::size_t n = 2; n <= 40; ++n) {
    for (std::size_t a = 1; a < n / 2; ++a) {
      REQUIRE(null_order(a + 1, n - a - 1) > null_order(a, n - a));
    }
  }
}

TEST_CASE("balanced_null", "[construct]") {
  auto S = balanced_null(4, PointSet{0, 1}, PointSet{2, 3});
  SemigroupSet expected(4, {PInj(4), P("[1 3]", 4), P("[1 4]", 4),
                            P("[2 3]", 4), P("[2 4]", 4),
                            P("[1 3]|[2 4]", 4), P("[1 4]|[2 3]", 4)});
  REQUIRE(S == expected);
  REQUIRE(S.size() == 7);

  for (std::size_t n = 2; n <= 6; ++n) {
    auto S1 = balanced_null(n, PointSet{0}, PointSet::full(n) - PointSet{0});
    REQUIRE(S1.size() == n);
  }

  auto S10 = balanced_null(10, PointSet(0x1F), PointSet(0x3E0));
  REQUIRE(S10.size() == 1546);
  REQUIRE(BigInt(S10.size()) == lambda(10));
  auto f10 = classify_semigroup(S10);
  REQUIRE(f10.null);
  REQUIRE(f10.commutative);

  // Order formula over every partition, and equality with the set of
  // elements mapping K into L, for n <= 6.
  for (std::size_t n = 2; n <= 10; ++n) {
    auto all = n <= 6 ? oracle::all_pinj(n) : std::vector<PInj>{};
    for (std::uint64_t mask = 1; mask + 1 < (std::uint64_t{1} << n); ++mask) {
      PointSet K(mask), L = PointSet::full(n) - PointSet(mask);
      auto     T = balanced_null(n, K, L);
      std::uint64_t order = 0, fr = 1;
      for (std::uint64_t r = 0; r <= std::min(K.size(), L.size()); ++r) {
        if (r > 0) {
          fr *= r;
        }
        order += oracle::binom(K.size(), r) * oracle::binom(L.size(), r) * fr;
      }
      REQUIRE(T.size() == order);
      if (n <= 6) {
        std::vector<PInj> direct;
        for (auto const& a : all) {
          if (a.domain().subset_of(K) && a.image().subset_of(L)) {
            direct.push_back(a);
          }
        }
        REQUIRE(T == SemigroupSet(n, direct));
      }
    }
  }
  REQUIRE_THROWS_AS(balanced_null(4, PointSet{0, 1}, PointSet{1, 2, 3}), Error);
  REQUIRE_THROWS_AS(balanced_null(4, PointSet{0, 1}, PointSet{2}), Error);
  REQUIRE_THROWS_AS(balanced_null(4, PointSet{}, PointSet::full(4)), Error);
}

TEST_CASE("idempotent_semilattice", "[construct]") {
  REQUIRE(idempotent_semilattice(2)
          == SemigroupSet(2, {PInj(2), P("(1)", 2), P("(2)", 2),
                              PInj::identity(2)}));
  for (std::size_t n = 0; n <= 12; ++n) {
    REQUIRE(idempotent_semilattice(n).size() == (std::size_t{1} << n));
  }
  auto f = classify_semigroup(idempotent_semilattice(3));
  REQUIRE(f.semilattice);
  REQUIRE(f.inverse);
  REQUIRE(f.commutative);
  for (std::size_t n = 1; n <= 8; ++n) {
    auto E = idempotent_semilattice(n);
    for (auto const& a : E) {
      for (auto const& b : E) {
        auto ab = oracle::compose(a, b);
        REQUIRE(ab == oracle::compose(b, a));
        REQUIRE(ab == PInj::identity_on(n, a.domain() & b.domain()));
      }
    }
  }
}

TEST_CASE("closure", "[construct]") {
  for (auto const& c : oracle::all_pinj(3)) {
    if (!is_full_chain(c)) {
      continue;
    }
    auto S = closure(3, {c});
    REQUIRE(S.size() == 3);
    REQUIRE(S == SemigroupSet(3, {PInj(3), c, power(c, 2)}));
  }
  auto E = idempotent_semilattice(4);
  REQUIRE(closure(4, E.elements()) == E);
  auto N = balanced_null(5, PointSet{0, 1}, PointSet{2, 3, 4});
  REQUIRE(closure(5, N.elements()) == N);

  std::mt19937_64 rng(31);
  for (int i = 0; i < 200; ++i) {
    std::size_t       n = 3 + static_cast<std::size_t>(i % 2);
    std::vector<PInj> seed;
    for (int j = 0; j < 2; ++j) {
      seed.push_back(oracle::random_pinj(n, rng));
    }
    REQUIRE(closure(n, seed) == SemigroupSet(n, oracle_closure(seed)));
  }
  // Pairwise commuting seeds generate commutative semigroups.
  for (int i = 0; i < 200; ++i) {
    auto a = oracle::random_pinj(5, rng);
    auto b = oracle::near_power(a, rng);
    if (!oracle::commutes(a, b)) {
      continue;
    }
    REQUIRE(classify_semigroup(closure(5, {a, b})).commutative);
  }
}

TEST_CASE("classify_semigroup agrees with the definitions",
          "[construct]") {
  auto f = classify_semigroup(balanced_null(6, PointSet{0, 1, 2},
                                            PointSet{3, 4, 5}));
  REQUIRE(f.null);
  REQUIRE(f.nilpotent);
  REQUIRE(!f.inverse);

  auto              cyc = P("(1 2 3 4 5)", 5);
  std::vector<PInj> g{PInj(5)};
  for (std::size_t q = 1; q <= 5; ++q) {
    g.push_back(power(cyc, q));
  }
  auto fg = classify_semigroup(SemigroupSet(5, g));
  REQUIRE(fg.commutative);
  REQUIRE(!fg.nilpotent);
  REQUIRE(fg.inverse);

  REQUIRE_THROWS_AS(classify_semigroup(SemigroupSet(3, {P("[1 2 3]", 3)})),
                    Error);

  std::mt19937_64 rng(77);
  for (int i = 0; i < 300; ++i) {
    std::size_t       n = 2 + static_cast<std::size_t>(i % 3);
    std::vector<PInj> seed;
    auto              k = 1 + i % 3;
    for (int j = 0; j < k; ++j) {
      seed.push_back(oracle::random_pinj(n, rng));
    }
    auto S = oracle_closure(seed);
    if (S.size() > 60) {
      continue;
    }
    REQUIRE(classify_semigroup(SemigroupSet(n, S)) == oracle_flags(S));
  }
  REQUIRE(classify_semigroup(idempotent_semilattice(3))
          == oracle_flags(idempotent_semilattice(3).elements()));
}

TEST_CASE("nilpotent_analysis", "[construct]") {
  for (std::uint64_t mask = 1; mask < 31; ++mask) {
    auto S = balanced_null(5, PointSet(mask), PointSet::full(5) - PointSet(mask));
    REQUIRE(nilpotent_analysis(S).C.empty());
  }
  // <[i j k]> with i, j, k = 1, 2, 3.
  auto S = closure(3, {P("[1 2 3]", 3)});
  auto a = nilpotent_analysis(S);
  REQUIRE(a.C == PointSet{1});
  REQUIRE(a.A.at(1) == PointSet{0});
  REQUIRE(a.B.at(1) == PointSet{2});
  REQUIRE_THROWS_AS(nilpotent_analysis(idempotent_semilattice(3)), Error);
}

TEST_CASE("structure bound over all maximal commutative nilpotent subsemigroups",
          "[construct][slow]") {
  for (std::size_t n = 4; n <= 5; ++n) {
    std::vector<PInj> nil;
    for (auto const& a : oracle::all_pinj(n)) {
      if (!a.is_zero() && oracle::power(a, n).is_zero()) {
        nil.push_back(a);
      }
    }
    std::vector<std::vector<bool>> adj(nil.size(),
                                       std::vector<bool>(nil.size()));
    for (std::size_t i = 0; i < nil.size(); ++i) {
      for (std::size_t j = 0; j < nil.size(); ++j) {
        adj[i][j] = i != j && oracle::commutes(nil[i], nil[j]);
      }
    }
    std::vector<std::size_t> all(nil.size());
    std::iota(all.begin(), all.end(), std::size_t{0});
    std::vector<std::vector<std::size_t>> cliques;
    maximal_cliques(adj, {}, all, {}, cliques);
    std::size_t nonempty_c = 0;
    for (auto const& c : cliques) {
      std::vector<PInj> els{PInj(n)};
      for (auto i : c) {
        els.push_back(nil[i]);
      }
      SemigroupSet S(n, els);
      REQUIRE(closure(n, els) == S);
      auto an = nilpotent_analysis(S);
      for (auto x : an.C.to_vector()) {
        REQUIRE(!an.A.at(x).empty());
        REQUIRE(!an.B.at(x).empty());
        REQUIRE((an.A.at(x) & an.B.at(x)).empty());
      }
      nonempty_c += !an.C.empty();
      REQUIRE(structure_bound_holds(an, n));
    }
    REQUIRE(nonempty_c > 0);
  }
}

TEST_CASE("max_commutative_nilpotent: small n", "[construct][extremal]") {
  auto r3 = max_commutative_nilpotent(3);
  REQUIRE(r3.max_order == 3);
  std::map<WitnessShape, std::size_t> shapes;
  for (auto const& S : r3.witnesses) {
    REQUIRE(S.size() == 3);
    ++shapes[witness_shape(S)];
  }
  REQUIRE(shapes[WitnessShape::balanced_null] > 0);
  REQUIRE(shapes[WitnessShape::cyclic] > 0);
  REQUIRE(shapes[WitnessShape::balanced_null] + shapes[WitnessShape::cyclic]
          == r3.num_max);

  std::vector<std::pair<std::size_t, std::size_t>> table{{7, 6}, {13, 20}};
  for (std::size_t n = 4; n <= 5; ++n) {
    auto r = max_commutative_nilpotent(n);
    REQUIRE(r.max_order == table[n - 4].first);
    REQUIRE(r.num_max == table[n - 4].second);
    for (auto const& S : r.witnesses) {
      REQUIRE(S.size() == r.max_order);
      REQUIRE(witness_shape(S) == WitnessShape::balanced_null);
      auto f = classify_semigroup(S);
      REQUIRE(f.commutative);
      REQUIRE(f.nilpotent);
      REQUIRE(f.null);
    }
  }
  CliqueOptions two;
  two.threads = 2;
  auto a = max_commutative_nilpotent(5);
  auto b = max_commutative_nilpotent(5, two);
  REQUIRE(a.max_order == b.max_order);
  REQUIRE(a.witnesses.size() == b.witnesses.size());
  for (std::size_t i = 0; i < a.witnesses.size(); ++i) {
    REQUIRE(a.witnesses[i] == b.witnesses[i]);
  }
  REQUIRE_THROWS_AS(max_commutative_nilpotent(8), GuardError);
  REQUIRE_THROWS_AS(max_commutative_nilpotent(2), GuardError);
}

TEST_CASE("witness text round-trips", "[construct]") {
  auto S    = balanced_null(4, PointSet{0, 1}, PointSet{2, 3});
  auto text = witness_text(S);
  REQUIRE(text.rfind("n=4 order=7\n", 0) == 0);
  REQUIRE(parse_witness_text(text) == S);
  REQUIRE_THROWS_AS(parse_witness_text("n=4 order=8\n0\n"), Error);
  REQUIRE_THROWS_AS(parse_witness_text("nonsense\n"), Error);
}
