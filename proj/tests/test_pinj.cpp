#include <random>
#include <set>
#include <string>

#include "catch_print.hpp"
#include "oracles.hpp"
#include "symi/enumerate.hpp"
#include "symi/pinj.hpp"

using namespace symi;

namespace {
  PInj P(char const* s, std::size_t n) {
    return parse(s, n);
  }

  // A non-canonical rendering of a: parts shuffled, cycles rotated, extra
  // whitespace.
  template <typename Rng>
  std::string scrambled(PInj const& a, Rng& rng) {
    if (a.is_zero()) {
      return " 0 ";
    }
    auto                     d = decompose(a);
    std::vector<std::string> items;
    std::uniform_int_distribution<int> sp(0, 2);
    auto ws = [&] { return std::string(static_cast<std::size_t>(sp(rng)), ' '); };
    for (auto c : d.cycles) {
      std::uniform_int_distribution<std::size_t> rot(0, c.size() - 1);
      std::rotate(c.begin(), c.begin() + static_cast<long>(rot(rng)), c.end());
      std::string s = "(" + ws();
      for (auto x : c) {
        s += std::to_string(x + 1) + " " + ws();
      }
      items.push_back(s + ")");
    }
    for (auto const& c : d.chains) {
      std::string s = "[" + ws();
      for (auto x : c) {
        s += std::to_string(x + 1) + " " + ws();
      }
      items.push_back(s + "]");
    }
    std::shuffle(items.begin(), items.end(), rng);
    std::string out = ws();
    for (std::size_t i = 0; i < items.size(); ++i) {
      out += (i ? ws() + "|" + ws() : "") + items[i];
    }
    return out + ws();
  }
}  // namespace

TEST_CASE("compose: squares of the cycle-chain example", "[pinj]") {
  auto a = P("(1 2 3 4)|[5 6 7 8]", 8);
  REQUIRE(a * a == P("(1 3)|(2 4)|[5 7]|[6 8]", 8));
  REQUIRE(format(a * a) == "(1 3)|(2 4)|[5 7]|[6 8]");
  REQUIRE(a * PInj::identity(8) == a);
  REQUIRE(PInj::identity(8) * a == a);
}

TEST_CASE("compose: random pairs agree with pointwise evaluation", "[pinj]") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 1000; ++i) {
    auto a = oracle::random_pinj(8, rng);
    auto b = oracle::random_pinj(8, rng);
    REQUIRE(compose(a, b) == oracle::compose(a, b));
    REQUIRE(compose(a, b).rank() <= std::min(a.rank(), b.rank()));
  }
  REQUIRE_THROWS_AS(compose(PInj(3), PInj(4)), Error);
}

TEST_CASE("inverse", "[pinj]") {
  REQUIRE(inverse(PInj(4)) == PInj(4));
  REQUIRE(inverse(P("[1 2 3]", 3)) == P("[3 2 1]", 3));
  for (auto const& a : oracle::all_pinj(3)) {
    auto ai = inverse(a);
    REQUIRE(a * ai * a == a);
    REQUIRE(ai * a * ai == ai);
    REQUIRE(ai.domain() == a.image());
  }
}

TEST_CASE("power", "[pinj]") {
  auto a = P("(1 2 3 4)|[5 6 7 8]", 8);
  REQUIRE(power(a, 3) == P("(1 4 3 2)|[5 8]", 8));
  REQUIRE(power(a, 4) == P("(1)|(2)|(3)|(4)", 8));
  REQUIRE(power(a, 1) == a);
  REQUIRE_THROWS_AS(power(a, 0), Error);
  auto t = P("[2 5 1 4]", 6);
  REQUIRE(classify(t).nilpotent_index == 4u);
  REQUIRE(power(t, 4).is_zero());
  REQUIRE(!power(t, 3).is_zero());

  std::mt19937_64 rng(5);
  std::uniform_int_distribution<std::size_t> e(1, 6);
  for (int i = 0; i < 2000; ++i) {
    auto b = oracle::random_pinj(9, rng);
    auto p = e(rng);
    auto q = e(rng);
    REQUIRE(power(b, p) == oracle::power(b, p));
    REQUIRE(power(b, p + q) == power(b, p) * power(b, q));
  }
}

TEST_CASE("decompose: displayed example and identity", "[pinj]") {
  PInj a = PInj::from_images({1, 2, 3, 0, 5, 6, 7, -1});
  auto d = decompose(a);
  REQUIRE(d.cycles == std::vector<std::vector<point_t>>{{0, 1, 2, 3}});
  REQUIRE(d.chains == std::vector<std::vector<point_t>>{{4, 5, 6, 7}});

  auto id = decompose(PInj::identity(5));
  REQUIRE(id.cycles.size() == 5);
  REQUIRE(id.chains.empty());
  auto z = decompose(PInj(5));
  REQUIRE(z.cycles.empty());
  REQUIRE(z.chains.empty());
}

TEST_CASE("decompose: canonical form is unique and round-trips", "[pinj]") {
  auto check = [](PInj const& a) {
    auto d = decompose(a);
    REQUIRE(join(d) == a);
    REQUIRE(decompose(join(d)) == d);
    PointSet seen;
    for (auto const& c : d.cycles) {
      REQUIRE(c[0] == *std::min_element(c.begin(), c.end()));
    }
    for (auto const& p : parts(d)) {
      REQUIRE((p.span() & seen).empty());
      seen = seen | p.span();
    }
    REQUIRE(seen == a.span());
    for (std::size_t i = 1; i < d.chains.size(); ++i) {
      REQUIRE(*std::min_element(d.chains[i - 1].begin(), d.chains[i - 1].end())
              < *std::min_element(d.chains[i].begin(), d.chains[i].end()));
    }
  };
  for (std::size_t n = 0; n <= 4; ++n) {
    for (auto const& a : oracle::all_pinj(n)) {
      check(a);
    }
  }
  std::mt19937_64 rng(3);
  for (std::size_t n = 1; n <= 12; ++n) {
    for (int i = 0; i < 100000 / 12; ++i) {
      check(oracle::random_pinj(n, rng));
    }
  }
}

TEST_CASE("join", "[pinj]") {
  REQUIRE(join({}, 4) == PInj(4));
  REQUIRE(join({P("(1 2)", 4), P("[3 4]", 4)}, 4)
          == PInj::from_images({1, 0, 3, -1}));
  REQUIRE_THROWS_AS(join({P("(1 2)", 4), P("[2 3]", 4)}, 4), Error);
  std::mt19937_64 rng(8);
  for (int i = 0; i < 10000; ++i) {
    auto a  = oracle::random_pinj(10, rng);
    auto ps = parts(decompose(a));
    REQUIRE(join(std::span<PInj const>(ps), 10) == a);
  }
}

TEST_CASE("classify: examples", "[pinj]") {
  auto e = classify(P("(1)|(2)", 3));
  REQUIRE(e.kind == Kind::idempotent);
  REQUIRE(e.rank == 2);
  auto c = classify(P("[1 2 3]", 3));
  REQUIRE(c.kind == Kind::nilpotent);
  REQUIRE(c.nilpotent_index == 3u);
  REQUIRE(c.rank == 2);
  auto p = classify(P("(1 2 3 4 5 8 7 6 9)", 9));
  REQUIRE(p.kind == Kind::permutation);
  REQUIRE(p.is_n_cycle);
  REQUIRE(classify(PInj(3)).kind == Kind::zero);
  REQUIRE(classify(PInj::identity(3)).kind == Kind::identity);
  REQUIRE(classify(P("(1 2)|[3 4]", 4)).kind == Kind::mixed);
}

TEST_CASE("classify: agrees with direct computation", "[pinj]") {
  for (std::size_t n = 1; n <= 4; ++n) {
    for (auto const& a : oracle::all_pinj(n)) {
      auto c = classify(a);
      bool idem = oracle::compose(a, a) == a;
      REQUIRE(idem == (c.kind == Kind::idempotent || c.kind == Kind::zero
                       || c.kind == Kind::identity));
      std::optional<std::size_t> index;
      for (std::size_t p = 1; p <= n + 1; ++p) {
        if (oracle::power(a, p).is_zero()) {
          index = p;
          break;
        }
      }
      REQUIRE(index == c.nilpotent_index);
      REQUIRE(c.is_n_cycle == is_n_cycle(a));
      if (c.kind == Kind::permutation || c.kind == Kind::identity) {
        REQUIRE(a.rank() == n);
      }
    }
  }
}

TEST_CASE("parse and format", "[pinj]") {
  REQUIRE(parse("0", 5) == PInj(5));
  REQUIRE(parse("id", 5) == PInj::identity(5));
  REQUIRE(parse("(1 2 3 4)|[5 6 7 8]", 8)
          == PInj::from_images({1, 2, 3, 0, 5, 6, 7, -1}));
  REQUIRE(format(parse("[5 6 7 8] | (3 4 1 2)", 8)) == "(1 2 3 4)|[5 6 7 8]");
  REQUIRE(format(parse("(2)|(1)", 3)) == "(1)|(2)");
  REQUIRE(format(parse("(1)|(2)|(3)", 3)) == "id");

  auto pos_of = [](std::string const& s, std::size_t n) -> std::size_t {
    try {
      (void) parse(s, n);
    } catch (ParseError const& e) {
      return e.position();
    }
    return std::string::npos;
  };
  REQUIRE(pos_of("(1 2", 3) == 4);
  REQUIRE(pos_of("(1 4)", 3) == 3);
  REQUIRE(pos_of("(1 2)|[2 3]", 3) == 7);
  REQUIRE(pos_of("[1]", 3) == 0);
  REQUIRE(pos_of("()", 3) == 0);
  REQUIRE(pos_of("(1 2) (3)", 3) == 6);
  REQUIRE(pos_of("(1 x)", 3) == 3);
  REQUIRE(pos_of("0 1", 3) == 2);
  REQUIRE(pos_of("", 3) == 0);

  std::mt19937_64 rng(21);
  std::uniform_int_distribution<std::size_t> nd(1, 12);
  for (int i = 0; i < 1000; ++i) {
    auto n = nd(rng);
    auto a = oracle::random_pinj(n, rng);
    auto s = scrambled(a, rng);
    REQUIRE(parse(s, n) == a);
    REQUIRE(format(parse(s, n)) == format(a));
    REQUIRE(parse(format(a), n) == a);
  }
}

TEST_CASE("element IDs are a bijection onto 0..|I(n)|-1", "[pinj][id]") {
  for (std::size_t n = 0; n <= 5; ++n) {
    auto                    all = oracle::all_pinj(n);
    std::set<std::uint64_t> ids;
    for (auto const& a : all) {
      auto id = element_id(a);
      REQUIRE(element_from_id(n, id) == a);
      ids.insert(id);
    }
    REQUIRE(ids.size() == all.size());
    REQUIRE(*ids.rbegin() + 1 == all.size());
    REQUIRE(id_count(n) == all.size());
  }
  std::mt19937_64 rng(4);
  for (int i = 0; i < 2000; ++i) {
    auto a = oracle::random_pinj(14, rng);
    auto b = oracle::random_pinj(14, rng);
    REQUIRE(element_from_id(14, element_id(a)) == a);
    REQUIRE(id_less(a, b) == (element_id(a) < element_id(b)));
  }
  REQUIRE_THROWS_AS(element_id(PInj(19)), Error);
}
