#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <unordered_set>
#include <vector>

#include "commute.hpp"
#include "enumerate.hpp"
#include "error.hpp"
#include "graph.hpp"
#include "pinj.hpp"
#include "semigroup_set.hpp"

namespace symi {

  ////////////////////////////////////////////////////////////////////////
  // Size thresholds
  ////////////////////////////////////////////////////////////////////////

  // Size of the smaller side of a balanced split of n points.
  constexpr std::size_t balanced_split(std::size_t n) noexcept {
    return n / 2;
  }

  // J_r has diameter 2 exactly when r <= ideal_threshold(n).
  constexpr std::size_t ideal_threshold(std::size_t n) noexcept {
    return n == 0 ? 0 : (n - 1) / 2;
  }

  ////////////////////////////////////////////////////////////////////////
  // lambda_n
  ////////////////////////////////////////////////////////////////////////

  // sum_r C(a,r) C(b,r) r!: the order of S_{K,L} with |K| = a, |L| = b.
  inline BigInt null_order(std::size_t a, std::size_t b) {
    BigInt total = 0;
    for (std::size_t r = 0; r <= std::min(a, b); ++r) {
      total += big_binomial(a, r) * big_binomial(b, r) * big_factorial(r);
    }
    return total;
  }

  inline BigInt lambda(std::size_t n) {
    if (n == 0) {
      throw Error("lambda: n must be at least 1");
    }
    auto m = balanced_split(n);
    return null_order(m, n - m);
  }

  // lambda_1..3 = 1, 2, 3 and lambda_n = lambda_{n-1} + floor(n/2)
  // lambda_{n-2} for n >= 4.
  inline BigInt lambda_recurrence(std::size_t n) {
    if (n == 0) {
      throw Error("lambda: n must be at least 1");
    }
    std::vector<BigInt> l{0, 1, 2, 3};
    for (std::size_t k = 4; k <= n; ++k) {
      l.push_back(l[k - 1] + BigInt(k / 2) * l[k - 2]);
    }
    return l[n];
  }

  ////////////////////////////////////////////////////////////////////////
  // Constructions
  ////////////////////////////////////////////////////////////////////////

  // S_{K,L}: all joins [x1 y1] | ... | [xr yr] with xi in K, yi in L.
  inline SemigroupSet balanced_null(std::size_t n, PointSet K, PointSet L) {
    if (!(K & L).empty() || (K | L) != PointSet::full(n) || K.empty()
        || L.empty()) {
      throw Error("balanced_null: {K, L} must partition X into nonempty "
                  "parts");
    }
    auto              ks = K.to_vector();
    auto              ls = L.to_vector();
    std::vector<PInj> out;
    PInj              cur(n);
    std::vector<bool> used(ls.size(), false);
    std::function<void(std::size_t)> rec = [&](std::size_t i) {
      if (i == ks.size()) {
        out.push_back(cur);
        return;
      }
      rec(i + 1);
      for (std::size_t j = 0; j < ls.size(); ++j) {
        if (!used[j]) {
          used[j] = true;
          cur.set_unchecked(ks[i], ls[j]);
          rec(i + 1);
          cur.set_unchecked(ks[i], undefined);
          used[j] = false;
        }
      }
    };
    rec(0);
    return SemigroupSet(n, std::move(out));
  }

  // E(I(n)): the 2^n partial identities.
  inline SemigroupSet idempotent_semilattice(std::size_t n) {
    return SemigroupSet(n, elements(n, Filter::idempotent()));
  }

  // The subsemigroup generated by seed.
  inline SemigroupSet closure(std::size_t n, std::vector<PInj> const& seed) {
    std::unordered_set<PInj> have(seed.begin(), seed.end());
    std::vector<PInj>        all(have.begin(), have.end());
    for (auto const& a : all) {
      if (a.degree() != n) {
        throw Error("closure: element of the wrong degree");
      }
    }
    // Invariant: all products of pairs within all[0..done) are present.
    std::size_t done = 0;
    while (done < all.size()) {
      auto const a = all[done];
      for (std::size_t j = 0; j <= done; ++j) {
        for (auto const& p : {a * all[j], all[j] * a}) {
          if (have.insert(p).second) {
            all.push_back(p);
          }
        }
      }
      ++done;
    }
    return SemigroupSet(n, std::move(all));
  }

  // Direct-definition flags.  Throws unless S is closed under product.
  inline SemigroupFlags classify_semigroup(SemigroupSet const& S) {
    if (auto const& f = S.cached_flags()) {
      return *f;
    }
    if (!S.is_closed()) {
      throw Error("classify_semigroup: set is not closed under product");
    }
    auto const&    el = S.elements();
    auto const     n  = S.degree();
    SemigroupFlags f;
    f.contains_zero     = S.contains(PInj::zero(n));
    f.contains_identity = S.contains(PInj::identity(n));
    f.commutative       = true;
    f.null              = f.contains_zero;
    for (std::size_t i = 0; i < el.size(); ++i) {
      for (std::size_t j = 0; j < el.size(); ++j) {
        auto ab = el[i] * el[j];
        if (f.commutative && j > i && ab != el[j] * el[i]) {
          f.commutative = false;
        }
        if (f.null && !ab.is_zero()) {
          f.null = false;
        }
      }
    }
    // Nilpotent: every element has a power equal to 0.
    f.nilpotent = f.contains_zero
                  && std::none_of(el.begin(), el.end(),
                                  [](PInj const& a) { return a.has_cycle(); });
    // Inverse: regular, and the idempotents commute.
    bool regular = true;
    for (auto const& a : el) {
      bool found = false;
      for (auto const& b : el) {
        if (a * b * a == a && b * a * b == b) {
          found = true;
          break;
        }
      }
      if (!found) {
        regular = false;
        break;
      }
    }
    std::vector<PInj> idem;
    for (auto const& a : el) {
      if (a * a == a) {
        idem.push_back(a);
      }
    }
    bool idem_commute = true;
    for (auto const& e : idem) {
      for (auto const& g : idem) {
        if (e * g != g * e) {
          idem_commute = false;
        }
      }
    }
    f.inverse     = regular && idem_commute;
    f.semilattice = f.commutative && idem.size() == el.size();
    S.set_flags(f);
    return f;
  }

  ////////////////////////////////////////////////////////////////////////
  // Commutative nilpotent subsemigroups
  ////////////////////////////////////////////////////////////////////////

  struct NilpotentAnalysis {
    PointSet                     C;
    std::map<point_t, PointSet>  A;
    std::map<point_t, PointSet>  B;
  };

  inline NilpotentAnalysis nilpotent_analysis(SemigroupSet const& S) {
    auto f = classify_semigroup(S);
    if (!f.commutative || !f.nilpotent) {
      throw Error("nilpotent_analysis: S must be commutative and nilpotent");
    }
    NilpotentAnalysis r;
    PointSet          doms, imas;
    for (auto const& a : S) {
      doms = doms | a.domain();
      imas = imas | a.image();
    }
    r.C = doms & imas;
    for (auto c : r.C.to_vector()) {
      PointSet A, B;
      for (auto const& a : S) {
        for (std::size_t x = 0; x < S.degree(); ++x) {
          if (a[x] == c) {
            A.insert(x);
          }
        }
        if (a[c] != undefined) {
          B.insert(a[c]);
        }
      }
      if (!(A & B).empty()) {
        throw Error("nilpotent_analysis: A_c and B_c intersect");
      }
      r.A[c] = A;
      r.B[c] = B;
    }
    return r;
  }

  // Some c in C has |A_c|,|B_c| >= 2, or one of them of size 1 and the
  // other at most floor(n/2).  Vacuously true when C is empty.
  inline bool structure_bound_holds(NilpotentAnalysis const& a, std::size_t n) {
    if (a.C.empty()) {
      return true;
    }
    auto const h = balanced_split(n);
    for (auto c : a.C.to_vector()) {
      auto sa = a.A.at(c).size();
      auto sb = a.B.at(c).size();
      if ((sa >= 2 && sb >= 2) || (sa == 1 && sb <= h)
          || (sb == 1 && sa <= h)) {
        return true;
      }
    }
    return false;
  }

  enum class WitnessShape { balanced_null, null_other, cyclic, other };

  inline char const* to_string(WitnessShape s) noexcept {
    switch (s) {
      case WitnessShape::balanced_null: return "balanced-null";
      case WitnessShape::null_other: return "null";
      case WitnessShape::cyclic: return "cyclic";
      case WitnessShape::other: return "other";
    }
    return "?";
  }

  // Balanced null S_{K,L} (|K|, |L| as equal as possible), cyclic
  // ({0} together with the powers of one element), or neither.
  inline WitnessShape witness_shape(SemigroupSet const& S) {
    auto const n = S.degree();
    PointSet   K, L;
    for (auto const& a : S) {
      K = K | a.domain();
      L = L | a.image();
    }
    auto rest = PointSet::full(n) - (K | L);
    if ((K & L).empty()) {
      // Points outside every span may sit on either side; try both.
      auto free = rest.to_vector();
      for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << free.size());
           ++mask) {
        PointSet k = K, l = L;
        for (std::size_t i = 0; i < free.size(); ++i) {
          ((mask >> i) & 1 ? k : l).insert(free[i]);
        }
        if (k.empty() || l.empty()) {
          continue;
        }
        auto small = std::min(k.size(), l.size());
        if (S == balanced_null(n, k, l)) {
          return small == balanced_split(n) ? WitnessShape::balanced_null
                                            : WitnessShape::null_other;
        }
      }
    }
    for (auto const& g : S) {
      if (g.is_zero()) {
        continue;
      }
      std::vector<PInj> pw{PInj::zero(n)};
      for (std::size_t p = 1; p <= n + 1; ++p) {
        pw.push_back(power(g, p));
      }
      if (SemigroupSet(n, pw) == S) {
        return WitnessShape::cyclic;
      }
    }
    return WitnessShape::other;
  }

  struct ExtremalReport {
    std::size_t               n         = 0;
    std::size_t               max_order = 0;
    std::size_t               num_max   = 0;
    std::vector<SemigroupSet> witnesses;
    std::uint64_t             nodes = 0;
  };

  inline constexpr std::size_t max_extremal_degree = 7;

  // Maximum order of a commutative nilpotent subsemigroup of I(n) and all
  // subsemigroups attaining it: the maximum cliques of the commuting graph
  // on the nonzero nilpotents, each with 0 added.
  inline ExtremalReport max_commutative_nilpotent(std::size_t   n,
                                                  CliqueOptions opt   = {},
                                                  bool          force = false) {
    if (n < 1 || (!force && (n < 3 || n > max_extremal_degree))) {
      throw GuardError("extremal search supports 3 <= n <= "
                       + std::to_string(max_extremal_degree)
                       + " (got n = " + std::to_string(n) + ")");
    }
    auto const zero = PInj::zero(n);
    auto g = CommutingGraph::build(n, elements(n, Filter::nilpotent()),
                                   CenterRule::explicit_set, {zero},
                                   opt.threads);
    opt.all = true;
    auto           cl = maximum_cliques(g.adjacency(), opt);
    ExtremalReport rep;
    rep.n     = n;
    rep.nodes = cl.nodes;
    std::set<std::vector<std::uint64_t>> seen;
    for (auto const& c : cl.cliques) {
      std::vector<PInj> els{zero};
      for (auto i : c) {
        els.push_back(g.vertex(i));
      }
      SemigroupSet S(n, els);
      if (!(closure(n, els) == S)) {
        throw Error("maximum clique is not closed under product");
      }
      auto f = classify_semigroup(S);
      if (!f.commutative || !f.nilpotent) {
        throw Error("maximum clique is not a commutative nilpotent semigroup");
      }
      if (seen.insert(S.ids()).second) {
        rep.witnesses.push_back(std::move(S));
      }
    }
    rep.max_order = cl.size + 1;
    rep.num_max   = rep.witnesses.size();
    return rep;
  }

  // "n=<n> order=<k>" then one canonical element per line.
  inline std::string witness_text(SemigroupSet const& S) {
    std::ostringstream os;
    os << "n=" << S.degree() << " order=" << S.size() << "\n";
    for (auto const& a : S) {
      os << format(a) << "\n";
    }
    return os.str();
  }

  inline SemigroupSet parse_witness_text(std::string const& text) {
    std::istringstream is(text);
    std::string        header;
    std::getline(is, header);
    std::size_t n = 0, order = 0;
    if (std::sscanf(header.c_str(), "n=%zu order=%zu", &n, &order) != 2) {
      throw Error("witness: bad header '" + header + "'");
    }
    std::vector<PInj> els;
    std::string       line;
    while (std::getline(is, line)) {
      if (!line.empty()) {
        els.push_back(parse(line, n));
      }
    }
    SemigroupSet S(n, std::move(els));
    if (S.size() != order) {
      throw Error("witness: header order does not match the element count");
    }
    return S;
  }

}  // namespace symi
