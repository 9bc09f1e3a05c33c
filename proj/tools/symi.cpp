// symi: command-line front end for the I(n) toolkit.
//
// Exit codes: 0 success / all checks pass, 1 a check failed, 2 usage error
// (bad arguments, guard exceeded), 3 time budget exceeded.

#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "symi/suites.hpp"

using namespace symi;

namespace {

  enum Exit { ok = 0, failed = 1, usage = 2, budget = 3 };

  struct Common {
    std::size_t n              = 0;
    std::size_t ideal          = 0;
    bool        json           = false;
    std::size_t threads        = 1;
    double      budget_seconds = 0;
    std::string cache_dir;
    bool        force = false;
  };

  void add_common(CLI::App* app, Common& c, bool needs_n = true) {
    auto* o = app->add_option("--n", c.n, "degree of I(n)");
    if (needs_n) {
      o->required();
    }
    o->check(CLI::Range(std::size_t{1}, max_degree));
    app->add_flag("--json", c.json, "print JSON instead of text");
    app->add_option("--threads", c.threads, "worker threads")
        ->check(CLI::Range(1, 256));
  }

  void add_graph_flags(CLI::App* app, Common& c) {
    app->add_option("--ideal", c.ideal, "use the ideal J_r of rank <= r");
    app->add_option("--budget-seconds", c.budget_seconds,
                    "stop searches after this many seconds");
    app->add_option("--cache-dir", c.cache_dir, "graph cache directory");
    app->add_flag("--force", c.force,
                  "lift the desk-scale guards (possibly very slow)");
  }

  void print(ojson const& j) {
    std::cout << j.dump(2) << "\n";
  }

  ojson elem_json(PInj const& a) {
    auto  d = decompose(a);
    auto  c = classify(a);
    ojson j;
    j["text"] = format(a);
    j["n"]    = a.degree();
    auto one  = [](std::vector<point_t> const& v) {
      std::vector<std::size_t> w;
      for (auto x : v) {
        w.push_back(x + 1u);
      }
      return w;
    };
    j["cycles"] = ojson::array();
    for (auto const& cy : d.cycles) {
      j["cycles"].push_back(one(cy));
    }
    j["chains"] = ojson::array();
    for (auto const& ch : d.chains) {
      j["chains"].push_back(one(ch));
    }
    j["rank"]       = c.rank;
    j["kind"]       = to_string(c.kind);
    j["n_cycle"]    = c.is_n_cycle;
    j["idempotent"] = a.is_idempotent();
    if (c.nilpotent_index) {
      j["nilpotent_index"] = *c.nilpotent_index;
    }
    if (a.degree() <= max_id_degree) {
      j["id"] = element_id(a);
    }
    return j;
  }

  void print_elem(ojson const& j) {
    std::cout << j["text"].get<std::string>() << "\n"
              << "  rank " << j["rank"] << ", " << j["kind"].get<std::string>();
    if (j.contains("nilpotent_index")) {
      std::cout << ", nilpotent index " << j["nilpotent_index"];
    }
    if (j["n_cycle"].get<bool>()) {
      std::cout << ", n-cycle";
    }
    std::cout << "\n";
    if (j.contains("id")) {
      std::cout << "  id " << j["id"] << "\n";
    }
  }

  void print_path(PathWitness const& w) {
    for (std::size_t i = 0; i < w.vertices.size(); ++i) {
      std::cout << (i ? " - " : "") << format(w.vertices[i]);
    }
    std::cout << "\nlength " << w.length() << "\n";
  }

  ojson path_json(PathWitness const& w) {
    ojson j;
    j["vertices"] = ojson::array();
    for (auto const& v : w.vertices) {
      j["vertices"].push_back(format(v));
    }
    j["length"] = w.length();
    return j;
  }

  void guard_graph(Common const& c) {
    if (!c.force && c.n > max_full_graph_degree) {
      throw GuardError("graph materialization is limited to n <= "
                       + std::to_string(max_full_graph_degree)
                       + " (use --force to override)");
    }
  }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Symmetric inverse semigroup I(n): elements, commuting graphs, "
               "extremal subsemigroups and verification suites"};
  app.require_subcommand(1);

  // elem
  Common                   ce;
  std::string              elem_a, elem_b;
  std::string              compose_with;
  std::size_t              power_k = 0;
  auto* elem = app.add_subcommand("elem", "parse, compose, decompose, classify");
  add_common(elem, ce);
  elem->add_option("element", elem_a, "element text, e.g. \"(1 2)|[3 4]\"")
      ->required();
  elem->add_option("other", elem_b, "second element: print both products");
  elem->add_option("--compose", compose_with, "right factor for a product");
  elem->add_option("--power", power_k, "raise to this power");

  // centralizer
  Common      cc;
  std::string cen_arg;
  bool        cen_list = false;
  auto* cen = app.add_subcommand("centralizer", "centralizer of an element");
  add_common(cen, cc);
  cen->add_option("element", cen_arg)->required();
  cen->add_option("--ideal", cc.ideal, "restrict to J_r");
  cen->add_flag("--list", cen_list, "list the elements");

  // graph
  Common      cg;
  bool        g_diam = false, g_clique = false;
  std::string g_dot, g_csv;
  auto*       graph = app.add_subcommand("graph", "build or load a commuting graph");
  add_common(graph, cg);
  add_graph_flags(graph, cg);
  graph->add_flag("--diameter", g_diam, "exact diameter by BFS");
  graph->add_flag("--clique", g_clique, "clique number");
  graph->add_option("--dot", g_dot, "write Graphviz DOT to a file");
  graph->add_option("--csv", g_csv, "write the edge list as CSV");

  // extremal
  Common cx;
  bool   x_list = false;
  auto*  extremal = app.add_subcommand(
      "extremal", "maximum commutative nilpotent subsemigroups");
  add_common(extremal, cx);
  add_graph_flags(extremal, cx);
  extremal->add_flag("--list", x_list, "print every witness");

  // witness
  Common      cw;
  std::string w_kind;
  std::string w_a, w_b;
  auto* witness = app.add_subcommand("witness", "witness pairs and paths");
  add_common(witness, cw);
  add_graph_flags(witness, cw);
  witness
      ->add_option("kind", w_kind,
                   "path | nilpotent-pair | ideal-pair | prime-power | align")
      ->required()
      ->check(CLI::IsMember({"path", "nilpotent-pair", "ideal-pair",
                             "prime-power", "align"}));
  witness->add_option("a", w_a, "first element (path, align)");
  witness->add_option("b", w_b, "second element (path, align)");

  // verify
  Common      cv;
  std::string v_suite;
  SuiteParams vp;
  std::size_t v_max_n = 0, v_samples = 0;
  auto* verify = app.add_subcommand("verify", "run a verification suite");
  add_common(verify, cv, false);
  add_graph_flags(verify, cv);
  auto names = suite_names();
  names.push_back("all");
  verify->add_option("suite", v_suite, "suite name or 'all'")
      ->required()
      ->check(CLI::IsMember(names));
  verify->add_option("--max-n", v_max_n, "largest degree for ranged suites");
  verify->add_option("--samples", v_samples, "random samples");
  verify->add_option("--seed", vp.seed, "random seed");

  // search-open
  Common        cs;
  std::size_t   s_samples = 20;
  std::uint64_t s_seed    = 1;
  auto*         search = app.add_subcommand(
      "search-open",
      "sample n-cycle pairs for odd n that is not a prime power; reports "
      "counts, proves nothing");
  add_common(search, cs);
  search->add_option("--samples", s_samples, "number of pairs");
  search->add_option("--seed", s_seed, "random seed");

  try {
    app.parse(argc, argv);
  } catch (CLI::ParseError const& e) {
    auto code = app.exit(e);
    return code == 0 ? ok : usage;
  }

  try {
    if (*elem) {
      auto a = parse(elem_a, ce.n);
      if (!elem_b.empty()) {
        auto  b = parse(elem_b, ce.n);
        ojson j{{"a", format(a)},
                {"b", format(b)},
                {"ab", format(a * b)},
                {"ba", format(b * a)},
                {"commute", commutes(a, b)}};
        if (ce.json) {
          print(j);
        } else {
          std::cout << "ab = " << format(a * b) << "\nba = " << format(b * a)
                    << "\n" << (commutes(a, b) ? "commute" : "do not commute")
                    << "\n";
        }
        return ok;
      }
      if (!compose_with.empty()) {
        a = a * parse(compose_with, ce.n);
      }
      if (power_k > 0) {
        a = power(a, power_k);
      }
      auto j = elem_json(a);
      ce.json ? print(j) : print_elem(j);
      return ok;
    }

    if (*cen) {
      auto a = parse(cen_arg, cc.n);
      auto S = a.is_permutation() && cc.ideal == 0
                   ? centralizer_of_permutation(a)
                   : centralizer_scan(a,
                                      cc.ideal ? Filter::ideal(cc.ideal)
                                               : Filter::all(),
                                      cc.threads);
      if (cc.json) {
        ojson j{{"element", format(a)}, {"size", S.size()}};
        if (cen_list) {
          j["elements"] = detail::formatted(S.elements());
        }
        print(j);
      } else {
        std::cout << "|C(" << format(a) << ")| = " << S.size() << "\n";
        if (cen_list) {
          for (auto const& g : S) {
            std::cout << "  " << format(g) << "\n";
          }
        }
      }
      return ok;
    }

    if (*graph) {
      guard_graph(cg);
      auto r      = cg.ideal ? cg.ideal : cg.n;
      bool loaded = false;
      auto g      = cached_ideal_graph(cg.n, r, cg.cache_dir, cg.threads,
                                       &loaded);
      ojson j{{"n", cg.n},
              {"ideal", r < cg.n ? ojson(r) : ojson(nullptr)},
              {"vertices", g.size()},
              {"edges", g.edge_count()},
              {"from_cache", loaded}};
      if (g_diam) {
        auto d      = diameter(g, cg.threads);
        j["diameter"] = detail::distance_json(d.value);
        if (d.pair) {
          j["attained_by"] = {format(d.pair->first), format(d.pair->second)};
        }
      }
      if (g_clique) {
        CliqueOptions opt;
        opt.threads        = cg.threads;
        opt.budget_seconds = cg.budget_seconds;
        auto cl            = clique_number(g, opt);
        j["clique_number"] = cl.size;
        if (!cl.cliques.empty()) {
          j["clique"] = detail::formatted(cl.cliques.front());
        }
      }
      if (!g_dot.empty()) {
        std::ofstream(g_dot) << to_dot(g);
      }
      if (!g_csv.empty()) {
        std::ofstream(g_csv) << to_edge_csv(g);
      }
      if (cg.json) {
        print(j);
      } else {
        for (auto it = j.begin(); it != j.end(); ++it) {
          std::cout << it.key() << ": " << it.value().dump() << "\n";
        }
      }
      return ok;
    }

    if (*extremal) {
      CliqueOptions opt;
      opt.threads        = cx.threads;
      opt.budget_seconds = cx.budget_seconds;
      auto  r            = max_commutative_nilpotent(cx.n, opt, cx.force);
      ojson j{{"n", cx.n},
              {"max_order", r.max_order},
              {"count", r.num_max},
              {"lambda", detail::big_json(lambda(cx.n))}};
      auto shapes = ojson::object();
      for (auto const& S : r.witnesses) {
        std::string s = to_string(witness_shape(S));
        shapes[s]     = shapes.value(s, 0) + 1;
      }
      j["shapes"] = shapes;
      if (x_list) {
        j["witnesses"] = ojson::array();
        for (auto const& S : r.witnesses) {
          j["witnesses"].push_back(detail::formatted(S.elements()));
        }
      }
      if (cx.json) {
        print(j);
      } else {
        std::cout << "n = " << cx.n << ": maximum order " << r.max_order
                  << ", " << r.num_max << " subsemigroups, lambda_n = "
                  << lambda(cx.n) << "\nshapes " << shapes.dump() << "\n";
        if (x_list) {
          for (auto const& S : r.witnesses) {
            std::cout << witness_text(S) << "\n";
          }
        }
      }
      return ok;
    }

    if (*witness) {
      auto const n = cw.n;
      ojson      j{{"kind", w_kind}, {"n", n}};
      if (w_kind == "path" || w_kind == "align") {
        if (w_a.empty() || w_b.empty()) {
          throw Error(w_kind + " needs two elements");
        }
        auto a = parse(w_a, n);
        auto b = parse(w_b, n);
        if (w_kind == "align") {
          auto m   = align_middle(a, b);
          j["eta"] = format(m);
          cw.json ? print(j) : void(std::cout << format(m) << "\n");
          return ok;
        }
        auto w    = build_path(a, b);
        j["path"] = path_json(w);
        if (cw.json) {
          print(j);
        } else {
          print_path(w);
        }
        return ok;
      }
      std::pair<PInj, PInj> pr;
      if (w_kind == "nilpotent-pair") {
        pr = extremal_nilpotent_pair(n);
      } else if (w_kind == "ideal-pair") {
        pr = ideal_witness_pair(n, cw.ideal);
      } else {
        if (!cw.force && n != 9 && n != 25 && n != 27) {
          throw GuardError("prime-power pairs exist for n in {9, 25, 27}");
        }
        auto p  = prime_power_pair(n == 25 ? 5 : 3, n == 27 ? 3 : 2);
        pr      = {p.alpha, p.beta};
        j["q"]  = p.q;
        j["delta"] = format(p.delta);
        j["eta"]   = format(p.eta);
      }
      j["a"] = format(pr.first);
      j["b"] = format(pr.second);
      if (cw.json) {
        print(j);
      } else {
        for (auto it = j.begin(); it != j.end(); ++it) {
          std::cout << it.key() << ": " << it.value().dump() << "\n";
        }
      }
      return ok;
    }

    if (*verify) {
      if (cv.n) {
        vp.n = cv.n;
      }
      if (cv.ideal) {
        vp.ideal = cv.ideal;
      }
      if (v_max_n) {
        vp.max_n = v_max_n;
      }
      if (v_samples) {
        vp.samples = v_samples;
      }
      vp.threads        = cv.threads;
      vp.budget_seconds = cv.budget_seconds;
      vp.cache_dir      = cv.cache_dir;
      vp.force          = cv.force;
      std::vector<std::string> run;
      if (v_suite == "all") {
        run = suite_names();
      } else {
        run = {v_suite};
      }
      bool  all_pass = true;
      ojson reports  = ojson::array();
      for (auto const& s : run) {
        SuiteReport rep;
        try {
          rep = run_suite(s, vp);
        } catch (GuardError const&) {
          throw;
        } catch (BudgetExceeded const&) {
          throw;
        } catch (Error const& e) {
          std::cerr << "symi: suite " << s << ": " << e.what() << "\n";
          return failed;
        }
        all_pass = all_pass && rep.pass();
        if (cv.json) {
          reports.push_back(rep.to_json());
        } else {
          std::cout << rep.table();
        }
      }
      if (cv.json) {
        print(run.size() == 1 ? reports.front() : reports);
      }
      return all_pass ? ok : failed;
    }

    if (*search) {
      auto  r = search_open(cs.n, s_samples, s_seed, cs.threads);
      ojson j{{"n", r.n},
              {"samples", r.samples},
              {"distance_at_least_5", r.at_least_5},
              {"distance_at_most_4", r.at_most_4},
              {"undecided", r.undecided}};
      j["examples_at_least_5"] = ojson::array();
      for (auto const& [a, b] : r.examples_at_least_5) {
        j["examples_at_least_5"].push_back({format(a), format(b)});
      }
      if (cs.json) {
        print(j);
      } else {
        std::cout << "n = " << r.n << ", " << r.samples
                  << " sampled pairs of n-cycles\n  d >= 5 certified: "
                  << r.at_least_5 << "\n  d <= 4 found: " << r.at_most_4
                  << "\n  undecided: " << r.undecided
                  << "\n(sample counts only; no claim about all pairs)\n";
      }
      return ok;
    }
  } catch (BudgetExceeded const& e) {
    std::cerr << "symi: " << e.what() << "\n";
    return budget;
  } catch (Error const& e) {
    std::cerr << "symi: " << e.what() << "\n";
    return usage;
  } catch (std::exception const& e) {
    std::cerr << "symi: " << e.what() << "\n";
    return failed;
  }
  return usage;
}
