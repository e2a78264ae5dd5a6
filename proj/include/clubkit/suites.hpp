#pragma once

/* The named check suites behind the command line.
 *
 * Each suite walks the loaded universe and appends CheckRecords to a shared
 * report.  Everything is deterministic for a fixed universe and seed: members
 * iterate in name order, the fuzzer draws from a fixed-seed mt19937_64, and
 * no record depends on wall-clock time.  A check that throws is a failed
 * check carrying the error text, never a crashed run.
 *
 *   category-laws         validators on every member, then seeded mutation
 *                         drills that each must be caught
 *   profunctor-coherence  unitors, associators, composites, collages
 *   clubalt               monad laws plus the cartesianness suite
 *   hps                   pullback squares, tensored instances, the inverse
 *   altclubdesc           horizontal tensors, whiskering, interchange
 *   roundtrip             serialization and evaluate/reconstruct identities
 */

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "clubkit/report.hpp"
#include "clubkit/universe.hpp"

namespace clubkit {

struct SuiteConfig {
  std::string probes;               // document directory; empty for built-ins
  int arity_lo = 0;
  int arity_hi = 3;
  bool symmetric = true;            // false runs the permutation-free monad
  std::vector<std::string> suites;  // empty means all, in canonical order
  std::uint64_t seed = 0;
  std::string inject;               // named deliberate corruption, for drills
};

namespace detail {

struct World {
  ProbeUniverse u;
  std::map<std::string, Collection0> colls;
  std::map<std::string, CollectionH> hcolls;
};

class Stopwatch {
 public:
  double ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point t0_ = std::chrono::steady_clock::now();
};

/// Run one check body; a throw is a failure with the error text as detail.
template <class Fn>
void checked(Report& r, std::string suite, std::string name, std::string anchor, Fn&& fn) {
  Stopwatch t;
  bool pass = false;
  std::string detail_;
  try {
    pass = fn(detail_);
  } catch (const Error& e) {
    detail_ = e.what();
  } catch (const std::exception& e) {
    detail_ = e.what();
  }
  r.checks.push_back(
      {std::move(suite), std::move(name), std::move(anchor), pass, std::move(detail_), t.ms()});
}

inline std::string diag_text(const std::vector<Diagnostic>& ds) {
  if (ds.empty()) return "";
  return ds.front().code + ": " + ds.front().detail +
         (ds.size() > 1 ? " (+" + std::to_string(ds.size() - 1) + " more)" : "");
}

inline std::vector<int> window(const SuiteConfig& cfg) {
  std::vector<int> w;
  for (int a = cfg.arity_lo; a <= cfg.arity_hi; ++a) w.push_back(a);
  return w;
}

inline CatRef rebuild_cat(const FinCat& c, std::vector<MorRec> mors,
                          std::vector<std::array<int, 3>> comp) {
  return std::make_shared<const FinCat>(
      FinCat::from_parts(c.objects(), std::move(mors), c.identities(), std::move(comp)));
}

}  // namespace detail

/* ---------------------------------------------------------- category-laws */

namespace detail {

/* Mutation drills.  Every class is constructed so the validator must flag the
 * result: the mutated entry is pinned by a law the validator tests directly
 * (unit actions, identity images, endpoint typing), never by a law that a
 * degenerate table could accidentally satisfy. */

inline bool fuzz_cat_unit(const World& w, std::mt19937_64& rng) {
  std::vector<const FinCat*> eligible;
  for (const auto& [n, c] : w.u.cats)
    if (c->n_morphisms() >= 2) eligible.push_back(c.get());
  if (eligible.empty()) return true;
  const FinCat& c = *eligible[rng() % eligible.size()];
  auto comp = c.compose_entries();
  std::vector<std::size_t> unit_entries;
  for (std::size_t i = 0; i < comp.size(); ++i)
    if (comp[i][1] == c.identity_of(c.src(comp[i][0]))) unit_entries.push_back(i);
  std::size_t i = unit_entries[rng() % unit_entries.size()];
  comp[i][2] = (comp[i][2] + 1 + static_cast<int>(rng() % (c.n_morphisms() - 1))) %
               c.n_morphisms();
  return !validate_category(*rebuild_cat(c, c.morphisms(), comp)).empty();
}

inline bool fuzz_pro_endpoint(const World& w, std::mt19937_64& rng) {
  std::vector<const Profunctor*> eligible;
  for (const auto& [n, p] : w.u.pros)
    if (p.n_pros() >= 1) eligible.push_back(&p);
  if (eligible.empty()) return true;
  Profunctor p = *eligible[rng() % eligible.size()];
  p.pros[rng() % p.pros.size()].from = p.tgt_cat->n_objects();
  return !validate_profunctor(p).empty();
}

inline bool fuzz_functor_identity(const World& w, std::mt19937_64& rng) {
  std::vector<const Functor*> eligible;
  for (const auto& [n, f] : w.u.functors)
    if (f.target->n_morphisms() >= 2) eligible.push_back(&f);
  if (eligible.empty()) return true;
  Functor f = *eligible[rng() % eligible.size()];
  int o = static_cast<int>(rng() % f.source->n_objects());
  int good = f.target->identity_of(f.on_obj[o]);
  int bad = (good + 1 + static_cast<int>(rng() % (f.target->n_morphisms() - 1))) %
            f.target->n_morphisms();
  f.on_mor[f.source->identity_of(o)] = bad;
  return !validate_functor(f).empty();
}

inline bool fuzz_pro_unit_action(const World& w, std::mt19937_64& rng) {
  std::vector<const Profunctor*> eligible;
  for (const auto& [n, p] : w.u.pros)
    if (p.n_pros() >= 2) eligible.push_back(&p);
  if (eligible.empty()) return true;
  Profunctor p = *eligible[rng() % eligible.size()];
  int g = static_cast<int>(rng() % p.pros.size());
  int bad = (g + 1 + static_cast<int>(rng() % (p.n_pros() - 1))) % p.n_pros();
  p.lact[detail::key64(p.src_cat->identity_of(p.pros[g].to), g)] = bad;
  return !validate_profunctor(p).empty();
}

inline bool fuzz_collection_arity(const World& w, std::mt19937_64& rng) {
  std::vector<const Collection0*> eligible;
  for (const auto& [n, c] : w.colls) eligible.push_back(&c);
  if (eligible.empty()) return true;
  Collection0 c = *eligible[rng() % eligible.size()];
  c.arity[rng() % c.arity.size()] += 1;
  return !validate_collection0(c).empty();
}

inline bool fuzz_cell_image(const World& w, std::mt19937_64& rng) {
  /* retarget one assignment to a proarrow with different endpoints, so the
   * boundary check must fire no matter what the actions look like */
  std::vector<const Cell*> eligible;
  for (const auto& [n, c] : w.u.cells) {
    for (int p = 0; p < c.source.n_pros(); ++p) {
      const Proarrow& img = c.target.pros[c.on_pro[p]];
      for (int q = 0; q < c.target.n_pros(); ++q)
        if (c.target.pros[q].from != img.from || c.target.pros[q].to != img.to) {
          eligible.push_back(&c);
          goto next_cell;
        }
    }
  next_cell:;
  }
  if (eligible.empty()) return true;
  Cell c = *eligible[rng() % eligible.size()];
  std::vector<std::pair<int, int>> moves;
  for (int p = 0; p < c.source.n_pros(); ++p) {
    const Proarrow& img = c.target.pros[c.on_pro[p]];
    for (int q = 0; q < c.target.n_pros(); ++q)
      if (c.target.pros[q].from != img.from || c.target.pros[q].to != img.to)
        moves.push_back({p, q});
  }
  auto [p, q] = moves[rng() % moves.size()];
  c.on_pro[p] = q;
  return !validate_cell(c).empty();
}

}  // namespace detail

inline void suite_category_laws(Report& r, const SuiteConfig& cfg, const detail::World& w) {
  const std::string S = "category-laws";
  for (const auto& [name, c] : w.u.cats)
    detail::checked(r, S, "tables/" + name, "fincat/validate_category",
                    [&, cp = c](std::string& d) {
                      auto ds = validate_category(*cp);
                      d = detail::diag_text(ds);
                      return ds.empty();
                    });
  for (const auto& [name, f] : w.u.functors)
    detail::checked(r, S, "functor/" + name, "fincat/validate_functor", [&](std::string& d) {
      auto ds = validate_functor(f);
      d = detail::diag_text(ds);
      return ds.empty();
    });
  for (const auto& [name, p] : w.u.pros)
    detail::checked(r, S, "profunctor/" + name, "profunctor/validate_profunctor",
                    [&](std::string& d) {
                      auto ds = validate_profunctor(p);
                      d = detail::diag_text(ds);
                      return ds.empty();
                    });
  for (const auto& [name, c] : w.u.cells)
    detail::checked(r, S, "cell/" + name, "profunctor/validate_cell", [&](std::string& d) {
      auto ds = validate_cell(c);
      d = detail::diag_text(ds);
      return ds.empty();
    });
  for (const auto& [name, c] : w.colls)
    detail::checked(r, S, "collection/" + name, "clubs/validate_collection0",
                    [&](std::string& d) {
                      auto ds = validate_collection0(c);
                      d = detail::diag_text(ds);
                      return ds.empty();
                    });
  for (const auto& [name, h] : w.hcolls)
    detail::checked(r, S, "hcollection/" + name, "dblclubs/validate_collection_h",
                    [&](std::string& d) {
                      auto ds = validate_collection_h(h);
                      d = detail::diag_text(ds);
                      return ds.empty();
                    });
  detail::checked(r, S, "closures", "dblclubs/validate_universe", [&](std::string& d) {
    auto ds = validate_universe(w.u);
    d = detail::diag_text(ds);
    return ds.empty();
  });

  /* 200 mutation rounds, cycling through the classes so each gets a fair
   * share of the budget regardless of how the draw lands */
  struct Drill {
    const char* name;
    const char* anchor;
    bool (*run)(const detail::World&, std::mt19937_64&);
  };
  static const Drill drills[] = {
      {"fuzz/category-unit", "fincat/validate_category", detail::fuzz_cat_unit},
      {"fuzz/proarrow-endpoint", "profunctor/validate_profunctor", detail::fuzz_pro_endpoint},
      {"fuzz/functor-identity", "fincat/validate_functor", detail::fuzz_functor_identity},
      {"fuzz/profunctor-unit-action", "profunctor/validate_profunctor",
       detail::fuzz_pro_unit_action},
      {"fuzz/collection-arity", "clubs/validate_collection0", detail::fuzz_collection_arity},
      {"fuzz/cell-image", "profunctor/validate_cell", detail::fuzz_cell_image},
  };
  constexpr int kRounds = 200;
  constexpr int kClasses = static_cast<int>(sizeof drills / sizeof drills[0]);
  std::mt19937_64 rng(cfg.seed);
  int caught[kClasses] = {};
  int tried[kClasses] = {};
  for (int round = 0; round < kRounds; ++round) {
    int k = round % kClasses;
    ++tried[k];
    caught[k] += drills[k].run(w, rng) ? 1 : 0;
  }
  for (int k = 0; k < kClasses; ++k) {
    detail::checked(r, S, drills[k].name, drills[k].anchor, [&](std::string& d) {
      d = std::to_string(caught[k]) + "/" + std::to_string(tried[k]) + " mutations detected";
      return caught[k] == tried[k];
    });
  }

  if (cfg.inject == "tables") {
    /* a deliberately broken walking arrow: the (u, id_0) composite is gone */
    detail::checked(r, S, "tables/injected", "fincat/validate_category", [&](std::string& d) {
      CatRef two = walking_arrow();
      auto comp = two->compose_entries();
      int u = *two->morphism_index("u");
      int id0 = two->identity_of(*two->object_index("0"));
      comp.erase(std::remove_if(comp.begin(), comp.end(),
                                [&](const std::array<int, 3>& t) {
                                  return t[0] == u && t[1] == id0;
                                }),
                 comp.end());
      auto ds = validate_category(*detail::rebuild_cat(*two, two->morphisms(), comp));
      d = detail::diag_text(ds);
      return ds.empty();
    });
  }
}

/* --------------------------------------------------- profunctor-coherence */

inline void suite_profunctor_coherence(Report& r, const SuiteConfig&, const detail::World& w) {
  const std::string S = "profunctor-coherence";
  for (const auto& [name, p] : w.u.pros) {
    detail::checked(r, S, "unitor-left/" + name, "profunctor/unitor_left", [&](std::string& d) {
      UnitorPair u = unitor_left(p);
      auto ds = validate_cell(u.cell);
      d = detail::diag_text(ds);
      return ds.empty() && cell_bijective(u.cell);
    });
    detail::checked(r, S, "unitor-right/" + name, "profunctor/unitor_right",
                    [&](std::string& d) {
                      UnitorPair u = unitor_right(p);
                      auto ds = validate_cell(u.cell);
                      d = detail::diag_text(ds);
                      return ds.empty() && cell_bijective(u.cell);
                    });
    detail::checked(r, S, "collage/" + name, "profunctor/collage", [&](std::string& d) {
      Collage col = collage(p);
      auto ds = validate_category(*col.cat);
      auto df = validate_functor(col.to_two);
      ds.insert(ds.end(), df.begin(), df.end());
      d = detail::diag_text(ds);
      return ds.empty();
    });
  }
  for (const auto& [yn, Y] : w.u.pros)
    for (const auto& [xn, X] : w.u.pros) {
      if (!same_cat(X.tgt_cat, Y.src_cat)) continue;
      detail::checked(r, S, "composite/" + yn + "|" + xn, "profunctor/pro_compose",
                      [&, &Yp = Y, &Xp = X](std::string& d) {
                        ProComposite t = pro_compose(Yp, Xp);
                        auto ds = validate_profunctor(t.pro);
                        d = detail::diag_text(ds);
                        return ds.empty();
                      });
    }
  for (const auto& [zn, Z] : w.u.pros)
    for (const auto& [yn, Y] : w.u.pros) {
      if (!same_cat(Y.tgt_cat, Z.src_cat)) continue;
      for (const auto& [xn, X] : w.u.pros) {
        if (!same_cat(X.tgt_cat, Y.src_cat)) continue;
        detail::checked(r, S, "associator/" + zn + "|" + yn + "|" + xn, "profunctor/associator",
                        [&, &Zp = Z, &Yp = Y, &Xp = X](std::string& d) {
                          AssociatorResult a = associator(Zp, Yp, Xp);
                          auto ds = validate_cell(a.cell);
                          d = detail::diag_text(ds);
                          return ds.empty() && cell_bijective(a.cell);
                        });
      }
    }
}

/* ---------------------------------------------------------------- clubalt */

namespace detail {

/// Two flatten orders over every composable tuple of doubled-list morphisms
/// whose flattened length stays within the budget; the nested layer is never
/// materialized.  Returns (tuples checked, disagreements).
inline std::pair<long long, long long> two_path_flatten(const SCat& sx, const SCat& ssx,
                                                        bool sym, int budget) {
  std::vector<int> ssg = flat_grade(ssx);
  int n_obj = ssx.cat->n_objects();
  std::vector<std::vector<int>> out_mors(n_obj);
  for (int m = 0; m < ssx.cat->n_morphisms(); ++m) out_mors[ssx.cat->src(m)].push_back(m);

  int n_mor = ssx.cat->n_morphisms();
  std::vector<std::vector<int>> bperm(n_mor), bcomp(n_mor);
  {
    std::vector<std::vector<int>> ip, ic;
    for (int m = 0; m < n_mor; ++m) {
      ip.clear();
      ic.clear();
      for (int c : ssx.mor_comps[m]) {
        ip.push_back(sx.mor_perm[c]);
        ic.push_back(sx.mor_comps[c]);
      }
      auto block = flatten_blocks(ssx.mor_perm[m], ip, ic);
      bperm[m] = std::move(block.perm);
      bcomp[m] = std::move(block.comps);
    }
  }

  long long checked = 0, bad = 0;
  std::vector<const std::vector<int>*> ap, ac, bp, bc;
  FlatMor mid, one, two;
  std::vector<int> picked;
  auto run_tuple = [&](const std::vector<int>& ps) {
    int k = static_cast<int>(ps.size());
    picked.assign(k, 0);
    std::vector<int> tau(k);
    for (int t = 0; t < k; ++t) tau[t] = t;
    do {
      std::vector<int> pick(k, 0);
      for (;;) {
        for (int t = 0; t < k; ++t) picked[t] = out_mors[ps[t]][pick[t]];

        ap.clear();
        ac.clear();
        for (int t = 0; t < k; ++t) {
          ap.push_back(&ssx.mor_perm[picked[t]]);
          ac.push_back(&ssx.mor_comps[picked[t]]);
        }
        flatten_blocks_into(tau, ap, ac, mid);
        bp.clear();
        bc.clear();
        for (int c : mid.comps) {
          bp.push_back(&sx.mor_perm[c]);
          bc.push_back(&sx.mor_comps[c]);
        }
        flatten_blocks_into(mid.perm, bp, bc, one);

        bp.clear();
        bc.clear();
        for (int t = 0; t < k; ++t) {
          bp.push_back(&bperm[picked[t]]);
          bc.push_back(&bcomp[picked[t]]);
        }
        flatten_blocks_into(tau, bp, bc, two);

        ++checked;
        if (one.perm != two.perm || one.comps != two.comps) ++bad;

        int t = k - 1;
        while (t >= 0 && pick[t] + 1 == static_cast<int>(out_mors[ps[t]].size())) pick[t--] = 0;
        if (t < 0) break;
        ++pick[t];
      }
    } while (sym && std::next_permutation(tau.begin(), tau.end()));
  };

  std::vector<int> tuple;
  for (int k = 0; k <= budget; ++k) {
    tuple.assign(k, 0);
    for (;;) {
      int total = 0;
      for (int p : tuple) total += ssg[p];
      if (total <= budget) run_tuple(tuple);
      if (k == 0) break;
      int t = k - 1;
      while (t >= 0 && tuple[t] + 1 == n_obj) tuple[t--] = 0;
      if (t < 0) break;
      ++tuple[t];
    }
  }
  return {checked, bad};
}

}  // namespace detail

inline void suite_clubalt(Report& r, const SuiteConfig& cfg, const detail::World& w) {
  const std::string S = "clubalt";
  std::vector<int> W = detail::window(cfg);
  for (const auto& [name, c] : w.u.cats) {
    SCat sx, ssx;
    bool built = false;
    detail::checked(r, S, "monad-unit-outer/" + name, "smc/mu_cat",
                    [&, cp = c](std::string& d) {
                      sx = S_cat(cp, W, {}, {}, cfg.symmetric);
                      ssx = S_cat(sx.cat, W, flat_grade(sx), W, cfg.symmetric);
                      built = true;
                      Functor mu = mu_cat(ssx, sx);
                      Functor eta_s = eta_cat(sx.cat, ssx);
                      if (!(compose_functors(mu, eta_s) == identity_functor(sx.cat))) {
                        d = "flattening a singleton list of lists is not the identity";
                        return false;
                      }
                      return true;
                    });
    detail::checked(r, S, "monad-unit-inner/" + name, "smc/mu_cat",
                    [&, cp = c](std::string& d) {
                      if (!built) {
                        d = "window construction failed";
                        return false;
                      }
                      Functor mu = mu_cat(ssx, sx);
                      Functor s_eta = S_functor(sx, ssx, eta_cat(cp, sx));
                      if (!(compose_functors(mu, s_eta) == identity_functor(sx.cat))) {
                        d = "flattening a list of singletons is not the identity";
                        return false;
                      }
                      return true;
                    });
    detail::checked(r, S, "monad-assoc/" + name, "smc/mu_cat", [&](std::string& d) {
      if (!built) {
        d = "window construction failed";
        return false;
      }
      auto [checked_n, bad] = detail::two_path_flatten(sx, ssx, cfg.symmetric, cfg.arity_hi);
      d = std::to_string(checked_n) + " tuples compared";
      if (bad != 0) d = std::to_string(bad) + " of " + d + " disagree";
      return bad == 0 && checked_n > 0;
    });
  }

  std::vector<std::pair<std::string, CatRef>> probes(w.u.cats.begin(), w.u.cats.end());
  std::vector<std::pair<std::string, Collection0>> colls(w.colls.begin(), w.colls.end());
  for (const CheckResult& cr : clubalt_suite(probes, colls, W, cfg.symmetric))
    r.checks.push_back({S, cr.name, "clubs/clubalt_suite", cr.pass, cr.detail, 0.0});
}

/* -------------------------------------------------------------------- hps */

inline void suite_hps(Report& r, const SuiteConfig& cfg, const detail::World& w) {
  const std::string S = "hps";

  /* every canonical pullback drawn from the functor corpus must pass both
   * the functor-level check and its profunctor restatement */
  std::map<std::string, Functor> corpus = w.u.functors;
  for (const auto& [name, c] : w.u.cats) {
    corpus["id:" + name] = identity_functor(c);
    corpus["bang:" + name] = bang(c);
  }
  for (const auto& [fn, f] : corpus)
    for (const auto& [gn, g] : corpus) {
      if (!same_cat(f.target, g.target)) continue;
      detail::checked(r, S, "hps2/" + fn + "|" + gn, "dblclubs/hps2_check",
                      [&, &fr = f, &gr = g](std::string& d) {
                        Pullback pb = canonical_pullback(fr, gr);
                        CommutingSquare sq{pb.p2, pb.p1, gr, fr};
                        ComparisonReport r0 = is_pullback(sq);
                        ComparisonReport r2 = hps2_check(sq);
                        if (r0.verdict != r2.verdict) {
                          d = "functor-level and profunctor-level verdicts disagree";
                          return false;
                        }
                        if (!r2.verdict) d = r2.counterexample.value_or("not a pullback");
                        return r2.verdict;
                      });
    }
  for (const auto& [name, c] : w.u.cats) {
    if (c->n_objects() < 2) continue;
    detail::checked(r, S, "hps2-rejects/" + name, "dblclubs/hps2_check",
                    [&, cp = c](std::string& d) {
                      /* commutes, but the apex would have to be the square */
                      CommutingSquare sq{identity_functor(cp), identity_functor(cp), bang(cp),
                                         bang(cp)};
                      ComparisonReport r0 = is_pullback(sq);
                      ComparisonReport r2 = hps2_check(sq);
                      if (r0.verdict != r2.verdict) {
                        d = "functor-level and profunctor-level verdicts disagree";
                        return false;
                      }
                      if (r2.verdict) d = "undersized apex accepted";
                      return !r2.verdict;
                    });
  }

  /* tensored instances built by the list construction over each probe */
  for (const auto& [name, c] : w.u.cats) {
    HpsInstance inst;
    bool built = false;
    detail::checked(r, S, "hps-instance/" + name, "dblclubs/validate_hps_instance",
                    [&, cp = c](std::string& d) {
                      std::vector<int> W = detail::window(cfg);
                      for (int a : collection_arities(w.colls.at("loop-swap"))) W.push_back(a);
                      std::sort(W.begin(), W.end());
                      W.erase(std::unique(W.begin(), W.end()), W.end());

                      CollectionH h = hcoll_identity(w.colls.at("loop-swap"));
                      SPro si1 = point_window(W, cfg.symmetric);
                      Profunctor X = pro_identity(cp);
                      SCat sxc = S_cat(cp, W, {}, {}, cfg.symmetric);
                      SPro six = S_pro(X, sxc, sxc);
                      HCollComponent comp = reconstruct1(h, X, si1, six);

                      Cell eb = invert_cell(e_comp(si1.s, si1));
                      Cell rleg = compose_cells(eb, theta_procell(h, si1));
                      Cell bleg = compose_cells(eb, S_cell(bang_cell(X), six, si1));
                      inst = HpsInstance{{comp.bang, comp.alpha, rleg, bleg},
                                         {comp.bang, comp.alpha, rleg, bleg}};
                      built = true;
                      auto ds = validate_hps_instance(inst);
                      d = detail::diag_text(ds);
                      return ds.empty();
                    });
    detail::checked(r, S, "hps1/" + name, "dblclubs/hps1_check", [&](std::string& d) {
      if (!built) {
        d = "instance construction failed";
        return false;
      }
      ComparisonReport rep = hps1_check(inst);
      if (!rep.verdict) d = rep.counterexample.value_or("comparison not invertible");
      return rep.verdict;
    });
    detail::checked(r, S, "hps-inverse/" + name, "dblclubs/hps_inverse", [&](std::string& d) {
      if (!built) {
        d = "instance construction failed";
        return false;
      }
      HpsInverse inv = hps_inverse(inst);
      if (!cell_bijective(inv.u)) d = "comparison cell is not a bijection";
      if (!inv.v_after_u || !inv.u_after_v) d = "lifted inverse does not cancel";
      return cell_bijective(inv.u) && inv.v_after_u && inv.u_after_v;
    });
  }

  /* hypothesis violations must be refused, not mangled */
  detail::checked(r, S, "hps-reject/apex", "dblclubs/hps1_check", [&](std::string& d) {
    Profunctor empty = make_profunctor_ids(terminal_category(), terminal_category(), {}, {}, {});
    Cell ec{empty, pro_identity(terminal_category()), bang(terminal_category()),
            bang(terminal_category()), {}};
    Cell ic = identity_cell(pro_identity(terminal_category()));
    HpsInstance inst{{ec, ec, ic, ic}, {ec, ec, ic, ic}};
    ComparisonReport rep = hps1_check(inst);
    if (rep.verdict) {
      d = "undersized apex accepted";
      return false;
    }
    if (!rep.counterexample.has_value()) {
      d = "failure carries no counterexample";
      return false;
    }
    try {
      hps_inverse(inst);
      d = "inverse built from a non-pullback";
      return false;
    } catch (const Error& e) {
      if (e.code != Errc::HypothesisFailed) {
        d = e.what();
        return false;
      }
    }
    return true;
  });
  detail::checked(r, S, "hps-reject/opfibration", "dblclubs/hps_inverse", [&](std::string& d) {
    Functor f2 = make_functor(terminal_category(), walking_iso(), {{"*", "a"}}, {});
    Cell fc = pro_identity_cell(f2);
    Cell ic = identity_cell(pro_identity(terminal_category()));
    HpsInstance inst{{ic, ic, fc, fc}, {ic, ic, fc, fc}};
    try {
      hps_inverse(inst);
    } catch (const Error& e) {
      if (e.code == Errc::HypothesisFailed) return true;
      d = e.what();
      return false;
    }
    d = "lift over a non-opfibration was not refused";
    return false;
  });
  detail::checked(r, S, "hps-reject/groupoid", "dblclubs/hps_inverse", [&](std::string& d) {
    Cell ic = identity_cell(pro_identity(walking_arrow()));
    HpsInstance inst{{ic, ic, ic, ic}, {ic, ic, ic, ic}};
    try {
      hps_inverse(inst);
    } catch (const Error& e) {
      if (e.code == Errc::HypothesisFailed) return true;
      d = e.what();
      return false;
    }
    d = "lift over a non-groupoid base was not refused";
    return false;
  });

  if (cfg.inject == "hps") {
    /* a square whose apex was emptied out; the check must fail and say so */
    detail::checked(r, S, "hps1/injected", "dblclubs/hps1_check", [&](std::string& d) {
      Profunctor empty =
          make_profunctor_ids(terminal_category(), terminal_category(), {}, {}, {});
      Cell ec{empty, pro_identity(terminal_category()), bang(terminal_category()),
              bang(terminal_category()), {}};
      Cell ic = identity_cell(pro_identity(terminal_category()));
      HpsInstance inst{{ec, ec, ic, ic}, {ec, ec, ic, ic}};
      ComparisonReport rep = hps1_check(inst);
      d = rep.counterexample.value_or("");
      return rep.verdict;
    });
  }
}

/* ------------------------------------------------------------ altclubdesc */

inline void suite_altclubdesc(Report& r, const SuiteConfig& cfg, const detail::World& w) {
  const std::string S = "altclubdesc";
  std::vector<int> W = detail::window(cfg);
  std::vector<std::pair<std::string, CatRef>> probes(w.u.cats.begin(), w.u.cats.end());
  // every pair below shares the same probes and window, so the per-probe
  // layers are built once; components themselves are streamed, not kept
  ProbeLayerCache layers;

  const std::pair<const char*, const char*> tensor_pairs[] = {
      {"unit", "unit"}, {"loop", "unit"}, {"unit", "loop"}, {"pair10", "loop"}};
  for (const auto& [hn, kn] : tensor_pairs) {
    detail::Stopwatch t;
    HCollTensor out;
    std::string built_err;
    try {
      out = hcoll_tensor(w.hcolls.at(hn), w.hcolls.at(kn), probes, W, cfg.symmetric, &layers,
                         /*keep_components=*/false);
    } catch (const Error& e) {
      built_err = e.what();
    }
    std::string prefix = std::string("tensor(") + hn + "|" + kn + ")/";
    if (!built_err.empty()) {
      r.checks.push_back({S, prefix + "setup", "dblclubs/hcoll_tensor", false, built_err, t.ms()});
      continue;
    }
    for (const CheckResult& cr : out.checks)
      r.checks.push_back({S, prefix + cr.name, "dblclubs/hcoll_tensor", cr.pass, cr.detail, 0.0});
  }

  const std::pair<const char*, const char*> whisker_pairs[] = {{"loop-swap", "unit"},
                                                               {"unit", "twist"}};
  for (const auto& [cn, hn] : whisker_pairs) {
    detail::Stopwatch t;
    WhiskerResult out;
    std::string built_err;
    try {
      out = whisker_collection(w.colls.at(cn), w.hcolls.at(hn), probes, W, cfg.symmetric,
                               &layers);
    } catch (const Error& e) {
      built_err = e.what();
    }
    std::string prefix = std::string("whisker(") + cn + "|" + hn + ")/";
    if (!built_err.empty()) {
      r.checks.push_back(
          {S, prefix + "setup", "dblclubs/whisker_collection", false, built_err, t.ms()});
      continue;
    }
    for (const CheckResult& cr : out.checks)
      r.checks.push_back(
          {S, prefix + cr.name, "dblclubs/whisker_collection", cr.pass, cr.detail, 0.0});
  }

  for (const auto& [pn, X] : w.u.pros) {
    detail::checked(r, S, "action(twist)/" + pn, "dblclubs/pseudonaturality",
                    [&, &Xp = X](std::string& d) {
                      PseudoNat pn_ = pseudonaturality(w.hcolls.at("twist"), Xp, W, cfg.symmetric);
                      auto ds = validate_cell(pn_.cell);
                      d = detail::diag_text(ds);
                      return ds.empty() && cell_bijective(pn_.cell);
                    });
    detail::checked(r, S, "interchange(unit|loop-swap)/" + pn, "dblclubs/interchange",
                    [&, &Xp = X](std::string& d) {
                      PseudoNat ic = interchange(w.colls.at("unit"), w.colls.at("loop-swap"), Xp,
                                                 W, cfg.symmetric);
                      auto ds = validate_cell(ic.cell);
                      d = detail::diag_text(ds);
                      return ds.empty() && cell_bijective(ic.cell);
                    });
  }
}

/* -------------------------------------------------------------- roundtrip */

namespace detail {

inline bool hcoll_equal(const CollectionH& a, const CollectionH& b) {
  return a.src_coll == b.src_coll && a.tgt_coll == b.tgt_coll && a.base_pro == b.base_pro &&
         a.perm == b.perm;
}

/// Name of a universe category the ref is value-equal to, for document slots.
inline std::string cat_name_of(const ProbeUniverse& u, const CatRef& c) {
  for (const auto& [n, k] : u.cats)
    if (same_cat(c, k)) return n;
  fail(Errc::UnresolvedReference, "category is not a member of the universe");
}

}  // namespace detail

inline void suite_roundtrip(Report& r, const SuiteConfig& cfg, const detail::World& w) {
  const std::string S = "roundtrip";

  for (const auto& [name, c] : w.u.cats)
    detail::checked(r, S, "serialize-cat/" + name, "serialize/cat_to_json",
                    [&, cp = c](std::string& d) {
                      Json doc = cat_to_json(*cp);
                      CatRef back = cat_from_json(doc, name);
                      if (!tables_equal(*back, *cp)) {
                        d = "parsed tables differ";
                        return false;
                      }
                      if (cat_to_json(*back).dump() != doc.dump()) {
                        d = "document is not serialization-stable";
                        return false;
                      }
                      return true;
                    });
  for (const auto& [name, f] : w.u.functors)
    detail::checked(r, S, "serialize-functor/" + name, "serialize/functor_to_json",
                    [&](std::string& d) {
                      Json doc = functor_to_json(f, detail::cat_name_of(w.u, f.source),
                                                 detail::cat_name_of(w.u, f.target));
                      Functor back = functor_from_json(doc, w.u.cats, name);
                      if (!(back == f)) {
                        d = "parsed tables differ";
                        return false;
                      }
                      return functor_to_json(back, doc["source"], doc["target"]).dump() ==
                             doc.dump();
                    });
  for (const auto& [name, p] : w.u.pros)
    detail::checked(r, S, "serialize-profunctor/" + name, "serialize/pro_to_json",
                    [&](std::string& d) {
                      Json doc = pro_to_json(p, detail::cat_name_of(w.u, p.src_cat),
                                             detail::cat_name_of(w.u, p.tgt_cat));
                      Profunctor back = pro_from_json(doc, w.u.cats, name);
                      if (!(back == p)) {
                        d = "parsed tables differ";
                        return false;
                      }
                      return pro_to_json(back, doc["src_cat"], doc["tgt_cat"]).dump() ==
                             doc.dump();
                    });
  for (const auto& [name, c] : w.colls)
    detail::checked(r, S, "serialize-collection/" + name, "serialize/collection_to_json",
                    [&](std::string& d) {
                      Json doc = collection_to_json(c);
                      Collection0 back = collection_from_json(doc, name);
                      if (!(back == c)) {
                        d = "parsed tables differ";
                        return false;
                      }
                      return collection_to_json(back).dump() == doc.dump();
                    });

  /* a materialized window document must read back to equal tables */
  for (const auto& [name, c] : w.u.cats)
    detail::checked(r, S, "serialize-window/" + name, "serialize/cat_to_json",
                    [&, cp = c](std::string& d) {
                      SCat sx = S_cat(cp, detail::window(cfg), {}, {}, cfg.symmetric);
                      Json doc = cat_to_json(*sx.cat);
                      if (!tables_equal(*cat_from_json(doc, name), *sx.cat)) {
                        d = "parsed window differs";
                        return false;
                      }
                      return true;
                    });

  /* reading tables back through the point window is the identity */
  for (const auto& [name, c] : w.colls)
    detail::checked(r, S, "roundtrip0/" + name, "clubs/evaluate0", [&](std::string& d) {
      SCat s1 = skeletal_S1(collection_arities(c), cfg.symmetric);
      ClubComponent comp = reconstruct0(c, s1, s1);
      if (!(evaluate0(comp.alpha, s1) == c)) {
        d = "tables changed through the point";
        return false;
      }
      return true;
    });

  /* reconstruct, evaluate, reconstruct again: the two components compare by
   * a bijective induced functor at every probe */
  for (const auto& [name, c] : w.colls)
    for (const auto& [pn, probe] : w.u.cats)
      detail::checked(r, S, "component-iso/" + name + "/" + pn, "clubs/club_compare",
                      [&, pp = probe](std::string& d) {
                        std::vector<int> A = collection_arities(c);
                        SCat s1 = skeletal_S1(A, cfg.symmetric);
                        SCat sx = S_cat(pp, A, {}, {}, cfg.symmetric);
                        ClubComponent comp = reconstruct0(c, s1, sx);
                        Collection0 c2 = evaluate0(reconstruct0(c, s1, s1).alpha, s1);
                        ClubComponent comp2 = reconstruct0(c2, s1, sx);
                        Functor cmp = club_compare(comp2.bang, comp2.alpha, comp);
                        if (!functor_bijective(cmp)) {
                          d = "induced comparison is not a bijection";
                          return false;
                        }
                        return true;
                      });

  /* the horizontal analogue at the identity profunctor of the point */
  for (const auto& [name, h] : w.hcolls)
    detail::checked(r, S, "roundtrip1/" + name, "dblclubs/evaluate1", [&](std::string& d) {
      std::vector<int> A = collection_arities(h.src_coll);
      for (int a : collection_arities(h.tgt_coll)) A.push_back(a);
      std::sort(A.begin(), A.end());
      A.erase(std::unique(A.begin(), A.end()), A.end());
      SPro si1 = point_window(A, cfg.symmetric);
      HCollComponent comp = reconstruct1(h, pro_identity(terminal_category()), si1, si1);
      if (!detail::hcoll_equal(evaluate1(comp.alpha, comp.window), h)) {
        d = "tables changed through the point";
        return false;
      }
      return true;
    });
}

/* ------------------------------------------------------------- dispatcher */

inline Report run_suite(const SuiteConfig& cfg) {
  static const std::pair<const char*,
                         void (*)(Report&, const SuiteConfig&, const detail::World&)>
      table[] = {
          {"category-laws", suite_category_laws},
          {"profunctor-coherence", suite_profunctor_coherence},
          {"clubalt", suite_clubalt},
          {"hps", suite_hps},
          {"altclubdesc", suite_altclubdesc},
          {"roundtrip", suite_roundtrip},
      };
  for (const std::string& s : cfg.suites) {
    bool known = false;
    for (const auto& [name, fn] : table) known = known || s == name;
    if (!known) fail(Errc::ParseError, "unknown suite '" + s + "'");
  }
  detail::World w{load_universe(cfg.probes), load_collections(cfg.probes),
                  default_hcollections()};
  Report r;
  for (const auto& [name, fn] : table) {
    if (!cfg.suites.empty() &&
        std::find(cfg.suites.begin(), cfg.suites.end(), name) == cfg.suites.end())
      continue;
    fn(r, cfg, w);
  }
  return r;
}

}  // namespace clubkit
