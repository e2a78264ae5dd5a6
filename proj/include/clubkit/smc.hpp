#pragma once

/* Materialization of the free symmetric strict monoidal category monad S (and
 * its permutation-free cousin T) as finite identifier tables.
 *
 * An object of S(X) is a finite list of X-objects, a morphism is a permutation
 * together with a componentwise list of X-morphisms.  Everything is graded:
 * morphisms preserve list length, and when the base objects carry a grade that
 * is constant along base morphisms they also preserve the total grade.  That
 * makes the window cut out by an outer-arity set plus an optional flat-grade
 * set a *full* subcategory that is closed under composition, so restricted
 * materializations are exact, not approximations.
 *
 * Identifier scheme, relied on by the serializers and the round-trip tests:
 *   object    (a,b,c)          components joined by commas, "()" when empty
 *   morphism  (s:2,1|f,g)      one-based permutation images | component ids
 *   identity  id_(a,b,c)       when the permutation and all components are
 * Proarrows of S applied to a profunctor use the same (s:..|..) scheme. */

#include "clubkit/profunctor.hpp"

namespace clubkit {

namespace detail {

inline std::string s_tuple_id(const std::vector<int>& perm, const std::vector<std::string>& comps) {
  std::string s = "(s:";
  s += join(perm.begin(), perm.end(), ",", [](int i) { return std::to_string(i + 1); });
  s += "|";
  s += join(comps.begin(), comps.end(), ",", [](const std::string& c) { return c; });
  return s + ")";
}

inline bool is_identity_perm(const std::vector<int>& perm) {
  for (std::size_t i = 0; i < perm.size(); ++i)
    if (perm[i] != static_cast<int>(i)) return false;
  return true;
}

/* Splice a list of blocks into one flat morphism.  tau permutes the blocks,
 * iperm[i]/icomp[i] are the permutation and components of block i in source
 * order.  Works uniformly for morphisms of S(S(X)) and proarrows of S(S(X))
 * because both carry the same (perm, comps) shape and both preserve block
 * length end to end. */
struct FlatMor {
  std::vector<int> perm;
  std::vector<int> comps;
};

/* Allocation-free core, so exhaustive law checks can run it millions of times.
 * The target offset of block i is the total length of the blocks that land
 * before it; n is small everywhere, so the quadratic scan beats bookkeeping. */
inline void flatten_blocks_into(const std::vector<int>& tau,
                                const std::vector<const std::vector<int>*>& iperm,
                                const std::vector<const std::vector<int>*>& icomp,
                                FlatMor& out) {
  int n = static_cast<int>(tau.size());
  int total = 0;
  for (int i = 0; i < n; ++i) total += static_cast<int>(iperm[i]->size());
  out.perm.assign(total, -1);
  out.comps.clear();
  out.comps.reserve(total);
  int off_s = 0;
  for (int i = 0; i < n; ++i) {
    int off_t = 0;
    for (int j = 0; j < n; ++j)
      if (tau[j] < tau[i]) off_t += static_cast<int>(iperm[j]->size());
    const auto& p = *iperm[i];
    for (std::size_t j = 0; j < p.size(); ++j) out.perm[off_s + static_cast<int>(j)] = off_t + p[j];
    off_s += static_cast<int>(p.size());
    out.comps.insert(out.comps.end(), icomp[i]->begin(), icomp[i]->end());
  }
}

inline FlatMor flatten_blocks(const std::vector<int>& tau,
                              const std::vector<std::vector<int>>& iperm,
                              const std::vector<std::vector<int>>& icomp) {
  std::vector<const std::vector<int>*> ip(iperm.size()), ic(icomp.size());
  for (std::size_t i = 0; i < iperm.size(); ++i) ip[i] = &iperm[i];
  for (std::size_t i = 0; i < icomp.size(); ++i) ic[i] = &icomp[i];
  FlatMor out;
  flatten_blocks_into(tau, ip, ic, out);
  return out;
}

}  // namespace detail

/* -------------------------------------------------------------- categories */

/// A materialized window of S(base) or T(base): the category itself plus the
/// decode tables from its identifiers back to lists over the base.
struct SCat {
  CatRef cat;
  CatRef base;
  bool symmetric = true;   // false: identity permutations only (the monad T)
  std::vector<int> arities;  // outer list lengths kept, sorted
  std::vector<int> grade;    // per base object, constant along base morphisms
  std::vector<int> flat;     // total grades kept; empty means no flat filter

  std::vector<std::vector<int>> obj_items;  // S-object -> base object indices
  std::vector<std::vector<int>> mor_perm;   // S-morphism -> target-index map
  std::vector<std::vector<int>> mor_comps;  // S-morphism -> base morphism indices

  std::unordered_map<std::vector<int>, int, detail::IntVecHash> obj_lookup;
  std::unordered_map<std::vector<int>, int, detail::IntVecHash> mor_lookup;

  int flat_of(const std::vector<int>& items) const {
    int s = 0;
    for (int it : items) s += grade[it];
    return s;
  }
  bool keeps(const std::vector<int>& items) const {
    if (!std::binary_search(arities.begin(), arities.end(), static_cast<int>(items.size())))
      return false;
    return flat.empty() || std::binary_search(flat.begin(), flat.end(), flat_of(items));
  }
  std::optional<int> object_of(const std::vector<int>& items) const {
    auto it = obj_lookup.find(items);
    if (it == obj_lookup.end()) return std::nullopt;
    return it->second;
  }
  std::optional<int> morphism_of(const std::vector<int>& perm, const std::vector<int>& comps) const {
    std::vector<int> key = perm;
    key.push_back(-1);
    key.insert(key.end(), comps.begin(), comps.end());
    auto it = mor_lookup.find(key);
    if (it == mor_lookup.end()) return std::nullopt;
    return it->second;
  }
};

inline SCat S_cat(const CatRef& base, std::vector<int> arities, std::vector<int> grade = {},
                  std::vector<int> flat = {}, bool symmetric = true) {
  SCat sc;
  sc.base = base;
  sc.symmetric = symmetric;
  std::sort(arities.begin(), arities.end());
  arities.erase(std::unique(arities.begin(), arities.end()), arities.end());
  if (!arities.empty() && arities.front() < 0) fail(Errc::ArityOverflow, "negative arity");
  sc.arities = std::move(arities);
  if (grade.empty()) grade.assign(base->n_objects(), 1);
  if (static_cast<int>(grade.size()) != base->n_objects())
    fail(Errc::Internal, "grade table does not match the base objects");
  sc.grade = std::move(grade);
  std::sort(flat.begin(), flat.end());
  flat.erase(std::unique(flat.begin(), flat.end()), flat.end());
  sc.flat = std::move(flat);
  if (!sc.flat.empty()) {
    for (int m = 0; m < base->n_morphisms(); ++m)
      if (sc.grade[base->src(m)] != sc.grade[base->dst(m)])
        fail(Errc::Internal, "flat window needs a grade that is constant along " + base->mor_id(m));
  }

  std::vector<std::string> objs;
  auto keep_obj = [&](const std::vector<int>& items) {
    if (!sc.flat.empty() &&
        !std::binary_search(sc.flat.begin(), sc.flat.end(), sc.flat_of(items)))
      return;
    std::string id = "(" +
                     detail::join(items.begin(), items.end(), ",",
                                  [&](int o) { return base->object_id(o); }) +
                     ")";
    sc.obj_lookup.emplace(items, static_cast<int>(objs.size()));
    sc.obj_items.push_back(items);
    objs.push_back(std::move(id));
  };
  for (int n : sc.arities) {
    if (n == 0) {
      keep_obj({});
      continue;
    }
    if (base->n_objects() == 0) continue;
    std::vector<int> tup(n, 0);
    for (;;) {
      keep_obj(tup);
      int i = n - 1;
      while (i >= 0 && tup[i] == base->n_objects() - 1) tup[i--] = 0;
      if (i < 0) break;
      ++tup[i];
    }
  }

  std::vector<std::vector<int>> out_of(base->n_objects());
  for (int m = 0; m < base->n_morphisms(); ++m) out_of[base->src(m)].push_back(m);

  std::vector<MorRec> mors;
  std::vector<int> ident(objs.size(), -1);
  auto keep_mor = [&](int so, const std::vector<int>& perm, const std::vector<int>& comps) {
    int n = static_cast<int>(perm.size());
    std::vector<int> dst_items(n);
    for (int i = 0; i < n; ++i) dst_items[perm[i]] = base->dst(comps[i]);
    auto d = sc.object_of(dst_items);
    if (!d) return;  // endpoint falls outside the flat window
    bool is_id = detail::is_identity_perm(perm);
    if (is_id)
      for (int i = 0; i < n && is_id; ++i) is_id = base->is_identity(comps[i]);
    std::string id;
    if (is_id) {
      id = "id_" + objs[so];
      ident[so] = static_cast<int>(mors.size());
    } else {
      std::vector<std::string> cids(n);
      for (int i = 0; i < n; ++i) cids[i] = base->mor_id(comps[i]);
      id = detail::s_tuple_id(perm, cids);
    }
    std::vector<int> key = perm;
    key.push_back(-1);
    key.insert(key.end(), comps.begin(), comps.end());
    sc.mor_lookup.emplace(std::move(key), static_cast<int>(mors.size()));
    sc.mor_perm.push_back(perm);
    sc.mor_comps.push_back(comps);
    mors.push_back({std::move(id), so, *d});
  };

  for (int so = 0; so < static_cast<int>(objs.size()); ++so) {
    const auto& items = sc.obj_items[so];
    int n = static_cast<int>(items.size());
    if (n == 0) {
      keep_mor(so, {}, {});
      continue;
    }
    std::vector<int> perm(n);
    for (int i = 0; i < n; ++i) perm[i] = i;
    do {
      std::vector<int> pick(n, 0);
      for (;;) {
        std::vector<int> comps(n);
        for (int i = 0; i < n; ++i) comps[i] = out_of[items[i]][pick[i]];
        keep_mor(so, perm, comps);
        int i = n - 1;
        while (i >= 0 && pick[i] + 1 == static_cast<int>(out_of[items[i]].size())) pick[i--] = 0;
        if (i < 0) break;
        ++pick[i];
      }
    } while (symmetric && std::next_permutation(perm.begin(), perm.end()));
  }

  // Composition is blockwise: permutations compose as maps, component i of the
  // composite is g_{sigma_f(i)} o f_i.  Everything stays inside the window
  // because endpoints of kept morphisms are kept objects.
  std::vector<std::vector<int>> out_mors(objs.size());
  for (std::size_t m = 0; m < mors.size(); ++m) out_mors[mors[m].src].push_back(static_cast<int>(m));
  std::vector<std::array<int, 3>> comp;
  std::vector<int> key;
  for (int f = 0; f < static_cast<int>(mors.size()); ++f) {
    const auto& pf = sc.mor_perm[f];
    const auto& cf = sc.mor_comps[f];
    int n = static_cast<int>(pf.size());
    for (int g : out_mors[mors[f].dst]) {
      const auto& pg = sc.mor_perm[g];
      const auto& cg = sc.mor_comps[g];
      key.clear();
      for (int i = 0; i < n; ++i) key.push_back(pg[pf[i]]);
      key.push_back(-1);
      for (int i = 0; i < n; ++i) key.push_back(base->compose(cg[pf[i]], cf[i]));
      auto it = sc.mor_lookup.find(key);
      if (it == sc.mor_lookup.end()) fail(Errc::Internal, "composite escaped the window");
      comp.push_back({g, f, it->second});
    }
  }

  sc.cat = std::make_shared<const FinCat>(
      FinCat::from_parts(std::move(objs), std::move(mors), std::move(ident), std::move(comp)));
  return sc;
}

inline SCat T_cat(const CatRef& base, std::vector<int> arities, std::vector<int> grade = {},
                  std::vector<int> flat = {}) {
  return S_cat(base, std::move(arities), std::move(grade), std::move(flat), false);
}

/// S(1): arities with their permutations and nothing else.  Built literally as
/// S_cat over the terminal category so that applying S to the terminal-bound
/// functor of an identically windowed S_cat yields the identity tables.
inline SCat skeletal_S1(const std::vector<int>& arities, bool symmetric = true) {
  return S_cat(terminal_category(), arities, {}, {}, symmetric);
}

/// Grade vector for stacking: the total grade of each materialized object,
/// suitable as the grade table when the materialization itself is the base of
/// the next S_cat layer.
inline std::vector<int> flat_grade(const SCat& sx) {
  std::vector<int> g(sx.obj_items.size());
  for (std::size_t o = 0; o < sx.obj_items.size(); ++o) g[o] = sx.flat_of(sx.obj_items[o]);
  return g;
}

/* ---------------------------------------------------------------- functors */

inline Functor S_functor(const SCat& src, const SCat& tgt, const Functor& F) {
  if (!same_cat(F.source, src.base) || !same_cat(F.target, tgt.base))
    fail(Errc::MismatchedTarget, "S_functor needs a functor between the two bases");
  Functor out{src.cat, tgt.cat, {}, {}};
  out.on_obj.reserve(src.obj_items.size());
  for (const auto& items : src.obj_items) {
    std::vector<int> im(items.size());
    for (std::size_t i = 0; i < items.size(); ++i) im[i] = F.obj(items[i]);
    auto o = tgt.object_of(im);
    if (!o) fail(Errc::ArityOverflow, "object image escapes the target window");
    out.on_obj.push_back(*o);
  }
  out.on_mor.reserve(src.mor_perm.size());
  for (std::size_t m = 0; m < src.mor_perm.size(); ++m) {
    std::vector<int> im(src.mor_comps[m].size());
    for (std::size_t i = 0; i < im.size(); ++i) im[i] = F.mor(src.mor_comps[m][i]);
    auto w = tgt.morphism_of(src.mor_perm[m], im);
    if (!w) fail(Errc::ArityOverflow, "morphism image escapes the target window");
    out.on_mor.push_back(*w);
  }
  return out;
}

/// Unit: x |-> (x), as a functor into a materialization that keeps arity 1.
inline Functor eta_cat(const CatRef& x, const SCat& sx) {
  if (!same_cat(x, sx.base)) fail(Errc::MismatchedTarget, "eta_cat needs its own base");
  Functor out{x, sx.cat, {}, {}};
  for (int o = 0; o < x->n_objects(); ++o) {
    auto so = sx.object_of({o});
    if (!so) fail(Errc::ArityOverflow, "unit needs arity 1 in the window");
    out.on_obj.push_back(*so);
  }
  for (int m = 0; m < x->n_morphisms(); ++m) {
    auto sm = sx.morphism_of({0}, {m});
    if (!sm) fail(Errc::ArityOverflow, "unit needs arity 1 in the window");
    out.on_mor.push_back(*sm);
  }
  return out;
}

/// Multiplication: concatenate the blocks.  ssx must be a materialization of
/// S over sx.cat; the flattened images must land inside sx's window, which is
/// what the flat filter on ssx is for.
inline Functor mu_cat(const SCat& ssx, const SCat& sx) {
  if (!same_cat(ssx.base, sx.cat))
    fail(Errc::MismatchedTarget, "mu_cat needs the outer layer to be built over the inner one");
  Functor out{ssx.cat, sx.cat, {}, {}};
  for (const auto& items : ssx.obj_items) {
    std::vector<int> flatobj;
    for (int it : items)
      flatobj.insert(flatobj.end(), sx.obj_items[it].begin(), sx.obj_items[it].end());
    auto o = sx.object_of(flatobj);
    if (!o) fail(Errc::ArityOverflow, "flattened object escapes the window");
    out.on_obj.push_back(*o);
  }
  for (std::size_t m = 0; m < ssx.mor_perm.size(); ++m) {
    std::vector<std::vector<int>> iperm, icomp;
    iperm.reserve(ssx.mor_comps[m].size());
    for (int c : ssx.mor_comps[m]) {
      iperm.push_back(sx.mor_perm[c]);
      icomp.push_back(sx.mor_comps[c]);
    }
    auto fm = detail::flatten_blocks(ssx.mor_perm[m], iperm, icomp);
    auto w = sx.morphism_of(fm.perm, fm.comps);
    if (!w) fail(Errc::ArityOverflow, "flattened morphism escapes the window");
    out.on_mor.push_back(*w);
  }
  return out;
}

/// Inclusion of the permutation-free materialization into the symmetric one
/// over the same base and window.
inline Functor t_to_s(const SCat& tx, const SCat& sx) {
  if (tx.symmetric || !sx.symmetric)
    fail(Errc::MismatchedTarget, "t_to_s goes from a T window into an S window");
  if (!same_cat(tx.base, sx.base)) fail(Errc::MismatchedTarget, "t_to_s needs a shared base");
  Functor out{tx.cat, sx.cat, {}, {}};
  for (const auto& items : tx.obj_items) {
    auto o = sx.object_of(items);
    if (!o) fail(Errc::ArityOverflow, "object missing from the symmetric window");
    out.on_obj.push_back(*o);
  }
  for (std::size_t m = 0; m < tx.mor_perm.size(); ++m) {
    auto w = sx.morphism_of(tx.mor_perm[m], tx.mor_comps[m]);
    if (!w) fail(Errc::ArityOverflow, "morphism missing from the symmetric window");
    out.on_mor.push_back(*w);
  }
  return out;
}

/* ------------------------------------------------------------- profunctors */

/// S applied to a profunctor, over already-materialized windows of its two
/// boundary categories.  Proarrows are (perm, component proarrows); the left
/// and right actions act blockwise through the permutations.
struct SPro {
  SCat s;  // materialization of S(src_cat)
  SCat t;  // materialization of S(tgt_cat)
  Profunctor pro;
  std::vector<std::vector<int>> pro_perm;
  std::vector<std::vector<int>> pro_comps;
  std::unordered_map<std::vector<int>, int, detail::IntVecHash> pro_lookup;

  std::optional<int> pro_of(const std::vector<int>& perm, const std::vector<int>& comps) const {
    std::vector<int> key = perm;
    key.push_back(-1);
    key.insert(key.end(), comps.begin(), comps.end());
    auto it = pro_lookup.find(key);
    if (it == pro_lookup.end()) return std::nullopt;
    return it->second;
  }
};

inline SPro S_pro(const Profunctor& X, SCat ssrc, SCat stgt) {
  if (!same_cat(ssrc.base, X.src_cat) || !same_cat(stgt.base, X.tgt_cat))
    fail(Errc::MismatchedTarget, "S_pro needs windows over the profunctor's own boundary");
  if (ssrc.symmetric != stgt.symmetric)
    fail(Errc::Internal, "mixed symmetric and permutation-free windows");
  SPro sp;
  sp.s = std::move(ssrc);
  sp.t = std::move(stgt);
  sp.pro.src_cat = sp.s.cat;
  sp.pro.tgt_cat = sp.t.cat;

  std::vector<std::vector<int>> from_pros(X.tgt_cat->n_objects());
  for (int p = 0; p < X.n_pros(); ++p) from_pros[X.pros[p].from].push_back(p);

  auto keep_pro = [&](int fo, const std::vector<int>& perm, const std::vector<int>& comps) {
    int n = static_cast<int>(perm.size());
    std::vector<int> to_items(n);
    for (int i = 0; i < n; ++i) to_items[perm[i]] = X.pros[comps[i]].to;
    auto to = sp.s.object_of(to_items);
    if (!to) return;
    std::vector<std::string> cids(n);
    for (int i = 0; i < n; ++i) cids[i] = X.pros[comps[i]].id;
    std::vector<int> key = perm;
    key.push_back(-1);
    key.insert(key.end(), comps.begin(), comps.end());
    sp.pro_lookup.emplace(std::move(key), sp.pro.n_pros());
    sp.pro_perm.push_back(perm);
    sp.pro_comps.push_back(comps);
    sp.pro.pro_idx.emplace(detail::s_tuple_id(perm, cids), sp.pro.n_pros());
    sp.pro.pros.push_back({detail::s_tuple_id(perm, cids), fo, *to});
  };

  for (int fo = 0; fo < static_cast<int>(sp.t.obj_items.size()); ++fo) {
    const auto& items = sp.t.obj_items[fo];
    int n = static_cast<int>(items.size());
    if (n == 0) {
      keep_pro(fo, {}, {});
      continue;
    }
    bool feasible = true;
    for (int i = 0; i < n; ++i)
      if (from_pros[items[i]].empty()) feasible = false;
    if (!feasible) continue;
    std::vector<int> perm(n);
    for (int i = 0; i < n; ++i) perm[i] = i;
    do {
      std::vector<int> pick(n, 0);
      for (;;) {
        std::vector<int> comps(n);
        for (int i = 0; i < n; ++i) comps[i] = from_pros[items[i]][pick[i]];
        keep_pro(fo, perm, comps);
        int i = n - 1;
        while (i >= 0 && pick[i] + 1 == static_cast<int>(from_pros[items[i]].size())) pick[i--] = 0;
        if (i < 0) break;
        ++pick[i];
      }
    } while (sp.s.symmetric && std::next_permutation(perm.begin(), perm.end()));
  }

  // Left action by (tau, <h_j>): compose into the to-side block that each
  // component lands in.  Right action by (rho, <f_j>) rearranges the from-side
  // first.  Both stay inside the window since kept morphisms keep endpoints.
  std::vector<std::vector<int>> mors_from(sp.s.obj_items.size());
  for (int m = 0; m < sp.s.cat->n_morphisms(); ++m)
    mors_from[sp.s.cat->src(m)].push_back(m);
  std::vector<std::vector<int>> mors_into(sp.t.obj_items.size());
  for (int m = 0; m < sp.t.cat->n_morphisms(); ++m)
    mors_into[sp.t.cat->dst(m)].push_back(m);

  std::vector<int> key;
  for (int p = 0; p < sp.pro.n_pros(); ++p) {
    const auto& sigma = sp.pro_perm[p];
    const auto& q = sp.pro_comps[p];
    int n = static_cast<int>(sigma.size());
    for (int h : mors_from[sp.pro.pros[p].to]) {
      const auto& tau = sp.s.mor_perm[h];
      const auto& hc = sp.s.mor_comps[h];
      key.clear();
      for (int i = 0; i < n; ++i) key.push_back(tau[sigma[i]]);
      key.push_back(-1);
      for (int i = 0; i < n; ++i) key.push_back(X.left(hc[sigma[i]], q[i]));
      auto it = sp.pro_lookup.find(key);
      if (it == sp.pro_lookup.end()) fail(Errc::Internal, "left action escaped the window");
      sp.pro.lact.emplace(detail::key64(h, p), it->second);
    }
    for (int f : mors_into[sp.pro.pros[p].from]) {
      const auto& rho = sp.t.mor_perm[f];
      const auto& fc = sp.t.mor_comps[f];
      key.clear();
      for (int i = 0; i < n; ++i) key.push_back(sigma[rho[i]]);
      key.push_back(-1);
      for (int i = 0; i < n; ++i) key.push_back(X.right(q[rho[i]], fc[i]));
      auto it = sp.pro_lookup.find(key);
      if (it == sp.pro_lookup.end()) fail(Errc::Internal, "right action escaped the window");
      sp.pro.ract.emplace(detail::key64(p, f), it->second);
    }
  }
  return sp;
}

inline SPro T_pro(const Profunctor& X, SCat ssrc, SCat stgt) {
  if (ssrc.symmetric || stgt.symmetric)
    fail(Errc::MismatchedTarget, "T_pro expects permutation-free windows");
  return S_pro(X, std::move(ssrc), std::move(stgt));
}

inline Cell S_cell(const Cell& c, const SPro& A, const SPro& B) {
  Cell out{A.pro, B.pro, S_functor(A.s, B.s, c.vsrc), S_functor(A.t, B.t, c.vtgt), {}};
  out.on_pro.reserve(A.pro_perm.size());
  for (std::size_t p = 0; p < A.pro_perm.size(); ++p) {
    std::vector<int> im(A.pro_comps[p].size());
    for (std::size_t i = 0; i < im.size(); ++i) im[i] = c(A.pro_comps[p][i]);
    auto w = B.pro_of(A.pro_perm[p], im);
    if (!w) fail(Errc::ArityOverflow, "proarrow image escapes the target window");
    out.on_pro.push_back(*w);
  }
  return out;
}

inline Cell eta_pro(const Profunctor& X, const SPro& sx) {
  Cell out{X, sx.pro, eta_cat(X.src_cat, sx.s), eta_cat(X.tgt_cat, sx.t), {}};
  for (int p = 0; p < X.n_pros(); ++p) {
    auto w = sx.pro_of({0}, {p});
    if (!w) fail(Errc::ArityOverflow, "unit needs arity 1 in the window");
    out.on_pro.push_back(*w);
  }
  return out;
}

inline Cell mu_pro(const SPro& ssx, const SPro& sx) {
  if (!same_cat(ssx.s.base, sx.s.cat) || !same_cat(ssx.t.base, sx.t.cat))
    fail(Errc::MismatchedTarget, "mu_pro needs the outer layer to be built over the inner one");
  Cell out{ssx.pro, sx.pro, mu_cat(ssx.s, sx.s), mu_cat(ssx.t, sx.t), {}};
  for (std::size_t p = 0; p < ssx.pro_perm.size(); ++p) {
    std::vector<std::vector<int>> iperm, icomp;
    iperm.reserve(ssx.pro_comps[p].size());
    for (int c : ssx.pro_comps[p]) {
      iperm.push_back(sx.pro_perm[c]);
      icomp.push_back(sx.pro_comps[c]);
    }
    auto fm = detail::flatten_blocks(ssx.pro_perm[p], iperm, icomp);
    auto w = sx.pro_of(fm.perm, fm.comps);
    if (!w) fail(Errc::ArityOverflow, "flattened proarrow escapes the window");
    out.on_pro.push_back(*w);
  }
  return out;
}

/* ------------------------------------------------- monoidal comparison maps */

/// Comparison cell m: SY (x) SX -> S(Y (x) X).  A raw pair of list proarrows
/// pairs component i of the outer list with component tau(i) of the inner one,
/// and the result's components are coend classes of the base composite.
/// Computed on every raw of every class so representative dependence is a
/// checked failure, not an assumption.
struct MComp {
  ProComposite tensored;
  Cell cell;
};

inline MComp m_comp(const SPro& sy, const SPro& sx, const ProComposite& yx, const SPro& syx) {
  if (!same_cat(syx.s.cat, sx.s.cat) || !same_cat(syx.t.cat, sy.t.cat))
    fail(Errc::MismatchedTarget, "m_comp needs S(YX) over the same boundary windows");
  MComp out{pro_compose(sy.pro, sx.pro), Cell{}};
  const CoendWitness& w = out.tensored.w;
  Cell cell{out.tensored.pro, syx.pro, identity_functor(sx.s.cat), identity_functor(sy.t.cat), {}};
  cell.on_pro.assign(w.n_classes(), -1);
  for (std::size_t r = 0; r < w.raw.size(); ++r) {
    int k = w.raw[r].first, g = w.raw[r].second;
    const auto& tau = sy.pro_perm[k];
    const auto& sigma = sx.pro_perm[g];
    int n = static_cast<int>(tau.size());
    std::vector<int> perm(n), comps(n);
    for (int i = 0; i < n; ++i) {
      perm[i] = sigma[tau[i]];
      comps[i] = yx.w.class_of_pair(sy.pro_comps[k][i], sx.pro_comps[g][tau[i]]);
    }
    auto im = syx.pro_of(perm, comps);
    if (!im) fail(Errc::ArityOverflow, "comparison image escapes the window");
    int cls = w.class_of[r];
    if (cell.on_pro[cls] == -1)
      cell.on_pro[cls] = *im;
    else if (cell.on_pro[cls] != *im)
      fail(Errc::IllDefined, "comparison map depends on the representative");
  }
  out.cell = std::move(cell);
  return out;
}

/// Comparison cell e: I_{S(A)} -> S(I_A), sending the identity proarrow on a
/// list morphism to the list of identity proarrows on its components.
inline Cell e_comp(const SCat& sa, const SPro& sia) {
  if (!same_cat(sia.s.cat, sa.cat) || !same_cat(sia.t.cat, sa.cat))
    fail(Errc::MismatchedTarget, "e_comp needs S(I) over the same window twice");
  Cell out{pro_identity(sa.cat), sia.pro, identity_functor(sa.cat), identity_functor(sa.cat), {}};
  out.on_pro.reserve(sa.mor_perm.size());
  for (std::size_t m = 0; m < sa.mor_perm.size(); ++m) {
    auto w = sia.pro_of(sa.mor_perm[m], sa.mor_comps[m]);
    if (!w) fail(Errc::ArityOverflow, "identity proarrow image escapes the window");
    out.on_pro.push_back(*w);
  }
  return out;
}

}  // namespace clubkit
