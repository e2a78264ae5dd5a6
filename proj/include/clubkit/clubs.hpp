#pragma once

/* Collections over the list skeleton and their substitution tensor.
 *
 * A collection is a base category with an arity for every object and a
 * permutation for every morphism.  That is exactly a functor into the
 * skeleton of finite lists over the point, but we store the tables unpacked:
 * validating a collection should not have to materialize factorially many
 * skeleton morphisms just to look up a handful of them.
 *
 * reconstruct0 turns a collection into a category over each probe by pulling
 * the arity projection back along it.  Because canonical_pullback collapses
 * an identity leg, reconstruction at the one-object probe literally returns
 * the base, and evaluate0 inverts it table for table.  Everything here is
 * checked on the probes it is handed, nothing more.
 */

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "clubkit/smc.hpp"

namespace clubkit {

/* --------------------------------------------------------------- tables */

struct Collection0 {
  CatRef base;
  std::vector<int> arity;              // indexed by object
  std::vector<std::vector<int>> perm;  // indexed by morphism, 0-based images

  friend bool operator==(const Collection0& a, const Collection0& b) {
    return same_cat(a.base, b.base) && a.arity == b.arity && a.perm == b.perm;
  }
};

/// Distinct arity values in use, sorted; the smallest window that fits.
inline std::vector<int> collection_arities(const Collection0& c) {
  std::vector<int> out = c.arity;
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

inline std::vector<Diagnostic> validate_collection0(const Collection0& c) {
  std::vector<Diagnostic> out;
  const FinCat& a = *c.base;
  if (static_cast<int>(c.arity.size()) != a.n_objects() ||
      static_cast<int>(c.perm.size()) != a.n_morphisms()) {
    out.push_back({"TableSize", "arity/perm tables do not cover the base"});
    return out;
  }
  for (int o = 0; o < a.n_objects(); ++o)
    if (c.arity[o] < 0) out.push_back({"ArityMismatch", a.object_id(o)});
  for (int m = 0; m < a.n_morphisms(); ++m) {
    int ns = c.arity[a.src(m)];
    if (ns != c.arity[a.dst(m)]) {
      out.push_back({"ArityMismatch", a.mor_id(m)});
      continue;
    }
    const auto& p = c.perm[m];
    if (static_cast<int>(p.size()) != ns) {
      out.push_back({"TableSize", "permutation at " + a.mor_id(m)});
      continue;
    }
    std::vector<char> seen(p.size(), 0);
    bool ok = true;
    for (int v : p) {
      if (v < 0 || v >= ns || seen[v]) {
        ok = false;
        break;
      }
      seen[v] = 1;
    }
    if (!ok) out.push_back({"NotAPermutation", a.mor_id(m)});
  }
  if (!out.empty()) return out;
  for (int o = 0; o < a.n_objects(); ++o) {
    const auto& p = c.perm[a.identity_of(o)];
    for (int i = 0; i < static_cast<int>(p.size()); ++i)
      if (p[i] != i) {
        out.push_back({"IdentityNotPreserved", a.object_id(o)});
        break;
      }
  }
  for (const auto& e : a.compose_entries()) {
    const auto& pg = c.perm[e[0]];
    const auto& pf = c.perm[e[1]];
    const auto& ph = c.perm[e[2]];
    for (int i = 0; i < static_cast<int>(pf.size()); ++i)
      if (ph[i] != pg[pf[i]]) {
        out.push_back({"CompositeNotPreserved", a.mor_id(e[0]) + " after " + a.mor_id(e[1])});
        break;
      }
  }
  return out;
}

/// The tables as a functor into a skeleton window over the point.
inline Functor theta_functor(const Collection0& c, const SCat& s1) {
  if (!same_cat(s1.base, terminal_category()))
    fail(Errc::MismatchedTarget, "theta lands in lists over the point");
  const FinCat& a = *c.base;
  Functor th{c.base, s1.cat, {}, {}};
  th.on_obj.reserve(a.n_objects());
  th.on_mor.reserve(a.n_morphisms());
  for (int o = 0; o < a.n_objects(); ++o) {
    std::vector<int> items(static_cast<std::size_t>(c.arity[o]), 0);
    auto idx = s1.object_of(items);
    if (!idx)
      fail(Errc::ArityOverflow,
           "window lacks arity " + std::to_string(c.arity[o]) + " for " + a.object_id(o));
    th.on_obj.push_back(*idx);
  }
  for (int m = 0; m < a.n_morphisms(); ++m) {
    std::vector<int> comps(c.perm[m].size(), 0);
    auto idx = s1.morphism_of(c.perm[m], comps);
    if (!idx) fail(Errc::ArityOverflow, "window lacks the permutation at " + a.mor_id(m));
    th.on_mor.push_back(*idx);
  }
  return th;
}

/// One object of arity one, the unit for substitution.
inline Collection0 club_unit() { return {terminal_category(), {1}, {{0}}}; }

/* -------------------------------------------------------- reconstruction */

/// One probe's worth of reconstructed data: the category sitting over the
/// probe together with its two projections and the window alpha lands in.
struct ClubComponent {
  CatRef at;
  Functor bang;   // to the base of the collection
  Functor alpha;  // to the list category over the probe
  SCat window;    // that list category
};

using ClubFamily = std::map<std::string, ClubComponent>;

struct ReconstructedFunctorData {
  ClubFamily at;                           // keyed by probe name
  std::map<std::string, Functor> on_functors;  // keyed by probe functor name
};

/// Pull the collection back along the arity projection of the window.  At
/// the one-object probe the projection leg is an identity and the result is
/// the base itself, so evaluate0 undoes this without any renaming.
inline ClubComponent reconstruct0(const Collection0& c, const SCat& s1, const SCat& sx) {
  Functor th = theta_functor(c, s1);
  Functor sh = S_functor(sx, s1, bang(sx.base));
  Pullback pb = canonical_pullback(th, sh);
  return {pb.cat, std::move(pb.p1), std::move(pb.p2), sx};
}

/// Read the tables back off a component over the point.
inline Collection0 evaluate0(const Functor& alpha1, const SCat& s1) {
  if (!same_cat(s1.base, terminal_category()))
    fail(Errc::MissingTerminalProbe, "component does not sit over the point");
  if (!same_cat(alpha1.target, s1.cat))
    fail(Errc::MismatchedTarget, "alpha does not land in the given window");
  const FinCat& a = *alpha1.source;
  Collection0 c{alpha1.source, {}, {}};
  c.arity.reserve(a.n_objects());
  c.perm.reserve(a.n_morphisms());
  for (int o = 0; o < a.n_objects(); ++o)
    c.arity.push_back(static_cast<int>(s1.obj_items[alpha1.on_obj[o]].size()));
  for (int m = 0; m < a.n_morphisms(); ++m) c.perm.push_back(s1.mor_perm[alpha1.on_mor[m]]);
  return c;
}

inline Collection0 evaluate0(const ClubFamily& fam) {
  for (const auto& [name, comp] : fam) {
    (void)name;
    if (same_cat(comp.window.base, terminal_category()))
      return evaluate0(comp.alpha, comp.window);
  }
  fail(Errc::MissingTerminalProbe, "no component over the point in the family");
}

namespace detail {

/* Index the (bang, alpha) image pairs of a component.  Pullback entries are
 * distinct pairs, so the keys never collide. */
struct PairIndex {
  std::unordered_map<std::uint64_t, int> obj, mor;
};

inline PairIndex pair_index(const Functor& p, const Functor& q) {
  PairIndex ix;
  for (int o = 0; o < static_cast<int>(p.on_obj.size()); ++o)
    ix.obj.emplace(key64(p.on_obj[o], q.on_obj[o]), o);
  for (int m = 0; m < static_cast<int>(p.on_mor.size()); ++m)
    ix.mor.emplace(key64(p.on_mor[m], q.on_mor[m]), m);
  return ix;
}

}  // namespace detail

/// Image of a probe functor under reconstruction; pairs map componentwise.
inline Functor reconstruct0_on_functor(const Functor& F, const ClubComponent& cx,
                                       const ClubComponent& cy) {
  if (!same_cat(F.source, cx.window.base) || !same_cat(F.target, cy.window.base))
    fail(Errc::MismatchedTarget, "probe functor does not match the component windows");
  Functor sf = S_functor(cx.window, cy.window, F);
  detail::PairIndex ix = detail::pair_index(cy.bang, cy.alpha);
  const FinCat& ax = *cx.at;
  Functor out{cx.at, cy.at, {}, {}};
  out.on_obj.reserve(ax.n_objects());
  out.on_mor.reserve(ax.n_morphisms());
  for (int o = 0; o < ax.n_objects(); ++o) {
    auto it = ix.obj.find(detail::key64(cx.bang.on_obj[o], sf.on_obj[cx.alpha.on_obj[o]]));
    if (it == ix.obj.end()) fail(Errc::Internal, "image pair missing from the reconstruction");
    out.on_obj.push_back(it->second);
  }
  for (int m = 0; m < ax.n_morphisms(); ++m) {
    auto it = ix.mor.find(detail::key64(cx.bang.on_mor[m], sf.on_mor[cx.alpha.on_mor[m]]));
    if (it == ix.mor.end()) fail(Errc::Internal, "image pair missing from the reconstruction");
    out.on_mor.push_back(it->second);
  }
  return out;
}

/// Comparison into a reconstructed component from any other pair of legs
/// over the same cospan.  Total exactly when the legs factor through the
/// pullback; bijective exactly when they were a pullback themselves.
inline Functor club_compare(const Functor& p, const Functor& q, const ClubComponent& comp) {
  if (!same_cat(p.source, q.source) || !same_cat(p.target, comp.bang.target) ||
      !same_cat(q.target, comp.alpha.target))
    fail(Errc::MismatchedTarget, "candidate legs do not line up with the component");
  detail::PairIndex ix = detail::pair_index(comp.bang, comp.alpha);
  const FinCat& e = *p.source;
  Functor out{p.source, comp.at, {}, {}};
  out.on_obj.reserve(e.n_objects());
  out.on_mor.reserve(e.n_morphisms());
  for (int o = 0; o < e.n_objects(); ++o) {
    auto it = ix.obj.find(detail::key64(p.on_obj[o], q.on_obj[o]));
    if (it == ix.obj.end())
      fail(Errc::NotInduced, "legs do not factor through the reconstruction at object " +
                                 e.object_id(o));
    out.on_obj.push_back(it->second);
  }
  for (int m = 0; m < e.n_morphisms(); ++m) {
    auto it = ix.mor.find(detail::key64(p.on_mor[m], q.on_mor[m]));
    if (it == ix.mor.end())
      fail(Errc::NotInduced,
           "legs do not factor through the reconstruction at " + e.mor_id(m));
    out.on_mor.push_back(it->second);
  }
  return out;
}

/* ----------------------------------------------------------------- tensor */

/// Substitution tensor.  An object pairs an object of c with a list of
/// objects of d, one per slot; its arity is the sum of the slot arities.  A
/// morphism pairs a morphism of c with a list of morphisms of d routed by
/// its permutation, and the new permutation moves the slot blocks whole.
/// The pullback and window stay attached so the pairs remain decodable.
struct ClubTensor {
  Collection0 coll;
  Pullback pb;  // p1 to c.base, p2 to the list category over d.base
  SCat window;  // lists over d.base at the arities of c
};

inline ClubTensor club_tensor(const Collection0& c, const Collection0& d) {
  std::vector<int> outer = collection_arities(c);
  SCat sb = S_cat(d.base, outer);
  SCat s1 = skeletal_S1(outer);
  Pullback pb = canonical_pullback(theta_functor(c, s1), S_functor(sb, s1, bang(d.base)));

  const FinCat& e = *pb.cat;
  Collection0 out{pb.cat, {}, {}};
  out.arity.reserve(e.n_objects());
  out.perm.reserve(e.n_morphisms());
  for (int o = 0; o < e.n_objects(); ++o) {
    int n = 0;
    for (int v : sb.obj_items[pb.p2.on_obj[o]]) n += d.arity[v];
    out.arity.push_back(n);
  }
  std::vector<const std::vector<int>*> blocks;
  detail::FlatMor flat;
  for (int m = 0; m < e.n_morphisms(); ++m) {
    int sm = pb.p2.on_mor[m];
    blocks.clear();
    for (int g : sb.mor_comps[sm]) blocks.push_back(&d.perm[g]);
    detail::flatten_blocks_into(sb.mor_perm[sm], blocks, blocks, flat);
    out.perm.push_back(flat.perm);
  }
  return {std::move(out), std::move(pb), std::move(sb)};
}

/// Tensoring with the unit on the left pairs every object with a one-item
/// list; reading the item back off is the comparison.
inline Functor club_unit_left_iso(const ClubTensor& t) {
  const FinCat& e = *t.coll.base;
  Functor out{t.coll.base, t.window.base, {}, {}};
  out.on_obj.reserve(e.n_objects());
  out.on_mor.reserve(e.n_morphisms());
  for (int o = 0; o < e.n_objects(); ++o) {
    const auto& items = t.window.obj_items[t.pb.p2.on_obj[o]];
    if (items.size() != 1) fail(Errc::MismatchedTarget, "left tensor factor is not the unit");
    out.on_obj.push_back(items[0]);
  }
  for (int m = 0; m < e.n_morphisms(); ++m) {
    const auto& comps = t.window.mor_comps[t.pb.p2.on_mor[m]];
    if (comps.size() != 1) fail(Errc::MismatchedTarget, "left tensor factor is not the unit");
    out.on_mor.push_back(comps[0]);
  }
  return out;
}

/// On the right the first projection already is the comparison.
inline Functor club_unit_right_iso(const ClubTensor& t) { return t.pb.p1; }

/// Maps of collections: functors over the bases preserving both tables.
inline std::vector<Diagnostic> validate_collection_map(const Collection0& c, const Collection0& d,
                                                       const Functor& F) {
  std::vector<Diagnostic> out;
  if (!same_cat(F.source, c.base) || !same_cat(F.target, d.base)) {
    out.push_back({"EndpointMismatch", "map endpoints do not match the collections"});
    return out;
  }
  for (auto& dg : validate_functor(F)) out.push_back(dg);
  if (!out.empty()) return out;
  const FinCat& a = *c.base;
  for (int o = 0; o < a.n_objects(); ++o)
    if (d.arity[F.on_obj[o]] != c.arity[o]) out.push_back({"ArityMismatch", a.object_id(o)});
  for (int m = 0; m < a.n_morphisms(); ++m)
    if (d.perm[F.on_mor[m]] != c.perm[m]) out.push_back({"PermMismatch", a.mor_id(m)});
  return out;
}

/// (u, list v) goes to (F u, list G v); total only over collection maps.
inline Functor club_tensor_map(const Functor& F, const Functor& G, const ClubTensor& s,
                               const ClubTensor& t) {
  Functor sg = S_functor(s.window, t.window, G);
  detail::PairIndex ix = detail::pair_index(t.pb.p1, t.pb.p2);
  const FinCat& e = *s.coll.base;
  Functor out{s.coll.base, t.coll.base, {}, {}};
  out.on_obj.reserve(e.n_objects());
  out.on_mor.reserve(e.n_morphisms());
  for (int o = 0; o < e.n_objects(); ++o) {
    auto it = ix.obj.find(detail::key64(F.on_obj[s.pb.p1.on_obj[o]], sg.on_obj[s.pb.p2.on_obj[o]]));
    if (it == ix.obj.end())
      fail(Errc::NotInduced, "factors are not collection maps at " + e.object_id(o));
    out.on_obj.push_back(it->second);
  }
  for (int m = 0; m < e.n_morphisms(); ++m) {
    auto it = ix.mor.find(detail::key64(F.on_mor[s.pb.p1.on_mor[m]], sg.on_mor[s.pb.p2.on_mor[m]]));
    if (it == ix.mor.end())
      fail(Errc::NotInduced, "factors are not collection maps at " + e.mor_id(m));
    out.on_mor.push_back(it->second);
  }
  return out;
}

/// Canonical comparison between the two iterated tensors, built by cutting
/// the flat list back into blocks.  No coherent associator is constructed
/// anywhere; the comparison bijection on the probes at hand is the claim.
struct AssocCompare {
  ClubTensor cd, cd_e, de, c_de;
  Functor iso;  // from (c x d) x e to c x (d x e)
};

inline AssocCompare club_assoc_iso(const Collection0& c, const Collection0& d,
                                   const Collection0& e) {
  AssocCompare r;
  r.cd = club_tensor(c, d);
  r.de = club_tensor(d, e);
  r.cd_e = club_tensor(r.cd.coll, e);
  r.c_de = club_tensor(c, r.de.coll);

  detail::PairIndex de_ix = detail::pair_index(r.de.pb.p1, r.de.pb.p2);
  detail::PairIndex out_ix = detail::pair_index(r.c_de.pb.p1, r.c_de.pb.p2);
  const FinCat& L = *r.cd_e.coll.base;
  const FinCat& cdb = *r.cd.coll.base;
  Functor iso{r.cd_e.coll.base, r.c_de.coll.base, {}, {}};
  iso.on_obj.reserve(L.n_objects());
  iso.on_mor.reserve(L.n_morphisms());

  auto regroup_obj = [&](int x, const std::vector<int>& ws) {
    /* x is an object of the cd base, ws the flat list of e-objects under it */
    const auto& vs = r.cd.window.obj_items[r.cd.pb.p2.on_obj[x]];
    std::vector<int> inner;
    inner.reserve(vs.size());
    int off = 0;
    for (int v : vs) {
      int len = d.arity[v];
      std::vector<int> blk(ws.begin() + off, ws.begin() + off + len);
      off += len;
      auto bi = r.de.window.object_of(blk);
      if (!bi) fail(Errc::Internal, "regrouped block escapes the inner window");
      auto it = de_ix.obj.find(detail::key64(v, *bi));
      if (it == de_ix.obj.end()) fail(Errc::Internal, "regrouped pair is missing");
      inner.push_back(it->second);
    }
    return inner;
  };

  for (int o = 0; o < L.n_objects(); ++o) {
    int x = r.cd_e.pb.p1.on_obj[o];
    std::vector<int> inner = regroup_obj(x, r.cd_e.window.obj_items[r.cd_e.pb.p2.on_obj[o]]);
    auto si = r.c_de.window.object_of(inner);
    if (!si) fail(Errc::Internal, "regrouped list escapes the outer window");
    auto it = out_ix.obj.find(detail::key64(r.cd.pb.p1.on_obj[x], *si));
    if (it == out_ix.obj.end()) fail(Errc::Internal, "regrouped object is missing");
    iso.on_obj.push_back(it->second);
  }

  for (int m = 0; m < L.n_morphisms(); ++m) {
    int mx = r.cd_e.pb.p1.on_mor[m];  // morphism of the cd base
    int mw = r.cd_e.pb.p2.on_mor[m];  // list morphism on the flat e-list
    int mv = r.cd.pb.p2.on_mor[mx];   // list morphism on the d-slots
    const auto& sig = r.cd.window.mor_perm[mv];
    const auto& gs = r.cd.window.mor_comps[mv];
    const auto& tflat = r.cd_e.window.mor_perm[mw];
    const auto& kcomps = r.cd_e.window.mor_comps[mw];

    /* block offsets at both ends of the flat list */
    const auto& svs = r.cd.window.obj_items[r.cd.pb.p2.on_obj[cdb.src(mx)]];
    const auto& dvs = r.cd.window.obj_items[r.cd.pb.p2.on_obj[cdb.dst(mx)]];
    std::vector<int> soff(svs.size() + 1, 0), doff(dvs.size() + 1, 0);
    for (std::size_t j = 0; j < svs.size(); ++j) soff[j + 1] = soff[j] + d.arity[svs[j]];
    for (std::size_t j = 0; j < dvs.size(); ++j) doff[j + 1] = doff[j] + d.arity[dvs[j]];

    std::vector<int> inner;
    inner.reserve(svs.size());
    for (std::size_t j = 0; j < svs.size(); ++j) {
      int len = soff[j + 1] - soff[j];
      std::vector<int> pj(len), cj(len);
      for (int i = 0; i < len; ++i) {
        pj[i] = tflat[soff[j] + i] - doff[sig[j]];
        cj[i] = kcomps[soff[j] + i];
      }
      auto bm = r.de.window.morphism_of(pj, cj);
      if (!bm) fail(Errc::Internal, "regrouped block morphism escapes the inner window");
      auto it = de_ix.mor.find(detail::key64(gs[j], *bm));
      if (it == de_ix.mor.end()) fail(Errc::Internal, "regrouped pair morphism is missing");
      inner.push_back(it->second);
    }
    auto sm = r.c_de.window.morphism_of(sig, inner);
    if (!sm) fail(Errc::Internal, "regrouped list morphism escapes the outer window");
    auto it = out_ix.mor.find(detail::key64(r.cd.pb.p1.on_mor[mx], *sm));
    if (it == out_ix.mor.end()) fail(Errc::Internal, "regrouped morphism is missing");
    iso.on_mor.push_back(it->second);
  }

  r.iso = std::move(iso);
  return r;
}

/* ----------------------------------------------------- cartesianness suite */

/// One verdict per named check; suites report instead of throwing.
struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

namespace detail {

inline CheckResult square_check(const std::string& name, const CommutingSquare& sq) {
  CheckResult r{name, false, ""};
  try {
    ComparisonReport rep = is_pullback(sq);
    r.pass = rep.verdict;
    if (!rep.verdict) r.detail = rep.counterexample.value_or("comparison is not bijective");
  } catch (const Error& err) {
    r.detail = err.what();
  }
  return r;
}

}  // namespace detail

/// Pullback checks over the point: the unit and multiplication naturality
/// squares for every probe, then the projection square and its list image
/// for every reconstructed collection.  Windows are graded by arity so the
/// doubled list categories stay small.
inline std::vector<CheckResult> clubalt_suite(
    const std::vector<std::pair<std::string, CatRef>>& probes,
    const std::vector<std::pair<std::string, Collection0>>& colls, const std::vector<int>& arities,
    bool symmetric = true) {
  std::vector<CheckResult> out;
  CatRef one = terminal_category();
  SCat s1, ss1;
  Functor mu1;
  try {
    s1 = S_cat(one, arities, {}, {}, symmetric);
    ss1 = S_cat(s1.cat, arities, flat_grade(s1), arities, symmetric);
    mu1 = mu_cat(ss1, s1);
  } catch (const Error& err) {
    out.push_back({"setup", false, err.what()});
    return out;
  }
  for (const auto& [pname, X] : probes) {
    try {
      SCat sx = S_cat(X, arities, {}, {}, symmetric);
      Functor shriek = S_functor(sx, s1, bang(X));
      out.push_back(detail::square_check("eta-square/" + pname,
                                         {eta_cat(X, sx), bang(X), shriek, eta_cat(one, s1)}));
      SCat ssx = S_cat(sx.cat, arities, flat_grade(sx), arities, symmetric);
      out.push_back(detail::square_check(
          "mu-square/" + pname, {mu_cat(ssx, sx), S_functor(ssx, ss1, shriek), shriek, mu1}));
      for (const auto& [cname, c] : colls) {
        try {
          ClubComponent comp = reconstruct0(c, s1, sx);
          Functor th = theta_functor(c, s1);
          out.push_back(detail::square_check("alpha-square/" + pname + "/" + cname,
                                             {comp.alpha, comp.bang, shriek, th}));
          std::vector<int> agrade;
          agrade.reserve(comp.at->n_objects());
          for (int o = 0; o < comp.at->n_objects(); ++o)
            agrade.push_back(c.arity[comp.bang.on_obj[o]]);
          SCat sax = S_cat(comp.at, arities, agrade, arities, symmetric);
          SCat sa = S_cat(c.base, arities, c.arity, arities, symmetric);
          out.push_back(detail::square_check(
              "s-alpha-square/" + pname + "/" + cname,
              {S_functor(sax, ssx, comp.alpha), S_functor(sax, sa, comp.bang),
               S_functor(ssx, ss1, shriek), S_functor(sa, ss1, th)}));
        } catch (const Error& err) {
          out.push_back({"alpha-square/" + pname + "/" + cname, false, err.what()});
        }
      }
    } catch (const Error& err) {
      out.push_back({"probe/" + pname, false, err.what()});
    }
  }
  return out;
}

}  // namespace clubkit
