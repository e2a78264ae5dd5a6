#pragma once

// Horizontal collections: collection data on a profunctor, compatible with
// collection data on its two boundary categories.  The operations mirror the
// functor-level ones in clubs.hpp one level up: reconstruction is a pullback
// of cells, evaluation reads the tables back, and the cartesianness suites
// check naturality squares with is_pullback_pro.  The lifting construction
// hps_inverse builds the inverse comparison for a tensor of pullback squares
// over a groupoid explicitly, proarrow class by proarrow class.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "clubs.hpp"

namespace clubkit {

/* ------------------------------------------------- horizontal collections */

/// Collection data on a profunctor.  src_coll and tgt_coll live on the
/// boundary categories and perm[g] is the permutation assigned to proarrow g,
/// one table per proarrow of base_pro.
struct CollectionH {
  Collection0 src_coll;
  Collection0 tgt_coll;
  Profunctor base_pro;
  std::vector<std::vector<int>> perm;
};

namespace detail {

/// Table of g.f from the tables of g and f, same law the plain collection
/// validator enforces for composites.
inline std::vector<int> perm_after(const std::vector<int>& pg, const std::vector<int>& pf) {
  std::vector<int> out(pf.size());
  for (std::size_t i = 0; i < pf.size(); ++i) out[i] = pg[pf[i]];
  return out;
}

inline bool pro_equal(const Profunctor& a, const Profunctor& b) {
  if (!same_cat(a.src_cat, b.src_cat) || !same_cat(a.tgt_cat, b.tgt_cat)) return false;
  if (a.n_pros() != b.n_pros()) return false;
  for (int p = 0; p < a.n_pros(); ++p)
    if (a.pros[p].id != b.pros[p].id || a.pros[p].from != b.pros[p].from ||
        a.pros[p].to != b.pros[p].to)
      return false;
  return a.lact == b.lact && a.ract == b.ract;
}

inline bool cell_equal(const Cell& a, const Cell& b) {
  return pro_equal(a.source, b.source) && pro_equal(a.target, b.target) && a.vsrc == b.vsrc &&
         a.vtgt == b.vtgt && a.on_pro == b.on_pro;
}

}  // namespace detail

inline std::vector<Diagnostic> validate_collection_h(const CollectionH& h) {
  std::vector<Diagnostic> out;
  for (auto& d : validate_collection0(h.src_coll))
    out.push_back({d.code, "source collection: " + d.detail});
  for (auto& d : validate_collection0(h.tgt_coll))
    out.push_back({d.code, "target collection: " + d.detail});
  if (!out.empty()) return out;
  const Profunctor& P = h.base_pro;
  if (!same_cat(P.src_cat, h.src_coll.base) || !same_cat(P.tgt_cat, h.tgt_coll.base)) {
    out.push_back({"EndpointMismatch", "base profunctor does not run between the two bases"});
    return out;
  }
  if (static_cast<int>(h.perm.size()) != P.n_pros()) {
    out.push_back({"TableSize", "one permutation per proarrow"});
    return out;
  }
  for (int g = 0; g < P.n_pros(); ++g) {
    int nf = h.tgt_coll.arity[P.pros[g].from];
    int nt = h.src_coll.arity[P.pros[g].to];
    if (nf != nt || static_cast<int>(h.perm[g].size()) != nf) {
      out.push_back({"ArityMismatch", P.pros[g].id});
      continue;
    }
    std::vector<char> hit(h.perm[g].size(), 0);
    bool ok = true;
    for (int v : h.perm[g]) {
      if (v < 0 || v >= static_cast<int>(hit.size()) || hit[v]) ok = false;
      else hit[v] = 1;
    }
    if (!ok) out.push_back({"NotAPermutation", P.pros[g].id});
  }
  if (!out.empty()) return out;

  // the assignment must intertwine both actions with the boundary tables
  const FinCat& S = *P.src_cat;
  const FinCat& T = *P.tgt_cat;
  for (int g = 0; g < P.n_pros(); ++g) {
    for (int m = 0; m < S.n_morphisms(); ++m) {
      auto q = P.left_get(m, g);
      if (!q) continue;
      if (h.perm[*q] != detail::perm_after(h.src_coll.perm[m], h.perm[g]))
        out.push_back({"Equivariance", S.mor_id(m) + " acting on " + P.pros[g].id});
    }
    for (int f = 0; f < T.n_morphisms(); ++f) {
      auto q = P.right_get(g, f);
      if (!q) continue;
      if (h.perm[*q] != detail::perm_after(h.perm[g], h.tgt_coll.perm[f]))
        out.push_back({"Equivariance", P.pros[g].id + " acted on by " + T.mor_id(f)});
    }
  }
  return out;
}

/// A plain collection viewed horizontally over its own identity profunctor.
/// Proarrows of pro_identity are indexed like morphisms, so the tables carry
/// straight over.
inline CollectionH hcoll_identity(const Collection0& c) {
  return {c, c, pro_identity(c.base), c.perm};
}

inline CollectionH hcoll_unit() { return hcoll_identity(club_unit()); }

/* ------------------------------------------------------------ window setup */

/// S of the identity profunctor on the point.  Every theta cell lands here,
/// and its proarrows are the morphisms of the arity skeleton.
inline SPro point_window(const std::vector<int>& arities, bool symmetric = true) {
  return S_pro(pro_identity(terminal_category()), skeletal_S1(arities, symmetric),
               skeletal_S1(arities, symmetric));
}

/// List windows over both boundaries of a probe profunctor, ungraded.
inline SPro probe_window(const Profunctor& X, const std::vector<int>& arities,
                         bool symmetric = true) {
  return S_pro(X, S_cat(X.src_cat, arities, {}, {}, symmetric),
               S_cat(X.tgt_cat, arities, {}, {}, symmetric));
}

/// Cell form of the permutation assignment: base_pro into the point window,
/// with the two theta functors as boundaries.
inline Cell theta_procell(const CollectionH& h, const SPro& si1) {
  if (!same_cat(si1.s.base, terminal_category()) || !same_cat(si1.t.base, terminal_category()))
    fail(Errc::MissingTerminalProbe, "theta needs the window over the point");
  Cell out{h.base_pro, si1.pro, theta_functor(h.src_coll, si1.s), theta_functor(h.tgt_coll, si1.t),
           {}};
  out.on_pro.reserve(h.base_pro.n_pros());
  for (int g = 0; g < h.base_pro.n_pros(); ++g) {
    auto w = si1.pro_of(h.perm[g], std::vector<int>(h.perm[g].size(), 0));
    if (!w)
      fail(Errc::ArityOverflow,
           "assignment of " + h.base_pro.pros[g].id + " is outside the window");
    out.on_pro.push_back(*w);
  }
  return out;
}

/// Terminal cell of a profunctor: everything to the identity proarrow on the
/// point.
inline Cell bang_cell(const Profunctor& X) {
  Cell out{X, pro_identity(terminal_category()), bang(X.src_cat), bang(X.tgt_cat), {}};
  out.on_pro.assign(X.n_pros(), 0);
  return out;
}

/// Identity-profunctor leg of a plain collection: I on the base composed from
/// theta and the list-of-identities comparison.  Used wherever a collection
/// acts on probe data that is not itself an identity profunctor.
inline Cell collection_leg(const Collection0& c, const SPro& si1) {
  return compose_cells(e_comp(si1.s, si1), pro_identity_cell(theta_functor(c, si1.s)));
}

/* ----------------------------------------------------------- reconstruction */

/// One reconstructed component: the profunctor over the doubled boundary
/// categories together with its two projection cells and the window its list
/// leg lands in.
struct HCollComponent {
  Profunctor at;
  Cell bang;   // to the base profunctor (or its stand-in)
  Cell alpha;  // to the list profunctor of the window
  SPro window;
};

using HCollFamily = std::map<std::string, HCollComponent>;

/// The two functor-level components sitting under a profunctor-level one.
inline ClubComponent src_boundary(const HCollComponent& hc) {
  return {hc.at.src_cat, hc.bang.vsrc, hc.alpha.vsrc, hc.window.s};
}

inline ClubComponent tgt_boundary(const HCollComponent& hc) {
  return {hc.at.tgt_cat, hc.bang.vtgt, hc.alpha.vtgt, hc.window.t};
}

/// Component of the horizontal collection at a probe profunctor: the pullback
/// of theta against the terminal comparison of the probe's list profunctor.
/// sx must be a window pair over X's boundaries, si1 one over the point.
inline HCollComponent reconstruct1(const CollectionH& h, const Profunctor& X, const SPro& si1,
                                   const SPro& sx) {
  if (!same_cat(sx.s.base, X.src_cat) || !same_cat(sx.t.base, X.tgt_cat))
    fail(Errc::MismatchedTarget, "window does not sit over the probe");
  Cell th = theta_procell(h, si1);
  Cell sh = S_cell(bang_cell(X), sx, si1);
  ProPullback pb = pullback_pro(th, sh);
  return {std::move(pb.pro), std::move(pb.p1), std::move(pb.p2), sx};
}

/// Read the tables back from a component over the point.
inline CollectionH evaluate1(const Cell& alpha1, const SPro& si1) {
  if (!same_cat(si1.s.base, terminal_category()) || !same_cat(si1.t.base, terminal_category()))
    fail(Errc::MissingTerminalProbe, "evaluation needs a component over the point");
  if (alpha1.target.n_pros() != si1.pro.n_pros())
    fail(Errc::MismatchedTarget, "component does not land in the given window");
  CollectionH h{evaluate0(alpha1.vsrc, si1.s), evaluate0(alpha1.vtgt, si1.t), alpha1.source, {}};
  h.perm.reserve(alpha1.source.n_pros());
  for (int g = 0; g < alpha1.source.n_pros(); ++g)
    h.perm.push_back(si1.pro_perm[alpha1.on_pro[g]]);
  return h;
}

inline CollectionH evaluate1(const HCollFamily& fam) {
  for (const auto& [name, comp] : fam) {
    (void)name;
    if (same_cat(comp.window.s.base, terminal_category()) &&
        same_cat(comp.window.t.base, terminal_category()))
      return evaluate1(comp.alpha, comp.window);
  }
  fail(Errc::MissingTerminalProbe, "no component over the point in the family");
}

/// A plain collection acting on a probe profunctor.  Same pullback as
/// reconstruct1 of the horizontal identity, with the theta leg routed through
/// collection_leg; the two agree cell for cell.
inline HCollComponent collection_action(const Collection0& c, const Profunctor& X,
                                        const SPro& si1, const SPro& sx) {
  if (!same_cat(sx.s.base, X.src_cat) || !same_cat(sx.t.base, X.tgt_cat))
    fail(Errc::MismatchedTarget, "window does not sit over the probe");
  Cell leg = collection_leg(c, si1);
  Cell sh = S_cell(bang_cell(X), sx, si1);
  ProPullback pb = pullback_pro(leg, sh);
  return {std::move(pb.pro), std::move(pb.p1), std::move(pb.p2), sx};
}

/// Comparison cell into a canonical profunctor pullback from any other pair
/// of legs over the same cospan.  A miss means the legs do not factor.
inline Cell induced_pro_cell(const Cell& p, const Cell& q, const ProPullback& pb) {
  if (!(p.source == q.source)) fail(Errc::MismatchedTarget, "legs do not share a source");
  detail::PairIndex os = detail::pair_index(pb.p1.vsrc, pb.p2.vsrc);
  detail::PairIndex ot = detail::pair_index(pb.p1.vtgt, pb.p2.vtgt);

  const FinCat& ds = *p.source.src_cat;
  const FinCat& dt = *p.source.tgt_cat;
  Functor vs{p.source.src_cat, pb.pro.src_cat, {}, {}};
  for (int o = 0; o < ds.n_objects(); ++o) {
    auto it = os.obj.find(detail::key64(p.vsrc.on_obj[o], q.vsrc.on_obj[o]));
    if (it == os.obj.end())
      fail(Errc::NotInduced, ds.object_id(o) + " does not factor through the pullback");
    vs.on_obj.push_back(it->second);
  }
  for (int m = 0; m < ds.n_morphisms(); ++m) {
    auto it = os.mor.find(detail::key64(p.vsrc.on_mor[m], q.vsrc.on_mor[m]));
    if (it == os.mor.end())
      fail(Errc::NotInduced, ds.mor_id(m) + " does not factor through the pullback");
    vs.on_mor.push_back(it->second);
  }
  Functor vt{p.source.tgt_cat, pb.pro.tgt_cat, {}, {}};
  for (int o = 0; o < dt.n_objects(); ++o) {
    auto it = ot.obj.find(detail::key64(p.vtgt.on_obj[o], q.vtgt.on_obj[o]));
    if (it == ot.obj.end())
      fail(Errc::NotInduced, dt.object_id(o) + " does not factor through the pullback");
    vt.on_obj.push_back(it->second);
  }
  for (int m = 0; m < dt.n_morphisms(); ++m) {
    auto it = ot.mor.find(detail::key64(p.vtgt.on_mor[m], q.vtgt.on_mor[m]));
    if (it == ot.mor.end())
      fail(Errc::NotInduced, dt.mor_id(m) + " does not factor through the pullback");
    vt.on_mor.push_back(it->second);
  }

  std::unordered_map<std::uint64_t, int> pp;
  pp.reserve(pb.pro.n_pros());
  for (int w = 0; w < pb.pro.n_pros(); ++w)
    pp.emplace(detail::key64(pb.p1.on_pro[w], pb.p2.on_pro[w]), w);
  Cell out{p.source, pb.pro, std::move(vs), std::move(vt), {}};
  out.on_pro.reserve(p.source.n_pros());
  for (int r = 0; r < p.source.n_pros(); ++r) {
    auto it = pp.find(detail::key64(p.on_pro[r], q.on_pro[r]));
    if (it == pp.end())
      fail(Errc::NotInduced,
           "proarrow " + p.source.pros[r].id + " does not factor through the pullback");
    out.on_pro.push_back(it->second);
  }
  return out;
}

/// Image of a probe cell under reconstruction: c runs between the two probes
/// and the result runs between their components.  Fails with Internal when
/// the image pair is missing, which on validated data cannot happen.
inline Cell reconstruct1_on_cell(const Cell& c, const HCollComponent& cx,
                                 const HCollComponent& cy) {
  Cell sc = S_cell(c, cx.window, cy.window);
  Functor vs = reconstruct0_on_functor(c.vsrc, src_boundary(cx), src_boundary(cy));
  Functor vt = reconstruct0_on_functor(c.vtgt, tgt_boundary(cx), tgt_boundary(cy));
  std::unordered_map<std::uint64_t, int> pp;
  pp.reserve(cy.at.n_pros());
  for (int w = 0; w < cy.at.n_pros(); ++w)
    pp.emplace(detail::key64(cy.bang.on_pro[w], cy.alpha.on_pro[w]), w);
  Cell out{cx.at, cy.at, std::move(vs), std::move(vt), {}};
  out.on_pro.reserve(cx.at.n_pros());
  for (int p = 0; p < cx.at.n_pros(); ++p) {
    auto it = pp.find(detail::key64(cx.bang.on_pro[p], sc.on_pro[cx.alpha.on_pro[p]]));
    if (it == pp.end()) fail(Errc::Internal, "image pair missing from the reconstruction");
    out.on_pro.push_back(it->second);
  }
  return out;
}

/* --------------------------------------------------------- pseudonaturality */

/// The invertible comparison that swaps a collection action past the
/// reconstructed components, with everything that went into building it.
struct PseudoNat {
  HCollComponent t_act;   // target collection acting on the probe
  HCollComponent s_act;   // source collection acting on the probe
  HCollComponent at_src;  // component at the identity of the source boundary
  HCollComponent at_tgt;  // component at the identity of the target boundary
  ProComposite lhs;       // t_act after at_src
  ProComposite rhs;       // at_tgt after s_act
  Cell cell;              // lhs.pro -> rhs.pro, bijective
};

/// Both sides of the swap embed into the canonical pullback of the tensored
/// theta cospan; the comparison is right-inverse composed with left leg.
/// NotInduced if either face fails to factor, so a non-natural candidate
/// never silently produces a cell.
inline PseudoNat pseudonaturality(const CollectionH& h, const Profunctor& X,
                                  const std::vector<int>& arities, bool symmetric = true) {
  std::vector<int> W = arities;
  for (int a : collection_arities(h.src_coll)) W.push_back(a);
  for (int a : collection_arities(h.tgt_coll)) W.push_back(a);
  std::sort(W.begin(), W.end());
  W.erase(std::unique(W.begin(), W.end()), W.end());

  SPro si1 = point_window(W, symmetric);
  SPro sx = probe_window(X, W, symmetric);
  Profunctor ixs = pro_identity(X.src_cat);
  Profunctor ixt = pro_identity(X.tgt_cat);
  SPro sis = S_pro(ixs, sx.s, sx.s);
  SPro sit = S_pro(ixt, sx.t, sx.t);

  PseudoNat out;
  out.t_act = collection_action(h.tgt_coll, X, si1, sx);
  out.s_act = collection_action(h.src_coll, X, si1, sx);
  out.at_src = reconstruct1(h, ixs, si1, sis);
  out.at_tgt = reconstruct1(h, ixt, si1, sit);
  out.lhs = pro_compose(out.t_act.at, out.at_src.at);
  out.rhs = pro_compose(out.at_tgt.at, out.s_act.at);

  // unit corners of the base data
  UnitorPair blam = unitor_left(h.base_pro);
  UnitorPair brho = unitor_right(h.base_pro);
  Cell top_diag = compose_cells(brho.cell, invert_cell(blam.cell));

  // list image of the probe unitors
  UnitorPair xrho = unitor_right(X);
  UnitorPair xlam = unitor_left(X);
  SPro s_xr = S_pro(xrho.tensor.pro, sx.s, sx.t);
  SPro s_xl = S_pro(xlam.tensor.pro, sx.s, sx.t);
  MComp m5 = m_comp(sx, sis, xrho.tensor, s_xr);
  MComp m7 = m_comp(sit, sx, xlam.tensor, s_xl);
  Cell bot_diag = compose_cells(
      invert_cell(m7.cell),
      compose_cells(S_cell(xlam.cell, sx, s_xl),
                    compose_cells(invert_cell(S_cell(xrho.cell, sx, s_xr)), m5.cell)));

  // canonical pullback of the tensored cospan
  ProComposite ii = pro_compose(si1.pro, si1.pro);
  Cell legf =
      tensor_cells(theta_procell(h, si1), collection_leg(h.src_coll, si1), brho.tensor, ii);
  Cell legg = tensor_cells(S_cell(bang_cell(ixt), sit, si1), S_cell(bang_cell(X), sx, si1),
                           m7.tensored, ii);
  ProPullback pb = pullback_pro(legf, legg);

  Cell u_rhs = induced_pro_cell(
      tensor_cells(out.at_tgt.bang, out.s_act.bang, out.rhs, brho.tensor),
      tensor_cells(out.at_tgt.alpha, out.s_act.alpha, out.rhs, m7.tensored), pb);
  if (!cell_bijective(u_rhs))
    fail(Errc::NotInduced, "right-hand comparison into the pullback is not invertible");
  Cell u_lhs = induced_pro_cell(
      compose_cells(top_diag, tensor_cells(out.t_act.bang, out.at_src.bang, out.lhs, blam.tensor)),
      compose_cells(bot_diag,
                    tensor_cells(out.t_act.alpha, out.at_src.alpha, out.lhs, m5.tensored)),
      pb);
  out.cell = compose_cells(invert_cell(u_rhs), u_lhs);
  return out;
}

/* ------------------------------------------------------------- property hps */

/// Pullback squares of categories stay pullbacks after passing to identity
/// profunctors.
inline ComparisonReport hps2_check(const CommutingSquare& sq) {
  CellSquare s{pro_identity_cell(sq.top), pro_identity_cell(sq.left), pro_identity_cell(sq.right),
               pro_identity_cell(sq.bottom)};
  return is_pullback_pro(s);
}

/// Two horizontally composable pullback squares of cells whose cospans land
/// in one identity profunctor.  The shared middle functor is the one whose
/// lifting behaviour decides whether the explicit inverse applies.
struct HpsInstance {
  CellSquare first;
  CellSquare second;  // source boundary equal to first's target boundary
};

inline const Functor& hps_middle(const HpsInstance& inst) { return inst.first.bottom.vtgt; }

inline std::vector<Diagnostic> validate_hps_instance(const HpsInstance& inst) {
  std::vector<Diagnostic> out;
  if (!(inst.first.top.vtgt == inst.second.top.vsrc) ||
      !(inst.first.left.vtgt == inst.second.left.vsrc) ||
      !(inst.first.right.vtgt == inst.second.right.vsrc) ||
      !(inst.first.bottom.vtgt == inst.second.bottom.vsrc))
    out.push_back({"BoundaryMismatch", "squares are not horizontally composable"});
  const Profunctor& A1 = inst.first.bottom.target;
  const Profunctor& A2 = inst.second.bottom.target;
  if (!same_cat(A1.src_cat, A1.tgt_cat) || !detail::pro_equal(A1, pro_identity(A1.src_cat)))
    out.push_back({"NotIdentityBase", "first cospan does not land in an identity profunctor"});
  if (!detail::pro_equal(A1, A2))
    out.push_back({"NotIdentityBase", "the two cospans land in different profunctors"});
  if (!out.empty()) return out;
  try {
    ComparisonReport r1 = is_pullback_pro(inst.first);
    if (!r1.verdict)
      out.push_back({"NotAPullback",
                     "first square: " + r1.counterexample.value_or("comparison not bijective")});
    ComparisonReport r2 = is_pullback_pro(inst.second);
    if (!r2.verdict)
      out.push_back({"NotAPullback",
                     "second square: " + r2.counterexample.value_or("comparison not bijective")});
  } catch (const Error& e) {
    out.push_back({"NotAPullback", e.what()});
  }
  return out;
}

namespace detail {

struct HpsTensor {
  ProComposite dd, cc, bb, aa;
  CellSquare square;
};

/// Horizontal composite of the two squares, formed edge by edge.
inline HpsTensor hps_tensor(const HpsInstance& inst) {
  HpsTensor t{pro_compose(inst.second.top.source, inst.first.top.source),
              pro_compose(inst.second.top.target, inst.first.top.target),
              pro_compose(inst.second.left.target, inst.first.left.target),
              pro_compose(inst.second.right.target, inst.first.right.target),
              {}};
  t.square = {tensor_cells(inst.second.top, inst.first.top, t.dd, t.cc),
              tensor_cells(inst.second.left, inst.first.left, t.dd, t.bb),
              tensor_cells(inst.second.right, inst.first.right, t.cc, t.aa),
              tensor_cells(inst.second.bottom, inst.first.bottom, t.bb, t.aa)};
  return t;
}

inline std::vector<std::vector<int>> members_by_class(const ProComposite& pc) {
  std::vector<std::vector<int>> m(pc.w.n_classes());
  for (int r = 0; r < static_cast<int>(pc.w.raw.size()); ++r) m[pc.w.class_of[r]].push_back(r);
  return m;
}

}  // namespace detail

/// Does the tensor of the two squares stay a pullback?
inline ComparisonReport hps1_check(const HpsInstance& inst) {
  return is_pullback_pro(detail::hps_tensor(inst).square);
}

/// The tensored comparison u together with its explicit inverse v.
struct HpsInverse {
  ProComposite dd;     // composite of the two apexes
  ProPullback pulled;  // canonical pullback of the tensored cospan
  Cell u;              // comparison into the pullback
  Cell v;              // classwise inverse, built by lifting
  bool v_after_u = false;
  bool u_after_v = false;
};

/// Inverse comparison for the tensored square, assuming the base is a
/// groupoid and the middle functor is an opfibration.  For a pullback class
/// (b, c) the two composite representatives disagree at the middle by an
/// invertible base morphism; its cocartesian lift slides one representative
/// onto the other, and the slid pair factors through both apexes.  Every
/// representative is swept so dependence on the choice is a checked failure.
inline HpsInverse hps_inverse(const HpsInstance& inst) {
  const CatRef& A = inst.first.bottom.target.src_cat;
  const Functor& f2 = hps_middle(inst);
  if (!is_groupoid(*A)) fail(Errc::HypothesisFailed, "base category is not a groupoid");
  if (!is_opfibration(f2)) fail(Errc::HypothesisFailed, "middle functor is not an opfibration");
  {
    auto diags = validate_hps_instance(inst);
    if (!diags.empty()) fail(Errc::HypothesisFailed, diags.front().detail);
  }

  detail::HpsTensor t = detail::hps_tensor(inst);
  HpsInverse out{t.dd, {}, {}, {}, false, false};
  out.pulled = pullback_pro(t.square.bottom, t.square.right);
  out.u = induced_pro_cell(t.square.left, t.square.top, out.pulled);
  if (!functor_bijective(out.u.vsrc) || !functor_bijective(out.u.vtgt))
    fail(Errc::Internal, "boundary comparison of a pullback pair is not invertible");

  const Profunctor& B23 = inst.second.left.target;
  const Profunctor& B12 = inst.first.left.target;
  const FinCat& B2 = *f2.source;

  std::unordered_map<std::uint64_t, int> d23_of, d12_of;
  for (int d = 0; d < inst.second.top.source.n_pros(); ++d)
    d23_of.emplace(detail::key64(inst.second.left.on_pro[d], inst.second.top.on_pro[d]), d);
  for (int d = 0; d < inst.first.top.source.n_pros(); ++d)
    d12_of.emplace(detail::key64(inst.first.left.on_pro[d], inst.first.top.on_pro[d]), d);

  std::vector<std::vector<int>> bmem = detail::members_by_class(t.bb);
  std::vector<std::vector<int>> cmem = detail::members_by_class(t.cc);

  Cell v{out.pulled.pro, out.dd.pro, invert_functor(out.u.vsrc), invert_functor(out.u.vtgt), {}};
  v.on_pro.reserve(out.pulled.pro.n_pros());
  for (int w = 0; w < out.pulled.pro.n_pros(); ++w) {
    int image = -1;
    for (int rb : bmem[out.pulled.p1.on_pro[w]]) {
      auto [al, be] = t.bb.w.raw[rb];  // al in B23, be in B12
      for (int rc : cmem[out.pulled.p2.on_pro[w]]) {
        auto [ga, de] = t.cc.w.raw[rc];  // ga in C23, de in C12
        // identity-profunctor proarrows are indexed by base morphisms
        int ma = inst.second.bottom.on_pro[al];
        int nc = inst.second.right.on_pro[ga];
        int psi = A->compose(nc, groupoid_inverse(*A, ma));
        int lift = cocartesian_lift(f2, psi, B23.pros[al].to);
        int lift_inv = -1;
        for (int q = 0; q < B2.n_morphisms(); ++q) {
          if (B2.src(q) != B2.dst(lift) || B2.dst(q) != B2.src(lift)) continue;
          auto a = B2.compose_get(q, lift);
          auto b = B2.compose_get(lift, q);
          if (a && b && *a == B2.identity_of(B2.src(lift)) &&
              *b == B2.identity_of(B2.dst(lift))) {
            lift_inv = q;
            break;
          }
        }
        if (lift_inv < 0)
          fail(Errc::Internal, "cocartesian lift of an invertible morphism has no inverse");
        int al2 = B23.left(lift, al);
        int be2 = B12.right(be, lift_inv);
        auto itd = d23_of.find(detail::key64(al2, ga));
        auto ite = d12_of.find(detail::key64(be2, de));
        if (itd == d23_of.end() || ite == d12_of.end())
          fail(Errc::Internal, "slid pair missing from an apex");
        int cls = out.dd.w.class_of_pair(itd->second, ite->second);
        if (image < 0) image = cls;
        else if (image != cls)
          fail(Errc::IllDefined,
               "inverse depends on the representative at " + out.pulled.pro.pros[w].id);
      }
    }
    if (image < 0) fail(Errc::Internal, "empty pullback class");
    v.on_pro.push_back(image);
  }
  out.v = std::move(v);
  out.v_after_u = is_identity_cell(compose_cells(out.v, out.u));
  out.u_after_v = is_identity_cell(compose_cells(out.u, out.v));
  return out;
}

/* --------------------------------------------- tensor over the substitution */

/// Arities the substituted data can reach: every sum of inner arities over a
/// tuple shaped by an outer arity, plus everything the callers asked for.
inline std::vector<int> composite_arities(const CollectionH& h, const CollectionH& k,
                                          const std::vector<int>& arities) {
  std::set<int> outer, inner, all(arities.begin(), arities.end());
  for (int a : collection_arities(h.src_coll)) outer.insert(a);
  for (int a : collection_arities(h.tgt_coll)) outer.insert(a);
  for (int a : collection_arities(k.src_coll)) inner.insert(a);
  for (int a : collection_arities(k.tgt_coll)) inner.insert(a);
  all.insert(outer.begin(), outer.end());
  all.insert(inner.begin(), inner.end());
  for (int l : outer) {
    std::set<int> acc{0};
    for (int i = 0; i < l; ++i) {
      std::set<int> next;
      for (int s : acc)
        for (int a : inner) next.insert(s + a);
      acc = std::move(next);
    }
    all.insert(acc.begin(), acc.end());
  }
  return {all.begin(), all.end()};
}

/// Window bundle for one probe category: lists over it, S of its identity
/// profunctor, and the graded doubled layer that the multiplication composite
/// lives in.
struct ProbeWindows {
  SCat sx;
  SPro six;
  SCat ssx;
  SPro s_isx;  // S I over the list category
  SPro ss_ix;  // S of six
};

inline ProbeWindows probe_windows(const CatRef& X, const std::vector<int>& arities,
                                  bool symmetric) {
  ProbeWindows p;
  p.sx = S_cat(X, arities, {}, {}, symmetric);
  p.six = S_pro(pro_identity(X), p.sx, p.sx);
  p.ssx = S_cat(p.sx.cat, arities, flat_grade(p.sx), arities, symmetric);
  p.s_isx = S_pro(pro_identity(p.sx.cat), p.ssx, p.ssx);
  p.ss_ix = S_pro(p.six.pro, p.ssx, p.ssx);
  return p;
}

/// The probe-dependent but collection-independent part of a tensor component:
/// the window bundle plus the multiplication leg down to the probe's list
/// level.  Building one is by far the dominant cost of a component, so
/// callers running many tensors over the same probes share them via a cache.
struct ProbeLayer {
  ProbeWindows w;
  ProComposite col_pair;  // codomain composite of the two columns
  Cell mu_leg;            // multiplication composite down to six
};

/// Keyed by caller-supplied probe name, window, and monad flavour; names must
/// identify the probe category consistently across calls sharing a cache.
using ProbeLayerCache = std::map<std::string, std::shared_ptr<const ProbeLayer>>;

inline std::shared_ptr<const ProbeLayer> probe_layer(const CatRef& X,
                                                     const std::vector<int>& arities,
                                                     bool symmetric) {
  auto out = std::make_shared<ProbeLayer>();
  out->w = probe_windows(X, arities, symmetric);
  UnitorPair ul = unitor_left(out->w.six.pro);
  SPro s_ul = S_pro(ul.tensor.pro, out->w.ssx, out->w.ssx);
  MComp mm = m_comp(out->w.s_isx, out->w.ss_ix, ul.tensor, s_ul);
  out->col_pair = std::move(mm.tensored);
  out->mu_leg = compose_cells(
      mu_pro(out->w.ss_ix, out->w.six),
      compose_cells(invert_cell(S_cell(ul.cell, out->w.ss_ix, s_ul)), mm.cell));
  return out;
}

namespace detail {

inline std::shared_ptr<const ProbeLayer> cached_layer(ProbeLayerCache* cache,
                                                      const std::string& name, const CatRef& X,
                                                      const std::vector<int>& arities,
                                                      bool symmetric) {
  if (!cache) return probe_layer(X, arities, symmetric);
  std::string key = name + (symmetric ? "|S|" : "|T|");
  for (int a : arities) {
    key += std::to_string(a);
    key += ',';
  }
  auto it = cache->find(key);
  if (it == cache->end()) it = cache->emplace(key, probe_layer(X, arities, symmetric)).first;
  return it->second;
}

}  // namespace detail

/// Everything the tensor of two horizontal collections produces at one probe
/// category: the substituted component with the two column cells and the
/// multiplication leg that carries it back down to the probe's list level.
struct TensorComponent {
  std::shared_ptr<const ProbeLayer> layer;
  ClubComponent bt;     // target collection of k at the probe
  SPro s_ibt;           // S I over bt.at
  HCollComponent kx;    // component of k at the probe's identity
  SPro s_kx;            // S of kx.at
  HCollComponent ax;    // component of h at the identity of bt.at
  HCollComponent askx;  // source collection of h acting on kx.at
  ProComposite comp;    // the composite component
  Cell col_a;           // through S I of bt's list leg
  Cell col_b;           // through S of kx's list leg
  Cell theta;           // full list leg of the composite

  const ProbeWindows& w() const { return layer->w; }
  const ProComposite& col_pair() const { return layer->col_pair; }
  const Cell& mu_leg() const { return layer->mu_leg; }
};

inline TensorComponent tensor_component(const CollectionH& h, const CollectionH& k,
                                        const CatRef& X, const SPro& si1,
                                        const std::vector<int>& arities, bool symmetric,
                                        std::shared_ptr<const ProbeLayer> layer = nullptr) {
  TensorComponent r;
  r.layer = layer ? std::move(layer) : probe_layer(X, arities, symmetric);
  r.bt = reconstruct0(k.tgt_coll, si1.s, r.w().sx);
  // grade the stacked windows by the arity of the inner lists, otherwise a
  // list of lists can flatten past the window and the comparison functors
  // have nowhere to land
  std::vector<int> fg = flat_grade(r.w().sx);
  std::vector<int> gbt(r.bt.at->n_objects());
  for (int o = 0; o < r.bt.at->n_objects(); ++o) gbt[o] = fg[r.bt.alpha.on_obj[o]];
  SCat sbt = S_cat(r.bt.at, arities, gbt, arities, symmetric);
  r.s_ibt = S_pro(pro_identity(r.bt.at), sbt, sbt);
  r.kx = reconstruct1(k, pro_identity(X), si1, r.w().six);
  std::vector<int> gks(r.kx.at.src_cat->n_objects());
  for (int o = 0; o < r.kx.at.src_cat->n_objects(); ++o)
    gks[o] = fg[r.kx.alpha.vsrc.on_obj[o]];
  SCat sks = S_cat(r.kx.at.src_cat, arities, gks, arities, symmetric);
  r.s_kx = S_pro(r.kx.at, sks, sbt);
  r.ax = reconstruct1(h, pro_identity(r.bt.at), si1, r.s_ibt);
  r.askx = collection_action(h.src_coll, r.kx.at, si1, r.s_kx);
  r.comp = pro_compose(r.ax.at, r.askx.at);

  Cell sibt = S_cell(pro_identity_cell(r.bt.alpha), r.s_ibt, r.w().s_isx);
  Cell sbeta = S_cell(r.kx.alpha, r.s_kx, r.w().ss_ix);
  r.col_a = compose_cells(sibt, r.ax.alpha);
  r.col_b = compose_cells(sbeta, r.askx.alpha);
  ProComposite mid = pro_compose(r.s_ibt.pro, r.s_kx.pro);
  Cell l1 = tensor_cells(r.ax.alpha, r.askx.alpha, r.comp, mid);
  Cell l2 = tensor_cells(sibt, sbeta, mid, r.col_pair());
  r.theta = compose_cells(r.mu_leg(), compose_cells(l2, l1));
  return r;
}

namespace detail {

inline CheckResult pro_square_check(const std::string& name, const CellSquare& sq) {
  CheckResult r{name, false, ""};
  try {
    ComparisonReport rep = is_pullback_pro(sq);
    r.pass = rep.verdict;
    if (!rep.verdict) r.detail = rep.counterexample.value_or("comparison is not bijective");
  } catch (const Error& err) {
    r.detail = err.what();
  } catch (const std::exception& err) {
    r.detail = err.what();
  }
  return r;
}

}  // namespace detail

/// Result of tensoring two horizontal collections: the composite tables read
/// off at the point, the per-probe components, and one verdict per naturality
/// square in the cartesianness argument.
struct HCollTensor {
  CollectionH coll;
  TensorComponent point;
  std::map<std::string, TensorComponent> at;
  std::vector<CheckResult> checks;
};

/// Ran after a probe's squares with the component still in scope; lets
/// callers add their own checks without the tensor retaining every component.
using TensorProbeHook =
    std::function<void(const std::string&, const CatRef&, const TensorComponent& bx,
                       const TensorComponent& pt, std::vector<CheckResult>&)>;

/// Composite of h over k.  Per probe the component is built over the doubled
/// graded window and five squares against the point component are tested: the
/// two columns, their tensor, the multiplication leg, and the assembled outer
/// square.  Failures are reported per named square, never thrown.  A cache
/// shares probe layers between calls; keep_components false drops each probe
/// component once its checks (and the hook, if any) have seen it, which keeps
/// the peak footprint at one component regardless of the probe count.
inline HCollTensor hcoll_tensor(const CollectionH& h, const CollectionH& k,
                                const std::vector<std::pair<std::string, CatRef>>& probes,
                                const std::vector<int>& arities, bool symmetric = true,
                                ProbeLayerCache* cache = nullptr, bool keep_components = true,
                                const TensorProbeHook& hook = {}) {
  HCollTensor out;
  std::vector<int> W = composite_arities(h, k, arities);
  SPro si1;
  try {
    si1 = point_window(W, symmetric);
    out.point = tensor_component(h, k, terminal_category(), si1, W, symmetric,
                                 detail::cached_layer(cache, "()", terminal_category(), W,
                                                      symmetric));
    out.coll = evaluate1(out.point.theta, out.point.w().six);
  } catch (const Error& e) {
    out.checks.push_back({"setup", false, e.what()});
    return out;
  } catch (const std::exception& e) {
    out.checks.push_back({"setup", false, e.what()});
    return out;
  }
  const TensorComponent& pt = out.point;

  for (const auto& [name, X] : probes) {
    try {
      TensorComponent bx = tensor_component(h, k, X, si1, W, symmetric,
                                            detail::cached_layer(cache, name, X, W, symmetric));

      Functor btmap = reconstruct0_on_functor(bang(X), bx.bt, pt.bt);
      Cell acell = reconstruct1_on_cell(pro_identity_cell(btmap), bx.ax, pt.ax);
      Cell kcell = reconstruct1_on_cell(bang_cell(pro_identity(X)), bx.kx, pt.kx);
      Cell bcell = reconstruct1_on_cell(kcell, bx.askx, pt.askx);
      Cell top = tensor_cells(acell, bcell, bx.comp, pt.comp);

      Functor sx_bang = S_functor(bx.w().sx, pt.w().sx, bang(X));
      Cell bot_a = S_cell(pro_identity_cell(sx_bang), bx.w().s_isx, pt.w().s_isx);
      Cell s_ibang = S_cell(bang_cell(pro_identity(X)), bx.w().six, pt.w().six);
      Cell bot_b = S_cell(s_ibang, bx.w().ss_ix, pt.w().ss_ix);

      out.checks.push_back(detail::pro_square_check(
          "alpha-column/" + name, {acell, bx.col_a, pt.col_a, bot_a}));
      out.checks.push_back(detail::pro_square_check(
          "beta-column/" + name, {bcell, bx.col_b, pt.col_b, bot_b}));
      Cell cols_x = tensor_cells(bx.col_a, bx.col_b, bx.comp, bx.col_pair());
      Cell cols_pt = tensor_cells(pt.col_a, pt.col_b, pt.comp, pt.col_pair());
      Cell bots = tensor_cells(bot_a, bot_b, bx.col_pair(), pt.col_pair());
      out.checks.push_back(
          detail::pro_square_check("tensor-square/" + name, {top, cols_x, cols_pt, bots}));
      out.checks.push_back(detail::pro_square_check(
          "mu-square/" + name, {bots, bx.mu_leg(), pt.mu_leg(), s_ibang}));
      out.checks.push_back(detail::pro_square_check(
          "composite-square/" + name, {top, bx.theta, pt.theta, s_ibang}));
      if (hook) hook(name, X, bx, pt, out.checks);
      if (keep_components) out.at.insert_or_assign(name, std::move(bx));
    } catch (const Error& e) {
      out.checks.push_back({"probe/" + name, false, e.what()});
    } catch (const std::exception& e) {
      out.checks.push_back({"probe/" + name, false, e.what()});
    }
  }
  return out;
}

/// Interchange of two plain collections at a probe: the outer collection's
/// horizontal identity is pseudonatural at the inner collection's action.
inline PseudoNat interchange(const Collection0& outer, const Collection0& inner,
                             const Profunctor& X, const std::vector<int>& arities,
                             bool symmetric = true) {
  std::vector<int> W = arities;
  for (int a : collection_arities(inner)) W.push_back(a);
  std::sort(W.begin(), W.end());
  W.erase(std::unique(W.begin(), W.end()), W.end());
  SPro si1 = point_window(W, symmetric);
  SPro sx = probe_window(X, W, symmetric);
  HCollComponent bx = collection_action(inner, X, si1, sx);
  return pseudonaturality(hcoll_identity(outer), bx.at, W, symmetric);
}

/* ----------------------------------------------------------------- whisker */

/// Whiskering a plain collection onto a horizontal one.
struct WhiskerResult {
  CollectionH coll;
  std::vector<CheckResult> checks;
};

/// The whiskered data is the tensor by the horizontal identity of c0.  On top
/// of the tensor's own squares this adds, per probe, the direct path (the
/// plain collection acting on the reconstructed component), its comparison
/// into the composite along the unit proarrows, and the direct naturality
/// square.  The extras run through the tensor's probe hook so each component
/// is dropped as soon as its checks are done.  A broken input shows up as
/// failed checks naming the probe.
inline WhiskerResult whisker_collection(const Collection0& c0, const CollectionH& h,
                                        const std::vector<std::pair<std::string, CatRef>>& probes,
                                        const std::vector<int>& arities, bool symmetric = true,
                                        ProbeLayerCache* cache = nullptr) {
  CollectionH hc0 = hcoll_identity(c0);
  const FinCat& base = *hc0.base_pro.src_cat;
  std::set<std::string> reached;

  auto extras = [&](const std::string& name, const CatRef& X, const TensorComponent& bx,
                    const TensorComponent& pt, std::vector<CheckResult>& checks) {
    reached.insert(name);

    // the direct path is the askx factor of the tensor; composing with the
    // unit factor must not change the proarrow count
    CheckResult two{"two-path/" + name, false, ""};
    if (bx.askx.at.n_pros() == bx.comp.pro.n_pros()) two.pass = true;
    else
      two.detail = "direct action has " + std::to_string(bx.askx.at.n_pros()) +
                   " proarrows, composite has " + std::to_string(bx.comp.pro.n_pros());
    checks.push_back(two);

    // unit-proarrow comparison into the composite, the cell behind the
    // count equality: d maps to [unit at from(d) (x) d]
    CheckResult lam{"lambda-map/" + name, false, ""};
    std::unordered_map<std::uint64_t, int> axpair;
    for (int p = 0; p < bx.ax.at.n_pros(); ++p)
      axpair.emplace(detail::key64(bx.ax.bang.on_pro[p], bx.ax.alpha.on_pro[p]), p);
    const SCat& sbt = bx.s_ibt.s;
    Cell la{bx.askx.at, bx.comp.pro, {bx.askx.at.src_cat, bx.comp.pro.src_cat, {}, {}},
            {bx.askx.at.tgt_cat, bx.comp.pro.tgt_cat, {}, {}}, {}};
    for (int o = 0; o < bx.askx.at.src_cat->n_objects(); ++o) la.vsrc.on_obj.push_back(o);
    for (int m = 0; m < bx.askx.at.src_cat->n_morphisms(); ++m) la.vsrc.on_mor.push_back(m);
    for (int o = 0; o < bx.askx.at.tgt_cat->n_objects(); ++o) la.vtgt.on_obj.push_back(o);
    for (int m = 0; m < bx.askx.at.tgt_cat->n_morphisms(); ++m) la.vtgt.on_mor.push_back(m);
    bool built = true;
    for (int d = 0; built && d < bx.askx.at.n_pros(); ++d) {
      int o = bx.askx.at.pros[d].from;  // object of the shared middle category
      int b = bx.ax.bang.vsrc.on_obj[o];
      int L = bx.ax.alpha.vsrc.on_obj[o];
      int idm = sbt.cat->identity_of(L);
      auto mpro = bx.s_ibt.pro_of(sbt.mor_perm[idm], sbt.mor_comps[idm]);
      if (!mpro) { lam.detail = "identity list proarrow missing"; built = false; break; }
      auto u = axpair.find(detail::key64(base.identity_of(b), *mpro));
      if (u == axpair.end()) { lam.detail = "unit proarrow missing"; built = false; break; }
      la.on_pro.push_back(bx.comp.w.class_of_pair(u->second, d));
    }
    if (built) {
      auto diags = validate_cell(la);
      if (!diags.empty()) lam.detail = diags.front().code + ": " + diags.front().detail;
      else if (!cell_bijective(la)) lam.detail = "comparison is not bijective";
      else lam.pass = true;
    }
    checks.push_back(lam);

    // direct naturality square over the terminal functor
    Cell kcell = reconstruct1_on_cell(bang_cell(pro_identity(X)), bx.kx, pt.kx);
    Cell bcell = reconstruct1_on_cell(kcell, bx.askx, pt.askx);
    Cell dl_x = compose_cells(
        mu_pro(bx.w().ss_ix, bx.w().six),
        compose_cells(S_cell(bx.kx.alpha, bx.s_kx, bx.w().ss_ix), bx.askx.alpha));
    Cell dl_pt = compose_cells(
        mu_pro(pt.w().ss_ix, pt.w().six),
        compose_cells(S_cell(pt.kx.alpha, pt.s_kx, pt.w().ss_ix), pt.askx.alpha));
    Cell s_ibang = S_cell(bang_cell(pro_identity(X)), bx.w().six, pt.w().six);
    checks.push_back(
        detail::pro_square_check("direct-square/" + name, {bcell, dl_x, dl_pt, s_ibang}));
  };

  HCollTensor t =
      hcoll_tensor(hc0, h, probes, arities, symmetric, cache, /*keep_components=*/false, extras);
  WhiskerResult out{t.coll, t.checks};
  std::vector<int> W = composite_arities(hc0, h, arities);

  for (const auto& [name, X] : probes) {
    if (reached.count(name)) continue;
    try {
      // the tensor never got this far; drive the direct path on its own so
      // the breakage is reported against this probe
      SPro si1 = point_window(W, symmetric);
      ProbeWindows w = probe_windows(X, W, symmetric);
      HCollComponent hx = reconstruct1(h, pro_identity(X), si1, w.six);
      SCat ds = S_cat(hx.at.src_cat, W, {}, {}, symmetric);
      SCat dt = S_cat(hx.at.tgt_cat, W, {}, {}, symmetric);
      collection_action(c0, hx.at, si1, S_pro(hx.at, ds, dt));
      out.checks.push_back({"two-path/" + name, false, "composite unavailable"});
    } catch (const Error& e) {
      out.checks.push_back({"probe/" + name, false, e.what()});
    } catch (const std::exception& e) {
      out.checks.push_back({"probe/" + name, false, e.what()});
    }
  }
  return out;
}

/* ------------------------------------------------------------ probe universe */

/// A named bag of finite test material.  Statements quantified over all
/// categories or profunctors are instantiated over one of these, and reports
/// carry the names.  The closures map records which members are composites or
/// units of other members; validation recomputes them.
struct ProbeUniverse {
  std::map<std::string, CatRef> cats;
  std::map<std::string, Functor> functors;
  std::map<std::string, Profunctor> pros;
  std::map<std::string, Cell> cells;
  std::map<std::string, std::vector<std::string>> closures;
};

inline std::vector<Diagnostic> validate_universe(const ProbeUniverse& u) {
  std::vector<Diagnostic> out;
  auto has_cat = [&](const CatRef& c) {
    for (const auto& [n, k] : u.cats) {
      (void)n;
      if (same_cat(c, k)) return true;
    }
    return false;
  };
  for (const auto& [name, F] : u.functors) {
    if (!has_cat(F.source) || !has_cat(F.target))
      out.push_back({"UnresolvedReference", "functor " + name + " runs outside the universe"});
  }
  for (const auto& [name, P] : u.pros) {
    if (!has_cat(P.src_cat) || !has_cat(P.tgt_cat))
      out.push_back({"UnresolvedReference", "profunctor " + name + " runs outside the universe"});
  }
  auto has_pro = [&](const Profunctor& p) {
    for (const auto& [n, q] : u.pros) {
      (void)n;
      if (detail::pro_equal(p, q)) return true;
    }
    return false;
  };
  auto has_functor = [&](const Functor& f) {
    if (is_identity_functor(f) && has_cat(f.source)) return true;
    for (const auto& [n, g] : u.functors) {
      (void)n;
      if (f == g) return true;
    }
    return false;
  };
  for (const auto& [name, c] : u.cells) {
    if (!has_pro(c.source) || !has_pro(c.target))
      out.push_back({"UnresolvedReference", "cell " + name + " runs outside the universe"});
    if (!has_functor(c.vsrc) || !has_functor(c.vtgt))
      out.push_back({"UnresolvedReference", "cell " + name + " has unnamed boundary functors"});
  }

  for (const auto& [name, parts] : u.closures) {
    auto unresolved = [&](const std::string& what) {
      out.push_back({"UnresolvedReference", "closure " + name + ": " + what});
    };
    if (auto f = u.functors.find(name); f != u.functors.end()) {
      if (parts.size() != 2) { unresolved("expected two factor names"); continue; }
      auto g = u.functors.find(parts[0]);
      auto h = u.functors.find(parts[1]);
      if (g == u.functors.end() || h == u.functors.end()) { unresolved("factor missing"); continue; }
      if (!(f->second == compose_functors(g->second, h->second)))
        out.push_back({"DishonestClosure", name + " is not the recorded composite"});
    } else if (auto p = u.pros.find(name); p != u.pros.end()) {
      if (parts.size() == 1) {
        auto c = u.cats.find(parts[0]);
        if (c == u.cats.end()) { unresolved("category missing"); continue; }
        if (!detail::pro_equal(p->second, pro_identity(c->second)))
          out.push_back({"DishonestClosure", name + " is not the recorded identity"});
      } else if (parts.size() == 2) {
        auto y = u.pros.find(parts[0]);
        auto x = u.pros.find(parts[1]);
        if (y == u.pros.end() || x == u.pros.end()) { unresolved("factor missing"); continue; }
        if (!detail::pro_equal(p->second, pro_compose(y->second, x->second).pro))
          out.push_back({"DishonestClosure", name + " is not the recorded composite"});
      } else unresolved("expected one or two names");
    } else if (auto cl = u.cells.find(name); cl != u.cells.end()) {
      if (parts.size() == 1) {
        auto f = u.functors.find(parts[0]);
        if (f == u.functors.end()) { unresolved("functor missing"); continue; }
        if (!detail::cell_equal(cl->second, pro_identity_cell(f->second)))
          out.push_back({"DishonestClosure", name + " is not the recorded identity cell"});
      } else if (parts.size() == 2) {
        auto g = u.cells.find(parts[0]);
        auto f = u.cells.find(parts[1]);
        if (g == u.cells.end() || f == u.cells.end()) { unresolved("factor missing"); continue; }
        if (!detail::cell_equal(cl->second, compose_cells(g->second, f->second)))
          out.push_back({"DishonestClosure", name + " is not the recorded composite"});
      } else unresolved("expected one or two names");
    } else {
      unresolved("no member with this name");
    }
  }
  return out;
}

}  // namespace clubkit
