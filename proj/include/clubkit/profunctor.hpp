#pragma once

/* Profunctors as finite bimodules.  A profunctor X with source category X_s
 * and target category X_t is a table of proarrows, each running from an
 * object of X_t to an object of X_s, together with a left action of X_s
 * morphisms (moving the `to` end) and a right action of X_t morphisms
 * (moving the `from` end).  Composition is the coend: pairs (k, g) modulo
 * sliding middle morphisms across, computed with a union-find. */

#include "clubkit/fincat.hpp"
#include "clubkit/probes.hpp"

namespace clubkit {

struct Proarrow {
  std::string id;
  int from = -1;  // object of tgt_cat
  int to = -1;    // object of src_cat
};

struct Profunctor {
  CatRef src_cat;
  CatRef tgt_cat;
  std::vector<Proarrow> pros;
  std::unordered_map<std::uint64_t, int> lact;  // (mor of src_cat, pro) -> pro
  std::unordered_map<std::uint64_t, int> ract;  // (pro, mor of tgt_cat) -> pro
  std::unordered_map<std::string, int> pro_idx;

  int n_pros() const { return static_cast<int>(pros.size()); }
  const Proarrow& pro(int p) const { return pros[p]; }
  std::optional<int> pro_index(const std::string& id) const {
    auto it = pro_idx.find(id);
    if (it == pro_idx.end()) return std::nullopt;
    return it->second;
  }
  std::optional<int> left_get(int h, int p) const {
    auto it = lact.find(detail::key64(h, p));
    if (it == lact.end()) return std::nullopt;
    return it->second;
  }
  std::optional<int> right_get(int p, int f) const {
    auto it = ract.find(detail::key64(p, f));
    if (it == ract.end()) return std::nullopt;
    return it->second;
  }
  int left(int h, int p) const {
    auto r = left_get(h, p);
    if (!r)
      fail(Errc::IllDefinedAction,
           "missing left action of " + src_cat->mor_id(h) + " on " + pros[p].id);
    return *r;
  }
  int right(int p, int f) const {
    auto r = right_get(p, f);
    if (!r)
      fail(Errc::IllDefinedAction,
           "missing right action of " + tgt_cat->mor_id(f) + " on " + pros[p].id);
    return *r;
  }

  friend bool operator==(const Profunctor& a, const Profunctor& b) {
    if (!same_cat(a.src_cat, b.src_cat) || !same_cat(a.tgt_cat, b.tgt_cat)) return false;
    if (a.pros.size() != b.pros.size()) return false;
    for (std::size_t i = 0; i < a.pros.size(); ++i)
      if (a.pros[i].id != b.pros[i].id || a.pros[i].from != b.pros[i].from ||
          a.pros[i].to != b.pros[i].to)
        return false;
    return a.lact == b.lact && a.ract == b.ract;
  }
};

inline Profunctor make_profunctor(CatRef src, CatRef tgt, std::vector<Proarrow> pros,
                                  const std::vector<std::array<int, 3>>& left_entries,
                                  const std::vector<std::array<int, 3>>& right_entries) {
  Profunctor P;
  P.src_cat = std::move(src);
  P.tgt_cat = std::move(tgt);
  P.pros = std::move(pros);
  for (std::size_t i = 0; i < P.pros.size(); ++i)
    if (!P.pro_idx.emplace(P.pros[i].id, static_cast<int>(i)).second)
      fail(Errc::ParseError, "duplicate proarrow id " + P.pros[i].id);
  for (auto& e : left_entries) P.lact[detail::key64(e[0], e[1])] = e[2];
  for (auto& e : right_entries) P.ract[detail::key64(e[0], e[1])] = e[2];
  return P;
}

/* -------------------------------------------------------------- validation */

inline std::vector<Diagnostic> validate_profunctor(const Profunctor& P) {
  std::vector<Diagnostic> out;
  auto add = [&](const char* c, std::string d) { out.push_back({c, std::move(d)}); };
  const FinCat& S = *P.src_cat;
  const FinCat& T = *P.tgt_cat;

  for (auto& g : P.pros) {
    if (g.from < 0 || g.from >= T.n_objects() || g.to < 0 || g.to >= S.n_objects())
      add("ProarrowEndpoints", g.id);
  }
  if (!out.empty()) return out;

  /* stray entries, then totality */
  for (auto& [k, v] : P.lact) {
    int h = static_cast<int>(k >> 32), p = static_cast<int>(k & 0xffffffff);
    if (h >= S.n_morphisms() || p >= P.n_pros() || v >= P.n_pros() ||
        S.src(h) != P.pros[p].to)
      add("ExtraAction", "left entry (" + std::to_string(h) + "," + std::to_string(p) + ")");
  }
  for (auto& [k, v] : P.ract) {
    int p = static_cast<int>(k >> 32), f = static_cast<int>(k & 0xffffffff);
    if (f >= T.n_morphisms() || p >= P.n_pros() || v >= P.n_pros() ||
        T.dst(f) != P.pros[p].from)
      add("ExtraAction", "right entry (" + std::to_string(p) + "," + std::to_string(f) + ")");
  }
  for (int p = 0; p < P.n_pros(); ++p) {
    for (int h = 0; h < S.n_morphisms(); ++h) {
      if (S.src(h) != P.pros[p].to) continue;
      auto q = P.left_get(h, p);
      if (!q) {
        add("MissingAction", "left: " + S.mor_id(h) + " on " + P.pros[p].id);
        continue;
      }
      if (P.pros[*q].from != P.pros[p].from || P.pros[*q].to != S.dst(h))
        add("ActionEndpoints", "left: " + S.mor_id(h) + " on " + P.pros[p].id);
    }
    for (int f = 0; f < T.n_morphisms(); ++f) {
      if (T.dst(f) != P.pros[p].from) continue;
      auto q = P.right_get(p, f);
      if (!q) {
        add("MissingAction", "right: " + T.mor_id(f) + " on " + P.pros[p].id);
        continue;
      }
      if (P.pros[*q].to != P.pros[p].to || P.pros[*q].from != T.src(f))
        add("ActionEndpoints", "right: " + T.mor_id(f) + " on " + P.pros[p].id);
    }
  }
  if (!out.empty()) return out;

  /* unit, associativity, bimodule compatibility */
  for (int p = 0; p < P.n_pros(); ++p) {
    if (*P.left_get(S.identity_of(P.pros[p].to), p) != p)
      add("UnitActionViolation", "left id on " + P.pros[p].id);
    if (*P.right_get(p, T.identity_of(P.pros[p].from)) != p)
      add("UnitActionViolation", "right id on " + P.pros[p].id);
  }
  for (int p = 0; p < P.n_pros(); ++p) {
    for (int h1 = 0; h1 < S.n_morphisms(); ++h1) {
      if (S.src(h1) != P.pros[p].to) continue;
      int q = *P.left_get(h1, p);
      for (int h2 = 0; h2 < S.n_morphisms(); ++h2) {
        if (S.src(h2) != S.dst(h1)) continue;
        if (*P.left_get(h2, q) != *P.left_get(S.compose(h2, h1), p))
          add("ActionAssociativity",
              "left: " + S.mor_id(h2) + "," + S.mor_id(h1) + " on " + P.pros[p].id);
      }
      for (int f = 0; f < T.n_morphisms(); ++f) {
        if (T.dst(f) != P.pros[p].from) continue;
        if (*P.right_get(q, f) != *P.left_get(h1, *P.right_get(p, f)))
          add("BimoduleViolation", S.mor_id(h1) + "|" + P.pros[p].id + "|" + T.mor_id(f));
      }
    }
    for (int f1 = 0; f1 < T.n_morphisms(); ++f1) {
      if (T.dst(f1) != P.pros[p].from) continue;
      int q = *P.right_get(p, f1);
      for (int f2 = 0; f2 < T.n_morphisms(); ++f2) {
        if (T.dst(f2) != T.src(f1)) continue;
        if (*P.right_get(q, f2) != *P.right_get(p, T.compose(f1, f2)))
          add("ActionAssociativity",
              "right: " + T.mor_id(f1) + "," + T.mor_id(f2) + " on " + P.pros[p].id);
      }
    }
  }
  return out;
}

/* -------------------------------------------------------- identity profunctor */

/// One proarrow I_f per morphism f, running src(f) -> dst(f); the actions are
/// composition on either side.
inline Profunctor pro_identity(const CatRef& X) {
  std::vector<Proarrow> pros;
  pros.reserve(X->n_morphisms());
  for (int m = 0; m < X->n_morphisms(); ++m)
    pros.push_back({"I_" + X->mor_id(m), X->src(m), X->dst(m)});
  std::vector<std::array<int, 3>> l, r;
  for (int m = 0; m < X->n_morphisms(); ++m) {
    for (int h = 0; h < X->n_morphisms(); ++h) {
      if (X->src(h) == X->dst(m)) l.push_back({h, m, X->compose(h, m)});
      if (X->dst(h) == X->src(m)) r.push_back({m, h, X->compose(m, h)});
    }
  }
  return make_profunctor(X, X, std::move(pros), l, r);
}

/* -------------------------------------------------------------------- cells */

/// Map of profunctors over a pair of vertical functors.
struct Cell {
  Profunctor source;
  Profunctor target;
  Functor vsrc;  // source.src_cat -> target.src_cat
  Functor vtgt;  // source.tgt_cat -> target.tgt_cat
  std::vector<int> on_pro;

  int operator()(int p) const { return on_pro[p]; }

  friend bool operator==(const Cell& a, const Cell& b) {
    return a.source == b.source && a.target == b.target && a.vsrc == b.vsrc &&
           a.vtgt == b.vtgt && a.on_pro == b.on_pro;
  }
};

inline std::vector<Diagnostic> validate_cell(const Cell& c) {
  std::vector<Diagnostic> out;
  auto add = [&](const char* k, std::string d) { out.push_back({k, std::move(d)}); };
  if (!same_cat(c.vsrc.source, c.source.src_cat) || !same_cat(c.vsrc.target, c.target.src_cat) ||
      !same_cat(c.vtgt.source, c.source.tgt_cat) || !same_cat(c.vtgt.target, c.target.tgt_cat)) {
    add("BoundaryMismatch", "vertical functors do not frame the cell");
    return out;
  }
  if (static_cast<int>(c.on_pro.size()) != c.source.n_pros()) {
    add("TableSize", "proarrow table does not cover the source");
    return out;
  }
  for (int p = 0; p < c.source.n_pros(); ++p) {
    const Proarrow& g = c.source.pros[p];
    const Proarrow& img = c.target.pros[c.on_pro[p]];
    if (img.from != c.vtgt.on_obj[g.from] || img.to != c.vsrc.on_obj[g.to])
      add("ProarrowEndpoints", g.id);
  }
  if (!out.empty()) return out;
  const FinCat& S = *c.source.src_cat;
  const FinCat& T = *c.source.tgt_cat;
  for (int p = 0; p < c.source.n_pros(); ++p) {
    for (int h = 0; h < S.n_morphisms(); ++h) {
      if (S.src(h) != c.source.pros[p].to) continue;
      if (c.on_pro[c.source.left(h, p)] != c.target.left(c.vsrc.on_mor[h], c.on_pro[p]))
        add("Equivariance", "left: " + S.mor_id(h) + " on " + c.source.pros[p].id);
    }
    for (int f = 0; f < T.n_morphisms(); ++f) {
      if (T.dst(f) != c.source.pros[p].from) continue;
      if (c.on_pro[c.source.right(p, f)] != c.target.right(c.on_pro[p], c.vtgt.on_mor[f]))
        add("Equivariance", "right: " + T.mor_id(f) + " on " + c.source.pros[p].id);
    }
  }
  return out;
}

inline Cell identity_cell(const Profunctor& P) {
  Cell c{P, P, identity_functor(P.src_cat), identity_functor(P.tgt_cat), {}};
  c.on_pro.resize(P.n_pros());
  for (int i = 0; i < P.n_pros(); ++i) c.on_pro[i] = i;
  return c;
}

inline bool is_identity_cell(const Cell& c) {
  if (!(c.source == c.target)) return false;
  if (!is_identity_functor(c.vsrc) || !is_identity_functor(c.vtgt)) return false;
  for (int i = 0; i < static_cast<int>(c.on_pro.size()); ++i)
    if (c.on_pro[i] != i) return false;
  return true;
}

/// Vertical composite g . f.
namespace detail {

/* Boundary guard for cell composition: categories and proarrow tables must
 * agree.  Deliberately skips the action maps, whose comparison dominates the
 * cost on window-sized profunctors; two boundaries with equal proarrows over
 * equal categories only differ in actions when something upstream is already
 * broken, and the law checks catch that separately. */
inline bool pro_boundary_match(const Profunctor& a, const Profunctor& b) {
  if (a.pros.size() != b.pros.size()) return false;
  for (std::size_t p = 0; p < a.pros.size(); ++p)
    if (a.pros[p].id != b.pros[p].id || a.pros[p].from != b.pros[p].from ||
        a.pros[p].to != b.pros[p].to)
      return false;
  return same_cat(a.src_cat, b.src_cat) && same_cat(a.tgt_cat, b.tgt_cat);
}

}  // namespace detail

inline Cell compose_cells(const Cell& g, const Cell& f) {
  if (!detail::pro_boundary_match(f.target, g.source))
    fail(Errc::MismatchedTarget, "cell composition mismatch");
  Cell r{f.source, g.target, compose_functors(g.vsrc, f.vsrc), compose_functors(g.vtgt, f.vtgt),
         {}};
  r.on_pro.resize(f.on_pro.size());
  for (std::size_t i = 0; i < f.on_pro.size(); ++i) r.on_pro[i] = g.on_pro[f.on_pro[i]];
  return r;
}

inline bool cell_bijective(const Cell& c) {
  if (!functor_bijective(c.vsrc) || !functor_bijective(c.vtgt)) return false;
  if (c.source.n_pros() != c.target.n_pros()) return false;
  std::vector<char> hit(c.target.n_pros(), 0);
  for (int x : c.on_pro) {
    if (hit[x]) return false;
    hit[x] = 1;
  }
  return true;
}

inline Cell invert_cell(const Cell& c) {
  if (!cell_bijective(c)) fail(Errc::Internal, "invert_cell on a non-bijective cell");
  Cell r{c.target, c.source, invert_functor(c.vsrc), invert_functor(c.vtgt), {}};
  r.on_pro.resize(c.on_pro.size());
  for (std::size_t i = 0; i < c.on_pro.size(); ++i) r.on_pro[c.on_pro[i]] = static_cast<int>(i);
  return r;
}

/// A functor F acts on identity profunctors proarrow-wise: I_f |-> I_{F f}.
inline Cell pro_identity_cell(const Functor& F) {
  Cell c{pro_identity(F.source), pro_identity(F.target), F, F, {}};
  c.on_pro.resize(F.source->n_morphisms());
  for (int m = 0; m < F.source->n_morphisms(); ++m) c.on_pro[m] = F.on_mor[m];
  return c;
}

/* -------------------------------------------------------- coend composition */

/// Quotient bookkeeping for a composite: raw pairs, their classes, and the
/// least representative of each class (lexicographic in identifiers).
struct CoendWitness {
  std::vector<std::pair<int, int>> raw;  // (proarrow of Y, proarrow of X)
  std::vector<int> class_of;             // raw index -> class
  std::vector<int> rep;                  // class -> raw index
  std::unordered_map<std::uint64_t, int> raw_idx;

  int raw_index(int k, int g) const {
    auto it = raw_idx.find(detail::key64(k, g));
    if (it == raw_idx.end()) fail(Errc::Internal, "unknown raw pair in coend witness");
    return it->second;
  }
  int class_of_pair(int k, int g) const { return class_of[raw_index(k, g)]; }
  int n_classes() const { return static_cast<int>(rep.size()); }
};

struct ProComposite {
  Profunctor pro;
  CoendWitness w;
};

namespace detail {

class UnionFind {
 public:
  explicit UnionFind(int n) : parent_(n) {
    for (int i = 0; i < n; ++i) parent_[i] = i;
  }
  int find(int x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  void merge(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);  // keep least index as root
  }

 private:
  std::vector<int> parent_;
};

}  // namespace detail

/* Composite of Y: B -|-> C after X: A -|-> B.  Raw pairs (k, g) with
 * to(k) = from(g) are identified by sliding B-morphisms: (k, g.f) ~ (f.k, g).
 * The induced actions must not depend on representatives; when the inputs are
 * not honest bimodules this surfaces as IllDefinedAction. */
inline ProComposite pro_compose(const Profunctor& Y, const Profunctor& X) {
  if (!same_cat(X.tgt_cat, Y.src_cat))
    fail(Errc::MiddleMismatch, "middle categories of the composite differ");
  const FinCat& B = *Y.src_cat;

  /* bucket both sides by the middle object; raw pairs are laid out per k in
   * bucket order, so (k, g) sits at base[k] + pos[g] and the sweep below is
   * pure array work */
  std::vector<std::vector<int>> x_by_from(B.n_objects());
  for (int g = 0; g < X.n_pros(); ++g) x_by_from[X.pros[g].from].push_back(g);
  std::vector<std::vector<int>> y_by_to(B.n_objects());
  for (int k = 0; k < Y.n_pros(); ++k) y_by_to[Y.pros[k].to].push_back(k);
  std::vector<int> pos(X.n_pros());
  for (const auto& bucket : x_by_from)
    for (int j = 0; j < static_cast<int>(bucket.size()); ++j) pos[bucket[j]] = j;

  CoendWitness w;
  std::vector<int> base(Y.n_pros(), 0);
  for (int k = 0; k < Y.n_pros(); ++k) {
    base[k] = static_cast<int>(w.raw.size());
    for (int g : x_by_from[Y.pros[k].to]) {
      w.raw_idx[detail::key64(k, g)] = static_cast<int>(w.raw.size());
      w.raw.push_back({k, g});
    }
  }

  /* (k, g2.f) ~ (f.k, g2) for every g2 leaving the far end of f; walking the
   * triples directly gives exactly the merges of the relation, and the right
   * action of f is shared by every k so it is extracted once per morphism */
  detail::UnionFind uf(static_cast<int>(w.raw.size()));
  std::vector<int> rpos;
  for (int f = 0; f < B.n_morphisms(); ++f) {
    if (B.is_identity(f)) continue;
    const auto& far = x_by_from[B.dst(f)];
    const auto& near = y_by_to[B.src(f)];
    if (far.empty() || near.empty()) continue;
    rpos.resize(far.size());
    for (int j = 0; j < static_cast<int>(far.size()); ++j) rpos[j] = pos[X.right(far[j], f)];
    for (int k : near) {
      int b1 = base[k];
      int b2 = base[Y.left(f, k)];
      for (int j = 0; j < static_cast<int>(far.size()); ++j) uf.merge(b1 + rpos[j], b2 + j);
    }
  }

  w.class_of.resize(w.raw.size());
  std::vector<int> root_to_class;
  std::unordered_map<int, int> cls;
  for (int r = 0; r < static_cast<int>(w.raw.size()); ++r) {
    int root = uf.find(r);
    auto it = cls.find(root);
    if (it == cls.end()) {
      it = cls.emplace(root, static_cast<int>(root_to_class.size())).first;
      root_to_class.push_back(r);
    }
    w.class_of[r] = it->second;
  }

  /* least representative per class, by identifier pair */
  w.rep.assign(root_to_class.size(), -1);
  for (int r = 0; r < static_cast<int>(w.raw.size()); ++r) {
    int c = w.class_of[r];
    if (w.rep[c] < 0) {
      w.rep[c] = r;
      continue;
    }
    auto& [ak, ag] = w.raw[r];
    auto& [bk, bg] = w.raw[w.rep[c]];
    if (std::pair(Y.pros[ak].id, X.pros[ag].id) < std::pair(Y.pros[bk].id, X.pros[bg].id))
      w.rep[c] = r;
  }

  Profunctor Z;
  Z.src_cat = X.src_cat;
  Z.tgt_cat = Y.tgt_cat;
  for (int c = 0; c < w.n_classes(); ++c) {
    auto [k, g] = w.raw[w.rep[c]];
    Z.pros.push_back({"[" + Y.pros[k].id + "|" + X.pros[g].id + "]", Y.pros[k].from,
                      X.pros[g].to});
    Z.pro_idx.emplace(Z.pros.back().id, c);
  }

  /* induced actions, with a well-definedness sweep over every representative.
   * The action tables of the factors are unpacked into per-proarrow lists up
   * front; the sweep then only touches arrays, with one scratch slot per
   * boundary morphism stamped by class */
  const FinCat& A = *X.src_cat;
  const FinCat& C = *Y.tgt_cat;
  std::vector<std::vector<std::pair<int, int>>> xl_of_g(X.n_pros()), yr_of_k(Y.n_pros());
  for (const auto& [key, res] : X.lact)
    xl_of_g[static_cast<std::uint32_t>(key)].push_back({static_cast<int>(key >> 32), res});
  for (const auto& [key, res] : Y.ract)
    yr_of_k[static_cast<int>(key >> 32)].push_back({static_cast<std::uint32_t>(key), res});

  std::vector<std::vector<int>> members(w.n_classes());
  for (int r = 0; r < static_cast<int>(w.raw.size()); ++r) members[w.class_of[r]].push_back(r);
  std::vector<int> lres(A.n_morphisms(), -1), lstamp(A.n_morphisms(), -1);
  std::vector<int> rres(C.n_morphisms(), -1), rstamp(C.n_morphisms(), -1);
  std::vector<int> touched_l, touched_r;
  for (int c = 0; c < w.n_classes(); ++c) {
    touched_l.clear();
    touched_r.clear();
    for (int r : members[c]) {
      auto [k, g] = w.raw[r];
      for (auto [h, res] : xl_of_g[g]) {
        int image = w.class_of[base[k] + pos[res]];
        if (lstamp[h] != c) {
          lstamp[h] = c;
          lres[h] = image;
          touched_l.push_back(h);
        } else if (lres[h] != image)
          fail(Errc::IllDefinedAction,
               "left action of " + A.mor_id(h) + " depends on the representative of " +
                   Z.pros[c].id);
      }
      for (auto [f, res] : yr_of_k[k]) {
        int image = w.class_of[base[res] + pos[g]];
        if (rstamp[f] != c) {
          rstamp[f] = c;
          rres[f] = image;
          touched_r.push_back(f);
        } else if (rres[f] != image)
          fail(Errc::IllDefinedAction,
               "right action of " + C.mor_id(f) + " depends on the representative of " +
                   Z.pros[c].id);
      }
    }
    for (int h : touched_l) Z.lact[detail::key64(h, c)] = lres[h];
    for (int f : touched_r) Z.ract[detail::key64(c, f)] = rres[f];
  }
  return {std::move(Z), std::move(w)};
}

/* Tensor of cells over matching middle boundaries: [k (x) g] maps to
 * [cY k (x) cX g], checked to be independent of the representative. */
inline Cell tensor_cells(const Cell& cY, const Cell& cX, const ProComposite& src,
                         const ProComposite& tgt) {
  if (!(cX.vtgt == cY.vsrc))
    fail(Errc::MismatchedTarget, "tensor_cells: middle boundaries differ");
  Cell r{src.pro, tgt.pro, cX.vsrc, cY.vtgt, {}};
  r.on_pro.assign(src.w.n_classes(), -1);
  for (int raw = 0; raw < static_cast<int>(src.w.raw.size()); ++raw) {
    auto [k, g] = src.w.raw[raw];
    int image = tgt.w.class_of_pair(cY.on_pro[k], cX.on_pro[g]);
    int c = src.w.class_of[raw];
    if (r.on_pro[c] < 0) r.on_pro[c] = image;
    else if (r.on_pro[c] != image)
      fail(Errc::IllDefined, "tensor of cells not constant on " + src.pro.pros[c].id);
  }
  return r;
}

/* ----------------------------------------------------- unitors, associator */

struct UnitorPair {
  ProComposite tensor;
  Cell cell;  // from the bare profunctor into the tensor
};

/// lambda: X -> I_{X_t} (x) X, g |-> [I_id (x) g].  Invertible.
inline UnitorPair unitor_left(const Profunctor& X) {
  Profunctor I = pro_identity(X.tgt_cat);
  ProComposite t = pro_compose(I, X);
  Cell c{X, t.pro, identity_functor(X.src_cat), identity_functor(X.tgt_cat), {}};
  c.on_pro.resize(X.n_pros());
  for (int g = 0; g < X.n_pros(); ++g) {
    int idm = X.tgt_cat->identity_of(X.pros[g].from);
    c.on_pro[g] = t.w.class_of_pair(idm, g);  // I_id is indexed by the morphism
  }
  if (!cell_bijective(c)) fail(Errc::Internal, "left unitor failed to be bijective");
  return {std::move(t), std::move(c)};
}

/// rho: X -> X (x) I_{X_s}, g |-> [g (x) I_id].  Invertible.
inline UnitorPair unitor_right(const Profunctor& X) {
  Profunctor I = pro_identity(X.src_cat);
  ProComposite t = pro_compose(X, I);
  Cell c{X, t.pro, identity_functor(X.src_cat), identity_functor(X.tgt_cat), {}};
  c.on_pro.resize(X.n_pros());
  for (int g = 0; g < X.n_pros(); ++g) {
    int idm = X.src_cat->identity_of(X.pros[g].to);
    c.on_pro[g] = t.w.class_of_pair(g, idm);
  }
  if (!cell_bijective(c)) fail(Errc::Internal, "right unitor failed to be bijective");
  return {std::move(t), std::move(c)};
}

struct AssociatorResult {
  ProComposite yx, z_yx;   // Y(x)X and Z(x)(Y(x)X)
  ProComposite zy, zy_x;   // Z(x)Y and (Z(x)Y)(x)X
  Cell cell;               // Z(x)(Y(x)X) -> (Z(x)Y)(x)X
};

inline AssociatorResult associator(const Profunctor& Z, const Profunctor& Y,
                                   const Profunctor& X) {
  AssociatorResult r{pro_compose(Y, X), {}, pro_compose(Z, Y), {}, {}};
  r.z_yx = pro_compose(Z, r.yx.pro);
  r.zy_x = pro_compose(r.zy.pro, X);

  Cell c{r.z_yx.pro, r.zy_x.pro, identity_functor(X.src_cat), identity_functor(Z.tgt_cat), {}};
  c.on_pro.assign(r.z_yx.w.n_classes(), -1);
  for (int raw = 0; raw < static_cast<int>(r.z_yx.w.raw.size()); ++raw) {
    auto [z, yx_class] = r.z_yx.w.raw[raw];
    auto [y, x] = r.yx.w.raw[r.yx.w.rep[yx_class]];
    int image = r.zy_x.w.class_of_pair(r.zy.w.class_of_pair(z, y), x);
    int cls = r.z_yx.w.class_of[raw];
    if (c.on_pro[cls] < 0) c.on_pro[cls] = image;
    else if (c.on_pro[cls] != image)
      fail(Errc::IllDefined, "associator not constant on " + r.z_yx.pro.pros[cls].id);
  }
  if (!cell_bijective(c)) fail(Errc::Internal, "associator failed to be bijective");
  r.cell = std::move(c);
  return r;
}

/* ----------------------------------------------------------------- collage */

/* The collage is a category over the walking arrow: fiber over 0 carries the
 * target category, fiber over 1 the source category, and the proarrows become
 * the heteromorphisms.  Identities keep the id_<obj> convention so collages
 * serialize like any other category. */
struct Collage {
  CatRef cat;
  Functor to_two;
  std::vector<int> o0, o1;  // object embeddings (tgt-side, src-side)
  std::vector<int> m0, m1;  // morphism embeddings
  std::vector<int> hp;      // proarrow -> heteromorphism
};

inline Collage collage(const Profunctor& P) {
  const FinCat& S = *P.src_cat;
  const FinCat& T = *P.tgt_cat;
  std::vector<std::string> objs;
  std::vector<MorRec> mors;
  std::vector<int> ident;
  Collage col;

  col.o0.resize(T.n_objects());
  col.o1.resize(S.n_objects());
  for (int o = 0; o < T.n_objects(); ++o) {
    col.o0[o] = static_cast<int>(objs.size());
    objs.push_back("0:" + T.object_id(o));
  }
  for (int o = 0; o < S.n_objects(); ++o) {
    col.o1[o] = static_cast<int>(objs.size());
    objs.push_back("1:" + S.object_id(o));
  }
  ident.assign(objs.size(), -1);

  col.m0.resize(T.n_morphisms());
  col.m1.resize(S.n_morphisms());
  col.hp.resize(P.n_pros());
  auto add_mor = [&](std::string id, int s, int d) {
    mors.push_back({std::move(id), s, d});
    return static_cast<int>(mors.size()) - 1;
  };
  for (int m = 0; m < T.n_morphisms(); ++m) {
    bool is_id = T.identity_of(T.src(m)) == m;
    col.m0[m] = add_mor(is_id ? identity_id_for(objs[col.o0[T.src(m)]]) : "0:" + T.mor_id(m),
                        col.o0[T.src(m)], col.o0[T.dst(m)]);
    if (is_id) ident[col.o0[T.src(m)]] = col.m0[m];
  }
  for (int m = 0; m < S.n_morphisms(); ++m) {
    bool is_id = S.identity_of(S.src(m)) == m;
    col.m1[m] = add_mor(is_id ? identity_id_for(objs[col.o1[S.src(m)]]) : "1:" + S.mor_id(m),
                        col.o1[S.src(m)], col.o1[S.dst(m)]);
    if (is_id) ident[col.o1[S.src(m)]] = col.m1[m];
  }
  for (int p = 0; p < P.n_pros(); ++p)
    col.hp[p] = add_mor("p:" + P.pros[p].id, col.o0[P.pros[p].from], col.o1[P.pros[p].to]);

  std::vector<std::array<int, 3>> comp;
  for (auto& e : T.compose_entries())
    if (T.dst(e[1]) == T.src(e[0])) comp.push_back({col.m0[e[0]], col.m0[e[1]], col.m0[e[2]]});
  for (auto& e : S.compose_entries())
    if (S.dst(e[1]) == S.src(e[0])) comp.push_back({col.m1[e[0]], col.m1[e[1]], col.m1[e[2]]});
  for (int p = 0; p < P.n_pros(); ++p) {
    for (int f = 0; f < T.n_morphisms(); ++f)
      if (T.dst(f) == P.pros[p].from)
        comp.push_back({col.hp[p], col.m0[f], col.hp[P.right(p, f)]});
    for (int h = 0; h < S.n_morphisms(); ++h)
      if (S.src(h) == P.pros[p].to)
        comp.push_back({col.m1[h], col.hp[p], col.hp[P.left(h, p)]});
  }

  col.cat = std::make_shared<const FinCat>(
      FinCat::from_parts(std::move(objs), std::move(mors), std::move(ident), std::move(comp)));

  CatRef two = walking_arrow();
  Functor F{col.cat, two, {}, {}};
  F.on_obj.resize(col.cat->n_objects());
  F.on_mor.resize(col.cat->n_morphisms());
  for (int o = 0; o < T.n_objects(); ++o) F.on_obj[col.o0[o]] = 0;
  for (int o = 0; o < S.n_objects(); ++o) F.on_obj[col.o1[o]] = 1;
  for (int m = 0; m < T.n_morphisms(); ++m) F.on_mor[col.m0[m]] = two->identity_of(0);
  for (int m = 0; m < S.n_morphisms(); ++m) F.on_mor[col.m1[m]] = two->identity_of(1);
  for (int p = 0; p < P.n_pros(); ++p) F.on_mor[col.hp[p]] = *two->morphism_index("u");
  col.to_two = std::move(F);
  return col;
}

namespace detail {
inline std::string strip_prefix(const std::string& s, const char* pre) {
  return s.rfind(pre, 0) == 0 ? s.substr(2) : s;
}
}  // namespace detail

/* Inverse of collage: split a category over the walking arrow back into a
 * profunctor.  Prefixes introduced by collage() are stripped so the round
 * trip is identifier-exact. */
inline Profunctor decollage(const CatRef& C, const Functor& to_two) {
  if (!(*to_two.target == *walking_arrow()))
    fail(Errc::NotACollage, "projection does not land in the walking arrow");
  if (!same_cat(to_two.source, C) || !validate_functor(to_two).empty())
    fail(Errc::NotACollage, "projection is not a functor on the given category");
  const FinCat& K = *C;
  int u = *walking_arrow()->morphism_index("u");

  std::vector<int> which_obj(K.n_objects());  // 0 or 1
  for (int o = 0; o < K.n_objects(); ++o) which_obj[o] = to_two.on_obj[o];

  auto build_fiber = [&](int fiber, std::vector<int>& omap, std::vector<int>& mmap) {
    std::vector<std::string> objs;
    std::vector<MorRec> mors;
    std::vector<int> ident;
    omap.assign(K.n_objects(), -1);
    mmap.assign(K.n_morphisms(), -1);
    for (int o = 0; o < K.n_objects(); ++o) {
      if (which_obj[o] != fiber) continue;
      omap[o] = static_cast<int>(objs.size());
      objs.push_back(detail::strip_prefix(K.object_id(o), fiber == 0 ? "0:" : "1:"));
    }
    ident.assign(objs.size(), -1);
    for (int m = 0; m < K.n_morphisms(); ++m) {
      int im = to_two.on_mor[m];
      if (im == u || which_obj[K.src(m)] != fiber) continue;
      bool is_id = K.identity_of(K.src(m)) == m;
      mmap[m] = static_cast<int>(mors.size());
      mors.push_back({is_id ? identity_id_for(objs[omap[K.src(m)]])
                            : detail::strip_prefix(K.mor_id(m), fiber == 0 ? "0:" : "1:"),
                      omap[K.src(m)], omap[K.dst(m)]});
      if (is_id) ident[omap[K.src(m)]] = mmap[m];
    }
    for (int o = 0; o < static_cast<int>(ident.size()); ++o)
      if (ident[o] < 0) fail(Errc::NotACollage, "fiber object without identity");
    std::vector<std::array<int, 3>> comp;
    for (auto& e : K.compose_entries())
      if (mmap[e[0]] >= 0 && mmap[e[1]] >= 0 && K.dst(e[1]) == K.src(e[0]))
        comp.push_back({mmap[e[0]], mmap[e[1]], mmap[e[2]]});
    return std::make_shared<const FinCat>(
        FinCat::from_parts(std::move(objs), std::move(mors), std::move(ident), std::move(comp)));
  };

  std::vector<int> omap0, mmap0, omap1, mmap1;
  CatRef tgt = build_fiber(0, omap0, mmap0);
  CatRef src = build_fiber(1, omap1, mmap1);

  std::vector<Proarrow> pros;
  std::vector<int> pmap(K.n_morphisms(), -1);
  for (int m = 0; m < K.n_morphisms(); ++m) {
    if (to_two.on_mor[m] != u) continue;
    pmap[m] = static_cast<int>(pros.size());
    std::string id = K.mor_id(m);
    if (id.rfind("p:", 0) == 0) id = id.substr(2);
    pros.push_back({std::move(id), omap0[K.src(m)], omap1[K.dst(m)]});
  }
  std::vector<std::array<int, 3>> l, r;
  for (auto& e : K.compose_entries()) {
    if (K.dst(e[1]) != K.src(e[0])) continue;
    if (pmap[e[1]] >= 0 && mmap1[e[0]] >= 0) l.push_back({mmap1[e[0]], pmap[e[1]], pmap[e[2]]});
    if (pmap[e[0]] >= 0 && mmap0[e[1]] >= 0) r.push_back({pmap[e[0]], mmap0[e[1]], pmap[e[2]]});
  }
  return make_profunctor(src, tgt, std::move(pros), l, r);
}

/// Functor between collages induced by a cell.
inline Functor collage_functor(const Cell& c, const Collage& src, const Collage& tgt) {
  Functor F{src.cat, tgt.cat, {}, {}};
  F.on_obj.resize(src.cat->n_objects());
  F.on_mor.resize(src.cat->n_morphisms());
  const Profunctor& S = c.source;
  for (int o = 0; o < S.tgt_cat->n_objects(); ++o) F.on_obj[src.o0[o]] = tgt.o0[c.vtgt.on_obj[o]];
  for (int o = 0; o < S.src_cat->n_objects(); ++o) F.on_obj[src.o1[o]] = tgt.o1[c.vsrc.on_obj[o]];
  for (int m = 0; m < S.tgt_cat->n_morphisms(); ++m)
    F.on_mor[src.m0[m]] = tgt.m0[c.vtgt.on_mor[m]];
  for (int m = 0; m < S.src_cat->n_morphisms(); ++m)
    F.on_mor[src.m1[m]] = tgt.m1[c.vsrc.on_mor[m]];
  for (int p = 0; p < S.n_pros(); ++p) F.on_mor[src.hp[p]] = tgt.hp[c.on_pro[p]];
  return F;
}

/* --------------------------------------------------- pullbacks of profunctors */

/// Square of cells; right . top == bottom . left required.
struct CellSquare {
  Cell top;
  Cell left;
  Cell right;
  Cell bottom;
};

namespace detail {

/* One kind of collage data compared against its pullback fiber by counting:
 * d -> (l d, t d) lands in matching pairs whenever the square commutes, so it
 * is a bijection iff it is injective and |D| equals the number of pairs
 * (b, c) with fmap b = gmap c.  Returns the first gap found, nothing when the
 * kind checks out.  Never materializes the pairs unless one is missing. */
template <class DName, class BName, class CName>
inline std::optional<std::string> pair_comparison_gap(
    const std::vector<int>& lmap, const std::vector<int>& tmap, const std::vector<int>& fmap,
    const std::vector<int>& gmap, int n_a, const char* kind, DName dname, BName bname,
    CName cname) {
  std::unordered_map<std::uint64_t, int> hit;
  hit.reserve(lmap.size());
  for (int d = 0; d < static_cast<int>(lmap.size()); ++d) {
    auto [it, fresh] = hit.emplace(key64(lmap[d], tmap[d]), d);
    if (!fresh)
      return std::string(kind) + "s " + dname(it->second) + " and " + dname(d) +
             " collide in the pullback";
  }
  std::vector<int> ng(n_a, 0);
  for (int c : gmap) ++ng[c];
  long long total = 0;
  for (int b = 0; b < static_cast<int>(fmap.size()); ++b) total += ng[fmap[b]];
  if (total == static_cast<long long>(lmap.size())) return std::nullopt;
  std::vector<std::vector<int>> by_img(n_a);
  for (int c = 0; c < static_cast<int>(gmap.size()); ++c) by_img[gmap[c]].push_back(c);
  for (int b = 0; b < static_cast<int>(fmap.size()); ++b)
    for (int c : by_img[fmap[b]])
      if (!hit.count(key64(b, c)))
        return "pullback " + std::string(kind) + " " + pair_obj_id(bname(b), cname(c)) +
               " is not hit";
  return "pullback " + std::string(kind) + " count mismatch";
}

}  // namespace detail

/* Pullback verdict, kindwise.  The collage encoding sends the square to a
 * square of categories over the walking arrow, and the collage functors keep
 * the five kinds of data apart (objects and morphisms of either side, and the
 * proarrows), so the comparison into the collage pullback is bijective iff it
 * is bijective kind by kind.  Checking each kind by counting keeps the cost
 * linear in the boundary cells where the materialized collage pullback grows
 * with the product of the fibers. */
inline ComparisonReport is_pullback_pro(const CellSquare& s) {
  Cell a = compose_cells(s.right, s.top);
  Cell b = compose_cells(s.bottom, s.left);
  if (!(a == b)) fail(Errc::NotCommuting, "right.top != bottom.left");

  const Profunctor& D = s.top.source;
  const Profunctor& B = s.left.target;
  const Profunctor& C = s.top.target;
  const Profunctor& A = s.right.target;
  auto obj = [](const CatRef& c) { return [&cat = *c](int o) { return cat.object_id(o); }; };
  auto mor = [](const CatRef& c) { return [&cat = *c](int m) { return cat.mor_id(m); }; };

  ComparisonReport rep;
  std::optional<std::string> gap;
  if (!gap)
    gap = detail::pair_comparison_gap(s.left.vtgt.on_obj, s.top.vtgt.on_obj,
                                      s.bottom.vtgt.on_obj, s.right.vtgt.on_obj,
                                      A.tgt_cat->n_objects(), "object", obj(D.tgt_cat),
                                      obj(B.tgt_cat), obj(C.tgt_cat));
  if (!gap)
    gap = detail::pair_comparison_gap(s.left.vsrc.on_obj, s.top.vsrc.on_obj,
                                      s.bottom.vsrc.on_obj, s.right.vsrc.on_obj,
                                      A.src_cat->n_objects(), "object", obj(D.src_cat),
                                      obj(B.src_cat), obj(C.src_cat));
  if (!gap)
    gap = detail::pair_comparison_gap(s.left.vtgt.on_mor, s.top.vtgt.on_mor,
                                      s.bottom.vtgt.on_mor, s.right.vtgt.on_mor,
                                      A.tgt_cat->n_morphisms(), "morphism", mor(D.tgt_cat),
                                      mor(B.tgt_cat), mor(C.tgt_cat));
  if (!gap)
    gap = detail::pair_comparison_gap(s.left.vsrc.on_mor, s.top.vsrc.on_mor,
                                      s.bottom.vsrc.on_mor, s.right.vsrc.on_mor,
                                      A.src_cat->n_morphisms(), "morphism", mor(D.src_cat),
                                      mor(B.src_cat), mor(C.src_cat));
  if (!gap)
    gap = detail::pair_comparison_gap(
        s.left.on_pro, s.top.on_pro, s.bottom.on_pro, s.right.on_pro, A.n_pros(), "proarrow",
        [&](int p) { return D.pros[p].id; }, [&](int p) { return B.pros[p].id; },
        [&](int p) { return C.pros[p].id; });

  rep.verdict = !gap;
  rep.counterexample = std::move(gap);
  return rep;
}

struct ProPullback {
  Profunctor pro;
  Cell p1;  // to the source of f
  Cell p2;  // to the source of g
};

/* Canonical pullback of cells f: B => A and g: C => A.  Computed fiberwise:
 * the source/target categories are canonical pullbacks and the proarrows are
 * matching pairs, which is exactly the collage pullback carried back across
 * decollage.  Pullback along an identity cell is normalized away. */
inline ProPullback pullback_pro(const Cell& f, const Cell& g) {
  if (!(f.target == g.target)) fail(Errc::MismatchedTarget, "cospan targets differ");
  if (is_identity_cell(g)) return {f.source, identity_cell(f.source), f};
  if (is_identity_cell(f)) return {g.source, g, identity_cell(g.source)};

  const Profunctor& B = f.source;
  const Profunctor& C = g.source;
  Pullback ps = canonical_pullback(f.vsrc, g.vsrc);
  Pullback pt = canonical_pullback(f.vtgt, g.vtgt);

  std::unordered_map<std::uint64_t, int> so, to;
  for (int o = 0; o < ps.cat->n_objects(); ++o)
    so[detail::key64(ps.p1.on_obj[o], ps.p2.on_obj[o])] = o;
  for (int o = 0; o < pt.cat->n_objects(); ++o)
    to[detail::key64(pt.p1.on_obj[o], pt.p2.on_obj[o])] = o;

  Profunctor P;
  P.src_cat = ps.cat;
  P.tgt_cat = pt.cat;
  std::vector<int> pb, pc;
  std::unordered_map<std::uint64_t, int> ppair;
  for (int b = 0; b < B.n_pros(); ++b)
    for (int c = 0; c < C.n_pros(); ++c) {
      if (f.on_pro[b] != g.on_pro[c]) continue;
      ppair[detail::key64(b, c)] = P.n_pros();
      P.pros.push_back({pair_obj_id(B.pros[b].id, C.pros[c].id),
                        to.at(detail::key64(B.pros[b].from, C.pros[c].from)),
                        so.at(detail::key64(B.pros[b].to, C.pros[c].to))});
      P.pro_idx.emplace(P.pros.back().id, P.n_pros() - 1);
      pb.push_back(b);
      pc.push_back(c);
    }
  for (int p = 0; p < P.n_pros(); ++p) {
    for (int h = 0; h < ps.cat->n_morphisms(); ++h) {
      if (ps.cat->src(h) != P.pros[p].to) continue;
      P.lact[detail::key64(h, p)] = ppair.at(detail::key64(
          B.left(ps.p1.on_mor[h], pb[p]), C.left(ps.p2.on_mor[h], pc[p])));
    }
    for (int m = 0; m < pt.cat->n_morphisms(); ++m) {
      if (pt.cat->dst(m) != P.pros[p].from) continue;
      P.ract[detail::key64(p, m)] = ppair.at(detail::key64(
          B.right(pb[p], pt.p1.on_mor[m]), C.right(pc[p], pt.p2.on_mor[m])));
    }
  }

  Cell c1{P, B, ps.p1, pt.p1, pb};
  Cell c2{P, C, ps.p2, pt.p2, pc};
  return {std::move(P), std::move(c1), std::move(c2)};
}

/// Profunctor by identifier tables; identity actions are filled automatically,
/// so callers only list the non-identity ones.  Entries: proarrows as
/// (id, from, to), left actions as (morphism, proarrow, result), right actions
/// as (proarrow, morphism, result).
inline Profunctor make_profunctor_ids(const CatRef& src, const CatRef& tgt,
                                      const std::vector<std::array<std::string, 3>>& pros,
                                      const std::vector<std::array<std::string, 3>>& left,
                                      const std::vector<std::array<std::string, 3>>& right) {
  std::vector<Proarrow> ps;
  std::unordered_map<std::string, int> idx;
  for (auto& p : pros) {
    auto f = tgt->object_index(p[1]);
    auto t = src->object_index(p[2]);
    if (!f || !t) fail(Errc::UnresolvedReference, "proarrow " + p[0] + ": " + p[1] + " -> " + p[2]);
    idx.emplace(p[0], static_cast<int>(ps.size()));
    ps.push_back({p[0], *f, *t});
  }
  auto pid = [&](const std::string& s) {
    auto it = idx.find(s);
    if (it == idx.end()) fail(Errc::UnresolvedReference, "proarrow " + s);
    return it->second;
  };
  std::vector<std::array<int, 3>> l, r;
  for (int p = 0; p < static_cast<int>(ps.size()); ++p) {
    l.push_back({src->identity_of(ps[p].to), p, p});
    r.push_back({p, tgt->identity_of(ps[p].from), p});
  }
  for (auto& e : left) {
    auto m = src->morphism_index(e[0]);
    if (!m) fail(Errc::UnresolvedReference, "morphism " + e[0]);
    l.push_back({*m, pid(e[1]), pid(e[2])});
  }
  for (auto& e : right) {
    auto m = tgt->morphism_index(e[1]);
    if (!m) fail(Errc::UnresolvedReference, "morphism " + e[1]);
    r.push_back({pid(e[0]), *m, pid(e[2])});
  }
  return make_profunctor(src, tgt, std::move(ps), l, r);
}

}  // namespace clubkit
