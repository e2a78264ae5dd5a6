#pragma once

/* Independent brute-force oracles.  These deliberately avoid the library's
 * comparison machinery: pullbacks are probed through their universal property
 * and functor enumeration, so a bug in canonical_pullback cannot also hide in
 * the oracle. */

#include <functional>
#include <map>
#include <vector>

#include "clubkit/fincat.hpp"
#include "clubkit/profunctor.hpp"

namespace oracle {

using namespace clubkit;

/* Enumerate every functor Q -> T by trying all object maps and all morphism
 * maps with matching endpoints, keeping the ones that preserve identities and
 * composites.  Exponential; for probe-sized categories only. */
inline std::vector<Functor> enumerate_functors(const CatRef& Q, const CatRef& T) {
  std::vector<Functor> out;
  const FinCat& q = *Q;
  const FinCat& t = *T;
  std::vector<int> omap(q.n_objects(), 0);

  std::function<void(int)> objs = [&](int o) {
    if (o == q.n_objects()) {
      /* candidate lists per morphism under this object map */
      std::vector<std::vector<int>> cand(q.n_morphisms());
      for (int m = 0; m < q.n_morphisms(); ++m) {
        if (q.is_identity(m) && q.identity_of(q.src(m)) == m) {
          cand[m] = {t.identity_of(omap[q.src(m)])};
          continue;
        }
        for (int w = 0; w < t.n_morphisms(); ++w)
          if (t.src(w) == omap[q.src(m)] && t.dst(w) == omap[q.dst(m)]) cand[m].push_back(w);
        if (cand[m].empty()) return;
      }
      std::vector<int> mmap(q.n_morphisms(), -1);
      std::function<void(int)> mors = [&](int m) {
        if (m == q.n_morphisms()) {
          for (auto& e : q.compose_entries()) {
            if (q.dst(e[1]) != q.src(e[0])) continue;
            auto h = t.compose_get(mmap[e[0]], mmap[e[1]]);
            if (!h || *h != mmap[e[2]]) return;
          }
          out.push_back(Functor{Q, T, omap, mmap});
          return;
        }
        for (int w : cand[m]) {
          mmap[m] = w;
          mors(m + 1);
        }
      };
      mors(0);
      return;
    }
    for (int x = 0; x < t.n_objects(); ++x) {
      omap[o] = x;
      objs(o + 1);
    }
  };
  objs(0);
  return out;
}

/* Universal-property probe with representable cones: a commuting square is a
 * pullback of finite categories iff every compatible pair of objects has
 * exactly one preimage in the apex and likewise for morphisms (cones from the
 * terminal category and from the walking arrow). */
inline bool pullback_by_elements(const CommutingSquare& s) {
  const FinCat& D = *s.top.source;
  const FinCat& B = *s.left.target;
  const FinCat& C = *s.top.target;

  for (int b = 0; b < B.n_objects(); ++b)
    for (int c = 0; c < C.n_objects(); ++c) {
      if (s.bottom.on_obj[b] != s.right.on_obj[c]) continue;
      int count = 0;
      for (int d = 0; d < D.n_objects(); ++d)
        if (s.left.on_obj[d] == b && s.top.on_obj[d] == c) ++count;
      if (count != 1) return false;
    }
  for (int b = 0; b < B.n_morphisms(); ++b)
    for (int c = 0; c < C.n_morphisms(); ++c) {
      if (s.bottom.on_mor[b] != s.right.on_mor[c]) continue;
      int count = 0;
      for (int d = 0; d < D.n_morphisms(); ++d)
        if (s.left.on_mor[d] == b && s.top.on_mor[d] == c) ++count;
      if (count != 1) return false;
    }
  return true;
}

/* Full universal property against an explicit family of cone shapes: every
 * cone (q1, q2) over the cospan from a shape Q factors through the apex via
 * exactly one functor.  Exhaustive over enumerate_functors, so keep Q tiny. */
inline bool pullback_by_cones(const CommutingSquare& s, const std::vector<CatRef>& shapes) {
  if (!pullback_by_elements(s)) return false;  // necessary; keeps the search honest
  for (const CatRef& Q : shapes) {
    auto into_b = enumerate_functors(Q, s.left.target);
    auto into_c = enumerate_functors(Q, s.top.target);
    auto into_d = enumerate_functors(Q, s.top.source);
    for (auto& q1 : into_b)
      for (auto& q2 : into_c) {
        if (!(compose_functors(s.bottom, q1) == compose_functors(s.right, q2))) continue;
        int count = 0;
        for (auto& h : into_d)
          if (compose_functors(s.left, h) == q1 && compose_functors(s.top, h) == q2) ++count;
        if (count != 1) return false;
      }
  }
  return true;
}

/* Coend quotient by breadth-first closure.  Enumerates raw pairs in the same
 * (k, g) order as pro_compose but derives the sliding relation by a forward
 * scan over (k, f, g) triples and closes it with a plain BFS, so it shares no
 * code path with the union-find.  Returns, per raw pair, the least raw index
 * in its class. */
inline std::vector<int> coend_partition(const Profunctor& Y, const Profunctor& X) {
  const FinCat& B = *Y.src_cat;
  std::vector<std::pair<int, int>> raw;
  std::map<std::pair<int, int>, int> idx;
  for (int k = 0; k < Y.n_pros(); ++k)
    for (int g = 0; g < X.n_pros(); ++g)
      if (Y.pros[k].to == X.pros[g].from) {
        idx[{k, g}] = static_cast<int>(raw.size());
        raw.push_back({k, g});
      }
  std::vector<std::vector<int>> adj(raw.size());
  for (int k = 0; k < Y.n_pros(); ++k)
    for (int f = 0; f < B.n_morphisms(); ++f) {
      if (B.src(f) != Y.pros[k].to) continue;
      for (int g = 0; g < X.n_pros(); ++g) {
        if (X.pros[g].from != B.dst(f)) continue;
        int a = idx.at({k, X.right(g, f)});
        int b = idx.at({Y.left(f, k), g});
        adj[a].push_back(b);
        adj[b].push_back(a);
      }
    }
  std::vector<int> label(raw.size(), -1);
  for (int s = 0; s < static_cast<int>(raw.size()); ++s) {
    if (label[s] >= 0) continue;
    std::vector<int> queue{s};
    label[s] = s;
    while (!queue.empty()) {
      int v = queue.back();
      queue.pop_back();
      for (int w : adj[v])
        if (label[w] < 0) {
          label[w] = s;
          queue.push_back(w);
        }
    }
  }
  return label;
}

}  // namespace oracle
