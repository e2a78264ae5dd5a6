#pragma once

/* Finite categories as explicit identifier tables: objects, morphisms with
 * endpoints, identities, and a composition table defined exactly on the
 * composable pairs.  Everything downstream (profunctors, list materializations,
 * collections) is built out of these tables, so the invariants here are the
 * load-bearing ones: deterministic ordering, structural equality, and
 * diagnostics as values rather than asserts. */

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace clubkit {

/* ------------------------------------------------------------------ errors */

enum class Errc {
  MismatchedTarget,
  NotCommuting,
  NoLift,
  MiddleMismatch,
  IllDefinedAction,
  NotACollage,
  ArityOverflow,
  MissingTerminalProbe,
  NotInduced,
  HypothesisFailed,
  IllDefined,
  ParseError,
  UnresolvedReference,
  Internal,
};

inline const char* errc_name(Errc c) {
  switch (c) {
    case Errc::MismatchedTarget: return "MismatchedTarget";
    case Errc::NotCommuting: return "NotCommuting";
    case Errc::NoLift: return "NoLift";
    case Errc::MiddleMismatch: return "MiddleMismatch";
    case Errc::IllDefinedAction: return "IllDefinedAction";
    case Errc::NotACollage: return "NotACollage";
    case Errc::ArityOverflow: return "ArityOverflow";
    case Errc::MissingTerminalProbe: return "MissingTerminalProbe";
    case Errc::NotInduced: return "NotInduced";
    case Errc::HypothesisFailed: return "HypothesisFailed";
    case Errc::IllDefined: return "IllDefined";
    case Errc::ParseError: return "ParseError";
    case Errc::UnresolvedReference: return "UnresolvedReference";
    case Errc::Internal: return "Internal";
  }
  return "?";
}

class Error : public std::runtime_error {
 public:
  Error(Errc c, const std::string& what)
      : std::runtime_error(std::string(errc_name(c)) + ": " + what), code(c) {}
  Errc code;
};

[[noreturn]] inline void fail(Errc c, const std::string& what) { throw Error(c, what); }

namespace detail {

inline std::uint64_t key64(int hi, int lo) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(hi)) << 32) |
         static_cast<std::uint32_t>(lo);
}

struct IntVecHash {
  std::size_t operator()(const std::vector<int>& v) const {
    std::uint64_t h = 1469598103934665603ull;
    for (int x : v) {
      h ^= static_cast<std::uint64_t>(x) + 0x9e3779b97f4a7c15ull;
      h *= 1099511628211ull;
    }
    return static_cast<std::size_t>(h);
  }
};

template <class It, class Fn>
std::string join(It begin, It end, const char* sep, Fn fn) {
  std::string out;
  for (It it = begin; it != end; ++it) {
    if (it != begin) out += sep;
    out += fn(*it);
  }
  return out;
}

}  // namespace detail

/* ------------------------------------------------------------------ FinCat */

struct MorRec {
  std::string id;
  int src = -1;
  int dst = -1;
};

/// One validation finding.  `code` is a stable machine-readable tag, `detail`
/// names the offending identifiers.
struct Diagnostic {
  std::string code;
  std::string detail;
};

class FinCat;
using CatRef = std::shared_ptr<const FinCat>;

class FinCat {
 public:
  FinCat() = default;

  /* Raw table constructor.  Identifier resolution must succeed; everything
   * else (totality, unit laws, associativity) is validate_category's job, so
   * deliberately broken tables are representable. */
  static FinCat from_parts(std::vector<std::string> objects, std::vector<MorRec> morphisms,
                           std::vector<int> identity, std::vector<std::array<int, 3>> compose) {
    FinCat c;
    c.objs_ = std::move(objects);
    c.mors_ = std::move(morphisms);
    c.ident_ = std::move(identity);
    for (std::size_t i = 0; i < c.objs_.size(); ++i) {
      if (!c.obj_idx_.emplace(c.objs_[i], static_cast<int>(i)).second)
        fail(Errc::ParseError, "duplicate object id " + c.objs_[i]);
    }
    for (std::size_t i = 0; i < c.mors_.size(); ++i) {
      if (!c.mor_idx_.emplace(c.mors_[i].id, static_cast<int>(i)).second)
        fail(Errc::ParseError, "duplicate morphism id " + c.mors_[i].id);
    }
    /* last write wins per (g, f) key; keep first-occurrence order for the
     * deterministic serialized view */
    for (auto& t : compose) c.comp_[detail::key64(t[0], t[1])] = t[2];
    std::set<std::pair<int, int>> seen;
    for (auto& t : compose)
      if (seen.insert({t[0], t[1]}).second)
        c.comp_order_.push_back({t[0], t[1], c.comp_[detail::key64(t[0], t[1])]});
    return c;
  }

  int n_objects() const { return static_cast<int>(objs_.size()); }
  int n_morphisms() const { return static_cast<int>(mors_.size()); }
  const std::string& object_id(int o) const { return objs_[o]; }
  const MorRec& mor(int m) const { return mors_[m]; }
  const std::string& mor_id(int m) const { return mors_[m].id; }
  int src(int m) const { return mors_[m].src; }
  int dst(int m) const { return mors_[m].dst; }
  int identity_of(int o) const { return ident_[o]; }
  bool is_identity(int m) const { return ident_[mors_[m].src] == m || ident_[mors_[m].dst] == m; }

  std::optional<int> object_index(const std::string& id) const {
    auto it = obj_idx_.find(id);
    if (it == obj_idx_.end()) return std::nullopt;
    return it->second;
  }
  std::optional<int> morphism_index(const std::string& id) const {
    auto it = mor_idx_.find(id);
    if (it == mor_idx_.end()) return std::nullopt;
    return it->second;
  }

  std::optional<int> compose_get(int g, int f) const {
    auto it = comp_.find(detail::key64(g, f));
    if (it == comp_.end()) return std::nullopt;
    return it->second;
  }

  /// g after f; assumes a validated table.
  int compose(int g, int f) const {
    auto h = compose_get(g, f);
    if (!h)
      fail(Errc::Internal,
           "compose table has no entry for (" + mor_id(g) + ", " + mor_id(f) + ")");
    return *h;
  }

  const std::vector<std::array<int, 3>>& compose_entries() const { return comp_order_; }
  const std::vector<std::string>& objects() const { return objs_; }
  const std::vector<MorRec>& morphisms() const { return mors_; }
  const std::vector<int>& identities() const { return ident_; }

  friend bool operator==(const FinCat& a, const FinCat& b) {
    return a.objs_ == b.objs_ && a.ident_ == b.ident_ && same_mors(a.mors_, b.mors_) &&
           a.comp_ == b.comp_;
  }

 private:
  static bool same_mors(const std::vector<MorRec>& x, const std::vector<MorRec>& y) {
    if (x.size() != y.size()) return false;
    for (std::size_t i = 0; i < x.size(); ++i)
      if (x[i].id != y[i].id || x[i].src != y[i].src || x[i].dst != y[i].dst) return false;
    return true;
  }

  std::vector<std::string> objs_;
  std::vector<MorRec> mors_;
  std::vector<int> ident_;
  std::unordered_map<std::string, int> obj_idx_;
  std::unordered_map<std::string, int> mor_idx_;
  std::unordered_map<std::uint64_t, int> comp_;
  std::vector<std::array<int, 3>> comp_order_;
};

inline bool same_cat(const CatRef& a, const CatRef& b) { return a == b || *a == *b; }

inline std::string identity_id_for(const std::string& obj) { return "id_" + obj; }

/* Builder.  Objects get their identity morphism automatically ("id_<obj>");
 * build() closes the compose table over identity pairs so callers only supply
 * the non-identity composites. */
class FinCatBuilder {
 public:
  FinCatBuilder& add_object(const std::string& id) {
    int o = static_cast<int>(objs_.size());
    objs_.push_back(id);
    mors_.push_back({identity_id_for(id), o, o});
    ident_.push_back(static_cast<int>(mors_.size()) - 1);
    return *this;
  }

  FinCatBuilder& add_morphism(const std::string& id, const std::string& src,
                              const std::string& dst) {
    mors_.push_back({id, find_obj(src), find_obj(dst)});
    return *this;
  }

  FinCatBuilder& set_compose(const std::string& g, const std::string& f, const std::string& h) {
    pending_.push_back({g, f, h});
    return *this;
  }

  CatRef build() {
    std::vector<std::array<int, 3>> comp;
    std::unordered_map<std::string, int> midx;
    for (std::size_t i = 0; i < mors_.size(); ++i) midx[mors_[i].id] = static_cast<int>(i);
    for (std::size_t m = 0; m < mors_.size(); ++m) {
      int f = static_cast<int>(m);
      comp.push_back({ident_[mors_[m].dst], f, f});
      comp.push_back({f, ident_[mors_[m].src], f});
    }
    for (auto& p : pending_) {
      auto g = midx.find(p[0]), f = midx.find(p[1]), h = midx.find(p[2]);
      if (g == midx.end() || f == midx.end() || h == midx.end())
        fail(Errc::ParseError, "compose entry references unknown morphism");
      comp.push_back({g->second, f->second, h->second});
    }
    /* drop duplicate keys, keeping the first (identity closure wins) */
    std::vector<std::array<int, 3>> dedup;
    std::set<std::pair<int, int>> seen;
    for (auto& t : comp)
      if (seen.insert({t[0], t[1]}).second) dedup.push_back(t);
    return std::make_shared<const FinCat>(
        FinCat::from_parts(objs_, mors_, ident_, std::move(dedup)));
  }

 private:
  int find_obj(const std::string& id) const {
    for (std::size_t i = 0; i < objs_.size(); ++i)
      if (objs_[i] == id) return static_cast<int>(i);
    fail(Errc::ParseError, "unknown object id " + id);
  }

  std::vector<std::string> objs_;
  std::vector<MorRec> mors_;
  std::vector<int> ident_;
  std::vector<std::array<std::string, 3>> pending_;
};

/* --------------------------------------------------------------- validation */

inline std::vector<Diagnostic> validate_category(const FinCat& c) {
  std::vector<Diagnostic> out;
  auto add = [&](const char* code, std::string detail) {
    out.push_back({code, std::move(detail)});
  };

  if (static_cast<int>(c.identities().size()) != c.n_objects())
    add("MissingIdentity", "identity table size mismatch");

  for (int o = 0; o < c.n_objects() && o < static_cast<int>(c.identities().size()); ++o) {
    int i = c.identity_of(o);
    if (i < 0 || i >= c.n_morphisms()) {
      add("MissingIdentity", c.object_id(o));
      continue;
    }
    if (c.src(i) != o || c.dst(i) != o) add("IdentityEndpoints", c.mor_id(i));
  }

  /* composition table: defined exactly on composable pairs, typed correctly */
  std::set<std::pair<int, int>> present;
  for (auto& t : c.compose_entries()) {
    present.insert({t[0], t[1]});
    int g = t[0], f = t[1], h = t[2];
    if (c.dst(f) != c.src(g)) {
      add("CompositeOnNonComposable", c.mor_id(g) + " after " + c.mor_id(f));
      continue;
    }
    if (c.src(h) != c.src(f) || c.dst(h) != c.dst(g))
      add("CompositeEndpoints",
          c.mor_id(g) + " after " + c.mor_id(f) + " = " + c.mor_id(h));
  }
  for (int g = 0; g < c.n_morphisms(); ++g)
    for (int f = 0; f < c.n_morphisms(); ++f)
      if (c.dst(f) == c.src(g) && !present.count({g, f}))
        add("MissingComposite", c.mor_id(g) + " after " + c.mor_id(f));

  if (!out.empty()) return out;  // laws below assume a total, typed table

  for (int f = 0; f < c.n_morphisms(); ++f) {
    int l = *c.compose_get(c.identity_of(c.dst(f)), f);
    int r = *c.compose_get(f, c.identity_of(c.src(f)));
    if (l != f) add("UnitLaw", "id after " + c.mor_id(f));
    if (r != f) add("UnitLaw", c.mor_id(f) + " after id");
  }

  for (int h = 0; h < c.n_morphisms(); ++h)
    for (int g = 0; g < c.n_morphisms(); ++g) {
      if (c.dst(g) != c.src(h)) continue;
      for (int f = 0; f < c.n_morphisms(); ++f) {
        if (c.dst(f) != c.src(g)) continue;
        int a = *c.compose_get(*c.compose_get(h, g), f);
        int b = *c.compose_get(h, *c.compose_get(g, f));
        if (a != b)
          add("AssociativityViolation",
              c.mor_id(h) + ", " + c.mor_id(g) + ", " + c.mor_id(f));
      }
    }
  return out;
}

/* ----------------------------------------------------------------- functors */

struct Functor {
  CatRef source;
  CatRef target;
  std::vector<int> on_obj;
  std::vector<int> on_mor;

  int obj(int o) const { return on_obj[o]; }
  int mor(int m) const { return on_mor[m]; }

  friend bool operator==(const Functor& a, const Functor& b) {
    return same_cat(a.source, b.source) && same_cat(a.target, b.target) &&
           a.on_obj == b.on_obj && a.on_mor == b.on_mor;
  }
};

inline Functor identity_functor(const CatRef& c) {
  Functor f{c, c, {}, {}};
  f.on_obj.resize(c->n_objects());
  f.on_mor.resize(c->n_morphisms());
  for (int i = 0; i < c->n_objects(); ++i) f.on_obj[i] = i;
  for (int i = 0; i < c->n_morphisms(); ++i) f.on_mor[i] = i;
  return f;
}

inline bool is_identity_functor(const Functor& f) {
  if (!same_cat(f.source, f.target)) return false;
  for (int i = 0; i < static_cast<int>(f.on_obj.size()); ++i)
    if (f.on_obj[i] != i) return false;
  for (int i = 0; i < static_cast<int>(f.on_mor.size()); ++i)
    if (f.on_mor[i] != i) return false;
  return true;
}

inline std::vector<Diagnostic> validate_functor(const Functor& F) {
  std::vector<Diagnostic> out;
  const FinCat& s = *F.source;
  const FinCat& t = *F.target;
  if (static_cast<int>(F.on_obj.size()) != s.n_objects() ||
      static_cast<int>(F.on_mor.size()) != s.n_morphisms()) {
    out.push_back({"TableSize", "functor tables do not cover the source"});
    return out;
  }
  for (int m = 0; m < s.n_morphisms(); ++m) {
    int fm = F.on_mor[m];
    if (t.src(fm) != F.on_obj[s.src(m)] || t.dst(fm) != F.on_obj[s.dst(m)])
      out.push_back({"EndpointMismatch", s.mor_id(m)});
  }
  for (int o = 0; o < s.n_objects(); ++o)
    if (F.on_mor[s.identity_of(o)] != t.identity_of(F.on_obj[o]))
      out.push_back({"IdentityNotPreserved", s.object_id(o)});
  for (auto& e : s.compose_entries()) {
    if (s.dst(e[1]) != s.src(e[0])) continue;
    auto th = t.compose_get(F.on_mor[e[0]], F.on_mor[e[1]]);
    if (!th || *th != F.on_mor[e[2]])
      out.push_back({"CompositeNotPreserved",
                     s.mor_id(e[0]) + " after " + s.mor_id(e[1])});
  }
  return out;
}

inline Functor compose_functors(const Functor& g, const Functor& f) {
  if (!same_cat(f.target, g.source))
    fail(Errc::MismatchedTarget, "functor composition boundary mismatch");
  Functor h{f.source, g.target, {}, {}};
  h.on_obj.resize(f.on_obj.size());
  h.on_mor.resize(f.on_mor.size());
  for (std::size_t i = 0; i < f.on_obj.size(); ++i) h.on_obj[i] = g.on_obj[f.on_obj[i]];
  for (std::size_t i = 0; i < f.on_mor.size(); ++i) h.on_mor[i] = g.on_mor[f.on_mor[i]];
  return h;
}

inline bool functor_bijective(const Functor& F) {
  if (F.source->n_objects() != F.target->n_objects() ||
      F.source->n_morphisms() != F.target->n_morphisms())
    return false;
  std::vector<char> ohit(F.target->n_objects(), 0), mhit(F.target->n_morphisms(), 0);
  for (int x : F.on_obj) {
    if (ohit[x]) return false;
    ohit[x] = 1;
  }
  for (int x : F.on_mor) {
    if (mhit[x]) return false;
    mhit[x] = 1;
  }
  return true;
}

/// Inverse of a bijective functor (tables flipped).
inline Functor invert_functor(const Functor& F) {
  if (!functor_bijective(F)) fail(Errc::Internal, "invert_functor on non-bijective functor");
  Functor g{F.target, F.source, {}, {}};
  g.on_obj.resize(F.on_obj.size());
  g.on_mor.resize(F.on_mor.size());
  for (std::size_t i = 0; i < F.on_obj.size(); ++i) g.on_obj[F.on_obj[i]] = static_cast<int>(i);
  for (std::size_t i = 0; i < F.on_mor.size(); ++i) g.on_mor[F.on_mor[i]] = static_cast<int>(i);
  return g;
}

/* --------------------------------------------------- natural transformations */

struct NatTrans {
  Functor source;  // F
  Functor target;  // G, same boundary categories
  std::vector<int> at;  // object of F.source -> morphism of F.target: F(x) -> G(x)
};

inline std::vector<Diagnostic> validate_nat(const NatTrans& n) {
  std::vector<Diagnostic> out;
  if (!same_cat(n.source.source, n.target.source) || !same_cat(n.source.target, n.target.target))
    out.push_back({"BoundaryMismatch", "source/target functors not parallel"});
  const FinCat& b = *n.source.source;
  const FinCat& t = *n.source.target;
  if (static_cast<int>(n.at.size()) != b.n_objects()) {
    out.push_back({"TableSize", "component table does not cover the base"});
    return out;
  }
  for (int o = 0; o < b.n_objects(); ++o) {
    int m = n.at[o];
    if (t.src(m) != n.source.on_obj[o] || t.dst(m) != n.target.on_obj[o])
      out.push_back({"ComponentEndpoints", b.object_id(o)});
  }
  return out;
}

/// Empty result means every naturality square commutes.
inline std::vector<Diagnostic> check_naturality(const NatTrans& n) {
  std::vector<Diagnostic> out = validate_nat(n);
  if (!out.empty()) return out;
  const FinCat& b = *n.source.source;
  const FinCat& t = *n.source.target;
  for (int m = 0; m < b.n_morphisms(); ++m) {
    int lhs = t.compose(n.at[b.dst(m)], n.source.on_mor[m]);
    int rhs = t.compose(n.target.on_mor[m], n.at[b.src(m)]);
    if (lhs != rhs) out.push_back({"NaturalityViolation", b.mor_id(m)});
  }
  return out;
}

inline NatTrans vcompose_nat(const NatTrans& b, const NatTrans& a) {
  NatTrans r{a.source, b.target, {}};
  const FinCat& t = *a.source.target;
  r.at.resize(a.at.size());
  for (std::size_t o = 0; o < a.at.size(); ++o) r.at[o] = t.compose(b.at[o], a.at[o]);
  return r;
}

/// F applied to a transformation: (F a)_x = F(a_x).
inline NatTrans whisker_nat(const Functor& F, const NatTrans& a) {
  NatTrans r{compose_functors(F, a.source), compose_functors(F, a.target), {}};
  r.at.resize(a.at.size());
  for (std::size_t o = 0; o < a.at.size(); ++o) r.at[o] = F.on_mor[a.at[o]];
  return r;
}

/// Transformation restricted along F: (a F)_x = a_{F x}.
inline NatTrans whisker_nat(const NatTrans& a, const Functor& F) {
  NatTrans r{compose_functors(a.source, F), compose_functors(a.target, F), {}};
  r.at.resize(F.on_obj.size());
  for (std::size_t o = 0; o < F.on_obj.size(); ++o) r.at[o] = a.at[F.on_obj[o]];
  return r;
}

/* ------------------------------------------------------- terminal and probes */

inline CatRef terminal_category() {
  static CatRef one = FinCatBuilder().add_object("*").build();
  return one;
}

inline Functor bang(const CatRef& c) {
  CatRef one = terminal_category();
  Functor f{c, one, {}, {}};
  f.on_obj.assign(c->n_objects(), 0);
  f.on_mor.assign(c->n_morphisms(), one->identity_of(0));
  return f;
}

/* ---------------------------------------------------------------- pullbacks */

struct Pullback {
  CatRef cat;
  Functor p1;  // to the source of f
  Functor p2;  // to the source of g
};

inline std::string pair_obj_id(const std::string& a, const std::string& b) {
  return "(" + a + "," + b + ")";
}

/* Canonical pullback of f: B -> A against g: C -> A.  Objects are pairs
 * (b, c) with f b = g c; pullback along an identity functor returns the other
 * category unchanged so that reconstruction round trips are table-exact. */
inline Pullback canonical_pullback(const Functor& f, const Functor& g) {
  if (!same_cat(f.target, g.target))
    fail(Errc::MismatchedTarget, "pullback cospan targets differ");

  if (is_identity_functor(g)) return {f.source, identity_functor(f.source), f};
  if (is_identity_functor(f)) return {g.source, g, identity_functor(g.source)};

  const FinCat& B = *f.source;
  const FinCat& C = *g.source;

  std::vector<std::string> objs;
  std::vector<int> ob, oc;  // projections, indexed by pullback object
  std::unordered_map<std::uint64_t, int> opair;
  for (int b = 0; b < B.n_objects(); ++b)
    for (int c = 0; c < C.n_objects(); ++c)
      if (f.on_obj[b] == g.on_obj[c]) {
        opair[detail::key64(b, c)] = static_cast<int>(objs.size());
        objs.push_back(pair_obj_id(B.object_id(b), C.object_id(c)));
        ob.push_back(b);
        oc.push_back(c);
      }

  std::vector<MorRec> mors;
  std::vector<int> ident(objs.size(), -1);
  std::vector<int> mb, mc;
  std::unordered_map<std::uint64_t, int> mpair;
  for (int x = 0; x < B.n_morphisms(); ++x)
    for (int y = 0; y < C.n_morphisms(); ++y) {
      if (f.on_mor[x] != g.on_mor[y]) continue;
      auto s = opair.find(detail::key64(B.src(x), C.src(y)));
      auto d = opair.find(detail::key64(B.dst(x), C.dst(y)));
      if (s == opair.end() || d == opair.end()) continue;  // cannot happen on valid functors
      int idx = static_cast<int>(mors.size());
      bool is_id = B.identity_of(B.src(x)) == x && C.identity_of(C.src(y)) == y;
      std::string id = is_id ? identity_id_for(objs[s->second])
                             : pair_obj_id(B.mor_id(x), C.mor_id(y));
      mors.push_back({std::move(id), s->second, d->second});
      mpair[detail::key64(x, y)] = idx;
      mb.push_back(x);
      mc.push_back(y);
      if (is_id) ident[s->second] = idx;
    }

  std::vector<std::array<int, 3>> comp;
  for (int gg = 0; gg < static_cast<int>(mors.size()); ++gg)
    for (int ff = 0; ff < static_cast<int>(mors.size()); ++ff) {
      if (mors[ff].dst != mors[gg].src) continue;
      auto hb = B.compose_get(mb[gg], mb[ff]);
      auto hc = C.compose_get(mc[gg], mc[ff]);
      if (!hb || !hc) fail(Errc::Internal, "pullback factors have partial compose tables");
      comp.push_back({gg, ff, mpair.at(detail::key64(*hb, *hc))});
    }

  auto P = std::make_shared<const FinCat>(
      FinCat::from_parts(std::move(objs), std::move(mors), std::move(ident), std::move(comp)));
  Functor p1{P, f.source, ob, mb};
  Functor p2{P, g.source, oc, mc};
  return {P, std::move(p1), std::move(p2)};
}

/* ------------------------------------------------------------- is_pullback */

/// Square of functors; right . top == bottom . left is required.
struct CommutingSquare {
  Functor top;     // D -> C
  Functor left;    // D -> B
  Functor right;   // C -> A
  Functor bottom;  // B -> A
};

struct ComparisonReport {
  bool verdict = false;
  std::optional<Functor> comparison;  // into the canonical pullback, when total
  std::optional<std::string> counterexample;
};

inline void require_square(const CommutingSquare& s) {
  if (!same_cat(s.top.source, s.left.source) || !same_cat(s.top.target, s.right.source) ||
      !same_cat(s.left.target, s.bottom.source) || !same_cat(s.right.target, s.bottom.target))
    fail(Errc::MismatchedTarget, "square boundaries do not line up");
  Functor a = compose_functors(s.right, s.top);
  Functor b = compose_functors(s.bottom, s.left);
  if (!(a == b)) fail(Errc::NotCommuting, "right.top != bottom.left");
}

/* Verdict by comparison with the canonical pullback of (bottom, right): the
 * square is a pullback iff the comparison functor is bijective on objects and
 * morphisms. */
inline ComparisonReport is_pullback(const CommutingSquare& s) {
  require_square(s);
  Pullback pb = canonical_pullback(s.bottom, s.right);
  const FinCat& D = *s.top.source;
  const FinCat& P = *pb.cat;

  std::unordered_map<std::uint64_t, int> opair, mpair;
  for (int p = 0; p < P.n_objects(); ++p)
    opair[detail::key64(pb.p1.on_obj[p], pb.p2.on_obj[p])] = p;
  for (int p = 0; p < P.n_morphisms(); ++p)
    mpair[detail::key64(pb.p1.on_mor[p], pb.p2.on_mor[p])] = p;

  ComparisonReport rep;
  Functor u{s.top.source, pb.cat, {}, {}};
  u.on_obj.resize(D.n_objects());
  u.on_mor.resize(D.n_morphisms());
  for (int d = 0; d < D.n_objects(); ++d) {
    auto it = opair.find(detail::key64(s.left.on_obj[d], s.top.on_obj[d]));
    if (it == opair.end()) {
      rep.counterexample = "object " + D.object_id(d) + " has no pullback image";
      return rep;
    }
    u.on_obj[d] = it->second;
  }
  for (int d = 0; d < D.n_morphisms(); ++d) {
    auto it = mpair.find(detail::key64(s.left.on_mor[d], s.top.on_mor[d]));
    if (it == mpair.end()) {
      rep.counterexample = "morphism " + D.mor_id(d) + " has no pullback image";
      return rep;
    }
    u.on_mor[d] = it->second;
  }

  rep.comparison = u;
  if (!functor_bijective(u)) {
    /* name the first identifier that breaks bijectivity */
    std::vector<int> ohit(P.n_objects(), -1);
    for (int d = 0; d < D.n_objects(); ++d) {
      if (ohit[u.on_obj[d]] >= 0) {
        rep.counterexample = "objects " + D.object_id(ohit[u.on_obj[d]]) + " and " +
                             D.object_id(d) + " collide in the pullback";
        return rep;
      }
      ohit[u.on_obj[d]] = d;
    }
    for (int p = 0; p < P.n_objects(); ++p)
      if (std::find(u.on_obj.begin(), u.on_obj.end(), p) == u.on_obj.end()) {
        rep.counterexample = "pullback object " + P.object_id(p) + " is not hit";
        return rep;
      }
    std::vector<int> mhit(P.n_morphisms(), -1);
    for (int d = 0; d < D.n_morphisms(); ++d) {
      if (mhit[u.on_mor[d]] >= 0) {
        rep.counterexample = "morphisms " + D.mor_id(mhit[u.on_mor[d]]) + " and " + D.mor_id(d) +
                             " collide in the pullback";
        return rep;
      }
      mhit[u.on_mor[d]] = d;
    }
    for (int p = 0; p < P.n_morphisms(); ++p)
      if (std::find(u.on_mor.begin(), u.on_mor.end(), p) == u.on_mor.end()) {
        rep.counterexample = "pullback morphism " + P.mor_id(p) + " is not hit";
        return rep;
      }
    rep.counterexample = "comparison is not bijective";
    return rep;
  }
  rep.verdict = true;
  return rep;
}

/* ---------------------------------------------------- groupoids, fibrations */

inline bool is_groupoid(const FinCat& c) {
  for (int m = 0; m < c.n_morphisms(); ++m) {
    bool inv = false;
    for (int w = 0; w < c.n_morphisms() && !inv; ++w) {
      if (c.src(w) != c.dst(m) || c.dst(w) != c.src(m)) continue;
      auto a = c.compose_get(w, m);
      auto b = c.compose_get(m, w);
      inv = a && b && *a == c.identity_of(c.src(m)) && *b == c.identity_of(c.dst(m));
    }
    if (!inv) return false;
  }
  return true;
}

/// Morphism inverse in a groupoid (least index among two-sided inverses).
inline int groupoid_inverse(const FinCat& c, int m) {
  for (int w = 0; w < c.n_morphisms(); ++w) {
    if (c.src(w) != c.dst(m) || c.dst(w) != c.src(m)) continue;
    auto a = c.compose_get(w, m);
    auto b = c.compose_get(m, w);
    if (a && b && *a == c.identity_of(c.src(m)) && *b == c.identity_of(c.dst(m))) return w;
  }
  fail(Errc::HypothesisFailed, "no inverse for " + c.mor_id(m));
}

/* Brute-force test that `lift` (a morphism of E out of e with F lift = phi)
 * has the pushforward universal property: every chi out of e whose image
 * factors as omega . phi factors uniquely through the lift, over omega. */
inline bool is_cocartesian(const Functor& F, int lift, int phi) {
  const FinCat& E = *F.source;
  const FinCat& B = *F.target;
  if (F.on_mor[lift] != phi) return false;
  int e = E.src(lift), e2 = E.dst(lift);
  for (int chi = 0; chi < E.n_morphisms(); ++chi) {
    if (E.src(chi) != e) continue;
    for (int omega = 0; omega < B.n_morphisms(); ++omega) {
      if (B.src(omega) != B.dst(phi) || B.dst(omega) != F.on_obj[E.dst(chi)]) continue;
      auto comp = B.compose_get(omega, phi);
      if (!comp || *comp != F.on_mor[chi]) continue;
      int count = 0;
      for (int w = 0; w < E.n_morphisms(); ++w) {
        if (E.src(w) != e2 || E.dst(w) != E.dst(chi)) continue;
        if (F.on_mor[w] != omega) continue;
        auto c2 = E.compose_get(w, lift);
        if (c2 && *c2 == chi) ++count;
      }
      if (count != 1) return false;
    }
  }
  return true;
}

/* Least-identifier cocartesian lift of phi at e (F e = src phi). */
inline int cocartesian_lift(const Functor& F, int phi, int e) {
  const FinCat& E = *F.source;
  const FinCat& B = *F.target;
  if (F.on_obj[e] != B.src(phi))
    fail(Errc::MismatchedTarget, "lift base does not sit under src of " + B.mor_id(phi));
  int best = -1;
  for (int m = 0; m < E.n_morphisms(); ++m) {
    if (E.src(m) != e || F.on_mor[m] != phi) continue;
    if (!is_cocartesian(F, m, phi)) continue;
    if (best < 0 || E.mor_id(m) < E.mor_id(best)) best = m;
  }
  if (best < 0)
    fail(Errc::NoLift, "no cocartesian lift of " + B.mor_id(phi) + " at " + E.object_id(e));
  return best;
}

inline bool is_opfibration(const Functor& F) {
  const FinCat& E = *F.source;
  const FinCat& B = *F.target;
  for (int e = 0; e < E.n_objects(); ++e)
    for (int phi = 0; phi < B.n_morphisms(); ++phi) {
      if (B.src(phi) != F.on_obj[e]) continue;
      bool found = false;
      for (int m = 0; m < E.n_morphisms() && !found; ++m)
        found = E.src(m) == e && F.on_mor[m] == phi && is_cocartesian(F, m, phi);
      if (!found) return false;
    }
  return true;
}

}  // namespace clubkit
