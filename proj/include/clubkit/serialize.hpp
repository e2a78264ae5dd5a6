#pragma once

/* JSON wire format for the table types.
 *
 * Documents keep identities implicit: a category lists only non-identity
 * morphisms and composites, a functor maps only non-identity morphisms, a
 * profunctor lists only non-identity actions.  Parsers refill the implicit
 * parts through the same builders the probes use, so anything a file does
 * not say is well formed by construction and validation can concentrate on
 * what it does say.
 *
 * Rebuilding through a builder forgets where the original enumeration kept
 * its identity morphisms, so parse(serialize(c)) can reorder the morphism
 * vector relative to a category that was assembled some other way.  The
 * round-trip guarantees are therefore: serialize(parse(doc)) == doc byte for
 * byte, and tables_equal(parse(serialize(c)), c) identifier for identifier.
 */

#include <json.hpp>

#include <array>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "clubkit/probes.hpp"
#include "clubkit/profunctor.hpp"

namespace clubkit {

using Json = nlohmann::json;

namespace detail {

/// Field access that names the document on failure instead of leaving a bare
/// nlohmann type error.
inline const Json& want(const Json& doc, const char* field, const std::string& where) {
  auto it = doc.find(field);
  if (it == doc.end()) fail(Errc::ParseError, where + ": missing field '" + field + "'");
  return *it;
}

inline std::string want_str(const Json& j, const std::string& where) {
  if (!j.is_string()) fail(Errc::ParseError, where + ": expected a string");
  return j.get<std::string>();
}

}  // namespace detail

/* ------------------------------------------------------------- categories */

inline Json cat_to_json(const FinCat& c) {
  Json mors = Json::array();
  for (int m = 0; m < c.n_morphisms(); ++m) {
    if (c.is_identity(m)) continue;
    mors.push_back({{"id", c.mor_id(m)},
                    {"src", c.object_id(c.src(m))},
                    {"dst", c.object_id(c.dst(m))}});
  }
  Json comp = Json::array();
  for (const auto& t : c.compose_entries()) {
    if (c.is_identity(t[0]) || c.is_identity(t[1])) continue;
    comp.push_back({c.mor_id(t[0]), c.mor_id(t[1]), c.mor_id(t[2])});
  }
  return {{"objects", c.objects()}, {"morphisms", std::move(mors)}, {"compose", std::move(comp)}};
}

inline CatRef cat_from_json(const Json& doc, const std::string& where = "category") {
  try {
    FinCatBuilder b;
    for (const auto& o : detail::want(doc, "objects", where))
      b.add_object(detail::want_str(o, where));
    for (const auto& m : detail::want(doc, "morphisms", where))
      b.add_morphism(detail::want_str(detail::want(m, "id", where), where),
                     detail::want_str(detail::want(m, "src", where), where),
                     detail::want_str(detail::want(m, "dst", where), where));
    for (const auto& e : detail::want(doc, "compose", where)) {
      if (!e.is_array() || e.size() != 3)
        fail(Errc::ParseError, where + ": compose entries are [after, first, result]");
      b.set_compose(detail::want_str(e[0], where), detail::want_str(e[1], where),
                    detail::want_str(e[2], where));
    }
    return b.build();
  } catch (const Json::exception& e) {
    fail(Errc::ParseError, where + ": " + e.what());
  } catch (const Error& e) {
    /* builder failures (unknown ids, duplicates) know nothing about the
     * document; stamp the location on once */
    std::string msg = e.what();
    std::string code = std::string(errc_name(e.code)) + ": ";
    if (msg.rfind(code, 0) == 0) msg = msg.substr(code.size());
    if (msg.rfind(where, 0) == 0) throw;
    fail(e.code, where + ": " + msg);
  }
}

/// Identifier-level equality: same objects, morphisms, identities, and
/// composition, regardless of how either enumeration is ordered.
inline bool tables_equal(const FinCat& a, const FinCat& b) {
  auto objs = [](const FinCat& c) {
    std::vector<std::string> v = c.objects();
    std::sort(v.begin(), v.end());
    return v;
  };
  if (objs(a) != objs(b)) return false;
  auto mors = [](const FinCat& c) {
    std::map<std::string, std::pair<std::string, std::string>> v;
    for (int m = 0; m < c.n_morphisms(); ++m)
      v[c.mor_id(m)] = {c.object_id(c.src(m)), c.object_id(c.dst(m))};
    return v;
  };
  if (mors(a) != mors(b)) return false;
  auto idents = [](const FinCat& c) {
    std::map<std::string, std::string> v;
    for (int o = 0; o < c.n_objects(); ++o) v[c.object_id(o)] = c.mor_id(c.identity_of(o));
    return v;
  };
  if (idents(a) != idents(b)) return false;
  auto comp = [](const FinCat& c) {
    std::map<std::pair<std::string, std::string>, std::string> v;
    for (const auto& t : c.compose_entries())
      v[{c.mor_id(t[0]), c.mor_id(t[1])}] = c.mor_id(t[2]);
    return v;
  };
  return comp(a) == comp(b);
}

/* --------------------------------------------------------------- functors */

inline Json functor_to_json(const Functor& F, const std::string& source,
                            const std::string& target) {
  Json on_obj = Json::object(), on_mor = Json::object();
  for (int o = 0; o < F.source->n_objects(); ++o)
    on_obj[F.source->object_id(o)] = F.target->object_id(F.on_obj[o]);
  for (int m = 0; m < F.source->n_morphisms(); ++m) {
    if (F.source->is_identity(m)) continue;
    on_mor[F.source->mor_id(m)] = F.target->mor_id(F.on_mor[m]);
  }
  return {{"source", source},
          {"target", target},
          {"on_objects", std::move(on_obj)},
          {"on_morphisms", std::move(on_mor)}};
}

inline Functor functor_from_json(const Json& doc, const std::map<std::string, CatRef>& cats,
                                 const std::string& where = "functor") {
  try {
    auto cat = [&](const char* field) -> const CatRef& {
      std::string n = detail::want_str(detail::want(doc, field, where), where);
      auto it = cats.find(n);
      if (it == cats.end()) fail(Errc::UnresolvedReference, where + ": category '" + n + "'");
      return it->second;
    };
    const CatRef& src = cat("source");
    const CatRef& tgt = cat("target");
    std::map<std::string, std::string> on_obj, on_mor;
    for (const auto& [k, v] : detail::want(doc, "on_objects", where).items())
      on_obj[k] = detail::want_str(v, where);
    for (const auto& [k, v] : detail::want(doc, "on_morphisms", where).items())
      on_mor[k] = detail::want_str(v, where);
    return make_functor(src, tgt, on_obj, on_mor);
  } catch (const Json::exception& e) {
    fail(Errc::ParseError, where + ": " + e.what());
  }
}

/* ------------------------------------------------------------ profunctors */

inline Json pro_to_json(const Profunctor& P, const std::string& src_name,
                        const std::string& tgt_name) {
  Json pros = Json::array();
  for (const Proarrow& g : P.pros)
    pros.push_back({{"id", g.id},
                    {"from", P.tgt_cat->object_id(g.from)},
                    {"to", P.src_cat->object_id(g.to)}});
  /* action maps are unordered; walk morphism x proarrow index space so the
   * document comes out the same every run */
  Json left = Json::array(), right = Json::array();
  for (int h = 0; h < P.src_cat->n_morphisms(); ++h) {
    if (P.src_cat->is_identity(h)) continue;
    for (int p = 0; p < P.n_pros(); ++p)
      if (auto q = P.left_get(h, p))
        left.push_back({P.src_cat->mor_id(h), P.pros[p].id, P.pros[*q].id});
  }
  for (int p = 0; p < P.n_pros(); ++p)
    for (int f = 0; f < P.tgt_cat->n_morphisms(); ++f) {
      if (P.tgt_cat->is_identity(f)) continue;
      if (auto q = P.right_get(p, f))
        right.push_back({P.pros[p].id, P.tgt_cat->mor_id(f), P.pros[*q].id});
    }
  return {{"src_cat", src_name},
          {"tgt_cat", tgt_name},
          {"proarrows", std::move(pros)},
          {"left_action", std::move(left)},
          {"right_action", std::move(right)}};
}

inline Profunctor pro_from_json(const Json& doc, const std::map<std::string, CatRef>& cats,
                                const std::string& where = "profunctor") {
  try {
    auto cat = [&](const char* field) -> const CatRef& {
      std::string n = detail::want_str(detail::want(doc, field, where), where);
      auto it = cats.find(n);
      if (it == cats.end()) fail(Errc::UnresolvedReference, where + ": category '" + n + "'");
      return it->second;
    };
    const CatRef& src = cat("src_cat");
    const CatRef& tgt = cat("tgt_cat");
    std::vector<std::array<std::string, 3>> pros, left, right;
    for (const auto& g : detail::want(doc, "proarrows", where))
      pros.push_back({detail::want_str(detail::want(g, "id", where), where),
                      detail::want_str(detail::want(g, "from", where), where),
                      detail::want_str(detail::want(g, "to", where), where)});
    auto triples = [&](const char* field, std::vector<std::array<std::string, 3>>& out) {
      for (const auto& e : detail::want(doc, field, where)) {
        if (!e.is_array() || e.size() != 3)
          fail(Errc::ParseError, where + ": " + field + " entries are triples");
        out.push_back({detail::want_str(e[0], where), detail::want_str(e[1], where),
                       detail::want_str(e[2], where)});
      }
    };
    triples("left_action", left);
    triples("right_action", right);
    return make_profunctor_ids(src, tgt, pros, left, right);
  } catch (const Json::exception& e) {
    fail(Errc::ParseError, where + ": " + e.what());
  }
}

inline bool pro_tables_equal(const Profunctor& a, const Profunctor& b) { return a == b; }

/* ------------------------------------------------------------------ cells */

/* Vertical boundaries are references: either the name of a functor document
 * or "id:<category>".  Cells do not carry their functors inline because the
 * same boundary shows up in every square of an instance file. */

inline Json cell_to_json(const Cell& c, const std::string& source, const std::string& target,
                         const std::string& vsrc, const std::string& vtgt) {
  Json on_pro = Json::object();
  for (int p = 0; p < c.source.n_pros(); ++p)
    on_pro[c.source.pros[p].id] = c.target.pros[c.on_pro[p]].id;
  return {{"source", source},
          {"target", target},
          {"vsrc", vsrc},
          {"vtgt", vtgt},
          {"on_pro", std::move(on_pro)}};
}

inline Functor resolve_functor_ref(const std::string& ref,
                                   const std::map<std::string, CatRef>& cats,
                                   const std::map<std::string, Functor>& functors,
                                   const std::string& where) {
  if (ref.rfind("id:", 0) == 0) {
    auto it = cats.find(ref.substr(3));
    if (it == cats.end()) fail(Errc::UnresolvedReference, where + ": category '" + ref.substr(3) + "'");
    return identity_functor(it->second);
  }
  auto it = functors.find(ref);
  if (it == functors.end()) fail(Errc::UnresolvedReference, where + ": functor '" + ref + "'");
  return it->second;
}

inline Cell cell_from_json(const Json& doc, const std::map<std::string, CatRef>& cats,
                           const std::map<std::string, Functor>& functors,
                           const std::map<std::string, Profunctor>& pros,
                           const std::string& where = "cell") {
  try {
    auto pro = [&](const char* field) -> const Profunctor& {
      std::string n = detail::want_str(detail::want(doc, field, where), where);
      auto it = pros.find(n);
      if (it == pros.end()) fail(Errc::UnresolvedReference, where + ": profunctor '" + n + "'");
      return it->second;
    };
    Cell c{pro("source"), pro("target"), {}, {}, {}};
    c.vsrc = resolve_functor_ref(detail::want_str(detail::want(doc, "vsrc", where), where), cats,
                                 functors, where);
    c.vtgt = resolve_functor_ref(detail::want_str(detail::want(doc, "vtgt", where), where), cats,
                                 functors, where);
    const Json& on_pro = detail::want(doc, "on_pro", where);
    c.on_pro.resize(c.source.n_pros());
    for (int p = 0; p < c.source.n_pros(); ++p) {
      auto it = on_pro.find(c.source.pros[p].id);
      if (it == on_pro.end())
        fail(Errc::ParseError, where + ": no assignment for proarrow " + c.source.pros[p].id);
      std::string img = detail::want_str(*it, where);
      auto q = c.target.pro_index(img);
      if (!q) fail(Errc::UnresolvedReference, where + ": proarrow '" + img + "'");
      c.on_pro[p] = *q;
    }
    return c;
  } catch (const Json::exception& e) {
    fail(Errc::ParseError, where + ": " + e.what());
  }
}

/* ------------------------------------------------------------ collections */

/* A collection document embeds its base category; unlike functors and cells
 * it is self-contained, so one file can travel alone. */

inline Json collection_to_json(const Collection0& c) {
  Json arity = Json::object(), perm = Json::object();
  for (int o = 0; o < c.base->n_objects(); ++o) arity[c.base->object_id(o)] = c.arity[o];
  for (int m = 0; m < c.base->n_morphisms(); ++m) {
    if (c.base->is_identity(m)) continue;
    perm[c.base->mor_id(m)] = c.perm[m];
  }
  return {{"base", cat_to_json(*c.base)},
          {"arity", std::move(arity)},
          {"perm", std::move(perm)}};
}

inline Collection0 collection_from_json(const Json& doc, const std::string& where = "collection") {
  try {
    Collection0 c;
    c.base = cat_from_json(detail::want(doc, "base", where), where + ": base");
    const Json& arity = detail::want(doc, "arity", where);
    c.arity.resize(c.base->n_objects(), -1);
    for (int o = 0; o < c.base->n_objects(); ++o) {
      auto it = arity.find(c.base->object_id(o));
      if (it == arity.end())
        fail(Errc::ParseError, where + ": no arity for object " + c.base->object_id(o));
      c.arity[o] = it->get<int>();
    }
    const Json& perm = detail::want(doc, "perm", where);
    c.perm.resize(c.base->n_morphisms());
    for (int m = 0; m < c.base->n_morphisms(); ++m) {
      if (c.base->is_identity(m)) {
        c.perm[m].resize(c.arity[c.base->src(m)]);
        for (std::size_t i = 0; i < c.perm[m].size(); ++i) c.perm[m][i] = static_cast<int>(i);
        continue;
      }
      auto it = perm.find(c.base->mor_id(m));
      if (it == perm.end())
        fail(Errc::ParseError, where + ": no permutation for morphism " + c.base->mor_id(m));
      c.perm[m] = it->get<std::vector<int>>();
    }
    return c;
  } catch (const Json::exception& e) {
    fail(Errc::ParseError, where + ": " + e.what());
  }
}

/* ------------------------------------------------------------- composites */

/* Composites are emitted with their coend bookkeeping so a reader can audit
 * which raw pairs were glued.  There is no parser for the witness: whoever
 * needs one recomputes it with pro_compose, a loaded witness could silently
 * disagree with the quotient it claims to describe. */

inline Json composite_to_json(const ProComposite& t, const Profunctor& outer,
                              const Profunctor& inner, const std::string& src_name,
                              const std::string& tgt_name) {
  Json raw = Json::array();
  for (const auto& [k, g] : t.w.raw) raw.push_back({outer.pros[k].id, inner.pros[g].id});
  Json witness = {{"raw", std::move(raw)}, {"class_of", t.w.class_of}, {"rep", t.w.rep}};
  return {{"pro", pro_to_json(t.pro, src_name, tgt_name)}, {"witness", std::move(witness)}};
}

}  // namespace clubkit
