#pragma once

/* Small standard categories used as probes throughout the test suites and as
 * the built-in universe. */

#include "clubkit/fincat.hpp"

namespace clubkit {

/// Walking arrow: objects 0, 1 and a single arrow u: 0 -> 1.
inline CatRef walking_arrow() {
  static CatRef c = FinCatBuilder()
                        .add_object("0")
                        .add_object("1")
                        .add_morphism("u", "0", "1")
                        .build();
  return c;
}

/// Two objects, identities only.
inline CatRef discrete_pair() {
  static CatRef c = FinCatBuilder().add_object("x").add_object("y").build();
  return c;
}

/// Walking isomorphism: u: a -> b with two-sided inverse v.
inline CatRef walking_iso() {
  static CatRef c = FinCatBuilder()
                        .add_object("a")
                        .add_object("b")
                        .add_morphism("u", "a", "b")
                        .add_morphism("v", "b", "a")
                        .set_compose("v", "u", "id_a")
                        .set_compose("u", "v", "id_b")
                        .build();
  return c;
}

/// Walking composable pair: 0 -> 1 -> 2 with the composite filled in.
inline CatRef walking_composable_pair() {
  static CatRef c = FinCatBuilder()
                        .add_object("0")
                        .add_object("1")
                        .add_object("2")
                        .add_morphism("f", "0", "1")
                        .add_morphism("g", "1", "2")
                        .add_morphism("gf", "0", "2")
                        .set_compose("g", "f", "gf")
                        .build();
  return c;
}

/// One object whose only non-identity arrow is an involution.
inline CatRef involution() {
  static CatRef c = FinCatBuilder()
                        .add_object("z")
                        .add_morphism("s", "z", "z")
                        .set_compose("s", "s", "id_z")
                        .build();
  return c;
}

/// Functor by identifier tables; identity morphisms are filled automatically.
inline Functor make_functor(const CatRef& src, const CatRef& tgt,
                            const std::map<std::string, std::string>& on_obj,
                            const std::map<std::string, std::string>& on_mor) {
  Functor f{src, tgt, {}, {}};
  f.on_obj.resize(src->n_objects(), -1);
  f.on_mor.resize(src->n_morphisms(), -1);
  for (auto& [k, v] : on_obj) {
    auto a = src->object_index(k);
    auto b = tgt->object_index(v);
    if (!a || !b) fail(Errc::UnresolvedReference, "functor object map " + k + " -> " + v);
    f.on_obj[*a] = *b;
  }
  for (int o = 0; o < src->n_objects(); ++o) {
    if (f.on_obj[o] < 0) fail(Errc::ParseError, "object " + src->object_id(o) + " unmapped");
    f.on_mor[src->identity_of(o)] = tgt->identity_of(f.on_obj[o]);
  }
  for (auto& [k, v] : on_mor) {
    auto a = src->morphism_index(k);
    auto b = tgt->morphism_index(v);
    if (!a || !b) fail(Errc::UnresolvedReference, "functor morphism map " + k + " -> " + v);
    f.on_mor[*a] = *b;
  }
  for (int m = 0; m < src->n_morphisms(); ++m)
    if (f.on_mor[m] < 0) fail(Errc::ParseError, "morphism " + src->mor_id(m) + " unmapped");
  return f;
}

}  // namespace clubkit
