#include <catch2/catch_amalgamated.hpp>

#include "clubkit/fincat.hpp"
#include "clubkit/probes.hpp"
#include "oracles.hpp"

using namespace clubkit;

namespace {

bool has_diag(const std::vector<Diagnostic>& ds, const std::string& code) {
  for (auto& d : ds)
    if (d.code == code) return true;
  return false;
}

/* copy of a category with one compose entry rewritten */
CatRef with_compose(const CatRef& c, const std::string& g, const std::string& f,
                    const std::string& h) {
  auto entries = c->compose_entries();
  int gi = *c->morphism_index(g), fi = *c->morphism_index(f), hi = *c->morphism_index(h);
  bool found = false;
  for (auto& e : entries)
    if (e[0] == gi && e[1] == fi) {
      e[2] = hi;
      found = true;
    }
  if (!found) entries.push_back({gi, fi, hi});
  return std::make_shared<const FinCat>(FinCat::from_parts(
      c->objects(), c->morphisms(), c->identities(), std::move(entries)));
}

}  // namespace

TEST_CASE("probe categories satisfy the axioms", "[fincat][validate]") {
  for (const CatRef& c : {terminal_category(), walking_arrow(), discrete_pair(), walking_iso(),
                          walking_composable_pair(), involution()}) {
    CAPTURE(c->n_objects());
    CHECK(validate_category(*c).empty());
  }
}

TEST_CASE("validation reports broken tables as values", "[fincat][validate]") {
  CatRef two = walking_arrow();

  SECTION("missing composite") {
    auto entries = two->compose_entries();
    int u = *two->morphism_index("u");
    int id0 = *two->morphism_index("id_0");
    std::erase_if(entries, [&](auto& e) { return e[0] == u && e[1] == id0; });
    auto broken = FinCat::from_parts(two->objects(), two->morphisms(), two->identities(),
                                     std::move(entries));
    auto ds = validate_category(broken);
    REQUIRE(has_diag(ds, "MissingComposite"));
  }

  SECTION("composite on a non-composable pair") {
    auto entries = two->compose_entries();
    int u = *two->morphism_index("u");
    entries.push_back({u, u, u});
    auto broken = FinCat::from_parts(two->objects(), two->morphisms(), two->identities(),
                                     std::move(entries));
    REQUIRE(has_diag(validate_category(broken), "CompositeOnNonComposable"));
  }

  SECTION("unit law broken by a retargeted identity composite") {
    CatRef g1 = walking_iso();
    auto broken = with_compose(g1, "id_b", "u", "id_a");  // wrong endpoints for the value
    REQUIRE_FALSE(validate_category(*broken).empty());
  }

  SECTION("identity map pointing at a non-identity endomorphism") {
    CatRef inv = involution();
    auto ident = inv->identities();
    ident[0] = *inv->morphism_index("s");
    auto broken =
        FinCat::from_parts(inv->objects(), inv->morphisms(), ident, inv->compose_entries());
    auto ds = validate_category(broken);
    REQUIRE_FALSE(ds.empty());
  }

  SECTION("associativity violation") {
    /* monoid on {id, s, t}: redefine s.s := t, keep everything else as in the
     * 3-element cyclic table, then poke one triple */
    CatRef c3 = FinCatBuilder()
                    .add_object("z")
                    .add_morphism("s", "z", "z")
                    .add_morphism("t", "z", "z")
                    .set_compose("s", "s", "t")
                    .set_compose("s", "t", "id_z")
                    .set_compose("t", "s", "id_z")
                    .set_compose("t", "t", "s")
                    .build();
    REQUIRE(validate_category(*c3).empty());
    auto broken = with_compose(c3, "t", "t", "t");
    REQUIRE(has_diag(validate_category(*broken), "AssociativityViolation"));
  }
}

TEST_CASE("canonical pullback over the terminal category is the product", "[fincat][pullback]") {
  CatRef two = walking_arrow();
  Pullback pb = canonical_pullback(bang(two), bang(two));
  CHECK(pb.cat->n_objects() == 4);
  CHECK(pb.cat->n_morphisms() == 9);
  CHECK(validate_category(*pb.cat).empty());
  CHECK(validate_functor(pb.p1).empty());
  CHECK(validate_functor(pb.p2).empty());
  CHECK(pb.cat->object_index("(0,1)").has_value());
  CHECK(pb.cat->morphism_index("(u,u)").has_value());
  /* identities of pair objects follow the id_<obj> convention */
  CHECK(pb.cat->morphism_index("id_(0,0)").has_value());
}

TEST_CASE("pullback along an identity is normalized away", "[fincat][pullback]") {
  CatRef g1 = walking_iso();
  Functor f = make_functor(walking_arrow(), g1, {{"0", "a"}, {"1", "b"}}, {{"u", "u"}});
  REQUIRE(validate_functor(f).empty());

  Pullback pb = canonical_pullback(f, identity_functor(g1));
  CHECK(*pb.cat == *walking_arrow());  // object-identifier equality, not just iso
  CHECK(is_identity_functor(pb.p1));
  CHECK(pb.p2 == f);

  Pullback pb2 = canonical_pullback(identity_functor(g1), f);
  CHECK(*pb2.cat == *walking_arrow());
  CHECK(is_identity_functor(pb2.p2));
}

TEST_CASE("is_pullback matches the verdict of the canonical construction", "[fincat][pullback]") {
  CatRef two = walking_arrow();
  CatRef iso = walking_iso();
  Functor f = make_functor(two, iso, {{"0", "a"}, {"1", "b"}}, {{"u", "u"}});
  Functor g = make_functor(two, iso, {{"0", "a"}, {"1", "b"}}, {{"u", "u"}});
  Pullback pb = canonical_pullback(f, g);

  SECTION("the canonical square passes") {
    auto rep = is_pullback({pb.p2, pb.p1, g, f});
    CHECK(rep.verdict);
    REQUIRE(rep.comparison);
    CHECK(is_identity_functor(*rep.comparison));
  }

  SECTION("an apex with a collapsed object fails with a counterexample") {
    /* use the terminal category as apex over the same cospan */
    Functor t1 = make_functor(terminal_category(), two, {{"*", "0"}}, {});
    auto rep = is_pullback({t1, t1, g, f});
    CHECK_FALSE(rep.verdict);
    CHECK(rep.counterexample.has_value());
  }

  SECTION("non-commuting squares are rejected up front") {
    Functor swap = make_functor(iso, iso, {{"a", "b"}, {"b", "a"}}, {{"u", "v"}, {"v", "u"}});
    REQUIRE(validate_functor(swap).empty());
    CHECK_THROWS_AS(is_pullback({pb.p2, pb.p1, g, compose_functors(swap, f)}), Error);
  }
}

TEST_CASE("is_pullback agrees with brute-force universal property probes",
          "[fincat][pullback][oracle]") {
  std::vector<CatRef> probes = {terminal_category(), walking_arrow(), discrete_pair(),
                                walking_iso(), walking_composable_pair()};
  std::vector<CatRef> shapes = {terminal_category(), walking_arrow()};

  int checked = 0;
  for (const CatRef& A : probes)
    for (const CatRef& B : probes)
      for (const CatRef& C : probes) {
        auto fs = oracle::enumerate_functors(B, A);
        auto gs = oracle::enumerate_functors(C, A);
        if (fs.size() > 4) fs.resize(4);  // keep the triple loop bounded
        if (gs.size() > 4) gs.resize(4);
        for (auto& f : fs)
          for (auto& g : gs) {
            Pullback pb = canonical_pullback(f, g);
            CommutingSquare sq{pb.p2, pb.p1, g, f};
            auto rep = is_pullback(sq);
            bool oracle_says = oracle::pullback_by_elements(sq);
            CAPTURE(A->n_objects(), B->n_objects(), C->n_objects());
            REQUIRE(rep.verdict == oracle_says);
            REQUIRE(rep.verdict);  // canonical squares must pass
            ++checked;
          }
      }
  CHECK(checked > 100);
}

TEST_CASE("canonical pullback has the cone universal property", "[fincat][pullback][oracle]") {
  CatRef two = walking_arrow();
  CatRef iso = walking_iso();
  std::vector<CatRef> shapes = {terminal_category(), walking_arrow(), involution()};

  Functor f = make_functor(two, iso, {{"0", "a"}, {"1", "b"}}, {{"u", "u"}});
  Functor g = bang(iso);
  Functor h = make_functor(iso, iso, {{"a", "a"}, {"b", "b"}},
                           {{"u", "u"}, {"v", "v"}});

  for (auto [ff, gg] : {std::pair{f, f}, std::pair{h, h}}) {
    Pullback pb = canonical_pullback(ff, gg);
    CHECK(oracle::pullback_by_cones({pb.p2, pb.p1, gg, ff}, shapes));
  }
  /* and a square that is not a pullback fails the cone probe */
  Pullback pb = canonical_pullback(f, f);
  Functor t1 = make_functor(terminal_category(), two, {{"*", "0"}}, {});
  CHECK_FALSE(oracle::pullback_by_cones({t1, t1, f, f}, shapes));
}

TEST_CASE("groupoid recognition", "[fincat]") {
  CHECK(is_groupoid(*walking_iso()));
  CHECK(is_groupoid(*discrete_pair()));
  CHECK(is_groupoid(*involution()));
  CHECK_FALSE(is_groupoid(*walking_arrow()));
  CHECK(groupoid_inverse(*walking_iso(), *walking_iso()->morphism_index("u")) ==
        *walking_iso()->morphism_index("v"));
}

TEST_CASE("cocartesian lifts", "[fincat][opfibration]") {
  SECTION("the unique functor to the terminal category is an opfibration") {
    CHECK(is_opfibration(bang(walking_arrow())));
    CHECK(is_opfibration(bang(walking_iso())));
  }

  SECTION("a constant functor has no lift of a non-identity arrow") {
    CatRef two = walking_arrow();
    Functor k = make_functor(discrete_pair(), two, {{"x", "0"}, {"y", "0"}}, {});
    CHECK_FALSE(is_opfibration(k));
    int u = *two->morphism_index("u");
    CHECK_THROWS_AS(cocartesian_lift(k, u, 0), Error);
    try {
      cocartesian_lift(k, u, 0);
    } catch (const Error& e) {
      CHECK(e.code == Errc::NoLift);
    }
  }

  SECTION("lift along an identity-on-objects iso picks the least identifier") {
    CatRef iso = walking_iso();
    Functor idf = identity_functor(iso);
    int u = *iso->morphism_index("u");
    CHECK(cocartesian_lift(idf, u, *iso->object_index("a")) == u);
  }
}

TEST_CASE("naturality checking", "[fincat][nat]") {
  CatRef two = walking_arrow();
  CatRef iso = walking_iso();
  Functor F = make_functor(two, iso, {{"0", "a"}, {"1", "b"}}, {{"u", "u"}});
  Functor G = make_functor(two, iso, {{"0", "b"}, {"1", "a"}}, {{"u", "v"}});

  NatTrans good{F, G, {*iso->morphism_index("u"), *iso->morphism_index("v")}};
  CHECK(check_naturality(good).empty());

  NatTrans bad{F, F, {*iso->morphism_index("id_a"), *iso->morphism_index("id_b")}};
  CHECK(check_naturality(bad).empty());  // identity transformation

  /* break a component's endpoints: flagged by validation, not naturality */
  NatTrans typo{F, G, {*iso->morphism_index("id_a"), *iso->morphism_index("v")}};
  CHECK_FALSE(check_naturality(typo).empty());
}

TEST_CASE("whiskering and functor composition", "[fincat][nat]") {
  CatRef two = walking_arrow();
  CatRef iso = walking_iso();
  Functor F = make_functor(two, iso, {{"0", "a"}, {"1", "b"}}, {{"u", "u"}});
  Functor G = make_functor(two, iso, {{"0", "b"}, {"1", "a"}}, {{"u", "v"}});
  Functor swap = make_functor(iso, iso, {{"a", "b"}, {"b", "a"}}, {{"u", "v"}, {"v", "u"}});

  NatTrans n{F, G, {*iso->morphism_index("u"), *iso->morphism_index("v")}};
  NatTrans wn = whisker_nat(swap, n);
  CHECK(check_naturality(wn).empty());
  CHECK(wn.source == compose_functors(swap, F));

  Functor inc = make_functor(terminal_category(), two, {{"*", "0"}}, {});
  NatTrans nw = whisker_nat(n, inc);
  CHECK(check_naturality(nw).empty());
  CHECK(nw.at.size() == 1);

  CHECK(compose_functors(identity_functor(iso), F) == F);
  CHECK(compose_functors(F, identity_functor(two)) == F);
}
