#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <numeric>

#include "clubkit/dblclubs.hpp"
#include "clubkit/probes.hpp"

using namespace clubkit;

namespace {

bool has_diag(const std::vector<Diagnostic>& ds, const std::string& code) {
  for (auto& d : ds)
    if (d.code == code) return true;
  return false;
}

template <class F>
Errc code_of(F&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code;
  }
  FAIL("expected an Error");
  return Errc::Internal;
}

/* collection from identifier tables; permutations default to identities */
Collection0 make_coll(const CatRef& base, const std::map<std::string, int>& arity,
                      const std::map<std::string, std::vector<int>>& perm = {}) {
  const FinCat& a = *base;
  Collection0 c{base, {}, {}};
  c.arity.resize(a.n_objects(), 0);
  for (auto& [id, n] : arity) c.arity[*a.object_index(id)] = n;
  c.perm.resize(a.n_morphisms());
  for (int m = 0; m < a.n_morphisms(); ++m) {
    c.perm[m].resize(c.arity[a.src(m)]);
    std::iota(c.perm[m].begin(), c.perm[m].end(), 0);
  }
  for (auto& [id, p] : perm) c.perm[*a.morphism_index(id)] = p;
  return c;
}

Collection0 cswap() { return make_coll(involution(), {{"z", 2}}, {{"s", {1, 0}}}); }

Profunctor single_pro() {
  return make_profunctor_ids(discrete_pair(), discrete_pair(), {{"p", "x", "y"}}, {}, {});
}

/* two proarrows over the involution, swapped by the right action of s */
Profunctor swap_module() {
  return make_profunctor_ids(terminal_category(), involution(),
                             {{"g1", "z", "*"}, {"g2", "z", "*"}}, {},
                             {{"g1", "s", "g2"}, {"g2", "s", "g1"}});
}

/* genuinely horizontal data: cswap over the swap module, arity 2 throughout */
CollectionH hswap() {
  return {make_coll(terminal_category(), {{"*", 2}}), cswap(), swap_module(),
          {{0, 1}, {1, 0}}};
}

bool hcoll_eq(const CollectionH& a, const CollectionH& b) {
  return a.src_coll == b.src_coll && a.tgt_coll == b.tgt_coll && a.base_pro == b.base_pro &&
         a.perm == b.perm;
}

bool all_pass(const std::vector<CheckResult>& cs) {
  for (auto& c : cs)
    if (!c.pass) return false;
  return !cs.empty();
}

const CheckResult* find_check(const std::vector<CheckResult>& cs, const std::string& name) {
  for (auto& c : cs)
    if (c.name == name) return &c;
  return nullptr;
}

}  // namespace

TEST_CASE("horizontal collections carry one table per proarrow", "[dblclubs]") {
  CHECK(validate_collection_h(hcoll_unit()).empty());
  CHECK(validate_collection_h(hcoll_identity(cswap())).empty());
  CHECK(validate_collection_h(hswap()).empty());

  SECTION("boundary breakage is reported against the boundary") {
    CollectionH h = hswap();
    h.src_coll.perm[0] = {0, 0};
    auto ds = validate_collection_h(h);
    REQUIRE(has_diag(ds, "NotAPermutation"));
    CHECK(ds.front().detail.rfind("source collection: ", 0) == 0);
  }
  SECTION("the base profunctor must run between the two bases") {
    CollectionH h{cswap(), cswap(), swap_module(), {{0, 1}, {1, 0}}};
    CHECK(has_diag(validate_collection_h(h), "EndpointMismatch"));
  }
  SECTION("one permutation per proarrow") {
    CollectionH h = hswap();
    h.perm.pop_back();
    CHECK(has_diag(validate_collection_h(h), "TableSize"));
  }
  SECTION("endpoint arities must agree") {
    CollectionH h = hswap();
    h.src_coll = make_coll(terminal_category(), {{"*", 1}});
    CHECK(has_diag(validate_collection_h(h), "ArityMismatch"));
  }
  SECTION("tables must be permutations") {
    CollectionH h = hswap();
    h.perm[0] = {0, 0};
    CHECK(has_diag(validate_collection_h(h), "NotAPermutation"));
  }
  SECTION("tables must intertwine the boundary actions") {
    CollectionH h = hswap();
    h.perm[1] = {0, 1};  // right action of s should swap
    auto ds = validate_collection_h(h);
    REQUIRE(has_diag(ds, "Equivariance"));
    CHECK(ds.front().detail.find("acted on by") != std::string::npos);
  }
}

TEST_CASE("theta lands in the point window as a cell", "[dblclubs]") {
  CollectionH h = hcoll_identity(cswap());
  SPro si1 = point_window({0, 1, 2});
  Cell th = theta_procell(h, si1);
  CHECK(validate_cell(th).empty());
  for (int g = 0; g < h.base_pro.n_pros(); ++g) CHECK(si1.pro_perm[th.on_pro[g]] == h.perm[g]);

  CHECK(code_of([&] { theta_procell(h, point_window({0, 1})); }) == Errc::ArityOverflow);
  SPro six = probe_window(single_pro(), {0, 1, 2});
  CHECK(code_of([&] { theta_procell(h, six); }) == Errc::MissingTerminalProbe);
  CHECK(code_of([&] { evaluate1(th, six); }) == Errc::MissingTerminalProbe);
}

TEST_CASE("reconstruction at the point reads back exactly", "[dblclubs]") {
  CollectionH h = hswap();
  SPro si1 = point_window({0, 1, 2});
  HCollComponent comp = reconstruct1(h, pro_identity(terminal_category()), si1, si1);

  CHECK(comp.at == h.base_pro);
  CHECK(is_identity_cell(comp.bang));
  CHECK(hcoll_eq(evaluate1(comp.alpha, comp.window), h));

  HCollFamily fam;
  fam.emplace("one", comp);
  CHECK(hcoll_eq(evaluate1(fam), h));

  SECTION("a family without a point component cannot be evaluated") {
    SPro six = probe_window(pro_identity(discrete_pair()), {0, 1, 2});
    HCollFamily off;
    off.emplace("pair", reconstruct1(hcoll_identity(cswap()), pro_identity(discrete_pair()),
                                     si1, six));
    CHECK(code_of([&] { evaluate1(off); }) == Errc::MissingTerminalProbe);
  }
  SECTION("the window must sit over the probe") {
    CHECK(code_of([&] { reconstruct1(h, pro_identity(discrete_pair()), si1, si1); }) ==
          Errc::MismatchedTarget);
  }
}

TEST_CASE("boundaries of a component are the functor-level components", "[dblclubs]") {
  CollectionH h = hcoll_identity(cswap());
  SPro si1 = point_window({0, 1, 2});
  SPro six = probe_window(pro_identity(discrete_pair()), {0, 1, 2});
  HCollComponent comp = reconstruct1(h, pro_identity(discrete_pair()), si1, six);

  ClubComponent bs = reconstruct0(h.src_coll, si1.s, six.s);
  ClubComponent bt = reconstruct0(h.tgt_coll, si1.t, six.t);
  CHECK(src_boundary(comp).bang == bs.bang);
  CHECK(src_boundary(comp).alpha == bs.alpha);
  CHECK(tgt_boundary(comp).bang == bt.bang);
  CHECK(tgt_boundary(comp).alpha == bt.alpha);
}

TEST_CASE("the unit component at a probe is the probe itself", "[dblclubs]") {
  Profunctor X = single_pro();
  SPro si1 = point_window({0, 1});
  SPro sx = probe_window(X, {0, 1});

  Cell th = theta_procell(hcoll_unit(), si1);
  Cell sh = S_cell(bang_cell(X), sx, si1);
  ProPullback pb = pullback_pro(th, sh);
  CHECK(pb.pro.n_pros() == X.n_pros());

  Cell j = induced_pro_cell(bang_cell(X), eta_pro(X, sx), pb);
  CHECK(validate_cell(j).empty());
  CHECK(cell_bijective(j));
}

TEST_CASE("component size scales with the fiber", "[dblclubs]") {
  SPro si1 = point_window({0, 1, 2});

  // one base proarrow of arity 2, two parallel probe proarrows: 2^2 pairs
  Collection0 c2 = make_coll(terminal_category(), {{"*", 2}});
  Profunctor p2 = make_profunctor_ids(terminal_category(), terminal_category(),
                                      {{"p", "*", "*"}, {"q", "*", "*"}}, {}, {});
  HCollComponent comp =
      reconstruct1(hcoll_identity(c2), p2, si1, probe_window(p2, {0, 1, 2}));
  CHECK(comp.at.n_pros() == 4);

  // two base proarrows over a single probe proarrow: one list each
  HCollComponent swc = reconstruct1(hswap(), single_pro(), si1, probe_window(single_pro(), {0, 1, 2}));
  CHECK(swc.at.n_pros() == 2);
}

TEST_CASE("a collection acts the way its horizontal identity reconstructs", "[dblclubs]") {
  Collection0 c = cswap();
  Profunctor X = swap_module();
  SPro si1 = point_window({0, 1, 2});
  SPro sx = probe_window(X, {0, 1, 2});

  HCollComponent a = collection_action(c, X, si1, sx);
  HCollComponent r = reconstruct1(hcoll_identity(c), X, si1, sx);
  CHECK(a.at == r.at);
  CHECK(a.bang == r.bang);
  CHECK(a.alpha == r.alpha);
}

TEST_CASE("the action swaps past reconstruction invertibly", "[dblclubs]") {
  SECTION("unit collection, single proarrow") {
    PseudoNat pn = pseudonaturality(hcoll_unit(), single_pro(), {0, 1});
    CHECK(validate_cell(pn.cell).empty());
    CHECK(cell_bijective(pn.cell));
    CHECK(pn.cell.source == pn.lhs.pro);
    CHECK(pn.cell.target == pn.rhs.pro);
    CHECK(pn.lhs.pro.n_pros() == 1);
  }
  SECTION("swap collection over the identity probe") {
    PseudoNat pn = pseudonaturality(hcoll_identity(cswap()), pro_identity(discrete_pair()), {0, 1});
    CHECK(validate_cell(pn.cell).empty());
    CHECK(cell_bijective(pn.cell));
  }
  SECTION("horizontal data over its own module") {
    PseudoNat pn = pseudonaturality(hswap(), single_pro(), {0, 1});
    CHECK(validate_cell(pn.cell).empty());
    CHECK(cell_bijective(pn.cell));
  }
  SECTION("the comparison is natural in the probe") {
    CollectionH h = hcoll_identity(cswap());
    Profunctor X = pro_identity(discrete_pair());
    Functor sw = make_functor(discrete_pair(), discrete_pair(), {{"x", "y"}, {"y", "x"}}, {});
    Cell c = pro_identity_cell(sw);

    PseudoNat px = pseudonaturality(h, X, {0, 1});
    PseudoNat py = pseudonaturality(h, X, {0, 1});
    Cell map_l = tensor_cells(reconstruct1_on_cell(c, px.t_act, py.t_act),
                              reconstruct1_on_cell(pro_identity_cell(c.vsrc), px.at_src, py.at_src),
                              px.lhs, py.lhs);
    Cell map_r = tensor_cells(reconstruct1_on_cell(pro_identity_cell(c.vtgt), px.at_tgt, py.at_tgt),
                              reconstruct1_on_cell(c, px.s_act, py.s_act), px.rhs, py.rhs);
    CHECK(compose_cells(py.cell, map_l) == compose_cells(map_r, px.cell));
  }
  SECTION("interchange of two plain collections") {
    PseudoNat pn = interchange(club_unit(), cswap(), pro_identity(discrete_pair()), {0, 1});
    CHECK(cell_bijective(pn.cell));
  }
}

TEST_CASE("identity profunctor squares keep their pullbacks", "[dblclubs]") {
  Functor idp{discrete_pair(), discrete_pair(), {0, 1}, {0, 1}};
  Functor f = bang(discrete_pair());
  Functor g = bang(walking_arrow());
  Pullback pb = canonical_pullback(f, g);

  std::vector<CommutingSquare> sqs = {
      {pb.p2, pb.p1, g, f},                                // a canonical pullback
      {f, idp, identity_functor(terminal_category()), f},  // identity pulled back along f
      {idp, idp, f, f},                                    // commutes, apex too small
  };
  // the third square would need one corner per pair of objects
  std::vector<bool> want = {true, true, false};
  for (std::size_t i = 0; i < sqs.size(); ++i) {
    CHECK(is_pullback(sqs[i]).verdict == want[i]);
    CHECK(hps2_check(sqs[i]).verdict == want[i]);
  }
}

TEST_CASE("tensored pullback squares and the explicit inverse", "[dblclubs]") {
  SECTION("identity squares over the point") {
    Cell ic = identity_cell(pro_identity(terminal_category()));
    HpsInstance inst{{ic, ic, ic, ic}, {ic, ic, ic, ic}};
    CHECK(validate_hps_instance(inst).empty());
    CHECK(hps1_check(inst).verdict);
    HpsInverse inv = hps_inverse(inst);
    CHECK(cell_bijective(inv.u));
    CHECK(inv.v_after_u);
    CHECK(inv.u_after_v);
  }
  SECTION("squares built from the list construction") {
    CollectionH h = hcoll_identity(cswap());
    SPro si1 = point_window({0, 1, 2});
    Profunctor X = pro_identity(discrete_pair());
    SCat sxc = S_cat(discrete_pair(), {0, 1, 2});
    SPro six = S_pro(X, sxc, sxc);
    HCollComponent comp = reconstruct1(h, X, si1, six);

    Cell eb = invert_cell(e_comp(si1.s, si1));
    Cell rleg = compose_cells(eb, theta_procell(h, si1));
    Cell bleg = compose_cells(eb, S_cell(bang_cell(X), six, si1));
    CellSquare sq{comp.bang, comp.alpha, rleg, bleg};
    HpsInstance inst{sq, sq};

    CHECK(validate_hps_instance(inst).empty());
    CHECK(hps1_check(inst).verdict);
    HpsInverse inv = hps_inverse(inst);
    CHECK(cell_bijective(inv.u));
    CHECK(inv.v_after_u);
    CHECK(inv.u_after_v);
  }
  SECTION("a strictly smaller apex is detected") {
    Profunctor empty = make_profunctor_ids(terminal_category(), terminal_category(), {}, {}, {});
    Cell ec{empty, pro_identity(terminal_category()), bang(terminal_category()),
            bang(terminal_category()), {}};
    Cell ic = identity_cell(pro_identity(terminal_category()));
    HpsInstance inst{{ec, ec, ic, ic}, {ec, ec, ic, ic}};
    ComparisonReport r = hps1_check(inst);
    CHECK_FALSE(r.verdict);
    CHECK(r.counterexample.has_value());
    CHECK(code_of([&] { hps_inverse(inst); }) == Errc::HypothesisFailed);
  }
  SECTION("lifting needs an opfibration") {
    Functor f2 = make_functor(terminal_category(), walking_iso(), {{"*", "a"}}, {});
    Cell fc = pro_identity_cell(f2);
    Cell ic = identity_cell(pro_identity(terminal_category()));
    HpsInstance inst{{ic, ic, fc, fc}, {ic, ic, fc, fc}};
    CHECK(code_of([&] { hps_inverse(inst); }) == Errc::HypothesisFailed);
  }
  SECTION("lifting needs a groupoid base") {
    Cell ic = identity_cell(pro_identity(walking_arrow()));
    HpsInstance inst{{ic, ic, ic, ic}, {ic, ic, ic, ic}};
    CHECK(code_of([&] { hps_inverse(inst); }) == Errc::HypothesisFailed);
  }
}

TEST_CASE("tensor of horizontal collections", "[dblclubs]") {
  std::vector<std::pair<std::string, CatRef>> probes = {{"one", terminal_category()},
                                                        {"pair", discrete_pair()}};
  SECTION("unit over unit") {
    HCollTensor t = hcoll_tensor(hcoll_unit(), hcoll_unit(), probes, {0, 1});
    CHECK(all_pass(t.checks));
    CHECK(validate_collection_h(t.coll).empty());
    CHECK(t.coll.src_coll == club_unit());
    REQUIRE(t.coll.perm.size() == 1);
    CHECK(t.coll.perm[0] == std::vector<int>{0});
  }
  SECTION("swap over unit") {
    std::vector<std::pair<std::string, CatRef>> ps = probes;
    ps.emplace_back("loop", involution());
    HCollTensor t = hcoll_tensor(hcoll_identity(cswap()), hcoll_unit(), ps, {0, 1});
    CHECK(all_pass(t.checks));
    CHECK(validate_collection_h(t.coll).empty());
    CHECK(t.coll.src_coll == cswap());
    CHECK(t.coll.src_coll == club_tensor(cswap(), club_unit()).coll);
    CHECK(t.coll.base_pro.n_pros() == 2);
  }
  SECTION("unit over swap") {
    HCollTensor t = hcoll_tensor(hcoll_unit(), hcoll_identity(cswap()), probes, {0, 1});
    CHECK(all_pass(t.checks));
    CHECK(t.coll.src_coll == club_tensor(club_unit(), cswap()).coll);

    // composing with the unit must not change the component size
    SPro si1 = point_window(composite_arities(hcoll_unit(), hcoll_identity(cswap()), {0, 1}));
    auto it = t.at.find("pair");
    REQUIRE(it != t.at.end());
    HCollComponent direct =
        reconstruct1(hcoll_identity(cswap()), pro_identity(discrete_pair()), si1,
                     it->second.w().six);
    CHECK(it->second.comp.pro.n_pros() == direct.at.n_pros());
  }
  SECTION("mixed arities over the swap") {
    // arity 1 at x, arity 0 at y; keeps the flattened window inside {0,1,2}
    Collection0 cpair = make_coll(discrete_pair(), {{"x", 1}, {"y", 0}});
    HCollTensor t = hcoll_tensor(hcoll_identity(cpair), hcoll_identity(cswap()), probes, {0, 1});
    CHECK(all_pass(t.checks));
    CHECK(t.coll.src_coll == club_tensor(cpair, cswap()).coll);
  }
  SECTION("a corrupted assignment is reported, not thrown") {
    // breaking equivariance of the tables shows up as a non-constant tensor
    // over the point component, never as an exception
    CollectionH bad = hcoll_identity(cswap());
    bad.perm[*involution()->morphism_index("s")] = {0, 1};
    std::vector<std::pair<std::string, CatRef>> ps = {{"one", terminal_category()},
                                                      {"loop", involution()}};
    HCollTensor t = hcoll_tensor(bad, hcoll_unit(), ps, {0, 1});
    REQUIRE(t.checks.size() == 1);
    CHECK(t.checks[0].name == "setup");
    CHECK_FALSE(t.checks[0].pass);
    CHECK(t.checks[0].detail.find("not constant") != std::string::npos);
  }
}

TEST_CASE("whiskering a plain collection onto horizontal data", "[dblclubs]") {
  std::vector<std::pair<std::string, CatRef>> probes = {{"one", terminal_category()},
                                                        {"pair", discrete_pair()}};
  SECTION("swap collection whiskers the unit") {
    WhiskerResult wr = whisker_collection(cswap(), hcoll_unit(), probes, {0, 1});
    CHECK(all_pass(wr.checks));
    REQUIRE(find_check(wr.checks, "two-path/pair") != nullptr);
    REQUIRE(find_check(wr.checks, "lambda-map/pair") != nullptr);
    REQUIRE(find_check(wr.checks, "direct-square/pair") != nullptr);
    CHECK(validate_collection_h(wr.coll).empty());
  }
  SECTION("unit whiskers genuinely horizontal data") {
    WhiskerResult wr = whisker_collection(club_unit(), hswap(), probes, {0, 1});
    CHECK(all_pass(wr.checks));
    CHECK(wr.coll.perm == hswap().perm);
    CHECK(wr.coll.base_pro.n_pros() == 2);
  }
  SECTION("a broken collection is reported per probe") {
    Collection0 bad = cswap();
    bad.perm[*involution()->morphism_index("s")] = {0, 0};
    WhiskerResult wr = whisker_collection(bad, hcoll_unit(), probes, {0, 1});
    REQUIRE(find_check(wr.checks, "setup") != nullptr);
    CHECK_FALSE(find_check(wr.checks, "setup")->pass);
    const CheckResult* p1 = find_check(wr.checks, "probe/one");
    const CheckResult* p2 = find_check(wr.checks, "probe/pair");
    REQUIRE(p1 != nullptr);
    REQUIRE(p2 != nullptr);
    CHECK_FALSE(p1->pass);
    CHECK_FALSE(p2->pass);
    for (auto& c : wr.checks) CHECK_FALSE(c.pass);
  }
}

TEST_CASE("universe bookkeeping recomputes its closures", "[dblclubs]") {
  ProbeUniverse u;
  u.cats.emplace("one", terminal_category());
  u.cats.emplace("pair", discrete_pair());
  Functor sw = make_functor(discrete_pair(), discrete_pair(), {{"x", "y"}, {"y", "x"}}, {});
  u.functors.emplace("swap", sw);
  u.functors.emplace("swap2", compose_functors(sw, sw));
  u.pros.emplace("ipair", pro_identity(discrete_pair()));
  u.pros.emplace("ii", pro_compose(pro_identity(discrete_pair()), pro_identity(discrete_pair())).pro);
  u.cells.emplace("iswap", pro_identity_cell(sw));
  u.closures["swap2"] = {"swap", "swap"};
  u.closures["ipair"] = {"pair"};
  u.closures["ii"] = {"ipair", "ipair"};
  u.closures["iswap"] = {"swap"};
  CHECK(validate_universe(u).empty());

  SECTION("members must stay inside the universe") {
    ProbeUniverse v = u;
    v.functors.emplace("out", bang(walking_arrow()));
    CHECK(has_diag(validate_universe(v), "UnresolvedReference"));
  }
  SECTION("recorded composites are recomputed") {
    ProbeUniverse v = u;
    v.pros.find("ii")->second = pro_identity(discrete_pair());
    CHECK(has_diag(validate_universe(v), "DishonestClosure"));
  }
  SECTION("a closure may not dangle") {
    ProbeUniverse v = u;
    v.closures["nothing"] = {"swap"};
    CHECK(has_diag(validate_universe(v), "UnresolvedReference"));
  }
}
