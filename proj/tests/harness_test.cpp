#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "clubkit/suites.hpp"

using namespace clubkit;

namespace {

template <class F>
Errc code_of(F&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code;
  }
  FAIL("expected a failure");
  return Errc::Internal;
}

/// Scratch directory that cleans up after itself.
struct TempDir {
  std::filesystem::path path;
  TempDir() {
    path = std::filesystem::temp_directory_path() /
           ("clubkit-test-" + std::to_string(::getpid()) + "-" +
            std::to_string(counter()++));
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
  void put(const std::string& name, const Json& doc) const {
    std::ofstream f(path / name);
    f << doc.dump(2);
  }
  static int& counter() {
    static int n = 0;
    return n;
  }
};

int count_fails(const Report& r) {
  int n = 0;
  for (const auto& c : r.checks) n += c.pass ? 0 : 1;
  return n;
}

const CheckRecord* find_check(const Report& r, const std::string& name) {
  for (const auto& c : r.checks)
    if (c.name == name) return &c;
  return nullptr;
}

}  // namespace

TEST_CASE("category documents round trip", "[harness]") {
  CatRef iso = walking_iso();
  Json doc = cat_to_json(*iso);
  CHECK(doc["objects"].size() == 2);
  CHECK(doc["morphisms"].size() == 2);  // identities are implicit
  CatRef back = cat_from_json(doc, "iso");
  CHECK(tables_equal(*back, *iso));
  CHECK(cat_to_json(*back).dump() == doc.dump());

  SECTION("missing fields name the document") {
    Json broken = doc;
    broken.erase("compose");
    try {
      cat_from_json(broken, "iso");
      FAIL("expected a failure");
    } catch (const Error& e) {
      CHECK(e.code == Errc::ParseError);
      CHECK(std::string(e.what()).find("iso") != std::string::npos);
    }
  }
  SECTION("dangling identifiers are parse errors") {
    Json broken = doc;
    broken["compose"].push_back({"u", "ghost", "id_a"});
    CHECK(code_of([&] { cat_from_json(broken, "iso"); }) == Errc::ParseError);
  }
}

TEST_CASE("functor and profunctor documents resolve by name", "[harness]") {
  ProbeUniverse u = default_universe();

  Json fdoc = functor_to_json(u.functors.at("swap"), "pair", "pair");
  Functor swap = functor_from_json(fdoc, u.cats, "swap");
  CHECK(swap == u.functors.at("swap"));
  CHECK(functor_to_json(swap, "pair", "pair").dump() == fdoc.dump());

  Json missing = fdoc;
  missing["target"] = "ghost";
  CHECK(code_of([&] { functor_from_json(missing, u.cats, "swap"); }) ==
        Errc::UnresolvedReference);

  Profunctor module = make_profunctor_ids(terminal_category(), involution(),
                                          {{"g1", "z", "*"}, {"g2", "z", "*"}}, {},
                                          {{"g1", "s", "g2"}, {"g2", "s", "g1"}});
  std::map<std::string, CatRef> cats = {{"one", terminal_category()}, {"loop", involution()}};
  Json pdoc = pro_to_json(module, "one", "loop");
  CHECK(pro_from_json(pdoc, cats, "module") == module);
  CHECK(pro_to_json(pro_from_json(pdoc, cats, "module"), "one", "loop").dump() == pdoc.dump());

  Json cdoc = cell_to_json(u.cells.at("iswap"), "ipair", "ipair", "swap", "swap");
  Cell back = cell_from_json(cdoc, u.cats, u.functors, u.pros, "iswap");
  CHECK(back == u.cells.at("iswap"));
  CHECK(validate_cell(back).empty());

  Json idref = cdoc;
  idref["vsrc"] = "id:pair";
  Cell wrong = cell_from_json(idref, u.cats, u.functors, u.pros, "iswap");
  CHECK_FALSE(validate_cell(wrong).empty());  // resolves, but no longer a cell
}

TEST_CASE("collection documents are self contained", "[harness]") {
  Collection0 c = default_collections().at("loop-swap");
  Json doc = collection_to_json(c);
  CHECK(collection_from_json(doc, "loop-swap") == c);
  CHECK(collection_to_json(collection_from_json(doc, "loop-swap")).dump() == doc.dump());

  Json broken = doc;
  broken["perm"].erase("s");
  CHECK(code_of([&] { collection_from_json(broken, "loop-swap"); }) == Errc::ParseError);
}

TEST_CASE("the built-in universe is ready to use", "[harness]") {
  ProbeUniverse u = default_universe();
  CHECK(u.cats.size() == 4);
  CHECK(u.pros.size() == 3);
  CHECK(validate_universe(u).empty());
  CHECK(default_collections().size() == 10);

  SECTION("an empty directory adds nothing") {
    TempDir dir;
    ProbeUniverse v = load_universe(dir.path.string());
    CHECK(v.cats.size() == 4);
    CHECK(v.pros.size() == 3);
    CHECK(v.functors.size() == u.functors.size());
  }
  SECTION("documents overlay the built-ins") {
    TempDir dir;
    dir.put("loop.json", cat_to_json(*involution()));
    dir.put("noop.json", functor_to_json(identity_functor(involution()), "loop", "loop"));
    dir.put("spin.json", collection_to_json(default_collections().at("loop-swap")));
    ProbeUniverse v = load_universe(dir.path.string());
    CHECK(v.cats.size() == 5);
    CHECK(v.functors.count("noop") == 1);
    CHECK(same_cat(v.functors.at("noop").source, involution()));
    CHECK(load_collections(dir.path.string()).count("spin") == 1);
  }
  SECTION("a dangling reference names itself") {
    TempDir dir;
    dir.put("broken.json", Json{{"source", "ghost"},
                                {"target", "one"},
                                {"on_objects", Json::object()},
                                {"on_morphisms", Json::object()}});
    try {
      load_universe(dir.path.string());
      FAIL("expected a failure");
    } catch (const Error& e) {
      CHECK(e.code == Errc::UnresolvedReference);
      CHECK(std::string(e.what()).find("ghost") != std::string::npos);
    }
  }
  SECTION("malformed json names the file") {
    TempDir dir;
    {
      std::ofstream f(dir.path / "bad.json");
      f << "{ not json";
    }
    try {
      load_universe(dir.path.string());
      FAIL("expected a failure");
    } catch (const Error& e) {
      CHECK(e.code == Errc::ParseError);
      CHECK(std::string(e.what()).find("bad.json") != std::string::npos);
    }
  }
  SECTION("a dishonest closure is refused") {
    TempDir dir;
    Json closures = {{"closures", {{"step", Json::array({"pair"})}}}};
    dir.put("claims.json", closures);
    CHECK(code_of([&] { load_universe(dir.path.string()); }) == Errc::ParseError);
  }
}

TEST_CASE("category-laws validators pass and every mutation is caught", "[harness]") {
  SuiteConfig cfg;
  cfg.suites = {"category-laws"};
  Report r = run_suite(cfg);
  CHECK(r.all_pass());

  int fuzz_lines = 0;
  for (const auto& c : r.checks)
    if (c.name.rfind("fuzz/", 0) == 0) {
      ++fuzz_lines;
      CHECK(c.detail.find("detected") != std::string::npos);
    }
  CHECK(fuzz_lines == 6);

  SECTION("same seed, same bytes") {
    Report again = run_suite(cfg);
    CHECK(again.to_json().dump() == r.to_json().dump());
  }
  SECTION("another seed still catches everything") {
    cfg.seed = 20250815;
    CHECK(run_suite(cfg).all_pass());
  }
  SECTION("an injected broken table is exactly one named failure") {
    cfg.inject = "tables";
    Report bad = run_suite(cfg);
    CHECK(count_fails(bad) == 1);
    const CheckRecord* c = find_check(bad, "tables/injected");
    REQUIRE(c != nullptr);
    CHECK_FALSE(c->pass);
    CHECK_FALSE(c->detail.empty());
  }
}

TEST_CASE("profunctor-coherence over the built-ins", "[harness]") {
  SuiteConfig cfg;
  cfg.suites = {"profunctor-coherence"};
  Report r = run_suite(cfg);
  CHECK(r.all_pass());
  CHECK(find_check(r, "unitor-left/step") != nullptr);
  CHECK(find_check(r, "associator/ipair|ipair|ipair") != nullptr);
}

TEST_CASE("hps suite over the built-ins", "[harness]") {
  SuiteConfig cfg;
  cfg.suites = {"hps"};
  Report r = run_suite(cfg);
  CHECK(r.all_pass());

  SECTION("one corrupted square is one named failure") {
    cfg.inject = "hps";
    Report bad = run_suite(cfg);
    CHECK(count_fails(bad) == 1);
    const CheckRecord* c = find_check(bad, "hps1/injected");
    REQUIRE(c != nullptr);
    CHECK_FALSE(c->pass);
    CHECK_FALSE(c->detail.empty());
  }
}

TEST_CASE("roundtrip suite over the built-ins", "[harness]") {
  SuiteConfig cfg;
  cfg.suites = {"roundtrip"};
  Report r = run_suite(cfg);
  CHECK(r.all_pass());
  int roundtrip0 = 0;
  for (const auto& c : r.checks)
    if (c.name.rfind("roundtrip0/", 0) == 0) ++roundtrip0;
  CHECK(roundtrip0 >= 10);
}

TEST_CASE("clubalt suite over the built-ins", "[harness]") {
  SuiteConfig cfg;
  cfg.suites = {"clubalt"};
  Report r = run_suite(cfg);
  CHECK(r.all_pass());
  CHECK(find_check(r, "monad-assoc/iso") != nullptr);
}

TEST_CASE("altclubdesc suite over the built-ins", "[harness]") {
  SuiteConfig cfg;
  cfg.suites = {"altclubdesc"};
  Report r = run_suite(cfg);
  CHECK(r.all_pass());
}

TEST_CASE("report renderings", "[harness]") {
  Report r;
  r.checks.push_back({"demo", "first", "fincat/validate_category", true, "", 1.25});
  r.checks.push_back({"demo", "second", "clubs/clubalt_suite", false, "it broke", 0.5});
  CHECK(r.n_pass() == 1);
  CHECK(r.n_fail() == 1);
  CHECK_FALSE(r.all_pass());

  std::string text = r.to_text();
  CHECK(text.find("ok   demo/first") != std::string::npos);
  CHECK(text.find("FAIL demo/second") != std::string::npos);
  CHECK(text.find("it broke") != std::string::npos);
  CHECK(text.find("ms") != std::string::npos);

  Json j = r.to_json();
  CHECK(j["summary"]["failed"] == 1);
  CHECK(j["checks"][0].count("counterexample") == 0);
  CHECK(j["checks"][1]["counterexample"] == "it broke");
  CHECK(j.dump().find("elapsed") == std::string::npos);

  SuiteConfig cfg;
  cfg.suites = {"ghost-suite"};
  CHECK(code_of([&] { run_suite(cfg); }) == Errc::ParseError);
}
