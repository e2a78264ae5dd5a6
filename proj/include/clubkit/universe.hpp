#pragma once

/* Named probe universes.  A universe is the working set a suite runs over:
 * categories, functors between them, profunctors, cells, and the closure
 * bookkeeping that records which members are composites of which.
 *
 * The built-in universe is small on purpose: the point, the walking arrow,
 * the discrete pair, and the walking isomorphism, with one step profunctor
 * and the identity profunctors it takes to exercise composition.  Loading a
 * directory overlays its documents onto the built-ins by name, so an empty
 * directory behaves exactly like passing no directory at all.  Overriding a
 * built-in name is allowed; if the replacement breaks a member that referred
 * to the old value, validation reports it rather than guessing.
 */

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "clubkit/dblclubs.hpp"
#include "clubkit/serialize.hpp"

namespace clubkit {

inline ProbeUniverse default_universe() {
  ProbeUniverse u;
  u.cats["one"] = terminal_category();
  u.cats["two"] = walking_arrow();
  u.cats["pair"] = discrete_pair();
  u.cats["iso"] = walking_iso();

  u.functors["swap"] =
      make_functor(u.cats["pair"], u.cats["pair"], {{"x", "y"}, {"y", "x"}}, {});
  u.functors["flip"] = make_functor(u.cats["iso"], u.cats["iso"], {{"a", "b"}, {"b", "a"}},
                                    {{"u", "v"}, {"v", "u"}});
  u.functors["point-a"] = make_functor(u.cats["one"], u.cats["iso"], {{"*", "a"}}, {});

  u.pros["step"] = make_profunctor_ids(u.cats["pair"], u.cats["pair"], {{"p0", "x", "y"}}, {}, {});
  u.pros["ipair"] = pro_identity(u.cats["pair"]);
  u.pros["ione"] = pro_identity(u.cats["one"]);

  u.cells["iswap"] = pro_identity_cell(u.functors["swap"]);

  u.closures["ipair"] = {"pair"};
  u.closures["ione"] = {"one"};
  u.closures["iswap"] = {"swap"};
  return u;
}

/// Tables as a functor into the list skeleton, by identifier.  Objects whose
/// arity is unmapped default to 0, morphisms without an entry to the identity
/// permutation of their source arity.
inline Collection0 collection_of(const CatRef& base, const std::map<std::string, int>& arity,
                                 const std::map<std::string, std::vector<int>>& perm) {
  Collection0 c{base, {}, {}};
  c.arity.assign(base->n_objects(), 0);
  for (const auto& [k, v] : arity) {
    auto o = base->object_index(k);
    if (!o) fail(Errc::UnresolvedReference, "object " + k);
    c.arity[*o] = v;
  }
  c.perm.resize(base->n_morphisms());
  for (int m = 0; m < base->n_morphisms(); ++m) {
    c.perm[m].resize(c.arity[base->src(m)]);
    for (std::size_t i = 0; i < c.perm[m].size(); ++i) c.perm[m][i] = static_cast<int>(i);
  }
  for (const auto& [k, v] : perm) {
    auto m = base->morphism_index(k);
    if (!m) fail(Errc::UnresolvedReference, "morphism " + k);
    c.perm[*m] = v;
  }
  return c;
}

inline std::map<std::string, Collection0> default_collections() {
  std::map<std::string, Collection0> m;
  m["unit"] = club_unit();
  m["one-0"] = collection_of(terminal_category(), {{"*", 0}}, {});
  m["one-3"] = collection_of(terminal_category(), {{"*", 3}}, {});
  m["pair-10"] = collection_of(discrete_pair(), {{"x", 1}, {"y", 0}}, {});
  m["pair-22"] = collection_of(discrete_pair(), {{"x", 2}, {"y", 2}}, {});
  m["arrow-id"] = collection_of(walking_arrow(), {{"0", 2}, {"1", 2}}, {});
  m["arrow-swap"] = collection_of(walking_arrow(), {{"0", 2}, {"1", 2}}, {{"u", {1, 0}}});
  m["loop-id"] = collection_of(involution(), {{"z", 2}}, {});
  m["loop-swap"] = collection_of(involution(), {{"z", 2}}, {{"s", {1, 0}}});
  m["iso-swap"] =
      collection_of(walking_iso(), {{"a", 2}, {"b", 2}}, {{"u", {1, 0}}, {"v", {1, 0}}});
  return m;
}

/// Horizontal data to drive the profunctor-level suites: the identities of a
/// few plain collections plus one with a genuinely non-identity module.
inline std::map<std::string, CollectionH> default_hcollections() {
  std::map<std::string, CollectionH> m;
  auto colls = default_collections();
  m["unit"] = hcoll_unit();
  m["loop"] = hcoll_identity(colls.at("loop-swap"));
  m["pair10"] = hcoll_identity(colls.at("pair-10"));
  Profunctor module = make_profunctor_ids(terminal_category(), involution(),
                                          {{"g1", "z", "*"}, {"g2", "z", "*"}}, {},
                                          {{"g1", "s", "g2"}, {"g2", "s", "g1"}});
  m["twist"] = CollectionH{collection_of(terminal_category(), {{"*", 2}}, {}),
                           colls.at("loop-swap"), std::move(module), {{0, 1}, {1, 0}}};
  return m;
}

/* ---------------------------------------------------------------- loading */

inline Json read_json_file(const std::filesystem::path& p) {
  std::ifstream f(p);
  if (!f) fail(Errc::ParseError, p.string() + ": cannot open");
  try {
    return Json::parse(f);
  } catch (const Json::exception& e) {
    fail(Errc::ParseError, p.string() + ": " + e.what());
  }
}

namespace detail {

inline std::vector<std::pair<std::string, Json>> read_documents(const std::string& path) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(path)) fail(Errc::ParseError, path + ": not a directory");
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(path))
    if (e.path().extension() == ".json") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  std::vector<std::pair<std::string, Json>> docs;
  for (const auto& p : files) docs.emplace_back(p.stem().string(), read_json_file(p));
  return docs;
}

}  // namespace detail

/// Built-ins overlaid with one directory of documents.  Document kind is read
/// off the fields, names come from the file stems, and members may reference
/// each other freely: categories resolve first, then functors and
/// profunctors, then cells.  The result is validated before it is returned.
inline ProbeUniverse load_universe(const std::string& path = "") {
  ProbeUniverse u = default_universe();
  if (path.empty()) return u;

  auto docs = detail::read_documents(path);
  for (const auto& [name, doc] : docs)
    if (doc.contains("objects")) u.cats[name] = cat_from_json(doc, name);
  for (const auto& [name, doc] : docs) {
    if (doc.contains("on_objects"))
      u.functors[name] = functor_from_json(doc, u.cats, name);
    else if (doc.contains("proarrows"))
      u.pros[name] = pro_from_json(doc, u.cats, name);
  }
  for (const auto& [name, doc] : docs)
    if (doc.contains("on_pro")) u.cells[name] = cell_from_json(doc, u.cats, u.functors, u.pros, name);
  for (const auto& [name, doc] : docs) {
    if (doc.contains("closures"))
      for (const auto& [k, v] : doc["closures"].items())
        u.closures[k] = v.get<std::vector<std::string>>();
  }
  for (const auto& [name, doc] : docs)
    if (!doc.contains("objects") && !doc.contains("on_objects") && !doc.contains("proarrows") &&
        !doc.contains("on_pro") && !doc.contains("closures") && !doc.contains("arity"))
      fail(Errc::ParseError, name + ": unrecognized document kind");

  std::vector<Diagnostic> ds = validate_universe(u);
  if (!ds.empty()) {
    const Diagnostic& d = ds.front();
    if (d.code == "UnresolvedReference") fail(Errc::UnresolvedReference, d.detail);
    fail(Errc::ParseError, d.code + ": " + d.detail);
  }
  return u;
}

/// Collection documents from the same directory, overlaid onto the defaults.
inline std::map<std::string, Collection0> load_collections(const std::string& path = "") {
  std::map<std::string, Collection0> m = default_collections();
  if (path.empty()) return m;
  for (const auto& [name, doc] : detail::read_documents(path))
    if (doc.contains("arity")) m[name] = collection_from_json(doc, name);
  return m;
}

}  // namespace clubkit
