#include "bpcube/json_io.hpp"

#include <json.hpp>
#include <map>

namespace bpcube {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string pair_key(const SiteCat& cat, int w, int v) {
  return to_string(cat.cube(w)) + "->" + to_string(cat.cube(v));
}

// name -> index for one level's cell list; duplicate names cannot be
// addressed by a name-keyed table, so refuse them.
std::map<std::string, int> name_index(const std::vector<std::string>& names,
                                      const std::string& where) {
  std::map<std::string, int> out;
  for (int i = 0; i < (int)names.size(); ++i)
    if (!out.emplace(names[i], i).second)
      throw parse_error("duplicate cell name '" + names[i] + "' " + where);
  return out;
}

ordered_json parse_document(const std::string& text) {
  ordered_json j = ordered_json::parse(text, nullptr, false);
  if (j.is_discarded()) throw parse_error("malformed JSON document");
  if (!j.is_object()) throw parse_error("the top level must be an object");
  return j;
}

Site site_of(const ordered_json& j) {
  if (!j.contains("site") || !j["site"].is_string())
    throw parse_error("missing or non-string field 'site'");
  const std::string s = j["site"].get<std::string>();
  if (s == "BPCube") return Site::BPCube;
  if (s == "Cube") return Site::Cube;
  throw parse_error("unknown site '" + s + "' (expected 'BPCube' or 'Cube')");
}

int dim_of(const ordered_json& j) {
  if (!j.contains("D") || !j["D"].is_number_integer())
    throw parse_error("missing or non-integer field 'D'");
  const int d = j["D"].get<int>();
  if (d < 0 || d > 4) throw parse_error("truncation dimension out of range");
  return d;
}

// The cube list is redundant (site + D determine it) but part of the format;
// verify it matches the enumeration exactly.
void check_cubes(const ordered_json& j, const SiteCat& cat) {
  if (!j.contains("cubes") || !j["cubes"].is_array())
    throw parse_error("missing or non-array field 'cubes'");
  const auto& arr = j["cubes"];
  if ((int)arr.size() != (int)cat.cubes().size())
    throw parse_error("field 'cubes' does not enumerate every level");
  for (int w = 0; w < (int)arr.size(); ++w) {
    const auto& e = arr[w];
    if (!e.is_object() || !e.contains("nB") || !e.contains("nP"))
      throw parse_error("each entry of 'cubes' needs fields 'nB' and 'nP'");
    const Cube& c = cat.cube(w);
    if (e["nB"].get<int>() != c.nB || e["nP"].get<int>() != c.nP)
      throw parse_error("entry " + std::to_string(w) +
                        " of 'cubes' does not match the site enumeration (" +
                        to_string(c) + ")");
  }
}

std::vector<std::vector<std::string>> cells_of(const ordered_json& j,
                                               const SiteCat& cat) {
  if (!j.contains("cells") || !j["cells"].is_object())
    throw parse_error("missing or non-object field 'cells'");
  const auto& cells = j["cells"];
  const int n = (int)cat.cubes().size();
  std::vector<std::vector<std::string>> out(n);
  int seen = 0;
  for (int w = 0; w < n; ++w) {
    const std::string key = to_string(cat.cube(w));
    if (!cells.contains(key))
      throw parse_error("field 'cells' is missing level " + key);
    const auto& names = cells[key];
    if (!names.is_array())
      throw parse_error("the cell list at " + key + " must be an array");
    for (const auto& name : names) {
      if (!name.is_string())
        throw parse_error("cell names at " + key + " must be strings");
      out[w].push_back(name.get<std::string>());
    }
    ++seen;
  }
  if ((int)cells.size() != seen)
    throw parse_error("field 'cells' names a level outside the site");
  return out;
}

// Shared by presheaf and type loading: walk the canonical (w, v, face map)
// order, fetch each name-keyed table, and hand it to `fill`.
template <typename Fill>
void walk_restrictions(const ordered_json& j, const char* field,
                       const SiteCat& cat, const Fill& fill) {
  if (!j.contains(field) || !j[field].is_object())
    throw parse_error(std::string("missing or non-object field '") + field +
                      "'");
  const auto& rj = j[field];
  const int n = (int)cat.cubes().size();
  int pairs = 0;
  for (int w = 0; w < n; ++w)
    for (int v = 0; v < n; ++v) {
      const std::string key = pair_key(cat, w, v);
      if (!rj.contains(key))
        throw parse_error(std::string("field '") + field +
                          "' is missing the level pair " + key);
      const auto& per_map = rj[key];
      if (!per_map.is_object())
        throw parse_error("the tables at " + key + " must form an object");
      const auto& homs = cat.hom(v, w);
      if (per_map.size() != homs.size())
        throw parse_error("the tables at " + key +
                          " do not cover the face maps exactly");
      for (int r = 0; r < (int)homs.size(); ++r) {
        const std::string mk = to_string(homs[r]);
        if (!per_map.contains(mk))
          throw parse_error("missing table along '" + mk + "' at " + key);
        fill(w, v, r, per_map[mk]);
      }
      ++pairs;
    }
  if ((int)rj.size() != pairs)
    throw parse_error(std::string("field '") + field +
                      "' names a level pair outside the site");
}

void write_presheaf_fields(ordered_json& j, const Presheaf& g) {
  const SiteCat& cat = g.cat();
  const int n = (int)cat.cubes().size();
  j["site"] = to_string(g.site);
  j["D"] = g.D;
  ordered_json cubes = ordered_json::array();
  for (const Cube& c : cat.cubes())
    cubes.push_back(ordered_json{{"nB", c.nB}, {"nP", c.nP}});
  j["cubes"] = std::move(cubes);
  ordered_json cells = ordered_json::object();
  for (int w = 0; w < n; ++w) {
    name_index(g.cells[w], "at level " + to_string(cat.cube(w)));
    cells[to_string(cat.cube(w))] = g.cells[w];
  }
  j["cells"] = std::move(cells);
  ordered_json rest = ordered_json::object();
  for (int w = 0; w < n; ++w)
    for (int v = 0; v < n; ++v) {
      ordered_json per_map = ordered_json::object();
      const auto& homs = cat.hom(v, w);
      for (int r = 0; r < (int)homs.size(); ++r) {
        ordered_json table = ordered_json::object();
        for (int c = 0; c < g.size_at(w); ++c)
          table[g.cells[w][c]] = g.cells[v][g.rest[w][v][r][c]];
        per_map[to_string(homs[r])] = std::move(table);
      }
      rest[pair_key(cat, w, v)] = std::move(per_map);
    }
  j["restrictions"] = std::move(rest);
}

Presheaf read_presheaf_fields(const ordered_json& j) {
  const Site site = site_of(j);
  const int D = dim_of(j);
  const SiteCat& cat = site_cat(site, D);
  check_cubes(j, cat);
  Presheaf g =
      make_presheaf_skeleton(site, D, cells_of(j, cat));
  const int n = (int)cat.cubes().size();
  std::vector<std::map<std::string, int>> index(n);
  for (int w = 0; w < n; ++w)
    index[w] = name_index(g.cells[w], "at level " + to_string(cat.cube(w)));
  walk_restrictions(
      j, "restrictions", cat,
      [&](int w, int v, int r, const ordered_json& table) {
        if (!table.is_object())
          throw parse_error("each restriction table must be an object");
        if ((int)table.size() != g.size_at(w))
          throw parse_error("a table at " + pair_key(cat, w, v) +
                            " does not cover the cells exactly");
        for (int c = 0; c < g.size_at(w); ++c) {
          const std::string& name = g.cells[w][c];
          if (!table.contains(name))
            throw parse_error("table at " + pair_key(cat, w, v) +
                              " is missing cell '" + name + "'");
          const auto& img = table[name];
          if (!img.is_string())
            throw parse_error("images in restriction tables must be strings");
          auto it = index[v].find(img.get<std::string>());
          if (it == index[v].end())
            throw parse_error("restriction of '" + name + "' names unknown cell '" +
                              img.get<std::string>() + "' at level " +
                              to_string(cat.cube(v)));
          g.rest[w][v][r][c] = it->second;
        }
      });
  Validation check = validate_presheaf(g);
  if (!check.ok) {
    std::string msg = "the loaded tables are not functorial:";
    for (const auto& p : check.problems) msg += "\n  " + p;
    throw validation_error(msg);
  }
  return g;
}

}  // namespace

std::string presheaf_to_json(const Presheaf& g) {
  ordered_json j = ordered_json::object();
  write_presheaf_fields(j, g);
  return j.dump(2) + "\n";
}

PshPtr presheaf_from_json(const std::string& text) {
  const ordered_json j = parse_document(text);
  return std::make_shared<const Presheaf>(read_presheaf_fields(j));
}

std::string type_to_json(const DependentType& t) {
  const SiteCat& cat = t.cat();
  const int n = (int)cat.cubes().size();
  const Presheaf& g = *t.ctx;
  ordered_json j = ordered_json::object();
  write_presheaf_fields(j, g);
  ordered_json fibers = ordered_json::object();
  for (int w = 0; w < n; ++w) {
    name_index(g.cells[w], "at level " + to_string(cat.cube(w)));
    ordered_json per_cell = ordered_json::object();
    for (int c = 0; c < g.size_at(w); ++c) {
      name_index(t.fibers[w][c],
                 "in the fiber over '" + g.cells[w][c] + "'");
      per_cell[g.cells[w][c]] = t.fibers[w][c];
    }
    fibers[to_string(cat.cube(w))] = std::move(per_cell);
  }
  j["fibers"] = std::move(fibers);
  ordered_json rest = ordered_json::object();
  for (int w = 0; w < n; ++w)
    for (int v = 0; v < n; ++v) {
      ordered_json per_map = ordered_json::object();
      const auto& homs = cat.hom(v, w);
      for (int r = 0; r < (int)homs.size(); ++r) {
        ordered_json per_cell = ordered_json::object();
        for (int c = 0; c < g.size_at(w); ++c) {
          ordered_json table = ordered_json::object();
          const int down = g.rest[w][v][r][c];
          for (int x = 0; x < (int)t.fibers[w][c].size(); ++x)
            table[t.fibers[w][c][x]] =
                t.fibers[v][down][t.rest[w][v][r][c][x]];
          per_cell[g.cells[w][c]] = std::move(table);
        }
        per_map[to_string(homs[r])] = std::move(per_cell);
      }
      rest[pair_key(cat, w, v)] = std::move(per_map);
    }
  j["type_restrictions"] = std::move(rest);
  return j.dump(2) + "\n";
}

TypePtr type_from_json(const std::string& text) {
  const ordered_json j = parse_document(text);
  PshPtr ctx = std::make_shared<const Presheaf>(read_presheaf_fields(j));
  const SiteCat& cat = ctx->cat();
  const int n = (int)cat.cubes().size();

  if (!j.contains("fibers") || !j["fibers"].is_object())
    throw parse_error("missing or non-object field 'fibers'");
  const auto& fj = j["fibers"];
  std::vector<std::vector<std::vector<std::string>>> fibers(n);
  for (int w = 0; w < n; ++w) {
    const std::string key = to_string(cat.cube(w));
    if (!fj.contains(key) || !fj[key].is_object())
      throw parse_error("field 'fibers' is missing level " + key);
    const auto& per_cell = fj[key];
    if ((int)per_cell.size() != ctx->size_at(w))
      throw parse_error("the fibers at " + key +
                        " do not cover the cells exactly");
    fibers[w].resize(ctx->size_at(w));
    for (int c = 0; c < ctx->size_at(w); ++c) {
      const std::string& name = ctx->cells[w][c];
      if (!per_cell.contains(name))
        throw parse_error("field 'fibers' is missing the fiber over '" +
                          name + "' at " + key);
      const auto& elems = per_cell[name];
      if (!elems.is_array())
        throw parse_error("the fiber over '" + name + "' must be an array");
      for (const auto& e : elems) {
        if (!e.is_string())
          throw parse_error("fiber element names must be strings");
        fibers[w][c].push_back(e.get<std::string>());
      }
    }
  }

  DependentType t = make_type_skeleton(ctx, std::move(fibers));
  std::vector<std::vector<std::map<std::string, int>>> index(n);
  for (int w = 0; w < n; ++w) {
    index[w].resize(ctx->size_at(w));
    for (int c = 0; c < ctx->size_at(w); ++c)
      index[w][c] = name_index(
          t.fibers[w][c], "in the fiber over '" + ctx->cells[w][c] + "'");
  }
  walk_restrictions(
      j, "type_restrictions", cat,
      [&](int w, int v, int r, const ordered_json& per_cell) {
        if (!per_cell.is_object() || (int)per_cell.size() != ctx->size_at(w))
          throw parse_error("a type table at " + pair_key(cat, w, v) +
                            " does not cover the cells exactly");
        for (int c = 0; c < ctx->size_at(w); ++c) {
          const std::string& name = ctx->cells[w][c];
          if (!per_cell.contains(name))
            throw parse_error("type table at " + pair_key(cat, w, v) +
                              " is missing cell '" + name + "'");
          const auto& table = per_cell[name];
          if (!table.is_object() ||
              (int)table.size() != (int)t.fibers[w][c].size())
            throw parse_error("the table over '" + name +
                              "' does not cover its fiber exactly");
          const int down = ctx->rest[w][v][r][c];
          for (int x = 0; x < (int)t.fibers[w][c].size(); ++x) {
            const std::string& elem = t.fibers[w][c][x];
            if (!table.contains(elem))
              throw parse_error("the table over '" + name +
                                "' is missing element '" + elem + "'");
            const auto& img = table[elem];
            if (!img.is_string())
              throw parse_error("fiber images must be strings");
            auto it = index[v][down].find(img.get<std::string>());
            if (it == index[v][down].end())
              throw parse_error("restriction of '" + elem + "' over '" + name +
                                "' names an unknown element '" +
                                img.get<std::string>() + "'");
            t.rest[w][v][r][c][x] = it->second;
          }
        }
      });
  try {
    require_valid(t, "loaded type");
  } catch (const std::exception& e) {
    throw validation_error(e.what());
  }
  return std::make_shared<const DependentType>(std::move(t));
}

std::string term_to_json(const Term& t) {
  const DependentType& ty = *t.type;
  const SiteCat& cat = ty.cat();
  ordered_json comp = ordered_json::object();
  for (int w = 0; w < (int)cat.cubes().size(); ++w) {
    ordered_json per_cell = ordered_json::object();
    for (int c = 0; c < ty.ctx->size_at(w); ++c)
      per_cell[ty.ctx->cells[w][c]] = ty.fibers[w][c][t.comp[w][c]];
    comp[to_string(cat.cube(w))] = std::move(per_cell);
  }
  ordered_json j = ordered_json::object();
  j["components"] = std::move(comp);
  return j.dump(2) + "\n";
}

Term term_from_json(const TypePtr& type, const std::string& text) {
  const ordered_json j = parse_document(text);
  if (!j.contains("components") || !j["components"].is_object())
    throw parse_error("missing or non-object field 'components'");
  const auto& comp = j["components"];
  const SiteCat& cat = type->cat();
  const int n = (int)cat.cubes().size();
  Term out{type, std::vector<std::vector<int>>(n)};
  for (int w = 0; w < n; ++w) {
    const std::string key = to_string(cat.cube(w));
    if (!comp.contains(key) || !comp[key].is_object())
      throw parse_error("field 'components' is missing level " + key);
    const auto& per_cell = comp[key];
    if ((int)per_cell.size() != type->ctx->size_at(w))
      throw parse_error("the components at " + key +
                        " do not cover the cells exactly");
    out.comp[w].resize(type->ctx->size_at(w));
    for (int c = 0; c < type->ctx->size_at(w); ++c) {
      const std::string& name = type->ctx->cells[w][c];
      if (!per_cell.contains(name))
        throw parse_error("no component over cell '" + name + "' at " + key);
      const auto& pick = per_cell[name];
      if (!pick.is_string())
        throw parse_error("components must be fiber element names");
      const auto& fiber = type->fibers[w][c];
      int found = -1;
      for (int x = 0; x < (int)fiber.size(); ++x)
        if (fiber[x] == pick.get<std::string>()) {
          found = x;
          break;
        }
      if (found < 0)
        throw parse_error("component over '" + name +
                          "' names an unknown fiber element '" +
                          pick.get<std::string>() + "'");
      out.comp[w][c] = found;
    }
  }
  try {
    require_valid(out, "loaded term");
  } catch (const std::exception& e) {
    throw validation_error(e.what());
  }
  return out;
}

}  // namespace bpcube
