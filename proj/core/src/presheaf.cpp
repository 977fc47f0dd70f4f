#include "bpcube/presheaf.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

namespace bpcube {

namespace {

std::string level_tag(const Presheaf& g, int w) { return to_string(g.cat().cube(w)); }

// Sort each level's cell names and remap all restriction rows accordingly.
Presheaf sort_cells(Presheaf g) {
  const int n = g.levels();
  std::vector<std::vector<int>> old_to_new(n);
  bool touched = false;
  for (int w = 0; w < n; ++w) {
    const int k = g.size_at(w);
    std::vector<int> order(k);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return g.cells[w][a] < g.cells[w][b]; });
    old_to_new[w].assign(k, 0);
    for (int pos = 0; pos < k; ++pos) old_to_new[w][order[pos]] = pos;
    for (int pos = 0; pos < k; ++pos)
      if (order[pos] != pos) touched = true;
    std::vector<std::string> sorted(k);
    for (int pos = 0; pos < k; ++pos) sorted[pos] = g.cells[w][order[pos]];
    g.cells[w] = std::move(sorted);
  }
  if (!touched) return g;
  for (int w = 0; w < n; ++w) {
    for (int v = 0; v < n; ++v) {
      for (auto& row : g.rest[w][v]) {
        std::vector<int> nrow(row.size());
        for (int c = 0; c < (int)row.size(); ++c) nrow[old_to_new[w][c]] = old_to_new[v][row[c]];
        row = std::move(nrow);
      }
    }
  }
  return g;
}

// Union-find over one level's cells.
struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (a > b) std::swap(a, b);  // keep the smaller index as root
    parent[b] = a;
    return true;
  }
};

// Canonical class ids: classes numbered in order of their smallest member.
std::vector<int> canon_labels(UnionFind& uf) {
  const int n = (int)uf.parent.size();
  std::vector<int> label(n, -1);
  int next = 0;
  std::vector<int> ids(n);
  for (int x = 0; x < n; ++x) {
    int r = uf.find(x);
    if (label[r] < 0) label[r] = next++;
    ids[x] = label[r];
  }
  return ids;
}

}  // namespace

std::uint64_t Presheaf::total_cells() const {
  std::uint64_t s = 0;
  for (const auto& c : cells) s += c.size();
  return s;
}

int Presheaf::restrict_cell(int w_idx, int cell, const FaceMap& phi) const {
  const SiteCat& c = cat();
  const int v_idx = c.index_of(phi.dom);
  return rest[w_idx][v_idx][hom_rank(phi)][cell];
}

int Presheaf::cell_index(int w_idx, const std::string& name) const {
  const auto& lvl = cells[w_idx];
  auto it = std::find(lvl.begin(), lvl.end(), name);
  if (it == lvl.end()) throw std::invalid_argument("no cell '" + name + "' at level " + level_tag(*this, w_idx));
  return (int)(it - lvl.begin());
}

Presheaf make_presheaf_skeleton(Site site, int D, std::vector<std::vector<std::string>> cells) {
  const SiteCat& cat = site_cat(site, D);
  const int n = (int)cat.cubes().size();
  if ((int)cells.size() != n) throw std::invalid_argument("cell lists do not match the number of cubes");
  Presheaf g;
  g.site = site;
  g.D = D;
  g.cells = std::move(cells);
  g.rest.assign(n, std::vector<std::vector<std::vector<int>>>(n));
  for (int w = 0; w < n; ++w)
    for (int v = 0; v < n; ++v)
      g.rest[w][v].assign(cat.hom(cat.cube(v), cat.cube(w)).size(),
                          std::vector<int>(g.cells[w].size(), -1));
  return g;
}

Validation validate_presheaf(const Presheaf& g) {
  Validation out;
  auto fail = [&](const std::string& msg) {
    out.ok = false;
    if (out.problems.size() < 32) out.problems.push_back(msg);
  };
  const SiteCat& cat = g.cat();
  const int n = (int)cat.cubes().size();
  if ((int)g.cells.size() != n || (int)g.rest.size() != n) {
    fail("level tables do not match the site");
    return out;
  }
  for (int w = 0; w < n; ++w) {
    std::vector<std::string> sorted = g.cells[w];
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      fail("duplicate cell name at level " + level_tag(g, w));
    if ((int)g.rest[w].size() != n) {
      fail("restriction table missing rows at level " + level_tag(g, w));
      return out;
    }
    for (int v = 0; v < n; ++v) {
      const auto& homs = cat.hom(cat.cube(v), cat.cube(w));
      if (g.rest[w][v].size() != homs.size()) {
        fail("restriction table at (" + level_tag(g, w) + " -> " + level_tag(g, v) +
             ") has wrong face-map count");
        return out;
      }
      for (int r = 0; r < (int)homs.size(); ++r) {
        const auto& row = g.rest[w][v][r];
        if ((int)row.size() != g.size_at(w)) {
          fail("row size mismatch along " + to_string(homs[r]));
          return out;
        }
        for (int c = 0; c < (int)row.size(); ++c)
          if (row[c] < 0 || row[c] >= g.size_at(v))
            fail("restriction of cell '" + g.cells[w][c] + "' along " + to_string(homs[r]) +
                 " is out of range");
      }
    }
  }
  if (!out.ok) return out;
  // identity law
  for (int w = 0; w < n; ++w) {
    const FaceMap idm = id_map(cat.cube(w));
    const auto& row = g.rest[w][w][hom_rank(idm)];
    for (int c = 0; c < g.size_at(w); ++c)
      if (row[c] != c)
        fail("identity restriction moves cell '" + g.cells[w][c] + "' at level " + level_tag(g, w));
  }
  // composition law: x . compose(phi, psi) == (x . phi) . psi
  for (int w = 0; w < n && out.ok; ++w) {
    for (int v = 0; v < n; ++v) {
      const auto& phis = cat.hom(cat.cube(v), cat.cube(w));
      for (const FaceMap& phi : phis) {
        for (int u = 0; u < n; ++u) {
          const auto& psis = cat.hom(cat.cube(u), cat.cube(v));
          for (const FaceMap& psi : psis) {
            const FaceMap both = compose(phi, psi);
            const auto& row_phi = g.rest[w][v][hom_rank(phi)];
            const auto& row_psi = g.rest[v][u][hom_rank(psi)];
            const auto& row_both = g.rest[w][u][hom_rank(both)];
            for (int c = 0; c < g.size_at(w); ++c) {
              if (row_both[c] != row_psi[row_phi[c]]) {
                fail("composition law fails for cell '" + g.cells[w][c] + "': along " +
                     to_string(phi) + " then " + to_string(psi));
                if (!out.ok && out.problems.size() >= 32) return out;
              }
            }
          }
        }
      }
    }
  }
  return out;
}

void require_valid(const Presheaf& g) {
  Validation v = validate_presheaf(g);
  if (!v.ok) {
    std::string msg = "invalid presheaf:";
    for (const auto& p : v.problems) msg += "\n  " + p;
    throw std::invalid_argument(msg);
  }
}

PshPtr terminal_presheaf(Site site, int D) {
  const SiteCat& cat = site_cat(site, D);
  Presheaf g = make_presheaf_skeleton(site, D, std::vector<std::vector<std::string>>(cat.cubes().size(), {"*"}));
  for (auto& per_w : g.rest)
    for (auto& per_v : per_w)
      for (auto& row : per_v) row.assign(1, 0);
  return std::make_shared<const Presheaf>(std::move(g));
}

PshPtr yoneda(Site site, int D, const Cube& w0) {
  const SiteCat& cat = site_cat(site, D);
  if (w0.site != site || w0.total() > D) throw std::invalid_argument("representing cube outside the site");
  const int n = (int)cat.cubes().size();
  // cells at V = maps V -|> w0, named by their serialization
  std::vector<std::vector<FaceMap>> maps(n);
  std::vector<std::vector<std::string>> names(n);
  for (int v = 0; v < n; ++v) {
    maps[v] = enumerate_hom(cat.cube(v), w0);
    for (const FaceMap& m : maps[v]) names[v].push_back("y[" + to_string(m) + "]");
  }
  // sorted name order per level
  std::vector<std::vector<int>> pos(n);  // pos[v][enumeration index] -> sorted index
  std::vector<std::vector<std::string>> sorted_names(n);
  for (int v = 0; v < n; ++v) {
    const int k = (int)names[v].size();
    std::vector<int> order(k);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return names[v][a] < names[v][b]; });
    pos[v].assign(k, 0);
    sorted_names[v].resize(k);
    for (int p = 0; p < k; ++p) {
      pos[v][order[p]] = p;
      sorted_names[v][p] = names[v][order[p]];
    }
  }
  Presheaf g = make_presheaf_skeleton(site, D, sorted_names);
  for (int w = 0; w < n; ++w) {
    for (int v = 0; v < n; ++v) {
      const auto& psis = cat.hom(cat.cube(v), cat.cube(w));
      for (int r = 0; r < (int)psis.size(); ++r) {
        for (int c = 0; c < (int)maps[w].size(); ++c) {
          const FaceMap composite = compose(maps[w][c], psis[r]);
          g.rest[w][v][r][pos[w][c]] = pos[v][hom_rank(composite)];
        }
      }
    }
  }
  return std::make_shared<const Presheaf>(std::move(g));
}

Validation validate_substitution(const Substitution& s) {
  Validation out;
  auto fail = [&](const std::string& msg) {
    out.ok = false;
    if (out.problems.size() < 32) out.problems.push_back(msg);
  };
  if (!s.src || !s.dst) {
    fail("substitution endpoints missing");
    return out;
  }
  const Presheaf& a = *s.src;
  const Presheaf& b = *s.dst;
  if (a.site != b.site || a.D != b.D) {
    fail("substitution endpoints live over different sites");
    return out;
  }
  const SiteCat& cat = a.cat();
  const int n = (int)cat.cubes().size();
  if ((int)s.comp.size() != n) {
    fail("component table has wrong level count");
    return out;
  }
  for (int w = 0; w < n; ++w) {
    if ((int)s.comp[w].size() != a.size_at(w)) {
      fail("component at level " + level_tag(a, w) + " has wrong size");
      return out;
    }
    for (int c : s.comp[w])
      if (c < 0 || c >= b.size_at(w)) {
        fail("component value out of range at level " + level_tag(a, w));
        return out;
      }
  }
  for (int w = 0; w < n; ++w)
    for (int v = 0; v < n; ++v) {
      const auto& homs = cat.hom(cat.cube(v), cat.cube(w));
      for (int r = 0; r < (int)homs.size(); ++r)
        for (int c = 0; c < a.size_at(w); ++c)
          if (b.rest[w][v][r][s.comp[w][c]] != s.comp[v][a.rest[w][v][r][c]])
            fail("naturality fails for cell '" + a.cells[w][c] + "' along " + to_string(homs[r]));
    }
  return out;
}

void require_valid(const Substitution& s) {
  Validation v = validate_substitution(s);
  if (!v.ok) {
    std::string msg = "invalid substitution:";
    for (const auto& p : v.problems) msg += "\n  " + p;
    throw std::invalid_argument(msg);
  }
}

Substitution id_subst(PshPtr g) {
  Substitution s;
  s.src = g;
  s.dst = g;
  s.comp.resize(g->levels());
  for (int w = 0; w < g->levels(); ++w) {
    s.comp[w].resize(g->size_at(w));
    std::iota(s.comp[w].begin(), s.comp[w].end(), 0);
  }
  return s;
}

Substitution compose_subst(const Substitution& s2, const Substitution& s1) {
  if (!(*s1.dst == *s2.src)) throw std::invalid_argument("substitutions do not compose: middle presheaves differ");
  Substitution r;
  r.src = s1.src;
  r.dst = s2.dst;
  r.comp.resize(s1.comp.size());
  for (int w = 0; w < (int)s1.comp.size(); ++w) {
    r.comp[w].resize(s1.comp[w].size());
    for (int c = 0; c < (int)s1.comp[w].size(); ++c) r.comp[w][c] = s2.comp[w][s1.comp[w][c]];
  }
  return r;
}

bool is_iso(const Substitution& s) {
  for (int w = 0; w < (int)s.comp.size(); ++w) {
    if (s.src->size_at(w) != s.dst->size_at(w)) return false;
    std::vector<char> hit(s.comp[w].size(), 0);
    for (int c : s.comp[w]) {
      if (hit[c]) return false;
      hit[c] = 1;
    }
  }
  return true;
}

Substitution invert(const Substitution& s) {
  if (!is_iso(s)) throw std::invalid_argument("substitution is not invertible");
  Substitution r;
  r.src = s.dst;
  r.dst = s.src;
  r.comp.resize(s.comp.size());
  for (int w = 0; w < (int)s.comp.size(); ++w) {
    r.comp[w].assign(s.comp[w].size(), -1);
    for (int c = 0; c < (int)s.comp[w].size(); ++c) r.comp[w][s.comp[w][c]] = c;
  }
  return r;
}

Substitution retarget(const Substitution& s, PshPtr src, PshPtr dst) {
  if (!(*src == *s.src) || !(*dst == *s.dst))
    throw std::invalid_argument("retarget endpoints are not table-equal");
  Substitution r;
  r.src = std::move(src);
  r.dst = std::move(dst);
  r.comp = s.comp;
  return r;
}

Substitution terminal_map(PshPtr g) {
  Substitution s;
  s.src = g;
  s.dst = terminal_presheaf(g->site, g->D);
  s.comp.resize(g->levels());
  for (int w = 0; w < g->levels(); ++w) s.comp[w].assign(g->size_at(w), 0);
  return s;
}

namespace {

// Backtracking search for natural maps src -> dst with forced-value propagation.
struct SubstSearch {
  const Presheaf& a;
  const Presheaf& b;
  const SiteCat& cat;
  bool injective = false;
  long long budget = -1;                   // branch nodes left; < 0 = unlimited
  std::vector<std::vector<int>> asg;       // -1 = unassigned
  std::vector<std::vector<int>> use;       // per-level target use count (injective mode)
  std::vector<std::pair<int, int>> trail;  // assignment log for undo

  SubstSearch(const Presheaf& a_, const Presheaf& b_, bool inj)
      : a(a_), b(b_), cat(a_.cat()), injective(inj) {
    asg.resize(a.levels());
    use.resize(a.levels());
    for (int w = 0; w < a.levels(); ++w) {
      asg[w].assign(a.size_at(w), -1);
      use[w].assign(b.size_at(w), 0);
    }
  }

  bool assign(int w, int x, int d) {
    if (asg[w][x] >= 0) return asg[w][x] == d;
    if (injective && use[w][d] > 0) return false;
    asg[w][x] = d;
    ++use[w][d];
    trail.emplace_back(w, x);
    for (int v = 0; v < a.levels(); ++v) {
      const int nr = (int)a.rest[w][v].size();
      for (int r = 0; r < nr; ++r)
        if (!assign(v, a.rest[w][v][r][x], b.rest[w][v][r][d])) return false;
    }
    return true;
  }

  void undo(std::size_t mark) {
    while (trail.size() > mark) {
      auto [w, x] = trail.back();
      trail.pop_back();
      --use[w][asg[w][x]];
      asg[w][x] = -1;
    }
  }

  // Returns false to stop the whole search.
  template <typename Yield, typename Order>
  bool dfs(const Yield& yield, const Order& order) {
    int fw = -1, fx = -1;
    for (int w = 0; w < a.levels() && fw < 0; ++w)
      for (int x = 0; x < a.size_at(w); ++x)
        if (asg[w][x] < 0) {
          fw = w;
          fx = x;
          break;
        }
    if (fw < 0) return yield(asg);
    if (budget == 0) return false;  // out of budget: stop the whole search
    if (budget > 0) --budget;
    std::vector<int> cand(b.size_at(fw));
    std::iota(cand.begin(), cand.end(), 0);
    order(fw, cand);
    for (int d : cand) {
      const std::size_t mark = trail.size();
      if (assign(fw, fx, d)) {
        if (!dfs(yield, order)) return false;
      }
      undo(mark);
    }
    return true;
  }
};

void check_same_site(const Presheaf& a, const Presheaf& b) {
  if (a.site != b.site || a.D != b.D)
    throw std::invalid_argument("presheaves live over different sites");
}

}  // namespace

std::vector<Substitution> enumerate_substitutions(PshPtr src, PshPtr dst, std::uint64_t cap) {
  check_same_site(*src, *dst);
  std::vector<Substitution> out;
  SubstSearch search(*src, *dst, false);
  bool empty_level_blocks = false;
  for (int w = 0; w < src->levels(); ++w)
    if (src->size_at(w) > 0 && dst->size_at(w) == 0) empty_level_blocks = true;
  if (!empty_level_blocks) {
    search.dfs(
        [&](const std::vector<std::vector<int>>& asg) {
          if ((std::uint64_t)out.size() >= cap)
            throw limit_error("substitution enumeration exceeded cap");
          out.push_back(Substitution{src, dst, asg});
          return true;
        },
        [](int, std::vector<int>&) {});
  }
  return out;
}

std::optional<Substitution> sample_substitution(PshPtr src, PshPtr dst, std::uint64_t seed) {
  check_same_site(*src, *dst);
  for (int w = 0; w < src->levels(); ++w)
    if (src->size_at(w) > 0 && dst->size_at(w) == 0) return std::nullopt;
  std::mt19937_64 rng(seed);
  SubstSearch search(*src, *dst, false);
  // Sampling need not be complete: adversarial pairs can force exponential
  // backtracking before "no map" is certain, so give up after a fixed number
  // of branch nodes and report absence.
  search.budget = 200000;
  std::optional<Substitution> found;
  search.dfs(
      [&](const std::vector<std::vector<int>>& asg) {
        found = Substitution{src, dst, asg};
        return false;  // stop at the first hit
      },
      [&](int, std::vector<int>& cand) { std::shuffle(cand.begin(), cand.end(), rng); });
  return found;
}

std::optional<Substitution> find_iso(PshPtr a, PshPtr b) {
  check_same_site(*a, *b);
  for (int w = 0; w < a->levels(); ++w)
    if (a->size_at(w) != b->size_at(w)) return std::nullopt;
  SubstSearch search(*a, *b, true);
  std::optional<Substitution> found;
  search.dfs(
      [&](const std::vector<std::vector<int>>& asg) {
        found = Substitution{a, b, asg};
        return false;
      },
      [](int, std::vector<int>&) {});
  return found;
}

PshPtr coproduct(const std::vector<PshPtr>& parts) {
  if (parts.empty()) throw std::invalid_argument("coproduct of no presheaves needs a site; pass at least one");
  if (parts.size() > 26) throw std::invalid_argument("coproduct supports at most 26 summands");
  for (const auto& p : parts) check_same_site(*parts[0], *p);
  const Site site = parts[0]->site;
  const int D = parts[0]->D;
  const int n = parts[0]->levels();
  std::vector<std::vector<std::string>> names(n);
  // offsets[k][w]: first index of summand k at level w (pre-sort order)
  std::vector<std::vector<int>> offsets(parts.size(), std::vector<int>(n, 0));
  for (int w = 0; w < n; ++w)
    for (int k = 0; k < (int)parts.size(); ++k) {
      offsets[k][w] = (int)names[w].size();
      for (const auto& nm : parts[k]->cells[w])
        names[w].push_back(std::string(1, char('A' + k)) + ":" + nm);
    }
  Presheaf g = make_presheaf_skeleton(site, D, names);
  for (int w = 0; w < n; ++w)
    for (int v = 0; v < n; ++v)
      for (int r = 0; r < (int)g.rest[w][v].size(); ++r)
        for (int k = 0; k < (int)parts.size(); ++k)
          for (int c = 0; c < parts[k]->size_at(w); ++c)
            g.rest[w][v][r][offsets[k][w] + c] = offsets[k][v] + parts[k]->rest[w][v][r][c];
  return std::make_shared<const Presheaf>(sort_cells(std::move(g)));
}

int EqRel::classes_at(int w) const {
  int mx = -1;
  for (int id : cls[w]) mx = std::max(mx, id);
  return mx + 1;
}

EqRel eqrel_discrete(PshPtr g) {
  EqRel e;
  e.carrier = g;
  e.cls.resize(g->levels());
  for (int w = 0; w < g->levels(); ++w) {
    e.cls[w].resize(g->size_at(w));
    std::iota(e.cls[w].begin(), e.cls[w].end(), 0);
  }
  return e;
}

EqRel eqrel_total(PshPtr g) {
  EqRel e;
  e.carrier = g;
  e.cls.resize(g->levels());
  for (int w = 0; w < g->levels(); ++w) e.cls[w].assign(g->size_at(w), 0);
  return e;
}

bool eqrel_closed_under_restriction(const EqRel& e) {
  const Presheaf& g = *e.carrier;
  for (int w = 0; w < g.levels(); ++w) {
    // representative per class
    std::vector<int> rep(g.size_at(w), -1);
    for (int c = 0; c < g.size_at(w); ++c)
      if (rep[e.cls[w][c]] < 0) rep[e.cls[w][c]] = c;
    for (int c = 0; c < g.size_at(w); ++c) {
      const int r0 = rep[e.cls[w][c]];
      if (r0 == c) continue;
      for (int v = 0; v < g.levels(); ++v)
        for (const auto& row : g.rest[w][v])
          if (e.cls[v][row[c]] != e.cls[v][row[r0]]) return false;
    }
  }
  return true;
}

bool eqrel_equal(const EqRel& a, const EqRel& b) {
  if (!(*a.carrier == *b.carrier)) return false;
  return a.cls == b.cls;  // both canonical
}

bool eqrel_subset(const EqRel& a, const EqRel& b) {
  if (!(*a.carrier == *b.carrier)) return false;
  const Presheaf& g = *a.carrier;
  for (int w = 0; w < g.levels(); ++w) {
    std::vector<int> seen(g.size_at(w), -1);  // a-class -> b-class
    for (int c = 0; c < g.size_at(w); ++c) {
      int& s = seen[a.cls[w][c]];
      if (s < 0)
        s = b.cls[w][c];
      else if (s != b.cls[w][c])
        return false;
    }
  }
  return true;
}

EqRel eqrel_saturate(PshPtr g, const std::vector<SeedPair>& seeds) {
  const Presheaf& p = *g;
  std::vector<UnionFind> uf;
  uf.reserve(p.levels());
  for (int w = 0; w < p.levels(); ++w) uf.emplace_back(p.size_at(w));
  std::vector<SeedPair> work;
  auto unite = [&](int w, int a, int b) {
    if (uf[w].unite(a, b)) work.push_back(SeedPair{w, a, b});
  };
  for (const SeedPair& s : seeds) unite(s.w_idx, s.cell_a, s.cell_b);
  while (!work.empty()) {
    SeedPair s = work.back();
    work.pop_back();
    for (int v = 0; v < p.levels(); ++v)
      for (const auto& row : p.rest[s.w_idx][v]) unite(v, row[s.cell_a], row[s.cell_b]);
  }
  EqRel e;
  e.carrier = g;
  e.cls.resize(p.levels());
  for (int w = 0; w < p.levels(); ++w) e.cls[w] = canon_labels(uf[w]);
  return e;
}

QuotientResult quotient(PshPtr g, const EqRel& e) {
  if (!(*e.carrier == *g)) throw std::invalid_argument("relation carrier differs from the presheaf");
  if (!eqrel_closed_under_restriction(e))
    throw std::invalid_argument("relation is not closed under restriction; quotient undefined");
  const Presheaf& p = *g;
  const int n = p.levels();
  // class id -> representative (smallest member index); the lexicographically least
  // member name labels the class
  std::vector<std::vector<int>> rep(n);
  std::vector<std::vector<std::string>> names(n);
  for (int w = 0; w < n; ++w) {
    const int k = e.classes_at(w);
    rep[w].assign(k, -1);
    names[w].resize(k);
    for (int c = 0; c < p.size_at(w); ++c) {
      const int id = e.cls[w][c];
      if (rep[w][id] < 0) {
        rep[w][id] = c;
        names[w][id] = p.cells[w][c];
      } else if (p.cells[w][c] < names[w][id]) {
        names[w][id] = p.cells[w][c];
      }
    }
  }
  Presheaf q = make_presheaf_skeleton(p.site, p.D, names);
  for (int w = 0; w < n; ++w)
    for (int v = 0; v < n; ++v)
      for (int r = 0; r < (int)q.rest[w][v].size(); ++r)
        for (int c = 0; c < (int)rep[w].size(); ++c)
          q.rest[w][v][r][c] = e.cls[v][p.rest[w][v][r][rep[w][c]]];
  QuotientResult out;
  out.quotient = std::make_shared<const Presheaf>(std::move(q));
  out.projection = Substitution{g, out.quotient, e.cls};
  return out;
}

bool se_contractible_var(const Cube& w, int k) {
  if (w.site == Site::Cube) return true;  // every edge variable collapses on the plain cubical site
  return !is_bridge_var(w, k);
}

EqRel se_context(PshPtr g) {
  const Presheaf& p = *g;
  const SiteCat& cat = p.cat();
  std::vector<SeedPair> seeds;
  for (int w = 0; w < p.levels(); ++w) {
    const Cube& cube = cat.cube(w);
    for (int k = 0; k < cube.total(); ++k) {
      if (!se_contractible_var(cube, k)) continue;
      const FaceMap endo0 = endo_const(cube, k, 0);
      for (int c = 0; c < p.size_at(w); ++c)
        seeds.push_back(SeedPair{w, c, p.restrict_cell(w, c, endo0)});
    }
  }
  return eqrel_saturate(g, seeds);
}

ShapeQuotient shape_quotient(PshPtr g) {
  QuotientResult q = quotient(g, se_context(g));
  return ShapeQuotient{q.quotient, q.projection};
}

bool cell_degenerate(const Presheaf& g, int w_idx, int cell, int var) {
  const Cube& cube = g.cat().cube(w_idx);
  return g.restrict_cell(w_idx, cell, endo_const(cube, var, 0)) == cell;
}

bool discrete_context_quick(const Presheaf& g) {
  const SiteCat& cat = g.cat();
  for (int w = 0; w < g.levels(); ++w) {
    const Cube& cube = cat.cube(w);
    for (int k = 0; k < cube.total(); ++k) {
      if (!se_contractible_var(cube, k)) continue;
      for (int c = 0; c < g.size_at(w); ++c)
        if (!cell_degenerate(g, w, c, k)) return false;
    }
  }
  return true;
}

FaceMap path_zero_fill(const Cube& w) {
  FaceMap m;
  m.cod = w;
  m.dom = (w.site == Site::BPCube) ? Cube{Site::BPCube, w.nB, 0} : Cube{Site::Cube, 0, 0};
  m.img.resize(w.total());
  for (int k = 0; k < w.total(); ++k)
    m.img[k] = se_contractible_var(w, k) ? VAL_ZERO : var_val(k);
  return m;
}

PshPtr lift_functor(BaseFunctor f, PshPtr g) {
  if (g->site != target_site(f))
    throw std::invalid_argument("presheaf site does not match the functor's target site");
  const Site ssite = source_site(f);
  const SiteCat& scat = site_cat(ssite, g->D);
  const SiteCat& tcat = g->cat();
  const int n = (int)scat.cubes().size();
  std::vector<int> fidx(n);  // index in tcat of F(cube)
  std::vector<std::vector<std::string>> names(n);
  for (int w = 0; w < n; ++w) {
    fidx[w] = tcat.index_of(apply_base_functor(f, scat.cube(w)));
    names[w] = g->cells[fidx[w]];
  }
  Presheaf r = make_presheaf_skeleton(ssite, g->D, names);
  for (int w = 0; w < n; ++w)
    for (int v = 0; v < n; ++v) {
      const auto& homs = scat.hom(scat.cube(v), scat.cube(w));
      for (int rr = 0; rr < (int)homs.size(); ++rr) {
        const FaceMap fm = apply_base_functor(f, homs[rr]);
        r.rest[w][v][rr] = g->rest[fidx[w]][fidx[v]][hom_rank(fm)];
      }
    }
  return std::make_shared<const Presheaf>(std::move(r));
}

Substitution lift_substitution(BaseFunctor f, const Substitution& s) {
  const Site ssite = source_site(f);
  const SiteCat& scat = site_cat(ssite, s.src->D);
  const SiteCat& tcat = s.src->cat();
  Substitution r;
  r.src = lift_functor(f, s.src);
  r.dst = lift_functor(f, s.dst);
  r.comp.resize(scat.cubes().size());
  for (int w = 0; w < (int)scat.cubes().size(); ++w)
    r.comp[w] = s.comp[tcat.index_of(apply_base_functor(f, scat.cube(w)))];
  return r;
}

Substitution lift_transform(BaseTransform nu, PshPtr g) {
  if (g->site != Site::BPCube) throw std::invalid_argument("lifted transforms act on bridge/path presheaves");
  const SiteCat& cat = g->cat();
  // nu: F -> G; the lift is a map lift(G)(g) -> lift(F)(g).
  BaseFunctor f_side, g_side;
  bool f_id = false, g_id = false;
  switch (nu) {
    case BaseTransform::Varsigma:
      f_id = true;
      g_side = BaseFunctor::Shp;
      break;
    case BaseTransform::Kappa:
      f_side = BaseFunctor::Flat;
      g_id = true;
      break;
    case BaseTransform::Iota:
      f_id = true;
      g_side = BaseFunctor::Sharp;
      break;
  }
  Substitution r;
  r.src = g_id ? g : lift_functor(g_side, g);
  r.dst = f_id ? g : lift_functor(f_side, g);
  r.comp.resize(g->levels());
  for (int w = 0; w < g->levels(); ++w) {
    const FaceMap comp_w = transform_component(nu, cat.cube(w));
    const int cod_idx = cat.index_of(comp_w.cod);
    r.comp[w].resize(r.src->size_at(w));
    for (int c = 0; c < r.src->size_at(w); ++c) r.comp[w][c] = g->restrict_cell(cod_idx, c, comp_w);
  }
  return r;
}

std::string to_string(PshFunctor f) {
  switch (f) {
    case PshFunctor::Pi: return "pi";
    case PshFunctor::Disc: return "disc";
    case PshFunctor::Under: return "under";
    case PshFunctor::Codisc: return "codisc";
    case PshFunctor::Paths: return "paths";
    case PshFunctor::Flat: return "flat";
    case PshFunctor::Sharp: return "sharp";
    case PshFunctor::Coshp: return "coshp";
    case PshFunctor::Shp: return "shp";
    case PshFunctor::Quot: return "quot";
  }
  return "?";
}

std::optional<PshFunctor> parse_psh_functor(const std::string& name) {
  static const std::map<std::string, PshFunctor> table = {
      {"pi", PshFunctor::Pi},       {"disc", PshFunctor::Disc},   {"under", PshFunctor::Under},
      {"codisc", PshFunctor::Codisc}, {"paths", PshFunctor::Paths}, {"flat", PshFunctor::Flat},
      {"sharp", PshFunctor::Sharp}, {"coshp", PshFunctor::Coshp}, {"shp", PshFunctor::Shp},
      {"quot", PshFunctor::Quot}};
  auto it = table.find(name);
  if (it == table.end()) return std::nullopt;
  return it->second;
}

Site psh_source_site(PshFunctor f) {
  switch (f) {
    case PshFunctor::Pi:
    case PshFunctor::Under:
    case PshFunctor::Paths:
    case PshFunctor::Flat:
    case PshFunctor::Sharp:
    case PshFunctor::Coshp:
    case PshFunctor::Shp:
    case PshFunctor::Quot:
      return Site::BPCube;
    case PshFunctor::Disc:
    case PshFunctor::Codisc:
      return Site::Cube;
  }
  return Site::BPCube;
}

Site psh_target_site(PshFunctor f) {
  switch (f) {
    case PshFunctor::Pi:
    case PshFunctor::Under:
    case PshFunctor::Paths:
      return Site::Cube;
    default:
      return Site::BPCube;
  }
}

PshPtr cohpi(PshPtr g) {
  if (g->site != Site::BPCube) throw std::invalid_argument("the shape-collapsing end acts on bridge/path presheaves");
  return lift_functor(BaseFunctor::DiscreteB, shape_quotient(g).quotient);
}

namespace {

Substitution quot_sub(const Substitution& s) {
  ShapeQuotient qa = shape_quotient(s.src);
  ShapeQuotient qb = shape_quotient(s.dst);
  Substitution r;
  r.src = qa.quotient;
  r.dst = qb.quotient;
  r.comp.resize(s.comp.size());
  for (int w = 0; w < (int)s.comp.size(); ++w) {
    r.comp[w].assign(qa.quotient->size_at(w), -1);
    for (int c = 0; c < s.src->size_at(w); ++c) {
      const int cls_src = qa.projection.comp[w][c];
      const int cls_dst = qb.projection.comp[w][s.comp[w][c]];
      if (r.comp[w][cls_src] >= 0 && r.comp[w][cls_src] != cls_dst)
        throw std::logic_error("shape quotient of a substitution is not well-defined");
      r.comp[w][cls_src] = cls_dst;
    }
  }
  return r;
}

}  // namespace

Substitution cohpi_sub(const Substitution& s) {
  return lift_substitution(BaseFunctor::DiscreteB, quot_sub(s));
}

BaseFunctor base_functor_of(PshFunctor f) {
  switch (f) {
    case PshFunctor::Disc: return BaseFunctor::ShapeB;
    case PshFunctor::Under: return BaseFunctor::DiscreteB;
    case PshFunctor::Codisc: return BaseFunctor::UnderlyingB;
    case PshFunctor::Paths: return BaseFunctor::CodiscreteB;
    case PshFunctor::Flat: return BaseFunctor::Shp;
    case PshFunctor::Sharp: return BaseFunctor::Flat;
    case PshFunctor::Coshp: return BaseFunctor::Sharp;
    case PshFunctor::Pi:
    case PshFunctor::Shp:
    case PshFunctor::Quot:
      break;
  }
  throw std::invalid_argument(to_string(f) +
                              " does not act by precomposition on cubes");
}

PshPtr apply_psh(PshFunctor f, PshPtr g) {
  switch (f) {
    case PshFunctor::Pi: return cohpi(g);
    case PshFunctor::Disc: return lift_functor(BaseFunctor::ShapeB, g);
    case PshFunctor::Under: return lift_functor(BaseFunctor::DiscreteB, g);
    case PshFunctor::Codisc: return lift_functor(BaseFunctor::UnderlyingB, g);
    case PshFunctor::Paths: return lift_functor(BaseFunctor::CodiscreteB, g);
    case PshFunctor::Flat: return lift_functor(BaseFunctor::Shp, g);
    case PshFunctor::Sharp: return lift_functor(BaseFunctor::Flat, g);
    case PshFunctor::Coshp: return lift_functor(BaseFunctor::Sharp, g);
    case PshFunctor::Shp: return lift_functor(BaseFunctor::ShapeB, cohpi(g));
    case PshFunctor::Quot: return shape_quotient(g).quotient;
  }
  throw std::logic_error("unknown functor");
}

Substitution apply_psh(PshFunctor f, const Substitution& s) {
  switch (f) {
    case PshFunctor::Pi: return cohpi_sub(s);
    case PshFunctor::Disc: return lift_substitution(BaseFunctor::ShapeB, s);
    case PshFunctor::Under: return lift_substitution(BaseFunctor::DiscreteB, s);
    case PshFunctor::Codisc: return lift_substitution(BaseFunctor::UnderlyingB, s);
    case PshFunctor::Paths: return lift_substitution(BaseFunctor::CodiscreteB, s);
    case PshFunctor::Flat: return lift_substitution(BaseFunctor::Shp, s);
    case PshFunctor::Sharp: return lift_substitution(BaseFunctor::Flat, s);
    case PshFunctor::Coshp: return lift_substitution(BaseFunctor::Sharp, s);
    case PshFunctor::Shp: return lift_substitution(BaseFunctor::ShapeB, cohpi_sub(s));
    case PshFunctor::Quot: return quot_sub(s);
  }
  throw std::logic_error("unknown functor");
}

Substitution kappa_psh(PshPtr g) { return lift_transform(BaseTransform::Varsigma, g); }
Substitution iota_psh(PshPtr g) { return lift_transform(BaseTransform::Kappa, g); }
Substitution theta_psh(PshPtr g) { return lift_transform(BaseTransform::Iota, g); }

Substitution varsigma0_psh(PshPtr g) { return shape_quotient(g).projection; }

Substitution varsigma_psh(PshPtr g) {
  if (g->site != Site::BPCube) throw std::invalid_argument("the shape unit acts on bridge/path presheaves");
  const SiteCat& cat = g->cat();
  ShapeQuotient q = shape_quotient(g);
  Substitution r;
  r.src = g;
  r.dst = apply_psh(PshFunctor::Shp, g);
  r.comp.resize(g->levels());
  for (int w = 0; w < g->levels(); ++w) {
    const FaceMap zf = path_zero_fill(cat.cube(w));
    r.comp[w].resize(g->size_at(w));
    for (int c = 0; c < g->size_at(w); ++c)
      r.comp[w][c] = q.projection.comp[cat.index_of(zf.dom)][g->restrict_cell(w, c, zf)];
  }
  return r;
}

Substitution kappa_quot_psh(PshPtr g) {
  if (g->site != Site::BPCube) throw std::invalid_argument("the shape comparison acts on bridge/path presheaves");
  const SiteCat& cat = g->cat();
  ShapeQuotient q = shape_quotient(g);
  Substitution r;
  r.src = apply_psh(PshFunctor::Shp, g);
  r.dst = q.quotient;
  r.comp.resize(g->levels());
  for (int w = 0; w < g->levels(); ++w) {
    const FaceMap sig = transform_component(BaseTransform::Varsigma, cat.cube(w));
    r.comp[w].resize(r.src->size_at(w));
    for (int c = 0; c < r.src->size_at(w); ++c)
      r.comp[w][c] = q.quotient->restrict_cell(cat.index_of(sig.cod), c, sig);
  }
  return r;
}

Substitution varsigma_bar_psh(PshPtr x) {
  if (x->site != Site::Cube) throw std::invalid_argument("the comparison acts on plain cubical presheaves");
  const SiteCat& scat = x->cat();
  PshPtr dx = lift_functor(BaseFunctor::ShapeB, x);
  const SiteCat& tcat = dx->cat();
  ShapeQuotient q = shape_quotient(dx);
  Substitution r;
  r.src = x;
  r.dst = lift_functor(BaseFunctor::DiscreteB, q.quotient);
  r.comp.resize(x->levels());
  for (int v = 0; v < x->levels(); ++v)
    r.comp[v] = q.projection.comp[tcat.index_of(apply_base_functor(BaseFunctor::DiscreteB, scat.cube(v)))];
  return r;
}

std::string to_string(TowerPair p) {
  switch (p) {
    case TowerPair::PiDisc: return "pi -| disc";
    case TowerPair::DiscUnder: return "disc -| under";
    case TowerPair::UnderCodisc: return "under -| codisc";
    case TowerPair::CodiscPaths: return "codisc -| paths";
    case TowerPair::ShpFlat: return "shp -| flat";
    case TowerPair::FlatSharp: return "flat -| sharp";
    case TowerPair::SharpCoshp: return "sharp -| coshp";
  }
  return "?";
}

PshFunctor left_of(TowerPair p) {
  switch (p) {
    case TowerPair::PiDisc: return PshFunctor::Pi;
    case TowerPair::DiscUnder: return PshFunctor::Disc;
    case TowerPair::UnderCodisc: return PshFunctor::Under;
    case TowerPair::CodiscPaths: return PshFunctor::Codisc;
    case TowerPair::ShpFlat: return PshFunctor::Shp;
    case TowerPair::FlatSharp: return PshFunctor::Flat;
    case TowerPair::SharpCoshp: return PshFunctor::Sharp;
  }
  throw std::logic_error("unknown pair");
}

PshFunctor right_of(TowerPair p) {
  switch (p) {
    case TowerPair::PiDisc: return PshFunctor::Disc;
    case TowerPair::DiscUnder: return PshFunctor::Under;
    case TowerPair::UnderCodisc: return PshFunctor::Codisc;
    case TowerPair::CodiscPaths: return PshFunctor::Paths;
    case TowerPair::ShpFlat: return PshFunctor::Flat;
    case TowerPair::FlatSharp: return PshFunctor::Sharp;
    case TowerPair::SharpCoshp: return PshFunctor::Coshp;
  }
  throw std::logic_error("unknown pair");
}

namespace {

Substitution identity_comparison(PshPtr src, PshPtr dst) {
  if (!(*src == *dst)) {
    // The endpoints must be table-equal for an identity comparison.
    throw std::logic_error("identity comparison endpoints differ");
  }
  Substitution s = id_subst(src);
  s.dst = dst;
  return s;
}

}  // namespace

Substitution unit_of(TowerPair p, PshPtr g) {
  switch (p) {
    case TowerPair::PiDisc:
      return varsigma_psh(g);
    case TowerPair::DiscUnder:
      return identity_comparison(g, apply_psh(PshFunctor::Under, apply_psh(PshFunctor::Disc, g)));
    case TowerPair::UnderCodisc:
      return retarget(iota_psh(g), g, apply_psh(PshFunctor::Codisc, apply_psh(PshFunctor::Under, g)));
    case TowerPair::CodiscPaths:
      return identity_comparison(g, apply_psh(PshFunctor::Paths, apply_psh(PshFunctor::Codisc, g)));
    case TowerPair::ShpFlat:
      return retarget(varsigma_psh(g), g, apply_psh(PshFunctor::Flat, apply_psh(PshFunctor::Shp, g)));
    case TowerPair::FlatSharp:
      return retarget(iota_psh(g), g, apply_psh(PshFunctor::Sharp, apply_psh(PshFunctor::Flat, g)));
    case TowerPair::SharpCoshp:
      return retarget(iota_psh(g), g, apply_psh(PshFunctor::Coshp, apply_psh(PshFunctor::Sharp, g)));
  }
  throw std::logic_error("unknown pair");
}

Substitution counit_of(TowerPair p, PshPtr g) {
  switch (p) {
    case TowerPair::PiDisc:
      return invert(varsigma_bar_psh(g));
    case TowerPair::DiscUnder:
      return retarget(kappa_psh(g), apply_psh(PshFunctor::Disc, apply_psh(PshFunctor::Under, g)), g);
    case TowerPair::UnderCodisc:
      return identity_comparison(apply_psh(PshFunctor::Under, apply_psh(PshFunctor::Codisc, g)), g);
    case TowerPair::CodiscPaths:
      return retarget(theta_psh(g), apply_psh(PshFunctor::Codisc, apply_psh(PshFunctor::Paths, g)), g);
    case TowerPair::ShpFlat: {
      PshPtr flat_g = apply_psh(PshFunctor::Flat, g);
      Substitution down = invert(varsigma_psh(flat_g));  // shp flat G -> flat G
      return compose_subst(retarget(kappa_psh(g), flat_g, g), down);
    }
    case TowerPair::FlatSharp:
      return retarget(kappa_psh(g), apply_psh(PshFunctor::Flat, apply_psh(PshFunctor::Sharp, g)), g);
    case TowerPair::SharpCoshp:
      return retarget(theta_psh(g), apply_psh(PshFunctor::Sharp, apply_psh(PshFunctor::Coshp, g)), g);
  }
  throw std::logic_error("unknown pair");
}

Substitution transpose(TowerPair p, PshPtr g, const Substitution& sigma) {
  return compose_subst(apply_psh(right_of(p), sigma), unit_of(p, g));
}

Substitution transpose_inv(TowerPair p, PshPtr delta, const Substitution& tau) {
  return compose_subst(counit_of(p, delta), apply_psh(left_of(p), tau));
}

namespace {

struct GenSpec {
  std::vector<FaceMap> gens;
};

GenSpec d1_generators(Site site) {
  GenSpec g;
  if (site == Site::BPCube) {
    const Cube x1{Site::BPCube, 1, 0};
    const Cube x2{Site::BPCube, 0, 1};
    g.gens.push_back(weakening(x1, 0));                   // bridge degeneracy
    g.gens.push_back(weakening(x2, 0));                   // path degeneracy
    g.gens.push_back(FaceMap{Cube{Site::BPCube, 0, 0}, x1, {VAL_ZERO}});
    g.gens.push_back(FaceMap{Cube{Site::BPCube, 0, 0}, x1, {VAL_ONE}});
    g.gens.push_back(FaceMap{x1, x2, {var_val(0)}});      // bridge underlying a path
  } else {
    const Cube x1{Site::Cube, 1, 0};
    g.gens.push_back(weakening(x1, 0));
    g.gens.push_back(FaceMap{Cube{Site::Cube, 0, 0}, x1, {VAL_ZERO}});
    g.gens.push_back(FaceMap{Cube{Site::Cube, 0, 0}, x1, {VAL_ONE}});
  }
  return g;
}

}  // namespace

std::vector<PshPtr> enumerate_presheaves_d1(Site site, int max_cells) {
  const SiteCat& cat = site_cat(site, 1);
  const int n = (int)cat.cubes().size();
  const GenSpec spec = d1_generators(site);
  std::vector<PshPtr> out;

  // iterate cell-count vectors in lexicographic order
  std::vector<int> counts(n, 0);
  auto next_counts = [&]() {
    for (int i = n - 1; i >= 0; --i) {
      if (counts[i] < max_cells) {
        ++counts[i];
        return true;
      }
      counts[i] = 0;
    }
    return false;
  };

  bool more = true;
  for (; more; more = next_counts()) {
    // generator tables: for gen (dom U, cod W): counts[W] entries with counts[U] choices
    bool impossible = false;
    std::vector<std::pair<int, int>> shape;  // per gen: (cod idx, dom idx)
    int total_entries = 0;
    for (const FaceMap& gm : spec.gens) {
      const int ci = cat.index_of(gm.cod), di = cat.index_of(gm.dom);
      if (counts[ci] > 0 && counts[di] == 0) impossible = true;
      shape.emplace_back(ci, di);
      total_entries += counts[ci];
    }
    if (impossible) continue;

    std::vector<int> entry(total_entries, 0);
    auto radix_of = [&](int pos) {
      int acc = 0;
      for (int gi = 0; gi < (int)spec.gens.size(); ++gi) {
        if (pos < acc + counts[shape[gi].first]) return counts[shape[gi].second];
        acc += counts[shape[gi].first];
      }
      return 1;
    };
    bool entries_more = true;
    auto next_entry = [&]() {
      for (int i = total_entries - 1; i >= 0; --i) {
        if (entry[i] + 1 < radix_of(i)) {
          ++entry[i];
          return true;
        }
        entry[i] = 0;
      }
      return false;
    };

    for (; entries_more; entries_more = next_entry()) {
      // closure: restriction tables keyed by (cod level, dom level, rank)
      std::vector<std::vector<std::vector<std::vector<int>>>> table(
          n, std::vector<std::vector<std::vector<int>>>(n));
      std::vector<std::vector<std::vector<char>>> known(n, std::vector<std::vector<char>>(n));
      for (int w = 0; w < n; ++w)
        for (int v = 0; v < n; ++v) {
          const std::size_t k = cat.hom(cat.cube(v), cat.cube(w)).size();
          table[w][v].assign(k, {});
          known[w][v].assign(k, 0);
        }
      struct Slot {
        int w, v, r;
      };
      std::vector<Slot> queue;
      bool ok = true;
      auto put = [&](int w, int v, int r, std::vector<int> t) {
        if (known[w][v][r]) {
          if (table[w][v][r] != t) ok = false;
          return;
        }
        known[w][v][r] = 1;
        table[w][v][r] = std::move(t);
        queue.push_back(Slot{w, v, r});
      };
      for (int w = 0; w < n; ++w) {
        std::vector<int> idt(counts[w]);
        std::iota(idt.begin(), idt.end(), 0);
        put(w, w, hom_rank(id_map(cat.cube(w))), std::move(idt));
      }
      int cursor = 0;
      std::vector<std::vector<int>> gen_tables(spec.gens.size());
      for (int gi = 0; gi < (int)spec.gens.size() && ok; ++gi) {
        const int ci = shape[gi].first;
        std::vector<int> t(counts[ci]);
        for (int e = 0; e < counts[ci]; ++e) t[e] = entry[cursor + e];
        cursor += counts[ci];
        gen_tables[gi] = t;
        put(ci, shape[gi].second, hom_rank(spec.gens[gi]), std::move(t));
      }
      // close under right extension by generators: known phi, generator g => table for phi . g
      std::size_t head = 0;
      while (ok && head < queue.size()) {
        const Slot s = queue[head++];
        const FaceMap phi = cat.hom(cat.cube(s.v), cat.cube(s.w))[s.r];
        const std::vector<int> t_phi = table[s.w][s.v][s.r];
        for (int gi = 0; gi < (int)spec.gens.size() && ok; ++gi) {
          if (!(spec.gens[gi].cod == phi.dom)) continue;
          const FaceMap psi = compose(phi, spec.gens[gi]);
          std::vector<int> t(counts[s.w]);
          for (int c = 0; c < counts[s.w]; ++c) t[c] = gen_tables[gi][t_phi[c]];
          put(s.w, cat.index_of(psi.dom), hom_rank(psi), std::move(t));
        }
      }
      if (!ok) continue;
      for (int w = 0; w < n; ++w)
        for (int v = 0; v < n; ++v)
          for (int r = 0; r < (int)table[w][v].size(); ++r)
            if (!known[w][v][r])
              throw std::logic_error("generators do not reach every face map at D=1");
      // assemble and validate
      std::vector<std::vector<std::string>> names(n);
      for (int w = 0; w < n; ++w)
        for (int c = 0; c < counts[w]; ++c) names[w].push_back(std::string(1, char('a' + c)));
      Presheaf cand = make_presheaf_skeleton(site, 1, names);
      for (int w = 0; w < n; ++w)
        for (int v = 0; v < n; ++v)
          for (int r = 0; r < (int)table[w][v].size(); ++r) cand.rest[w][v][r] = table[w][v][r];
      if (validate_presheaf(cand).ok) out.push_back(std::make_shared<const Presheaf>(std::move(cand)));
    }
  }
  return out;
}

}  // namespace bpcube
