#include "bpcube/cwf.hpp"

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace bpcube {

namespace {

long long families_ceiling(long long requested) {
  if (requested > 0) return requested;
  if (const char* s = std::getenv("BPCUBE_MAX_FAMILIES")) {
    char* end = nullptr;
    const long long v = std::strtoll(s, &end, 10);
    if (end != s && *end == '\0' && v > 0) return v;
  }
  return 1000000;
}

// offset[w][c] = index in Gamma.T of the first cell lying over cell c.
std::vector<std::vector<int>> fiber_offsets(const DependentType& t) {
  std::vector<std::vector<int>> off(t.levels());
  for (int w = 0; w < t.levels(); ++w) {
    off[w].resize(t.fibers[w].size());
    int run = 0;
    for (std::size_t c = 0; c < t.fibers[w].size(); ++c) {
      off[w][c] = run;
      run += static_cast<int>(t.fibers[w][c].size());
    }
  }
  return off;
}

void check_ctx(const TypePtr& t, const char* who) {
  if (!t || !t->ctx) throw std::invalid_argument(std::string(who) + ": null type");
}

}  // namespace

// ---------------------------------------------------------------------------
// DependentType basics
// ---------------------------------------------------------------------------

long long DependentType::total_fiber_cells() const {
  long long n = 0;
  for (const auto& lvl : fibers)
    for (const auto& f : lvl) n += static_cast<long long>(f.size());
  return n;
}

int DependentType::term_index(int w, int cell, const std::string& name) const {
  const auto& f = fibers[w][cell];
  for (std::size_t i = 0; i < f.size(); ++i)
    if (f[i] == name) return static_cast<int>(i);
  return -1;
}

int DependentType::restrict_fiber(int w, int cell, int term,
                                  const FaceMap& phi) const {
  const int v = cat().index_of(phi.dom);
  return rest[w][v][hom_rank(phi)][cell][term];
}

bool operator==(const DependentType& a, const DependentType& b) {
  if (!a.ctx || !b.ctx) return a.ctx == b.ctx;
  return *a.ctx == *b.ctx && a.fibers == b.fibers && a.rest == b.rest;
}

bool operator==(const Term& a, const Term& b) {
  if (!a.type || !b.type) return a.type == b.type && a.comp == b.comp;
  return *a.type == *b.type && a.comp == b.comp;
}

bool operator==(const TypeMorphism& a, const TypeMorphism& b) {
  if (!a.src || !b.src || !a.dst || !b.dst)
    return a.src == b.src && a.dst == b.dst && a.map == b.map;
  return *a.src == *b.src && *a.dst == *b.dst && a.map == b.map;
}

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

Validation validate_type(const DependentType& t) {
  Validation r;
  auto bad = [&](const std::string& msg) {
    r.ok = false;
    if (r.problems.size() < 32) r.problems.push_back(msg);
  };
  if (!t.ctx) {
    bad("no context");
    return r;
  }
  const Presheaf& g = *t.ctx;
  const SiteCat& sc = g.cat();
  const int L = g.levels();
  if (static_cast<int>(t.fibers.size()) != L ||
      static_cast<int>(t.rest.size()) != L) {
    bad("fiber/restriction tables do not match the context's level count");
    return r;
  }
  for (int w = 0; w < L; ++w) {
    if (static_cast<int>(t.fibers[w].size()) != g.size_at(w)) {
      bad("level " + std::to_string(w) + ": fiber list size mismatch");
      return r;
    }
    for (int c = 0; c < g.size_at(w); ++c) {
      const auto& f = t.fibers[w][c];
      for (std::size_t i = 0; i < f.size(); ++i)
        for (std::size_t j = i + 1; j < f.size(); ++j)
          if (f[i] == f[j])
            bad("duplicate fiber element '" + f[i] + "' over " +
                g.cells[w][c]);
    }
    if (static_cast<int>(t.rest[w].size()) != L) {
      bad("level " + std::to_string(w) + ": restriction table level mismatch");
      return r;
    }
    for (int v = 0; v < L; ++v) {
      const auto& homs = sc.hom(v, w);
      if (t.rest[w][v].size() != homs.size()) {
        bad("restriction table row count mismatch at levels " +
            std::to_string(w) + "<-" + std::to_string(v));
        return r;
      }
      for (std::size_t rr = 0; rr < homs.size(); ++rr) {
        if (static_cast<int>(t.rest[w][v][rr].size()) != g.size_at(w)) {
          bad("restriction row has wrong cell count");
          return r;
        }
        for (int c = 0; c < g.size_at(w); ++c) {
          const int c2 = g.rest[w][v][rr][c];
          const int nTarget = static_cast<int>(t.fibers[v][c2].size());
          const auto& row = t.rest[w][v][rr][c];
          if (static_cast<int>(row.size()) != t.fiber_size(w, c)) {
            bad("restriction row has wrong fiber size");
            return r;
          }
          for (int x = 0; x < static_cast<int>(row.size()); ++x)
            if (row[x] < 0 || row[x] >= nTarget)
              bad("restriction sends a fiber element out of range over " +
                  g.cells[w][c]);
        }
      }
    }
  }
  if (!r.ok) return r;
  // identity law
  for (int w = 0; w < L && r.ok; ++w) {
    const int idr = hom_rank(id_map(sc.cube(w)));
    for (int c = 0; c < g.size_at(w); ++c)
      for (int x = 0; x < t.fiber_size(w, c); ++x)
        if (t.rest[w][w][idr][c][x] != x)
          bad("identity restriction moves a fiber element over " +
              g.cells[w][c]);
  }
  // composition law: (x | phi) | psi = x | (phi o psi)
  for (int w = 0; w < L; ++w)
    for (int v = 0; v < L; ++v) {
      const auto& phis = sc.hom(v, w);
      for (std::size_t rp = 0; rp < phis.size(); ++rp)
        for (int u = 0; u < L; ++u) {
          const auto& psis = sc.hom(u, v);
          for (std::size_t rq = 0; rq < psis.size(); ++rq) {
            const int rc = hom_rank(compose(phis[rp], psis[rq]));
            for (int c = 0; c < g.size_at(w); ++c) {
              const int cphi = g.rest[w][v][rp][c];
              for (int x = 0; x < t.fiber_size(w, c); ++x) {
                const int two = t.rest[v][u][rq][cphi][t.rest[w][v][rp][c][x]];
                const int one = t.rest[w][u][rc][c][x];
                if (one != two) {
                  bad("restriction fails to compose over " + g.cells[w][c] +
                      " element " + t.fibers[w][c][x]);
                  if (!r.ok && r.problems.size() >= 32) return r;
                }
              }
            }
          }
        }
    }
  return r;
}

Validation validate_term(const Term& t) {
  Validation r;
  auto bad = [&](const std::string& msg) {
    r.ok = false;
    if (r.problems.size() < 32) r.problems.push_back(msg);
  };
  if (!t.type || !t.type->ctx) {
    bad("no type");
    return r;
  }
  const DependentType& ty = *t.type;
  const Presheaf& g = *ty.ctx;
  const SiteCat& sc = g.cat();
  const int L = g.levels();
  if (static_cast<int>(t.comp.size()) != L) {
    bad("component count does not match the context's level count");
    return r;
  }
  for (int w = 0; w < L; ++w) {
    if (static_cast<int>(t.comp[w].size()) != g.size_at(w)) {
      bad("level " + std::to_string(w) + ": component size mismatch");
      return r;
    }
    for (int c = 0; c < g.size_at(w); ++c)
      if (t.comp[w][c] < 0 || t.comp[w][c] >= ty.fiber_size(w, c)) {
        bad("component out of range over " + g.cells[w][c]);
        return r;
      }
  }
  for (int w = 0; w < L; ++w)
    for (int v = 0; v < L; ++v) {
      const auto& homs = sc.hom(v, w);
      for (std::size_t rr = 0; rr < homs.size(); ++rr)
        for (int c = 0; c < g.size_at(w); ++c) {
          const int c2 = g.rest[w][v][rr][c];
          if (ty.rest[w][v][rr][c][t.comp[w][c]] != t.comp[v][c2])
            bad("section breaks over " + g.cells[w][c] + " along " +
                to_string(homs[rr]));
        }
    }
  return r;
}

Validation validate_type_morphism(const TypeMorphism& m) {
  Validation r;
  auto bad = [&](const std::string& msg) {
    r.ok = false;
    if (r.problems.size() < 32) r.problems.push_back(msg);
  };
  if (!m.src || !m.dst || !m.src->ctx || !m.dst->ctx) {
    bad("missing source or target type");
    return r;
  }
  if (*m.src->ctx != *m.dst->ctx) {
    bad("source and target live over different contexts");
    return r;
  }
  const Presheaf& g = *m.src->ctx;
  const SiteCat& sc = g.cat();
  const int L = g.levels();
  if (static_cast<int>(m.map.size()) != L) {
    bad("component count mismatch");
    return r;
  }
  for (int w = 0; w < L; ++w) {
    if (static_cast<int>(m.map[w].size()) != g.size_at(w)) {
      bad("component size mismatch at level " + std::to_string(w));
      return r;
    }
    for (int c = 0; c < g.size_at(w); ++c) {
      if (static_cast<int>(m.map[w][c].size()) != m.src->fiber_size(w, c)) {
        bad("fiber map size mismatch over " + g.cells[w][c]);
        return r;
      }
      for (int x : m.map[w][c])
        if (x < 0 || x >= m.dst->fiber_size(w, c)) {
          bad("fiber map out of range over " + g.cells[w][c]);
          return r;
        }
    }
  }
  for (int w = 0; w < L; ++w)
    for (int v = 0; v < L; ++v) {
      const auto& homs = sc.hom(v, w);
      for (std::size_t rr = 0; rr < homs.size(); ++rr)
        for (int c = 0; c < g.size_at(w); ++c) {
          const int c2 = g.rest[w][v][rr][c];
          for (int x = 0; x < m.src->fiber_size(w, c); ++x) {
            const int viaDst = m.dst->rest[w][v][rr][c][m.map[w][c][x]];
            const int viaSrc = m.map[v][c2][m.src->rest[w][v][rr][c][x]];
            if (viaDst != viaSrc)
              bad("map is not natural over " + g.cells[w][c] + " along " +
                  to_string(homs[rr]));
          }
        }
    }
  return r;
}

void require_valid(const DependentType& t, const std::string& what) {
  const Validation v = validate_type(t);
  if (!v.ok)
    throw std::invalid_argument(what + ": " +
                                (v.problems.empty() ? "invalid type"
                                                    : v.problems.front()));
}

void require_valid(const Term& t, const std::string& what) {
  const Validation v = validate_term(t);
  if (!v.ok)
    throw std::invalid_argument(what + ": " +
                                (v.problems.empty() ? "invalid term"
                                                    : v.problems.front()));
}

void require_valid(const TypeMorphism& m, const std::string& what) {
  const Validation v = validate_type_morphism(m);
  if (!v.ok)
    throw std::invalid_argument(what + ": " +
                                (v.problems.empty() ? "invalid map"
                                                    : v.problems.front()));
}

DependentType make_type_skeleton(
    PshPtr ctx, std::vector<std::vector<std::vector<std::string>>> fibers) {
  if (!ctx) throw std::invalid_argument("make_type_skeleton: null context");
  DependentType t;
  t.ctx = std::move(ctx);
  t.fibers = std::move(fibers);
  const SiteCat& sc = t.ctx->cat();
  const int L = t.ctx->levels();
  t.rest.resize(L);
  for (int w = 0; w < L; ++w) {
    t.rest[w].resize(L);
    for (int v = 0; v < L; ++v) {
      t.rest[w][v].resize(sc.hom(v, w).size());
      for (auto& row : t.rest[w][v]) {
        row.resize(t.ctx->size_at(w));
        for (int c = 0; c < t.ctx->size_at(w); ++c)
          row[c].assign(t.fibers[w][c].size(), -1);
      }
    }
  }
  return t;
}

// ---------------------------------------------------------------------------
// Substitution
// ---------------------------------------------------------------------------

TypePtr subst_type(const TypePtr& t, const Substitution& sigma) {
  check_ctx(t, "subst_type");
  if (!sigma.src || !sigma.dst)
    throw std::invalid_argument("subst_type: incomplete substitution");
  if (*sigma.dst != *t->ctx)
    throw std::invalid_argument(
        "subst_type: substitution target differs from the type's context");
  DependentType r;
  r.ctx = sigma.src;
  const SiteCat& sc = r.ctx->cat();
  const int L = r.ctx->levels();
  r.fibers.resize(L);
  r.rest.resize(L);
  for (int w = 0; w < L; ++w) {
    const int n = r.ctx->size_at(w);
    r.fibers[w].resize(n);
    for (int d = 0; d < n; ++d) r.fibers[w][d] = t->fibers[w][sigma.comp[w][d]];
    r.rest[w].resize(L);
    for (int v = 0; v < L; ++v) {
      const std::size_t nr = sc.hom(v, w).size();
      r.rest[w][v].resize(nr);
      for (std::size_t rr = 0; rr < nr; ++rr) {
        r.rest[w][v][rr].resize(n);
        for (int d = 0; d < n; ++d)
          r.rest[w][v][rr][d] = t->rest[w][v][rr][sigma.comp[w][d]];
      }
    }
  }
  return std::make_shared<const DependentType>(std::move(r));
}

Term subst_term(const Term& t, const Substitution& sigma) {
  if (!t.type) throw std::invalid_argument("subst_term: null term");
  Term r;
  r.type = subst_type(t.type, sigma);
  const int L = r.type->ctx->levels();
  r.comp.resize(L);
  for (int w = 0; w < L; ++w) {
    const int n = r.type->ctx->size_at(w);
    r.comp[w].resize(n);
    for (int d = 0; d < n; ++d) r.comp[w][d] = t.comp[w][sigma.comp[w][d]];
  }
  return r;
}

// ---------------------------------------------------------------------------
// Context extension
// ---------------------------------------------------------------------------

ExtContext ext_context(const TypePtr& t) {
  check_ctx(t, "ext_context");
  const Presheaf& g = *t->ctx;
  const SiteCat& sc = g.cat();
  const int L = g.levels();
  const auto off = fiber_offsets(*t);

  Presheaf e;
  e.site = g.site;
  e.D = g.D;
  e.cells.resize(L);
  for (int w = 0; w < L; ++w)
    for (int c = 0; c < g.size_at(w); ++c)
      for (const auto& name : t->fibers[w][c])
        e.cells[w].push_back(g.cells[w][c] + "|" + name);
  e.rest.resize(L);
  for (int w = 0; w < L; ++w) {
    e.rest[w].resize(L);
    for (int v = 0; v < L; ++v) {
      const std::size_t nr = sc.hom(v, w).size();
      e.rest[w][v].resize(nr);
      for (std::size_t rr = 0; rr < nr; ++rr) {
        auto& row = e.rest[w][v][rr];
        row.resize(e.cells[w].size());
        for (int c = 0; c < g.size_at(w); ++c) {
          const int c2 = g.rest[w][v][rr][c];
          for (int k = 0; k < t->fiber_size(w, c); ++k)
            row[off[w][c] + k] = off[v][c2] + t->rest[w][v][rr][c][k];
        }
      }
    }
  }

  ExtContext x;
  x.ctx = std::make_shared<const Presheaf>(std::move(e));
  x.offset = off;
  x.display.src = x.ctx;
  x.display.dst = t->ctx;
  x.display.comp.resize(L);
  for (int w = 0; w < L; ++w) {
    x.display.comp[w].resize(x.ctx->size_at(w));
    for (int c = 0; c < g.size_at(w); ++c)
      for (int k = 0; k < t->fiber_size(w, c); ++k)
        x.display.comp[w][off[w][c] + k] = c;
  }
  x.var.type = subst_type(t, x.display);
  x.var.comp.resize(L);
  for (int w = 0; w < L; ++w) {
    x.var.comp[w].resize(x.ctx->size_at(w));
    for (int c = 0; c < g.size_at(w); ++c)
      for (int k = 0; k < t->fiber_size(w, c); ++k)
        x.var.comp[w][off[w][c] + k] = k;
  }
  return x;
}

Substitution pairing(const Substitution& sigma, const TypePtr& t,
                     const Term& s) {
  check_ctx(t, "pairing");
  const TypePtr ts = subst_type(t, sigma);
  if (!s.type || *s.type != *ts)
    throw std::invalid_argument(
        "pairing: term is not a section of the substituted type");
  const ExtContext e = ext_context(t);
  Substitution r;
  r.src = sigma.src;
  r.dst = e.ctx;
  const int L = r.src->levels();
  r.comp.resize(L);
  for (int w = 0; w < L; ++w) {
    const int n = r.src->size_at(w);
    r.comp[w].resize(n);
    for (int d = 0; d < n; ++d)
      r.comp[w][d] = e.offset[w][sigma.comp[w][d]] + s.comp[w][d];
  }
  return r;
}

Substitution ext_subst(const Substitution& sigma, const TypePtr& t) {
  const TypePtr ts = subst_type(t, sigma);
  const ExtContext ed = ext_context(ts);
  const Substitution sp = compose_subst(sigma, ed.display);
  return pairing(sp, t, ed.var);
}

// ---------------------------------------------------------------------------
// Unit type, Sigma, Pi, Id, propositions
// ---------------------------------------------------------------------------

namespace {

// A type with the same 0/1-element fiber pattern everywhere:
// keep[w][c] says whether the fiber over cell c is {"*"} or empty.
TypePtr subsingleton_type(PshPtr ctx,
                          const std::function<bool(int, int)>& keep) {
  const Presheaf& g = *ctx;
  const int L = g.levels();
  std::vector<std::vector<std::vector<std::string>>> fibers(L);
  for (int w = 0; w < L; ++w) {
    fibers[w].resize(g.size_at(w));
    for (int c = 0; c < g.size_at(w); ++c)
      if (keep(w, c)) fibers[w][c].push_back("*");
  }
  DependentType t = make_type_skeleton(ctx, std::move(fibers));
  const SiteCat& sc = g.cat();
  for (int w = 0; w < L; ++w)
    for (int v = 0; v < L; ++v)
      for (std::size_t rr = 0; rr < sc.hom(v, w).size(); ++rr)
        for (int c = 0; c < g.size_at(w); ++c)
          if (!t.fibers[w][c].empty()) {
            const int c2 = g.rest[w][v][rr][c];
            if (t.fibers[v][c2].empty())
              throw std::logic_error(
                  "subsingleton type is not closed under restriction");
            t.rest[w][v][rr][c][0] = 0;
          }
  return std::make_shared<const DependentType>(std::move(t));
}

}  // namespace

TypePtr unit_type(PshPtr ctx) {
  if (!ctx) throw std::invalid_argument("unit_type: null context");
  return subsingleton_type(std::move(ctx), [](int, int) { return true; });
}

Term unit_term(const TypePtr& u) {
  check_ctx(u, "unit_term");
  Term t;
  t.type = u;
  const int L = u->ctx->levels();
  t.comp.resize(L);
  for (int w = 0; w < L; ++w) {
    t.comp[w].assign(u->ctx->size_at(w), 0);
    for (int c = 0; c < u->ctx->size_at(w); ++c)
      if (u->fiber_size(w, c) != 1)
        throw std::invalid_argument("unit_term: fiber is not a single point");
  }
  return t;
}

TypePtr sigma_type(const TypePtr& a, const TypePtr& b) {
  check_ctx(a, "sigma_type");
  check_ctx(b, "sigma_type");
  const ExtContext ea = ext_context(a);
  if (*b->ctx != *ea.ctx)
    throw std::invalid_argument(
        "sigma_type: second component must live over the extended context");
  const Presheaf& g = *a->ctx;
  const SiteCat& sc = g.cat();
  const int L = g.levels();

  // soff[w][c][x] = first pair index with first component x
  std::vector<std::vector<std::vector<int>>> soff(L);
  std::vector<std::vector<std::vector<std::string>>> fibers(L);
  for (int w = 0; w < L; ++w) {
    soff[w].resize(g.size_at(w));
    fibers[w].resize(g.size_at(w));
    for (int c = 0; c < g.size_at(w); ++c) {
      int run = 0;
      soff[w][c].resize(a->fiber_size(w, c) + 1);
      for (int x = 0; x < a->fiber_size(w, c); ++x) {
        soff[w][c][x] = run;
        const int ec = ea.offset[w][c] + x;
        for (int y = 0; y < b->fiber_size(w, ec); ++y)
          fibers[w][c].push_back("(" + a->fibers[w][c][x] + "," +
                                 b->fibers[w][ec][y] + ")");
        run += b->fiber_size(w, ec);
      }
      soff[w][c][a->fiber_size(w, c)] = run;
    }
  }

  DependentType t = make_type_skeleton(a->ctx, std::move(fibers));
  for (int w = 0; w < L; ++w)
    for (int v = 0; v < L; ++v)
      for (std::size_t rr = 0; rr < sc.hom(v, w).size(); ++rr)
        for (int c = 0; c < g.size_at(w); ++c) {
          const int c2 = g.rest[w][v][rr][c];
          for (int x = 0; x < a->fiber_size(w, c); ++x) {
            const int ec = ea.offset[w][c] + x;
            const int x2 = a->rest[w][v][rr][c][x];
            for (int y = 0; y < b->fiber_size(w, ec); ++y) {
              const int y2 = b->rest[w][v][rr][ec][y];
              t.rest[w][v][rr][c][soff[w][c][x] + y] = soff[v][c2][x2] + y2;
            }
          }
        }
  return std::make_shared<const DependentType>(std::move(t));
}

namespace {

// Decomposes the k-th pair of Sigma A B over (w, c) into (x, y).
std::pair<int, int> sigma_split(const DependentType& a, const DependentType& b,
                                const std::vector<std::vector<int>>& aoff,
                                int w, int c, int k) {
  int x = 0;
  int run = 0;
  for (;; ++x) {
    const int nb = b.fiber_size(w, aoff[w][c] + x);
    if (k < run + nb) return {x, k - run};
    run += nb;
  }
}

}  // namespace

Term sigma_pair(const TypePtr& sigma_ab, const TypePtr& a, const TypePtr& b,
                const Term& ta, const Term& tb) {
  if (!ta.type || *ta.type != *a)
    throw std::invalid_argument("sigma_pair: first component has wrong type");
  const Substitution into = pairing(id_subst(a->ctx), a, ta);
  const TypePtr bexp = subst_type(b, into);
  if (!tb.type || *tb.type != *bexp)
    throw std::invalid_argument("sigma_pair: second component has wrong type");
  if (!sigma_ab || *sigma_ab != *sigma_type(a, b))
    throw std::invalid_argument("sigma_pair: not the matching pair type");
  const ExtContext ea = ext_context(a);
  const Presheaf& g = *a->ctx;
  const int L = g.levels();
  Term r;
  r.type = sigma_ab;
  r.comp.resize(L);
  for (int w = 0; w < L; ++w) {
    r.comp[w].resize(g.size_at(w));
    for (int c = 0; c < g.size_at(w); ++c) {
      int run = 0;
      for (int x = 0; x < ta.comp[w][c]; ++x)
        run += b->fiber_size(w, ea.offset[w][c] + x);
      r.comp[w][c] = run + tb.comp[w][c];
    }
  }
  return r;
}

Term sigma_fst(const TypePtr& sigma_ab, const TypePtr& a, const TypePtr& b,
               const Term& p) {
  if (!p.type || *p.type != *sigma_ab)
    throw std::invalid_argument("sigma_fst: term has wrong type");
  const ExtContext ea = ext_context(a);
  const Presheaf& g = *a->ctx;
  const int L = g.levels();
  Term r;
  r.type = a;
  r.comp.resize(L);
  for (int w = 0; w < L; ++w) {
    r.comp[w].resize(g.size_at(w));
    for (int c = 0; c < g.size_at(w); ++c)
      r.comp[w][c] = sigma_split(*a, *b, ea.offset, w, c, p.comp[w][c]).first;
  }
  return r;
}

Term sigma_snd(const TypePtr& sigma_ab, const TypePtr& a, const TypePtr& b,
               const Term& p) {
  const Term fst = sigma_fst(sigma_ab, a, b, p);
  const ExtContext ea = ext_context(a);
  const Presheaf& g = *a->ctx;
  const int L = g.levels();
  Term r;
  r.type = subst_type(b, pairing(id_subst(a->ctx), a, fst));
  r.comp.resize(L);
  for (int w = 0; w < L; ++w) {
    r.comp[w].resize(g.size_at(w));
    for (int c = 0; c < g.size_at(w); ++c)
      r.comp[w][c] = sigma_split(*a, *b, ea.offset, w, c, p.comp[w][c]).second;
  }
  return r;
}

// ---------------------------------------------------------------------------
// Pi
// ---------------------------------------------------------------------------

namespace {

// The enumerated fiber of Pi A B over one context cell: the slot grid, all
// natural families in a deterministic order, and a reverse lookup.  The
// enumeration depends only on fiber data reachable from the cell, so it is
// stable under substitution of the context.
struct PiFiberData {
  struct Slot {
    int v;         // level of the slot's face map
    int r;         // its rank in Hom(v, w)
    int cell;      // context cell at v under the face map
    int ext_cell;  // cell of Gamma.A the slot's B-fiber sits over
    int a;         // element of A's fiber the slot extends
    int domain;    // size of the B-fiber at ext_cell
  };
  std::vector<Slot> slots;
  std::vector<std::vector<int>> slot_of;  // [v][r] -> first slot index
  std::vector<std::vector<int>> fams;     // enumeration, DFS order
  std::map<std::vector<int>, int> index_of;
};

PiFiberData compute_pi_fiber(const DependentType& a, const DependentType& b,
                             const std::vector<std::vector<int>>& aoff, int w,
                             int c, long long maxfam) {
  const Presheaf& g = *a.ctx;
  const SiteCat& sc = g.cat();
  const int L = g.levels();
  PiFiberData d;
  d.slot_of.resize(L);
  for (int v = 0; v < L; ++v) {
    const auto& homs = sc.hom(v, w);
    d.slot_of[v].resize(homs.size());
    for (std::size_t rr = 0; rr < homs.size(); ++rr) {
      d.slot_of[v][rr] = static_cast<int>(d.slots.size());
      const int cphi = g.rest[w][v][rr][c];
      for (int aa = 0; aa < a.fiber_size(v, cphi); ++aa) {
        const int ec = aoff[v][cphi] + aa;
        d.slots.push_back(
            {v, static_cast<int>(rr), cphi, ec, aa, b.fiber_size(v, ec)});
      }
    }
  }

  std::vector<int> asg(d.slots.size(), -1);
  std::vector<int> trail;
  const std::function<bool(int, int)> force = [&](int s, int val) -> bool {
    if (asg[s] != -1) return asg[s] == val;
    asg[s] = val;
    trail.push_back(s);
    const auto& sl = d.slots[s];
    const FaceMap& phi = sc.hom(sl.v, w)[sl.r];
    for (int u = 0; u < L; ++u) {
      const auto& psis = sc.hom(u, sl.v);
      for (std::size_t rq = 0; rq < psis.size(); ++rq) {
        const int rc = hom_rank(compose(phi, psis[rq]));
        const int a2 = a.rest[sl.v][u][rq][sl.cell][sl.a];
        const int val2 = b.rest[sl.v][u][rq][sl.ext_cell][val];
        if (!force(d.slot_of[u][rc] + a2, val2)) return false;
      }
    }
    return true;
  };
  const std::function<void(int)> dfs = [&](int from) {
    int s = -1;
    for (int i = from; i < static_cast<int>(asg.size()); ++i)
      if (asg[i] == -1) {
        s = i;
        break;
      }
    if (s < 0) {
      if (static_cast<long long>(d.fams.size()) >= maxfam)
        throw limit_error(
            "function fiber exceeds the family ceiling (raise "
            "BPCUBE_MAX_FAMILIES to allow more)");
      d.index_of.emplace(asg, static_cast<int>(d.fams.size()));
      d.fams.push_back(asg);
      return;
    }
    for (int val = 0; val < d.slots[s].domain; ++val) {
      const std::size_t mark = trail.size();
      if (force(s, val)) dfs(s + 1);
      while (trail.size() > mark) {
        asg[trail.back()] = -1;
        trail.pop_back();
      }
    }
  };
  dfs(0);
  return d;
}

}  // namespace

TypePtr pi_type(const TypePtr& a, const TypePtr& b, long long max_families) {
  check_ctx(a, "pi_type");
  check_ctx(b, "pi_type");
  const long long maxfam = families_ceiling(max_families);
  const ExtContext ea = ext_context(a);
  if (*b->ctx != *ea.ctx)
    throw std::invalid_argument(
        "pi_type: body must live over the extended context");
  const Presheaf& g = *a->ctx;
  const SiteCat& sc = g.cat();
  const int L = g.levels();

  std::vector<std::vector<PiFiberData>> data(L);
  for (int w = 0; w < L; ++w) {
    data[w].reserve(g.size_at(w));
    for (int c = 0; c < g.size_at(w); ++c)
      data[w].push_back(compute_pi_fiber(*a, *b, ea.offset, w, c, maxfam));
  }

  std::vector<std::vector<std::vector<std::string>>> fibers(L);
  for (int w = 0; w < L; ++w) {
    fibers[w].resize(g.size_at(w));
    for (int c = 0; c < g.size_at(w); ++c)
      for (std::size_t k = 0; k < data[w][c].fams.size(); ++k)
        fibers[w][c].push_back("f" + std::to_string(k));
  }
  DependentType t = make_type_skeleton(a->ctx, std::move(fibers));

  for (int w = 0; w < L; ++w)
    for (int v = 0; v < L; ++v) {
      const auto& psis = sc.hom(v, w);
      for (std::size_t rr = 0; rr < psis.size(); ++rr)
        for (int c = 0; c < g.size_at(w); ++c) {
          const int c2 = g.rest[w][v][rr][c];
          const PiFiberData& src = data[w][c];
          const PiFiberData& dst = data[v][c2];
          for (std::size_t k = 0; k < src.fams.size(); ++k) {
            std::vector<int> gv(dst.slots.size());
            for (std::size_t j = 0; j < dst.slots.size(); ++j) {
              const auto& sl = dst.slots[j];
              const int rc =
                  hom_rank(compose(psis[rr], sc.hom(sl.v, v)[sl.r]));
              gv[j] = src.fams[k][src.slot_of[sl.v][rc] + sl.a];
            }
            const auto it = dst.index_of.find(gv);
            if (it == dst.index_of.end())
              throw std::logic_error(
                  "pi restriction escaped the enumerated fiber");
            t.rest[w][v][rr][c][k] = it->second;
          }
        }
    }
  return std::make_shared<const DependentType>(std::move(t));
}

Term lambda_term(const TypePtr& pi_ab, const TypePtr& a, const TypePtr& b,
                 const Term& body) {
  check_ctx(pi_ab, "lambda_term");
  if (!body.type || *body.type != *b)
    throw std::invalid_argument("lambda_term: body has wrong type");
  const ExtContext ea = ext_context(a);
  const Presheaf& g = *a->ctx;
  const int L = g.levels();
  const long long maxfam = families_ceiling(0);
  Term r;
  r.type = pi_ab;
  r.comp.resize(L);
  for (int w = 0; w < L; ++w) {
    r.comp[w].resize(g.size_at(w));
    for (int c = 0; c < g.size_at(w); ++c) {
      const PiFiberData d = compute_pi_fiber(*a, *b, ea.offset, w, c, maxfam);
      if (static_cast<int>(d.fams.size()) != pi_ab->fiber_size(w, c))
        throw std::invalid_argument(
            "lambda_term: function type does not match the components");
      std::vector<int> fam(d.slots.size());
      for (std::size_t j = 0; j < d.slots.size(); ++j)
        fam[j] = body.comp[d.slots[j].v][d.slots[j].ext_cell];
      const auto it = d.index_of.find(fam);
      if (it == d.index_of.end())
        throw std::logic_error("lambda body escapes the enumerated fiber");
      r.comp[w][c] = it->second;
    }
  }
  return r;
}

Term app_term(const TypePtr& pi_ab, const TypePtr& a, const TypePtr& b,
              const Term& f, const Term& ta) {
  if (!f.type || *f.type != *pi_ab)
    throw std::invalid_argument("app_term: function has wrong type");
  if (!ta.type || *ta.type != *a)
    throw std::invalid_argument("app_term: argument has wrong type");
  const ExtContext ea = ext_context(a);
  const Presheaf& g = *a->ctx;
  const SiteCat& sc = g.cat();
  const int L = g.levels();
  const long long maxfam = families_ceiling(0);
  Term r;
  r.type = subst_type(b, pairing(id_subst(a->ctx), a, ta));
  r.comp.resize(L);
  for (int w = 0; w < L; ++w) {
    r.comp[w].resize(g.size_at(w));
    const int idr = hom_rank(id_map(sc.cube(w)));
    for (int c = 0; c < g.size_at(w); ++c) {
      const PiFiberData d = compute_pi_fiber(*a, *b, ea.offset, w, c, maxfam);
      if (static_cast<int>(d.fams.size()) != pi_ab->fiber_size(w, c))
        throw std::invalid_argument(
            "app_term: function type does not match the components");
      r.comp[w][c] =
          d.fams[f.comp[w][c]][d.slot_of[w][idr] + ta.comp[w][c]];
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// Id and propositions
// ---------------------------------------------------------------------------

TypePtr id_type(const TypePtr& a, const Term& s, const Term& t) {
  check_ctx(a, "id_type");
  if (!s.type || *s.type != *a || !t.type || *t.type != *a)
    throw std::invalid_argument("id_type: endpoints must be terms of the type");
  const Presheaf& g = *a->ctx;
  const int L = g.levels();
  std::vector<std::vector<std::vector<std::string>>> fibers(L);
  for (int w = 0; w < L; ++w) {
    fibers[w].resize(g.size_at(w));
    for (int c = 0; c < g.size_at(w); ++c)
      if (s.comp[w][c] == t.comp[w][c]) fibers[w][c].push_back("refl");
  }
  DependentType r = make_type_skeleton(a->ctx, std::move(fibers));
  const SiteCat& sc = g.cat();
  for (int w = 0; w < L; ++w)
    for (int v = 0; v < L; ++v)
      for (std::size_t rr = 0; rr < sc.hom(v, w).size(); ++rr)
        for (int c = 0; c < g.size_at(w); ++c)
          if (!r.fibers[w][c].empty()) {
            const int c2 = g.rest[w][v][rr][c];
            if (r.fibers[v][c2].empty())
              throw std::logic_error(
                  "identity type is not closed under restriction");
            r.rest[w][v][rr][c][0] = 0;
          }
  return std::make_shared<const DependentType>(std::move(r));
}

Term refl_term(const TypePtr& id_ss) {
  check_ctx(id_ss, "refl_term");
  Term r;
  r.type = id_ss;
  const int L = id_ss->ctx->levels();
  r.comp.resize(L);
  for (int w = 0; w < L; ++w) {
    r.comp[w].assign(id_ss->ctx->size_at(w), 0);
    for (int c = 0; c < id_ss->ctx->size_at(w); ++c)
      if (id_ss->fiber_size(w, c) != 1)
        throw std::invalid_argument("refl_term: the two sides differ");
  }
  return r;
}

Term j_elim(const Term& c, const Term& s, const Term& t, const Term& p) {
  if (!s.type || !t.type || !p.type)
    throw std::invalid_argument("j_elim: missing data");
  const TypePtr expected = id_type(s.type, s, t);
  if (*p.type != *expected)
    throw std::invalid_argument(
        "j_elim: the witness is not a section of the identity type");
  if (s.comp != t.comp)
    throw std::logic_error(
        "j_elim: a global identity witness forces the sections to agree");
  return c;
}

bool is_prop(const DependentType& t) {
  for (const auto& lvl : t.fibers)
    for (const auto& f : lvl)
      if (f.size() > 1) return false;
  return true;
}

TypePtr prop_top(PshPtr ctx) { return unit_type(std::move(ctx)); }

TypePtr prop_bot(PshPtr ctx) {
  if (!ctx) throw std::invalid_argument("prop_bot: null context");
  return subsingleton_type(std::move(ctx), [](int, int) { return false; });
}

TypePtr prop_and(const TypePtr& p, const TypePtr& q) {
  check_ctx(p, "prop_and");
  check_ctx(q, "prop_and");
  if (*p->ctx != *q->ctx)
    throw std::invalid_argument("prop_and: contexts differ");
  if (!is_prop(*p) || !is_prop(*q))
    throw std::invalid_argument("prop_and: inputs must be propositions");
  return subsingleton_type(p->ctx, [&](int w, int c) {
    return p->fiber_size(w, c) == 1 && q->fiber_size(w, c) == 1;
  });
}

TypePtr prop_or(const TypePtr& p, const TypePtr& q) {
  check_ctx(p, "prop_or");
  check_ctx(q, "prop_or");
  if (*p->ctx != *q->ctx)
    throw std::invalid_argument("prop_or: contexts differ");
  if (!is_prop(*p) || !is_prop(*q))
    throw std::invalid_argument("prop_or: inputs must be propositions");
  return subsingleton_type(p->ctx, [&](int w, int c) {
    return p->fiber_size(w, c) == 1 || q->fiber_size(w, c) == 1;
  });
}

// ---------------------------------------------------------------------------
// Glue
// ---------------------------------------------------------------------------

namespace {

// Per-cell fiber data for a Glue type.  Over a P-cell the fiber is T's and
// only pcell matters.  Elsewhere the fiber is enumerated pairs; a family is
// stored on the full (v, r) face-map grid with -1 at non-P targets.
struct GlueCell {
  bool inhab = false;
  int pcell = -1;
  std::vector<int> grid_of;  // [v] -> base of the (v, *) block in a family
  int grid_size = 0;
  std::vector<int> a_of;
  std::vector<std::vector<int>> fam_of;
  std::map<std::pair<int, std::vector<int>>, int> index_of;
};

struct GlueParts {
  const DependentType& p;
  const DependentType& t;
  const DependentType& a;
  const TypeMorphism& f;
  const std::vector<std::vector<int>>& poff;  // ext offsets for Gamma.P
};

GlueCell compute_glue_cell(const GlueParts& gp, int w, int c,
                           long long maxfam) {
  const Presheaf& g = *gp.p.ctx;
  const SiteCat& sc = g.cat();
  const int L = g.levels();
  GlueCell gc;
  gc.inhab = gp.p.fiber_size(w, c) == 1;
  if (gc.inhab) {
    gc.pcell = gp.poff[w][c];
    return gc;
  }
  gc.grid_of.resize(L);
  for (int v = 0; v < L; ++v) {
    gc.grid_of[v] = gc.grid_size;
    gc.grid_size += static_cast<int>(sc.hom(v, w).size());
  }

  std::vector<int> asg(gc.grid_size, -1);
  std::vector<int> trail;
  int current_a = 0;
  const std::function<bool(int, int, int, int)> force =
      [&](int v, int rr, int slot, int val) -> bool {
    if (asg[slot] != -1) return asg[slot] == val;
    const int cphi = g.rest[w][v][rr][c];
    const int pc = gp.poff[v][cphi];
    // compatibility with the total component
    if (gp.f.map[v][pc][val] != gp.a.rest[w][v][rr][c][current_a])
      return false;
    asg[slot] = val;
    trail.push_back(slot);
    for (int u = 0; u < L; ++u) {
      const auto& psis = sc.hom(u, v);
      for (std::size_t rq = 0; rq < psis.size(); ++rq) {
        const int rc = hom_rank(compose(sc.hom(v, w)[rr], psis[rq]));
        const int val2 = gp.t.rest[v][u][rq][pc][val];
        if (!force(u, rc, gc.grid_of[u] + rc, val2)) return false;
      }
    }
    return true;
  };
  // slots in grid order; only P-targets carry values
  std::vector<std::pair<int, int>> pslots;  // (v, r) with inhabited target
  for (int v = 0; v < L; ++v)
    for (std::size_t rr = 0; rr < sc.hom(v, w).size(); ++rr)
      if (gp.p.fiber_size(v, g.rest[w][v][rr][c]) == 1)
        pslots.emplace_back(v, static_cast<int>(rr));

  const std::function<void(std::size_t)> dfs = [&](std::size_t from) {
    std::size_t i = from;
    while (i < pslots.size() &&
           asg[gc.grid_of[pslots[i].first] + pslots[i].second] != -1)
      ++i;
    if (i == pslots.size()) {
      if (static_cast<long long>(gc.a_of.size()) >= maxfam)
        throw limit_error(
            "glue fiber exceeds the family ceiling (raise "
            "BPCUBE_MAX_FAMILIES to allow more)");
      gc.index_of.emplace(std::make_pair(current_a, asg),
                          static_cast<int>(gc.a_of.size()));
      gc.a_of.push_back(current_a);
      gc.fam_of.push_back(asg);
      return;
    }
    const auto [v, rr] = pslots[i];
    const int cphi = g.rest[w][v][rr][c];
    const int npc = gp.t.fiber_size(v, gp.poff[v][cphi]);
    for (int val = 0; val < npc; ++val) {
      const std::size_t mark = trail.size();
      if (force(v, rr, gc.grid_of[v] + rr, val)) dfs(i + 1);
      while (trail.size() > mark) {
        asg[trail.back()] = -1;
        trail.pop_back();
      }
    }
  };
  for (current_a = 0; current_a < gp.a.fiber_size(w, c); ++current_a) dfs(0);
  return gc;
}

std::vector<std::vector<GlueCell>> compute_glue_cells(const GlueParts& gp,
                                                      long long maxfam) {
  const Presheaf& g = *gp.p.ctx;
  const int L = g.levels();
  std::vector<std::vector<GlueCell>> data(L);
  for (int w = 0; w < L; ++w) {
    data[w].reserve(g.size_at(w));
    for (int c = 0; c < g.size_at(w); ++c)
      data[w].push_back(compute_glue_cell(gp, w, c, maxfam));
  }
  return data;
}

void check_glue_inputs(const TypePtr& p, const TypePtr& t, const TypePtr& a,
                       const TypeMorphism& f, bool into_t, const char* who) {
  check_ctx(p, who);
  check_ctx(t, who);
  check_ctx(a, who);
  if (!is_prop(*p))
    throw std::invalid_argument(std::string(who) +
                                ": the first argument must be a proposition");
  const ExtContext ep = ext_context(p);
  if (*t->ctx != *ep.ctx)
    throw std::invalid_argument(
        std::string(who) +
        ": the partial type must live over the extended context");
  if (*a->ctx != *p->ctx)
    throw std::invalid_argument(std::string(who) +
                                ": the total type must live over the context");
  const TypePtr arestr = subst_type(a, ep.display);
  const TypePtr& wantSrc = into_t ? arestr : t;
  const TypePtr& wantDst = into_t ? t : arestr;
  if (!f.src || !f.dst || *f.src != *wantSrc || *f.dst != *wantDst)
    throw std::invalid_argument(std::string(who) +
                                ": comparison map has the wrong endpoints");
}

}  // namespace

GlueData glue_type(const TypePtr& p, const TypePtr& t, const TypePtr& a,
                   const TypeMorphism& f, long long max_families) {
  check_glue_inputs(p, t, a, f, /*into_t=*/false, "glue_type");
  const long long maxfam = families_ceiling(max_families);
  const ExtContext ep = ext_context(p);
  const GlueParts gp{*p, *t, *a, f, ep.offset};
  const Presheaf& g = *p->ctx;
  const SiteCat& sc = g.cat();
  const int L = g.levels();
  const auto data = compute_glue_cells(gp, maxfam);

  std::vector<std::vector<std::vector<std::string>>> fibers(L);
  for (int w = 0; w < L; ++w) {
    fibers[w].resize(g.size_at(w));
    for (int c = 0; c < g.size_at(w); ++c) {
      const GlueCell& gc = data[w][c];
      if (gc.inhab) {
        fibers[w][c] = t->fibers[w][gc.pcell];
      } else {
        int local = 0;
        int last_a = -1;
        for (std::size_t k = 0; k < gc.a_of.size(); ++k) {
          if (gc.a_of[k] != last_a) {
            last_a = gc.a_of[k];
            local = 0;
          }
          fibers[w][c].push_back("(" + a->fibers[w][c][gc.a_of[k]] + "|g" +
                                 std::to_string(local++) + ")");
        }
      }
    }
  }

  DependentType ty = make_type_skeleton(p->ctx, std::move(fibers));
  for (int w = 0; w < L; ++w)
    for (int v = 0; v < L; ++v) {
      const auto& psis = sc.hom(v, w);
      for (std::size_t rr = 0; rr < psis.size(); ++rr)
        for (int c = 0; c < g.size_at(w); ++c) {
          const int c2 = g.rest[w][v][rr][c];
          const GlueCell& src = data[w][c];
          const GlueCell& dst = data[v][c2];
          auto& row = ty.rest[w][v][rr][c];
          if (src.inhab) {
            // P-cells restrict to P-cells; both fibers are T's
            for (std::size_t x = 0; x < row.size(); ++x)
              row[x] = t->rest[w][v][rr][src.pcell][x];
          } else if (dst.inhab) {
            for (std::size_t k = 0; k < row.size(); ++k)
              row[k] = src.fam_of[k][src.grid_of[v] + static_cast<int>(rr)];
          } else {
            for (std::size_t k = 0; k < row.size(); ++k) {
              const int a2 = a->rest[w][v][rr][c][src.a_of[k]];
              std::vector<int> fam2(dst.grid_size, -1);
              for (int u = 0; u < L; ++u) {
                const auto& chis = sc.hom(u, v);
                for (std::size_t rq = 0; rq < chis.size(); ++rq) {
                  const int rc = hom_rank(compose(psis[rr], chis[rq]));
                  fam2[dst.grid_of[u] + static_cast<int>(rq)] =
                      src.fam_of[k][src.grid_of[u] + rc];
                }
              }
              const auto it = dst.index_of.find({a2, fam2});
              if (it == dst.index_of.end())
                throw std::logic_error(
                    "glue restriction escaped the enumerated fiber");
              row[k] = it->second;
            }
          }
        }
    }

  GlueData gd;
  gd.glue = std::make_shared<const DependentType>(std::move(ty));
  gd.p = p;
  gd.t = t;
  gd.a = a;
  gd.f = f;
  return gd;
}

Term glue_intro(const GlueData& gd, const Term& ta, const Term& tpart) {
  if (!ta.type || *ta.type != *gd.a)
    throw std::invalid_argument("glue_intro: total part has wrong type");
  if (!tpart.type || *tpart.type != *gd.t)
    throw std::invalid_argument("glue_intro: partial part has wrong type");
  const ExtContext ep = ext_context(gd.p);
  const Presheaf& g = *gd.p->ctx;
  const SiteCat& sc = g.cat();
  const int L = g.levels();
  // premise: the comparison map sends the partial section to the total one
  for (int w = 0; w < L; ++w)
    for (int j = 0; j < ep.ctx->size_at(w); ++j) {
      const int c = ep.display.comp[w][j];
      if (gd.f.map[w][j][tpart.comp[w][j]] != ta.comp[w][c])
        throw std::invalid_argument(
            "glue_intro: the partial section does not track the total one");
    }
  const GlueParts gp{*gd.p, *gd.t, *gd.a, gd.f, ep.offset};
  const long long maxfam = families_ceiling(0);
  Term r;
  r.type = gd.glue;
  r.comp.resize(L);
  for (int w = 0; w < L; ++w) {
    r.comp[w].resize(g.size_at(w));
    for (int c = 0; c < g.size_at(w); ++c) {
      const GlueCell gc = compute_glue_cell(gp, w, c, maxfam);
      if (gc.inhab) {
        r.comp[w][c] = tpart.comp[w][gc.pcell];
        continue;
      }
      std::vector<int> fam(gc.grid_size, -1);
      for (int v = 0; v < L; ++v) {
        const auto& homs = sc.hom(v, w);
        for (std::size_t rr = 0; rr < homs.size(); ++rr) {
          const int c2 = g.rest[w][v][rr][c];
          if (gd.p->fiber_size(v, c2) == 1)
            fam[gc.grid_of[v] + static_cast<int>(rr)] =
                tpart.comp[v][ep.offset[v][c2]];
        }
      }
      const auto it = gc.index_of.find({ta.comp[w][c], fam});
      if (it == gc.index_of.end())
        throw std::logic_error("glue_intro escaped the enumerated fiber");
      r.comp[w][c] = it->second;
    }
  }
  return r;
}

Term unglue(const GlueData& gd, const Term& g) {
  if (!g.type || *g.type != *gd.glue)
    throw std::invalid_argument("unglue: term has wrong type");
  const ExtContext ep = ext_context(gd.p);
  const Presheaf& ctx = *gd.p->ctx;
  const int L = ctx.levels();
  const GlueParts gp{*gd.p, *gd.t, *gd.a, gd.f, ep.offset};
  const long long maxfam = families_ceiling(0);
  Term r;
  r.type = gd.a;
  r.comp.resize(L);
  for (int w = 0; w < L; ++w) {
    r.comp[w].resize(ctx.size_at(w));
    for (int c = 0; c < ctx.size_at(w); ++c) {
      const GlueCell gc = compute_glue_cell(gp, w, c, maxfam);
      r.comp[w][c] = gc.inhab ? gd.f.map[w][gc.pcell][g.comp[w][c]]
                              : gc.a_of[g.comp[w][c]];
    }
  }
  return r;
}

Term glue_partial(const GlueData& gd, const Term& g) {
  if (!g.type || *g.type != *gd.glue)
    throw std::invalid_argument("glue_partial: term has wrong type");
  const ExtContext ep = ext_context(gd.p);
  const int L = ep.ctx->levels();
  Term r;
  r.type = gd.t;
  r.comp.resize(L);
  for (int w = 0; w < L; ++w) {
    r.comp[w].resize(ep.ctx->size_at(w));
    for (int j = 0; j < ep.ctx->size_at(w); ++j)
      r.comp[w][j] = g.comp[w][ep.display.comp[w][j]];
  }
  return r;
}

// ---------------------------------------------------------------------------
// Weld
// ---------------------------------------------------------------------------

WeldData weld_type(const TypePtr& p, const TypePtr& t, const TypePtr& a,
                   const TypeMorphism& f) {
  check_glue_inputs(p, t, a, f, /*into_t=*/true, "weld_type");
  const ExtContext ep = ext_context(p);
  const Presheaf& g = *p->ctx;
  const SiteCat& sc = g.cat();
  const int L = g.levels();
  auto inhab = [&](int w, int c) { return p->fiber_size(w, c) == 1; };
  auto pcell = [&](int w, int c) { return ep.offset[w][c]; };

  std::vector<std::vector<std::vector<std::string>>> fibers(L);
  for (int w = 0; w < L; ++w) {
    fibers[w].resize(g.size_at(w));
    for (int c = 0; c < g.size_at(w); ++c) {
      if (inhab(w, c)) {
        fibers[w][c] = t->fibers[w][pcell(w, c)];
      } else {
        for (const auto& an : a->fibers[w][c])
          fibers[w][c].push_back("weld[" + an + "]");
      }
    }
  }

  DependentType ty = make_type_skeleton(p->ctx, std::move(fibers));
  for (int w = 0; w < L; ++w)
    for (int v = 0; v < L; ++v)
      for (std::size_t rr = 0; rr < sc.hom(v, w).size(); ++rr)
        for (int c = 0; c < g.size_at(w); ++c) {
          const int c2 = g.rest[w][v][rr][c];
          auto& row = ty.rest[w][v][rr][c];
          if (inhab(w, c)) {
            for (std::size_t x = 0; x < row.size(); ++x)
              row[x] = t->rest[w][v][rr][pcell(w, c)][x];
          } else if (inhab(v, c2)) {
            for (std::size_t k = 0; k < row.size(); ++k)
              row[k] = f.map[v][pcell(v, c2)]
                            [a->rest[w][v][rr][c][static_cast<int>(k)]];
          } else {
            for (std::size_t k = 0; k < row.size(); ++k)
              row[k] = a->rest[w][v][rr][c][static_cast<int>(k)];
          }
        }

  WeldData wd;
  wd.weld = std::make_shared<const DependentType>(std::move(ty));
  wd.p = p;
  wd.t = t;
  wd.a = a;
  wd.f = f;
  return wd;
}

Term weld_intro(const WeldData& wd, const Term& ta) {
  if (!ta.type || *ta.type != *wd.a)
    throw std::invalid_argument("weld_intro: term has wrong type");
  const ExtContext ep = ext_context(wd.p);
  const Presheaf& g = *wd.p->ctx;
  const int L = g.levels();
  Term r;
  r.type = wd.weld;
  r.comp.resize(L);
  for (int w = 0; w < L; ++w) {
    r.comp[w].resize(g.size_at(w));
    for (int c = 0; c < g.size_at(w); ++c)
      r.comp[w][c] = wd.p->fiber_size(w, c) == 1
                         ? wd.f.map[w][ep.offset[w][c]][ta.comp[w][c]]
                         : ta.comp[w][c];
  }
  return r;
}

Substitution weld_case_subst_a(const WeldData& wd) {
  const ExtContext ea = ext_context(wd.a);
  const ExtContext ew = ext_context(wd.weld);
  const ExtContext ep = ext_context(wd.p);
  const Presheaf& g = *wd.a->ctx;
  const int L = g.levels();
  Substitution s;
  s.src = ea.ctx;
  s.dst = ew.ctx;
  s.comp.resize(L);
  for (int w = 0; w < L; ++w) {
    s.comp[w].resize(ea.ctx->size_at(w));
    for (int c = 0; c < g.size_at(w); ++c)
      for (int x = 0; x < wd.a->fiber_size(w, c); ++x)
        s.comp[w][ea.offset[w][c] + x] =
            ew.offset[w][c] + (wd.p->fiber_size(w, c) == 1
                                   ? wd.f.map[w][ep.offset[w][c]][x]
                                   : x);
  }
  return s;
}

Substitution weld_case_subst_t(const WeldData& wd) {
  const ExtContext et = ext_context(wd.t);  // over Gamma.P
  const ExtContext ew = ext_context(wd.weld);
  const ExtContext ep = ext_context(wd.p);
  const Presheaf& gp = *wd.t->ctx;
  const int L = gp.levels();
  Substitution s;
  s.src = et.ctx;
  s.dst = ew.ctx;
  s.comp.resize(L);
  for (int w = 0; w < L; ++w) {
    s.comp[w].resize(et.ctx->size_at(w));
    for (int j = 0; j < gp.size_at(w); ++j) {
      const int c = ep.display.comp[w][j];
      for (int x = 0; x < wd.t->fiber_size(w, j); ++x)
        s.comp[w][et.offset[w][j] + x] = ew.offset[w][c] + x;
    }
  }
  return s;
}

Term weld_elim(const WeldData& wd, const TypePtr& c, const Term& case_a,
               const Term& case_t) {
  check_ctx(c, "weld_elim");
  const ExtContext ew = ext_context(wd.weld);
  if (*c->ctx != *ew.ctx)
    throw std::invalid_argument(
        "weld_elim: motive must live over the weld-extended context");
  const Substitution chiA = weld_case_subst_a(wd);
  const Substitution chiT = weld_case_subst_t(wd);
  if (!case_a.type || *case_a.type != *subst_type(c, chiA))
    throw std::invalid_argument("weld_elim: first branch has wrong type");
  if (!case_t.type || *case_t.type != *subst_type(c, chiT))
    throw std::invalid_argument("weld_elim: second branch has wrong type");

  const ExtContext ea = ext_context(wd.a);
  const ExtContext et = ext_context(wd.t);
  const ExtContext ep = ext_context(wd.p);
  const Presheaf& g = *wd.a->ctx;
  const int L = g.levels();

  // the branches must agree along the comparison map over P-cells
  for (int w = 0; w < L; ++w)
    for (int j = 0; j < ep.ctx->size_at(w); ++j) {
      const int cc = ep.display.comp[w][j];
      for (int x = 0; x < wd.a->fiber_size(w, cc); ++x) {
        const int tx = wd.f.map[w][j][x];
        if (case_t.comp[w][et.offset[w][j] + tx] !=
            case_a.comp[w][ea.offset[w][cc] + x])
          throw std::invalid_argument(
              "weld_elim: branches disagree along the comparison map");
      }
    }

  Term r;
  r.type = c;
  r.comp.resize(L);
  for (int w = 0; w < L; ++w) {
    r.comp[w].resize(ew.ctx->size_at(w));
    for (int cc = 0; cc < g.size_at(w); ++cc) {
      const bool inhab = wd.p->fiber_size(w, cc) == 1;
      for (int k = 0; k < wd.weld->fiber_size(w, cc); ++k)
        r.comp[w][ew.offset[w][cc] + k] =
            inhab ? case_t.comp[w][et.offset[w][ep.offset[w][cc]] + k]
                  : case_a.comp[w][ea.offset[w][cc] + k];
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// Modalities
// ---------------------------------------------------------------------------

TypePtr cwf_apply(PshFunctor f, const TypePtr& t) {
  check_ctx(t, "cwf_apply");
  if (f == PshFunctor::Pi || f == PshFunctor::Shp || f == PshFunctor::Quot)
    throw std::invalid_argument("cwf_apply: " + to_string(f) +
                                " does not act by precomposition");
  const BaseFunctor F = base_functor_of(f);
  const PshPtr ctx2 = apply_psh(f, t->ctx);
  const SiteCat& s2 = ctx2->cat();
  const SiteCat& s1 = t->cat();
  const int L2 = static_cast<int>(s2.cubes().size());
  DependentType r;
  r.ctx = ctx2;
  r.fibers.resize(L2);
  r.rest.resize(L2);
  std::vector<int> img(L2);
  for (int v = 0; v < L2; ++v)
    img[v] = s1.index_of(apply_base_functor(F, s2.cube(v)));
  for (int w = 0; w < L2; ++w) {
    r.fibers[w] = t->fibers[img[w]];
    r.rest[w].resize(L2);
    for (int v = 0; v < L2; ++v) {
      const auto& homs = s2.hom(v, w);
      r.rest[w][v].resize(homs.size());
      for (std::size_t rr = 0; rr < homs.size(); ++rr)
        r.rest[w][v][rr] =
            t->rest[img[w]][img[v]]
                   [hom_rank(apply_base_functor(F, homs[rr]))];
    }
  }
  return std::make_shared<const DependentType>(std::move(r));
}

Term cwf_apply(PshFunctor f, const Term& t) {
  if (!t.type) throw std::invalid_argument("cwf_apply: null term");
  Term r;
  r.type = cwf_apply(f, t.type);
  const SiteCat& s2 = r.type->cat();
  const SiteCat& s1 = t.type->cat();
  const BaseFunctor F = base_functor_of(f);
  const int L2 = static_cast<int>(s2.cubes().size());
  r.comp.resize(L2);
  for (int v = 0; v < L2; ++v)
    r.comp[v] = t.comp[s1.index_of(apply_base_functor(F, s2.cube(v)))];
  return r;
}

TypeMorphism cwf_apply(PshFunctor f, const TypeMorphism& m) {
  require_valid(m, "cwf_apply");
  TypeMorphism r;
  r.src = cwf_apply(f, m.src);
  r.dst = cwf_apply(f, m.dst);
  const SiteCat& s2 = r.src->cat();
  const SiteCat& s1 = m.src->cat();
  const BaseFunctor F = base_functor_of(f);
  const int L2 = static_cast<int>(s2.cubes().size());
  r.map.resize(L2);
  for (int v = 0; v < L2; ++v)
    r.map[v] = m.map[s1.index_of(apply_base_functor(F, s2.cube(v)))];
  return r;
}

TypeMorphism id_type_morphism(const TypePtr& t) {
  check_ctx(t, "id_type_morphism");
  TypeMorphism m;
  m.src = t;
  m.dst = t;
  m.map.resize(t->levels());
  for (int w = 0; w < t->levels(); ++w) {
    m.map[w].resize(t->ctx->size_at(w));
    for (int c = 0; c < t->ctx->size_at(w); ++c) {
      m.map[w][c].resize(t->fiber_size(w, c));
      for (int x = 0; x < t->fiber_size(w, c); ++x) m.map[w][c][x] = x;
    }
  }
  return m;
}

TypeMorphism compose_type_morphism(const TypeMorphism& g,
                                   const TypeMorphism& f) {
  require_valid(f, "compose_type_morphism (first)");
  require_valid(g, "compose_type_morphism (second)");
  if (*f.dst != *g.src)
    throw std::invalid_argument(
        "compose_type_morphism: middle types do not match");
  TypeMorphism r;
  r.src = f.src;
  r.dst = g.dst;
  r.map.resize(f.map.size());
  for (std::size_t w = 0; w < f.map.size(); ++w) {
    r.map[w].resize(f.map[w].size());
    for (std::size_t c = 0; c < f.map[w].size(); ++c) {
      r.map[w][c].resize(f.map[w][c].size());
      for (std::size_t x = 0; x < f.map[w][c].size(); ++x)
        r.map[w][c][x] = g.map[w][c][f.map[w][c][x]];
    }
  }
  return r;
}

TypeMorphism subst_type_morphism(const TypeMorphism& m,
                                 const Substitution& s) {
  require_valid(m, "subst_type_morphism");
  TypeMorphism r;
  r.src = subst_type(m.src, s);
  r.dst = subst_type(m.dst, s);
  r.map.resize(r.src->levels());
  for (int w = 0; w < r.src->levels(); ++w) {
    r.map[w].resize(s.src->size_at(w));
    for (int d = 0; d < s.src->size_at(w); ++d)
      r.map[w][d] = m.map[w][s.comp[w][d]];
  }
  return r;
}

Term apply_type_morphism(const TypeMorphism& m, const Term& t) {
  require_valid(m, "apply_type_morphism");
  if (!t.type || *t.type != *m.src)
    throw std::invalid_argument(
        "apply_type_morphism: term is not a section of the source");
  Term r;
  r.type = m.dst;
  r.comp.resize(t.comp.size());
  for (std::size_t w = 0; w < t.comp.size(); ++w) {
    r.comp[w].resize(t.comp[w].size());
    for (std::size_t c = 0; c < t.comp[w].size(); ++c)
      r.comp[w][c] = m.map[w][c][t.comp[w][c]];
  }
  return r;
}

Substitution morphism_compare_subst(const TypeMorphism& m) {
  require_valid(m, "morphism_compare_subst");
  const ExtContext ea = ext_context(m.src);
  const ExtContext eb = ext_context(m.dst);
  Substitution s;
  s.src = ea.ctx;
  s.dst = eb.ctx;
  s.comp.resize(ea.ctx->levels());
  for (int w = 0; w < ea.ctx->levels(); ++w) {
    s.comp[w].resize(ea.ctx->size_at(w));
    for (int c = 0; c < m.src->ctx->size_at(w); ++c)
      for (int x = 0; x < m.src->fiber_size(w, c); ++x)
        s.comp[w][ea.offset[w][c] + x] = eb.offset[w][c] + m.map[w][c][x];
  }
  return s;
}

Term factor_through_morphism(const TypeMorphism& m, const TypePtr& t,
                             const Term& u) {
  require_valid(m, "factor_through_morphism");
  check_ctx(t, "factor_through_morphism");
  const ExtContext ea = ext_context(m.src);
  const ExtContext eb = ext_context(m.dst);
  if (*t->ctx != *eb.ctx)
    throw std::invalid_argument(
        "factor_through_morphism: type does not live over the extension by "
        "the target");
  const Substitution chi = morphism_compare_subst(m);
  if (!u.type || *u.type != *subst_type(t, chi))
    throw std::invalid_argument(
        "factor_through_morphism: section has the wrong type");
  Term r;
  r.type = t;
  r.comp.resize(t->levels());
  for (int w = 0; w < t->levels(); ++w) {
    r.comp[w].assign(eb.ctx->size_at(w), -1);
    for (int c = 0; c < m.src->ctx->size_at(w); ++c) {
      for (int x = 0; x < m.src->fiber_size(w, c); ++x) {
        const int dst_cell = eb.offset[w][c] + m.map[w][c][x];
        const int val = u.comp[w][ea.offset[w][c] + x];
        if (r.comp[w][dst_cell] == -1) {
          r.comp[w][dst_cell] = val;
        } else if (r.comp[w][dst_cell] != val) {
          throw std::invalid_argument(
              "factor_through_morphism: the section distinguishes elements "
              "that the map identifies (cell " +
              eb.ctx->cells[w][dst_cell] + ")");
        }
      }
    }
    for (int e = 0; e < eb.ctx->size_at(w); ++e)
      if (r.comp[w][e] == -1)
        throw std::invalid_argument(
            "factor_through_morphism: the map misses " +
            eb.ctx->cells[w][e] + ", no unique factorization");
  }
  return r;
}

Term nat_apply_term(BaseTransform nu, const PshPtr& g, const Term& t) {
  if (!g) throw std::invalid_argument("nat_apply_term: null presheaf");
  const Substitution s = lift_transform(nu, g);
  if (!t.type || !t.type->ctx || *t.type->ctx != *s.dst)
    throw std::invalid_argument(
        "nat_apply_term: term does not live over the comparison's target");
  return subst_term(t, s);
}

namespace {

bool transposable(TowerPair p) {
  switch (p) {
    case TowerPair::DiscUnder:
    case TowerPair::UnderCodisc:
    case TowerPair::CodiscPaths:
    case TowerPair::FlatSharp:
    case TowerPair::SharpCoshp:
      return true;
    case TowerPair::PiDisc:
    case TowerPair::ShpFlat:
      return false;
  }
  return false;
}

// The base component of the counit at a cube of the left translate's site:
// identity, or a canonical comparison map.
enum class CounitKind { Identity, ToShape, ToSharp };

CounitKind counit_kind(TowerPair p) {
  switch (p) {
    case TowerPair::DiscUnder:
    case TowerPair::FlatSharp:
      return CounitKind::ToShape;
    case TowerPair::CodiscPaths:
    case TowerPair::SharpCoshp:
      return CounitKind::ToSharp;
    default:
      return CounitKind::Identity;
  }
}

}  // namespace

Term adj_transpose_term(TowerPair p, const PshPtr& g, const Term& t) {
  if (!transposable(p))
    throw std::invalid_argument(
        "adj_transpose_term: both functors of " + to_string(p) +
        " must act by precomposition");
  if (!g) throw std::invalid_argument("adj_transpose_term: null presheaf");
  const PshPtr lg = apply_psh(left_of(p), g);
  if (!t.type || !t.type->ctx || *t.type->ctx != *lg)
    throw std::invalid_argument(
        "adj_transpose_term: term must live over the left translate");
  const Term rt = cwf_apply(right_of(p), t);
  return subst_term(rt, unit_of(p, g));
}

Term adj_transpose_term_inv(TowerPair p, const PshPtr& g, const TypePtr& t,
                            const Term& transposed) {
  if (!transposable(p))
    throw std::invalid_argument(
        "adj_transpose_term_inv: both functors of " + to_string(p) +
        " must act by precomposition");
  if (!g) throw std::invalid_argument("adj_transpose_term_inv: null presheaf");
  check_ctx(t, "adj_transpose_term_inv");
  const PshPtr lg = apply_psh(left_of(p), g);
  if (*t->ctx != *lg)
    throw std::invalid_argument(
        "adj_transpose_term_inv: type must live over the left translate");
  const Substitution eta = unit_of(p, g);
  {
    const TypePtr expected = subst_type(cwf_apply(right_of(p), t), eta);
    if (!transposed.type || *transposed.type != *expected)
      throw std::invalid_argument(
          "adj_transpose_term_inv: term is not a transpose for the type");
  }

  const BaseFunctor FL = base_functor_of(left_of(p));
  const CounitKind kind = counit_kind(p);
  const SiteCat& slg = lg->cat();
  const SiteCat& sg = g->cat();
  const int L2 = static_cast<int>(slg.cubes().size());
  Term r;
  r.type = t;
  r.comp.resize(L2);
  for (int v = 0; v < L2; ++v) {
    const Cube V = slg.cube(v);
    const int iu = sg.index_of(apply_base_functor(FL, V));
    const int n = lg->size_at(v);
    r.comp[v].resize(n);
    for (int xi = 0; xi < n; ++xi) {
      const int hc = eta.comp[iu][xi];
      if (kind == CounitKind::Identity) {
        r.comp[v][xi] = transposed.comp[iu][xi];
        continue;
      }
      const FaceMap nu =
          kind == CounitKind::ToShape
              ? transform_component(BaseTransform::Varsigma, V)
              : transform_component(BaseTransform::Iota, V);
      const int lvl = slg.index_of(nu.cod);
      r.comp[v][xi] =
          t->restrict_fiber(lvl, hc, transposed.comp[iu][xi], nu);
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// Enumeration of sections
// ---------------------------------------------------------------------------

namespace {

struct SectionSearch {
  const DependentType& t;
  const Presheaf& g;
  const SiteCat& sc;
  int L;
  std::vector<int> sbase;  // [w] -> first slot index
  std::vector<int> asg;
  std::vector<int> trail;

  explicit SectionSearch(const DependentType& ty)
      : t(ty), g(*ty.ctx), sc(g.cat()), L(g.levels()) {
    sbase.resize(L);
    int run = 0;
    for (int w = 0; w < L; ++w) {
      sbase[w] = run;
      run += g.size_at(w);
    }
    asg.assign(run, -1);
  }

  std::pair<int, int> cell_of(int s) const {
    int w = L - 1;
    while (sbase[w] > s) --w;
    return {w, s - sbase[w]};
  }

  bool force(int s, int val) {
    if (asg[s] != -1) return asg[s] == val;
    asg[s] = val;
    trail.push_back(s);
    const auto [w, c] = cell_of(s);
    for (int v = 0; v < L; ++v) {
      const auto& homs = sc.hom(v, w);
      for (std::size_t rr = 0; rr < homs.size(); ++rr) {
        const int c2 = g.rest[w][v][rr][c];
        if (!force(sbase[v] + c2, t.rest[w][v][rr][c][val])) return false;
      }
    }
    return true;
  }

  void undo(std::size_t mark) {
    while (trail.size() > mark) {
      asg[trail.back()] = -1;
      trail.pop_back();
    }
  }

  Term current() const {
    Term r;
    r.comp.resize(L);
    for (int w = 0; w < L; ++w) {
      r.comp[w].resize(g.size_at(w));
      for (int c = 0; c < g.size_at(w); ++c) r.comp[w][c] = asg[sbase[w] + c];
    }
    return r;
  }
};

}  // namespace

std::vector<Term> enumerate_terms(const TypePtr& t, long long cap) {
  check_ctx(t, "enumerate_terms");
  SectionSearch ss(*t);
  std::vector<Term> out;
  const std::function<void(int)> dfs = [&](int from) {
    int s = -1;
    for (int i = from; i < static_cast<int>(ss.asg.size()); ++i)
      if (ss.asg[i] == -1) {
        s = i;
        break;
      }
    if (s < 0) {
      if (static_cast<long long>(out.size()) >= cap)
        throw limit_error("section enumeration exceeded the cap");
      Term r = ss.current();
      r.type = t;
      out.push_back(std::move(r));
      return;
    }
    const auto [w, c] = ss.cell_of(s);
    for (int val = 0; val < t->fiber_size(w, c); ++val) {
      const std::size_t mark = ss.trail.size();
      if (ss.force(s, val)) dfs(s + 1);
      ss.undo(mark);
    }
  };
  dfs(0);
  return out;
}

std::optional<Term> sample_term(const TypePtr& t, unsigned seed) {
  check_ctx(t, "sample_term");
  SectionSearch ss(*t);
  std::mt19937 rng(seed);
  std::optional<Term> found;
  const std::function<void(int)> dfs = [&](int from) {
    if (found) return;
    int s = -1;
    for (int i = from; i < static_cast<int>(ss.asg.size()); ++i)
      if (ss.asg[i] == -1) {
        s = i;
        break;
      }
    if (s < 0) {
      Term r = ss.current();
      r.type = t;
      found = std::move(r);
      return;
    }
    const auto [w, c] = ss.cell_of(s);
    std::vector<int> order(t->fiber_size(w, c));
    for (std::size_t i = 0; i < order.size(); ++i)
      order[i] = static_cast<int>(i);
    std::shuffle(order.begin(), order.end(), rng);
    for (int val : order) {
      const std::size_t mark = ss.trail.size();
      if (ss.force(s, val)) dfs(s + 1);
      ss.undo(mark);
      if (found) return;
    }
  };
  dfs(0);
  return found;
}

}  // namespace bpcube
