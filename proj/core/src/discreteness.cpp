#include "bpcube/discreteness.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>

namespace bpcube {

namespace {

// Union-find over one fiber's elements.
struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) {
    std::iota(parent.begin(), parent.end(), 0);
  }
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
  const int n = static_cast<int>(uf.parent.size());
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

void check_type(const TypePtr& t, const char* who) {
  if (!t || !t->ctx)
    throw std::invalid_argument(std::string(who) + ": null type");
}

void check_rel(const TypeEqRel& e, const char* who) {
  if (!e.type || !e.type->ctx)
    throw std::invalid_argument(std::string(who) + ": relation has no type");
}

void check_var(const Cube& cube, int var, const char* who) {
  if (var < 0 || var >= cube.total())
    throw std::invalid_argument(std::string(who) + ": " +
                                std::to_string(var) +
                                " is not a variable of " + to_string(cube));
}

}  // namespace

// ---------------------------------------------------------------------------
// Degeneracy
// ---------------------------------------------------------------------------

bool is_degenerate(const Presheaf& g, int w_idx, int cell, int var) {
  const Cube& cube = g.cat().cube(w_idx);
  check_var(cube, var, "is_degenerate");
  const bool at0 =
      g.restrict_cell(w_idx, cell, endo_const(cube, var, 0)) == cell;
  const bool at1 =
      g.restrict_cell(w_idx, cell, endo_const(cube, var, 1)) == cell;
  if (at0 != at1)
    throw std::logic_error(
        "is_degenerate: the endpoint collapses disagree on cell " +
        g.cells[w_idx][cell]);
  return at0;
}

bool is_degenerate(const DependentType& t, int w_idx, int cell, int term,
                   int var) {
  const Cube& cube = t.cat().cube(w_idx);
  check_var(cube, var, "is_degenerate");
  if (!cell_degenerate(*t.ctx, w_idx, cell, var))
    throw std::invalid_argument(
        "is_degenerate: context cell " + t.ctx->cells[w_idx][cell] +
        " is not degenerate in " + var_name(cube, var) +
        ", so the collapse leaves the fiber");
  const bool at0 =
      t.restrict_fiber(w_idx, cell, term, endo_const(cube, var, 0)) == term;
  const bool at1 =
      t.restrict_fiber(w_idx, cell, term, endo_const(cube, var, 1)) == term;
  if (at0 != at1)
    throw std::logic_error(
        "is_degenerate: the endpoint collapses disagree on " +
        t.fibers[w_idx][cell][term]);
  return at0;
}

// ---------------------------------------------------------------------------
// Discreteness
// ---------------------------------------------------------------------------

DiscretenessReport is_discrete(const PshPtr& g) {
  if (!g) throw std::invalid_argument("is_discrete: null context");
  DiscretenessReport rep;
  rep.subject = DiscreteSubject::Context;
  const SiteCat& cat = g->cat();
  for (int w = 0; w < g->levels(); ++w) {
    const Cube& cube = cat.cube(w);
    for (int k = 0; k < cube.total(); ++k) {
      if (!se_contractible_var(cube, k)) continue;
      for (int c = 0; c < g->size_at(w); ++c)
        if (!is_degenerate(*g, w, c, k))
          rep.witnesses.push_back(DiscreteWitness{w, k, c, -1});
    }
  }
  rep.discrete = rep.witnesses.empty();
  return rep;
}

DiscretenessReport is_discrete(const Substitution& s) {
  require_valid(s);
  DiscretenessReport rep;
  rep.subject = DiscreteSubject::Map;
  const SiteCat& cat = s.src->cat();
  for (int w = 0; w < s.src->levels(); ++w) {
    const Cube& cube = cat.cube(w);
    for (int k = 0; k < cube.total(); ++k) {
      if (!se_contractible_var(cube, k)) continue;
      for (int c = 0; c < s.src->size_at(w); ++c)
        if (is_degenerate(*s.dst, w, s.comp[w][c], k) &&
            !is_degenerate(*s.src, w, c, k))
          rep.witnesses.push_back(DiscreteWitness{w, k, c, -1});
    }
  }
  rep.discrete = rep.witnesses.empty();
  return rep;
}

DiscretenessReport is_discrete(const TypePtr& t) {
  check_type(t, "is_discrete");
  DiscretenessReport rep;
  rep.subject = DiscreteSubject::Type;
  const SiteCat& cat = t->cat();
  for (int w = 0; w < t->levels(); ++w) {
    const Cube& cube = cat.cube(w);
    for (int k = 0; k < cube.total(); ++k) {
      if (!se_contractible_var(cube, k)) continue;
      for (int c = 0; c < t->ctx->size_at(w); ++c) {
        if (!cell_degenerate(*t->ctx, w, c, k)) continue;
        for (int x = 0; x < t->fiber_size(w, c); ++x)
          if (!is_degenerate(*t, w, c, x, k))
            rep.witnesses.push_back(DiscreteWitness{w, k, c, x});
      }
    }
  }
  rep.discrete = rep.witnesses.empty();
  return rep;
}

bool horn_lifting_discrete(const Substitution& s) {
  require_valid(s);
  const SiteCat& cat = s.src->cat();
  for (int u = 0; u < s.src->levels(); ++u) {
    const Cube& cu = cat.cube(u);
    for (int k = 0; k < cu.total(); ++k) {
      if (!se_contractible_var(cu, k)) continue;
      const int uw = cat.index_of(drop_var(cu, k));
      const int rk = hom_rank(weakening(cu, k));
      const auto& up_src = s.src->rest[uw][u][rk];  // cells at uw -> cells at u
      const auto& up_dst = s.dst->rest[uw][u][rk];
      for (int gp = 0; gp < s.src->size_at(u); ++gp) {
        for (int b = 0; b < s.dst->size_at(uw); ++b) {
          if (s.comp[u][gp] != up_dst[b]) continue;
          bool found = false;
          for (int d = 0; d < s.src->size_at(uw) && !found; ++d)
            found = up_src[d] == gp && s.comp[uw][d] == b;
          if (!found) return false;
        }
      }
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Fiberwise equivalence relations
// ---------------------------------------------------------------------------

int TypeEqRel::classes_at(int w, int cell) const {
  int top = -1;
  for (int id : cls[w][cell]) top = std::max(top, id);
  return top + 1;
}

TypeEqRel type_eqrel_discrete(const TypePtr& t) {
  check_type(t, "type_eqrel_discrete");
  TypeEqRel e;
  e.type = t;
  e.cls.resize(t->levels());
  for (int w = 0; w < t->levels(); ++w) {
    e.cls[w].resize(t->ctx->size_at(w));
    for (int c = 0; c < t->ctx->size_at(w); ++c) {
      e.cls[w][c].resize(t->fiber_size(w, c));
      std::iota(e.cls[w][c].begin(), e.cls[w][c].end(), 0);
    }
  }
  return e;
}

bool type_eqrel_closed_under_restriction(const TypeEqRel& e) {
  check_rel(e, "type_eqrel_closed_under_restriction");
  const DependentType& t = *e.type;
  const Presheaf& g = *t.ctx;
  for (int w = 0; w < t.levels(); ++w) {
    for (int c = 0; c < g.size_at(w); ++c) {
      // representative per class
      std::vector<int> rep(t.fiber_size(w, c), -1);
      for (int x = 0; x < t.fiber_size(w, c); ++x)
        if (rep[e.cls[w][c][x]] < 0) rep[e.cls[w][c][x]] = x;
      for (int x = 0; x < t.fiber_size(w, c); ++x) {
        const int r0 = rep[e.cls[w][c][x]];
        if (r0 == x) continue;
        for (int v = 0; v < t.levels(); ++v) {
          for (std::size_t r = 0; r < t.rest[w][v].size(); ++r) {
            const int d = g.rest[w][v][r][c];
            if (e.cls[v][d][t.rest[w][v][r][c][x]] !=
                e.cls[v][d][t.rest[w][v][r][c][r0]])
              return false;
          }
        }
      }
    }
  }
  return true;
}

bool type_eqrel_equal(const TypeEqRel& a, const TypeEqRel& b) {
  if (!a.type || !b.type || !(*a.type == *b.type)) return false;
  return a.cls == b.cls;  // both canonical
}

bool type_eqrel_subset(const TypeEqRel& a, const TypeEqRel& b) {
  if (!a.type || !b.type || !(*a.type == *b.type)) return false;
  for (std::size_t w = 0; w < a.cls.size(); ++w) {
    for (std::size_t c = 0; c < a.cls[w].size(); ++c) {
      std::vector<int> seen(a.cls[w][c].size(), -1);  // a-class -> b-class
      for (std::size_t x = 0; x < a.cls[w][c].size(); ++x) {
        int& s = seen[a.cls[w][c][x]];
        if (s < 0)
          s = b.cls[w][c][x];
        else if (s != b.cls[w][c][x])
          return false;
      }
    }
  }
  return true;
}

TypeEqRel type_eqrel_saturate(const TypePtr& t,
                              const std::vector<TypeSeed>& seeds) {
  check_type(t, "type_eqrel_saturate");
  const DependentType& p = *t;
  const Presheaf& g = *p.ctx;
  std::vector<std::vector<UnionFind>> uf;
  uf.reserve(p.levels());
  for (int w = 0; w < p.levels(); ++w) {
    uf.emplace_back();
    uf[w].reserve(g.size_at(w));
    for (int c = 0; c < g.size_at(w); ++c)
      uf[w].emplace_back(p.fiber_size(w, c));
  }
  std::vector<TypeSeed> work;
  auto unite = [&](int w, int c, int a, int b) {
    if (uf[w][c].unite(a, b)) work.push_back(TypeSeed{w, c, a, b});
  };
  for (const TypeSeed& s : seeds) {
    if (s.w_idx < 0 || s.w_idx >= p.levels() || s.cell < 0 ||
        s.cell >= g.size_at(s.w_idx) || s.term_a < 0 || s.term_b < 0 ||
        s.term_a >= p.fiber_size(s.w_idx, s.cell) ||
        s.term_b >= p.fiber_size(s.w_idx, s.cell))
      throw std::invalid_argument("type_eqrel_saturate: seed out of range");
    unite(s.w_idx, s.cell, s.term_a, s.term_b);
  }
  while (!work.empty()) {
    TypeSeed s = work.back();
    work.pop_back();
    for (int v = 0; v < p.levels(); ++v) {
      for (std::size_t r = 0; r < p.rest[s.w_idx][v].size(); ++r) {
        const int d = g.rest[s.w_idx][v][r][s.cell];
        unite(v, d, p.rest[s.w_idx][v][r][s.cell][s.term_a],
              p.rest[s.w_idx][v][r][s.cell][s.term_b]);
      }
    }
  }
  TypeEqRel e;
  e.type = t;
  e.cls.resize(p.levels());
  for (int w = 0; w < p.levels(); ++w) {
    e.cls[w].resize(g.size_at(w));
    for (int c = 0; c < g.size_at(w); ++c) e.cls[w][c] = canon_labels(uf[w][c]);
  }
  return e;
}

TypeEqRel subst_type_eqrel(const TypeEqRel& e, const Substitution& s) {
  check_rel(e, "subst_type_eqrel");
  if (!s.src || !s.dst || !(*s.dst == *e.type->ctx))
    throw std::invalid_argument(
        "subst_type_eqrel: the relation does not live over the "
        "substitution's target");
  TypeEqRel r;
  r.type = subst_type(e.type, s);
  r.cls.resize(e.cls.size());
  for (std::size_t w = 0; w < e.cls.size(); ++w) {
    r.cls[w].resize(s.src->size_at(static_cast<int>(w)));
    for (std::size_t d = 0; d < r.cls[w].size(); ++d)
      r.cls[w][d] = e.cls[w][s.comp[w][d]];
  }
  return r;
}

TypeEqRel apply_type_eqrel(PshFunctor f, const TypeEqRel& e) {
  check_rel(e, "apply_type_eqrel");
  TypeEqRel r;
  r.type = cwf_apply(f, e.type);
  const SiteCat& s2 = r.type->cat();
  const SiteCat& s1 = e.type->cat();
  const BaseFunctor F = base_functor_of(f);
  const int L2 = static_cast<int>(s2.cubes().size());
  r.cls.resize(L2);
  for (int w = 0; w < L2; ++w)
    r.cls[w] = e.cls[s1.index_of(apply_base_functor(F, s2.cube(w)))];
  return r;
}

namespace {

// Assemble canonical class ids from a fiberwise pairwise predicate that is
// already an equivalence (these arise as intersections of equivalences).
template <typename Same>
TypeEqRel rel_from_predicate(const TypePtr& t, const Same& same) {
  TypeEqRel r;
  r.type = t;
  r.cls.resize(t->levels());
  for (int w = 0; w < t->levels(); ++w) {
    r.cls[w].resize(t->ctx->size_at(w));
    for (int c = 0; c < t->ctx->size_at(w); ++c) {
      const int n = t->fiber_size(w, c);
      auto& cls = r.cls[w][c];
      cls.assign(n, -1);
      int next = 0;
      for (int x = 0; x < n; ++x) {
        for (int x0 = 0; x0 < x; ++x0)
          if (cls[x0] >= 0 && same(w, c, x0, x)) {
            cls[x] = cls[x0];
            break;
          }
        if (cls[x] < 0) cls[x] = next++;
      }
    }
  }
  return r;
}

}  // namespace

TypeEqRel forall_subst_type_eqrel(const Substitution& sigma, const TypePtr& t,
                                  const TypeEqRel& f) {
  check_type(t, "forall_subst_type_eqrel");
  check_rel(f, "forall_subst_type_eqrel");
  if (!sigma.dst || !(*sigma.dst == *t->ctx))
    throw std::invalid_argument(
        "forall_subst_type_eqrel: the substitution does not target the "
        "type's context");
  if (!(*f.type->ctx == *sigma.src))
    throw std::invalid_argument(
        "forall_subst_type_eqrel: the relation does not live over the "
        "substitution's source");
  for (int v = 0; v < t->levels(); ++v)
    for (int d = 0; d < sigma.src->size_at(v); ++d)
      if (f.type->fibers[v][d] != t->fibers[v][sigma.comp[v][d]])
        throw std::invalid_argument(
            "forall_subst_type_eqrel: the relation is not on the "
            "substituted type");
  const PshPtr ctx = t->ctx;
  const SiteCat& cat = t->cat();
  return rel_from_predicate(t, [&](int w, int c, int x, int y) {
    for (int v = 0; v < t->levels(); ++v) {
      const int nr = static_cast<int>(cat.hom(v, w).size());
      for (int r = 0; r < nr; ++r) {
        const int cphi = ctx->rest[w][v][r][c];
        const int xphi = t->rest[w][v][r][c][x];
        const int yphi = t->rest[w][v][r][c][y];
        for (int d = 0; d < sigma.src->size_at(v); ++d)
          if (sigma.comp[v][d] == cphi && !f.same(v, d, xphi, yphi))
            return false;
      }
    }
    return true;
  });
}

TypeEqRel forall_apply_type_eqrel(PshFunctor k, const TypePtr& t,
                                  const TypeEqRel& f) {
  check_type(t, "forall_apply_type_eqrel");
  check_rel(f, "forall_apply_type_eqrel");
  const BaseFunctor K = base_functor_of(k);
  const SiteCat& s1 = f.type->cat();  // image site
  const SiteCat& s2 = t->cat();
  if (f.type->ctx->site != source_site(K) || t->ctx->site != target_site(K))
    throw std::invalid_argument(
        "forall_apply_type_eqrel: sites do not match the modality");
  // Level-by-level the image context and type are the source read at K(V).
  std::vector<int> klevel(s1.cubes().size());
  for (std::size_t v = 0; v < s1.cubes().size(); ++v) {
    klevel[v] = s2.index_of(apply_base_functor(K, s1.cube(static_cast<int>(v))));
    if (f.type->ctx->cells[v] != t->ctx->cells[klevel[v]] ||
        f.type->fibers[v] != t->fibers[klevel[v]])
      throw std::invalid_argument(
          "forall_apply_type_eqrel: the relation is not on the image type");
  }
  const PshPtr ctx = t->ctx;
  return rel_from_predicate(t, [&](int w, int c, int x, int y) {
    for (std::size_t v = 0; v < klevel.size(); ++v) {
      const int lv = klevel[v];
      const int nr = static_cast<int>(s2.hom(lv, w).size());
      for (int r = 0; r < nr; ++r)
        if (!f.same(static_cast<int>(v), ctx->rest[w][lv][r][c],
                    t->rest[w][lv][r][c][x], t->rest[w][lv][r][c][y]))
          return false;
    }
    return true;
  });
}

TypeEqRel se_type(const TypePtr& t) {
  check_type(t, "se_type");
  const SiteCat& cat = t->cat();
  std::vector<TypeSeed> seeds;
  for (int w = 0; w < t->levels(); ++w) {
    const Cube& cube = cat.cube(w);
    for (int k = 0; k < cube.total(); ++k) {
      if (!se_contractible_var(cube, k)) continue;
      const FaceMap endo0 = endo_const(cube, k, 0);
      const int rk = hom_rank(endo0);
      for (int c = 0; c < t->ctx->size_at(w); ++c) {
        if (t->ctx->rest[w][w][rk][c] != c) continue;  // collapse leaves fiber
        for (int x = 0; x < t->fiber_size(w, c); ++x)
          seeds.push_back(TypeSeed{w, c, x, t->rest[w][w][rk][c][x]});
      }
    }
  }
  return type_eqrel_saturate(t, seeds);
}

// ---------------------------------------------------------------------------
// The shape quotient of a type
// ---------------------------------------------------------------------------

TypeQuotient quotient_type(const TypePtr& t, const TypeEqRel& e) {
  check_type(t, "quotient_type");
  check_rel(e, "quotient_type");
  if (!(*e.type == *t))
    throw std::invalid_argument(
        "quotient_type: relation carrier differs from the type");
  if (!type_eqrel_closed_under_restriction(e))
    throw std::invalid_argument(
        "quotient_type: relation is not closed under restriction; quotient "
        "undefined");
  const DependentType& p = *t;
  const Presheaf& g = *p.ctx;
  const int n = p.levels();
  // class id -> representative (smallest member index); the lexicographically
  // least member name labels the class
  std::vector<std::vector<std::vector<int>>> rep(n);
  std::vector<std::vector<std::vector<std::string>>> names(n);
  for (int w = 0; w < n; ++w) {
    rep[w].resize(g.size_at(w));
    names[w].resize(g.size_at(w));
    for (int c = 0; c < g.size_at(w); ++c) {
      const int k = e.classes_at(w, c);
      rep[w][c].assign(k, -1);
      names[w][c].resize(k);
      for (int x = 0; x < p.fiber_size(w, c); ++x) {
        const int id = e.cls[w][c][x];
        if (rep[w][c][id] < 0) {
          rep[w][c][id] = x;
          names[w][c][id] = p.fibers[w][c][x];
        } else if (p.fibers[w][c][x] < names[w][c][id]) {
          names[w][c][id] = p.fibers[w][c][x];
        }
      }
    }
  }
  DependentType q = make_type_skeleton(p.ctx, std::move(names));
  for (int w = 0; w < n; ++w)
    for (int v = 0; v < n; ++v)
      for (std::size_t r = 0; r < q.rest[w][v].size(); ++r)
        for (int c = 0; c < g.size_at(w); ++c) {
          const int d = g.rest[w][v][r][c];
          for (std::size_t k = 0; k < q.rest[w][v][r][c].size(); ++k)
            q.rest[w][v][r][c][k] =
                e.cls[v][d][p.rest[w][v][r][c][rep[w][c][k]]];
        }
  TypeQuotient out;
  out.type = t;
  out.rel = e;
  out.quot = std::make_shared<const DependentType>(std::move(q));
  out.into = TypeMorphism{t, out.quot, e.cls};
  return out;
}

TypeQuotient shape_quotient_type(const TypePtr& t) {
  return quotient_type(t, se_type(t));
}

TypeMorphism quot_coarsen_sharp(const TypeQuotient& q) {
  check_type(q.type, "quot_coarsen_sharp");
  check_type(q.quot, "quot_coarsen_sharp");
  if (!type_eqrel_equal(q.rel, se_type(q.type)))
    throw std::invalid_argument(
        "quot_coarsen_sharp: the quotient is not by the shape equivalence "
        "relation");
  const TypePtr sharp_src = cwf_apply(PshFunctor::Sharp, q.type);
  const TypeQuotient sq = shape_quotient_type(sharp_src);
  TypeMorphism m;
  m.src = cwf_apply(PshFunctor::Sharp, q.quot);
  m.dst = sq.quot;
  const SiteCat& s2 = m.src->cat();
  const SiteCat& s1 = q.type->cat();
  const BaseFunctor F = base_functor_of(PshFunctor::Sharp);
  const int L2 = static_cast<int>(s2.cubes().size());
  m.map.resize(L2);
  for (int w = 0; w < L2; ++w) {
    const int fw = s1.index_of(apply_base_functor(F, s2.cube(w)));
    m.map[w].resize(m.src->ctx->size_at(w));
    for (int c = 0; c < m.src->ctx->size_at(w); ++c) {
      m.map[w][c].assign(m.src->fiber_size(w, c), -1);
      // element x of the sharp fiber at (w,c) is element x at (fw,c)
      for (int x = 0; x < sharp_src->fiber_size(w, c); ++x) {
        const int k = q.rel.cls[fw][c][x];
        const int img = sq.into.map[w][c][x];
        if (m.map[w][c][k] < 0) {
          m.map[w][c][k] = img;
        } else if (m.map[w][c][k] != img) {
          throw std::logic_error(
              "quot_coarsen_sharp: a class of the sharpened relation "
              "straddles two classes of the sharp type's relation");
        }
      }
    }
  }
  return m;
}

// ---------------------------------------------------------------------------
// Invertible elimination along the quotient projection
// ---------------------------------------------------------------------------

TypeMorphism quotshp_rule_morphism(int rule, const TypeQuotient& q,
                                   const Substitution& sigma) {
  check_type(q.type, "quotshp_rule_morphism");
  check_type(q.quot, "quotshp_rule_morphism");
  TypeMorphism into = q.into;
  switch (rule) {
    case 1:
      break;
    case 2:
      into = cwf_apply(PshFunctor::Sharp, into);
      break;
    case 3:
      into = cwf_apply(PshFunctor::Coshp, into);
      break;
    default:
      throw std::invalid_argument(
          "quotshp_rule_morphism: rule must be 1, 2, or 3");
  }
  if (!sigma.src || !sigma.dst || !(*sigma.dst == *into.src->ctx))
    throw std::invalid_argument(
        "quotshp_rule_morphism: substitution target differs from the "
        "projection's context");
  return subst_type_morphism(into, sigma);
}

Substitution elim_compare(int rule, const TypeQuotient& q,
                          const Substitution& sigma) {
  return morphism_compare_subst(quotshp_rule_morphism(rule, q, sigma));
}

Term elim_quotshp(int rule, const TypeQuotient& q, const Substitution& sigma,
                  const TypePtr& t, const Term& u) {
  const TypeMorphism m = quotshp_rule_morphism(rule, q, sigma);
  check_type(t, "elim_quotshp");
  if (!is_discrete(t).discrete)
    throw std::invalid_argument("elim_quotshp: the motive must be discrete");
  const ExtContext eb = ext_context(m.dst);
  if (!(*t->ctx == *eb.ctx))
    throw std::invalid_argument(
        "elim_quotshp: the motive does not live over the extension by the "
        "quotient");
  if (!u.type || !(*u.type == *subst_type(t, morphism_compare_subst(m))))
    throw std::invalid_argument("elim_quotshp: the section has the wrong type");
  try {
    return factor_through_morphism(m, t, u);
  } catch (const std::invalid_argument& err) {
    throw std::logic_error(
        std::string("elim_quotshp: factorization failed on a discrete "
                    "motive: ") +
        err.what());
  }
}

// ---------------------------------------------------------------------------
// Pathhood irrelevance
// ---------------------------------------------------------------------------

bool pathhood_irrelevant(const TypePtr& t,
                         std::vector<PathhoodWitness>* witnesses) {
  check_type(t, "pathhood_irrelevant");
  const SiteCat& cat = t->cat();
  if (cat.site() != Site::BPCube)
    throw std::invalid_argument(
        "pathhood_irrelevant: defined over the bridge/path site only");
  bool ok = true;
  for (int w = 0; w < t->levels(); ++w) {
    const Cube& cu = cat.cube(w);
    for (int k = cu.nB; k < cu.total(); ++k) {
      // rename path variable k to a fresh bridge variable
      FaceMap br;
      br.cod = cu;
      br.dom = Cube{Site::BPCube, cu.nB + 1, cu.nP - 1};
      br.img.resize(cu.total());
      for (int v = 0; v < cu.total(); ++v) {
        if (v == k)
          br.img[v] = var_val(cu.nB);
        else if (v < cu.nB || v > k)
          br.img[v] = var_val(v);
        else
          br.img[v] = var_val(v + 1);
      }
      const int dl = cat.index_of(br.dom);
      const int rk = hom_rank(br);
      for (int c = 0; c < t->ctx->size_at(w); ++c) {
        const auto& row = t->rest[w][dl][rk][c];
        for (int a = 0; a < static_cast<int>(row.size()); ++a)
          for (int b = a + 1; b < static_cast<int>(row.size()); ++b)
            if (row[a] == row[b]) {
              ok = false;
              if (witnesses)
                witnesses->push_back(PathhoodWitness{w, k, c, a, b});
            }
      }
    }
  }
  return ok;
}

}  // namespace bpcube
