#include "bpcube/internal.hpp"

#include <algorithm>
#include <stdexcept>

namespace bpcube {

namespace {

void check_ctx(const PshPtr& ctx, const char* what) {
  if (!ctx) throw std::invalid_argument(std::string(what) + ": null context");
}

void check_bp(const PshPtr& ctx, const char* what) {
  check_ctx(ctx, what);
  if (ctx->site != Site::BPCube)
    throw std::invalid_argument(std::string(what) +
                                ": needs the bridge/path site");
}

void check_section(const Term& t, const TypePtr& ty, const char* what) {
  if (!t.type || !(*t.type == *ty))
    throw std::invalid_argument(std::string(what) +
                                ": operand is not a section of the expected type");
}

bool is_proposition(const TypePtr& p) {
  for (int w = 0; w < p->levels(); ++w)
    for (int c = 0; c < p->ctx->size_at(w); ++c)
      if (p->fiber_size(w, c) > 1) return false;
  return true;
}

}  // namespace

// ---------------------------------------------------------------------------
// Interval
// ---------------------------------------------------------------------------

IntervalData interval(PshPtr ctx) {
  check_ctx(ctx, "interval");
  const SiteCat& cat = ctx->cat();
  const Cube icube{ctx->site, 1, 0};
  const int n = ctx->levels();
  std::vector<std::vector<FaceMap>> elems(n);
  std::vector<std::vector<std::vector<std::string>>> fibers(n);
  for (int w = 0; w < n; ++w) {
    elems[w] = enumerate_hom(cat.cube(w), icube);
    std::vector<std::string> names;
    names.reserve(elems[w].size());
    for (const FaceMap& h : elems[w]) {
      const int val = h.img[0];
      names.push_back(val == VAL_ZERO  ? std::string("0")
                      : val == VAL_ONE ? std::string("1")
                                       : var_name(cat.cube(w), val_var(val)));
    }
    fibers[w].assign(ctx->cells[w].size(), names);
  }
  DependentType t = make_type_skeleton(ctx, std::move(fibers));
  for (int w = 0; w < n; ++w)
    for (int v = 0; v < n; ++v) {
      const auto& homs = cat.hom(v, w);
      for (int r = 0; r < (int)homs.size(); ++r) {
        std::vector<int> row(elems[w].size());
        for (int x = 0; x < (int)elems[w].size(); ++x)
          row[x] = hom_rank(compose(elems[w][x], homs[r]));
        for (int c = 0; c < ctx->size_at(w); ++c) t.rest[w][v][r][c] = row;
      }
    }
  IntervalData out;
  out.type = std::make_shared<const DependentType>(std::move(t));
  require_valid(*out.type, "interval");
  std::vector<std::vector<int>> c0(n), c1(n);
  for (int w = 0; w < n; ++w) {
    const int r0 = hom_rank(FaceMap{cat.cube(w), icube, {VAL_ZERO}});
    const int r1 = hom_rank(FaceMap{cat.cube(w), icube, {VAL_ONE}});
    c0[w].assign(ctx->size_at(w), r0);
    c1[w].assign(ctx->size_at(w), r1);
  }
  out.end0 = Term{out.type, std::move(c0)};
  out.end1 = Term{out.type, std::move(c1)};
  require_valid(out.end0, "interval end 0");
  require_valid(out.end1, "interval end 1");
  return out;
}

IntervalData sharp_interval(PshPtr ctx) {
  check_bp(ctx, "sharp_interval");
  IntervalData flat = interval(apply_psh(PshFunctor::Flat, ctx));
  IntervalData out;
  out.end0 = adj_transpose_term(TowerPair::FlatSharp, ctx, flat.end0);
  out.end1 = adj_transpose_term(TowerPair::FlatSharp, ctx, flat.end1);
  out.type = out.end0.type;
  return out;
}

// ---------------------------------------------------------------------------
// Nat
// ---------------------------------------------------------------------------

NatData nat_type(PshPtr ctx, int cap) {
  check_ctx(ctx, "nat_type");
  if (cap < 0) throw std::invalid_argument("nat_type: negative cap");
  const int n = ctx->levels();
  std::vector<std::string> names;
  for (int j = 0; j <= cap; ++j) names.push_back(std::to_string(j));
  std::vector<std::vector<std::vector<std::string>>> fibers(n);
  for (int w = 0; w < n; ++w) fibers[w].assign(ctx->cells[w].size(), names);
  DependentType t = make_type_skeleton(ctx, std::move(fibers));
  for (int w = 0; w < n; ++w)
    for (int v = 0; v < n; ++v)
      for (auto& rows : t.rest[w][v])
        for (auto& row : rows)
          for (int j = 0; j <= cap; ++j) row[j] = j;
  NatData out;
  out.type = std::make_shared<const DependentType>(std::move(t));
  out.cap = cap;
  require_valid(*out.type, "nat_type");
  return out;
}

Term nat_literal(const NatData& nat, int k) {
  if (k < 0 || k > nat.cap)
    throw std::invalid_argument("nat_literal: value outside the cap");
  const PshPtr ctx = nat.type->ctx;
  std::vector<std::vector<int>> comp(ctx->levels());
  for (int w = 0; w < ctx->levels(); ++w) comp[w].assign(ctx->size_at(w), k);
  return Term{nat.type, std::move(comp)};
}

Term nat_zero(const NatData& nat) { return nat_literal(nat, 0); }

Term nat_suc(const NatData& nat, const Term& n) {
  check_section(n, nat.type, "nat_suc");
  Term out = n;
  for (auto& level : out.comp)
    for (int& v : level) {
      if (v >= nat.cap)
        throw cap_overflow("nat_suc: successor exceeds the cap " +
                           std::to_string(nat.cap));
      ++v;
    }
  return out;
}

NatData nat_below(const NatData& nat) {
  if (nat.cap < 1)
    throw std::invalid_argument("nat_below: the cap is already zero");
  return nat_type(nat.type->ctx, nat.cap - 1);
}

Substitution nat_below_incl(const NatData& nat) {
  NatData below = nat_below(nat);
  ExtContext full = ext_context(nat.type);
  ExtContext part = ext_context(below.type);
  const PshPtr ctx = nat.type->ctx;
  std::vector<std::vector<int>> comp(ctx->levels());
  for (int w = 0; w < ctx->levels(); ++w) {
    comp[w].resize(part.ctx->size_at(w));
    for (int c = 0; c < ctx->size_at(w); ++c)
      for (int j = 0; j < nat.cap; ++j)
        comp[w][part.offset[w][c] + j] = full.offset[w][c] + j;
  }
  Substitution s{part.ctx, full.ctx, std::move(comp)};
  require_valid(s);
  return s;
}

Substitution nat_suc_compare(const NatData& nat, const TypePtr& motive) {
  ExtContext full = ext_context(nat.type);
  if (!motive || !(*motive->ctx == *full.ctx))
    throw std::invalid_argument(
        "nat_suc_compare: the motive does not live over the extension by "
        "the numbers");
  NatData below = nat_below(nat);
  ExtContext part = ext_context(below.type);
  Substitution incl = nat_below_incl(nat);
  TypePtr m_incl = subst_type(motive, incl);
  ExtContext twice = ext_context(m_incl);
  const PshPtr ctx = nat.type->ctx;
  std::vector<std::vector<int>> comp(ctx->levels());
  for (int w = 0; w < ctx->levels(); ++w) {
    comp[w].resize(twice.ctx->size_at(w));
    for (int c = 0; c < ctx->size_at(w); ++c)
      for (int j = 0; j < nat.cap; ++j) {
        const int bcell = part.offset[w][c] + j;
        for (int x = 0; x < m_incl->fiber_size(w, bcell); ++x)
          comp[w][twice.offset[w][bcell] + x] = full.offset[w][c] + (j + 1);
      }
  }
  Substitution s{twice.ctx, full.ctx, std::move(comp)};
  require_valid(s);
  return s;
}

Term nat_ind(const NatData& nat, const TypePtr& motive, const Term& base,
             const Term& step, const Term& n) {
  check_section(n, nat.type, "nat_ind");
  ExtContext full = ext_context(nat.type);
  if (!motive || !(*motive->ctx == *full.ctx))
    throw std::invalid_argument(
        "nat_ind: the motive does not live over the extension by the "
        "numbers");
  const PshPtr ctx = nat.type->ctx;
  const Substitution at_zero =
      pairing(id_subst(ctx), nat.type, nat_zero(nat));
  check_section(base, subst_type(motive, at_zero), "nat_ind base");
  NatData below = nat_below(nat);
  ExtContext part = ext_context(below.type);
  TypePtr m_incl = subst_type(motive, nat_below_incl(nat));
  ExtContext twice = ext_context(m_incl);
  check_section(step, subst_type(motive, nat_suc_compare(nat, motive)),
                "nat_ind step");
  std::vector<std::vector<int>> comp(ctx->levels());
  for (int w = 0; w < ctx->levels(); ++w) {
    comp[w].resize(ctx->size_at(w));
    for (int c = 0; c < ctx->size_at(w); ++c) {
      int v = base.comp[w][c];
      const int target = n.comp[w][c];
      for (int j = 0; j < target; ++j) {
        const int bcell = part.offset[w][c] + j;
        v = step.comp[w][twice.offset[w][bcell] + v];
      }
      comp[w][c] = v;
    }
  }
  Term out{subst_type(motive, pairing(id_subst(ctx), nat.type, n)),
           std::move(comp)};
  require_valid(out, "nat_ind");
  return out;
}

// ---------------------------------------------------------------------------
// Size
// ---------------------------------------------------------------------------

namespace {

// Vertices of the bridge part of the level's cube, in enumeration order.
std::vector<FaceMap> bridge_vertices(const SiteCat& cat, int w_idx) {
  const Cube& w = cat.cube(w_idx);
  return enumerate_hom(Cube{w.site, 0, 0}, Cube{w.site, w.nB, 0});
}

std::vector<int> size_decode(int index, int verts, int cap) {
  std::vector<int> digits(verts);
  for (int k = verts - 1; k >= 0; --k) {
    digits[k] = index % (cap + 1);
    index /= (cap + 1);
  }
  return digits;
}

int size_encode(const std::vector<int>& digits, int cap) {
  int index = 0;
  for (int d : digits) index = index * (cap + 1) + d;
  return index;
}

std::string size_name(const std::vector<int>& digits) {
  std::string s = "s";
  for (int d : digits) s += static_cast<char>('0' + d);
  return s;
}

}  // namespace

SizeData size_type(PshPtr ctx, int cap) {
  check_bp(ctx, "size_type");
  if (cap < 0 || cap > 9)
    throw std::invalid_argument(
        "size_type: the cap must lie between 0 and 9 (element names carry "
        "one digit per vertex)");
  const SiteCat& cat = ctx->cat();
  const int n = ctx->levels();
  std::vector<std::vector<std::vector<std::string>>> fibers(n);
  std::vector<int> nverts(n);
  for (int w = 0; w < n; ++w) {
    nverts[w] = (int)bridge_vertices(cat, w).size();
    int count = 1;
    for (int k = 0; k < nverts[w]; ++k) count *= cap + 1;
    std::vector<std::string> names;
    names.reserve(count);
    for (int e = 0; e < count; ++e)
      names.push_back(size_name(size_decode(e, nverts[w], cap)));
    fibers[w].assign(ctx->cells[w].size(), names);
  }
  DependentType t = make_type_skeleton(ctx, std::move(fibers));
  for (int w = 0; w < n; ++w) {
    const std::vector<FaceMap> vw = bridge_vertices(cat, w);
    for (int v = 0; v < n; ++v) {
      const std::vector<FaceMap> vv = bridge_vertices(cat, v);
      const auto& homs = cat.hom(v, w);
      for (int r = 0; r < (int)homs.size(); ++r) {
        const FaceMap shp_phi = apply_base_functor(BaseFunctor::Shp, homs[r]);
        // target vertex rank per source vertex
        std::vector<int> tv(vv.size());
        for (int k = 0; k < (int)vv.size(); ++k)
          tv[k] = hom_rank(compose(shp_phi, vv[k]));
        int count = 1;
        for (int k = 0; k < nverts[w]; ++k) count *= cap + 1;
        std::vector<int> row(count);
        for (int e = 0; e < count; ++e) {
          const std::vector<int> dig = size_decode(e, (int)vw.size(), cap);
          std::vector<int> img((int)vv.size());
          for (int k = 0; k < (int)vv.size(); ++k) img[k] = dig[tv[k]];
          row[e] = size_encode(img, cap);
        }
        for (int c = 0; c < ctx->size_at(w); ++c) t.rest[w][v][r][c] = row;
      }
    }
  }
  SizeData out;
  out.type = std::make_shared<const DependentType>(std::move(t));
  out.cap = cap;
  require_valid(*out.type, "size_type");
  return out;
}

int size_vertices(const SizeData& s, int w_idx) {
  return (int)bridge_vertices(s.type->cat(), w_idx).size();
}

int size_value(const SizeData& s, const Term& t, int w_idx, int cell,
               int vertex) {
  check_section(t, s.type, "size_value");
  return size_decode(t.comp[w_idx][cell], size_vertices(s, w_idx),
                     s.cap)[vertex];
}

Term size_const(const SizeData& s, int k) {
  if (k < 0 || k > s.cap)
    throw std::invalid_argument("size_const: value outside the cap");
  const PshPtr ctx = s.type->ctx;
  std::vector<std::vector<int>> comp(ctx->levels());
  for (int w = 0; w < ctx->levels(); ++w) {
    const int idx =
        size_encode(std::vector<int>(size_vertices(s, w), k), s.cap);
    comp[w].assign(ctx->size_at(w), idx);
  }
  return Term{s.type, std::move(comp)};
}

Term size_zero(const SizeData& s) { return size_const(s, 0); }

Term size_up(const SizeData& s, const Term& n) {
  check_section(n, s.type, "size_up");
  Term out = n;
  for (int w = 0; w < (int)out.comp.size(); ++w) {
    const int verts = size_vertices(s, w);
    for (int& e : out.comp[w]) {
      std::vector<int> dig = size_decode(e, verts, s.cap);
      for (int& d : dig) {
        if (d >= s.cap)
          throw cap_overflow("size_up: successor exceeds the cap " +
                             std::to_string(s.cap));
        ++d;
      }
      e = size_encode(dig, s.cap);
    }
  }
  return out;
}

Term size_max(const SizeData& s, const Term& m, const Term& n) {
  check_section(m, s.type, "size_max");
  check_section(n, s.type, "size_max");
  Term out = m;
  for (int w = 0; w < (int)out.comp.size(); ++w) {
    const int verts = size_vertices(s, w);
    for (std::size_t c = 0; c < out.comp[w].size(); ++c) {
      std::vector<int> a = size_decode(m.comp[w][c], verts, s.cap);
      const std::vector<int> b = size_decode(n.comp[w][c], verts, s.cap);
      for (int k = 0; k < verts; ++k) a[k] = std::max(a[k], b[k]);
      out.comp[w][c] = size_encode(a, s.cap);
    }
  }
  return out;
}

Term size_fill(const SizeData& s, const TypePtr& p, const Term& n) {
  const PshPtr ctx = s.type->ctx;
  const PshPtr shp_ctx = apply_psh(PshFunctor::Shp, ctx);
  if (!p || !(*p->ctx == *shp_ctx))
    throw std::invalid_argument(
        "size_fill: the proposition does not live over the shape quotient "
        "of the context");
  if (!is_proposition(p))
    throw std::invalid_argument("size_fill: fibers exceed one element");
  const TypePtr p_pulled = subst_type(p, varsigma_psh(ctx));
  ExtContext ext = ext_context(p_pulled);
  const SizeData over_ext = size_type(ext.ctx, s.cap);
  check_section(n, over_ext.type, "size_fill operand");
  const SiteCat& cat = ctx->cat();
  const int pt = cat.index_of(Cube{ctx->site, 0, 0});
  std::vector<std::vector<int>> comp(ctx->levels());
  for (int w = 0; w < ctx->levels(); ++w) {
    const Cube& cube = cat.cube(w);
    const std::vector<FaceMap> verts = bridge_vertices(cat, w);
    comp[w].resize(ctx->size_at(w));
    for (int c = 0; c < ctx->size_at(w); ++c) {
      std::vector<int> dig(verts.size());
      for (int k = 0; k < (int)verts.size(); ++k) {
        // Lift the vertex to the whole cube with every path variable at 0.
        FaceMap lift{Cube{ctx->site, 0, 0}, cube, {}};
        lift.img.resize(cube.total());
        for (int j = 0; j < cube.nB; ++j) lift.img[j] = verts[k].img[j];
        for (int j = cube.nB; j < cube.total(); ++j) lift.img[j] = VAL_ZERO;
        const int r = hom_rank(lift);
        const int down = ctx->rest[w][pt][r][c];
        if (p_pulled->fiber_size(pt, down) > 0)
          dig[k] = n.comp[pt][ext.offset[pt][down]];
        else
          dig[k] = 0;
      }
      comp[w][c] = size_encode(dig, s.cap);
    }
  }
  Term out{s.type, std::move(comp)};
  require_valid(out, "size_fill");
  return out;
}

// ---------------------------------------------------------------------------
// Sharp-side sizes
// ---------------------------------------------------------------------------

SharpSizeData sharp_size_type(PshPtr ctx, int cap) {
  check_bp(ctx, "sharp_size_type");
  SharpSizeData out;
  out.flat = size_type(apply_psh(PshFunctor::Flat, ctx), cap);
  out.type = subst_type(cwf_apply(PshFunctor::Sharp, out.flat.type),
                        unit_of(TowerPair::FlatSharp, ctx));
  out.cap = cap;
  return out;
}

Term sharp_size_of(const SharpSizeData& s, const Term& flat_term) {
  check_section(flat_term, s.flat.type, "sharp_size_of");
  Term out = adj_transpose_term(TowerPair::FlatSharp, s.type->ctx, flat_term);
  out.type = s.type;
  return out;
}

Term sharp_size_to_flat(const SharpSizeData& s, const Term& t) {
  check_section(t, s.type, "sharp_size_to_flat");
  return adj_transpose_term_inv(TowerPair::FlatSharp, s.type->ctx,
                                s.flat.type, t);
}

int sharp_size_vertices(const SharpSizeData& s, int w_idx) {
  const Cube& w = s.type->cat().cube(w_idx);
  int verts = 1;
  for (int k = 0; k < w.total(); ++k) verts *= 2;
  return verts;
}

int sharp_size_value(const SharpSizeData& s, const Term& t, int w_idx,
                     int cell, int vertex) {
  check_section(t, s.type, "sharp_size_value");
  return size_decode(t.comp[w_idx][cell], sharp_size_vertices(s, w_idx),
                     s.cap)[vertex];
}

Term sharp_size_const(const SharpSizeData& s, int k) {
  return sharp_size_of(s, size_const(s.flat, k));
}

Term sharp_size_zero(const SharpSizeData& s) { return sharp_size_const(s, 0); }

Term sharp_size_up(const SharpSizeData& s, const Term& n) {
  return sharp_size_of(s, size_up(s.flat, sharp_size_to_flat(s, n)));
}

Term sharp_size_max(const SharpSizeData& s, const Term& m, const Term& n) {
  return sharp_size_of(
      s, size_max(s.flat, sharp_size_to_flat(s, m), sharp_size_to_flat(s, n)));
}

Term sharp_size_fill(const SharpSizeData& s, const TypePtr& p, const Term& n) {
  const PshPtr ctx = s.type->ctx;
  const PshPtr shp_ctx = apply_psh(PshFunctor::Shp, ctx);
  if (!p || !(*p->ctx == *shp_ctx))
    throw std::invalid_argument(
        "sharp_size_fill: the proposition does not live over the shape "
        "quotient of the context");
  if (!is_proposition(p))
    throw std::invalid_argument("sharp_size_fill: fibers exceed one element");
  const TypePtr p_pulled = subst_type(p, varsigma_psh(ctx));
  ExtContext ext = ext_context(p_pulled);
  const SharpSizeData over_ext = sharp_size_type(ext.ctx, s.cap);
  check_section(n, over_ext.type, "sharp_size_fill operand");
  // Transpose the operand down to the flat side.  The flat of the extended
  // context is the flat context extended by the flat of the proposition,
  // so the plain fill applies there once the proposition is read over the
  // shape quotient of the flat context (possible because flats are
  // discrete, making the quotient comparison invertible).
  const Term n_flat = sharp_size_to_flat(over_ext, n);
  const PshPtr flat_ctx = s.flat.type->ctx;
  const TypePtr p_flat = cwf_apply(PshFunctor::Flat, p_pulled);
  const Substitution vs = varsigma_psh(flat_ctx);
  const TypePtr p_shifted = subst_type(p_flat, invert(vs));
  Term n_arg = n_flat;
  n_arg.type = size_type(ext_context(subst_type(p_shifted, vs)).ctx, s.cap).type;
  if (!(*n_arg.type == *n_flat.type))
    throw std::logic_error(
        "sharp_size_fill: the flat of the extension disagrees with the "
        "extension of the flat");
  const Term filled = size_fill(s.flat, p_shifted, n_arg);
  return sharp_size_of(s, filled);
}

TypePtr size_leq(const SharpSizeData& s, const Term& m, const Term& n) {
  check_section(m, s.type, "size_leq");
  check_section(n, s.type, "size_leq");
  const PshPtr ctx = s.type->ctx;
  const int L = ctx->levels();
  // Digitwise comparison at the cell itself suffices: every digit of a
  // restriction is a digit of the original at some vertex, so the relation
  // is closed under restriction by construction.
  std::vector<std::vector<char>> holds(L);
  for (int w = 0; w < L; ++w) {
    const int verts = sharp_size_vertices(s, w);
    holds[w].assign(ctx->size_at(w), 1);
    for (int c = 0; c < ctx->size_at(w); ++c) {
      const std::vector<int> a = size_decode(m.comp[w][c], verts, s.cap);
      const std::vector<int> b = size_decode(n.comp[w][c], verts, s.cap);
      for (int k = 0; k < verts; ++k)
        if (a[k] > b[k]) {
          holds[w][c] = 0;
          break;
        }
    }
  }
  std::vector<std::vector<std::vector<std::string>>> fibers(L);
  for (int w = 0; w < L; ++w) {
    fibers[w].resize(ctx->size_at(w));
    for (int c = 0; c < ctx->size_at(w); ++c)
      if (holds[w][c]) fibers[w][c].push_back("*");
  }
  DependentType t = make_type_skeleton(ctx, std::move(fibers));
  for (int w = 0; w < L; ++w)
    for (int v = 0; v < L; ++v)
      for (int r = 0; r < (int)t.rest[w][v].size(); ++r)
        for (int c = 0; c < ctx->size_at(w); ++c)
          if (holds[w][c]) t.rest[w][v][r][c].assign(1, 0);
  TypePtr out = std::make_shared<const DependentType>(std::move(t));
  require_valid(*out, "size_leq");
  return out;
}

// ---------------------------------------------------------------------------
// Codiscreteness of sizes
// ---------------------------------------------------------------------------

SizeCodiscReport size_codisc_check(const SizeData& s, const IntervalData& itv,
                                   const Term& i, const Term& m,
                                   const Term& n) {
  if (!(*itv.type->ctx == *s.type->ctx))
    throw std::invalid_argument(
        "size_codisc_check: interval and size live over different contexts");
  check_section(i, itv.type, "size_codisc_check");
  check_section(m, s.type, "size_codisc_check");
  check_section(n, s.type, "size_codisc_check");
  const TypePtr at0 = id_type(itv.type, i, itv.end0);
  const TypePtr at1 = id_type(itv.type, i, itv.end1);
  const TypePtr endpoints = prop_or(at0, at1);
  ExtContext ext = ext_context(endpoints);
  SizeCodiscReport rep;
  rep.premise =
      subst_term(m, ext.display) == subst_term(n, ext.display);
  rep.conclusion = m == n;
  rep.rule_holds = !rep.premise || rep.conclusion;
  return rep;
}

// ---------------------------------------------------------------------------
// Path degeneracy
// ---------------------------------------------------------------------------

DegeneracyReport degeneracy_check(PshPtr ctx) {
  check_bp(ctx, "degeneracy_check");
  IntervalData si = sharp_interval(ctx);
  ExtContext ext = ext_context(si.type);
  DegeneracyReport rep;
  rep.forward = apply_psh(PshFunctor::Shp, ext.display);
  rep.inverse = apply_psh(
      PshFunctor::Shp, pairing(id_subst(ctx), si.type, si.end0));
  const Substitution id_base = id_subst(rep.forward.dst);
  const Substitution id_ext = id_subst(rep.forward.src);
  rep.forward_after_inverse_id =
      compose_subst(rep.forward, rep.inverse) == id_base;
  rep.inverse_after_forward_id =
      compose_subst(rep.inverse, rep.forward) == id_ext;
  rep.iso = rep.forward_after_inverse_id && rep.inverse_after_forward_id;
  for (int w = 0; w < ctx->levels(); ++w)
    rep.counts.emplace_back(rep.forward.src->size_at(w),
                            rep.forward.dst->size_at(w));
  return rep;
}

}  // namespace bpcube
