#include "bpcube/gen.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>

namespace bpcube {

std::uint64_t Rng::next() {
  state_ += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

int Rng::below(int n) {
  if (n <= 0) throw std::invalid_argument("Rng::below: empty range");
  return static_cast<int>(next() % static_cast<std::uint64_t>(n));
}

Rng Rng::fork(std::uint64_t stream) const {
  Rng child(state_ ^ (0xd1b54a32d192ed03ULL * (stream + 1)));
  child.next();
  return child;
}

namespace {

// Generator cubes available under the dimension cap, in site order.
std::vector<Cube> generator_cubes(const GenConfig& cfg) {
  std::vector<Cube> out;
  for (const Cube& w : enumerate_cubes(cfg.site, cfg.D))
    if (w.total() <= cfg.gen_dim()) out.push_back(w);
  return out;
}

std::vector<SeedPair> draw_seed_pairs(const Presheaf& g, int max_seeds,
                                      Rng& rng) {
  std::vector<SeedPair> seeds;
  if (max_seeds <= 0) return seeds;
  const int count = rng.below(max_seeds + 1);
  std::vector<int> fat;  // levels with at least two cells
  for (int w = 0; w < g.levels(); ++w)
    if (g.size_at(w) >= 2) fat.push_back(w);
  if (fat.empty()) return seeds;
  for (int i = 0; i < count; ++i) {
    const int w = fat[static_cast<size_t>(rng.below((int)fat.size()))];
    const int a = rng.below(g.size_at(w));
    const int b = rng.below(g.size_at(w));
    if (a != b) seeds.push_back({w, a, b});
  }
  return seeds;
}

}  // namespace

PshPtr random_presheaf(const GenConfig& cfg, std::uint64_t seed) {
  Rng rng(seed);
  const std::vector<Cube> gens = generator_cubes(cfg);
  const int count = 1 + rng.below(std::max(1, cfg.max_generators));
  std::vector<PshPtr> parts;
  parts.reserve(count);
  for (int i = 0; i < count; ++i)
    parts.push_back(
        yoneda(cfg.site, cfg.D, gens[static_cast<size_t>(rng.below((int)gens.size()))]));
  PshPtr sum = coproduct(parts);
  const std::vector<SeedPair> seeds = draw_seed_pairs(*sum, cfg.max_seeds, rng);
  if (seeds.empty()) return sum;
  return quotient(sum, eqrel_saturate(sum, seeds)).quotient;
}

PshPtr random_discrete_presheaf(const GenConfig& cfg, std::uint64_t seed) {
  return shape_quotient(random_presheaf(cfg, seed)).quotient;
}

TypePtr random_type(const PshPtr& ctx, const GenConfig& cfg,
                    std::uint64_t seed) {
  if (ctx->site != cfg.site || ctx->D != cfg.D)
    throw std::invalid_argument("random_type: context does not match the config");
  Rng rng(seed);
  const PshPtr r = random_presheaf(cfg, rng.fork(1).next());
  const SiteCat& cat = ctx->cat();
  const int n = ctx->levels();

  // A restriction-closed subfamily of ctx x r, grown from random pairs.
  std::vector<std::vector<std::set<int>>> member(n);
  for (int w = 0; w < n; ++w) member[w].assign(ctx->cells[w].size(), {});
  const int picks = 1 + rng.below(std::max(1, cfg.max_seeds));
  std::vector<std::array<int, 3>> work;
  auto add = [&](int w, int cg, int cr) {
    if (member[w][cg].insert(cr).second) work.push_back({w, cg, cr});
  };
  for (int i = 0; i < picks; ++i) {
    const int w = rng.below(n);
    if (ctx->size_at(w) == 0 || r->size_at(w) == 0) continue;
    add(w, rng.below(ctx->size_at(w)), rng.below(r->size_at(w)));
  }
  while (!work.empty()) {
    const auto [w, cg, cr] = work.back();
    work.pop_back();
    for (int v = 0; v < n; ++v) {
      const auto& homs = cat.hom(v, w);
      for (int rk = 0; rk < (int)homs.size(); ++rk)
        add(v, ctx->rest[w][v][rk][cg], r->rest[w][v][rk][cr]);
    }
  }

  std::vector<std::vector<std::vector<std::string>>> fibers(n);
  std::vector<std::vector<std::vector<int>>> elt(n);  // [w][cg] -> sorted cr list
  for (int w = 0; w < n; ++w) {
    fibers[w].resize(ctx->cells[w].size());
    elt[w].resize(ctx->cells[w].size());
    for (int cg = 0; cg < ctx->size_at(w); ++cg) {
      elt[w][cg].assign(member[w][cg].begin(), member[w][cg].end());
      for (int cr : elt[w][cg]) fibers[w][cg].push_back(r->cells[w][cr]);
    }
  }
  DependentType t = make_type_skeleton(ctx, std::move(fibers));
  for (int w = 0; w < n; ++w)
    for (int v = 0; v < n; ++v) {
      const auto& homs = cat.hom(v, w);
      for (int rk = 0; rk < (int)homs.size(); ++rk)
        for (int cg = 0; cg < ctx->size_at(w); ++cg) {
          const int dg = ctx->rest[w][v][rk][cg];
          auto& row = t.rest[w][v][rk][cg];
          for (int x = 0; x < (int)elt[w][cg].size(); ++x) {
            const int dr = r->rest[w][v][rk][elt[w][cg][x]];
            const auto& dst = elt[v][dg];
            row[x] = (int)(std::lower_bound(dst.begin(), dst.end(), dr) -
                           dst.begin());
          }
        }
    }
  TypePtr out = std::make_shared<const DependentType>(std::move(t));
  require_valid(*out, "random_type");

  // Coarsen until every fiber respects the bound.
  for (;;) {
    std::vector<TypeSeed> merges;
    for (int w = 0; w < n; ++w)
      for (int cg = 0; cg < ctx->size_at(w); ++cg)
        if (out->fiber_size(w, cg) > cfg.fiber_bound) {
          const int a = rng.below(out->fiber_size(w, cg));
          int b = rng.below(out->fiber_size(w, cg));
          if (b == a) b = (a + 1) % out->fiber_size(w, cg);
          merges.push_back({w, cg, a, b});
        }
    if (merges.empty()) break;
    out = quotient_type(out, type_eqrel_saturate(out, merges)).quot;
  }
  return out;
}

TypePtr random_discrete_type(const PshPtr& ctx, const GenConfig& cfg,
                             std::uint64_t seed) {
  return shape_quotient_type(random_type(ctx, cfg, seed)).quot;
}

std::optional<TypePtr> random_nondiscrete_type(const PshPtr& ctx,
                                               const GenConfig& cfg,
                                               std::uint64_t seed) {
  Rng rng(seed);
  for (int attempt = 0; attempt < 40; ++attempt) {
    TypePtr t = random_type(ctx, cfg, rng.fork(attempt).next());
    if (!is_discrete(t).discrete) return t;
  }
  return std::nullopt;
}

Substitution random_substitution_onto(const PshPtr& dst, const GenConfig& cfg,
                                      std::uint64_t seed) {
  Rng rng(seed);
  const PshPtr src = random_presheaf(cfg, rng.fork(7).next());
  if (auto s = sample_substitution(src, dst, rng.next())) return *s;
  return *sample_substitution(dst, dst, rng.next());
}

Substitution random_substitution_instance(const GenConfig& cfg,
                                          std::uint64_t seed) {
  Rng rng(seed);
  const PshPtr g = random_presheaf(cfg, rng.fork(0).next());
  switch (rng.below(3)) {
    case 0: {
      const std::vector<SeedPair> seeds = draw_seed_pairs(*g, cfg.max_seeds, rng);
      return quotient(g, eqrel_saturate(g, seeds)).projection;
    }
    case 1: {
      const PshPtr d = random_presheaf(cfg, rng.fork(1).next());
      if (auto s = sample_substitution(g, d, rng.next())) return *s;
      return terminal_map(g);
    }
    default:
      return terminal_map(g);
  }
}

namespace {

// All partitions of {0..n-1} as restricted-growth strings: cls[0] = 0 and
// cls[i] <= 1 + max(cls[0..i-1]).  First-occurrence numbering is exactly the
// canonical class-id convention.
void partitions_of(int n, std::vector<std::vector<int>>& out) {
  std::vector<int> cur(n, 0);
  auto rec = [&](auto&& self, int i, int mx) -> void {
    if (i == n) {
      out.push_back(cur);
      return;
    }
    for (int c = 0; c <= mx + 1; ++c) {
      cur[i] = c;
      self(self, i + 1, std::max(mx, c));
    }
  };
  if (n == 0)
    out.push_back({});
  else
    rec(rec, 0, -1);
}

}  // namespace

std::vector<EqRel> enumerate_eqrels(const PshPtr& g, long long cap) {
  std::vector<std::vector<std::vector<int>>> per_level(g->levels());
  long long combos = 1;
  for (int w = 0; w < g->levels(); ++w) {
    partitions_of(g->size_at(w), per_level[w]);
    combos *= (long long)per_level[w].size();
    if (combos > cap) throw limit_error("enumerate_eqrels: too many partitions");
  }
  std::vector<EqRel> out;
  EqRel e{g, std::vector<std::vector<int>>(g->levels())};
  auto rec = [&](auto&& self, int w) -> void {
    if (w == g->levels()) {
      if (eqrel_closed_under_restriction(e)) out.push_back(e);
      return;
    }
    for (const auto& p : per_level[w]) {
      e.cls[w] = p;
      self(self, w + 1);
    }
  };
  rec(rec, 0);
  return out;
}

std::vector<TypeEqRel> enumerate_type_eqrels(const TypePtr& t, long long cap) {
  const PshPtr ctx = t->ctx;
  std::vector<std::vector<std::vector<std::vector<int>>>> per_fiber(t->levels());
  long long combos = 1;
  for (int w = 0; w < t->levels(); ++w) {
    per_fiber[w].resize(ctx->size_at(w));
    for (int c = 0; c < ctx->size_at(w); ++c) {
      partitions_of(t->fiber_size(w, c), per_fiber[w][c]);
      combos *= (long long)per_fiber[w][c].size();
      if (combos > cap)
        throw limit_error("enumerate_type_eqrels: too many partitions");
    }
  }
  std::vector<TypeEqRel> out;
  TypeEqRel e{t, std::vector<std::vector<std::vector<int>>>(t->levels())};
  for (int w = 0; w < t->levels(); ++w) e.cls[w].resize(ctx->size_at(w));
  auto rec = [&](auto&& self, int w, int c) -> void {
    if (w == t->levels()) {
      if (type_eqrel_closed_under_restriction(e)) out.push_back(e);
      return;
    }
    if (c == ctx->size_at(w)) {
      self(self, w + 1, 0);
      return;
    }
    for (const auto& p : per_fiber[w][c]) {
      e.cls[w][c] = p;
      self(self, w, c + 1);
    }
  };
  rec(rec, 0, 0);
  return out;
}

namespace {

// Cells whose restriction chain reaches the given cell (the cell itself
// included); removing exactly this set leaves a restriction-closed family.
std::vector<std::vector<char>> preimage_closure(const Presheaf& g, int w0,
                                                int c0) {
  std::vector<std::vector<char>> hit(g.levels());
  for (int w = 0; w < g.levels(); ++w) hit[w].assign(g.cells[w].size(), 0);
  hit[w0][c0] = 1;
  bool grew = true;
  while (grew) {
    grew = false;
    for (int w = 0; w < g.levels(); ++w)
      for (int c = 0; c < g.size_at(w); ++c) {
        if (hit[w][c]) continue;
        for (int v = 0; v < g.levels() && !hit[w][c]; ++v)
          for (const auto& row : g.rest[w][v])
            if (hit[v][row[c]]) {
              hit[w][c] = 1;
              grew = true;
              break;
            }
      }
  }
  return hit;
}

PshPtr drop_cells(const Presheaf& g,
                  const std::vector<std::vector<char>>& dropped) {
  std::vector<std::vector<std::string>> cells(g.levels());
  std::vector<std::vector<int>> newidx(g.levels());
  for (int w = 0; w < g.levels(); ++w) {
    newidx[w].assign(g.cells[w].size(), -1);
    for (int c = 0; c < g.size_at(w); ++c)
      if (!dropped[w][c]) {
        newidx[w][c] = (int)cells[w].size();
        cells[w].push_back(g.cells[w][c]);
      }
  }
  Presheaf out = make_presheaf_skeleton(g.site, g.D, std::move(cells));
  for (int w = 0; w < g.levels(); ++w)
    for (int v = 0; v < g.levels(); ++v)
      for (size_t r = 0; r < g.rest[w][v].size(); ++r)
        for (int c = 0; c < g.size_at(w); ++c)
          if (newidx[w][c] >= 0)
            out.rest[w][v][r][newidx[w][c]] = newidx[v][g.rest[w][v][r][c]];
  return std::make_shared<const Presheaf>(std::move(out));
}

}  // namespace

PshPtr shrink_presheaf(PshPtr g,
                       const std::function<bool(const PshPtr&)>& fails) {
  if (!fails(g)) return g;
  bool progress = true;
  while (progress) {
    progress = false;
    for (int w = g->levels() - 1; w >= 0 && !progress; --w)
      for (int c = 0; c < g->size_at(w) && !progress; ++c) {
        PshPtr smaller = drop_cells(*g, preimage_closure(*g, w, c));
        if (fails(smaller)) {
          g = smaller;
          progress = true;
        }
      }
  }
  return g;
}

namespace {

// Element-level analogue of preimage_closure on a type's fiber graph.
TypePtr drop_fiber_element(const DependentType& t, int w0, int c0, int x0) {
  const PshPtr ctx = t.ctx;
  std::vector<std::vector<std::vector<char>>> hit(t.levels());
  for (int w = 0; w < t.levels(); ++w) {
    hit[w].resize(ctx->size_at(w));
    for (int c = 0; c < ctx->size_at(w); ++c)
      hit[w][c].assign(t.fibers[w][c].size(), 0);
  }
  hit[w0][c0][x0] = 1;
  bool grew = true;
  while (grew) {
    grew = false;
    for (int w = 0; w < t.levels(); ++w)
      for (int c = 0; c < ctx->size_at(w); ++c)
        for (int x = 0; x < t.fiber_size(w, c); ++x) {
          if (hit[w][c][x]) continue;
          for (int v = 0; v < t.levels() && !hit[w][c][x]; ++v)
            for (size_t r = 0; r < t.rest[w][v].size(); ++r) {
              const int dc = ctx->rest[w][v][r][c];
              if (hit[v][dc][t.rest[w][v][r][c][x]]) {
                hit[w][c][x] = 1;
                grew = true;
                break;
              }
            }
        }
  }
  std::vector<std::vector<std::vector<std::string>>> fibers(t.levels());
  std::vector<std::vector<std::vector<int>>> newidx(t.levels());
  for (int w = 0; w < t.levels(); ++w) {
    fibers[w].resize(ctx->size_at(w));
    newidx[w].resize(ctx->size_at(w));
    for (int c = 0; c < ctx->size_at(w); ++c) {
      newidx[w][c].assign(t.fibers[w][c].size(), -1);
      for (int x = 0; x < t.fiber_size(w, c); ++x)
        if (!hit[w][c][x]) {
          newidx[w][c][x] = (int)fibers[w][c].size();
          fibers[w][c].push_back(t.fibers[w][c][x]);
        }
    }
  }
  DependentType out = make_type_skeleton(ctx, std::move(fibers));
  for (int w = 0; w < t.levels(); ++w)
    for (int v = 0; v < t.levels(); ++v)
      for (size_t r = 0; r < t.rest[w][v].size(); ++r)
        for (int c = 0; c < ctx->size_at(w); ++c) {
          const int dc = ctx->rest[w][v][r][c];
          for (int x = 0; x < t.fiber_size(w, c); ++x)
            if (newidx[w][c][x] >= 0)
              out.rest[w][v][r][c][newidx[w][c][x]] =
                  newidx[v][dc][t.rest[w][v][r][c][x]];
        }
  return std::make_shared<const DependentType>(std::move(out));
}

}  // namespace

TypePtr shrink_type(TypePtr t,
                    const std::function<bool(const TypePtr&)>& fails) {
  if (!fails(t)) return t;
  bool progress = true;
  while (progress) {
    progress = false;
    // Drop one fiber element (with everything that restricts onto it).
    for (int w = t->levels() - 1; w >= 0 && !progress; --w)
      for (int c = 0; c < t->ctx->size_at(w) && !progress; ++c)
        for (int x = 0; x < t->fiber_size(w, c) && !progress; ++x) {
          TypePtr smaller = drop_fiber_element(*t, w, c, x);
          if (fails(smaller)) {
            t = smaller;
            progress = true;
          }
        }
    if (progress) continue;
    // Coarsen one fiber by a saturated merge.
    for (int w = 0; w < t->levels() && !progress; ++w)
      for (int c = 0; c < t->ctx->size_at(w) && !progress; ++c)
        for (int a = 0; a + 1 < t->fiber_size(w, c) && !progress; ++a)
          for (int b = a + 1; b < t->fiber_size(w, c) && !progress; ++b) {
            TypePtr merged =
                quotient_type(t, type_eqrel_saturate(t, {{w, c, a, b}})).quot;
            if (fails(merged)) {
              t = merged;
              progress = true;
            }
          }
  }
  return t;
}

}  // namespace bpcube
