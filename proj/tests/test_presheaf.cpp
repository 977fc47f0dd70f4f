#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>

#include "bpcube/presheaf.hpp"

using namespace bpcube;

namespace {

Cube bp(int nB, int nP) { return Cube{Site::BPCube, nB, nP}; }
Cube edges(int n) { return Cube{Site::Cube, n, 0}; }

PshPtr copy_with(const Presheaf& g, void (*mut)(Presheaf&)) {
  Presheaf h = g;
  mut(h);
  return std::make_shared<const Presheaf>(std::move(h));
}

std::vector<int> level_sizes(const Presheaf& g) {
  std::vector<int> out;
  for (const auto& lvl : g.cells) out.push_back((int)lvl.size());
  return out;
}

}  // namespace

TEST_CASE("terminal presheaf and the unique map into it") {
  for (Site site : {Site::BPCube, Site::Cube}) {
    for (int d = 0; d <= 2; ++d) {
      PshPtr t = terminal_presheaf(site, d);
      CHECK(validate_presheaf(*t).ok);
      for (int w = 0; w < t->levels(); ++w) CHECK(t->size_at(w) == 1);
      PshPtr y1 = yoneda(site, d, site == Site::BPCube ? bp(0, 0) : edges(0));
      CHECK(find_iso(y1, t).has_value());
      Substitution bang = terminal_map(yoneda(site, d, site_cat(site, d).cubes().back()));
      CHECK(validate_substitution(bang).ok);
    }
  }
}

TEST_CASE("representables: sizes, validity, restriction = composition") {
  PshPtr y1b = yoneda(Site::BPCube, 1, bp(1, 0));
  CHECK(validate_presheaf(*y1b).ok);
  CHECK(level_sizes(*y1b) == std::vector<int>{2, 3, 2});  // point, bridge, path levels

  PshPtr y1p = yoneda(Site::BPCube, 1, bp(0, 1));
  CHECK(validate_presheaf(*y1p).ok);
  CHECK(level_sizes(*y1p) == std::vector<int>{2, 3, 3});

  for (int d = 1; d <= 2; ++d) {
    for (const Cube& w0 : site_cat(Site::BPCube, d).cubes()) {
      PshPtr y = yoneda(Site::BPCube, d, w0);
      CHECK(validate_presheaf(*y).ok);
      const SiteCat& cat = site_cat(Site::BPCube, d);
      for (int v = 0; v < (int)cat.cubes().size(); ++v)
        CHECK((std::uint64_t)y->size_at(v) == hom_size(cat.cube(v), w0));
    }
  }
}

TEST_CASE("natural maps out of the point representable = matching global elements") {
  PshPtr pt = yoneda(Site::BPCube, 1, bp(0, 0));
  PshPtr y1b = yoneda(Site::BPCube, 1, bp(1, 0));
  auto subs = enumerate_substitutions(pt, y1b);
  CHECK(subs.size() == 2);
  for (const auto& s : subs) CHECK(validate_substitution(s).ok);

  // into the terminal: exactly one
  CHECK(enumerate_substitutions(y1b, terminal_presheaf(Site::BPCube, 1)).size() == 1);
  // out of the empty presheaf: exactly one
  PshPtr empty = std::make_shared<const Presheaf>(
      make_presheaf_skeleton(Site::BPCube, 1, {{}, {}, {}}));
  CHECK(validate_presheaf(*empty).ok);
  CHECK(enumerate_substitutions(empty, y1b).size() == 1);
  // into the empty presheaf from something inhabited: none
  CHECK(enumerate_substitutions(y1b, empty).empty());
}

TEST_CASE("substitution algebra: compose, invert, sample") {
  PshPtr y1b = yoneda(Site::BPCube, 1, bp(1, 0));
  Substitution idm = id_subst(y1b);
  CHECK(validate_substitution(idm).ok);
  CHECK(is_iso(idm));
  CHECK(compose_subst(idm, idm) == idm);

  auto sampled = sample_substitution(yoneda(Site::BPCube, 1, bp(0, 0)), y1b, 7);
  REQUIRE(sampled.has_value());
  CHECK(validate_substitution(*sampled).ok);
  auto again = sample_substitution(yoneda(Site::BPCube, 1, bp(0, 0)), y1b, 7);
  CHECK(*sampled == *again);

  auto iso = find_iso(y1b, y1b);
  REQUIRE(iso.has_value());
  CHECK(compose_subst(invert(*iso), *iso) == id_subst(y1b));
}

TEST_CASE("validation flags planted defects") {
  PshPtr y1b = yoneda(Site::BPCube, 1, bp(1, 0));
  // reroute one restriction entry so the composition law fails
  PshPtr broken = copy_with(*y1b, [](Presheaf& h) { h.rest[1][0][0][0] = (h.rest[1][0][0][0] + 1) % 2; });
  Validation v = validate_presheaf(*broken);
  CHECK_FALSE(v.ok);
  CHECK_FALSE(v.problems.empty());

  PshPtr dupnames = copy_with(*y1b, [](Presheaf& h) { h.cells[0][1] = h.cells[0][0]; });
  CHECK_FALSE(validate_presheaf(*dupnames).ok);

  // identity row must stay put
  PshPtr idbroken = copy_with(*y1b, [](Presheaf& h) {
    const FaceMap idm = id_map(Cube{Site::BPCube, 0, 0});
    auto& row = h.rest[0][0][hom_rank(idm)];
    std::swap(row[0], row[1]);
  });
  CHECK_FALSE(validate_presheaf(*idbroken).ok);
}

TEST_CASE("equivalence relations: saturation and quotients") {
  PshPtr y1b = yoneda(Site::BPCube, 1, bp(1, 0));

  EqRel disc = eqrel_discrete(y1b);
  EqRel total = eqrel_total(y1b);
  CHECK(eqrel_closed_under_restriction(disc));
  CHECK(eqrel_closed_under_restriction(total));
  CHECK(eqrel_subset(disc, total));
  CHECK_FALSE(eqrel_subset(total, disc));

  // merging the two endpoints at the point level forces a full collapse there
  EqRel merged = eqrel_saturate(y1b, {SeedPair{0, 0, 1}});
  CHECK(eqrel_closed_under_restriction(merged));
  CHECK(merged.classes_at(0) == 1);

  QuotientResult q = quotient(y1b, merged);
  CHECK(validate_presheaf(*q.quotient).ok);
  CHECK(validate_substitution(q.projection).ok);
  CHECK(q.quotient->size_at(0) == 1);
  // lexicographically least member names the class
  CHECK(q.quotient->cells[0][0] == y1b->cells[0][0]);

  QuotientResult all = quotient(y1b, total);
  CHECK(validate_presheaf(*all.quotient).ok);
  CHECK(level_sizes(*all.quotient) == std::vector<int>{1, 1, 1});

  // a relation that is not restriction-closed is rejected
  EqRel bad = eqrel_discrete(y1b);
  bad.cls[1][0] = bad.cls[1][2];  // merge two bridge cells whose endpoints differ
  CHECK_FALSE(eqrel_closed_under_restriction(bad));
  CHECK_THROWS_AS((void)quotient(y1b, bad), std::invalid_argument);
}

TEST_CASE("shape relation on the path representable collapses it to the point") {
  for (int d = 1; d <= 2; ++d) {
    PshPtr yp = yoneda(Site::BPCube, d, bp(0, 1));
    ShapeQuotient q = shape_quotient(yp);
    CHECK(validate_presheaf(*q.quotient).ok);
    CHECK(validate_substitution(q.projection).ok);
    for (int w = 0; w < q.quotient->levels(); ++w) CHECK(q.quotient->size_at(w) == 1);
    CHECK(find_iso(q.quotient, terminal_presheaf(Site::BPCube, d)).has_value());
    CHECK(discrete_context_quick(*q.quotient));
  }
}

TEST_CASE("shape relation leaves the bridge representable alone") {
  for (int d = 1; d <= 2; ++d) {
    PshPtr yb = yoneda(Site::BPCube, d, bp(1, 0));
    ShapeQuotient q = shape_quotient(yb);
    CHECK(level_sizes(*q.quotient) == level_sizes(*yb));
    auto iso = find_iso(q.quotient, yb);
    CHECK(iso.has_value());
    CHECK(discrete_context_quick(*q.quotient));
  }
}

TEST_CASE("shape-collapsing end on representables matches the base shape functor") {
  // cohpi(y(W)) is the plain cubical representable on the bridge part of W
  for (const Cube& w0 : site_cat(Site::BPCube, 2).cubes()) {
    PshPtr lhs = cohpi(yoneda(Site::BPCube, 2, w0));
    PshPtr rhs = yoneda(Site::Cube, 2, apply_base_functor(BaseFunctor::ShapeB, w0));
    CHECK(validate_presheaf(*lhs).ok);
    auto iso = find_iso(lhs, rhs);
    REQUIRE_MESSAGE(iso.has_value(), "no explicit invertible substitution at " << to_string(w0));
    CHECK(validate_substitution(*iso).ok);
    CHECK(is_iso(*iso));
  }
}

TEST_CASE("discreteness of quick check matches degeneracy along both endpoints") {
  PshPtr yp = yoneda(Site::BPCube, 1, bp(0, 1));
  CHECK_FALSE(discrete_context_quick(*yp));
  // degeneracy agrees whether tested at 0 or 1
  const SiteCat& cat = site_cat(Site::BPCube, 1);
  PshPtr q = shape_quotient(yp).quotient;
  for (int w = 0; w < q->levels(); ++w) {
    const Cube& cube = cat.cube(w);
    for (int k = 0; k < cube.total(); ++k) {
      if (!se_contractible_var(cube, k)) continue;
      for (int c = 0; c < q->size_at(w); ++c) {
        const bool at0 = q->restrict_cell(w, c, endo_const(cube, k, 0)) == c;
        const bool at1 = q->restrict_cell(w, c, endo_const(cube, k, 1)) == c;
        CHECK(at0 == at1);
      }
    }
  }
}

TEST_CASE("precomposition functors: tables land on the stated levels") {
  PshPtr g = yoneda(Site::BPCube, 2, bp(1, 1));
  const SiteCat& cat = g->cat();

  PshPtr sharp = apply_psh(PshFunctor::Sharp, g);
  PshPtr coshp = apply_psh(PshFunctor::Coshp, g);
  PshPtr flat = apply_psh(PshFunctor::Flat, g);
  for (const Cube& w : cat.cubes()) {
    const int wi = cat.index_of(w);
    CHECK(sharp->cells[wi] == g->cells[cat.index_of(bp(w.nB + w.nP, 0))]);
    CHECK(coshp->cells[wi] == g->cells[cat.index_of(bp(0, w.nB + w.nP))]);
    CHECK(flat->cells[wi] == g->cells[cat.index_of(bp(w.nB, 0))]);
  }

  PshPtr x = yoneda(Site::Cube, 2, edges(1));
  PshPtr dx = apply_psh(PshFunctor::Disc, x);
  PshPtr cx = apply_psh(PshFunctor::Codisc, x);
  const SiteCat& bcat = site_cat(Site::BPCube, 2);
  for (const Cube& w : bcat.cubes()) {
    CHECK(dx->cells[bcat.index_of(w)] == x->cells[x->cat().index_of(edges(w.nB))]);
    CHECK(cx->cells[bcat.index_of(w)] == x->cells[x->cat().index_of(edges(w.nB + w.nP))]);
  }
}

TEST_CASE("on-the-nose functor equalities at the presheaf level") {
  auto samples = std::vector<PshPtr>{
      yoneda(Site::BPCube, 1, bp(1, 0)), yoneda(Site::BPCube, 1, bp(0, 1)),
      yoneda(Site::BPCube, 2, bp(1, 1)), terminal_presheaf(Site::BPCube, 2),
  };
  auto F = [](PshFunctor f, PshPtr g) { return apply_psh(f, g); };
  for (PshPtr g : samples) {
    PshPtr shp_g = F(PshFunctor::Shp, g);
    PshPtr flat_g = F(PshFunctor::Flat, g);
    PshPtr sharp_g = F(PshFunctor::Sharp, g);
    PshPtr coshp_g = F(PshFunctor::Coshp, g);
    CHECK(*F(PshFunctor::Flat, shp_g) == *shp_g);
    CHECK(*F(PshFunctor::Flat, flat_g) == *flat_g);
    CHECK(*F(PshFunctor::Flat, sharp_g) == *flat_g);
    CHECK(*F(PshFunctor::Sharp, flat_g) == *sharp_g);
    CHECK(*F(PshFunctor::Sharp, sharp_g) == *sharp_g);
    CHECK(*F(PshFunctor::Sharp, coshp_g) == *coshp_g);
    CHECK(*F(PshFunctor::Coshp, sharp_g) == *sharp_g);
    CHECK(*F(PshFunctor::Coshp, coshp_g) == *coshp_g);
    // iso-only composites: the witnesses are explicit invertible substitutions
    CHECK(find_iso(F(PshFunctor::Shp, shp_g), shp_g).has_value());
    CHECK(find_iso(F(PshFunctor::Shp, flat_g), flat_g).has_value());
  }

  auto cube_samples = std::vector<PshPtr>{
      yoneda(Site::Cube, 1, edges(1)), yoneda(Site::Cube, 2, edges(2)),
      terminal_presheaf(Site::Cube, 2)};
  for (PshPtr x : cube_samples) {
    CHECK(*apply_psh(PshFunctor::Under, apply_psh(PshFunctor::Disc, x)) == *x);
    CHECK(*apply_psh(PshFunctor::Under, apply_psh(PshFunctor::Codisc, x)) == *x);
    CHECK(*apply_psh(PshFunctor::Paths, apply_psh(PshFunctor::Codisc, x)) == *x);
    // the comparison X -> Pi Disc X is invertible
    Substitution vb = varsigma_bar_psh(x);
    CHECK(validate_substitution(vb).ok);
    CHECK(is_iso(vb));
  }
}

TEST_CASE("named transforms validate; the flat counit is injective per level") {
  for (PshPtr g : {yoneda(Site::BPCube, 1, bp(0, 1)), yoneda(Site::BPCube, 2, bp(1, 1)),
                   coproduct({yoneda(Site::BPCube, 1, bp(1, 0)), terminal_presheaf(Site::BPCube, 1)})}) {
    Substitution kap = kappa_psh(g);
    Substitution io = iota_psh(g);
    Substitution th = theta_psh(g);
    CHECK(validate_substitution(kap).ok);
    CHECK(validate_substitution(io).ok);
    CHECK(validate_substitution(th).ok);
    for (const auto& lvl : kap.comp) {
      std::set<int> seen(lvl.begin(), lvl.end());
      CHECK(seen.size() == lvl.size());
    }
  }
}

TEST_CASE("shape unit factors through the quotient comparison") {
  for (PshPtr g : {yoneda(Site::BPCube, 1, bp(0, 1)), yoneda(Site::BPCube, 2, bp(1, 1))}) {
    Substitution unit = varsigma_psh(g);
    CHECK(validate_substitution(unit).ok);
    Substitution kq = kappa_quot_psh(g);
    CHECK(validate_substitution(kq).ok);
    CHECK(is_iso(kq));
    // unit = (quot comparison)^-1 . projection
    Substitution via = compose_subst(invert(kq), varsigma0_psh(g));
    CHECK(via.comp == unit.comp);
    // the projection itself = comparison . unit
    Substitution back = compose_subst(kq, retarget(unit, g, kq.src));
    CHECK(back.comp == varsigma0_psh(g).comp);
  }
}

TEST_CASE("adjunction tower: units, counits, triangle identities") {
  std::vector<PshPtr> bps = {yoneda(Site::BPCube, 1, bp(1, 0)), yoneda(Site::BPCube, 1, bp(0, 1)),
                             yoneda(Site::BPCube, 2, bp(1, 1)), terminal_presheaf(Site::BPCube, 2)};
  std::vector<PshPtr> cbs = {yoneda(Site::Cube, 1, edges(1)), yoneda(Site::Cube, 2, edges(2)),
                             terminal_presheaf(Site::Cube, 2)};
  // D must agree within one triangle check; group by D
  auto by_d = [](const std::vector<PshPtr>& v, int d) {
    std::vector<PshPtr> out;
    for (PshPtr g : v)
      if (g->D == d) out.push_back(g);
    return out;
  };
  for (int d = 1; d <= 2; ++d) {
    std::vector<PshPtr> bp_d = by_d(bps, d);
    std::vector<PshPtr> cb_d = by_d(cbs, d);
    for (TowerPair p : {TowerPair::PiDisc, TowerPair::DiscUnder, TowerPair::UnderCodisc,
                        TowerPair::CodiscPaths, TowerPair::ShpFlat, TowerPair::FlatSharp,
                        TowerPair::SharpCoshp}) {
      const bool l_from_bp = psh_source_site(left_of(p)) == Site::BPCube;
      const auto& dom_side = l_from_bp ? bp_d : cb_d;
      const auto& cod_side = psh_target_site(left_of(p)) == Site::BPCube ? bp_d : cb_d;
      for (PshPtr g : dom_side) {
        INFO("pair " << to_string(p) << ", domain object with "
                     << g->total_cells() << " cells, D=" << d);
        Substitution eta = unit_of(p, g);
        CHECK(validate_substitution(eta).ok);
        PshPtr lg = apply_psh(left_of(p), g);
        Substitution tri1 = compose_subst(counit_of(p, lg), apply_psh(left_of(p), eta));
        CHECK(tri1.comp == id_subst(lg).comp);
        CHECK(*tri1.src == *lg);
        CHECK(*tri1.dst == *lg);
      }
      for (PshPtr dlt : cod_side) {
        INFO("pair " << to_string(p) << ", codomain object with "
                     << dlt->total_cells() << " cells, D=" << d);
        Substitution eps = counit_of(p, dlt);
        CHECK(validate_substitution(eps).ok);
        PshPtr rd = apply_psh(right_of(p), dlt);
        Substitution tri2 = compose_subst(apply_psh(right_of(p), eps), unit_of(p, rd));
        CHECK(tri2.comp == id_subst(rd).comp);
      }
    }
  }
}

TEST_CASE("transposes are mutually inverse bijections of hom-sets") {
  // flat -| sharp at D=1, small objects
  PshPtr g = yoneda(Site::BPCube, 1, bp(0, 1));
  PshPtr dlt = yoneda(Site::BPCube, 1, bp(1, 0));
  PshPtr lg = apply_psh(PshFunctor::Flat, g);
  PshPtr rd = apply_psh(PshFunctor::Sharp, dlt);
  auto below = enumerate_substitutions(lg, dlt);
  auto above = enumerate_substitutions(g, rd);
  CHECK(below.size() == above.size());
  for (const auto& sigma : below) {
    Substitution tau = transpose(TowerPair::FlatSharp, g, sigma);
    CHECK(validate_substitution(tau).ok);
    Substitution back = transpose_inv(TowerPair::FlatSharp, dlt, retarget(tau, g, rd));
    CHECK(back.comp == sigma.comp);
  }
  // and across sites: disc -| under
  PshPtr x = yoneda(Site::Cube, 1, edges(1));
  PshPtr dx = apply_psh(PshFunctor::Disc, x);
  for (const auto& sigma : enumerate_substitutions(dx, g)) {
    Substitution tau = transpose(TowerPair::DiscUnder, x, sigma);
    Substitution back = transpose_inv(TowerPair::DiscUnder, g,
                                      retarget(tau, x, apply_psh(PshFunctor::Under, g)));
    CHECK(back.comp == sigma.comp);
  }
}

TEST_CASE("exhaustive presheaf enumeration at D=1") {
  auto cube1 = enumerate_presheaves_d1(Site::Cube, 1);
  CHECK(cube1.size() == 2);  // empty and terminal
  auto cube2 = enumerate_presheaves_d1(Site::Cube, 2);
  CHECK(cube2.size() == 6);
  auto bp1 = enumerate_presheaves_d1(Site::BPCube, 1);
  CHECK(bp1.size() == 2);
  auto bp2 = enumerate_presheaves_d1(Site::BPCube, 2);
  CHECK(bp2.size() == 18);
  for (const auto& g : bp2) CHECK(validate_presheaf(*g).ok);
  for (const auto& g : cube2) CHECK(validate_presheaf(*g).ok);
  // deterministic order
  auto bp2_again = enumerate_presheaves_d1(Site::BPCube, 2);
  REQUIRE(bp2.size() == bp2_again.size());
  for (std::size_t i = 0; i < bp2.size(); ++i) CHECK(*bp2[i] == *bp2_again[i]);
  // the terminal presheaf appears
  int terminals = 0;
  for (const auto& g : bp2)
    if (find_iso(g, terminal_presheaf(Site::BPCube, 1))) ++terminals;
  CHECK(terminals == 1);
}

TEST_CASE("coproducts validate and add level sizes") {
  PshPtr a = yoneda(Site::BPCube, 1, bp(1, 0));
  PshPtr b = yoneda(Site::BPCube, 1, bp(0, 1));
  PshPtr c = coproduct({a, b});
  CHECK(validate_presheaf(*c).ok);
  for (int w = 0; w < c->levels(); ++w) CHECK(c->size_at(w) == a->size_at(w) + b->size_at(w));
  // the shape quotient of a coproduct is the coproduct of the shape quotients
  PshPtr qc = shape_quotient(c).quotient;
  PshPtr qa = shape_quotient(a).quotient;
  PshPtr qb = shape_quotient(b).quotient;
  for (int w = 0; w < c->levels(); ++w)
    CHECK(qc->size_at(w) == qa->size_at(w) + qb->size_at(w));
}

TEST_CASE("shp of the mixed representable has the bridge representable's counts") {
  PshPtr g = yoneda(Site::BPCube, 2, bp(1, 1));
  PshPtr shp_g = apply_psh(PshFunctor::Shp, g);
  PshPtr yb = yoneda(Site::BPCube, 2, bp(1, 0));
  CHECK(level_sizes(*shp_g) == level_sizes(*yb));
  CHECK(find_iso(shp_g, yb).has_value());
  // and the shape-collapsing end of the mixed representable is the plain edge representable
  PshPtr pi_g = cohpi(g);
  CHECK(find_iso(pi_g, yoneda(Site::Cube, 2, edges(1))).has_value());
}
