#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bpcube/base.hpp"

using namespace bpcube;

namespace {
const Cube PT{Site::BPCube, 0, 0};
const Cube B1{Site::BPCube, 1, 0};
const Cube P1{Site::BPCube, 0, 1};
const Cube B1P1{Site::BPCube, 1, 1};

std::vector<BaseFunctor> all_functors() {
  return {BaseFunctor::ShapeB,      BaseFunctor::DiscreteB, BaseFunctor::UnderlyingB,
          BaseFunctor::CodiscreteB, BaseFunctor::Shp,       BaseFunctor::Flat,
          BaseFunctor::Sharp};
}
}  // namespace

TEST_CASE("cube enumeration order and counts") {
  auto c0 = enumerate_cubes(Site::Cube, 0);
  REQUIRE(c0.size() == 1);
  CHECK(c0[0] == Cube{Site::Cube, 0, 0});

  auto b1 = enumerate_cubes(Site::BPCube, 1);
  REQUIRE(b1.size() == 3);
  CHECK(b1[0] == PT);
  CHECK(b1[1] == B1);
  CHECK(b1[2] == P1);

  CHECK(enumerate_cubes(Site::BPCube, 2).size() == 6);
  CHECK(enumerate_cubes(Site::BPCube, 3).size() == 10);
  CHECK(enumerate_cubes(Site::Cube, 3).size() == 4);
}

TEST_CASE("hom sizes match the closed formula and are enumerated without duplicates") {
  CHECK(hom_size(PT, PT) == 1);
  CHECK(hom_size(PT, B1) == 2);
  CHECK(hom_size(B1, P1) == 3);

  for (Site site : {Site::Cube, Site::BPCube}) {
    for (const Cube& v : enumerate_cubes(site, 2)) {
      for (const Cube& w : enumerate_cubes(site, 2)) {
        auto hom = enumerate_hom(v, w);
        CHECK(hom.size() == hom_size(v, w));
        for (size_t r = 0; r < hom.size(); ++r) {
          CHECK(face_map_valid(hom[r]));
          CHECK(hom_rank(hom[r]) == (int)r);
        }
      }
    }
  }
}

TEST_CASE("composition: fixed examples") {
  // identity laws
  for (const Cube& w : enumerate_cubes(Site::BPCube, 2)) {
    for (const Cube& v : enumerate_cubes(Site::BPCube, 2)) {
      for (const FaceMap& f : enumerate_hom(v, w)) {
        CHECK(compose(id_map(w), f) == f);
        CHECK(compose(f, id_map(v)) == f);
      }
    }
  }

  // two edges collapsed onto one endpoint
  Cube e1{Site::Cube, 1, 0}, e2{Site::Cube, 2, 0}, e0{Site::Cube, 0, 0};
  FaceMap phi = parse_face_map(e1, e2, "e1<=e1;e2<=e1");
  FaceMap psi = parse_face_map(e0, e1, "e1<=0");
  CHECK(compose(phi, psi) == parse_face_map(e0, e2, "e1<=0;e2<=0"));

  // path identity after a path-to-bridge weakening
  FaceMap pid = id_map(P1);
  FaceMap wk = parse_face_map(B1, P1, "p1<=b1");
  CHECK(compose(pid, wk) == wk);
}

TEST_CASE("composition is associative on all triples up to total dimension 2") {
  for (Site site : {Site::Cube, Site::BPCube}) {
    auto cubes = enumerate_cubes(site, 2);
    for (const Cube& u : cubes)
      for (const Cube& v : cubes)
        for (const Cube& w : cubes)
          for (const Cube& x : cubes)
            for (const FaceMap& f : enumerate_hom(w, x))
              for (const FaceMap& g : enumerate_hom(v, w))
                for (const FaceMap& h : enumerate_hom(u, v))
                  CHECK(compose(compose(f, g), h) == compose(f, compose(g, h)));
  }
}

TEST_CASE("base functors: object actions") {
  CHECK(apply_base_functor(BaseFunctor::Shp, B1P1) == B1);
  CHECK(apply_base_functor(BaseFunctor::Flat, B1P1) == Cube{Site::BPCube, 2, 0});
  CHECK(apply_base_functor(BaseFunctor::Sharp, B1P1) == Cube{Site::BPCube, 0, 2});
  CHECK(apply_base_functor(BaseFunctor::ShapeB, B1P1) == Cube{Site::Cube, 1, 0});
  CHECK(apply_base_functor(BaseFunctor::UnderlyingB, B1P1) == Cube{Site::Cube, 2, 0});
  CHECK(apply_base_functor(BaseFunctor::DiscreteB, Cube{Site::Cube, 2, 0}) == Cube{Site::BPCube, 2, 0});
  CHECK(apply_base_functor(BaseFunctor::CodiscreteB, Cube{Site::Cube, 2, 0}) == Cube{Site::BPCube, 0, 2});
}

TEST_CASE("base functors: morphism actions, fixed examples") {
  // the path-to-bridge weakening becomes a bridge identity under Flat
  FaceMap wk = parse_face_map(B1, P1, "p1<=b1");
  FaceMap flat_wk = apply_base_functor(BaseFunctor::Flat, wk);
  CHECK(flat_wk == id_map(B1));

  // Shp drops the path clause
  FaceMap m = parse_face_map(B1, B1P1, "b1<=b1;p1<=0");
  FaceMap shp_m = apply_base_functor(BaseFunctor::Shp, m);
  CHECK(shp_m == id_map(B1));
}

TEST_CASE("base functors preserve identity and composition up to dimension 2") {
  for (BaseFunctor f : all_functors()) {
    auto cubes = enumerate_cubes(source_site(f), 2);
    for (const Cube& w : cubes) {
      CHECK(apply_base_functor(f, id_map(w)) == id_map(apply_base_functor(f, w)));
      CHECK(face_map_valid(apply_base_functor(f, id_map(w))));
    }
    for (const Cube& v : cubes)
      for (const Cube& w : cubes)
        for (const FaceMap& phi : enumerate_hom(v, w)) {
          CHECK(face_map_valid(apply_base_functor(f, phi)));
          for (const Cube& u : cubes)
            for (const FaceMap& psi : enumerate_hom(u, v))
              CHECK(apply_base_functor(f, compose(phi, psi)) ==
                    compose(apply_base_functor(f, phi), apply_base_functor(f, psi)));
        }
  }
}

TEST_CASE("base functors never increase total dimension") {
  for (BaseFunctor f : all_functors())
    for (const Cube& w : enumerate_cubes(source_site(f), 3))
      CHECK(apply_base_functor(f, w).total() <= w.total());
}

TEST_CASE("transform components: fixed examples") {
  FaceMap vs = transform_component(BaseTransform::Varsigma, B1P1);
  CHECK(vs.dom == B1P1);
  CHECK(vs.cod == B1);
  CHECK(to_string(vs) == "b1<=b1");

  FaceMap ka = transform_component(BaseTransform::Kappa, P1);
  CHECK(ka.dom == B1);
  CHECK(ka.cod == P1);
  CHECK(to_string(ka) == "p1<=b1");

  FaceMap io = transform_component(BaseTransform::Iota, PT);
  CHECK(io.dom == PT);
  CHECK(io.cod == PT);
  CHECK(io.img.empty());
}

TEST_CASE("base transforms are natural up to dimension 2") {
  auto cubes = enumerate_cubes(Site::BPCube, 2);
  for (const Cube& v : cubes)
    for (const Cube& w : cubes)
      for (const FaceMap& phi : enumerate_hom(v, w)) {
        // varsigma: Id -> Shp
        CHECK(compose(transform_component(BaseTransform::Varsigma, w), phi) ==
              compose(apply_base_functor(BaseFunctor::Shp, phi),
                      transform_component(BaseTransform::Varsigma, v)));
        // kappa: Flat -> Id
        CHECK(compose(transform_component(BaseTransform::Kappa, w),
                      apply_base_functor(BaseFunctor::Flat, phi)) ==
              compose(phi, transform_component(BaseTransform::Kappa, v)));
        // iota: Id -> Sharp
        CHECK(compose(transform_component(BaseTransform::Iota, w), phi) ==
              compose(apply_base_functor(BaseFunctor::Sharp, phi),
                      transform_component(BaseTransform::Iota, v)));
      }
}

TEST_CASE("identity table: whiskered transforms are identity face maps") {
  auto bp = enumerate_cubes(Site::BPCube, 2);
  auto cu = enumerate_cubes(Site::Cube, 2);
  auto vs = [](const Cube& w) { return transform_component(BaseTransform::Varsigma, w); };
  auto ka = [](const Cube& w) { return transform_component(BaseTransform::Kappa, w); };
  auto io = [](const Cube& w) { return transform_component(BaseTransform::Iota, w); };
  auto F = [](BaseFunctor f, const FaceMap& m) { return apply_base_functor(f, m); };
  auto Fo = [](BaseFunctor f, const Cube& w) { return apply_base_functor(f, w); };

  for (const Cube& w : bp) {
    CHECK(is_id(F(BaseFunctor::ShapeB, vs(w))));                       // shape of varsigma
    CHECK(is_id(F(BaseFunctor::UnderlyingB, ka(w))));                  // underlying of kappa
    CHECK(is_id(F(BaseFunctor::UnderlyingB, io(w))));                  // underlying of iota
    CHECK(is_id(F(BaseFunctor::Shp, vs(w))));                          // shp varsigma
    CHECK(vs(Fo(BaseFunctor::Shp, w)) == F(BaseFunctor::Shp, vs(w)));  // = varsigma at shp
    CHECK(is_id(vs(Fo(BaseFunctor::Flat, w))));                        // varsigma at flat
    CHECK(is_id(ka(Fo(BaseFunctor::Shp, w))));                         // kappa at shp
    CHECK(is_id(ka(Fo(BaseFunctor::Flat, w))));                        // kappa at flat
    CHECK(ka(Fo(BaseFunctor::Flat, w)) == F(BaseFunctor::Flat, ka(w)));
    CHECK(is_id(F(BaseFunctor::Sharp, ka(w))));                        // sharp of kappa
    CHECK(is_id(F(BaseFunctor::Flat, io(w))));                         // flat of iota
    CHECK(is_id(F(BaseFunctor::Sharp, io(w))));                        // sharp of iota
    CHECK(io(Fo(BaseFunctor::Sharp, w)) == F(BaseFunctor::Sharp, io(w)));
  }
  for (const Cube& v : cu) {
    CHECK(is_id(vs(Fo(BaseFunctor::DiscreteB, v))));  // varsigma at a discrete cube
    CHECK(is_id(ka(Fo(BaseFunctor::DiscreteB, v))));  // kappa at a discrete cube
    CHECK(is_id(io(Fo(BaseFunctor::CodiscreteB, v))));  // iota at a codiscrete cube
  }
}

TEST_CASE("base composite functor equalities") {
  auto bp = enumerate_cubes(Site::BPCube, 2);
  auto comp2 = [](BaseFunctor outer, BaseFunctor inner, const FaceMap& m) {
    return apply_base_functor(outer, apply_base_functor(inner, m));
  };
  for (const Cube& v : bp)
    for (const Cube& w : bp)
      for (const FaceMap& m : enumerate_hom(v, w)) {
        CHECK(comp2(BaseFunctor::Shp, BaseFunctor::Shp, m) == apply_base_functor(BaseFunctor::Shp, m));
        CHECK(comp2(BaseFunctor::Shp, BaseFunctor::Flat, m) == apply_base_functor(BaseFunctor::Flat, m));
        CHECK(comp2(BaseFunctor::Flat, BaseFunctor::Shp, m) == apply_base_functor(BaseFunctor::Shp, m));
        CHECK(comp2(BaseFunctor::Flat, BaseFunctor::Flat, m) == apply_base_functor(BaseFunctor::Flat, m));
        CHECK(comp2(BaseFunctor::Flat, BaseFunctor::Sharp, m) == apply_base_functor(BaseFunctor::Flat, m));
        CHECK(comp2(BaseFunctor::Sharp, BaseFunctor::Flat, m) == apply_base_functor(BaseFunctor::Sharp, m));
        CHECK(comp2(BaseFunctor::Sharp, BaseFunctor::Sharp, m) == apply_base_functor(BaseFunctor::Sharp, m));
        // the endofunctors factor through the two-site legs
        CHECK(comp2(BaseFunctor::DiscreteB, BaseFunctor::ShapeB, m) == apply_base_functor(BaseFunctor::Shp, m));
        CHECK(comp2(BaseFunctor::DiscreteB, BaseFunctor::UnderlyingB, m) == apply_base_functor(BaseFunctor::Flat, m));
        CHECK(comp2(BaseFunctor::CodiscreteB, BaseFunctor::UnderlyingB, m) == apply_base_functor(BaseFunctor::Sharp, m));
      }
  auto cu = enumerate_cubes(Site::Cube, 2);
  for (const Cube& v : cu)
    for (const Cube& w : cu)
      for (const FaceMap& m : enumerate_hom(v, w)) {
        CHECK(apply_base_functor(BaseFunctor::ShapeB, apply_base_functor(BaseFunctor::DiscreteB, m)) == m);
        CHECK(apply_base_functor(BaseFunctor::UnderlyingB, apply_base_functor(BaseFunctor::DiscreteB, m)) == m);
        CHECK(apply_base_functor(BaseFunctor::UnderlyingB, apply_base_functor(BaseFunctor::CodiscreteB, m)) == m);
      }
}

TEST_CASE("triangle identities for the base adjunctions") {
  auto bp = enumerate_cubes(Site::BPCube, 2);
  auto cu = enumerate_cubes(Site::Cube, 2);
  auto vs = [](const Cube& w) { return transform_component(BaseTransform::Varsigma, w); };
  auto ka = [](const Cube& w) { return transform_component(BaseTransform::Kappa, w); };
  auto io = [](const Cube& w) { return transform_component(BaseTransform::Iota, w); };

  for (const Cube& w : bp) {
    // ShapeB -| DiscreteB (unit varsigma, counit id):  eps L . L eta = id
    CHECK(is_id(apply_base_functor(BaseFunctor::ShapeB, vs(w))));
    // DiscreteB -| UnderlyingB (unit id, counit kappa):  R eps . eta R = id
    CHECK(is_id(apply_base_functor(BaseFunctor::UnderlyingB, ka(w))));
    // UnderlyingB -| CodiscreteB (unit iota, counit id)
    CHECK(is_id(apply_base_functor(BaseFunctor::UnderlyingB, io(w))));
    // Shp -| Flat (unit varsigma, counit kappa)
    CHECK(is_id(compose(ka(apply_base_functor(BaseFunctor::Shp, w)),
                        apply_base_functor(BaseFunctor::Shp, vs(w)))));
    CHECK(is_id(compose(apply_base_functor(BaseFunctor::Flat, ka(w)),
                        vs(apply_base_functor(BaseFunctor::Flat, w)))));
    // Flat -| Sharp (unit iota, counit kappa)
    CHECK(is_id(compose(ka(apply_base_functor(BaseFunctor::Flat, w)),
                        apply_base_functor(BaseFunctor::Flat, io(w)))));
    CHECK(is_id(compose(apply_base_functor(BaseFunctor::Sharp, ka(w)),
                        io(apply_base_functor(BaseFunctor::Sharp, w)))));
  }
  for (const Cube& v : cu) {
    CHECK(is_id(vs(apply_base_functor(BaseFunctor::DiscreteB, v))));
    CHECK(is_id(ka(apply_base_functor(BaseFunctor::DiscreteB, v))));
    CHECK(is_id(io(apply_base_functor(BaseFunctor::CodiscreteB, v))));
  }
}

TEST_CASE("factoring a face map at a variable round-trips") {
  // single path clause
  FaceMap f0 = parse_face_map(PT, P1, "p1<=0");
  auto fac0 = factor_at_var(f0, 0);
  CHECK(fac0.rest.cod == PT);
  CHECK(fac0.rest.img.empty());
  CHECK(fac0.value == VAL_ZERO);
  CHECK(reassemble(fac0.rest, P1, 0, fac0.value) == f0);

  // clause read off a mixed map
  FaceMap f1 = parse_face_map(B1, B1P1, "b1<=b1;p1<=b1");
  auto fac1 = factor_at_var(f1, 1);
  CHECK(fac1.rest == id_map(B1));
  CHECK(fac1.value == var_val(0));

  for (Site site : {Site::Cube, Site::BPCube})
    for (const Cube& v : enumerate_cubes(site, 2))
      for (const Cube& w : enumerate_cubes(site, 2))
        for (const FaceMap& phi : enumerate_hom(v, w))
          for (int i = 0; i < w.total(); ++i) {
            auto fac = factor_at_var(phi, i);
            CHECK(reassemble(fac.rest, w, i, fac.value) == phi);
          }
}

TEST_CASE("degeneracy endomorphism factors through the weakening") {
  for (const Cube& w : enumerate_cubes(Site::BPCube, 2))
    for (int i = 0; i < w.total(); ++i) {
      FaceMap wk = weakening(w, i);
      // the i-face of the smaller cube, embedded back
      FaceMap face{drop_var(w, i), w, {}};
      face.img.resize(w.total());
      for (int j = 0; j < w.total(); ++j)
        face.img[j] = (j == i) ? VAL_ZERO : var_val(j < i ? j : j - 1);
      CHECK(face_map_valid(face));
      CHECK(compose(face, wk) == endo_const(w, i, VAL_ZERO));
      CHECK(compose(wk, face) == id_map(drop_var(w, i)));
    }
}

TEST_CASE("serialization round-trips and rejects malformed input") {
  for (const Cube& v : enumerate_cubes(Site::BPCube, 2))
    for (const Cube& w : enumerate_cubes(Site::BPCube, 2))
      for (const FaceMap& phi : enumerate_hom(v, w))
        CHECK(parse_face_map(v, w, to_string(phi)) == phi);

  CHECK_THROWS_AS(parse_face_map(PT, B1, "b1<=p7"), std::invalid_argument);
  CHECK_THROWS_AS(parse_face_map(PT, B1, ""), std::invalid_argument);
  CHECK_THROWS_AS(parse_face_map(P1, B1, "b1<=p1"), std::invalid_argument);  // flavor violation
  CHECK_THROWS_AS(parse_face_map(PT, B1P1, "b1<=0"), std::invalid_argument); // missing clause
}

TEST_CASE("site catalogue caches cubes and homs") {
  const SiteCat& cat = site_cat(Site::BPCube, 2);
  CHECK(cat.cubes().size() == 6);
  CHECK(cat.index_of(B1P1) == 4);
  CHECK(cat.hom(PT, B1).size() == 2);
  CHECK(&site_cat(Site::BPCube, 2) == &cat);
}
