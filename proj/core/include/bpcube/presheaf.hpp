#ifndef BPCUBE_PRESHEAF_HPP
#define BPCUBE_PRESHEAF_HPP

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "bpcube/base.hpp"

namespace bpcube {

// A dimension-truncated presheaf, tabulated: finitely many named cells per cube and one
// restriction row per face map. Levels follow site_cat(site, D) cube order; cell names are
// unique and sorted per level.
struct Presheaf {
  Site site = Site::BPCube;
  int D = 2;
  std::vector<std::vector<std::string>> cells;              // [cube][cell] -> name
  std::vector<std::vector<std::vector<std::vector<int>>>> rest;  // [w][v][hom rank][cell at w] -> cell at v

  const SiteCat& cat() const { return site_cat(site, D); }
  int levels() const { return (int)cells.size(); }
  int size_at(int w) const { return (int)cells[w].size(); }
  std::uint64_t total_cells() const;
  bool empty() const { return total_cells() == 0; }

  // cell index at phi.dom of (cell at phi.cod) . phi
  int restrict_cell(int w_idx, int cell, const FaceMap& phi) const;
  int cell_index(int w_idx, const std::string& name) const;

  bool operator==(const Presheaf& o) const {
    return site == o.site && D == o.D && cells == o.cells && rest == o.rest;
  }
};

using PshPtr = std::shared_ptr<const Presheaf>;

// Allocate the rest tables for the given per-level cell lists (entries initialized to -1).
Presheaf make_presheaf_skeleton(Site site, int D, std::vector<std::vector<std::string>> cells);

struct Validation {
  bool ok = true;
  std::vector<std::string> problems;
};

// Checks completeness, identity law and composition law of the restriction tables.
Validation validate_presheaf(const Presheaf& g);
void require_valid(const Presheaf& g);

PshPtr terminal_presheaf(Site site, int D);
PshPtr yoneda(Site site, int D, const Cube& w);

// A natural map between presheaves over the same truncated site.
struct Substitution {
  PshPtr src;
  PshPtr dst;
  std::vector<std::vector<int>> comp;  // [cube][cell of src] -> cell of dst

  int apply(int w_idx, int cell) const { return comp[w_idx][cell]; }
  bool operator==(const Substitution& o) const {
    return *src == *o.src && *dst == *o.dst && comp == o.comp;
  }
};

Validation validate_substitution(const Substitution& s);
void require_valid(const Substitution& s);
Substitution id_subst(PshPtr g);
// compose_subst(s2: B -> C, s1: A -> B) = s2 after s1 : A -> C (srcs/dsts compared structurally)
Substitution compose_subst(const Substitution& s2, const Substitution& s1);
bool is_iso(const Substitution& s);
Substitution invert(const Substitution& s);
// Reattach structurally equal endpoints (so table-equal presheaves can be identified).
Substitution retarget(const Substitution& s, PshPtr src, PshPtr dst);
Substitution terminal_map(PshPtr g);

// All natural maps src -> dst in a deterministic order; stops after cap (throws limit_error).
std::vector<Substitution> enumerate_substitutions(PshPtr src, PshPtr dst, std::uint64_t cap = 1000000);
// A seeded natural map src -> dst, if one exists (deterministic per seed).
std::optional<Substitution> sample_substitution(PshPtr src, PshPtr dst, std::uint64_t seed);
// An explicit isomorphism, if any.
std::optional<Substitution> find_iso(PshPtr a, PshPtr b);

// Disjoint union; cell names are prefixed "A:", "B:", ... by summand.
PshPtr coproduct(const std::vector<PshPtr>& parts);

// Per-level partition of a presheaf's cells, closed under restriction.
// Class ids are canonical: numbered by smallest member cell index per level.
struct EqRel {
  PshPtr carrier;
  std::vector<std::vector<int>> cls;  // [cube][cell] -> class id

  int classes_at(int w) const;
  bool same(int w, int a, int b) const { return cls[w][a] == cls[w][b]; }
};

EqRel eqrel_discrete(PshPtr g);
EqRel eqrel_total(PshPtr g);
bool eqrel_closed_under_restriction(const EqRel& e);
bool eqrel_equal(const EqRel& a, const EqRel& b);
// a finer-or-equal b (every a-class inside a b-class)
bool eqrel_subset(const EqRel& a, const EqRel& b);

struct SeedPair {
  int w_idx;
  int cell_a;
  int cell_b;
};

// Least equivalence relation containing the seeds and closed under restriction.
EqRel eqrel_saturate(PshPtr g, const std::vector<SeedPair>& seeds);

struct QuotientResult {
  PshPtr quotient;
  Substitution projection;
};

// Cells are equivalence classes, named after their lexicographically least member.
QuotientResult quotient(PshPtr g, const EqRel& e);

// The shape equivalence relation: each cell over a cube with a contractible variable is
// identified with its fully weakened zero-face. Contractible variables are the path
// variables on BPCube and every edge variable on Cube (reflexive graphs, truncations).
EqRel se_context(PshPtr g);

// Variables treated as contractible by SE on this site.
bool se_contractible_var(const Cube& w, int k);

struct ShapeQuotient {
  PshPtr quotient;           // the discretization
  Substitution projection;   // gamma |-> [gamma]
};
ShapeQuotient shape_quotient(PshPtr g);

// cell degenerate in variable i: equal to its own i-collapse
bool cell_degenerate(const Presheaf& g, int w_idx, int cell, int var);
// every cell degenerate in every path variable (edge variable on site Cube)
bool discrete_context_quick(const Presheaf& g);

// shp_b W -|> W: bridge variables to themselves, path variables to 0.
FaceMap path_zero_fill(const Cube& w);

// Precomposition with a base functor: (lift F)(G)(V) = G(F V).
PshPtr lift_functor(BaseFunctor f, PshPtr g);
Substitution lift_substitution(BaseFunctor f, const Substitution& s);
// Contravariant lift of a base transform nu: F -> G, at G: a map lift(G)(Gamma) -> lift(F)(Gamma)
// whose component sends a cell over G(V) to its restriction along nu_V.
Substitution lift_transform(BaseTransform nu, PshPtr g);

// The presheaf-level functors. Pi (the shape-collapsing left end) and Quot are built from
// the shape quotient; all others are precompositions.
enum class PshFunctor { Pi, Disc, Under, Codisc, Paths, Flat, Sharp, Coshp, Shp, Quot };

std::string to_string(PshFunctor f);
// The base-cube action implementing a precomposition functor; throws
// std::invalid_argument for Pi, Shp, and Quot, which are not of that form.
BaseFunctor base_functor_of(PshFunctor f);
std::optional<PshFunctor> parse_psh_functor(const std::string& name);
Site psh_source_site(PshFunctor f);  // site of the argument presheaf
Site psh_target_site(PshFunctor f);  // site of the result
PshPtr apply_psh(PshFunctor f, PshPtr g);
Substitution apply_psh(PshFunctor f, const Substitution& s);

// The four named presheaf-level transforms.
Substitution kappa_psh(PshPtr g);      // flat G -> G        (injective per level)
Substitution iota_psh(PshPtr g);       // G -> sharp G
Substitution theta_psh(PshPtr g);      // coshp G -> G
Substitution varsigma0_psh(PshPtr g);  // G -> quot G        (the projection)
Substitution varsigma_psh(PshPtr g);   // G -> shp G         (unit of the left end)
// X -> Pi(Disc X): the invertible comparison on the plain-cubical side.
Substitution varsigma_bar_psh(PshPtr x);

// The shape quotient of a discrete presheaf is reached by an invertible comparison
// shp G -> quot G (restriction along the bridge inclusion).
Substitution kappa_quot_psh(PshPtr g);

// Adjacent adjunctions of the tower and of the induced endofunctor chain.
enum class TowerPair { PiDisc, DiscUnder, UnderCodisc, CodiscPaths, ShpFlat, FlatSharp, SharpCoshp };

std::string to_string(TowerPair p);
PshFunctor left_of(TowerPair p);
PshFunctor right_of(TowerPair p);
Substitution unit_of(TowerPair p, PshPtr g);    // G -> R L G
Substitution counit_of(TowerPair p, PshPtr g);  // L R G -> G
// transpose(sigma: L G -> Delta) = R sigma . unit : G -> R Delta
Substitution transpose(TowerPair p, PshPtr g, const Substitution& sigma);
// transpose_inv(tau: G -> R Delta) = counit . L tau : L G -> Delta
Substitution transpose_inv(TowerPair p, PshPtr delta, const Substitution& tau);

// Left end of the tower on objects and maps: Pi = Under after Quot.
PshPtr cohpi(PshPtr g);
Substitution cohpi_sub(const Substitution& s);

// Exhaustive enumeration of all presheaves at D=1 with at most max_cells cells per level
// (including the empty one), in a deterministic order.
std::vector<PshPtr> enumerate_presheaves_d1(Site site, int max_cells);

}  // namespace bpcube

#endif
