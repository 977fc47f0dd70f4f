#pragma once
// Dependent types over presheaf contexts: a category-with-families structure.
//
// A type T over a context Γ assigns to every cell γ ∈ Γ(W) a finite fiber
// T⟨γ⟩ of named terms, together with restriction tables
//   T⟨γ⟩ → T⟨γ·φ⟩  for every face map φ: V ⊸ W,
// functorial in φ.  A term of T is a section: one fiber element per context
// cell, compatible with restriction.  On top of this the usual formers are
// computed fiberwise: context extension Γ.T, Σ, Π (natural families), Id,
// propositions, and the Glue / Weld extension types along a partial map.

#include "bpcube/presheaf.hpp"

#include <optional>
#include <string>
#include <vector>

namespace bpcube {

// ---------------------------------------------------------------------------
// Types and terms
// ---------------------------------------------------------------------------

struct DependentType {
  PshPtr ctx;  // the context Γ the type lives over

  // fibers[w][c] = term names of T⟨γ⟩ for the c-th cell γ of Γ at cube w.
  // Order is construction order (deterministic), not necessarily sorted.
  std::vector<std::vector<std::vector<std::string>>> fibers;

  // rest[w][v][r][c][t] = index in the fiber at (v, γ·φ) of x·φ, where
  // γ is the c-th cell at w, x the t-th fiber element, and φ the r-th
  // element of Hom(cube v, cube w).  Mirrors Presheaf::rest one level down.
  std::vector<std::vector<std::vector<std::vector<std::vector<int>>>>> rest;

  const SiteCat& cat() const { return ctx->cat(); }
  int levels() const { return static_cast<int>(fibers.size()); }
  int fiber_size(int w, int cell) const {
    return static_cast<int>(fibers[w][cell].size());
  }
  // Total number of fiber elements across all context cells.
  long long total_fiber_cells() const;

  // Index of a named fiber element, -1 if absent.
  int term_index(int w, int cell, const std::string& name) const;

  // Restrict the t-th element of the fiber over the cell-th cell at w along
  // phi (phi.cod must be cube w); returns the index in the target fiber.
  int restrict_fiber(int w, int cell, int term, const FaceMap& phi) const;
};

using TypePtr = std::shared_ptr<const DependentType>;

// Structural equality: same site/truncation, structurally equal contexts,
// identical fibers and restriction tables.
bool operator==(const DependentType& a, const DependentType& b);
inline bool operator!=(const DependentType& a, const DependentType& b) {
  return !(a == b);
}

// A term (section): comp[w][c] = chosen fiber index over the c-th cell at w.
struct Term {
  TypePtr type;
  std::vector<std::vector<int>> comp;
};

bool operator==(const Term& a, const Term& b);
inline bool operator!=(const Term& a, const Term& b) { return !(a == b); }

// A fiberwise map between two types over the same context, natural in the
// context cell: map[w][c][t] = image index in dst's fiber over the same cell.
struct TypeMorphism {
  TypePtr src;
  TypePtr dst;
  std::vector<std::vector<std::vector<int>>> map;
};

bool operator==(const TypeMorphism& a, const TypeMorphism& b);
inline bool operator!=(const TypeMorphism& a, const TypeMorphism& b) {
  return !(a == b);
}

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

// Checks shape, name uniqueness per fiber, identity rows, and the full
// composition law (x·φ)·ψ = x·(φ∘ψ) on every fiber element.
Validation validate_type(const DependentType& t);
// Checks shape and the section condition t(γ)·φ = t(γ·φ).
Validation validate_term(const Term& t);
// Checks shape and naturality map(x)·φ = map(x·φ).
Validation validate_type_morphism(const TypeMorphism& m);

void require_valid(const DependentType& t, const std::string& what);
void require_valid(const Term& t, const std::string& what);
void require_valid(const TypeMorphism& m, const std::string& what);

// Allocates a type with the given fibers and all restriction entries -1.
DependentType make_type_skeleton(
    PshPtr ctx, std::vector<std::vector<std::vector<std::string>>> fibers);

// ---------------------------------------------------------------------------
// Substitution
// ---------------------------------------------------------------------------

// T[σ] for σ: Δ → Γ: fiber over δ is the fiber over σ(δ), tables reindexed.
// Strict: T[id] == T and T[σ][τ] == T[σ∘τ] as tables.
TypePtr subst_type(const TypePtr& t, const Substitution& sigma);
Term subst_term(const Term& t, const Substitution& sigma);

// ---------------------------------------------------------------------------
// Context extension
// ---------------------------------------------------------------------------

// Γ.T with cells "γ|t" (context cell name, '|', fiber element name), listed
// fiber-major inside each context cell, plus the display map p: Γ.T → Γ, the
// variable term v: T[p], and offset[w][c] = index of the first cell of Γ.T
// lying over the c-th cell of Γ.
struct ExtContext {
  PshPtr ctx;  // the extended presheaf Γ.T
  Substitution display;
  Term var;
  std::vector<std::vector<int>> offset;
};

ExtContext ext_context(const TypePtr& t);

// ⟨σ, s⟩: Δ → Γ.T for σ: Δ → Γ and s a term of T[σ]; satisfies
// p ∘ ⟨σ,s⟩ = σ and v[⟨σ,s⟩] = s.
Substitution pairing(const Substitution& sigma, const TypePtr& t,
                     const Term& s);

// σ⁺ = ⟨σ∘p, v⟩: Δ.T[σ] → Γ.T, the extension of σ by the fresh variable.
Substitution ext_subst(const Substitution& sigma, const TypePtr& t);

// ---------------------------------------------------------------------------
// Formers
// ---------------------------------------------------------------------------

// The one-element type over any context (fiber {"*"} everywhere).
TypePtr unit_type(PshPtr ctx);
Term unit_term(const TypePtr& u);

// Σ A B for B over Γ.A: fiber over γ = pairs "(a,b)", a-major order.
TypePtr sigma_type(const TypePtr& a, const TypePtr& b);
Term sigma_pair(const TypePtr& sigma_ab, const TypePtr& a, const TypePtr& b,
                const Term& ta, const Term& tb);
Term sigma_fst(const TypePtr& sigma_ab, const TypePtr& a, const TypePtr& b,
               const Term& p);
Term sigma_snd(const TypePtr& sigma_ab, const TypePtr& a, const TypePtr& b,
               const Term& p);

// Π A B for B over Γ.A: the fiber over γ ∈ Γ(W) is the set of natural
// families f assigning to every slot (φ: V ⊸ W, a ∈ A⟨γ·φ⟩) an element
// f(φ,a) ∈ B⟨γ·φ, a⟩ with f(φ∘ψ, a·ψ) = f(φ,a)·ψ.  Families are named
// "f0", "f1", … in a deterministic enumeration order that depends only on
// the fiber data reachable from γ, so Π commutes with substitution as an
// exact table equality: (Π A B)[σ] == Π A[σ] B[σ⁺].
//
// max_families bounds the per-fiber count; 0 means the BPCUBE_MAX_FAMILIES
// environment variable or 1'000'000.  Exceeding it throws limit_error.
TypePtr pi_type(const TypePtr& a, const TypePtr& b, long long max_families = 0);
// λ body for body a term of B over Γ.A.
Term lambda_term(const TypePtr& pi_ab, const TypePtr& a, const TypePtr& b,
                 const Term& body);
// f a, a term of B[⟨id, a⟩].
Term app_term(const TypePtr& pi_ab, const TypePtr& a, const TypePtr& b,
              const Term& f, const Term& ta);

// Id A s t: fiber {"refl"} over γ when s(γ) = t(γ), empty otherwise.
TypePtr id_type(const TypePtr& a, const Term& s, const Term& t);
Term refl_term(const TypePtr& id_ss);
// Eliminates p: Id A s t by reflection: requires s == t as sections (any
// global section of the identity type forces this) and returns c.
Term j_elim(const Term& c, const Term& s, const Term& t, const Term& p);

// Propositions: types with at most one element in every fiber.
bool is_prop(const DependentType& t);
TypePtr prop_top(PshPtr ctx);   // fiber {"*"} everywhere
TypePtr prop_bot(PshPtr ctx);   // empty fibers
TypePtr prop_and(const TypePtr& p, const TypePtr& q);
TypePtr prop_or(const TypePtr& p, const TypePtr& q);

// ---------------------------------------------------------------------------
// Glue and Weld
// ---------------------------------------------------------------------------

// Both formers take a proposition P over Γ, a type over Γ restricted to P
// (i.e. over Γ.P), a type over all of Γ, and a comparison map over Γ.P.
// Cells of Γ with inhabited P-fiber are called P-cells below; inhabitation
// is closed under restriction.

// Glue P T A f, for T over Γ.P, A over Γ, f: T → A[p] over Γ.P.
//   over a P-cell γ:   the fiber is T⟨γ,⋆⟩, names verbatim;
//   over any other γ:  pairs "(a|gk)" of an element a ∈ A⟨γ⟩ and the k-th
//     natural family t assigning to each φ with P⟨γ·φ⟩ inhabited an element
//     t(φ) ∈ T⟨γφ,⋆⟩ such that f(t(φ)) = a·φ.
// Restriction into a P-cell evaluates the family; otherwise it restricts
// both components.
struct GlueData {
  TypePtr glue;
  TypePtr p;   // proposition over Γ
  TypePtr t;   // over Γ.P
  TypePtr a;   // over Γ
  TypeMorphism f;  // T → A[display(P)] over Γ.P
};

GlueData glue_type(const TypePtr& p, const TypePtr& t, const TypePtr& a,
                   const TypeMorphism& f, long long max_families = 0);

// Pairs a total element with a compatible partial one: requires
// f ∘ tpart = ta[p] over Γ.P.
Term glue_intro(const GlueData& gd, const Term& ta, const Term& tpart);
// Projects the total part: over P-cells applies f, elsewhere takes a.
Term unglue(const GlueData& gd, const Term& g);
// Projects the partial part, a term of T over Γ.P.
Term glue_partial(const GlueData& gd, const Term& g);

// Weld P T A f, for A over Γ, T over Γ.P, f: A[p] → T over Γ.P.
//   over a P-cell γ:   the fiber is T⟨γ,⋆⟩, names verbatim;
//   over any other γ:  labelled copies "weld[a]" of the elements of A⟨γ⟩.
// Restriction of weld[a] into a P-cell is f(a·φ); elsewhere weld[a·φ].
struct WeldData {
  TypePtr weld;
  TypePtr p;
  TypePtr t;   // over Γ.P
  TypePtr a;   // over Γ
  TypeMorphism f;  // A[display(P)] → T over Γ.P
};

WeldData weld_type(const TypePtr& p, const TypePtr& t, const TypePtr& a,
                   const TypeMorphism& f);

// The canonical map A → Weld: f(a) over P-cells, weld[a] elsewhere.
Term weld_intro(const WeldData& wd, const Term& ta);

// The case substitutions into Γ.Weld used to type an eliminator's branches:
//   chiA: Γ.A   → Γ.Weld  sending (γ, a)      to (γ, weld_intro a)
//   chiT: Γ.P.T → Γ.Weld  sending ((γ,⋆), t)  to (γ, t)
Substitution weld_case_subst_a(const WeldData& wd);
Substitution weld_case_subst_t(const WeldData& wd);

// Two-branch eliminator into C over Γ.Weld: case_a is a term of C[chiA]
// over Γ.A, case_t a term of C[chiT] over Γ.P.T.  Requires the branches to
// agree along f (case_t ∘ f = case_a over P-cells); the result e satisfies
// e[chiA] == case_a and e[chiT] == case_t.
Term weld_elim(const WeldData& wd, const TypePtr& c, const Term& case_a,
               const Term& case_t);

// ---------------------------------------------------------------------------
// Modalities on types and terms
// ---------------------------------------------------------------------------

// Applies a precomposition functor (Disc, Under, Codisc, Paths, Flat, Sharp,
// Coshp) to a type or term: the context moves by apply_psh, fibers are
// reindexed along the base-cube action.  These are strict model morphisms:
// they commute with substitution and preserve context extension, Σ, Id, and
// Weld as exact table equalities (but not Π or Glue).  Pi, Shp, and Quot are
// rejected with std::invalid_argument.
TypePtr cwf_apply(PshFunctor f, const TypePtr& t);
Term cwf_apply(PshFunctor f, const Term& t);
TypeMorphism cwf_apply(PshFunctor f, const TypeMorphism& m);

// ---------------------------------------------------------------------------
// The calculus of fiberwise maps
// ---------------------------------------------------------------------------

TypeMorphism id_type_morphism(const TypePtr& t);
// compose_type_morphism(g: B -> C, f: A -> B) = g after f : A -> C
TypeMorphism compose_type_morphism(const TypeMorphism& g, const TypeMorphism& f);
TypeMorphism subst_type_morphism(const TypeMorphism& m, const Substitution& s);
// Push a section of m.src through m.
Term apply_type_morphism(const TypeMorphism& m, const Term& t);

// The substitution Γ.A -> Γ.B induced by m: A -> B over Γ (identity on the
// context part, m on the extension variable).
Substitution morphism_compare_subst(const TypeMorphism& m);

// Unique factorization through morphism_compare_subst(m) for a fiberwise
// surjective m: given a section u of subst_type(t, morphism_compare_subst(m))
// over Γ.A, return the section v of t over Γ.B with v[compare] == u.  Throws
// std::invalid_argument if m misses part of a fiber or if u distinguishes two
// elements that m identifies (the factorization obstruction).
Term factor_through_morphism(const TypeMorphism& m, const TypePtr& t,
                             const Term& u);

// Reindexes t along the canonical comparison of g: for Varsigma the result
// lives over the flat side, for Iota over the fully-path side, for Kappa the
// input lives over the sharp side.  Requires t's context to equal the
// comparison's target.
Term nat_apply_term(BaseTransform nu, const PshPtr& g, const Term& t);

// Adjoint transposition of terms for the five pairs whose two functors are
// both precomposition functors (PiDisc and ShpFlat are excluded).  For
// t of T over L(g), the transpose is a term of (R T)[unit] over g:
//   transpose(t) = (cwf_apply(R, t))[unit_of(p, g)].
// The inverse reconstructs the term of T over L(g) from such a transpose.
Term adj_transpose_term(TowerPair p, const PshPtr& g, const Term& t);
Term adj_transpose_term_inv(TowerPair p, const PshPtr& g, const TypePtr& t,
                            const Term& transposed);

// ---------------------------------------------------------------------------
// Enumeration
// ---------------------------------------------------------------------------

// All sections of t in a deterministic order; throws limit_error beyond cap.
std::vector<Term> enumerate_terms(const TypePtr& t, long long cap = 1000000);

// Deterministic pseudo-random section, if one exists.
std::optional<Term> sample_term(const TypePtr& t, unsigned seed);

}  // namespace bpcube
