#pragma once
// Degeneracy, discreteness, and the shape quotient of a dependent type.
//
// A cell is degenerate in a variable i when collapsing i to an endpoint
// leaves it fixed; the two endpoints always agree on this.  Discreteness
// asks for degeneracy along every contractible variable (the path variables
// on the bridge/path site, every edge variable on the plain cubical site):
// of all cells of a context, of all fiber elements of a type sitting over
// degenerate cells, or — for a map — that degeneracy of the image forces
// degeneracy of the argument.  The latter is equivalent to a lifting
// property against the path-weakening inclusions, implemented here as an
// independent checker.
//
// The shape equivalence relation SE on a type identifies each fiber element
// over a degenerate cell with its endpoint collapse; the quotient by it is
// the type-level shape modality.  It commutes with substitution on the
// bridge/path site, compares against its sharp and coshape images, and,
// when the motive is discrete, admits invertible elimination rules whose
// downward direction is plain substitution.

#include "bpcube/cwf.hpp"

#include <vector>

namespace bpcube {

// ---------------------------------------------------------------------------
// Degeneracy
// ---------------------------------------------------------------------------

// True iff the cell equals its own collapse at variable `var` (endpoint 0 and
// endpoint 1 are both computed and must agree; disagreement would contradict
// functoriality and throws std::logic_error).  Throws std::invalid_argument
// if `var` is not a variable of the cell's cube.
bool is_degenerate(const Presheaf& g, int w_idx, int cell, int var);

// The same question for a fiber element of a dependent type.  The context
// cell must itself be degenerate in `var` (otherwise the collapse leaves the
// fiber and the comparison is meaningless: std::invalid_argument).
bool is_degenerate(const DependentType& t, int w_idx, int cell, int term,
                   int var);

// ---------------------------------------------------------------------------
// Discreteness
// ---------------------------------------------------------------------------

enum class DiscreteSubject { Context, Map, Type };

// One violation: at cube w_idx, contractible variable `var`, the cell (and,
// for types, the fiber element `term`; otherwise term = -1) fails the
// degeneracy requirement.
struct DiscreteWitness {
  int w_idx;
  int var;
  int cell;
  int term;
};

struct DiscretenessReport {
  DiscreteSubject subject;
  bool discrete = false;
  std::vector<DiscreteWitness> witnesses;  // nonempty iff not discrete
};

// A context is discrete when every cell is degenerate in every contractible
// variable of its cube.
DiscretenessReport is_discrete(const PshPtr& g);

// A map is discrete when it reflects degeneracy: whenever the image of a
// cell is degenerate in a contractible variable, so is the cell itself.
DiscretenessReport is_discrete(const Substitution& s);

// A type is discrete when every fiber element over a degenerate context cell
// is itself degenerate (in every contractible variable).
DiscretenessReport is_discrete(const TypePtr& t);

// Independent characterization of map discreteness: for every cube W with a
// contractible variable i and weakening wkn: (W incl i) -|> (W minus i),
// every square  sigma(gamma') = b . wkn  with gamma' a cell of the source at
// (W incl i) and b a cell of the target at (W minus i) has a diagonal d in
// the source at (W minus i) with d . wkn = gamma' and sigma(d) = b.  Agrees
// with is_discrete on maps.
bool horn_lifting_discrete(const Substitution& s);

// ---------------------------------------------------------------------------
// Fiberwise equivalence relations on a type
// ---------------------------------------------------------------------------

// A partition of every fiber of a type, one equivalence relation per context
// cell, closed under restriction.  Class ids are canonical: numbered by
// smallest member index within each fiber.
struct TypeEqRel {
  TypePtr type;
  std::vector<std::vector<std::vector<int>>> cls;  // [w][cell][elt] -> class

  int classes_at(int w, int cell) const;
  bool same(int w, int cell, int a, int b) const {
    return cls[w][cell][a] == cls[w][cell][b];
  }
};

// A generating identification inside one fiber.
struct TypeSeed {
  int w_idx;
  int cell;
  int term_a;
  int term_b;
};

TypeEqRel type_eqrel_discrete(const TypePtr& t);  // the identity relation
bool type_eqrel_closed_under_restriction(const TypeEqRel& e);
bool type_eqrel_equal(const TypeEqRel& a, const TypeEqRel& b);
// a finer-or-equal b (every a-class inside a b-class)
bool type_eqrel_subset(const TypeEqRel& a, const TypeEqRel& b);

// Least fiberwise equivalence relation containing the seeds and closed under
// restriction: merging two elements merges all their restriction images.
TypeEqRel type_eqrel_saturate(const TypePtr& t,
                              const std::vector<TypeSeed>& seeds);

// Reindex a relation along a substitution (the relation on T[sigma]) or a
// precomposition modality (the relation on the image type); both preserve
// canonical class ids fiber by fiber.
TypeEqRel subst_type_eqrel(const TypeEqRel& e, const Substitution& s);
TypeEqRel apply_type_eqrel(PshFunctor f, const TypeEqRel& e);

// Right adjoint to reindexing along sigma: Delta -> Gamma.  Given t over
// Gamma and f a relation on t[sigma], the result relates x, y over gamma at
// W exactly when for every phi: V -|> W and every delta over V with
// sigma(delta) = gamma.phi, f relates x.phi and y.phi over delta.  Galois:
//   subst_type_eqrel(e, sigma) subset of f  <=>  e subset of the result.
TypeEqRel forall_subst_type_eqrel(const Substitution& sigma, const TypePtr& t,
                                  const TypeEqRel& f);

// Right adjoint to applying a precomposition modality with base-cube action
// K.  Given t over Gamma and f a relation on the image type, the result
// relates x, y over gamma at W exactly when for every cube V of the image
// site and every phi: K(V) -|> W, f relates x.phi and y.phi over gamma.phi
// (read at level V of the image).  Galois:
//   apply_type_eqrel(k, e) subset of f  <=>  e subset of the result.
TypeEqRel forall_apply_type_eqrel(PshFunctor k, const TypePtr& t,
                                  const TypeEqRel& f);

// The shape equivalence relation of a type: seeded, for every contractible
// variable i and every fiber element x over a context cell degenerate in i,
// by x ~ x . (0/i composed with the i-weakening); saturation derives the
// 1-endpoint side.  Respects substitution on the bridge/path site.
TypeEqRel se_type(const TypePtr& t);

// ---------------------------------------------------------------------------
// The shape quotient of a type
// ---------------------------------------------------------------------------

// quot's fiber over a cell lists the classes of rel (ordered by smallest
// member index, labelled by the lexicographically least member name), and
// into: type -> quot is the fiberwise projection.
struct TypeQuotient {
  TypePtr type;
  TypeEqRel rel;
  TypePtr quot;
  TypeMorphism into;
};

// Quotient by an arbitrary restriction-closed fiberwise relation.
TypeQuotient quotient_type(const TypePtr& t, const TypeEqRel& e);

// Quotient by the shape equivalence relation.  The result is a discrete
// type; when t itself is discrete the projection is bijective per fiber.
TypeQuotient shape_quotient_type(const TypePtr& t);

// The canonical coarsening from the sharp of the shape quotient to the
// shape quotient of the sharp (well-defined because the sharp image of SE
// is contained in SE of the sharp image; a violation — impossible for a
// genuine shape quotient — throws std::logic_error).  Requires q to be a
// shape quotient over the bridge/path site.  Composing it after the sharp
// of q.into gives the projection of the sharp type; the coshape analogue
// needs no comparison at all, since the coshape of the quotient equals the
// quotient of the coshape as tables.
TypeMorphism quot_coarsen_sharp(const TypeQuotient& q);

// ---------------------------------------------------------------------------
// Invertible elimination along the quotient projection
// ---------------------------------------------------------------------------

// The fiberwise map whose compare substitution mediates each rule, pulled
// back along sigma into the working context:
//   rule 1:  into[sigma]          : T[sigma]        -> (quot T)[sigma]
//   rule 2:  (sharp into)[sigma]  : (sharp T)[sigma] -> (sharp quot T)[sigma]
//   rule 3:  (coshape into)[sigma]: (coshape T)[sigma] -> (coshape quot T)[sigma]
// sigma must target the context the projection lives over (rules 2/3: its
// sharp/coshape image).
TypeMorphism quotshp_rule_morphism(int rule, const TypeQuotient& q,
                                   const Substitution& sigma);

// The substitution Gamma.src -> Gamma.dst induced by the rule's map; the
// downward (always valid) direction of the rule is substitution along it.
Substitution elim_compare(int rule, const TypeQuotient& q,
                          const Substitution& sigma);

// The upward direction: factor a section u of t[elim_compare(...)] uniquely
// through the compare substitution.  The motive t must be discrete
// (std::invalid_argument otherwise); with a discrete motive the
// factorization cannot be obstructed, so an obstruction throws
// std::logic_error.  Substituting the result along elim_compare recovers u.
Term elim_quotshp(int rule, const TypeQuotient& q, const Substitution& sigma,
                  const TypePtr& t, const Term& u);

// ---------------------------------------------------------------------------
// Pathhood irrelevance
// ---------------------------------------------------------------------------

// Two fiber elements at (W incl i:P) over the same cell that become equal
// when the path variable i is renamed to a fresh bridge variable.
struct PathhoodWitness {
  int w_idx;
  int var;
  int cell;
  int term_a;
  int term_b;
};

// True iff for every cube (W incl i:P) the renaming of the path variable i
// to a bridge variable is injective on every fiber — paths carry no data
// beyond their underlying bridge.  Bridge/path site only.
bool pathhood_irrelevant(const TypePtr& t,
                         std::vector<PathhoodWitness>* witnesses = nullptr);

}  // namespace bpcube
