#pragma once
// Closed semantic types over a chosen context: the interval with its two
// endpoints, capped natural numbers with induction, capped sizes with
// zero / successor / join / fill and their sharp-side liftings, the "less
// or equal" proposition on sharp sizes, the codiscreteness forcing rule for
// sizes under an interval disjunction, and the path degeneracy check
// comparing the shape of a context extended by a sharp interval with the
// shape of the context itself.

#include "bpcube/cwf.hpp"
#include "bpcube/discreteness.hpp"

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace bpcube {

// ---------------------------------------------------------------------------
// The interval
// ---------------------------------------------------------------------------

// A closed type: the fiber over every cell at W is Hom(W, one-bridge cube),
// restriction is precomposition.  |fiber at (nB,nP)| = 2 + nB; discrete.
struct IntervalData {
  TypePtr type;
  Term end0;  // the constant-0 assignment, per cell
  Term end1;
};

IntervalData interval(PshPtr ctx);

// The sharp of the closed interval, read back over ctx through the
// flat-sharp unit.  Since sharp evaluates at the all-bridges level,
// |fiber at (nB,nP)| = 2 + nB + nP: former path variables show up as
// bridge variables.  Bridge/path site only.
IntervalData sharp_interval(PshPtr ctx);

// ---------------------------------------------------------------------------
// Capped natural numbers
// ---------------------------------------------------------------------------

// Constant fibers {"0", ..., "cap"} with identity restrictions; the fiber
// index of an element is its numeric value.
struct NatData {
  TypePtr type;
  int cap = 3;
};

NatData nat_type(PshPtr ctx, int cap = 3);
Term nat_literal(const NatData& nat, int k);
Term nat_zero(const NatData& nat);
// Adds one to every cell value; any value already at the cap throws.
Term nat_suc(const NatData& nat, const Term& n);

// Induction at a finite cap.  The step is typed over the numbers that still
// have a successor: letting Nat⁻ be the same type capped one lower,
//   motive:  type over Γ.Nat,
//   base:    section of motive[⟨id, 0⟩] over Γ,
//   step:    section of motive[suc-compare] over (Γ.Nat⁻).motive[incl],
// where incl: Γ.Nat⁻ → Γ.Nat is the value-preserving inclusion and
// suc-compare sends ((γ, j), x) to (γ, j+1).
NatData nat_below(const NatData& nat);              // cap - 1, same context
Substitution nat_below_incl(const NatData& nat);    // Γ.Nat⁻ → Γ.Nat
Substitution nat_suc_compare(const NatData& nat, const TypePtr& motive);
// The section of motive[⟨id, n⟩] computed by primitive recursion on the
// value of n at each cell.
Term nat_ind(const NatData& nat, const TypePtr& motive, const Term& base,
             const Term& step, const Term& n);

// ---------------------------------------------------------------------------
// Capped sizes
// ---------------------------------------------------------------------------

// The fiber over any cell at W is the set of functions from the vertices of
// the bridge part of W (maps from the point into (nB, 0)) to {0..cap};
// restriction precomposes with the bridge part of the face map, so the
// fiber never depends on the cell and collapsing a path variable is the
// identity — the type is discrete.  Elements are named "s" followed by one
// digit per vertex (so the cap must stay below 10); the fiber index encodes
// the same digits in base cap+1.  Bridge/path site only.
struct SizeData {
  TypePtr type;
  int cap = 3;
};

SizeData size_type(PshPtr ctx, int cap = 3);

// Vertex bookkeeping: number of vertices feeding a level's fibers, and the
// value of a term at one vertex of one cell.
int size_vertices(const SizeData& s, int w_idx);
int size_value(const SizeData& s, const Term& t, int w_idx, int cell,
               int vertex);

Term size_const(const SizeData& s, int k);
Term size_zero(const SizeData& s);
// Vertexwise successor; any vertex value already at the cap throws.
Term size_up(const SizeData& s, const Term& n);
// Vertexwise maximum.
Term size_max(const SizeData& s, const Term& m, const Term& n);

// fill p n — the size that is n where the proposition holds and 0 elsewhere:
// p is a proposition (every fiber at most one element) over the shape
// quotient of the context, n a size section over the context extended by
// p[ς].  The value at a cell γ over W and a vertex ψ is read by lifting ψ
// to the cube W with all path variables at 0: if p[ς] holds at γ·ψ′, the
// value of n at (γ·ψ′, ⋆), else 0.  Independent of the lift because sizes
// cannot see path variables.
Term size_fill(const SizeData& s, const TypePtr& p, const Term& n);

// ---------------------------------------------------------------------------
// Sharp-side sizes
// ---------------------------------------------------------------------------

// The sharp of the size type over the flat of the context, read back over
// the context through the flat-sharp unit.  The fiber at a cell over W has
// one digit per vertex of the whole cube (paths turned into bridges), so
// sharp sizes can vary along paths where plain sizes cannot.  All structure
// is obtained by transposing down to the flat side, operating there, and
// transposing back.
struct SharpSizeData {
  SizeData flat;  // the plain size type over the flat of the context
  TypePtr type;   // its sharp, read over the original context
  int cap = 3;
};

SharpSizeData sharp_size_type(PshPtr ctx, int cap = 3);

// Transposition between sections of the sharp size over Γ and sections of
// the plain size over the flat of Γ.
Term sharp_size_of(const SharpSizeData& s, const Term& flat_term);
Term sharp_size_to_flat(const SharpSizeData& s, const Term& t);

// Vertex bookkeeping on the sharp side: one vertex per corner of the whole
// cube at the level.
int sharp_size_vertices(const SharpSizeData& s, int w_idx);
int sharp_size_value(const SharpSizeData& s, const Term& t, int w_idx,
                     int cell, int vertex);

Term sharp_size_const(const SharpSizeData& s, int k);
Term sharp_size_zero(const SharpSizeData& s);
Term sharp_size_up(const SharpSizeData& s, const Term& n);
Term sharp_size_max(const SharpSizeData& s, const Term& m, const Term& n);
// fill on the sharp side: p over the shape quotient of Γ, n a sharp size
// section over Γ.p[ς]; computed by transposing down, filling, transposing
// back up.
Term sharp_size_fill(const SharpSizeData& s, const TypePtr& p, const Term& n);

// The inequality proposition on two sharp size sections over the same
// context: the fiber at a cell is inhabited exactly when the value of m is
// at most the value of n at every vertex of the cell's cube (equivalently,
// when m·φ ≤ n·φ for every face map φ into the cell).
TypePtr size_leq(const SharpSizeData& s, const Term& m, const Term& n);

// ---------------------------------------------------------------------------
// Codiscreteness of sizes
// ---------------------------------------------------------------------------

// The forcing rule: two plain size sections that agree under the
// disjunction (i = 0) ∨ (i = 1), for any interval section i, are equal
// outright.  At every point cell an interval value is one of the two
// endpoints, so the disjunction holds there, and agreement at the point
// cells already pins down every vertex value.
struct SizeCodiscReport {
  bool premise = false;     // m and n agree over the extension by the disjunction
  bool conclusion = false;  // m == n over the whole context
  bool rule_holds = false;  // premise implies conclusion
};

SizeCodiscReport size_codisc_check(const SizeData& s, const IntervalData& itv,
                                   const Term& i, const Term& m,
                                   const Term& n);

// ---------------------------------------------------------------------------
// Path degeneracy
// ---------------------------------------------------------------------------

// Compares the shape quotient of Γ extended by the sharp interval with the
// shape quotient of Γ.  The forward map is the shape of the display
// substitution; the exhibited inverse is the shape of ⟨id, sharp 0⟩.  The
// composite on the quotient of Γ is the identity by construction; the rule
// holds when the other composite is the identity as well.
struct DegeneracyReport {
  Substitution forward;  // shape(Γ.♯interval) → shape(Γ)
  Substitution inverse;  // shape(Γ) → shape(Γ.♯interval)
  bool forward_after_inverse_id = false;
  bool inverse_after_forward_id = false;
  bool iso = false;
  // per level: cells of the extended quotient vs cells of the base quotient
  std::vector<std::pair<int, int>> counts;
};

DegeneracyReport degeneracy_check(PshPtr ctx);

}  // namespace bpcube
