#pragma once
// Seeded, reproducible instance generators for randomized law checking, plus
// greedy witness shrinking.
//
// Random presheaves are quotients of coproducts of representables and random
// types are display families of restriction-closed subfamilies of a product
// with a second random presheaf — both valid by construction, so no draw is
// ever rejected for breaking functoriality.  Discrete instances are reached
// through the shape quotient.  Every generator consumes an explicit 64-bit
// seed and is a pure function of (config, seed).

#include "bpcube/cwf.hpp"
#include "bpcube/discreteness.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

namespace bpcube {

// A self-contained 64-bit stream (splitmix64).  The standard engines leave
// distribution output implementation-defined, so draws are fixed here to
// keep reports byte-identical across platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next();
  // Uniform in [0, n); n >= 1.
  int below(int n);
  // True once in n draws on average.
  bool one_in(int n) { return below(n) == 0; }
  // An independent derived stream.
  Rng fork(std::uint64_t stream) const;

 private:
  std::uint64_t state_;
};

struct GenConfig {
  Site site = Site::BPCube;
  int D = 2;
  // Largest number of representable summands in a generated context.
  int max_generators = 3;
  // Cap on the total dimension of generator cubes; -1 means D.  Laws whose
  // justification lifts a cell one dimension up (the substitution law for
  // the shape relation, the path degeneracy axiom) need D - 1 here: at the
  // truncation boundary the lifted cube is missing and the law genuinely
  // fails, so their instances are generated one dimension down.
  int max_gen_dim = -1;
  // Largest number of identification pairs fed to the quotient.
  int max_seeds = 3;
  // Upper bound on the fiber sizes of generated types.
  int fiber_bound = 3;

  int gen_dim() const { return max_gen_dim < 0 ? D : max_gen_dim; }
};

// A quotient of a coproduct of representables on generator cubes of total
// dimension <= gen_dim().  Never empty; levels can still be large at high
// cubes (they are hom-sets), but generator count and dimension bound them.
PshPtr random_presheaf(const GenConfig& cfg, std::uint64_t seed);

// A discrete context: on the bridge/path site the shape quotient of a random
// presheaf; on the plain-cubical site the image of a random presheaf of
// edge dimension 0 under the discrete inclusion, i.e. a coproduct of points.
PshPtr random_discrete_presheaf(const GenConfig& cfg, std::uint64_t seed);

// A type over ctx with fibers of size <= cfg.fiber_bound: the display family
// of a restriction-closed subfamily of ctx x R for a random R (the fiber
// over a cell collects its partners), coarsened by saturated fiberwise
// relations until the bound holds.
TypePtr random_type(const PshPtr& ctx, const GenConfig& cfg,
                    std::uint64_t seed);

// The shape quotient of a random type: discrete over any context.
TypePtr random_discrete_type(const PshPtr& ctx, const GenConfig& cfg,
                             std::uint64_t seed);

// A random type that is NOT discrete over ctx, if one can be found within a
// bounded number of draws (needs a non-discrete direction in ctx to exist).
std::optional<TypePtr> random_nondiscrete_type(const PshPtr& ctx,
                                               const GenConfig& cfg,
                                               std::uint64_t seed);

// A natural map into a generated presheaf from a generated source
// (always exists: every generated context is inhabited at the point).
Substitution random_substitution_onto(const PshPtr& dst, const GenConfig& cfg,
                                      std::uint64_t seed);

// A seeded substitution instance for map-level laws: a projection onto a
// quotient of a generated presheaf, a sampled map between two generated
// presheaves, or a terminal map — the mode is drawn from the seed.
Substitution random_substitution_instance(const GenConfig& cfg,
                                          std::uint64_t seed);

// Every restriction-closed per-level partition of g / fiberwise partition of
// t, in a deterministic order.  Exponential: meant for tiny instances; the
// combination count is capped (limit_error beyond it).
std::vector<EqRel> enumerate_eqrels(const PshPtr& g, long long cap = 100000);
std::vector<TypeEqRel> enumerate_type_eqrels(const TypePtr& t,
                                             long long cap = 100000);

// Greedy minimization of a failing instance: repeatedly remove the
// restriction-preimage closure of one cell (for types: of one fiber
// element, or coarsen one fiber by a saturated merge) while the predicate
// keeps failing.  The predicate sees only valid instances.
PshPtr shrink_presheaf(PshPtr g,
                       const std::function<bool(const PshPtr&)>& fails);
TypePtr shrink_type(TypePtr t, const std::function<bool(const TypePtr&)>& fails);

}  // namespace bpcube
