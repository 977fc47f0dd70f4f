#ifndef BPCUBE_BASE_HPP
#define BPCUBE_BASE_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace bpcube {

// Thrown when a configurable enumeration ceiling (e.g. function-family count) is hit.
struct limit_error : std::runtime_error {
  explicit limit_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Thrown when a capped value (Nat / Size) would exceed its cap.
struct cap_overflow : std::runtime_error {
  explicit cap_overflow(const std::string& msg) : std::runtime_error(msg) {}
};

enum class Site { Cube, BPCube };

std::string to_string(Site s);

// A skeletal cube. For site Cube, nB counts edge variables and nP is always 0.
// Variables are indexed 0..total()-1: bridge (edge) variables first, then path variables.
// Canonical names: b1..b_nB and p1..p_nP (e1..e_n for site Cube).
struct Cube {
  Site site = Site::Cube;
  int nB = 0;
  int nP = 0;

  int total() const { return nB + nP; }
  bool operator==(const Cube& o) const { return site == o.site && nB == o.nB && nP == o.nP; }
  bool operator!=(const Cube& o) const { return !(*this == o); }
};

// true if variable index k of W sits in the bridge (edge) block
inline bool is_bridge_var(const Cube& w, int k) { return k < w.nB; }

std::string var_name(const Cube& w, int k);
std::string to_string(const Cube& w);

// Assignment values: 0 and 1 are the endpoints; VAL_VAR_BASE+k is variable k of the domain.
inline constexpr int VAL_ZERO = 0;
inline constexpr int VAL_ONE = 1;
inline constexpr int VAL_VAR_BASE = 2;
inline bool val_is_var(int v) { return v >= VAL_VAR_BASE; }
inline int val_var(int v) { return v - VAL_VAR_BASE; }
inline int var_val(int k) { return VAL_VAR_BASE + k; }

// A face map phi: V -|> W (a site morphism from V to W). It assigns to every variable of the
// codomain W either an endpoint or a variable of the domain V. Restriction along phi maps
// cells at W to cells at V. Flavor rule: a bridge (edge) variable of W may only receive an
// endpoint or a bridge variable of V; a path variable of W may receive anything.
struct FaceMap {
  Cube dom;
  Cube cod;
  std::vector<int> img;  // img[i] = value assigned to variable i of cod

  bool operator==(const FaceMap& o) const {
    return dom == o.dom && cod == o.cod && img == o.img;
  }
  bool operator!=(const FaceMap& o) const { return !(*this == o); }
};

bool face_map_valid(const FaceMap& f);
void require_valid(const FaceMap& f);

FaceMap id_map(const Cube& w);
bool is_id(const FaceMap& f);

// compose(phi: V -|> W, psi: U -|> V) = phi after psi : U -|> W.
// Restriction contravariantly: x . compose(phi, psi) = (x . phi) . psi.
FaceMap compose(const FaceMap& phi, const FaceMap& psi);

// All skeletal cubes with total dimension <= D, ordered by (total, nP) ascending
// (i.e. within one total dimension, more bridges first).
std::vector<Cube> enumerate_cubes(Site site, int D);

std::uint64_t hom_size(const Cube& v, const Cube& w);
std::vector<FaceMap> enumerate_hom(const Cube& v, const Cube& w);
// Position of f in enumerate_hom(f.dom, f.cod); computed arithmetically.
int hom_rank(const FaceMap& f);

// The seven base functors between the sites. Object actions:
//   ShapeB     : BPCube -> Cube    (nB,nP) |-> nB edges        (drops paths)
//   DiscreteB  : Cube   -> BPCube  n       |-> (n,0)           (edges become bridges)
//   UnderlyingB: BPCube -> Cube    (nB,nP) |-> nB+nP edges     (everything becomes an edge)
//   CodiscreteB: Cube   -> BPCube  n       |-> (0,n)           (edges become paths)
//   Shp        : BPCube -> BPCube  (nB,nP) |-> (nB,0)
//   Flat       : BPCube -> BPCube  (nB,nP) |-> (nB+nP,0)
//   Sharp      : BPCube -> BPCube  (nB,nP) |-> (0,nB+nP)
// There is no eighth base functor turning everything into paths while acting on all
// morphisms (the would-be right end of the tower exists only at the presheaf level).
enum class BaseFunctor { ShapeB, DiscreteB, UnderlyingB, CodiscreteB, Shp, Flat, Sharp };

std::string to_string(BaseFunctor f);
Site source_site(BaseFunctor f);
Site target_site(BaseFunctor f);
Cube apply_base_functor(BaseFunctor f, const Cube& w);
FaceMap apply_base_functor(BaseFunctor f, const FaceMap& m);

// The three base natural transformations (componentwise face maps):
//   Varsigma  (Id -> Shp):   varsigma_W : W -|> Shp W, each bridge variable to itself
//   Kappa     (Flat -> Id):  kappa_W : Flat W -|> W, variable i of W to variable i of Flat W
//   Iota      (Id -> Sharp): iota_W : W -|> Sharp W, variable i of Sharp W to variable i of W
enum class BaseTransform { Varsigma, Kappa, Iota };

std::string to_string(BaseTransform t);
FaceMap transform_component(BaseTransform t, const Cube& w);

// Remove variable i from W (subsequent variables shift down one slot).
Cube drop_var(const Cube& w, int i);
// Split phi: V -|> (W including var i) into the map without the i-clause plus i's value.
struct VarFactoring {
  FaceMap rest;  // V -|> drop_var(cod, i)
  int value;     // what i was mapped to
};
VarFactoring factor_at_var(const FaceMap& phi, int i);
// Inverse of factor_at_var: reinsert the clause (value / var i).
FaceMap reassemble(const FaceMap& rest, const Cube& cod, int i, int value);

// The endomorphism (0/i, all other variables identity) : W -|> W, and its (1/i) twin.
FaceMap endo_const(const Cube& w, int i, int endpoint);
// Weakening (W including var i) -|> (W without i): identity on the remaining variables.
FaceMap weakening(const Cube& w_with, int i);

std::string to_string(const FaceMap& f);   // "b1<=0;p1<=b1" in codomain variable order
FaceMap parse_face_map(const Cube& dom, const Cube& cod, const std::string& text);

// Cached enumeration of a truncated site: cubes, hom sets, and index lookups.
class SiteCat {
 public:
  SiteCat(Site site, int D);

  Site site() const { return site_; }
  int dim() const { return D_; }
  const std::vector<Cube>& cubes() const { return cubes_; }
  int index_of(const Cube& w) const;
  const Cube& cube(int idx) const { return cubes_.at(idx); }
  const std::vector<FaceMap>& hom(int v_idx, int w_idx) const;
  const std::vector<FaceMap>& hom(const Cube& v, const Cube& w) const;

 private:
  Site site_;
  int D_;
  std::vector<Cube> cubes_;
  std::vector<std::vector<std::vector<FaceMap>>> homs_;  // [v_idx][w_idx]
};

// Shared per-process cache; the returned reference stays valid for the process lifetime.
const SiteCat& site_cat(Site site, int D);

}  // namespace bpcube

#endif
