#include "bpcube/base.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>

namespace bpcube {

std::string to_string(Site s) { return s == Site::Cube ? "Cube" : "BPCube"; }

std::string var_name(const Cube& w, int k) {
  if (k < 0 || k >= w.total()) throw std::invalid_argument("variable index out of range");
  if (w.site == Site::Cube) return "e" + std::to_string(k + 1);
  if (k < w.nB) return "b" + std::to_string(k + 1);
  return "p" + std::to_string(k - w.nB + 1);
}

std::string to_string(const Cube& w) {
  if (w.site == Site::Cube) return "(" + std::to_string(w.nB) + "E)";
  return "(" + std::to_string(w.nB) + "B," + std::to_string(w.nP) + "P)";
}

bool face_map_valid(const FaceMap& f) {
  if (f.dom.site != f.cod.site) return false;
  if ((int)f.img.size() != f.cod.total()) return false;
  for (int i = 0; i < f.cod.total(); ++i) {
    int v = f.img[i];
    if (v == VAL_ZERO || v == VAL_ONE) continue;
    if (!val_is_var(v)) return false;
    int k = val_var(v);
    if (k < 0 || k >= f.dom.total()) return false;
    // a bridge (edge) variable may only be filled by a bridge variable
    if (is_bridge_var(f.cod, i) && !is_bridge_var(f.dom, k)) return false;
  }
  return true;
}

void require_valid(const FaceMap& f) {
  if (!face_map_valid(f)) throw std::invalid_argument("invalid face map " + to_string(f));
}

FaceMap id_map(const Cube& w) {
  FaceMap f{w, w, {}};
  f.img.resize(w.total());
  for (int i = 0; i < w.total(); ++i) f.img[i] = var_val(i);
  return f;
}

bool is_id(const FaceMap& f) { return f == id_map(f.dom); }

FaceMap compose(const FaceMap& phi, const FaceMap& psi) {
  if (psi.cod != phi.dom) throw std::invalid_argument("compose: domain mismatch");
  FaceMap r{psi.dom, phi.cod, {}};
  r.img.resize(phi.cod.total());
  for (int i = 0; i < phi.cod.total(); ++i) {
    int v = phi.img[i];
    r.img[i] = val_is_var(v) ? psi.img[val_var(v)] : v;
  }
  return r;
}

std::vector<Cube> enumerate_cubes(Site site, int D) {
  if (D < 0) throw std::invalid_argument("enumerate_cubes: negative bound");
  std::vector<Cube> out;
  for (int t = 0; t <= D; ++t) {
    if (site == Site::Cube) {
      out.push_back(Cube{site, t, 0});
    } else {
      for (int nP = 0; nP <= t; ++nP) out.push_back(Cube{site, t - nP, nP});
    }
  }
  return out;
}

std::uint64_t hom_size(const Cube& v, const Cube& w) {
  if (v.site != w.site) throw std::invalid_argument("hom_size: site mismatch");
  std::uint64_t n = 1;
  for (int i = 0; i < w.nB; ++i) n *= (std::uint64_t)(2 + v.nB);
  for (int i = 0; i < w.nP; ++i) n *= (std::uint64_t)(2 + v.total());
  return n;
}

namespace {
int radix_at(const Cube& v, const Cube& w, int i) {
  return is_bridge_var(w, i) ? 2 + v.nB : 2 + v.total();
}
}  // namespace

std::vector<FaceMap> enumerate_hom(const Cube& v, const Cube& w) {
  if (v.site != w.site) throw std::invalid_argument("enumerate_hom: site mismatch");
  int n = w.total();
  std::vector<FaceMap> out;
  out.reserve((size_t)hom_size(v, w));
  std::vector<int> digit(n, 0);
  while (true) {
    FaceMap f{v, w, {}};
    f.img.resize(n);
    for (int i = 0; i < n; ++i) f.img[i] = digit[i];  // digit d encodes value d directly
    out.push_back(std::move(f));
    int i = n - 1;
    for (; i >= 0; --i) {
      if (++digit[i] < radix_at(v, w, i)) break;
      digit[i] = 0;
    }
    if (i < 0) break;
  }
  return out;
}

int hom_rank(const FaceMap& f) {
  int rank = 0;
  for (int i = 0; i < f.cod.total(); ++i) {
    rank = rank * radix_at(f.dom, f.cod, i) + f.img[i];
  }
  return rank;
}

std::string to_string(BaseFunctor f) {
  switch (f) {
    case BaseFunctor::ShapeB: return "ShapeB";
    case BaseFunctor::DiscreteB: return "DiscreteB";
    case BaseFunctor::UnderlyingB: return "UnderlyingB";
    case BaseFunctor::CodiscreteB: return "CodiscreteB";
    case BaseFunctor::Shp: return "Shp";
    case BaseFunctor::Flat: return "Flat";
    case BaseFunctor::Sharp: return "Sharp";
  }
  throw std::runtime_error("unreachable");
}

Site source_site(BaseFunctor f) {
  switch (f) {
    case BaseFunctor::DiscreteB:
    case BaseFunctor::CodiscreteB: return Site::Cube;
    default: return Site::BPCube;
  }
}

Site target_site(BaseFunctor f) {
  switch (f) {
    case BaseFunctor::ShapeB:
    case BaseFunctor::UnderlyingB: return Site::Cube;
    default: return Site::BPCube;
  }
}

Cube apply_base_functor(BaseFunctor f, const Cube& w) {
  if (w.site != source_site(f)) throw std::invalid_argument("apply_base_functor: site mismatch");
  switch (f) {
    case BaseFunctor::ShapeB: return Cube{Site::Cube, w.nB, 0};
    case BaseFunctor::DiscreteB: return Cube{Site::BPCube, w.nB, 0};
    case BaseFunctor::UnderlyingB: return Cube{Site::Cube, w.total(), 0};
    case BaseFunctor::CodiscreteB: return Cube{Site::BPCube, 0, w.nB};
    case BaseFunctor::Shp: return Cube{Site::BPCube, w.nB, 0};
    case BaseFunctor::Flat: return Cube{Site::BPCube, w.total(), 0};
    case BaseFunctor::Sharp: return Cube{Site::BPCube, 0, w.total()};
  }
  throw std::runtime_error("unreachable");
}

FaceMap apply_base_functor(BaseFunctor f, const FaceMap& m) {
  if (m.dom.site != source_site(f)) throw std::invalid_argument("apply_base_functor: site mismatch");
  FaceMap r{apply_base_functor(f, m.dom), apply_base_functor(f, m.cod), {}};
  switch (f) {
    case BaseFunctor::ShapeB:
    case BaseFunctor::Shp:
      // keep the bridge clauses; path clauses are dropped (bridge values keep their index)
      r.img.assign(m.img.begin(), m.img.begin() + m.cod.nB);
      break;
    default:
      // flavor reassignments keep every clause and every variable index
      r.img = m.img;
      break;
  }
  return r;
}

std::string to_string(BaseTransform t) {
  switch (t) {
    case BaseTransform::Varsigma: return "varsigma";
    case BaseTransform::Kappa: return "kappa";
    case BaseTransform::Iota: return "iota";
  }
  throw std::runtime_error("unreachable");
}

FaceMap transform_component(BaseTransform t, const Cube& w) {
  if (w.site != Site::BPCube) throw std::invalid_argument("transform_component: BPCube only");
  FaceMap f;
  switch (t) {
    case BaseTransform::Varsigma:
      f.dom = w;
      f.cod = apply_base_functor(BaseFunctor::Shp, w);
      break;
    case BaseTransform::Kappa:
      f.dom = apply_base_functor(BaseFunctor::Flat, w);
      f.cod = w;
      break;
    case BaseTransform::Iota:
      f.dom = w;
      f.cod = apply_base_functor(BaseFunctor::Sharp, w);
      break;
  }
  f.img.resize(f.cod.total());
  for (int i = 0; i < f.cod.total(); ++i) f.img[i] = var_val(i);
  return f;
}

Cube drop_var(const Cube& w, int i) {
  if (i < 0 || i >= w.total()) throw std::invalid_argument("drop_var: index out of range");
  Cube r = w;
  if (is_bridge_var(w, i)) --r.nB; else --r.nP;
  return r;
}

VarFactoring factor_at_var(const FaceMap& phi, int i) {
  if (i < 0 || i >= phi.cod.total()) throw std::invalid_argument("factor_at_var: index out of range");
  VarFactoring out;
  out.value = phi.img[i];
  out.rest.dom = phi.dom;
  out.rest.cod = drop_var(phi.cod, i);
  out.rest.img = phi.img;
  out.rest.img.erase(out.rest.img.begin() + i);
  return out;
}

FaceMap reassemble(const FaceMap& rest, const Cube& cod, int i, int value) {
  FaceMap f{rest.dom, cod, rest.img};
  f.img.insert(f.img.begin() + i, value);
  require_valid(f);
  return f;
}

FaceMap endo_const(const Cube& w, int i, int endpoint) {
  if (endpoint != VAL_ZERO && endpoint != VAL_ONE) throw std::invalid_argument("endo_const: endpoint must be 0 or 1");
  FaceMap f = id_map(w);
  f.img.at(i) = endpoint;
  return f;
}

FaceMap weakening(const Cube& w_with, int i) {
  FaceMap f{w_with, drop_var(w_with, i), {}};
  f.img.resize(f.cod.total());
  for (int j = 0; j < f.cod.total(); ++j) f.img[j] = var_val(j < i ? j : j + 1);
  return f;
}

std::string to_string(const FaceMap& f) {
  std::string s;
  for (int i = 0; i < f.cod.total(); ++i) {
    if (i) s += ";";
    s += var_name(f.cod, i);
    s += "<=";
    int v = f.img[i];
    if (v == VAL_ZERO) s += "0";
    else if (v == VAL_ONE) s += "1";
    else s += var_name(f.dom, val_var(v));
  }
  return s;
}

FaceMap parse_face_map(const Cube& dom, const Cube& cod, const std::string& text) {
  FaceMap f{dom, cod, std::vector<int>(cod.total(), -1)};
  size_t pos = 0;
  int clauses = 0;
  while (pos <= text.size()) {
    size_t end = text.find(';', pos);
    if (end == std::string::npos) end = text.size();
    std::string clause = text.substr(pos, end - pos);
    if (!clause.empty()) {
      size_t arrow = clause.find("<=");
      if (arrow == std::string::npos)
        throw std::invalid_argument("face map clause missing '<=': " + clause);
      std::string lhs = clause.substr(0, arrow), rhs = clause.substr(arrow + 2);
      int idx = -1;
      for (int i = 0; i < cod.total(); ++i)
        if (var_name(cod, i) == lhs) { idx = i; break; }
      if (idx < 0) throw std::invalid_argument("unknown codomain variable: " + lhs);
      if (f.img[idx] != -1) throw std::invalid_argument("duplicate clause for " + lhs);
      int val;
      if (rhs == "0") val = VAL_ZERO;
      else if (rhs == "1") val = VAL_ONE;
      else {
        val = -1;
        for (int k = 0; k < dom.total(); ++k)
          if (var_name(dom, k) == rhs) { val = var_val(k); break; }
        if (val < 0) throw std::invalid_argument("unknown domain variable: " + rhs);
      }
      f.img[idx] = val;
      ++clauses;
    }
    if (end == text.size()) break;
    pos = end + 1;
  }
  if (clauses != cod.total())
    throw std::invalid_argument("face map must assign every codomain variable");
  require_valid(f);
  return f;
}

SiteCat::SiteCat(Site site, int D) : site_(site), D_(D), cubes_(enumerate_cubes(site, D)) {
  homs_.resize(cubes_.size());
  for (size_t v = 0; v < cubes_.size(); ++v) {
    homs_[v].resize(cubes_.size());
    for (size_t w = 0; w < cubes_.size(); ++w) homs_[v][w] = enumerate_hom(cubes_[v], cubes_[w]);
  }
}

int SiteCat::index_of(const Cube& w) const {
  for (size_t i = 0; i < cubes_.size(); ++i)
    if (cubes_[i] == w) return (int)i;
  throw std::invalid_argument("cube " + to_string(w) + " not in truncated site");
}

const std::vector<FaceMap>& SiteCat::hom(int v_idx, int w_idx) const {
  return homs_.at(v_idx).at(w_idx);
}

const std::vector<FaceMap>& SiteCat::hom(const Cube& v, const Cube& w) const {
  return hom(index_of(v), index_of(w));
}

const SiteCat& site_cat(Site site, int D) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::unique_ptr<SiteCat>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair((int)site, D);
  auto it = cache.find(key);
  if (it == cache.end())
    it = cache.emplace(key, std::make_unique<SiteCat>(site, D)).first;
  return *it->second;
}

}  // namespace bpcube
