#include "emt/finset.hpp"

#include <algorithm>

namespace emt {

uint64_t hash_str(const std::string& s, uint64_t h) {
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  h ^= 0xfful;  // separator so {"ab"} and {"a","b"} differ
  h *= 1099511628211ull;
  return h;
}

FinSet::FinSet(std::vector<std::string> labels) : labels_(std::move(labels)) {
  uint64_t h = 1469598103934665603ull;
  for (const auto& l : labels_) h = hash_str(l, h);
  hash_ = h ^ (uint64_t(labels_.size()) * 0x9e3779b97f4a7c15ull);
}

Obj FinSet::make(std::vector<std::string> labels) {
  std::sort(labels.begin(), labels.end());
  for (size_t i = 0; i + 1 < labels.size(); ++i)
    if (labels[i] == labels[i + 1])
      throw PreconditionError("duplicate label in finite set: " + labels[i]);
  return Obj(new FinSet(std::move(labels)));
}

Obj FinSet::make_sorted(std::vector<std::string> labels) {
  return Obj(new FinSet(std::move(labels)));
}

void FinSet::ensure_index() const {
  std::call_once(index_once_, [this] {
    index_.reserve(labels_.size() * 2);
    for (size_t i = 0; i < labels_.size(); ++i) index_.emplace(labels_[i], Idx(i));
  });
}

Idx FinSet::index_of(const std::string& l) const {
  auto r = find(l);
  if (!r) throw PreconditionError("label not in set: " + l);
  return *r;
}

std::optional<Idx> FinSet::find(const std::string& l) const {
  ensure_index();
  auto it = index_.find(l);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

bool FinSet::same(const FinSet& o) const {
  if (this == &o) return true;
  return hash_ == o.hash_ && labels_ == o.labels_;
}

bool same_obj(const Obj& a, const Obj& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  return a->same(*b);
}

const std::string kUnitLabel = "\xE2\x98\x85";  // ★

std::string pair_label(const std::string& x, const std::string& y) {
  std::string s;
  s.reserve(x.size() + y.size() + 3);
  s += '(';
  s += x;
  s += ',';
  s += y;
  s += ')';
  return s;
}

std::string inl_label(const std::string& x) { return "inl:" + x; }
std::string inr_label(const std::string& y) { return "inr:" + y; }

std::string subset_label(const std::vector<std::string>& members) {
  std::string s = "{";
  for (size_t i = 0; i < members.size(); ++i) {
    if (i) s += ',';
    s += members[i];
  }
  s += '}';
  return s;
}

FinMap::FinMap(Obj d, Obj c, std::vector<Idx> t)
    : dom(std::move(d)), cod(std::move(c)), tab(std::move(t)) {
  if (tab.size() != dom->size()) throw PreconditionError("map table size mismatch");
  for (Idx v : tab)
    if (v < 0 || size_t(v) >= cod->size())
      throw PreconditionError("map table value out of range");
}

FinMap FinMap::identity(Obj X) {
  std::vector<Idx> t(X->size());
  for (size_t i = 0; i < t.size(); ++i) t[i] = Idx(i);
  return FinMap(X, X, std::move(t));
}

bool FinMap::is_identity() const {
  if (!same_obj(dom, cod)) return false;
  for (size_t i = 0; i < tab.size(); ++i)
    if (tab[i] != Idx(i)) return false;
  return true;
}

bool FinMap::is_bijection() const {
  if (dom->size() != cod->size()) return false;
  std::vector<char> seen(cod->size(), 0);
  for (Idx v : tab) {
    if (seen[size_t(v)]) return false;
    seen[size_t(v)] = 1;
  }
  return true;
}

bool FinMap::is_surjection() const {
  std::vector<char> seen(cod->size(), 0);
  size_t cnt = 0;
  for (Idx v : tab)
    if (!seen[size_t(v)]) {
      seen[size_t(v)] = 1;
      ++cnt;
    }
  return cnt == cod->size();
}

FinMap FinMap::inverse() const {
  if (!is_bijection()) throw PreconditionError("inverse of a non-bijection");
  std::vector<Idx> t(tab.size());
  for (size_t i = 0; i < tab.size(); ++i) t[size_t(tab[i])] = Idx(i);
  return FinMap(cod, dom, std::move(t));
}

bool operator==(const FinMap& f, const FinMap& g) {
  return same_obj(f.dom, g.dom) && same_obj(f.cod, g.cod) && f.tab == g.tab;
}

FinMap compose(const FinMap& f, const FinMap& g) {
  if (!same_obj(g.cod, f.dom)) throw PreconditionError("composition domain mismatch");
  std::vector<Idx> t(g.tab.size());
  for (size_t i = 0; i < t.size(); ++i) t[i] = f.tab[size_t(g.tab[i])];
  return FinMap(g.dom, f.cod, std::move(t));
}

// ---------------------------------------------------------------------------
// MonoidalBase

namespace {

struct ObjPairKey {
  uint64_t hl, hr;
  bool operator==(const ObjPairKey& o) const { return hl == o.hl && hr == o.hr; }
};
struct ObjPairKeyHash {
  size_t operator()(const ObjPairKey& k) const {
    return size_t(k.hl * 0x9e3779b97f4a7c15ull ^ k.hr);
  }
};

}  // namespace

struct MonoidalBase::Cache {
  std::mutex mu;
  std::unordered_map<ObjPairKey, std::vector<std::shared_ptr<PairIndexer>>, ObjPairKeyHash> prods;
  std::unordered_map<ObjPairKey, std::vector<std::shared_ptr<CoproductIndexer>>, ObjPairKeyHash> sums;
};

MonoidalBase::MonoidalBase(BaseKind k) : kind_(k), cache_(std::make_shared<Cache>()) {
  unit_ = (k == BaseKind::cartesian) ? FinSet::make({kUnitLabel}) : FinSet::make({});
}

const PairIndexer& MonoidalBase::pairing(const Obj& X, const Obj& Y) const {
  if (kind_ != BaseKind::cartesian)
    throw PreconditionError("pairing requested on a non-cartesian base");
  ObjPairKey key{X->hash(), Y->hash()};
  std::lock_guard<std::mutex> lk(cache_->mu);
  auto& bucket = cache_->prods[key];
  for (auto& e : bucket)
    if (same_obj(e->left, X) && same_obj(e->right, Y)) return *e;

  auto pi = std::make_shared<PairIndexer>();
  pi->left = X;
  pi->right = Y;
  size_t nx = X->size(), ny = Y->size();
  std::vector<std::pair<std::string, size_t>> lab;
  lab.reserve(nx * ny);
  for (size_t i = 0; i < nx; ++i)
    for (size_t j = 0; j < ny; ++j)
      lab.emplace_back(pair_label(X->label(Idx(i)), Y->label(Idx(j))), i * ny + j);
  std::sort(lab.begin(), lab.end());
  std::vector<std::string> sorted;
  sorted.reserve(lab.size());
  pi->at.assign(nx * ny, 0);
  pi->unpair.resize(nx * ny);
  for (size_t s = 0; s < lab.size(); ++s) {
    sorted.push_back(lab[s].first);
    size_t rm = lab[s].second;
    pi->at[rm] = Idx(s);
    pi->unpair[s] = {Idx(rm / ny), Idx(rm % ny)};
  }
  pi->prod = FinSet::make_sorted(std::move(sorted));
  bucket.push_back(pi);
  return *bucket.back();
}

const CoproductIndexer& MonoidalBase::copairing(const Obj& X, const Obj& Y) const {
  if (kind_ != BaseKind::cocartesian)
    throw PreconditionError("copairing requested on a non-cocartesian base");
  ObjPairKey key{X->hash(), Y->hash()};
  std::lock_guard<std::mutex> lk(cache_->mu);
  auto& bucket = cache_->sums[key];
  for (auto& e : bucket)
    if (same_obj(e->left, X) && same_obj(e->right, Y)) return *e;

  auto ci = std::make_shared<CoproductIndexer>();
  ci->left = X;
  ci->right = Y;
  std::vector<std::pair<std::string, std::pair<int, Idx>>> lab;
  lab.reserve(X->size() + Y->size());
  for (size_t i = 0; i < X->size(); ++i)
    lab.emplace_back(inl_label(X->label(Idx(i))), std::make_pair(0, Idx(i)));
  for (size_t j = 0; j < Y->size(); ++j)
    lab.emplace_back(inr_label(Y->label(Idx(j))), std::make_pair(1, Idx(j)));
  std::sort(lab.begin(), lab.end());
  std::vector<std::string> sorted;
  sorted.reserve(lab.size());
  ci->inl_at.assign(X->size(), 0);
  ci->inr_at.assign(Y->size(), 0);
  ci->case_of.resize(lab.size());
  for (size_t s = 0; s < lab.size(); ++s) {
    sorted.push_back(lab[s].first);
    auto [side, idx] = lab[s].second;
    ci->case_of[s] = {side, idx};
    if (side == 0)
      ci->inl_at[size_t(idx)] = Idx(s);
    else
      ci->inr_at[size_t(idx)] = Idx(s);
  }
  ci->sum = FinSet::make_sorted(std::move(sorted));
  bucket.push_back(ci);
  return *bucket.back();
}

Obj MonoidalBase::tensor_obj(const Obj& X, const Obj& Y) const {
  return kind_ == BaseKind::cartesian ? pairing(X, Y).prod : copairing(X, Y).sum;
}

FinMap MonoidalBase::tensor_map(const FinMap& f, const FinMap& g) const {
  if (kind_ == BaseKind::cartesian) {
    const auto& pd = pairing(f.dom, g.dom);
    const auto& pc = pairing(f.cod, g.cod);
    std::vector<Idx> t(pd.prod->size());
    for (size_t s = 0; s < t.size(); ++s) {
      auto [i, j] = pd.unpair[s];
      t[s] = pc.pair(f(i), g(j));
    }
    return FinMap(pd.prod, pc.prod, std::move(t));
  }
  const auto& cd = copairing(f.dom, g.dom);
  const auto& cc = copairing(f.cod, g.cod);
  std::vector<Idx> t(cd.sum->size());
  for (size_t s = 0; s < t.size(); ++s) {
    auto [side, idx] = cd.case_of[s];
    t[s] = side == 0 ? cc.inl_at[size_t(f(idx))] : cc.inr_at[size_t(g(idx))];
  }
  return FinMap(cd.sum, cc.sum, std::move(t));
}

FinMap MonoidalBase::alpha(const Obj& X, const Obj& Y, const Obj& Z) const {
  Obj XY = tensor_obj(X, Y), YZ = tensor_obj(Y, Z);
  Obj L = tensor_obj(XY, Z), R = tensor_obj(X, YZ);
  std::vector<Idx> t(L->size());
  if (kind_ == BaseKind::cartesian) {
    const auto& pxy = pairing(X, Y);
    const auto& pyz = pairing(Y, Z);
    const auto& pl = pairing(XY, Z);
    const auto& pr = pairing(X, YZ);
    for (size_t s = 0; s < t.size(); ++s) {
      auto [xy, z] = pl.unpair[s];
      auto [x, y] = pxy.unpair[size_t(xy)];
      t[s] = pr.pair(x, pyz.pair(y, z));
    }
  } else {
    const auto& cxy = copairing(X, Y);
    const auto& cyz = copairing(Y, Z);
    const auto& cl = copairing(XY, Z);
    const auto& cr = copairing(X, YZ);
    for (size_t s = 0; s < t.size(); ++s) {
      auto [side, idx] = cl.case_of[s];
      if (side == 1) {
        t[s] = cr.inr_at[size_t(cyz.inr_at[size_t(idx)])];
      } else {
        auto [side2, idx2] = cxy.case_of[size_t(idx)];
        t[s] = side2 == 0 ? cr.inl_at[size_t(idx2)]
                          : cr.inr_at[size_t(cyz.inl_at[size_t(idx2)])];
      }
    }
  }
  return FinMap(L, R, std::move(t));
}

FinMap MonoidalBase::lambda(const Obj& X) const {
  Obj L = tensor_obj(unit_, X);
  std::vector<Idx> t(L->size());
  if (kind_ == BaseKind::cartesian) {
    const auto& p = pairing(unit_, X);
    for (size_t s = 0; s < t.size(); ++s) t[s] = p.unpair[s].second;
  } else {
    const auto& c = copairing(unit_, X);
    for (size_t s = 0; s < t.size(); ++s) t[s] = c.case_of[s].second;
  }
  return FinMap(L, X, std::move(t));
}

FinMap MonoidalBase::rho(const Obj& X) const {
  Obj L = tensor_obj(X, unit_);
  std::vector<Idx> t(L->size());
  if (kind_ == BaseKind::cartesian) {
    const auto& p = pairing(X, unit_);
    for (size_t s = 0; s < t.size(); ++s) t[s] = p.unpair[s].first;
  } else {
    const auto& c = copairing(X, unit_);
    for (size_t s = 0; s < t.size(); ++s) t[s] = c.case_of[s].second;
  }
  return FinMap(L, X, std::move(t));
}

FinMap MonoidalBase::sigma(const Obj& X, const Obj& Y) const {
  Obj L = tensor_obj(X, Y), R = tensor_obj(Y, X);
  std::vector<Idx> t(L->size());
  if (kind_ == BaseKind::cartesian) {
    const auto& pl = pairing(X, Y);
    const auto& pr = pairing(Y, X);
    for (size_t s = 0; s < t.size(); ++s) {
      auto [x, y] = pl.unpair[s];
      t[s] = pr.pair(y, x);
    }
  } else {
    const auto& cl = copairing(X, Y);
    const auto& cr = copairing(Y, X);
    for (size_t s = 0; s < t.size(); ++s) {
      auto [side, idx] = cl.case_of[s];
      t[s] = side == 0 ? cr.inr_at[size_t(idx)] : cr.inl_at[size_t(idx)];
    }
  }
  return FinMap(L, R, std::move(t));
}

BasePtr build_monoidal_base(BaseKind kind) { return std::make_shared<MonoidalBase>(kind); }

BasePtr build_monoidal_base(const std::string& kind) {
  if (kind == "cartesian") return build_monoidal_base(BaseKind::cartesian);
  if (kind == "cocartesian") return build_monoidal_base(BaseKind::cocartesian);
  throw PreconditionError("unknown base kind: " + kind);
}

UnionFind::UnionFind(size_t n) : parent(n) {
  for (size_t i = 0; i < n; ++i) parent[i] = Idx(i);
}

Idx UnionFind::find(Idx x) {
  Idx r = x;
  while (parent[size_t(r)] != r) r = parent[size_t(r)];
  while (parent[size_t(x)] != r) {
    Idx nx = parent[size_t(x)];
    parent[size_t(x)] = r;
    x = nx;
  }
  return r;
}

bool UnionFind::unite(Idx a, Idx b) {
  a = find(a);
  b = find(b);
  if (a == b) return false;
  if (a < b)
    parent[size_t(b)] = a;
  else
    parent[size_t(a)] = b;
  return true;
}

size_t UnionFind::n_classes() {
  size_t n = 0;
  for (size_t i = 0; i < parent.size(); ++i)
    if (find(Idx(i)) == Idx(i)) ++n;
  return n;
}

}  // namespace emt
