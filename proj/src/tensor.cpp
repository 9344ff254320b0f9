#include "emt/tensor.hpp"

#include <algorithm>

namespace emt {

namespace {

std::vector<std::pair<Idx, Idx>> tensor_pairs(const Monad& T, const Algebra& A,
                                              const Algebra& B, bool linton) {
  const MonoidalBase& base = T.base();
  Obj G = base.tensor_obj(A.carrier, B.carrier);
  FinMap kap = T.kappa(A.carrier, B.carrier);
  std::vector<std::pair<Idx, Idx>> pairs;
  if (!linton) {
    // (κ(w), η((a⊗b)(w))) over w ∈ TA⊗TB
    FinMap rhs = compose(T.eta(G), base.tensor_map(A.structure, B.structure));
    pairs.reserve(kap.tab.size());
    for (size_t w = 0; w < kap.tab.size(); ++w) pairs.emplace_back(kap.tab[w], rhs.tab[w]);
  } else {
    // (κ((η·a)(s), t), κ(s, (η·b)(t)))
    Obj TA = T.T(A.carrier), TB = T.T(B.carrier);
    FinMap l = compose(kap, base.tensor_map(compose(T.eta(A.carrier), A.structure),
                                            FinMap::identity(TB)));
    FinMap r = compose(kap, base.tensor_map(FinMap::identity(TA),
                                            compose(T.eta(B.carrier), B.structure)));
    pairs.reserve(l.tab.size());
    for (size_t w = 0; w < l.tab.size(); ++w) pairs.emplace_back(l.tab[w], r.tab[w]);
  }
  return pairs;
}

TensorResult tensor_impl(const Monad& T, const Algebra& A, const Algebra& B, bool linton) {
  const MonoidalBase& base = T.base();
  Obj G = base.tensor_obj(A.carrier, B.carrier);
  T.require_guard(G->size(), "A⊗B");

  TensorResult out;
  out.left = A;
  out.right = B;
  out.gens = G;
  out.pairs = tensor_pairs(T, A, B, linton);

  out.congruence = congruence_closure_free(T, G, out.pairs);
  QuotientResult qr = quotient_algebra(T, out.congruence);
  out.product = std::move(qr.algebra);
  out.q = std::move(qr.projection);

  out.section.assign(out.product.carrier->size(), -1);
  for (size_t i = 0; i < out.q.tab.size(); ++i)
    if (out.section[size_t(out.q.tab[i])] < 0) out.section[size_t(out.q.tab[i])] = Idx(i);

  out.embed = compose(out.q, T.eta(G));

  for (auto& [x, y] : out.pairs)
    if (out.q.tab[size_t(x)] != out.q.tab[size_t(y)])
      throw EngineInvariantError("tensor projection does not coequalize its pair");

  Report alg = check_algebra(T, out.product);
  if (!alg.ok())
    throw EngineInvariantError("tensor product is not an algebra: " +
                               alg.first_failure()->name);
  return out;
}

}  // namespace

TensorResult tensor_product(const Monad& T, const Algebra& A, const Algebra& B) {
  return tensor_impl(T, A, B, false);
}

TensorResult tensor_product_alt(const Monad& T, const Algebra& A, const Algebra& B) {
  return tensor_impl(T, A, B, true);
}

FinMap tensor_of_homs(const Monad& T, const TensorResult& tAB, const TensorResult& tA2B2,
                      const FinMap& g, const FinMap& h) {
  if (!is_algebra_hom(T, tAB.left, tA2B2.left, g) ||
      !is_algebra_hom(T, tAB.right, tA2B2.right, h))
    throw PreconditionError("tensor_of_homs: g, h must be homomorphisms");
  FinMap gh = T.base().tensor_map(g, h);
  FinMap tgh = T.T_map(gh);
  std::vector<Idx> tab(tAB.product.carrier->size());
  for (size_t x = 0; x < tab.size(); ++x)
    tab[x] = tA2B2.q.tab[size_t(tgh.tab[size_t(tAB.section[x])])];
  FinMap out(tAB.product.carrier, tA2B2.product.carrier, std::move(tab));
  // defining square over all of T(A⊗B)
  for (size_t t = 0; t < tAB.q.tab.size(); ++t)
    if (out.tab[size_t(tAB.q.tab[t])] != tA2B2.q.tab[size_t(tgh.tab[t])])
      throw EngineInvariantError("g⊠h fails its defining square");
  return out;
}

FinMap classify_bimorphism(const Monad& T, const TensorResult& tAB, const Algebra& C,
                           const FinMap& f) {
  BimCheck pre = is_bimorphism(T, {tAB.left, tAB.right, C, f});
  if (!pre.ok)
    throw PreconditionError("classify_bimorphism: not a bimorphism: " + pre.witness);
  FinMap tf = T.T_map(f);
  std::vector<Idx> tab(tAB.product.carrier->size());
  for (size_t x = 0; x < tab.size(); ++x)
    tab[x] = C.structure.tab[size_t(tf.tab[size_t(tAB.section[x])])];
  FinMap fbar(tAB.product.carrier, C.carrier, std::move(tab));
  for (size_t t = 0; t < tAB.q.tab.size(); ++t)
    if (fbar.tab[size_t(tAB.q.tab[t])] != C.structure.tab[size_t(tf.tab[t])])
      throw EngineInvariantError("classified map fails f̄·q = c·Tf");
  if (!is_algebra_hom(T, tAB.product, C, fbar))
    throw EngineInvariantError("classified map is not a homomorphism");
  return fbar;
}

FinMap bimorphism_of_hom(const Monad& T, const TensorResult& tAB, const Algebra& C,
                         const FinMap& g) {
  if (!is_algebra_hom(T, tAB.product, C, g))
    throw PreconditionError("bimorphism_of_hom: g must be a homomorphism");
  FinMap f = compose(g, tAB.embed);
  BimCheck post = is_bimorphism(T, {tAB.left, tAB.right, C, f});
  if (!post.ok)
    throw EngineInvariantError("g·q·η is not a bimorphism: " + post.witness);
  return f;
}

Report check_free_tensor_identification(const Monad& T, const Obj& X, const Obj& Y) {
  Report rep;
  const MonoidalBase& base = T.base();
  Algebra FX = free_algebra(T, X);
  Algebra FY = free_algebra(T, Y);
  Obj XY = base.tensor_obj(X, Y);
  Algebra FXY = free_algebra(T, XY);

  TensorResult tens = tensor_product(T, FX, FY);

  // μ·Tκ : T(TX⊗TY) -> T(X⊗Y)
  FinMap mtk = compose(T.mu(XY), T.T_map(T.kappa(X, Y)));

  // it coequalizes the TensorFree pair (checked on the free generators)
  {
    Obj TX = FX.carrier, TY = FY.carrier;
    FinMap kap2 = T.kappa(TX, TY);
    FinMap rhs = compose(T.eta(base.tensor_obj(TX, TY)),
                         base.tensor_map(T.mu(X), T.mu(Y)));
    bool ok = true;
    std::string w;
    for (size_t wi = 0; wi < kap2.tab.size() && ok; ++wi)
      if (mtk.tab[size_t(kap2.tab[wi])] != mtk.tab[size_t(rhs.tab[wi])]) {
        ok = false;
        w = "generator " + kap2.dom->label(Idx(wi));
      }
    rep.check("μ·Tκ coequalizes (μ·Tκ, T(μ⊗μ))", ok, w);
  }

  // explicit isomorphism A⊠B -> T(X⊗Y) carrying q to μ·Tκ
  std::vector<Idx> theta_tab(tens.product.carrier->size());
  for (size_t c = 0; c < theta_tab.size(); ++c)
    theta_tab[c] = mtk.tab[size_t(tens.section[c])];
  FinMap theta(tens.product.carrier, FXY.carrier, theta_tab);

  bool wd = true;
  std::string w;
  for (size_t t = 0; t < tens.q.tab.size() && wd; ++t)
    if (theta.tab[size_t(tens.q.tab[t])] != mtk.tab[t]) {
      wd = false;
      w = "at " + tens.q.dom->label(Idx(t));
    }
  rep.check("θ·q = μ·Tκ", wd, w);
  rep.check("θ bijective", theta.is_bijection(),
            "sizes " + std::to_string(theta.dom->size()) + " vs " +
                std::to_string(theta.cod->size()));
  rep.check("θ is a homomorphism", is_algebra_hom(T, tens.product, FXY, theta), "");
  return rep;
}

TensorPtr TensorCache::get(const Monad& T, const Algebra& A, const Algebra& B) {
  uint64_t key = A.key() * 0x9e3779b97f4a7c15ull ^ B.key();
  {
    std::lock_guard<std::mutex> lk(mu_);
    auto it = map_.find(key);
    if (it != map_.end())
      for (auto& e : it->second)
        if (same_algebra(e->left, A) && same_algebra(e->right, B)) return e;
  }
  auto r = std::make_shared<TensorResult>(tensor_product(T, A, B));
  std::lock_guard<std::mutex> lk(mu_);
  auto& bucket = map_[key];
  for (auto& e : bucket)
    if (same_algebra(e->left, A) && same_algebra(e->right, B)) return e;
  bucket.push_back(r);
  size_t sz = r->q.tab.size();
  lru_.push_back({key, sz});
  cached_elems_ += sz;
  while ((cached_elems_ > 4'000'000 || lru_.size() > 160) && lru_.size() > 1) {
    map_.erase(lru_.front().first);
    cached_elems_ -= lru_.front().second;
    lru_.pop_front();
  }
  return r;
}

}  // namespace emt
