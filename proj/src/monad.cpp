#include "emt/monad.hpp"

#include <algorithm>

#include "emt/sigma.hpp"

namespace emt {

Monad::Monad(std::shared_ptr<const MonadKernel> kernel, BasePtr base, EngineConfig cfg)
    : kernel_(std::move(kernel)), base_(std::move(base)), cfg_(cfg) {
  name_ = kernel_->name();
  init_signature();
}

bool Monad::is_identity() const { return kernel_->name() == "identity"; }

bool Monad::fits_guard(uint64_t n) const {
  auto s = kernel_->t_size(n);
  return s && *s <= cfg_.guard;
}

void Monad::require_carrier(const Obj& X, const std::string& what) const {
  require_guard(X->size(), what);
  auto b = kernel_->label_bytes(*X);
  if (!b || *b > cfg_.label_byte_budget)
    throw ResourceError("carrier guard exceeded: labels of T(" + what + ") would need " +
                        (b ? std::to_string(*b) : std::string("overflow")) + " bytes");
}

void Monad::require_guard(uint64_t n, const std::string& what) const {
  auto s = kernel_->t_size(n);
  if (!s)
    throw ResourceError("carrier guard exceeded: |T(" + what + ")| overflows for |" + what +
                        "| = " + std::to_string(n));
  if (*s > cfg_.guard)
    throw ResourceError("carrier guard exceeded: |T(" + what + ")| = " + std::to_string(*s) +
                        " > " + std::to_string(cfg_.guard) + " for |" + what +
                        "| = " + std::to_string(n));
}

void Monad::init_signature() {
  auto names = kernel_->signature_names();
  sig_.reserve(names.size());
  for (size_t i = 0; i < names.size(); ++i) {
    SignatureOp op;
    op.name = names[i].first;
    op.arity = names[i].second;
    std::vector<std::string> lab;
    for (int a = 0; a < op.arity; ++a) lab.push_back(std::to_string(a));
    op.arity_obj = FinSet::make(std::move(lab));
    auto ta = app(op.arity_obj);
    op.elem = ta->of_code(kernel_->signature_elem_code(int(i)));
    sig_.push_back(std::move(op));
  }
}

TAppPtr Monad::app(const Obj& X) const {
  require_carrier(X, "X");
  uint64_t key = X->hash();
  {
    std::lock_guard<std::mutex> lk(mu_);
    auto it = apps_.find(key);
    if (it != apps_.end())
      for (auto& e : it->second)
        if (same_obj(e.X, X)) return e.app;
  }
  auto t = std::make_shared<TApp>();
  t->X = X;
  std::vector<std::string> labels;
  kernel_->build_elements(*X, labels, t->code_of);
  uint64_t total = *kernel_->t_size(X->size());
  t->idx_of_code.assign(size_t(total), -1);
  for (size_t i = 0; i < t->code_of.size(); ++i) t->idx_of_code[size_t(t->code_of[i])] = Idx(i);
  t->TX = FinSet::make_sorted(std::move(labels));
  {
    std::lock_guard<std::mutex> lk(mu_);
    auto& bucket = apps_[key];
    for (auto& e : bucket)
      if (same_obj(e.X, X)) return e.app;
    bucket.push_back({X, t});
    size_t sz = t->TX->size();
    lru_.push_back({key, sz});
    cached_elems_ += sz;
    // keep the label arrays of large cached carriers bounded; recomputation
    // is cheaper than thrashing
    while ((cached_elems_ > 4'000'000 || lru_.size() > 96) && lru_.size() > 1) {
      apps_.erase(lru_.front().first);
      cached_elems_ -= lru_.front().second;
      lru_.pop_front();
    }
  }
  return t;
}

FinMap Monad::T_map(const FinMap& f) const {
  auto td = app(f.dom), tc = app(f.cod);
  std::vector<Idx> t(td->TX->size());
  for (size_t i = 0; i < t.size(); ++i)
    t[i] = tc->of_code(kernel_->map_code(td->code_of[i], f.tab, tc->X->size()));
  return FinMap(td->TX, tc->TX, std::move(t));
}

Idx Monad::map_elem(const TApp& tdom, Idx t, std::span<const Idx> u, const TApp& tcod) const {
  return tcod.of_code(kernel_->map_code(tdom.code_of[size_t(t)], u, tcod.X->size()));
}

FinMap Monad::eta(const Obj& X) const {
  auto ta = app(X);
  std::vector<Idx> t(X->size());
  for (size_t i = 0; i < t.size(); ++i) t[i] = ta->of_code(kernel_->eta_code(Idx(i)));
  return FinMap(X, ta->TX, std::move(t));
}

FinMap Monad::mu(const Obj& X) const {
  auto ta = app(X);
  auto tta = app(ta->TX);
  std::vector<Idx> t(tta->TX->size());
  for (size_t i = 0; i < t.size(); ++i)
    t[i] = ta->of_code(kernel_->mu_code(tta->code_of[i], ta->code_of));
  return FinMap(tta->TX, ta->TX, std::move(t));
}

uint64_t Monad::cocartesian_kappa_code(const TApp& ta, const TApp& tb, Idx side, Idx elem,
                                       const CoproductIndexer& ci) const {
  const TApp& src = side == 0 ? ta : tb;
  const std::vector<Idx>& comp = side == 0 ? ci.inl_at : ci.inr_at;
  return kernel_->map_code(src.code_of[size_t(elem)], comp, ci.sum->size());
}

FinMap Monad::kappa(const Obj& X, const Obj& Y) const {
  auto ta = app(X), tb = app(Y);
  Obj XY = base_->tensor_obj(X, Y);
  auto tab = app(XY);
  Obj dom = base_->tensor_obj(ta->TX, tb->TX);
  std::vector<Idx> t(dom->size());
  if (base_->kind() == BaseKind::cartesian) {
    const auto& pd = base_->pairing(ta->TX, tb->TX);
    const auto& pi = base_->pairing(X, Y);
    for (size_t s = 0; s < t.size(); ++s) {
      auto [i, j] = pd.unpair[s];
      t[s] = tab->of_code(kernel_->kappa_code(ta->code_of[size_t(i)], tb->code_of[size_t(j)], pi));
    }
  } else {
    const auto& cd = base_->copairing(ta->TX, tb->TX);
    const auto& ci = base_->copairing(X, Y);
    for (size_t s = 0; s < t.size(); ++s) {
      auto [side, idx] = cd.case_of[s];
      t[s] = tab->of_code(cocartesian_kappa_code(*ta, *tb, Idx(side), idx, ci));
    }
  }
  return FinMap(dom, tab->TX, std::move(t));
}

// ---------------------------------------------------------------- law checks

namespace {

bool maps_equal(const FinMap& f, const FinMap& g, std::string& witness) {
  if (!same_obj(f.dom, g.dom) || !same_obj(f.cod, g.cod)) {
    witness = "domain/codomain mismatch";
    return false;
  }
  for (size_t i = 0; i < f.tab.size(); ++i)
    if (f.tab[i] != g.tab[i]) {
      witness = "at " + f.dom->label(Idx(i)) + ": " + f.cod->label(f.tab[i]) +
                " != " + g.cod->label(g.tab[i]);
      return false;
    }
  return true;
}

// run `body` if every listed carrier size fits the guard
void guarded_check(Report& rep, const Monad& T, const std::string& name,
                   std::initializer_list<uint64_t> base_sizes,
                   const std::function<void(Report&)>& body) {
  for (uint64_t n : base_sizes) {
    auto s = T.t_size(n);
    if (!s || *s > T.config().guard) {
      rep.skip(name, "carrier |T(X)| for |X|=" + std::to_string(n) + " exceeds guard");
      return;
    }
  }
  body(rep);
}

}  // namespace

Report check_monad_laws(const Monad& T, const Obj& X) {
  Report rep;
  uint64_t nx = X->size();
  auto tx = T.t_size(nx);
  if (!tx || *tx > T.config().guard) {
    rep.skip("monad laws at |X|=" + std::to_string(nx), "|T(X)| exceeds guard");
    return rep;
  }
  Obj TX = T.T(X);
  std::string w;

  guarded_check(rep, T, "mu.Teta = id @" + std::to_string(nx), {TX->size()}, [&](Report& r) {
    FinMap lhs = compose(T.mu(X), T.T_map(T.eta(X)));
    r.check("mu.Teta = id @" + std::to_string(nx), maps_equal(lhs, FinMap::identity(TX), w), w);
  });
  guarded_check(rep, T, "mu.etaT = id @" + std::to_string(nx), {TX->size()}, [&](Report& r) {
    FinMap lhs = compose(T.mu(X), T.eta(TX));
    r.check("mu.etaT = id @" + std::to_string(nx), maps_equal(lhs, FinMap::identity(TX), w), w);
  });
  // associativity needs T^3(X)
  auto ttx = T.t_size(TX->size());
  if (!ttx || *ttx > T.config().guard) {
    rep.skip("mu.Tmu = mu.muT @" + std::to_string(nx), "|TT(X)| exceeds guard");
    return rep;
  }
  Obj TTX = T.T(TX);
  guarded_check(rep, T, "mu.Tmu = mu.muT @" + std::to_string(nx), {TTX->size()}, [&](Report& r) {
    FinMap lhs = compose(T.mu(X), T.T_map(T.mu(X)));
    FinMap rhs = compose(T.mu(X), T.mu(TX));
    r.check("mu.Tmu = mu.muT @" + std::to_string(nx), maps_equal(lhs, rhs, w), w);
  });
  return rep;
}

Report check_monoidal_laws(const Monad& T, const Obj& X, const Obj& Y, const Obj& Z) {
  Report rep;
  const MonoidalBase& B = T.base();
  std::string sizes = std::to_string(X->size()) + "," + std::to_string(Y->size()) + "," +
                      std::to_string(Z->size());
  std::string w;

  Obj XY = B.tensor_obj(X, Y);
  Obj YZ = B.tensor_obj(Y, Z);
  Obj XY_Z = B.tensor_obj(XY, Z);

  // (1) associativity compatibility
  guarded_check(rep, T, "cond1 @" + sizes,
                {X->size(), Y->size(), Z->size(), XY->size(), YZ->size(), XY_Z->size()},
                [&](Report& r) {
                  Obj TX = T.T(X), TY = T.T(Y), TZ = T.T(Z);
                  FinMap lhs = compose(
                      T.T_map(B.alpha(X, Y, Z)),
                      compose(T.kappa(XY, Z), B.tensor_map(T.kappa(X, Y), FinMap::identity(TZ))));
                  FinMap rhs = compose(
                      T.kappa(X, YZ),
                      compose(B.tensor_map(FinMap::identity(TX), T.kappa(Y, Z)), B.alpha(TX, TY, TZ)));
                  r.check("cond1 @" + sizes, maps_equal(lhs, rhs, w), w);
                });

  // (2) unit compatibility
  Obj E = B.unit();
  Obj EX = B.tensor_obj(E, X);
  Obj XE = B.tensor_obj(X, E);
  guarded_check(rep, T, "cond2 @" + sizes, {X->size(), E->size(), EX->size(), XE->size()},
                [&](Report& r) {
                  Obj TX = T.T(X);
                  FinMap l1 = compose(T.T_map(B.lambda(X)),
                                      compose(T.kappa(E, X),
                                              B.tensor_map(T.eta(E), FinMap::identity(TX))));
                  r.check("cond2.lambda @" + sizes, maps_equal(l1, B.lambda(TX), w), w);
                  FinMap r1 = compose(T.T_map(B.rho(X)),
                                      compose(T.kappa(X, E),
                                              B.tensor_map(FinMap::identity(TX), T.eta(E))));
                  r.check("cond2.rho @" + sizes, maps_equal(r1, B.rho(TX), w), w);
                });

  // (3) multiplication compatibility; needs T(TX⊗TY) and TT(X⊗Y)
  {
    auto tx = T.t_size(X->size()), ty = T.t_size(Y->size()), txy = T.t_size(XY->size());
    bool fits = tx && ty && txy && *txy <= T.config().guard;
    uint64_t dsz = 0;
    if (fits) {
      Obj TX = T.T(X), TY = T.T(Y);
      dsz = B.kind() == BaseKind::cartesian ? TX->size() * TY->size() : TX->size() + TY->size();
      auto td = T.t_size(dsz);
      auto tt = T.t_size(*txy);
      fits = td && *td <= T.config().guard && tt && *tt <= T.config().guard;
    }
    if (!fits) {
      rep.skip("cond3 @" + sizes, "|T(TX⊗TY)| or |TT(X⊗Y)| exceeds guard");
    } else {
      Obj TX = T.T(X), TY = T.T(Y);
      FinMap lhs = compose(T.mu(XY), compose(T.T_map(T.kappa(X, Y)), T.kappa(TX, TY)));
      FinMap rhs = compose(T.kappa(X, Y), B.tensor_map(T.mu(X), T.mu(Y)));
      rep.check("cond3 @" + sizes, maps_equal(lhs, rhs, w), w);
    }
  }

  // (4) eta compatibility
  guarded_check(rep, T, "cond4 @" + sizes, {X->size(), Y->size(), XY->size()}, [&](Report& r) {
    FinMap lhs = compose(T.kappa(X, Y), B.tensor_map(T.eta(X), T.eta(Y)));
    r.check("cond4 @" + sizes, maps_equal(lhs, T.eta(XY), w), w);
  });

  // (5) symmetry
  guarded_check(rep, T, "cond5 @" + sizes, {X->size(), Y->size(), XY->size()}, [&](Report& r) {
    Obj TX = T.T(X), TY = T.T(Y);
    FinMap lhs = compose(T.kappa(Y, X), B.sigma(TX, TY));
    FinMap rhs = compose(T.T_map(B.sigma(X, Y)), T.kappa(X, Y));
    r.check("cond5 @" + sizes, maps_equal(lhs, rhs, w), w);
  });

  return rep;
}

Report check_preserves_reflexive_coeq(const Monad& T, const Obj& X, const FinMap& f,
                                      const FinMap& g, bool require_reflexive) {
  Report rep;
  if (!same_obj(f.dom, g.dom) || !same_obj(f.cod, g.cod))
    throw PreconditionError("parallel pair expected");
  Obj Z = f.dom, Y = f.cod;

  // reflexive = a common section exists, equivalently every y has z with
  // f(z) = g(z) = y
  bool reflexive = true;
  {
    std::vector<char> hit(Y->size(), 0);
    for (size_t z = 0; z < Z->size(); ++z)
      if (f.tab[z] == g.tab[z]) hit[size_t(f.tab[z])] = 1;
    for (char h : hit) reflexive &= (h != 0);
  }
  if (require_reflexive && !reflexive)
    throw PreconditionError("pair is not reflexive (no common section)");
  rep.check("pair reflexive", reflexive || !require_reflexive,
            reflexive ? "" : "no common section");

  // set coequalizer of (f,g)
  UnionFind uf(Y->size());
  for (size_t z = 0; z < Z->size(); ++z) uf.unite(f.tab[z], g.tab[z]);
  std::vector<Idx> root(Y->size());
  for (size_t y = 0; y < Y->size(); ++y) root[y] = uf.find(Idx(y));

  auto coeq_map = [&](const Obj& W, const std::vector<Idx>& roots) {
    std::vector<std::string> labels;
    std::vector<Idx> remap(W->size(), -1);
    for (size_t i = 0; i < W->size(); ++i)
      if (roots[i] == Idx(i)) labels.push_back(W->label(Idx(i)));
    Obj Q = FinSet::make(std::move(labels));
    std::vector<Idx> tab(W->size());
    for (size_t i = 0; i < W->size(); ++i) tab[i] = Q->index_of(W->label(roots[i]));
    return FinMap(W, Q, std::move(tab));
  };
  FinMap q = coeq_map(Y, root);

  // image diagram under T(X⊗-)
  auto F_obj_size = [&](const Obj& W) {
    return T.base().kind() == BaseKind::cartesian ? X->size() * W->size()
                                                  : X->size() + W->size();
  };
  for (const Obj* W : {&Z, &Y, &q.cod}) {
    auto s = T.t_size(F_obj_size(*W));
    if (!s || *s > T.config().guard) {
      rep.skip("T(X⊗-) preserves coequalizer", "image carrier exceeds guard");
      return rep;
    }
  }
  auto F = [&](const FinMap& u) {
    return T.T_map(T.base().tensor_map(FinMap::identity(X), u));
  };
  FinMap Ff = F(f), Fg = F(g), Fq = F(q);

  bool surj = Fq.is_surjection();
  rep.check("image map surjective", surj, surj ? "" : "T(X⊗q) not onto");

  UnionFind uf2(Fq.dom->size());
  for (size_t z = 0; z < Ff.dom->size(); ++z) uf2.unite(Ff.tab[z], Fg.tab[z]);
  // kernel partition of Fq must equal coequalizer partition of (Ff, Fg)
  std::string w;
  bool same_part = true;
  std::unordered_map<Idx, Idx> cls_of_root;
  for (size_t i = 0; i < Fq.dom->size() && same_part; ++i) {
    Idx r = uf2.find(Idx(i));
    auto it = cls_of_root.find(r);
    if (it == cls_of_root.end())
      cls_of_root.emplace(r, Fq.tab[i]);
    else if (it->second != Fq.tab[i]) {
      same_part = false;
      w = "elements " + Fq.dom->label(Idx(i)) + " split from its class";
    }
  }
  if (same_part) {
    std::unordered_map<Idx, Idx> root_of_cls;
    for (size_t i = 0; i < Fq.dom->size() && same_part; ++i) {
      Idx r = uf2.find(Idx(i));
      auto it = root_of_cls.find(Fq.tab[i]);
      if (it == root_of_cls.end())
        root_of_cls.emplace(Fq.tab[i], r);
      else if (it->second != r) {
        same_part = false;
        w = "image of " + Fq.dom->label(Idx(i)) + " conflates distinct classes";
      }
    }
  }
  rep.check("image diagram is a coequalizer", same_part && surj, w);
  return rep;
}

// ------------------------------------------------------------------- Kleisli

FinMap kleisli_tensor(const Monad& T, const Obj& Z, const Obj& W, const FinMap& f,
                      const FinMap& g) {
  if (!same_obj(f.cod, T.T(Z)) || !same_obj(g.cod, T.T(W)))
    throw PreconditionError("kleisli_tensor: codomains are not T(Z), T(W)");
  return compose(T.kappa(Z, W), T.base().tensor_map(f, g));
}

FinMap kleisli_kappa_roundtrip(const Monad& T, const Obj& X, const Obj& Y) {
  Obj TX = T.T(X), TY = T.T(Y);
  return kleisli_tensor(T, X, Y, FinMap::identity(TX), FinMap::identity(TY));
}

MonadMorphism identity_monad_morphism(MonadPtr T) {
  MonadMorphism m;
  m.source = T;
  m.target = T;
  m.component = [T](const Obj& X) { return FinMap::identity(T->T(X)); };
  return m;
}

MonadMorphism unit_monad_morphism(MonadPtr id_monad, MonadPtr T) {
  if (!id_monad->is_identity()) throw PreconditionError("source must be the identity monad");
  MonadMorphism m;
  m.source = id_monad;
  m.target = T;
  m.component = [T](const Obj& X) { return T->eta(X); };
  return m;
}

Report check_monad_morphism(const MonadMorphism& phi, const std::vector<Obj>& carriers,
                            bool monoidal) {
  Report rep;
  const Monad& S = *phi.source;
  const Monad& T = *phi.target;
  if (S.base().kind() != T.base().kind())
    throw PreconditionError("monad morphism requires a shared base");
  std::string w;

  for (const Obj& X : carriers) {
    std::string at = " @" + std::to_string(X->size());
    FinMap pX = phi.at(X);
    if (!same_obj(pX.dom, S.T(X)) || !same_obj(pX.cod, T.T(X))) {
      rep.fail("component shape" + at, "φ_X is not S(X) -> T(X)");
      continue;
    }
    rep.check("phi.etaS = etaT" + at, maps_equal(compose(pX, S.eta(X)), T.eta(X), w), w);

    auto ssx = S.t_size(S.T(X)->size());
    auto stx = S.t_size(T.T(X)->size());
    auto ttx = T.t_size(T.T(X)->size());
    if (ssx && stx && ttx && *ssx <= S.config().guard && *stx <= S.config().guard &&
        *ttx <= T.config().guard) {
      FinMap lhs = compose(pX, S.mu(X));
      FinMap rhs = compose(T.mu(X), compose(phi.at(T.T(X)), S.T_map(pX)));
      rep.check("phi.nu = mu.phiT.Sphi" + at, maps_equal(lhs, rhs, w), w);
    } else {
      rep.skip("phi.nu = mu.phiT.Sphi" + at, "doubled carrier exceeds guard");
    }
  }

  // naturality on all maps between the first two carriers (or within one)
  if (!carriers.empty()) {
    Obj A = carriers.front();
    Obj Bc = carriers.size() > 1 ? carriers[1] : carriers.front();
    uint64_t n_maps = 1;
    bool small = true;
    for (size_t i = 0; i < A->size(); ++i) {
      n_maps *= Bc->size();
      if (n_maps > 512) {
        small = false;
        break;
      }
    }
    if (small && !A->labels().empty() && !Bc->labels().empty()) {
      std::vector<Idx> u(A->size(), 0);
      bool all_ok = true;
      std::string wt;
      while (true) {
        FinMap um(A, Bc, u);
        FinMap lhs = compose(phi.at(Bc), S.T_map(um));
        FinMap rhs = compose(T.T_map(um), phi.at(A));
        if (!maps_equal(lhs, rhs, wt)) {
          all_ok = false;
          break;
        }
        size_t i = 0;
        for (; i < u.size(); ++i) {
          if (++u[i] < Idx(Bc->size())) break;
          u[i] = 0;
        }
        if (i == u.size()) break;
      }
      rep.check("naturality", all_ok, wt);
    }
  }

  if (monoidal) {
    for (const Obj& X : carriers)
      for (const Obj& Y : carriers) {
        std::string at = " @" + std::to_string(X->size()) + "," + std::to_string(Y->size());
        Obj XY = S.base().tensor_obj(X, Y);
        auto txy = T.t_size(XY->size());
        if (!txy || *txy > T.config().guard) {
          rep.skip("monoidal square" + at, "|T(X⊗Y)| exceeds guard");
          continue;
        }
        FinMap lhs = compose(phi.at(XY), S.kappa(X, Y));
        FinMap rhs = compose(T.kappa(X, Y), S.base().tensor_map(phi.at(X), phi.at(Y)));
        rep.check("monoidal square" + at, maps_equal(lhs, rhs, w), w);
      }
  }
  return rep;
}

KleisliFunctor kleisli_functor(const MonadMorphism& phi) { return KleisliFunctor{phi}; }

FinMap kleisli_apply(const KleisliFunctor& L, const FinMap& f, const Obj& Y) {
  if (!same_obj(f.cod, L.phi.source->T(Y)))
    throw PreconditionError("kleisli_apply: codomain is not S(Y)");
  return compose(L.phi.at(Y), f);
}

}  // namespace emt
