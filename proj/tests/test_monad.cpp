#include "doctest.h"
#include "emt/monad.hpp"

using namespace emt;

namespace {

Obj mkset(int n, const std::string& prefix = "x") {
  std::vector<std::string> v;
  for (int i = 0; i < n; ++i) v.push_back(prefix + std::to_string(i));
  return FinSet::make(v);
}

}  // namespace

TEST_CASE("powerset carrier, eta, mu, kappa") {
  auto base = build_monoidal_base(BaseKind::cartesian);
  auto P = instantiate_monad("powerset", base);
  Obj X = mkset(2);
  Obj TX = P->T(X);
  CHECK(TX->size() == 4);

  FinMap eta = P->eta(X);
  CHECK(TX->label(eta(X->index_of("x0"))) == "{x0}");

  // kappa on singletons: {a}×{b} -> {(a,b)}
  Obj A = FinSet::make({"a"}), B = FinSet::make({"b"});
  FinMap kap = P->kappa(A, B);
  Obj TA = P->T(A), TB = P->T(B);
  const auto& pd = base->pairing(TA, TB);
  Idx w = pd.pair(TA->index_of("{a}"), TB->index_of("{b}"));
  CHECK(kap.cod->label(kap(w)) == "{(a,b)}");
  // and on the empty side
  Idx w0 = pd.pair(TA->index_of("{}"), TB->index_of("{b}"));
  CHECK(kap.cod->label(kap(w0)) == "{}");
}

TEST_CASE("vector_space(2) basics") {
  auto base = build_monoidal_base(BaseKind::cartesian);
  auto V = instantiate_monad("vector_space", base, 2);
  Obj X = mkset(2);
  CHECK(V->T(X)->size() == 4);
  FinMap eta = V->eta(X);
  Obj TX = V->T(X);
  CHECK(TX->label(eta(0)) == "[x0:1]");
  CHECK_THROWS_AS(instantiate_monad("vector_space", base, 4), PreconditionError);
}

TEST_CASE("monad laws for all builtins") {
  auto cart = build_monoidal_base(BaseKind::cartesian);
  auto cocart = build_monoidal_base(BaseKind::cocartesian);
  std::vector<MonadPtr> monads = {
      instantiate_monad("identity", cart), instantiate_monad("powerset", cart),
      instantiate_monad("powerset", cocart), instantiate_monad("vector_space", cart, 2),
      instantiate_monad("vector_space", cart, 3)};
  for (auto& T : monads)
    for (int n = 0; n <= 3; ++n) {
      Report r = check_monad_laws(*T, mkset(n));
      INFO(T->name(), " at |X|=", n);
      CHECK(r.ok());
    }
}

TEST_CASE("corrupted mu fails with a witness") {
  auto base = build_monoidal_base(BaseKind::cartesian);
  auto P = instantiate_monad("powerset", base);
  Obj X = mkset(2);
  Obj TX = P->T(X);
  FinMap mu = P->mu(X);
  // monads are immutable; simulate the corruption by checking the law by hand
  FinMap teta = P->T_map(P->eta(X));
  FinMap bad = mu;
  Idx hit = teta.tab[1];
  bad.tab[size_t(hit)] = (bad.tab[size_t(hit)] + 1) % Idx(TX->size());
  FinMap lhs = compose(bad, teta);
  CHECK_FALSE(lhs.is_identity());
}

TEST_CASE("monoidal conditions for all builtins at small sizes") {
  auto cart = build_monoidal_base(BaseKind::cartesian);
  auto cocart = build_monoidal_base(BaseKind::cocartesian);
  std::vector<MonadPtr> monads = {
      instantiate_monad("identity", cart), instantiate_monad("powerset", cart),
      instantiate_monad("powerset", cocart), instantiate_monad("vector_space", cart, 2)};
  for (auto& T : monads) {
    Report r = check_monoidal_laws(*T, mkset(2, "a"), mkset(2, "b"), mkset(1, "c"));
    INFO(T->name());
    CHECK(r.ok());
    CHECK(r.n_ran() >= 5);
  }
}

TEST_CASE("kleisli tensor: pure maps and powerset constants") {
  auto base = build_monoidal_base(BaseKind::cartesian);
  auto P = instantiate_monad("powerset", base);
  Obj X = mkset(2), Y = mkset(2, "y"), Z = mkset(2, "z"), W = mkset(1, "w");

  // pure maps: η·u ⊗_T η·v = η·(u⊗v) by condition (4)
  FinMap u(X, Z, {0, 1});
  FinMap v(Y, W, {0, 0});
  FinMap f = compose(P->eta(Z), u), g = compose(P->eta(W), v);
  FinMap kt = kleisli_tensor(*P, Z, W, f, g);
  FinMap pure = compose(P->eta(base->tensor_obj(Z, W)), base->tensor_map(u, v));
  CHECK(kt == pure);

  // constants: f ≡ {z0,z1}, g ≡ {w0} tensors to the product set
  Obj TZ = P->T(Z), TW = P->T(W);
  FinMap cf(X, TZ, std::vector<Idx>(X->size(), TZ->index_of("{z0,z1}")));
  FinMap cg(Y, TW, std::vector<Idx>(Y->size(), TW->index_of("{w0}")));
  FinMap kt2 = kleisli_tensor(*P, Z, W, cf, cg);
  Obj TZW = P->T(base->tensor_obj(Z, W));
  for (Idx val : kt2.tab) CHECK(TZW->label(val) == "{(z0,w0),(z1,w0)}");

  // roundtrip: extracting kappa back
  CHECK(kleisli_kappa_roundtrip(*P, X, Y) == P->kappa(X, Y));
  auto V = instantiate_monad("vector_space", base, 2);
  CHECK(kleisli_kappa_roundtrip(*V, X, Y) == V->kappa(X, Y));
}

TEST_CASE("monad morphisms: unit of powerset is monoidal") {
  auto base = build_monoidal_base(BaseKind::cartesian);
  auto I = instantiate_monad("identity", base);
  auto P = instantiate_monad("powerset", base);
  MonadMorphism eta = unit_monad_morphism(I, P);
  Report r = check_monad_morphism(eta, {mkset(1), mkset(2, "b")}, true);
  CHECK(r.ok());

  MonadMorphism idT = identity_monad_morphism(P);
  CHECK(check_monad_morphism(idT, {mkset(2)}, true).ok());

  // corrupted component fails
  MonadMorphism bad = eta;
  bad.component = [P](const Obj& X) {
    FinMap e = P->eta(X);
    if (X->size() >= 2) std::swap(e.tab[0], e.tab[1]);
    return e;
  };
  CHECK_FALSE(check_monad_morphism(bad, {mkset(2)}, true).ok());
}

TEST_CASE("kleisli functor of a morphism") {
  auto base = build_monoidal_base(BaseKind::cartesian);
  auto I = instantiate_monad("identity", base);
  auto P = instantiate_monad("powerset", base);
  MonadMorphism eta = unit_monad_morphism(I, P);
  KleisliFunctor L = kleisli_functor(eta);

  Obj X = mkset(2), Y = mkset(2, "y");
  FinMap f(X, I->T(Y), {1, 0});  // Id-Kleisli map
  FinMap Lf = kleisli_apply(L, f, Y);
  Obj TY = P->T(Y);
  CHECK(TY->label(Lf(0)) == "{y1}");
  CHECK(TY->label(Lf(1)) == "{y0}");

  // roundtrip: φ_X = L(1_{SX})
  FinMap back = kleisli_apply(L, FinMap::identity(I->T(X)), X);
  CHECK(back == eta.at(X));

  // strictness: L(f ⊗_S g) = L(f) ⊗_T L(g)
  FinMap g(Y, I->T(X), {0, 0});
  FinMap lhs = kleisli_apply(L, kleisli_tensor(*I, Y, X, f, g), base->tensor_obj(Y, X));
  FinMap rhs = kleisli_tensor(*P, Y, X, kleisli_apply(L, f, Y), kleisli_apply(L, g, X));
  CHECK(lhs == rhs);
}

TEST_CASE("T(X⊗-) preserves reflexive coequalizers (powerset)") {
  auto base = build_monoidal_base(BaseKind::cartesian);
  auto P = instantiate_monad("powerset", base);
  Obj X = FinSet::make({kUnitLabel});

  // a reflexive pair collapsing a 3-set to a 2-set:
  // Z = Y + one extra pair identified
  Obj Y = mkset(3, "y");
  Obj Z = mkset(4, "z");
  FinMap f(Z, Y, {0, 1, 2, 0});
  FinMap g(Z, Y, {0, 1, 2, 1});  // identifies y0 ~ y1; z0..z2 give the common section
  Report r = check_preserves_reflexive_coeq(*P, X, f, g);
  CHECK(r.ok());

  // identity monad: always preserved
  auto I = instantiate_monad("identity", base);
  CHECK(check_preserves_reflexive_coeq(*I, X, f, g).ok());

  // non-reflexive fork where powerset preservation fails
  Obj Z2 = mkset(1, "w");
  Obj Y2 = mkset(2, "v");
  FinMap f2(Z2, Y2, {0});
  FinMap g2(Z2, Y2, {1});  // v0 ~ v1, no common section
  CHECK_THROWS_AS(check_preserves_reflexive_coeq(*P, X, f2, g2), PreconditionError);
  Report r2 = check_preserves_reflexive_coeq(*P, X, f2, g2, false);
  CHECK_FALSE(r2.ok());
}
