#include "emt/coherence.hpp"

#include <algorithm>

namespace emt {

namespace {

// the unique map with out∘u = F for surjective u; fails if F is not
// constant on the fibers of u
FinMap induce_along(const FinMap& u, const FinMap& F, Report& rep, const std::string& what) {
  if (!same_obj(u.dom, F.dom)) throw PreconditionError("induce_along: domain mismatch");
  std::vector<Idx> tab(u.cod->size(), -1);
  bool ok = true;
  std::string w;
  for (size_t t = 0; t < u.tab.size(); ++t) {
    Idx cls = u.tab[t];
    if (tab[size_t(cls)] < 0)
      tab[size_t(cls)] = F.tab[t];
    else if (tab[size_t(cls)] != F.tab[t]) {
      ok = false;
      w = "fiber of " + u.cod->label(cls) + " is split";
      break;
    }
  }
  if (ok)
    for (Idx v : tab)
      if (v < 0) {
        ok = false;
        w = "inducing surjection misses a class";
        break;
      }
  rep.check(what + ": well-defined over all preimages", ok, w);
  if (!ok) throw EngineInvariantError("induced cell ill-defined: " + what + " (" + w + ")");
  return FinMap(u.cod, F.cod, std::move(tab));
}

// q_{A⊠B,C} ∘ T((q·η)⊗1) : T((A⊗B)⊗C) -> (A⊠B)⊠C
FinMap iterated_surjection(const Monad& T, const TensorResult& tAB, const TensorResult& tAB_C) {
  Obj C = tAB_C.right.carrier;
  FinMap e1 = T.base().tensor_map(tAB.embed, FinMap::identity(C));
  return compose(tAB_C.q, T.T_map(e1));
}

FinMap iterated_surjection_right(const Monad& T, const TensorResult& tBC,
                                 const TensorResult& tA_BC) {
  Obj A = tA_BC.left.carrier;
  FinMap e2 = T.base().tensor_map(FinMap::identity(A), tBC.embed);
  return compose(tA_BC.q, T.T_map(e2));
}

}  // namespace

AssociatorResult associator(const Monad& T, TensorCache& cache, const Algebra& A,
                            const Algebra& B, const Algebra& C) {
  AssociatorResult out;
  out.AB = cache.get(T, A, B);
  out.BC = cache.get(T, B, C);
  out.AB_C = cache.get(T, out.AB->product, C);
  out.A_BC = cache.get(T, A, out.BC->product);
  out.cell.kind = "alpha";

  FinMap u = iterated_surjection(T, *out.AB, *out.AB_C);
  out.cell.derivation.check("left presentation surjective", u.is_surjection(), "");

  FinMap alpha = T.base().alpha(A.carrier, B.carrier, C.carrier);
  FinMap F = compose(iterated_surjection_right(T, *out.BC, *out.A_BC), T.T_map(alpha));

  out.cell.map = induce_along(u, F, out.cell.derivation, "alpha");
  out.cell.derivation.check("alpha bijective", out.cell.map.is_bijection(), "");
  out.cell.derivation.check(
      "alpha homomorphic",
      is_algebra_hom(T, out.AB_C->product, out.A_BC->product, out.cell.map), "");
  if (!out.cell.derivation.ok())
    throw EngineInvariantError("associator construction failed: " +
                               out.cell.derivation.first_failure()->name);
  return out;
}

UnitorResult left_unitor(const Monad& T, TensorCache& cache, const Algebra& A) {
  const MonoidalBase& base = T.base();
  Obj E = base.unit();
  Algebra TE = free_algebra(T, E);
  UnitorResult out;
  out.tensor = cache.get(T, TE, A);
  out.cell.kind = "lambda";

  // the bimorphism a·Tλ·κ·(1⊗η) : TE⊗A -> A
  FinMap f = compose(
      A.structure,
      compose(T.T_map(base.lambda(A.carrier)),
              compose(T.kappa(E, A.carrier),
                      base.tensor_map(FinMap::identity(TE.carrier), T.eta(A.carrier)))));
  out.cell.map = classify_bimorphism(T, *out.tensor, A, f);
  out.cell.derivation.pass("lambda classified from its bimorphism");

  // inverse l·η with l = q·T(η_E⊗1)·Tλ⁻¹
  FinMap l = compose(out.tensor->q,
                     compose(T.T_map(base.tensor_map(T.eta(E), FinMap::identity(A.carrier))),
                             T.T_map(base.lambda(A.carrier).inverse())));
  out.inverse = compose(l, T.eta(A.carrier));
  out.cell.derivation.check("lambda right inverse", compose(out.cell.map, out.inverse).is_identity(), "");
  out.cell.derivation.check("lambda left inverse", compose(out.inverse, out.cell.map).is_identity(), "");
  if (!out.cell.derivation.ok())
    throw EngineInvariantError("left unitor failed: " +
                               out.cell.derivation.first_failure()->name);
  return out;
}

UnitorResult right_unitor(const Monad& T, TensorCache& cache, const Algebra& A) {
  const MonoidalBase& base = T.base();
  Obj E = base.unit();
  Algebra TE = free_algebra(T, E);
  UnitorResult out;
  out.tensor = cache.get(T, A, TE);
  out.cell.kind = "rho";

  FinMap f = compose(
      A.structure,
      compose(T.T_map(base.rho(A.carrier)),
              compose(T.kappa(A.carrier, E),
                      base.tensor_map(T.eta(A.carrier), FinMap::identity(TE.carrier)))));
  out.cell.map = classify_bimorphism(T, *out.tensor, A, f);
  out.cell.derivation.pass("rho classified from its bimorphism");

  FinMap l = compose(out.tensor->q,
                     compose(T.T_map(base.tensor_map(FinMap::identity(A.carrier), T.eta(E))),
                             T.T_map(base.rho(A.carrier).inverse())));
  out.inverse = compose(l, T.eta(A.carrier));
  out.cell.derivation.check("rho right inverse", compose(out.cell.map, out.inverse).is_identity(), "");
  out.cell.derivation.check("rho left inverse", compose(out.inverse, out.cell.map).is_identity(), "");
  if (!out.cell.derivation.ok())
    throw EngineInvariantError("right unitor failed: " +
                               out.cell.derivation.first_failure()->name);
  return out;
}

BraidingResult braiding(const Monad& T, TensorCache& cache, const Algebra& A,
                        const Algebra& B) {
  const MonoidalBase& base = T.base();
  if (!base.symmetric()) throw PreconditionError("braiding requires a symmetric base");
  // condition (5) at these carriers
  {
    Obj X = A.carrier, Y = B.carrier;
    FinMap lhs = compose(T.kappa(Y, X), base.sigma(T.T(X), T.T(Y)));
    FinMap rhs = compose(T.T_map(base.sigma(X, Y)), T.kappa(X, Y));
    if (!(lhs == rhs))
      throw PreconditionError("monad is not symmetric at these carriers (condition 5)");
  }
  BraidingResult out;
  out.AB = cache.get(T, A, B);
  out.BA = cache.get(T, B, A);
  out.cell.kind = "sigma";
  FinMap F = compose(out.BA->q, T.T_map(base.sigma(A.carrier, B.carrier)));
  out.cell.map = induce_along(out.AB->q, F, out.cell.derivation, "sigma");
  out.cell.derivation.check("sigma bijective", out.cell.map.is_bijection(), "");
  out.cell.derivation.check("sigma homomorphic",
                            is_algebra_hom(T, out.AB->product, out.BA->product, out.cell.map),
                            "");
  FinMap Fr = compose(out.AB->q, T.T_map(base.sigma(B.carrier, A.carrier)));
  FinMap rev = induce_along(out.BA->q, Fr, out.cell.derivation, "sigma reverse");
  out.cell.derivation.check("sigma involution", compose(rev, out.cell.map).is_identity(), "");
  if (!out.cell.derivation.ok())
    throw EngineInvariantError("braiding failed: " + out.cell.derivation.first_failure()->name);
  return out;
}

namespace {

template <typename Fn>
void guarded(Report& rep, const std::string& name, Fn&& fn) {
  try {
    fn();
  } catch (const ResourceError& e) {
    rep.skip(name, e.what());
  }
}

}  // namespace

Report check_coherence(const Monad& T, TensorCache& cache,
                       const std::vector<Algebra>& fixtures) {
  Report rep;
  Algebra TE = free_algebra(T, T.base().unit());

  auto label = [](std::initializer_list<const Algebra*> algs) {
    std::string s = "(";
    bool first = true;
    for (auto* a : algs) {
      if (!first) s += ",";
      first = false;
      s += std::to_string(a->carrier->size());
    }
    return s + ")";
  };

  // unitors and triangle
  for (const Algebra& A : fixtures) {
    guarded(rep, "unitors " + label({&A}), [&] {
      UnitorResult lu = left_unitor(T, cache, A);
      UnitorResult ru = right_unitor(T, cache, A);
      rep.pass("unitors " + label({&A}));
      for (const Algebra& B : fixtures) {
        guarded(rep, "triangle " + label({&A, &B}), [&] {
          UnitorResult luB = left_unitor(T, cache, B);
          UnitorResult ruA = right_unitor(T, cache, A);
          AssociatorResult as = associator(T, cache, A, TE, B);
          TensorPtr tAB = cache.get(T, A, B);
          FinMap lhs = compose(tensor_of_homs(T, *as.A_BC, *tAB,
                                              FinMap::identity(A.carrier), luB.cell.map),
                               as.cell.map);
          FinMap rhs = tensor_of_homs(T, *as.AB_C, *tAB, ruA.cell.map,
                                      FinMap::identity(B.carrier));
          rep.check("triangle " + label({&A, &B}), lhs == rhs, "");
        });
      }
      (void)lu;
      (void)ru;
    });
  }

  // braiding involution and hexagon
  for (const Algebra& A : fixtures)
    for (const Algebra& B : fixtures) {
      guarded(rep, "braiding " + label({&A, &B}), [&] {
        BraidingResult br = braiding(T, cache, A, B);
        rep.pass("braiding involution " + label({&A, &B}));
        (void)br;
      });
    }

  for (const Algebra& A : fixtures)
    for (const Algebra& B : fixtures)
      for (const Algebra& C : fixtures) {
        std::string nm = "hexagon " + label({&A, &B, &C});
        guarded(rep, nm, [&] {
          AssociatorResult a1 = associator(T, cache, A, B, C);
          BraidingResult s1 = braiding(T, cache, A, a1.BC->product);
          AssociatorResult a2 = associator(T, cache, B, C, A);
          FinMap lhs = compose(a2.cell.map, compose(s1.cell.map, a1.cell.map));

          BraidingResult sAB = braiding(T, cache, A, B);
          AssociatorResult a3 = associator(T, cache, B, A, C);
          BraidingResult sAC = braiding(T, cache, A, C);
          TensorPtr tB_CA = a2.A_BC;
          FinMap rhs = compose(
              tensor_of_homs(T, *a3.A_BC, *tB_CA, FinMap::identity(B.carrier), sAC.cell.map),
              compose(a3.cell.map,
                      tensor_of_homs(T, *a1.AB_C, *a3.AB_C, sAB.cell.map,
                                     FinMap::identity(C.carrier))));
          rep.check(nm, lhs == rhs, "");
        });
      }

  // pentagon
  for (const Algebra& A : fixtures)
    for (const Algebra& B : fixtures)
      for (const Algebra& C : fixtures)
        for (const Algebra& D : fixtures) {
          std::string nm = "pentagon " + label({&A, &B, &C, &D});
          guarded(rep, nm, [&] {
            AssociatorResult aABC = associator(T, cache, A, B, C);
            AssociatorResult aBCD = associator(T, cache, B, C, D);
            TensorPtr tCD = cache.get(T, C, D);
            AssociatorResult aAB_CD = associator(T, cache, A, B, tCD->product);
            AssociatorResult aABxC_D = associator(T, cache, aABC.AB->product, C, D);

            FinMap p1 = compose(aAB_CD.cell.map, aABxC_D.cell.map);

            // aABC.cell ⊠ 1_D : ((A⊠B)⊠C)⊠D -> (A⊠(B⊠C))⊠D
            TensorPtr lhs0 = cache.get(T, aABC.AB_C->product, D);
            TensorPtr mid0 = cache.get(T, aABC.A_BC->product, D);
            FinMap step1 = tensor_of_homs(T, *lhs0, *mid0, aABC.cell.map,
                                          FinMap::identity(D.carrier));
            // ᾱ_{A,B⊠C,D} : (A⊠(B⊠C))⊠D -> A⊠((B⊠C)⊠D)
            AssociatorResult aMid = associator(T, cache, A, aABC.BC->product, D);
            // 1_A ⊠ ᾱ_{B,C,D} : A⊠((B⊠C)⊠D) -> A⊠(B⊠(C⊠D))
            TensorPtr tA_BCD = cache.get(T, A, aBCD.A_BC->product);
            FinMap step3 = tensor_of_homs(T, *aMid.A_BC, *tA_BCD,
                                          FinMap::identity(A.carrier), aBCD.cell.map);
            FinMap p2 = compose(step3, compose(aMid.cell.map, step1));
            rep.check(nm, p1.tab == p2.tab, "");
          });
        }

  // naturality of the cells against enumerated homomorphisms
  for (const Algebra& A : fixtures)
    for (const Algebra& B : fixtures) {
      std::string nm =
          "naturality " + std::to_string(A.carrier->size()) + "->" +
          std::to_string(B.carrier->size());
      guarded(rep, nm, [&] {
        auto homs = enumerate_homs(T, A, B);
        if (homs.empty()) return;
        FinMap f = homs[homs.size() / 2];
        FinMap g = homs.back();
        // sigma naturality
        BraidingResult sAA = braiding(T, cache, A, A);
        BraidingResult sBB = braiding(T, cache, B, B);
        TensorPtr tAA = sAA.AB, tBB = sBB.AB;
        FinMap fg = tensor_of_homs(T, *tAA, *tBB, f, g);
        FinMap gf = tensor_of_homs(T, *sAA.BA, *sBB.BA, g, f);
        rep.check("sigma naturality " + nm, compose(gf, sAA.cell.map) == compose(sBB.cell.map, fg),
                  "");
        // lambda naturality
        UnitorResult luA = left_unitor(T, cache, A);
        UnitorResult luB = left_unitor(T, cache, B);
        Algebra TEa = free_algebra(T, T.base().unit());
        FinMap lf = tensor_of_homs(T, *luA.tensor, *luB.tensor,
                                   FinMap::identity(TEa.carrier), f);
        rep.check("lambda naturality " + nm,
                  compose(f, luA.cell.map) == compose(luB.cell.map, lf), "");
        // alpha naturality on (A,A,A) -> (B,B,B)
        AssociatorResult aA = associator(T, cache, A, A, A);
        AssociatorResult aB = associator(T, cache, B, B, B);
        FinMap ff = tensor_of_homs(T, *aA.AB, *aB.AB, f, f);
        FinMap lhs3 = tensor_of_homs(T, *aA.AB_C, *aB.AB_C, ff, f);
        FinMap gg = tensor_of_homs(T, *aA.BC, *aB.BC, f, f);
        FinMap rhs3 = tensor_of_homs(T, *aA.A_BC, *aB.A_BC, f, gg);
        rep.check("alpha naturality " + nm,
                  compose(rhs3, aA.cell.map) == compose(aB.cell.map, lhs3), "");
      });
    }

  return rep;
}

Report verify_induced_presentations(const Monad& T, TensorCache& cache, const Algebra& A,
                                    const Algebra& B, const Algebra& C, const Algebra& D,
                                    const std::vector<Algebra>& test_codomains) {
  Report rep;
  const MonoidalBase& base = T.base();
  AssociatorResult as = associator(T, cache, A, B, C);

  // left presentation: q·T(q·η⊗1) coequalizes (μ·T(κ·(κ⊗1)), T((a⊗b)⊗c))
  {
    FinMap u = iterated_surjection(T, *as.AB, *as.AB_C);
    Obj TC = T.T(C.carrier);
    FinMap lhs = compose(T.kappa(base.tensor_obj(A.carrier, B.carrier), C.carrier),
                         base.tensor_map(T.kappa(A.carrier, B.carrier), FinMap::identity(TC)));
    Obj Gens = base.tensor_obj(base.tensor_obj(A.carrier, B.carrier), C.carrier);
    FinMap rhs = compose(T.eta(Gens),
                         base.tensor_map(base.tensor_map(A.structure, B.structure), C.structure));
    std::vector<std::pair<Idx, Idx>> pairs;
    for (size_t w = 0; w < lhs.tab.size(); ++w) pairs.emplace_back(lhs.tab[w], rhs.tab[w]);
    Report up = verify_coequalizer_universal_free(T, Gens, as.AB_C->product, u, pairs,
                                                  test_codomains);
    for (auto& c : up.checks) c.name = "TriQ left: " + c.name;
    rep.merge(up);
  }

  // right presentation, mirrored
  {
    FinMap u = iterated_surjection_right(T, *as.BC, *as.A_BC);
    Obj TA = T.T(A.carrier);
    FinMap lhs = compose(T.kappa(A.carrier, base.tensor_obj(B.carrier, C.carrier)),
                         base.tensor_map(FinMap::identity(TA), T.kappa(B.carrier, C.carrier)));
    Obj Gens = base.tensor_obj(A.carrier, base.tensor_obj(B.carrier, C.carrier));
    FinMap rhs = compose(T.eta(Gens),
                         base.tensor_map(A.structure, base.tensor_map(B.structure, C.structure)));
    std::vector<std::pair<Idx, Idx>> pairs;
    for (size_t w = 0; w < lhs.tab.size(); ++w) pairs.emplace_back(lhs.tab[w], rhs.tab[w]);
    Report up = verify_coequalizer_universal_free(T, Gens, as.A_BC->product, u, pairs,
                                                  test_codomains);
    for (auto& c : up.checks) c.name = "TriQ right: " + c.name;
    rep.merge(up);
  }

  // QuaQ: q·T(q·η⊗q·η) : T((A⊗B)⊗(C⊗D)) -> (A⊠B)⊠(C⊠D) is epic; streamed
  // over codes so T((A⊗B)⊗(C⊗D)) is never materialized
  {
    TensorPtr tAB = cache.get(T, A, B);
    TensorPtr tCD = cache.get(T, C, D);
    TensorPtr big = cache.get(T, tAB->product, tCD->product);
    Obj G = base.tensor_obj(base.tensor_obj(A.carrier, B.carrier),
                            base.tensor_obj(C.carrier, D.carrier));
    FinMap e = base.tensor_map(tAB->embed, tCD->embed);  // G -> (A⊠B)⊗(C⊠D)
    auto tgt = T.app(e.cod);
    const MonadKernel& ker = T.kernel();
    auto total = T.t_size(G->size());
    if (!total)
      rep.skip("QuaQ surjectivity", "code space overflows");
    else {
      std::vector<char> hit(big->product.carrier->size(), 0);
      size_t nhit = 0;
      for (uint64_t code = 0; code < *total && nhit < hit.size(); ++code) {
        Idx img = big->q.tab[size_t(tgt->of_code(ker.map_code(code, e.tab, e.cod->size())))];
        if (!hit[size_t(img)]) {
          hit[size_t(img)] = 1;
          ++nhit;
        }
      }
      rep.check("QuaQ surjectivity", nhit == hit.size(),
                std::to_string(nhit) + " of " + std::to_string(hit.size()) + " classes hit");
    }
  }
  return rep;
}

MonoidalFunctorResult algebraic_functor_monoidal(const MonadMorphism& phi, TensorCache& cache_T,
                                                 const Algebra& A, const Algebra& B) {
  const Monad& S = *phi.source;
  const Monad& T = *phi.target;
  Report chk = check_monad_morphism(phi, {A.carrier, B.carrier}, true);
  if (!chk.ok()) throw PreconditionError("algebraic_functor_monoidal: morphism fails checks");

  MonoidalFunctorResult out;
  out.A_S = Algebra{A.carrier, compose(A.structure, phi.at(A.carrier)), std::nullopt};
  out.B_S = Algebra{B.carrier, compose(B.structure, phi.at(B.carrier)), std::nullopt};
  out.s_tensor = tensor_product(S, out.A_S, out.B_S);
  TensorPtr tT = cache_T.get(T, A, B);

  Obj G = out.s_tensor.gens;
  FinMap F = compose(tT->q, phi.at(G));
  out.phibar.kind = "phibar";
  out.phibar.map = induce_along(out.s_tensor.q, F, out.phibar.derivation, "phibar");

  Algebra boxtimes_S{tT->product.carrier,
                     compose(tT->product.structure, phi.at(tT->product.carrier)), std::nullopt};
  out.coherence.check("phibar is an S-homomorphism",
                      is_algebra_hom(S, out.s_tensor.product, boxtimes_S, out.phibar.map), "");

  // unit square: λ̄_T ∘ φ̄_{TE,A} ∘ (φ_E ⊛ 1) = λ̄_S on SE⊛A
  {
    TensorCache cache_S;
    UnitorResult luS = left_unitor(S, cache_S, out.A_S);
    UnitorResult luT = left_unitor(T, cache_T, A);
    Obj E = S.base().unit();
    Algebra SE = free_algebra(S, E);
    Algebra TE_T = free_algebra(T, E);
    Algebra TE_S{TE_T.carrier, compose(TE_T.structure, phi.at(TE_T.carrier)), std::nullopt};
    // φ_E : SE -> TE is an S-homomorphism
    FinMap phiE = phi.at(E);
    out.coherence.check("phi_E homomorphism", is_algebra_hom(S, SE, TE_S, phiE), "");
    TensorResult s_TEA = tensor_product(S, TE_S, out.A_S);
    FinMap left0 =
        tensor_of_homs(S, *luS.tensor, s_TEA, phiE, FinMap::identity(A.carrier));
    // φ̄_{TE,A} : TE⊛A -> TE⊠A
    Report tmp;
    FinMap F2 = compose(luT.tensor->q, phi.at(S.base().tensor_obj(TE_T.carrier, A.carrier)));
    FinMap phibar2 = induce_along(s_TEA.q, F2, tmp, "phibar TE,A");
    FinMap lhs = compose(luT.cell.map, compose(phibar2, left0));
    out.coherence.check("unit square (lambda)", lhs == luS.cell.map, "");
  }
  return out;
}

CoherenceCell kappa_bar(const Monad& T, TensorCache& cache, const Obj& X, const Obj& Y) {
  Algebra FX = free_algebra(T, X);
  Algebra FY = free_algebra(T, Y);
  Algebra FXY = free_algebra(T, T.base().tensor_obj(X, Y));
  TensorPtr t = cache.get(T, FX, FY);
  CoherenceCell cell;
  cell.kind = "kappabar";
  cell.map = classify_bimorphism(T, *t, FXY, T.kappa(X, Y));
  cell.derivation.check("kappabar bijective", cell.map.is_bijection(), "");
  if (!cell.derivation.ok())
    throw EngineInvariantError("kappa_bar is not an isomorphism");
  return cell;
}

}  // namespace emt
