#include "doctest.h"
#include "emt/bimorphism.hpp"
#include "fixtures.hpp"

using namespace emt;
using namespace emt::fixtures;

namespace {

// min on a chain as a map C⊗C -> C
FinMap chain_min(const MonoidalBase& base, const Algebra& C) {
  const auto& pi = base.pairing(C.carrier, C.carrier);
  std::vector<Idx> tab(pi.prod->size());
  for (size_t s = 0; s < tab.size(); ++s) {
    auto [i, j] = pi.unpair[s];
    tab[s] = std::min(i, j);  // chain labels "0","1",... sorted by height
  }
  return FinMap(pi.prod, C.carrier, std::move(tab));
}

}  // namespace

TEST_CASE("min on a chain is a bimorphism; constant-top is not") {
  auto base = build_monoidal_base(BaseKind::cartesian);
  auto P = instantiate_monad("powerset", base);
  Algebra c3 = chain(*P, 3);

  BimorphismCandidate mincand{c3, c3, c3, chain_min(*base, c3)};
  CHECK(is_bimorphism(*P, mincand).ok);
  CHECK(is_bimorphism_componentwise(*P, mincand));

  Algebra c2 = chain(*P, 2);
  const auto& pi = base->pairing(c2.carrier, c2.carrier);
  FinMap top(pi.prod, c2.carrier, std::vector<Idx>(4, 1));
  BimCheck r = is_bimorphism(*P, {c2, c2, c2, top});
  CHECK_FALSE(r.ok);
  CHECK(r.witness.find("{}") != std::string::npos);  // fails at the empty joins
}

TEST_CASE("identity monad: every map is a bimorphism") {
  auto base = build_monoidal_base(BaseKind::cartesian);
  auto I = instantiate_monad("identity", base);
  Obj A = mkset(2), B = mkset(2, "y"), C = mkset(2, "z");
  Algebra ia{A, FinMap::identity(A), std::nullopt};
  Algebra ib{B, FinMap::identity(B), std::nullopt};
  Algebra ic{C, FinMap::identity(C), std::nullopt};
  auto bims = enumerate_bimorphisms(*I, ia, ib, ic);
  CHECK(bims.size() == 16);  // |C|^(|A||B|) = 2^4
}

TEST_CASE("componentwise and direct checks agree exhaustively (C2,C2;C2)") {
  auto base = build_monoidal_base(BaseKind::cartesian);
  auto P = instantiate_monad("powerset", base);
  Algebra c2 = chain(*P, 2);
  Obj G = base->tensor_obj(c2.carrier, c2.carrier);

  size_t n_bim = 0;
  std::vector<Idx> f(4, 0);
  while (true) {
    BimorphismCandidate cand{c2, c2, c2, FinMap(G, c2.carrier, f)};
    bool direct = is_bimorphism(*P, cand).ok;
    bool comp = is_bimorphism_componentwise(*P, cand);
    CHECK(direct == comp);
    if (direct) ++n_bim;
    size_t i = 0;
    for (; i < 4; ++i) {
      if (++f[i] < 2) break;
      f[i] = 0;
    }
    if (i == 4) break;
  }
  CHECK(n_bim == 2);  // the spec's count for C^T(C2,C2;C2)
  CHECK(enumerate_bimorphisms(*P, c2, c2, c2).size() == 2);
}

TEST_CASE("F2 multiplication is a bimorphism") {
  auto base = build_monoidal_base(BaseKind::cartesian);
  auto V = instantiate_monad("vector_space", base, 2);
  Algebra f2 = fp_space(*V, 1);  // carrier {[],[e0:1]}
  const auto& pi = base->pairing(f2.carrier, f2.carrier);
  Idx one = f2.carrier->index_of("[e0:1]");
  std::vector<Idx> tab(4);
  for (size_t s = 0; s < 4; ++s) {
    auto [i, j] = pi.unpair[s];
    tab[s] = (i == one && j == one) ? one : f2.carrier->index_of("[]");
  }
  BimorphismCandidate mul{f2, f2, f2, FinMap(pi.prod, f2.carrier, tab)};
  CHECK(is_bimorphism(*V, mul).ok);
  CHECK(is_bimorphism_componentwise(*V, mul));
}

TEST_CASE("bimorphism transforms compose") {
  auto base = build_monoidal_base(BaseKind::cartesian);
  auto P = instantiate_monad("powerset", base);
  Algebra c3 = chain(*P, 3);
  Algebra c2 = chain(*P, 2);
  BimorphismCandidate mincand{c3, c3, c3, chain_min(*base, c3)};

  // inclusion C2 -> C3 via bottom/top
  FinMap inc(c2.carrier, c3.carrier, {0, 2});
  REQUIRE(is_algebra_hom(*P, c2, c3, inc));

  BimorphismCandidate t =
      transform_bimorphism(*P, mincand, c2, c2, c3, inc, inc, FinMap::identity(c3.carrier));
  CHECK(is_bimorphism(*P, t).ok);

  // identities act trivially
  BimorphismCandidate same = transform_bimorphism(
      *P, mincand, c3, c3, c3, FinMap::identity(c3.carrier), FinMap::identity(c3.carrier),
      FinMap::identity(c3.carrier));
  CHECK(same.f == mincand.f);

  // composition law: transform twice equals transform by the composites
  auto homs32 = enumerate_homs(*P, c2, c3);
  auto homs22 = enumerate_homs(*P, c2, c2);
  FinMap g = homs32.back(), gp = homs22.back();
  BimorphismCandidate step1 = transform_bimorphism(*P, mincand, c2, c2, c3, g, g,
                                                   FinMap::identity(c3.carrier));
  BimorphismCandidate step2 = transform_bimorphism(*P, step1, c2, c2, c3, gp, gp,
                                                   FinMap::identity(c3.carrier));
  BimorphismCandidate direct = transform_bimorphism(*P, mincand, c2, c2, c3, compose(g, gp),
                                                    compose(g, gp),
                                                    FinMap::identity(c3.carrier));
  CHECK(step2.f == direct.f);
}

TEST_CASE("row strategy agrees with brute force (C3,C3;C2)") {
  auto base = build_monoidal_base(BaseKind::cartesian);
  EngineConfig tight;
  tight.budget = 100;  // force the row strategy (2^9 candidates > 100)
  auto P = instantiate_monad("powerset", base);
  auto Pt = instantiate_monad("powerset", base, 0, tight);
  Algebra c3 = chain(*P, 3);
  Algebra c2 = chain(*P, 2);
  auto brute = enumerate_bimorphisms(*P, c3, c3, c2);
  auto rows = enumerate_bimorphisms(*Pt, chain(*Pt, 3), chain(*Pt, 3), chain(*Pt, 2));
  REQUIRE(brute.size() == rows.size());
  for (size_t i = 0; i < brute.size(); ++i) CHECK(brute[i].tab == rows[i].tab);
}
