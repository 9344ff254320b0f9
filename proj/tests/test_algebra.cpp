#include "doctest.h"
#include "emt/algebra.hpp"
#include "fixtures.hpp"

using namespace emt;
using namespace emt::fixtures;

TEST_CASE("free algebras satisfy the laws") {
  auto base = build_monoidal_base(BaseKind::cartesian);
  auto P = instantiate_monad("powerset", base);
  auto V = instantiate_monad("vector_space", base, 2);

  Algebra c2 = free_algebra(*P, mkset(1));
  CHECK(c2.carrier->size() == 2);
  CHECK(check_algebra(*P, c2).ok());

  Algebra d4 = free_algebra(*P, mkset(2));
  CHECK(d4.carrier->size() == 4);
  CHECK(check_algebra(*P, d4).ok());

  Algebra f22 = free_algebra(*V, mkset(2));
  CHECK(f22.carrier->size() == 4);
  CHECK(check_algebra(*V, f22).ok());
}

TEST_CASE("chains are algebras; corrupted structure fails with witness") {
  auto base = build_monoidal_base(BaseKind::cartesian);
  auto P = instantiate_monad("powerset", base);
  Algebra c3 = chain(*P, 3);
  Report r = check_algebra(*P, c3);
  CHECK(r.ok());

  Algebra bad = c3;
  bad.structure.tab[5] = (bad.structure.tab[5] + 1) % 3;
  Report rb = check_algebra(*P, bad);
  CHECK_FALSE(rb.ok());
  CHECK(!rb.first_failure()->detail.empty());
}

TEST_CASE("hom enumeration") {
  auto base = build_monoidal_base(BaseKind::cartesian);
  auto P = instantiate_monad("powerset", base);
  Algebra c2 = chain(*P, 2);
  Algebra c3 = chain(*P, 3);

  auto homs22 = enumerate_homs(*P, c2, c2);
  CHECK(homs22.size() == 2);  // bottom forced, top free

  // identity is always there
  bool has_id = false;
  for (auto& h : homs22) has_id |= h.is_identity();
  CHECK(has_id);

  auto homs32 = enumerate_homs(*P, c3, c2);
  for (auto& h : homs32) CHECK(is_algebra_hom(*P, c3, c2, h));
  CHECK(homs32.size() == 3);  // monotone bottom-preserving join-maps 3-chain -> 2-chain

  // identity monad: no constraint
  auto I = instantiate_monad("identity", base);
  Obj A = mkset(2), B = mkset(3);
  Algebra ia{A, FinMap::identity(A), std::nullopt};
  Algebra ib{B, FinMap::identity(B), std::nullopt};
  CHECK(enumerate_homs(*I, ia, ib).size() == 9);
}

TEST_CASE("free-source hom enumeration agrees with brute force") {
  auto base = build_monoidal_base(BaseKind::cartesian);
  auto P = instantiate_monad("powerset", base);
  Algebra d4 = free_algebra(*P, mkset(2));
  Algebra c3 = chain(*P, 3);
  auto via_free = enumerate_homs(*P, d4, c3);
  CHECK(via_free.size() == 9);  // maps {x0,x1} -> C3

  Algebra d4_plain{d4.carrier, d4.structure, std::nullopt};
  auto brute = enumerate_homs(*P, d4_plain, c3);
  REQUIRE(brute.size() == via_free.size());
  for (size_t i = 0; i < brute.size(); ++i) CHECK(brute[i].tab == via_free[i].tab);
}

TEST_CASE("generating subsets") {
  auto base = build_monoidal_base(BaseKind::cartesian);
  auto P = instantiate_monad("powerset", base);
  Algebra d4 = free_algebra(*P, mkset(2));
  AlgebraOps ops = make_algebra_ops(*P, d4);
  auto gens = generating_subset(*P, d4, ops);
  CHECK(gens.size() <= 3);
  // the subset generates: closing it under the signature reaches everything
  std::vector<char> closed(4, 0);
  closed[size_t(ops.ap0(0))] = 1;
  for (Idx g : gens) closed[size_t(g)] = 1;
  for (int round = 0; round < 4; ++round)
    for (Idx x = 0; x < 4; ++x)
      for (Idx y = 0; y < 4; ++y)
        if (closed[size_t(x)] && closed[size_t(y)]) closed[size_t(ops.ap2(1, x, y))] = 1;
  for (int x = 0; x < 4; ++x) CHECK(closed[size_t(x)] == 1);
}
