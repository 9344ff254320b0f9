#include <algorithm>

#include "doctest.h"
#include "emt/congruence.hpp"
#include "fixtures.hpp"

using namespace emt;
using namespace emt::fixtures;

namespace {

// all partitions of {0..n-1} as restricted growth strings
std::vector<std::vector<Idx>> all_partitions(int n) {
  std::vector<std::vector<Idx>> out;
  std::vector<Idx> rgs(size_t(n), 0);
  while (true) {
    out.push_back(rgs);
    int i = n - 1;
    for (; i > 0; --i) {
      Idx mx = 0;
      for (int j = 0; j < i; ++j) mx = std::max(mx, rgs[size_t(j)]);
      if (rgs[size_t(i)] <= mx) {
        ++rgs[size_t(i)];
        for (int j = i + 1; j < n; ++j) rgs[size_t(j)] = 0;
        break;
      }
      rgs[size_t(i)] = 0;
    }
    if (i == 0) break;
  }
  return out;
}

bool partition_compatible(const std::vector<Idx>& cls, const AlgebraOps& ops, size_t n) {
  for (size_t op = 0; op < ops.arities.size(); ++op) {
    int ar = ops.arities[op];
    if (ar == 1) {
      for (size_t x = 0; x < n; ++x)
        for (size_t y = 0; y < n; ++y)
          if (cls[x] == cls[y] &&
              cls[size_t(ops.ap1(int(op), Idx(x)))] != cls[size_t(ops.ap1(int(op), Idx(y)))])
            return false;
    } else if (ar == 2) {
      for (size_t x = 0; x < n; ++x)
        for (size_t y = 0; y < n; ++y) {
          if (cls[x] != cls[y]) continue;
          for (size_t z = 0; z < n; ++z) {
            if (cls[size_t(ops.ap2(int(op), Idx(x), Idx(z)))] !=
                cls[size_t(ops.ap2(int(op), Idx(y), Idx(z)))])
              return false;
            if (cls[size_t(ops.ap2(int(op), Idx(z), Idx(x)))] !=
                cls[size_t(ops.ap2(int(op), Idx(z), Idx(y)))])
              return false;
          }
        }
    }
  }
  return true;
}

// cls1 refines cls2
bool refines(const std::vector<Idx>& cls1, const std::vector<Idx>& cls2) {
  for (size_t x = 0; x < cls1.size(); ++x)
    for (size_t y = x + 1; y < cls1.size(); ++y)
      if (cls1[x] == cls1[y] && cls2[x] != cls2[y]) return false;
  return true;
}

}  // namespace

TEST_CASE("closure agrees with the brute-force smallest congruence (D4, {a}~{b})") {
  auto base = build_monoidal_base(BaseKind::cartesian);
  auto P = instantiate_monad("powerset", base);
  Algebra d4 = free_algebra(*P, mkset(2));
  Obj D = d4.carrier;
  Idx a = D->index_of("{x0}"), b = D->index_of("{x1}"), ab = D->index_of("{x0,x1}");
  Idx bot = D->index_of("{}");

  Congruence c = congruence_closure(*P, d4, {{a, b}});
  // {a},{b},{a,b} merge; bottom stays apart
  CHECK(c.n_classes() == 2);
  CHECK(c.class_of[size_t(a)] == c.class_of[size_t(b)]);
  CHECK(c.class_of[size_t(a)] == c.class_of[size_t(ab)]);
  CHECK(c.class_of[size_t(bot)] != c.class_of[size_t(a)]);

  // oracle: smallest compatible partition containing the pair
  AlgebraOps ops = make_algebra_ops(*P, d4);
  CHECK(partition_compatible(c.class_of, ops, 4));
  for (const auto& p : all_partitions(4)) {
    if (p[size_t(a)] != p[size_t(b)]) continue;
    if (!partition_compatible(p, ops, 4)) continue;
    CHECK(refines(c.class_of, p));
  }
}

TEST_CASE("trivial closures") {
  auto base = build_monoidal_base(BaseKind::cartesian);
  auto P = instantiate_monad("powerset", base);
  Algebra c3 = chain(*P, 3);

  Congruence disc = congruence_closure(*P, c3, {});
  CHECK(disc.n_classes() == 3);

  std::vector<std::pair<Idx, Idx>> all;
  for (Idx x = 0; x < 3; ++x)
    for (Idx y = 0; y < 3; ++y) all.emplace_back(x, y);
  Congruence total = congruence_closure(*P, c3, all);
  CHECK(total.n_classes() == 1);
}

TEST_CASE("quotients: discrete, total, and the D4 example") {
  auto base = build_monoidal_base(BaseKind::cartesian);
  auto P = instantiate_monad("powerset", base);
  Algebra d4 = free_algebra(*P, mkset(2));

  Congruence disc = congruence_closure(*P, d4, {});
  QuotientResult qd = quotient_algebra(*P, disc);
  CHECK(qd.projection.is_bijection());
  CHECK(check_algebra(*P, qd.algebra).ok());

  std::vector<std::pair<Idx, Idx>> all;
  for (Idx x = 0; x < 4; ++x) all.emplace_back(0, x);
  Congruence total = congruence_closure(*P, d4, all);
  QuotientResult qt = quotient_algebra(*P, total);
  CHECK(qt.algebra.carrier->size() == 1);

  Obj D = d4.carrier;
  Congruence c =
      congruence_closure(*P, d4, {{D->index_of("{x0}"), D->index_of("{x1}")}});
  QuotientResult q = quotient_algebra(*P, c);
  CHECK(q.algebra.carrier->size() == 2);
  CHECK(check_algebra(*P, q.algebra).ok());
  CHECK(is_algebra_hom(*P, Algebra{d4.carrier, d4.structure, std::nullopt}, q.algebra,
                       q.projection));
}

TEST_CASE("sparse closure agrees with dense on overlapping sizes") {
  auto base = build_monoidal_base(BaseKind::cartesian);
  EngineConfig dense_cfg;  // default: dense up to 8192
  EngineConfig sparse_cfg;
  sparse_cfg.dense_threshold = 4;  // force sparse
  auto Pd = instantiate_monad("powerset", base, 0, dense_cfg);
  auto Ps = instantiate_monad("powerset", base, 0, sparse_cfg);

  for (int n : {2, 3}) {
    Obj G = mkset(n);
    Obj TG = Pd->T(G);
    // a few deterministic pair sets
    std::vector<std::vector<std::pair<Idx, Idx>>> cases;
    cases.push_back({{0, Idx(TG->size() - 1)}});
    cases.push_back({{1, 2}});
    cases.push_back({{0, 1}, {2, 3}});
    for (auto& pairs : cases) {
      Congruence cd = congruence_closure_free(*Pd, G, pairs);
      Congruence cs = congruence_closure_free(*Ps, G, pairs);
      REQUIRE(cd.n_classes() == cs.n_classes());
      CHECK(cd.class_of == cs.class_of);
    }
  }

  auto Vd = instantiate_monad("vector_space", base, 2, dense_cfg);
  auto Vs = instantiate_monad("vector_space", base, 2, sparse_cfg);
  Obj G = mkset(2);
  std::vector<std::pair<Idx, Idx>> pairs = {{1, 2}};
  Congruence cd = congruence_closure_free(*Vd, G, pairs);
  Congruence cs = congruence_closure_free(*Vs, G, pairs);
  CHECK(cd.class_of == cs.class_of);
}

TEST_CASE("coequalizer of equal maps is bijective; generator pairs suffice") {
  auto base = build_monoidal_base(BaseKind::cartesian);
  auto P = instantiate_monad("powerset", base);
  Algebra d4 = free_algebra(*P, mkset(2));
  Algebra c2 = chain(*P, 2);

  auto homs = enumerate_homs(*P, d4, c2);
  REQUIRE(homs.size() >= 2);
  CoequalizerResult eq = coequalizer_em(*P, d4, c2, homs[0], homs[0]);
  CHECK(eq.q.is_bijection());

  // generator pairs vs all pairs give the same partition
  CoequalizerResult two = coequalizer_em(*P, d4, c2, homs[0], homs[1]);
  Algebra d4_plain{d4.carrier, d4.structure, std::nullopt};
  CoequalizerResult two_full = coequalizer_em(*P, d4_plain, c2, homs[0], homs[1]);
  CHECK(two.congruence.class_of == two_full.congruence.class_of);
}

TEST_CASE("universal property on small instances") {
  auto base = build_monoidal_base(BaseKind::cartesian);
  auto P = instantiate_monad("powerset", base);
  Algebra d4 = free_algebra(*P, mkset(2));
  Obj D = d4.carrier;
  std::vector<std::pair<Idx, Idx>> pairs = {{D->index_of("{x0}"), D->index_of("{x1}")}};
  Congruence c = congruence_closure(*P, d4, pairs);
  QuotientResult q = quotient_algebra(*P, c);

  std::vector<Algebra> tests = {chain(*P, 1), chain(*P, 2), chain(*P, 3)};
  Report r = verify_coequalizer_universal_free(*P, mkset(2), q.algebra, q.projection, pairs,
                                               tests);
  CHECK(r.ok());

  // a non-surjective "q" must fail
  Algebra c3 = chain(*P, 3);
  std::vector<Idx> bad_tab(D->size());
  for (size_t i = 0; i < bad_tab.size(); ++i)
    bad_tab[i] = q.projection.tab[i];  // into a 3-element codomain, image only 2
  FinMap bad(D, c3.carrier, bad_tab);
  Report rb = verify_coequalizer_universal_free(*P, mkset(2), c3, bad, pairs, tests);
  CHECK_FALSE(rb.ok());
}

TEST_CASE("identity-monad coequalizer is the set quotient") {
  auto base = build_monoidal_base(BaseKind::cartesian);
  auto I = instantiate_monad("identity", base);
  Obj A = mkset(3);
  Algebra ia{A, FinMap::identity(A), A};
  Congruence c = congruence_closure(*I, ia, {{0, 1}});
  CHECK(c.n_classes() == 2);
  QuotientResult q = quotient_algebra(*I, c);
  std::vector<Algebra> tests;
  for (int n = 1; n <= 3; ++n) {
    Obj C = mkset(n, "c");
    tests.push_back(Algebra{C, FinMap::identity(C), std::nullopt});
  }
  Report r = verify_coequalizer_universal_free(*I, A, q.algebra, q.projection, {{0, 1}}, tests);
  CHECK(r.ok());
}
