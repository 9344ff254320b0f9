#include "emt/bimorphism.hpp"

#include <algorithm>
#include <unordered_set>

namespace emt {

BimCheck is_bimorphism(const Monad& T, const BimorphismCandidate& cand) {
  const MonoidalBase& B = T.base();
  Obj G = B.tensor_obj(cand.A.carrier, cand.B.carrier);
  if (!same_obj(cand.f.dom, G) || !same_obj(cand.f.cod, cand.C.carrier))
    throw PreconditionError("bimorphism candidate is not a map A⊗B -> C");
  T.require_guard(G->size(), "A⊗B");

  FinMap kap = T.kappa(cand.A.carrier, cand.B.carrier);
  FinMap lhs = compose(cand.C.structure, compose(T.T_map(cand.f), kap));
  FinMap rhs = compose(cand.f, B.tensor_map(cand.A.structure, cand.B.structure));
  for (size_t w = 0; w < lhs.tab.size(); ++w)
    if (lhs.tab[w] != rhs.tab[w])
      return {false, "at " + lhs.dom->label(Idx(w)) + ": " +
                         cand.C.carrier->label(lhs.tab[w]) + " != " +
                         cand.C.carrier->label(rhs.tab[w])};
  return {true, ""};
}

bool is_bimorphism_componentwise(const Monad& T, const BimorphismCandidate& cand) {
  const MonoidalBase& B = T.base();
  Obj A = cand.A.carrier, Bc = cand.B.carrier, C = cand.C.carrier;
  Obj TA = T.T(A), TB = T.T(Bc);
  FinMap kap = T.kappa(A, Bc);
  FinMap tf = T.T_map(cand.f);

  // A⊗TB square: c·Tf·κ·(η⊗1) = f·(1⊗b)
  FinMap l1 = compose(cand.C.structure,
                      compose(tf, compose(kap, B.tensor_map(T.eta(A), FinMap::identity(TB)))));
  FinMap r1 = compose(cand.f, B.tensor_map(FinMap::identity(A), cand.B.structure));
  if (l1.tab != r1.tab) return false;

  // TA⊗B square: c·Tf·κ·(1⊗η) = f·(a⊗1)
  FinMap l2 = compose(cand.C.structure,
                      compose(tf, compose(kap, B.tensor_map(FinMap::identity(TA), T.eta(Bc)))));
  FinMap r2 = compose(cand.f, B.tensor_map(cand.A.structure, FinMap::identity(Bc)));
  return l2.tab == r2.tab;
}

BimorphismCandidate transform_bimorphism(const Monad& T, const BimorphismCandidate& cand,
                                         const Algebra& A2, const Algebra& B2,
                                         const Algebra& C2, const FinMap& g, const FinMap& h,
                                         const FinMap& k) {
  if (!is_algebra_hom(T, A2, cand.A, g) || !is_algebra_hom(T, B2, cand.B, h) ||
      !is_algebra_hom(T, cand.C, C2, k))
    throw PreconditionError("transform_bimorphism: g, h, k must be homomorphisms");
  BimCheck pre = is_bimorphism(T, cand);
  if (!pre.ok) throw PreconditionError("transform_bimorphism: input is not a bimorphism");

  BimorphismCandidate out{A2, B2, C2, compose(k, compose(cand.f, T.base().tensor_map(g, h)))};
  BimCheck post = is_bimorphism(T, out);
  if (!post.ok)
    throw EngineInvariantError("transformed bimorphism fails the square: " + post.witness);
  return out;
}

namespace {

struct TabHash {
  size_t operator()(const std::vector<Idx>& v) const {
    uint64_t h = 1469598103934665603ull;
    for (Idx x : v) {
      h ^= uint64_t(uint32_t(x));
      h *= 1099511628211ull;
    }
    return size_t(h);
  }
};

}  // namespace

std::vector<FinMap> enumerate_bimorphisms(const Monad& T, const Algebra& A, const Algebra& B,
                                          const Algebra& C) {
  const MonoidalBase& base = T.base();
  Obj G = base.tensor_obj(A.carrier, B.carrier);
  size_t nd = G->size(), nc = C.carrier->size();
  const uint64_t budget = T.config().budget;
  std::vector<FinMap> out;

  uint64_t total = 1;
  bool brute = true;
  for (size_t i = 0; i < nd; ++i) {
    total *= std::max<uint64_t>(nc, 1);
    if (total > budget) {
      brute = false;
      break;
    }
  }

  if (brute) {
    if (nc == 0) {
      if (nd == 0) {
        BimorphismCandidate cand{A, B, C, FinMap(G, C.carrier, {})};
        if (is_bimorphism(T, cand).ok) out.push_back(cand.f);
      }
      return out;
    }
    // pointwise square evaluation with short-circuit on the first failing
    // T-element, iterating maps in lexicographic table order
    Obj TA = T.T(A.carrier), TB = T.T(B.carrier);
    Obj D = base.tensor_obj(TA, TB);
    FinMap kap = T.kappa(A.carrier, B.carrier);
    FinMap ab = base.tensor_map(A.structure, B.structure);
    auto tg = T.app(G);
    auto tc = T.app(C.carrier);
    const MonadKernel& ker = T.kernel();
    std::vector<Idx> f(nd, 0);
    while (true) {
      bool ok = true;
      for (size_t w = 0; w < D->size(); ++w) {
        Idx lhs = C.structure.tab[size_t(
            tc->of_code(ker.map_code(tg->code_of[size_t(kap.tab[w])], f, nc)))];
        if (lhs != f[size_t(ab.tab[w])]) {
          ok = false;
          break;
        }
      }
      if (ok) out.emplace_back(G, C.carrier, f);
      size_t i = nd;
      while (i-- > 0) {
        if (++f[i] < Idx(nc)) break;
        f[i] = 0;
        if (i == 0) return out;
      }
      if (nd == 0) break;
    }
    return out;
  }

  // row strategy (cartesian base): a bimorphism has homomorphic slices in
  // each variable, so candidates are |A|-tuples of rows from Hom(B,C)
  // filtered by column homomorphy; every survivor is re-verified against the
  // defining square
  if (base.kind() != BaseKind::cartesian)
    throw BudgetError("bimorphism enumeration budget exceeded");
  std::vector<FinMap> rows = enumerate_homs(T, B, C);
  std::vector<FinMap> cols = enumerate_homs(T, A, C);
  std::unordered_set<std::vector<Idx>, TabHash> col_set;
  for (auto& ch : cols) col_set.insert(ch.tab);

  size_t na = A.carrier->size(), nb = B.carrier->size();
  uint64_t tuples = 1;
  for (size_t i = 0; i < na; ++i) {
    tuples *= std::max<size_t>(rows.size(), 1);
    if (tuples > budget) throw BudgetError("bimorphism enumeration budget exceeded");
  }
  if (rows.empty()) return out;

  const auto& pi = base.pairing(A.carrier, B.carrier);
  std::vector<size_t> choice(na, 0);
  std::vector<Idx> col(na);
  while (true) {
    bool ok = true;
    for (size_t b = 0; b < nb && ok; ++b) {
      for (size_t a = 0; a < na; ++a) col[a] = rows[choice[a]].tab[b];
      ok = col_set.count(col) > 0;
    }
    if (ok) {
      std::vector<Idx> f(nd);
      for (size_t a = 0; a < na; ++a)
        for (size_t b = 0; b < nb; ++b)
          f[size_t(pi.pair(Idx(a), Idx(b)))] = rows[choice[a]].tab[b];
      BimorphismCandidate cand{A, B, C, FinMap(G, C.carrier, std::move(f))};
      if (is_bimorphism(T, cand).ok) out.push_back(cand.f);
    }
    size_t i = na;
    bool done = true;
    while (i-- > 0) {
      if (++choice[i] < rows.size()) {
        done = false;
        break;
      }
      choice[i] = 0;
    }
    if (done || na == 0) break;
  }
  std::sort(out.begin(), out.end(),
            [](const FinMap& x, const FinMap& y) { return x.tab < y.tab; });
  return out;
}

}  // namespace emt
