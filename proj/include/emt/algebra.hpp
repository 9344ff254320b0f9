#ifndef EMT_ALGEBRA_HPP
#define EMT_ALGEBRA_HPP

#include <functional>
#include <optional>

#include "emt/monad.hpp"
#include "emt/report.hpp"

namespace emt {

// An Eilenberg-Moore algebra: finite carrier with structure map
// a : T(carrier) -> carrier.  free_on marks free algebras (T(G), mu_G),
// which unlocks generator-pair and code-level shortcuts downstream.
struct Algebra {
  Obj carrier;
  FinMap structure;
  std::optional<Obj> free_on;

  uint64_t key() const {
    uint64_t h = carrier->hash();
    for (Idx v : structure.tab) h = (h ^ uint64_t(v)) * 1099511628211ull;
    return h;
  }
};

bool same_algebra(const Algebra& A, const Algebra& B);

// both algebra laws, elementwise (associativity skipped with a report entry
// when |TT(A)| exceeds the guard)
Report check_algebra(const Monad& T, const Algebra& A);

// (T(X), mu_X); requires |TT(X)| within guard to materialize the structure
Algebra free_algebra(const Monad& T, const Obj& X);

bool is_algebra_hom(const Monad& T, const Algebra& A, const Algebra& B, const FinMap& f);

// all T-algebra homomorphisms A -> B, deterministically ordered by table
std::vector<FinMap> enumerate_homs(const Monad& T, const Algebra& A, const Algebra& B);

// Interpretation of the monad's signature operations on one algebra.
struct AlgebraOps {
  std::vector<int> arities;
  std::function<Idx(int, std::span<const Idx>)> apply;

  Idx ap0(int op) const { return apply(op, {}); }
  Idx ap1(int op, Idx a) const {
    Idx args[1] = {a};
    return apply(op, args);
  }
  Idx ap2(int op, Idx a, Idx b) const {
    Idx args[2] = {a, b};
    return apply(op, args);
  }
};

AlgebraOps make_algebra_ops(const Monad& T, const Algebra& A);

// a small generating subset of A under the signature operations (greedy,
// deterministic); empty when the signature already generates everything
// from constants
std::vector<Idx> generating_subset(const Monad& T, const Algebra& A, const AlgebraOps& ops);

}  // namespace emt

#endif
