#ifndef EMT_TEST_FIXTURES_HPP
#define EMT_TEST_FIXTURES_HPP

#include "emt/algebra.hpp"

namespace emt::fixtures {

inline Obj mkset(int n, const std::string& prefix = "x") {
  std::vector<std::string> v;
  for (int i = 0; i < n; ++i) v.push_back(prefix + std::to_string(i));
  return FinSet::make(v);
}

// the n-chain 0 < 1 < ... < n-1 as a powerset algebra: a(S) = max(S ∪ {0})
inline Algebra chain(const Monad& P, int n) {
  Obj C = mkset(n, "");
  auto tc = P.app(C);
  std::vector<Idx> tab(tc->TX->size());
  for (size_t t = 0; t < tab.size(); ++t) {
    uint64_t mask = tc->code_of[t];
    Idx mx = 0;
    while (mask) {
      int i = 63 - __builtin_clzll(mask);
      mx = Idx(i);
      break;
    }
    tab[t] = mx;
  }
  return Algebra{C, FinMap(tc->TX, C, std::move(tab)), std::nullopt};
}

// the F_p vector space of dimension d as a vector_space(p) algebra on the
// free carrier (identified with T of a d-element set)
inline Algebra fp_space(const Monad& V, int d) {
  return free_algebra(V, mkset(d, "e"));
}

}  // namespace emt::fixtures

#endif
