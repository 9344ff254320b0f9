#ifndef EMT_BIMORPHISM_HPP
#define EMT_BIMORPHISM_HPP

#include "emt/algebra.hpp"

namespace emt {

// a C-morphism f : A⊗B -> C between algebra carriers, candidate for the
// bimorphism square
struct BimorphismCandidate {
  Algebra A, B, C;
  FinMap f;
};

struct BimCheck {
  bool ok = false;
  std::string witness;
};

// c·Tf·κ = f·(a⊗b) elementwise on TA⊗TB
BimCheck is_bimorphism(const Monad& T, const BimorphismCandidate& cand);

// the two one-variable squares (must agree with is_bimorphism on every input)
bool is_bimorphism_componentwise(const Monad& T, const BimorphismCandidate& cand);

// k·f·(g⊗h) for homomorphisms g: A'->A, h: B'->B, k: C->C'; re-verified
BimorphismCandidate transform_bimorphism(const Monad& T, const BimorphismCandidate& cand,
                                         const Algebra& A2, const Algebra& B2,
                                         const Algebra& C2, const FinMap& g, const FinMap& h,
                                         const FinMap& k);

// all bimorphisms A⊗B -> C in lexicographic table order
std::vector<FinMap> enumerate_bimorphisms(const Monad& T, const Algebra& A, const Algebra& B,
                                          const Algebra& C);

}  // namespace emt

#endif
