#ifndef EMT_COHERENCE_HPP
#define EMT_COHERENCE_HPP

#include "emt/tensor.hpp"

namespace emt {

// A structure morphism of (C^T, ⊠, TE) together with the verification of
// the square it was induced from.
struct CoherenceCell {
  std::string kind;
  FinMap map;
  Report derivation;
};

struct AssociatorResult {
  TensorPtr AB, BC, AB_C, A_BC;
  CoherenceCell cell;  // (A⊠B)⊠C -> A⊠(B⊠C)
};

// induced by Tα on the iterated-coequalizer presentation; well-definedness
// verified over every preimage
AssociatorResult associator(const Monad& T, TensorCache& cache, const Algebra& A,
                            const Algebra& B, const Algebra& C);

struct UnitorResult {
  TensorPtr tensor;  // TE⊠A (left) or A⊠TE (right)
  CoherenceCell cell;
  FinMap inverse;
};

UnitorResult left_unitor(const Monad& T, TensorCache& cache, const Algebra& A);
UnitorResult right_unitor(const Monad& T, TensorCache& cache, const Algebra& A);

struct BraidingResult {
  TensorPtr AB, BA;
  CoherenceCell cell;
};

BraidingResult braiding(const Monad& T, TensorCache& cache, const Algebra& A,
                        const Algebra& B);

// pentagon, triangle, naturality squares, hexagon and σ̄² = 1 over the
// fixture list; instances whose carriers exceed the guard are reported as
// skipped
Report check_coherence(const Monad& T, TensorCache& cache, const std::vector<Algebra>& fixtures);

// Cor-TriQ coequalizer presentations of (A⊠B)⊠C / A⊠(B⊠C) with
// universal-property checks, and surjectivity of the four-fold map
Report verify_induced_presentations(const Monad& T, TensorCache& cache, const Algebra& A,
                                    const Algebra& B, const Algebra& C, const Algebra& D,
                                    const std::vector<Algebra>& test_codomains);

struct MonoidalFunctorResult {
  Algebra A_S, B_S;     // the images C^φ(A), C^φ(B)
  TensorResult s_tensor;  // A⊛B over S
  CoherenceCell phibar;   // A⊛B -> A⊠B
  Report coherence;
};

// the induced algebraic functor C^φ : C^T -> C^S is monoidal
MonoidalFunctorResult algebraic_functor_monoidal(const MonadMorphism& phi, TensorCache& cache_T,
                                                 const Algebra& A, const Algebra& B);

// κ̄_{X,Y} : TX⊠TY -> T(X⊗Y), the canonical identification, as a cell
CoherenceCell kappa_bar(const Monad& T, TensorCache& cache, const Obj& X, const Obj& Y);

}  // namespace emt

#endif
