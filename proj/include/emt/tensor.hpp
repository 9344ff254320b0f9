#ifndef EMT_TENSOR_HPP
#define EMT_TENSOR_HPP

#include "emt/bimorphism.hpp"
#include "emt/congruence.hpp"

namespace emt {

// The tensor product A⊠B presented by its coequalizer q : T(A⊗B) -> A⊠B.
struct TensorResult {
  Algebra left, right;
  Obj gens;                                 // A⊗B
  Algebra product;                          // (A⊠B, a⋈b)
  FinMap q;                                 // T(A⊗B) -> A⊠B
  std::vector<Idx> section;                 // class -> canonical T(A⊗B) index
  FinMap embed;                             // q·η : A⊗B -> A⊠B
  std::vector<std::pair<Idx, Idx>> pairs;   // generator pairs coequalized
  Congruence congruence;
};
using TensorPtr = std::shared_ptr<const TensorResult>;

// coequalizer of (μ·Tκ, T(a⊗b)) computed from generator pairs over TA⊗TB
TensorResult tensor_product(const Monad& T, const Algebra& A, const Algebra& B);
// the Linton presentation (μ·T(κ·(η·a⊗1)), μ·T(κ·(1⊗η·b))); must induce the
// identical partition
TensorResult tensor_product_alt(const Monad& T, const Algebra& A, const Algebra& B);

// unique g⊠h with (g⊠h)·q = q'·T(g⊗h)
FinMap tensor_of_homs(const Monad& T, const TensorResult& tAB, const TensorResult& tA2B2,
                      const FinMap& g, const FinMap& h);

// unique homomorphism f̄ with f̄·q = c·Tf, for a bimorphism f
FinMap classify_bimorphism(const Monad& T, const TensorResult& tAB, const Algebra& C,
                           const FinMap& f);
// g·q·η, a bimorphism inducing g
FinMap bimorphism_of_hom(const Monad& T, const TensorResult& tAB, const Algebra& C,
                         const FinMap& g);

// TX⊠TY ≅ (T(X⊗Y), μ) with q corresponding to μ·Tκ, exhibited explicitly
Report check_free_tensor_identification(const Monad& T, const Obj& X, const Obj& Y);

// memoizing wrapper used by coherence and action machinery
class TensorCache {
 public:
  TensorPtr get(const Monad& T, const Algebra& A, const Algebra& B);

 private:
  std::mutex mu_;
  std::unordered_map<uint64_t, std::vector<TensorPtr>> map_;
  std::list<std::pair<uint64_t, size_t>> lru_;
  size_t cached_elems_ = 0;
};

}  // namespace emt

#endif
