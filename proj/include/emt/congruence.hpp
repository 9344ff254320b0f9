#ifndef EMT_CONGRUENCE_HPP
#define EMT_CONGRUENCE_HPP

#include "emt/algebra.hpp"
#include "emt/sigma.hpp"

namespace emt {

// A partition of an algebra's carrier compatible with every signature
// operation.  Classes are numbered in carrier order of their least member,
// so reps[c] is the least-label member of class c.  For free algebras only
// the generator set is kept (the structure map of a large free algebra is
// never materialized); otherwise the structure map travels along for the
// quotient construction.
struct Congruence {
  Obj carrier;
  std::optional<Obj> free_on;
  std::optional<FinMap> structure;
  std::vector<Idx> class_of;
  std::vector<Idx> reps;
  size_t n_classes() const { return reps.size(); }
};

// smallest congruence containing `pairs`
Congruence congruence_closure(const Monad& T, const Algebra& A,
                              const std::vector<std::pair<Idx, Idx>>& pairs);
// same, on the free algebra (T(G), mu) identified by its generator set
Congruence congruence_closure_free(const Monad& T, const Obj& G,
                                   const std::vector<std::pair<Idx, Idx>>& pairs);

// Abstract closure on a free carrier, usable without materializing the
// partition: eval(code) folds a T(G)-element over the class tables.
struct SparseClosure {
  Obj gens;
  SigmaTables tables;
  std::vector<int> gamma;          // class of eta(g) per generator index
  std::vector<uint64_t> rep_code;  // least discovered code per class
  const MonadKernel* kernel = nullptr;

  int eval(uint64_t code) const {
    return kernel->fold_code(code, gens->size(), gamma, tables);
  }
  // tables satisfies SigmaAlg through its concrete type
};

SparseClosure sparse_closure(const Monad& T, const Obj& G,
                             std::vector<std::pair<uint64_t, uint64_t>> code_pairs);

struct QuotientResult {
  Algebra algebra;
  FinMap projection;
};

// carrier = classes labeled by canonical representatives; well-definedness
// of the induced structure is always re-verified (elementwise over T(A)
// when that fits the guard, via the free-extension identity otherwise)
QuotientResult quotient_algebra(const Monad& T, const Congruence& c);

struct CoequalizerResult {
  Algebra q_algebra;
  FinMap q;
  Congruence congruence;
};

// coequalizer in C^T of algebra homomorphisms f,g : P -> B
CoequalizerResult coequalizer_em(const Monad& T, const Algebra& P, const Algebra& B,
                                 const FinMap& f, const FinMap& g);

// all homomorphisms h : B -> C identifying the listed element pairs; the
// free variant searches Kleisli maps G -> C with constraint pruning
std::vector<FinMap> enumerate_coequalizing_homs(const Monad& T, const Algebra& B,
                                                const std::vector<std::pair<Idx, Idx>>& pairs,
                                                const Algebra& C);
std::vector<FinMap> enumerate_coequalizing_homs_free(
    const Monad& T, const Obj& G, const std::vector<std::pair<Idx, Idx>>& pairs,
    const Algebra& C);

// universal property of q : T(G) -> Q against each test codomain
Report verify_coequalizer_universal_free(const Monad& T, const Obj& G, const Algebra& Q,
                                         const FinMap& q,
                                         const std::vector<std::pair<Idx, Idx>>& pairs,
                                         const std::vector<Algebra>& test_codomains);
Report verify_coequalizer_universal(const Monad& T, const Algebra& B, const Algebra& Q,
                                    const FinMap& q,
                                    const std::vector<std::pair<Idx, Idx>>& pairs,
                                    const std::vector<Algebra>& test_codomains);

}  // namespace emt

#endif
