#ifndef EMT_MONAD_HPP
#define EMT_MONAD_HPP

#include <functional>
#include <list>
#include <memory>
#include <mutex>
#include <optional>

#include "emt/finset.hpp"
#include "emt/report.hpp"

namespace emt {

struct EngineConfig {
  uint64_t guard = uint64_t(1) << 20;   // max size of any materialized T(C)
  uint64_t budget = 10'000'000;         // max candidates in brute enumerations
  size_t dense_threshold = 1024;        // closure strategy switch (free carriers)
  size_t sparse_class_cap = 4096;       // abstract classes in sparse closure
  size_t sparse_node_cap = 6'000'000;   // discovered elements in sparse closure
  // carriers whose element labels would exceed this are refused even when
  // their cardinality fits the guard (nested tensor labels grow long)
  uint64_t label_byte_budget = 400'000'000;
};

// A generating operation of the monad's algebraic signature: an element of
// T(n) for the canonical arity set n = {"0",...,"k-1"}.
struct SignatureOp {
  std::string name;
  int arity = 0;
  Obj arity_obj;
  Idx elem = 0;  // index in T(arity_obj)
};

// Materialized application T(X): the carrier object plus the code table that
// the kernels use for pointwise computation.  Codes: powerset = bitmask over
// X-indices, vector_space(p) = radix-p digit string over X-indices,
// identity = the X-index itself.
struct TApp {
  Obj X;
  Obj TX;
  std::vector<uint64_t> code_of;  // per TX index
  std::vector<Idx> idx_of_code;   // direct-addressed by code
  Idx of_code(uint64_t c) const { return idx_of_code[size_t(c)]; }
};
using TAppPtr = std::shared_ptr<const TApp>;

struct SigmaAlg;
struct SigmaTables;

class MonadKernel {
 public:
  virtual ~MonadKernel() = default;
  virtual std::string name() const = 0;
  virtual std::optional<uint64_t> t_size(uint64_t n) const = 0;
  // element labels in canonical order together with their codes
  virtual void build_elements(const FinSet& X, std::vector<std::string>& labels,
                              std::vector<uint64_t>& codes) const = 0;
  // estimated total label bytes of T(X)
  virtual std::optional<uint64_t> label_bytes(const FinSet& X) const = 0;
  virtual uint64_t map_code(uint64_t code, std::span<const Idx> u, size_t ny) const = 0;
  virtual uint64_t eta_code(Idx x) const = 0;
  // tt is a code over TX-indices; tx_codes are the codes of T(X)'s elements
  virtual uint64_t mu_code(uint64_t tt, std::span<const uint64_t> tx_codes) const = 0;
  // cartesian monoidal structure on codes; pi indexes X⊗Y
  virtual uint64_t kappa_code(uint64_t s, uint64_t t, const PairIndexer& pi) const = 0;
  virtual std::vector<std::pair<std::string, int>> signature_names() const = 0;  // (name, arity)
  virtual uint64_t signature_elem_code(int op) const = 0;  // code in T(arity set)
  // direct interpretation of signature op on free-carrier codes
  virtual uint64_t free_op(int op, std::span<const uint64_t> args) const = 0;
  // generator indices a code depends on
  virtual void support(uint64_t code, size_t n, std::vector<Idx>& out) const = 0;
  // canonical element label of a code over base X (matches build_elements)
  virtual std::string code_label(uint64_t code, const FinSet& X) const = 0;
  // code -> explicit (coefficient, index) members (coefficient 1 for powerset)
  virtual void decompose(uint64_t code, std::vector<std::pair<int, Idx>>& out) const = 0;
  // free structure map evaluated on an explicitly listed T(T(G))-element:
  // members are (coefficient, code-of-a-T(G)-element)
  virtual uint64_t mu_sparse(std::span<const std::pair<int, uint64_t>> members) const = 0;
  // evaluate a free-carrier code over an abstract signature algebra
  virtual int fold_code(uint64_t code, size_t n, std::span<const int> gamma,
                        const SigmaAlg& ops) const = 0;
  // the equational laws making fold_code a homomorphism; unite on violation,
  // return whether anything changed
  virtual bool sigma_equations(SigmaTables& ops, const std::function<bool(int, int)>& unite) const = 0;
};

class Monad;
using MonadPtr = std::shared_ptr<Monad>;

// A finitary monoidal monad on finite sets.  Components are materialized
// lazily per requested carrier and memoized; all values immutable.
class Monad : public std::enable_shared_from_this<Monad> {
 public:
  Monad(std::shared_ptr<const MonadKernel> kernel, BasePtr base, EngineConfig cfg);

  const std::string& name() const { return name_; }
  const MonoidalBase& base() const { return *base_; }
  BasePtr base_ptr() const { return base_; }
  const EngineConfig& config() const { return cfg_; }
  const MonadKernel& kernel() const { return *kernel_; }
  bool is_identity() const;

  // size of T(X) for |X| = n, or nullopt on arithmetic overflow
  std::optional<uint64_t> t_size(uint64_t n) const { return kernel_->t_size(n); }
  bool fits_guard(uint64_t n) const;
  void require_guard(uint64_t n, const std::string& what) const;
  void require_carrier(const Obj& X, const std::string& what) const;

  TAppPtr app(const Obj& X) const;          // T(X), memoized, guarded
  Obj T(const Obj& X) const { return app(X)->TX; }
  FinMap T_map(const FinMap& f) const;
  FinMap eta(const Obj& X) const;
  FinMap mu(const Obj& X) const;
  FinMap kappa(const Obj& X, const Obj& Y) const;

  // pointwise T(f) on one element (t indexes T(dom f))
  Idx map_elem(const TApp& tdom, Idx t, std::span<const Idx> u, const TApp& tcod) const;

  const std::vector<SignatureOp>& signature() const { return sig_; }

 private:
  std::shared_ptr<const MonadKernel> kernel_;
  BasePtr base_;
  EngineConfig cfg_;
  std::string name_;
  std::vector<SignatureOp> sig_;

  struct CacheEntry {
    Obj X;
    TAppPtr app;
  };
  mutable std::mutex mu_;
  mutable std::unordered_map<uint64_t, std::vector<CacheEntry>> apps_;
  mutable std::list<std::pair<uint64_t, size_t>> lru_;  // (key, carrier size)
  mutable size_t cached_elems_ = 0;
  uint64_t cocartesian_kappa_code(const TApp& ta, const TApp& tb, Idx side, Idx elem,
                                  const CoproductIndexer& ci) const;
  void init_signature();
};

// name ∈ {identity, powerset, vector_space}; p used for vector_space only.
MonadPtr instantiate_monad(const std::string& name, BasePtr base, int p = 0,
                           EngineConfig cfg = {});

// Law checkers -------------------------------------------------------------

// the three monad laws at carrier X, elementwise
Report check_monad_laws(const Monad& T, const Obj& X);
// monoidal conditions (1)-(5) at carriers (X, Y, Z); each condition runs only
// if its materialized carriers fit the guard (skipped checks are reported)
Report check_monoidal_laws(const Monad& T, const Obj& X, const Obj& Y, const Obj& Z);

// does T(X⊗-) carry the reflexive coequalizer of (f,g) in FinSet to a
// coequalizer diagram?
Report check_preserves_reflexive_coeq(const Monad& T, const Obj& X, const FinMap& f,
                                      const FinMap& g, bool require_reflexive = true);

// Kleisli ------------------------------------------------------------------

// f: X -> T(Z), g: Y -> T(W); returns κ_{Z,W}·(f⊗g) : X⊗Y -> T(Z⊗W)
FinMap kleisli_tensor(const Monad& T, const Obj& Z, const Obj& W, const FinMap& f,
                      const FinMap& g);
// recover κ_{X,Y} as 1_{TX} ⊗_T 1_{TY}
FinMap kleisli_kappa_roundtrip(const Monad& T, const Obj& X, const Obj& Y);

struct MonadMorphism {
  MonadPtr source, target;
  std::function<FinMap(const Obj&)> component;
  FinMap at(const Obj& X) const { return component(X); }
};

MonadMorphism identity_monad_morphism(MonadPtr T);
// the unit η : Id -> T
MonadMorphism unit_monad_morphism(MonadPtr id_monad, MonadPtr T);

// naturality on sampled maps, unit law, multiplication law at the given
// carriers; the monoidal square when `monoidal`
Report check_monad_morphism(const MonadMorphism& phi, const std::vector<Obj>& carriers,
                            bool monoidal);

// induced functor on Kleisli maps: L(f) = φ_Y·f
struct KleisliFunctor {
  MonadMorphism phi;
};
KleisliFunctor kleisli_functor(const MonadMorphism& phi);
FinMap kleisli_apply(const KleisliFunctor& L, const FinMap& f, const Obj& Y);

}  // namespace emt

#endif
