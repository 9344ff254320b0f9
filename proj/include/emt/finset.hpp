#ifndef EMT_FINSET_HPP
#define EMT_FINSET_HPP

#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace emt {

using Idx = int32_t;

struct ResourceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct BudgetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct PreconditionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
// Raised when an internal soundness check fails (a bug surface, not user error).
struct EngineInvariantError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

uint64_t hash_str(const std::string& s, uint64_t h = 1469598103934665603ull);

class FinSet;
using Obj = std::shared_ptr<const FinSet>;

// A finite labeled set.  Labels are pairwise distinct and kept sorted
// bytewise, so equal sets have identical representations.
class FinSet {
 public:
  static Obj make(std::vector<std::string> labels);
  // labels must already be strictly sorted (skips the sort; used by carrier
  // builders that generate elements in bulk).
  static Obj make_sorted(std::vector<std::string> labels);

  size_t size() const { return labels_.size(); }
  const std::string& label(Idx i) const { return labels_[size_t(i)]; }
  const std::vector<std::string>& labels() const { return labels_; }
  uint64_t hash() const { return hash_; }

  Idx index_of(const std::string& l) const;  // throws if absent
  std::optional<Idx> find(const std::string& l) const;

  bool same(const FinSet& o) const;

 private:
  explicit FinSet(std::vector<std::string> labels);
  std::vector<std::string> labels_;
  uint64_t hash_ = 0;
  mutable std::once_flag index_once_;
  mutable std::unordered_map<std::string, Idx> index_;
  void ensure_index() const;
};

bool same_obj(const Obj& a, const Obj& b);

// Composite-label constructors.  Atomic labels are restricted to
// [0-9A-Za-z_.\-] so that byte order of composite labels follows the
// structural order (see io validation).
std::string pair_label(const std::string& x, const std::string& y);
std::string inl_label(const std::string& x);
std::string inr_label(const std::string& y);
std::string subset_label(const std::vector<std::string>& members);  // sorted input
extern const std::string kUnitLabel;                                // "★"

// A total table-backed map between finite sets.
struct FinMap {
  Obj dom, cod;
  std::vector<Idx> tab;

  FinMap() = default;
  FinMap(Obj d, Obj c, std::vector<Idx> t);

  Idx operator()(Idx i) const { return tab[size_t(i)]; }
  static FinMap identity(Obj X);
  bool is_identity() const;
  bool is_bijection() const;
  bool is_surjection() const;
  FinMap inverse() const;  // requires bijection
};

bool operator==(const FinMap& f, const FinMap& g);
inline bool operator!=(const FinMap& f, const FinMap& g) { return !(f == g); }

// f∘g (apply g first).
FinMap compose(const FinMap& f, const FinMap& g);

enum class BaseKind { cartesian, cocartesian };

// Pairing data for a tensor X⊗Y: element order of the composite object is
// label-sorted, these tables translate structural coordinates.
struct PairIndexer {
  Obj left, right, prod;
  std::vector<Idx> at;                      // rowmajor i*|Y|+j -> sorted index
  std::vector<std::pair<Idx, Idx>> unpair;  // sorted index -> (i,j)
  Idx pair(Idx i, Idx j) const { return at[size_t(i) * right->size() + size_t(j)]; }
};

struct CoproductIndexer {
  Obj left, right, sum;
  std::vector<Idx> inl_at, inr_at;              // component index -> sorted index
  std::vector<std::pair<int, Idx>> case_of;     // sorted index -> (0|1, idx)
};

// One of the two base monoidal structures on finite sets, with its structure
// isomorphisms materialized on demand.
class MonoidalBase {
 public:
  explicit MonoidalBase(BaseKind k);

  BaseKind kind() const { return kind_; }
  bool symmetric() const { return true; }
  Obj unit() const { return unit_; }

  Obj tensor_obj(const Obj& X, const Obj& Y) const;
  FinMap tensor_map(const FinMap& f, const FinMap& g) const;

  FinMap alpha(const Obj& X, const Obj& Y, const Obj& Z) const;
  FinMap lambda(const Obj& X) const;
  FinMap rho(const Obj& X) const;
  FinMap sigma(const Obj& X, const Obj& Y) const;

  const PairIndexer& pairing(const Obj& X, const Obj& Y) const;       // cartesian
  const CoproductIndexer& copairing(const Obj& X, const Obj& Y) const;  // cocartesian

 private:
  BaseKind kind_;
  Obj unit_;
  struct Cache;
  std::shared_ptr<Cache> cache_;
};

using BasePtr = std::shared_ptr<const MonoidalBase>;
BasePtr build_monoidal_base(BaseKind kind);
BasePtr build_monoidal_base(const std::string& kind);

struct UnionFind {
  std::vector<Idx> parent;
  explicit UnionFind(size_t n);
  Idx find(Idx x);
  // merges, keeping the smaller index as root; returns false if already equal
  bool unite(Idx a, Idx b);
  size_t n_classes();
};

}  // namespace emt

#endif
