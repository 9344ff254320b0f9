// Builtin monad kernels: identity, powerset, vector_space(p).
#include <algorithm>
#include <cassert>

#include "emt/monad.hpp"
#include "emt/sigma.hpp"

namespace emt {

namespace {

// -------------------------------------------------------------- identity

class IdentityKernel final : public MonadKernel {
 public:
  std::string name() const override { return "identity"; }
  std::optional<uint64_t> t_size(uint64_t n) const override { return n; }

  void build_elements(const FinSet& X, std::vector<std::string>& labels,
                      std::vector<uint64_t>& codes) const override {
    labels = X.labels();
    codes.resize(X.size());
    for (size_t i = 0; i < codes.size(); ++i) codes[i] = i;
  }

  uint64_t map_code(uint64_t code, std::span<const Idx> u, size_t) const override {
    return uint64_t(u[size_t(code)]);
  }
  uint64_t eta_code(Idx x) const override { return uint64_t(x); }
  uint64_t mu_code(uint64_t tt, std::span<const uint64_t> tx_codes) const override {
    return tx_codes[size_t(tt)];
  }
  uint64_t kappa_code(uint64_t s, uint64_t t, const PairIndexer& pi) const override {
    return uint64_t(pi.pair(Idx(s), Idx(t)));
  }
  std::string code_label(uint64_t code, const FinSet& X) const override {
    return X.label(Idx(code));
  }
  std::optional<uint64_t> label_bytes(const FinSet& X) const override {
    uint64_t b = 0;
    for (const auto& l : X.labels()) b += l.size() + 48;
    return b;
  }
  std::vector<std::pair<std::string, int>> signature_names() const override { return {}; }
  uint64_t signature_elem_code(int) const override { return 0; }
  uint64_t free_op(int, std::span<const uint64_t>) const override {
    throw EngineInvariantError("identity monad has an empty signature");
  }
  void support(uint64_t code, size_t, std::vector<Idx>& out) const override {
    out.assign(1, Idx(code));
  }
  void decompose(uint64_t code, std::vector<std::pair<int, Idx>>& out) const override {
    out.assign(1, {1, Idx(code)});
  }
  uint64_t mu_sparse(std::span<const std::pair<int, uint64_t>> members) const override {
    return members[0].second;
  }
  int fold_code(uint64_t code, size_t, std::span<const int> gamma,
                const SigmaAlg&) const override {
    return gamma[size_t(code)];
  }
  bool sigma_equations(SigmaTables&, const std::function<bool(int, int)>&) const override {
    return false;
  }
};

// -------------------------------------------------------------- powerset

class PowersetKernel final : public MonadKernel {
 public:
  std::string name() const override { return "powerset"; }

  std::optional<uint64_t> t_size(uint64_t n) const override {
    if (n >= 63) return std::nullopt;
    return uint64_t(1) << n;
  }

  void build_elements(const FinSet& X, std::vector<std::string>& labels,
                      std::vector<uint64_t>& codes) const override {
    size_t n = X.size();
    uint64_t total = uint64_t(1) << n;
    std::vector<std::pair<std::string, uint64_t>> lab;
    lab.reserve(total);
    std::vector<std::string> members;
    for (uint64_t m = 0; m < total; ++m) {
      members.clear();
      for (size_t i = 0; i < n; ++i)
        if (m >> i & 1) members.push_back(X.label(Idx(i)));
      lab.emplace_back(subset_label(members), m);
    }
    std::sort(lab.begin(), lab.end());
    labels.resize(total);
    codes.resize(total);
    for (size_t s = 0; s < total; ++s) {
      labels[s] = std::move(lab[s].first);
      codes[s] = lab[s].second;
    }
  }

  uint64_t map_code(uint64_t code, std::span<const Idx> u, size_t) const override {
    uint64_t r = 0;
    while (code) {
      int i = __builtin_ctzll(code);
      code &= code - 1;
      r |= uint64_t(1) << u[size_t(i)];
    }
    return r;
  }
  uint64_t eta_code(Idx x) const override { return uint64_t(1) << x; }
  uint64_t mu_code(uint64_t tt, std::span<const uint64_t> tx_codes) const override {
    uint64_t r = 0;
    while (tt) {
      int j = __builtin_ctzll(tt);
      tt &= tt - 1;
      r |= tx_codes[size_t(j)];
    }
    return r;
  }
  uint64_t kappa_code(uint64_t s, uint64_t t, const PairIndexer& pi) const override {
    uint64_t r = 0;
    size_t ny = pi.right->size();
    for (uint64_t a = s; a;) {
      int i = __builtin_ctzll(a);
      a &= a - 1;
      for (uint64_t b = t; b;) {
        int j = __builtin_ctzll(b);
        b &= b - 1;
        r |= uint64_t(1) << pi.at[size_t(i) * ny + size_t(j)];
      }
    }
    return r;
  }
  std::string code_label(uint64_t code, const FinSet& X) const override {
    std::vector<std::string> members;
    while (code) {
      int i = __builtin_ctzll(code);
      code &= code - 1;
      members.push_back(X.label(Idx(i)));
    }
    return subset_label(members);
  }
  std::optional<uint64_t> label_bytes(const FinSet& X) const override {
    auto total = t_size(X.size());
    if (!total) return std::nullopt;
    uint64_t sum = 0;
    for (const auto& l : X.labels()) sum += l.size() + 1;
    // each element occurs in half the subsets
    return (*total / 2) * sum + *total * 50;
  }

  std::vector<std::pair<std::string, int>> signature_names() const override {
    return {{"bot", 0}, {"join", 2}};
  }
  uint64_t signature_elem_code(int op) const override {
    return op == 0 ? 0u : 3u;  // ∅ in T(0); {0,1} in T({0,1})
  }
  uint64_t free_op(int op, std::span<const uint64_t> args) const override {
    return op == 0 ? 0u : (args[0] | args[1]);
  }
  void support(uint64_t code, size_t, std::vector<Idx>& out) const override {
    out.clear();
    while (code) {
      int i = __builtin_ctzll(code);
      code &= code - 1;
      out.push_back(Idx(i));
    }
  }
  void decompose(uint64_t code, std::vector<std::pair<int, Idx>>& out) const override {
    out.clear();
    while (code) {
      int i = __builtin_ctzll(code);
      code &= code - 1;
      out.emplace_back(1, Idx(i));
    }
  }
  uint64_t mu_sparse(std::span<const std::pair<int, uint64_t>> members) const override {
    uint64_t r = 0;
    for (auto& [c, code] : members)
      if (c) r |= code;
    return r;
  }
  int fold_code(uint64_t code, size_t, std::span<const int> gamma,
                const SigmaAlg& ops) const override {
    int acc = ops.ap0(0);
    while (code) {
      int i = __builtin_ctzll(code);
      code &= code - 1;
      acc = ops.ap2(1, acc, gamma[size_t(i)]);
    }
    return acc;
  }
  bool sigma_equations(SigmaTables& ops, const std::function<bool(int, int)>& unite) const override {
    // join-semilattice-with-bottom laws
    bool changed = false;
    auto need = [&](int a, int b) {
      if (a != b) changed |= unite(a, b);
    };
    int n = ops.n;
    int bot = ops.ap0(0);
    for (int x = 0; x < n; ++x) {
      need(ops.ap2(1, bot, x), x);
      need(ops.ap2(1, x, bot), x);
      need(ops.ap2(1, x, x), x);
    }
    for (int x = 0; x < n; ++x)
      for (int y = x + 1; y < n; ++y) need(ops.ap2(1, x, y), ops.ap2(1, y, x));
    const int* t = ops.ops[1].t2.data();
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y) {
        int xy = t[size_t(x) * size_t(n) + size_t(y)];
        const int* ty = t + size_t(y) * size_t(n);
        const int* txy = t + size_t(xy) * size_t(n);
        for (int z = 0; z < n; ++z) need(txy[z], t[size_t(x) * size_t(n) + size_t(ty[z])]);
      }
    return changed;
  }
};

// -------------------------------------------------------- vector_space(p)

class VectorSpaceKernel final : public MonadKernel {
 public:
  explicit VectorSpaceKernel(int p) : p_(p) {}

  std::string name() const override { return "vector_space(" + std::to_string(p_) + ")"; }

  std::optional<uint64_t> t_size(uint64_t n) const override {
    uint64_t r = 1;
    for (uint64_t i = 0; i < n; ++i) {
      if (r > (uint64_t(1) << 62) / uint64_t(p_)) return std::nullopt;
      r *= uint64_t(p_);
    }
    return r;
  }

  // codes are radix-p digit strings, digit i = coefficient of generator i
  int digit(uint64_t code, size_t i) const {
    for (size_t k = 0; k < i; ++k) code /= uint64_t(p_);
    return int(code % uint64_t(p_));
  }

  void build_elements(const FinSet& X, std::vector<std::string>& labels,
                      std::vector<uint64_t>& codes) const override {
    size_t n = X.size();
    uint64_t total = *t_size(n);
    std::vector<std::pair<std::string, uint64_t>> lab;
    lab.reserve(total);
    for (uint64_t c = 0; c < total; ++c) lab.emplace_back(code_label(c, X), c);
    std::sort(lab.begin(), lab.end());
    labels.resize(total);
    codes.resize(total);
    for (size_t s = 0; s < total; ++s) {
      labels[s] = std::move(lab[s].first);
      codes[s] = lab[s].second;
    }
  }

  uint64_t pow_p(size_t i) const {
    uint64_t r = 1;
    for (size_t k = 0; k < i; ++k) r *= uint64_t(p_);
    return r;
  }

  uint64_t map_code(uint64_t code, std::span<const Idx> u, size_t ny) const override {
    std::vector<int> acc(ny, 0);
    size_t i = 0;
    while (code) {
      int d = int(code % uint64_t(p_));
      code /= uint64_t(p_);
      if (d) acc[size_t(u[i])] = (acc[size_t(u[i])] + d) % p_;
      ++i;
    }
    uint64_t r = 0;
    for (size_t j = ny; j-- > 0;) r = r * uint64_t(p_) + uint64_t(acc[j]);
    return r;
  }
  uint64_t eta_code(Idx x) const override { return pow_p(size_t(x)); }
  uint64_t mu_code(uint64_t tt, std::span<const uint64_t> tx_codes) const override {
    // tt's digit j is the coefficient of basis vector tx_codes[j]
    std::vector<int> acc;
    size_t j = 0;
    while (tt) {
      int f = int(tt % uint64_t(p_));
      tt /= uint64_t(p_);
      if (f) {
        uint64_t v = tx_codes[j];
        size_t i = 0;
        while (v) {
          int d = int(v % uint64_t(p_));
          v /= uint64_t(p_);
          if (d) {
            if (acc.size() <= i) acc.resize(i + 1, 0);
            acc[i] = (acc[i] + f * d) % p_;
          }
          ++i;
        }
      }
      ++j;
    }
    uint64_t r = 0;
    for (size_t i = acc.size(); i-- > 0;) r = r * uint64_t(p_) + uint64_t(acc[i]);
    return r;
  }
  uint64_t kappa_code(uint64_t s, uint64_t t, const PairIndexer& pi) const override {
    size_t ny = pi.right->size();
    std::vector<int> acc(pi.prod->size(), 0);
    uint64_t a = s;
    size_t i = 0;
    while (a) {
      int di = int(a % uint64_t(p_));
      a /= uint64_t(p_);
      if (di) {
        uint64_t b = t;
        size_t j = 0;
        while (b) {
          int dj = int(b % uint64_t(p_));
          b /= uint64_t(p_);
          if (dj) acc[size_t(pi.at[i * ny + j])] = (di * dj) % p_;
          ++j;
        }
      }
      ++i;
    }
    uint64_t r = 0;
    for (size_t k = acc.size(); k-- > 0;) r = r * uint64_t(p_) + uint64_t(acc[k]);
    return r;
  }

  // coefficient map listing the nonzero coordinates in carrier order
  std::string code_label(uint64_t code, const FinSet& X) const override {
    std::string s = "[";
    uint64_t r = code;
    bool first = true;
    for (size_t i = 0; i < X.size() && r; ++i) {
      int d = int(r % uint64_t(p_));
      r /= uint64_t(p_);
      if (!d) continue;
      if (!first) s += ',';
      first = false;
      s += X.label(Idx(i));
      s += ':';
      s += char('0' + d);
    }
    s += ']';
    return s;
  }

  std::optional<uint64_t> label_bytes(const FinSet& X) const override {
    auto total = t_size(X.size());
    if (!total) return std::nullopt;
    uint64_t sum = 0;
    for (const auto& l : X.labels()) sum += l.size() + 4;
    // a coordinate is nonzero in (p-1)/p of the elements
    return *total * (sum * uint64_t(p_ - 1) / uint64_t(p_) + 50);
  }

  // ops: 0 = zero (arity 0), 1 = add (arity 2), 2..p+1 = scalar by λ (arity 1)
  std::vector<std::pair<std::string, int>> signature_names() const override {
    std::vector<std::pair<std::string, int>> r = {{"zero", 0}, {"add", 2}};
    for (int l = 0; l < p_; ++l) r.emplace_back("scalar" + std::to_string(l), 1);
    return r;
  }
  uint64_t signature_elem_code(int op) const override {
    if (op == 0) return 0;
    if (op == 1) return uint64_t(1) + uint64_t(p_);  // digits (1,1) over {0,1}
    return uint64_t(op - 2);                         // digit λ over {0}
  }
  uint64_t free_op(int op, std::span<const uint64_t> args) const override {
    if (op == 0) return 0;
    if (op == 1) {  // digitwise sum mod p
      uint64_t a = args[0], b = args[1], r = 0, mult = 1;
      while (a || b) {
        int d = int(a % uint64_t(p_) + b % uint64_t(p_)) % p_;
        r += mult * uint64_t(d);
        a /= uint64_t(p_);
        b /= uint64_t(p_);
        mult *= uint64_t(p_);
      }
      return r;
    }
    int l = op - 2;
    uint64_t a = args[0], r = 0, mult = 1;
    while (a) {
      r += mult * uint64_t(int(a % uint64_t(p_)) * l % p_);
      a /= uint64_t(p_);
      mult *= uint64_t(p_);
    }
    return r;
  }
  void support(uint64_t code, size_t, std::vector<Idx>& out) const override {
    out.clear();
    size_t i = 0;
    while (code) {
      if (code % uint64_t(p_)) out.push_back(Idx(i));
      code /= uint64_t(p_);
      ++i;
    }
  }
  void decompose(uint64_t code, std::vector<std::pair<int, Idx>>& out) const override {
    out.clear();
    size_t i = 0;
    while (code) {
      int d = int(code % uint64_t(p_));
      if (d) out.emplace_back(d, Idx(i));
      code /= uint64_t(p_);
      ++i;
    }
  }
  uint64_t mu_sparse(std::span<const std::pair<int, uint64_t>> members) const override {
    std::vector<int> acc;
    for (auto& [f, v0] : members) {
      uint64_t v = v0;
      size_t i = 0;
      while (v) {
        int d = int(v % uint64_t(p_));
        v /= uint64_t(p_);
        if (d) {
          if (acc.size() <= i) acc.resize(i + 1, 0);
          acc[i] = (acc[i] + f * d) % p_;
        }
        ++i;
      }
    }
    uint64_t r = 0;
    for (size_t i = acc.size(); i-- > 0;) r = r * uint64_t(p_) + uint64_t(acc[i]);
    return r;
  }
  int fold_code(uint64_t code, size_t, std::span<const int> gamma,
                const SigmaAlg& ops) const override {
    int acc = ops.ap0(0);
    size_t i = 0;
    while (code) {
      int d = int(code % uint64_t(p_));
      code /= uint64_t(p_);
      if (d) acc = ops.ap2(1, acc, ops.ap1(2 + d, gamma[i]));
      ++i;
    }
    return acc;
  }
  bool sigma_equations(SigmaTables& ops, const std::function<bool(int, int)>& unite) const override {
    bool changed = false;
    auto need = [&](int a, int b) {
      if (a != b) changed |= unite(a, b);
    };
    int n = ops.n;
    int zero = ops.ap0(0);
    for (int x = 0; x < n; ++x) {
      need(ops.ap2(1, zero, x), x);
      need(ops.ap2(1, x, zero), x);
      need(ops.ap1(2 + 1, x), x);     // 1·x = x
      need(ops.ap1(2 + 0, x), zero);  // 0·x = 0
      for (int l = 0; l < p_; ++l) {
        for (int m = 0; m < p_; ++m)  // λ(μx) = (λμ)x ; λx + μx = (λ+μ)x
          need(ops.ap1(2 + l, ops.ap1(2 + m, x)), ops.ap1(2 + (l * m) % p_, x));
        for (int m = 0; m < p_; ++m)
          need(ops.ap2(1, ops.ap1(2 + l, x), ops.ap1(2 + m, x)),
               ops.ap1(2 + (l + m) % p_, x));
      }
    }
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y) {
        need(ops.ap2(1, x, y), ops.ap2(1, y, x));
        for (int l = 0; l < p_; ++l)  // λ(x+y) = λx + λy
          need(ops.ap1(2 + l, ops.ap2(1, x, y)),
               ops.ap2(1, ops.ap1(2 + l, x), ops.ap1(2 + l, y)));
      }
    const int* t = ops.ops[1].t2.data();
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y) {
        int xy = t[size_t(x) * size_t(n) + size_t(y)];
        const int* ty = t + size_t(y) * size_t(n);
        const int* txy = t + size_t(xy) * size_t(n);
        for (int z = 0; z < n; ++z) need(txy[z], t[size_t(x) * size_t(n) + size_t(ty[z])]);
      }
    return changed;
  }

 private:
  int p_;
};

bool is_prime(int p) {
  if (p < 2) return false;
  for (int d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

}  // namespace

MonadPtr instantiate_monad(const std::string& name, BasePtr base, int p, EngineConfig cfg) {
  std::shared_ptr<const MonadKernel> k;
  if (name == "identity") {
    k = std::make_shared<IdentityKernel>();
  } else if (name == "powerset") {
    k = std::make_shared<PowersetKernel>();
  } else if (name == "vector_space") {
    if (!is_prime(p)) throw PreconditionError("vector_space requires a prime p, got " +
                                              std::to_string(p));
    if (base->kind() != BaseKind::cartesian && name == "vector_space") {
      // admitted: any monad is monoidal over a cocartesian base via the
      // connecting map, handled generically in Monad::kappa
    }
    k = std::make_shared<VectorSpaceKernel>(p);
  } else {
    throw PreconditionError("unknown monad name: " + name);
  }
  return std::make_shared<Monad>(std::move(k), std::move(base), cfg);
}

}  // namespace emt
