#ifndef EMT_SIGMA_HPP
#define EMT_SIGMA_HPP

#include <cstdint>
#include <vector>

namespace emt {

// Interpretation of a signature over an abstract class set, as consumed by
// the free-element fold.  Implemented by dense tables or by the sparse
// engine's on-the-fly evaluator.
struct SigmaAlg {
  virtual ~SigmaAlg() = default;
  virtual int ap0(int op) const = 0;
  virtual int ap1(int op, int a) const = 0;
  virtual int ap2(int op, int a, int b) const = 0;
};

struct SigmaTables final : SigmaAlg {
  int n = 0;
  struct OpTab {
    int arity = 0;
    int c0 = -1;
    std::vector<int> t1;
    std::vector<int> t2;
  };
  std::vector<OpTab> ops;

  int ap0(int op) const override { return ops[size_t(op)].c0; }
  int ap1(int op, int a) const override { return ops[size_t(op)].t1[size_t(a)]; }
  int ap2(int op, int a, int b) const override {
    return ops[size_t(op)].t2[size_t(a) * size_t(n) + size_t(b)];
  }
};

}  // namespace emt

#endif
