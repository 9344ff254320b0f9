#include "emt/algebra.hpp"

#include <algorithm>

namespace emt {

bool same_algebra(const Algebra& A, const Algebra& B) {
  return same_obj(A.carrier, B.carrier) && A.structure.tab == B.structure.tab;
}

Report check_algebra(const Monad& T, const Algebra& A) {
  Report rep;
  Obj C = A.carrier;
  if (!same_obj(A.structure.dom, T.T(C)) || !same_obj(A.structure.cod, C))
    throw PreconditionError("structure map is not T(A) -> A");

  FinMap unit = compose(A.structure, T.eta(C));
  bool uok = unit.is_identity();
  std::string w;
  if (!uok)
    for (size_t i = 0; i < unit.tab.size(); ++i)
      if (unit.tab[i] != Idx(i)) {
        w = "a(eta(" + C->label(Idx(i)) + ")) = " + C->label(unit.tab[i]);
        break;
      }
  rep.check("unit law", uok, w);

  Obj TC = T.T(C);
  auto tt = T.t_size(TC->size());
  if (!tt || *tt > T.config().guard) {
    rep.skip("associativity law", "|TT(A)| exceeds guard");
    return rep;
  }
  FinMap lhs = compose(A.structure, T.T_map(A.structure));
  FinMap rhs = compose(A.structure, T.mu(C));
  bool ok = lhs.tab == rhs.tab;
  if (!ok)
    for (size_t i = 0; i < lhs.tab.size(); ++i)
      if (lhs.tab[i] != rhs.tab[i]) {
        w = "at " + lhs.dom->label(Idx(i)) + ": " + C->label(lhs.tab[i]) + " != " +
            C->label(rhs.tab[i]);
        break;
      }
  rep.check("associativity law", ok, w);
  return rep;
}

Algebra free_algebra(const Monad& T, const Obj& X) {
  Obj TX = T.T(X);
  T.require_guard(TX->size(), "T(X)");
  return Algebra{TX, T.mu(X), X};
}

bool is_algebra_hom(const Monad& T, const Algebra& A, const Algebra& B, const FinMap& f) {
  if (!same_obj(f.dom, A.carrier) || !same_obj(f.cod, B.carrier)) return false;
  FinMap lhs = compose(f, A.structure);
  FinMap rhs = compose(B.structure, T.T_map(f));
  return lhs.tab == rhs.tab;
}

AlgebraOps make_algebra_ops(const Monad& T, const Algebra& A) {
  AlgebraOps ops;
  const auto& sig = T.signature();
  for (const auto& op : sig) ops.arities.push_back(op.arity);

  if (A.free_on) {
    auto tg = T.app(*A.free_on);
    const MonadKernel* k = &T.kernel();
    ops.apply = [tg, k](int op, std::span<const Idx> args) {
      uint64_t buf[2];
      for (size_t i = 0; i < args.size(); ++i) buf[i] = tg->code_of[size_t(args[i])];
      return tg->of_code(k->free_op(op, std::span<const uint64_t>(buf, args.size())));
    };
    return ops;
  }

  T.require_guard(A.carrier->size(), "A");
  auto ta = T.app(A.carrier);
  const Monad* tm = &T;
  FinMap a = A.structure;
  // capture the small arity carriers up front
  std::vector<TAppPtr> arity_apps;
  std::vector<Idx> elems;
  for (const auto& op : sig) {
    arity_apps.push_back(T.app(op.arity_obj));
    elems.push_back(op.elem);
  }
  ops.apply = [tm, ta, a, arity_apps, elems](int op, std::span<const Idx> args) {
    std::vector<Idx> u(args.begin(), args.end());
    Idx t = tm->map_elem(*arity_apps[size_t(op)], elems[size_t(op)], u, *ta);
    return a.tab[size_t(t)];
  };
  return ops;
}

namespace {

// closure of `seed` under the signature operations; returns membership mask
std::vector<char> op_closure(const AlgebraOps& ops, size_t n, const std::vector<Idx>& seed) {
  std::vector<char> in(n, 0);
  std::vector<Idx> members;
  auto add = [&](Idx x) {
    if (!in[size_t(x)]) {
      in[size_t(x)] = 1;
      members.push_back(x);
    }
  };
  for (size_t op = 0; op < ops.arities.size(); ++op)
    if (ops.arities[op] == 0) add(ops.ap0(int(op)));
  for (Idx s : seed) add(s);
  size_t head = 0;
  while (head < members.size()) {
    size_t stop = members.size();
    for (size_t op = 0; op < ops.arities.size(); ++op) {
      int ar = ops.arities[op];
      if (ar == 1) {
        for (size_t i = head; i < stop; ++i) add(ops.ap1(int(op), members[i]));
      } else if (ar == 2) {
        for (size_t i = 0; i < stop; ++i)
          for (size_t j = (i < head ? head : 0); j < stop; ++j) {
            add(ops.ap2(int(op), members[i], members[j]));
            add(ops.ap2(int(op), members[j], members[i]));
          }
      }
    }
    head = stop;
    if (members.size() == n) break;
  }
  return in;
}

}  // namespace

std::vector<Idx> generating_subset(const Monad&, const Algebra& A, const AlgebraOps& ops) {
  size_t n = A.carrier->size();
  std::vector<Idx> gens;
  std::vector<char> in = op_closure(ops, n, gens);
  while (true) {
    Idx missing = -1;
    for (size_t i = 0; i < n; ++i)
      if (!in[i]) {
        missing = Idx(i);
        break;
      }
    if (missing < 0) break;
    gens.push_back(missing);
    in = op_closure(ops, n, gens);
  }
  return gens;
}

std::vector<FinMap> enumerate_homs(const Monad& T, const Algebra& A, const Algebra& B) {
  const uint64_t budget = T.config().budget;
  std::vector<FinMap> out;
  size_t na = A.carrier->size(), nb = B.carrier->size();

  auto count_pow = [&](uint64_t b, uint64_t e) -> std::optional<uint64_t> {
    uint64_t r = 1;
    for (uint64_t i = 0; i < e; ++i) {
      if (b != 0 && r > budget) return std::nullopt;
      r *= std::max<uint64_t>(b, 1);
    }
    return r;
  };

  auto push_verified = [&](const FinMap& f) {
    if (is_algebra_hom(T, A, B, f)) out.push_back(f);
  };

  // free source: homs T(G) -> B correspond to maps G -> B
  if (A.free_on) {
    Obj G = *A.free_on;
    auto cnt = count_pow(nb, G->size());
    if (!cnt || *cnt > budget)
      throw BudgetError("hom enumeration budget exceeded for free source");
    if (nb == 0 && G->size() > 0) return out;
    std::vector<Idx> u(G->size(), 0);
    auto ta = T.app(G);
    auto tb = T.app(B.carrier);
    while (true) {
      // free extension b . T(u), a homomorphism by construction
      std::vector<Idx> tabf(ta->TX->size());
      for (size_t t = 0; t < tabf.size(); ++t)
        tabf[t] = B.structure.tab[size_t(T.map_elem(*ta, Idx(t), u, *tb))];
      out.emplace_back(A.carrier, B.carrier, std::move(tabf));
      size_t i = 0;
      for (; i < u.size(); ++i) {
        if (++u[i] < Idx(nb)) break;
        u[i] = 0;
      }
      if (i == u.size() || u.empty()) break;
    }
    std::sort(out.begin(), out.end(),
              [](const FinMap& f, const FinMap& g) { return f.tab < g.tab; });
    out.erase(std::unique(out.begin(), out.end(),
                          [](const FinMap& f, const FinMap& g) { return f.tab == g.tab; }),
              out.end());
    return out;
  }

  auto brute = count_pow(nb, na);
  if (brute && *brute <= budget) {
    if (nb == 0 && na > 0) return out;
    std::vector<Idx> u(na, 0);
    while (true) {
      push_verified(FinMap(A.carrier, B.carrier, u));
      size_t i = 0;
      for (; i < u.size(); ++i) {
        if (++u[i] < Idx(nb)) break;
        u[i] = 0;
      }
      if (i == u.size() || u.empty()) break;
    }
    std::sort(out.begin(), out.end(),
              [](const FinMap& f, const FinMap& g) { return f.tab < g.tab; });
    return out;
  }

  // generated extension: assign generators, close under ops, verify
  AlgebraOps aops = make_algebra_ops(T, A);
  AlgebraOps bops = make_algebra_ops(T, B);
  std::vector<Idx> gens = generating_subset(T, A, aops);
  auto cnt = count_pow(nb, gens.size());
  if (!cnt || *cnt > budget) throw BudgetError("hom enumeration budget exceeded");

  // op application graph over A, precomputed
  struct App {
    int op;
    Idx x, y, out;  // y = -1 for unary
  };
  std::vector<App> apps;
  for (size_t op = 0; op < aops.arities.size(); ++op) {
    int ar = aops.arities[op];
    if (ar == 1)
      for (size_t x = 0; x < na; ++x)
        apps.push_back({int(op), Idx(x), -1, aops.ap1(int(op), Idx(x))});
    else if (ar == 2)
      for (size_t x = 0; x < na; ++x)
        for (size_t y = 0; y < na; ++y)
          apps.push_back({int(op), Idx(x), Idx(y), aops.ap2(int(op), Idx(x), Idx(y))});
  }

  std::vector<Idx> assign(gens.size(), 0);
  while (true) {
    std::vector<Idx> val(na, -1);
    bool bad = false;
    for (size_t op = 0; op < aops.arities.size() && !bad; ++op)
      if (aops.arities[op] == 0) {
        Idx tgt = aops.ap0(int(op));
        Idx v = bops.ap0(int(op));
        if (val[size_t(tgt)] >= 0 && val[size_t(tgt)] != v) bad = true;
        val[size_t(tgt)] = v;
      }
    for (size_t i = 0; i < gens.size() && !bad; ++i) {
      Idx g = gens[i];
      if (val[size_t(g)] >= 0 && val[size_t(g)] != assign[i]) bad = true;
      val[size_t(g)] = assign[i];
    }
    bool changed = true;
    while (changed && !bad) {
      changed = false;
      for (const App& ap : apps) {
        if (val[size_t(ap.x)] < 0) continue;
        Idx v;
        if (ap.y < 0)
          v = bops.ap1(ap.op, val[size_t(ap.x)]);
        else {
          if (val[size_t(ap.y)] < 0) continue;
          v = bops.ap2(ap.op, val[size_t(ap.x)], val[size_t(ap.y)]);
        }
        Idx& slot = val[size_t(ap.out)];
        if (slot < 0) {
          slot = v;
          changed = true;
        } else if (slot != v) {
          bad = true;
          break;
        }
      }
    }
    if (!bad) {
      bool total = true;
      for (Idx v : val) total &= (v >= 0);
      if (total) push_verified(FinMap(A.carrier, B.carrier, val));
    }
    size_t i = 0;
    for (; i < assign.size(); ++i) {
      if (++assign[i] < Idx(nb)) break;
      assign[i] = 0;
    }
    if (i == assign.size() || assign.empty()) break;
  }
  std::sort(out.begin(), out.end(),
            [](const FinMap& f, const FinMap& g) { return f.tab < g.tab; });
  return out;
}

}  // namespace emt
