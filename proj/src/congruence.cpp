#include "emt/congruence.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <deque>
#include <functional>

namespace emt {

namespace {

void fill_partition(Congruence& c, UnionFind& uf, size_t n) {
  c.class_of.assign(n, -1);
  c.reps.clear();
  for (size_t i = 0; i < n; ++i) {
    Idx r = uf.find(Idx(i));
    if (c.class_of[size_t(r)] < 0) {
      c.class_of[size_t(r)] = Idx(c.reps.size());
      c.reps.push_back(Idx(r));
    }
    c.class_of[i] = c.class_of[size_t(r)];
  }
}

AlgebraOps free_code_ops(const Monad& T, const Obj& G) {
  AlgebraOps ops;
  for (const auto& op : T.signature()) ops.arities.push_back(op.arity);
  auto tg = T.app(G);
  const MonadKernel* k = &T.kernel();
  ops.apply = [tg, k](int op, std::span<const Idx> args) {
    uint64_t buf[2];
    for (size_t i = 0; i < args.size(); ++i) buf[i] = tg->code_of[size_t(args[i])];
    return tg->of_code(k->free_op(op, std::span<const uint64_t>(buf, args.size())));
  };
  return ops;
}

// Mal'cev worklist saturation: translate each newly merged pair through
// every one-hole operation application.
void dense_closure(size_t n, const AlgebraOps& ops,
                   const std::vector<std::pair<Idx, Idx>>& pairs, UnionFind& uf) {
  std::deque<std::pair<Idx, Idx>> work(pairs.begin(), pairs.end());
  while (!work.empty()) {
    auto [x, y] = work.front();
    work.pop_front();
    if (!uf.unite(x, y)) continue;
    for (size_t op = 0; op < ops.arities.size(); ++op) {
      int ar = ops.arities[op];
      if (ar == 1) {
        Idx u = ops.ap1(int(op), x), v = ops.ap1(int(op), y);
        if (uf.find(u) != uf.find(v)) work.emplace_back(u, v);
      } else if (ar == 2) {
        for (size_t z = 0; z < n; ++z) {
          Idx u = ops.ap2(int(op), x, Idx(z)), v = ops.ap2(int(op), y, Idx(z));
          if (uf.find(u) != uf.find(v)) work.emplace_back(u, v);
          u = ops.ap2(int(op), Idx(z), x);
          v = ops.ap2(int(op), Idx(z), y);
          if (uf.find(u) != uf.find(v)) work.emplace_back(u, v);
        }
      }
    }
  }
}

}  // namespace

SparseClosure sparse_closure(const Monad& T, const Obj& G,
                             std::vector<std::pair<uint64_t, uint64_t>> code_pairs) {
  const MonadKernel& k = T.kernel();
  const auto& cfg = T.config();
  size_t ng = G->size();

  std::unordered_map<uint64_t, int> node_of;
  std::vector<uint64_t> code_of;
  std::vector<int> parent;
  std::vector<uint64_t> min_code;

  std::function<int(int)> find = [&](int x) {
    int r = x;
    while (parent[size_t(r)] != r) r = parent[size_t(r)];
    while (parent[size_t(x)] != r) {
      int nx = parent[size_t(x)];
      parent[size_t(x)] = r;
      x = nx;
    }
    return r;
  };
  auto unite = [&](int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (b < a) std::swap(a, b);
    parent[size_t(b)] = a;
    min_code[size_t(a)] = std::min(min_code[size_t(a)], min_code[size_t(b)]);
    return true;
  };
  auto node = [&](uint64_t code) {
    auto it = node_of.find(code);
    if (it != node_of.end()) return it->second;
    if (code_of.size() >= cfg.sparse_node_cap)
      throw ResourceError("sparse closure node cap exceeded");
    int id = int(code_of.size());
    node_of.emplace(code, id);
    code_of.push_back(code);
    parent.push_back(id);
    min_code.push_back(code);
    return id;
  };

  std::vector<int> eta_node(ng);
  for (size_t g = 0; g < ng; ++g) eta_node[g] = node(k.eta_code(Idx(g)));
  const auto& sig = T.signature();
  for (size_t op = 0; op < sig.size(); ++op)
    if (sig[op].arity == 0) node(k.free_op(int(op), {}));
  std::sort(code_pairs.begin(), code_pairs.end());
  code_pairs.erase(std::unique(code_pairs.begin(), code_pairs.end()), code_pairs.end());
  for (auto& [a, b] : code_pairs) unite(node(a), node(b));

  // on-the-fly signature interpretation: classes are union-find roots and an
  // operation is evaluated by applying the free operation to representative
  // codes (discovering the result element if new)
  struct ConcreteAlg final : SigmaAlg {
    const MonadKernel* k;
    std::function<int(uint64_t)>* nodef;
    std::function<int(int)>* findf;
    std::vector<uint64_t>* mincode;
    int ap0(int op) const override { return (*findf)((*nodef)(k->free_op(op, {}))); }
    int ap1(int op, int a) const override {
      uint64_t args[1] = {(*mincode)[size_t(a)]};
      return (*findf)((*nodef)(k->free_op(op, args)));
    }
    int ap2(int op, int a, int b) const override {
      uint64_t args[2] = {(*mincode)[size_t(a)], (*mincode)[size_t(b)]};
      return (*findf)((*nodef)(k->free_op(op, args)));
    }
  };
  std::function<int(uint64_t)> nodef = [&](uint64_t c) { return node(c); };
  ConcreteAlg conc;
  conc.k = &k;
  conc.nodef = &nodef;
  conc.findf = &find;
  conc.mincode = &min_code;

  std::vector<int> gamma(ng);

  SparseClosure out;
  out.gens = G;
  out.kernel = &k;

  while (true) {
    // collapse phase: every element folds into its own class (the fold
    // applies operations to representative codes directly, so no closed
    // table is needed; fresh elements discovered along the way join in)
    bool changed = true;
    while (changed) {
      changed = false;
      for (size_t g = 0; g < ng; ++g) gamma[g] = find(eta_node[g]);
      for (size_t i = 0; i < code_of.size(); ++i) {
        int f = k.fold_code(code_of[i], ng, gamma, conc);
        if (unite(f, int(i))) changed = true;
      }
      size_t roots = 0;
      for (size_t i = 0; i < parent.size(); ++i)
        if (find(int(i)) == int(i)) ++roots;
      if (roots > cfg.sparse_class_cap)
        throw ResourceError("sparse closure class cap exceeded: " + std::to_string(roots));
    }

    // snapshot classes, attempt a closed dense table
    std::vector<int> roots;
    std::vector<int> pos(parent.size(), -1);
    for (size_t i = 0; i < parent.size(); ++i)
      if (find(int(i)) == int(i)) {
        pos[i] = int(roots.size());
        roots.push_back(int(i));
      }
    int nc = int(roots.size());
    size_t nodes_before = code_of.size();
    auto cls = [&](int nd) {
      int r = find(nd);
      return size_t(r) < pos.size() ? pos[size_t(r)] : -1;
    };

    SigmaTables tabs;
    tabs.n = nc;
    tabs.ops.resize(sig.size());
    bool open = false;
    for (size_t op = 0; op < sig.size() && !open; ++op) {
      int ar = sig[op].arity;
      tabs.ops[op].arity = ar;
      if (ar == 0) {
        int c = cls(node(k.free_op(int(op), {})));
        if (c < 0) open = true;
        tabs.ops[op].c0 = c;
      } else if (ar == 1) {
        tabs.ops[op].t1.assign(size_t(nc), -1);
        for (int c = 0; c < nc && !open; ++c) {
          uint64_t args[1] = {min_code[size_t(roots[size_t(c)])]};
          int v = cls(node(k.free_op(int(op), args)));
          if (v < 0) open = true;
          tabs.ops[op].t1[size_t(c)] = v;
        }
      } else if (ar == 2) {
        tabs.ops[op].t2.assign(size_t(nc) * size_t(nc), -1);
        for (int c1 = 0; c1 < nc && !open; ++c1)
          for (int c2 = 0; c2 < nc && !open; ++c2) {
            uint64_t args[2] = {min_code[size_t(roots[size_t(c1)])],
                                min_code[size_t(roots[size_t(c2)])]};
            int v = cls(node(k.free_op(int(op), args)));
            if (v < 0) open = true;
            tabs.ops[op].t2[size_t(c1) * size_t(nc) + size_t(c2)] = v;
          }
      }
    }
    if (open || code_of.size() > nodes_before) continue;  // new classes appeared

    if (getenv("EMT_TRACE_SPARSE"))
      fprintf(stderr, "[sparse] |G|=%zu nc=%d nodes=%zu\n", ng, nc, code_of.size());
    bool changed_eq = false;
    auto unite_classes = [&](int c1, int c2) {
      if (c1 == c2) return false;
      bool ch = unite(roots[size_t(c1)], roots[size_t(c2)]);
      changed_eq |= ch;
      return ch;
    };
    k.sigma_equations(tabs, unite_classes);
    if (changed_eq) continue;

    for (size_t g = 0; g < ng; ++g) gamma[g] = pos[size_t(find(eta_node[g]))];
    out.tables = std::move(tabs);
    out.gamma = gamma;
    out.rep_code.resize(size_t(nc));
    for (int c = 0; c < nc; ++c) out.rep_code[size_t(c)] = min_code[size_t(roots[size_t(c)])];

    for (auto& [a, b] : code_pairs)
      if (out.eval(a) != out.eval(b))
        throw EngineInvariantError("sparse closure: seed pair not identified by fold");
    for (size_t i = 0; i < code_of.size(); ++i)
      if (out.eval(code_of[i]) != pos[size_t(find(int(i)))])
        throw EngineInvariantError("sparse closure: fold inconsistent with discovery");
    return out;
  }
}

Congruence congruence_closure_free(const Monad& T, const Obj& G,
                                   const std::vector<std::pair<Idx, Idx>>& pairs) {
  auto tg = T.app(G);
  size_t n = tg->TX->size();
  Congruence c;
  c.carrier = tg->TX;
  c.free_on = G;

  if (n <= T.config().dense_threshold) {
    AlgebraOps ops = free_code_ops(T, G);
    UnionFind uf(n);
    dense_closure(n, ops, pairs, uf);
    fill_partition(c, uf, n);
    return c;
  }

  std::vector<std::pair<uint64_t, uint64_t>> code_pairs;
  code_pairs.reserve(pairs.size());
  for (auto& [x, y] : pairs)
    code_pairs.emplace_back(tg->code_of[size_t(x)], tg->code_of[size_t(y)]);
  SparseClosure sc = sparse_closure(T, G, std::move(code_pairs));

  c.class_of.assign(n, -1);
  std::vector<Idx> remap(sc.rep_code.size(), -1);
  for (size_t i = 0; i < n; ++i) {
    int ab = sc.eval(tg->code_of[i]);
    if (remap[size_t(ab)] < 0) {
      remap[size_t(ab)] = Idx(c.reps.size());
      c.reps.push_back(Idx(i));
    }
    c.class_of[i] = remap[size_t(ab)];
  }
  return c;
}

Congruence congruence_closure(const Monad& T, const Algebra& A,
                              const std::vector<std::pair<Idx, Idx>>& pairs) {
  if (A.free_on) return congruence_closure_free(T, *A.free_on, pairs);
  size_t n = A.carrier->size();
  if (n > T.config().dense_threshold)
    throw ResourceError("congruence closure on a large non-free algebra");
  AlgebraOps ops = make_algebra_ops(T, A);
  UnionFind uf(n);
  dense_closure(n, ops, pairs, uf);
  Congruence c;
  c.carrier = A.carrier;
  c.structure = A.structure;
  fill_partition(c, uf, n);
  return c;
}

QuotientResult quotient_algebra(const Monad& T, const Congruence& c) {
  size_t n = c.carrier->size();
  std::vector<std::string> labels;
  labels.reserve(c.reps.size());
  for (Idx r : c.reps) labels.push_back(c.carrier->label(r));
  Obj Q = FinSet::make(labels);
  std::vector<Idx> qidx(c.reps.size());
  for (size_t k = 0; k < c.reps.size(); ++k)
    qidx[k] = Q->index_of(c.carrier->label(c.reps[k]));

  std::vector<Idx> ptab(n);
  for (size_t i = 0; i < n; ++i) ptab[i] = qidx[size_t(c.class_of[i])];
  FinMap pi(c.carrier, Q, std::move(ptab));

  std::vector<Idx> sec(Q->size());
  for (size_t k = 0; k < c.reps.size(); ++k) sec[size_t(qidx[k])] = c.reps[k];

  T.require_guard(Q->size(), "quotient carrier");
  auto tq = T.app(Q);
  const MonadKernel& ker = T.kernel();
  std::vector<Idx> stab(tq->TX->size());

  if (c.free_on) {
    auto tg = T.app(*c.free_on);
    std::vector<std::pair<int, Idx>> members;
    std::vector<std::pair<int, uint64_t>> lifted;
    for (size_t t = 0; t < stab.size(); ++t) {
      ker.decompose(tq->code_of[t], members);
      lifted.clear();
      for (auto& [coef, qi] : members)
        lifted.emplace_back(coef, tg->code_of[size_t(sec[size_t(qi)])]);
      stab[t] = pi.tab[size_t(tg->of_code(ker.mu_sparse(lifted)))];
    }
  } else {
    if (!c.structure) throw PreconditionError("quotient of a structureless congruence");
    auto ts = T.t_size(n);
    if (!ts || *ts > T.config().guard)
      throw ResourceError("quotient of a large non-free algebra");
    auto ta = T.app(c.carrier);
    for (size_t t = 0; t < stab.size(); ++t) {
      Idx lifted = T.map_elem(*tq, Idx(t), sec, *ta);
      stab[t] = pi.tab[size_t(c.structure->tab[size_t(lifted)])];
    }
  }
  Algebra Qalg{Q, FinMap(tq->TX, Q, std::move(stab)), std::nullopt};

  // well-definedness is always re-verified: the projection must be a
  // homomorphism (doubles as the signature-adequacy check)
  if (c.free_on) {
    auto tg = T.app(*c.free_on);
    FinMap eta = T.eta(*c.free_on);
    std::vector<Idx> u(c.free_on.value()->size());
    for (size_t g = 0; g < u.size(); ++g) u[g] = pi.tab[size_t(eta.tab[g])];
    for (size_t t = 0; t < n; ++t) {
      Idx tu = T.map_elem(*tg, Idx(t), u, *tq);
      if (Qalg.structure.tab[size_t(tu)] != pi.tab[t])
        throw EngineInvariantError(
            "quotient ill-defined: projection is not the free extension of its "
            "generator restriction (inadequate signature)");
    }
  } else {
    FinMap lhs = compose(pi, *c.structure);
    FinMap rhs = compose(Qalg.structure, T.T_map(pi));
    if (lhs.tab != rhs.tab)
      throw EngineInvariantError(
          "quotient ill-defined: pi.a != abar.T(pi) (inadequate signature)");
  }
  FinMap unit = compose(Qalg.structure, T.eta(Q));
  if (!unit.is_identity())
    throw EngineInvariantError("quotient structure fails the unit law");

  return QuotientResult{std::move(Qalg), std::move(pi)};
}

CoequalizerResult coequalizer_em(const Monad& T, const Algebra& P, const Algebra& B,
                                 const FinMap& f, const FinMap& g) {
  if (!same_obj(f.dom, P.carrier) || !same_obj(g.dom, P.carrier) ||
      !same_obj(f.cod, B.carrier) || !same_obj(g.cod, B.carrier))
    throw PreconditionError("coequalizer_em: pair shape mismatch");

  std::vector<std::pair<Idx, Idx>> pairs;
  if (P.free_on) {
    FinMap eta = T.eta(*P.free_on);
    for (size_t z = 0; z < P.free_on.value()->size(); ++z) {
      Idx e = eta.tab[z];
      pairs.emplace_back(f.tab[size_t(e)], g.tab[size_t(e)]);
    }
  } else {
    for (size_t x = 0; x < P.carrier->size(); ++x) pairs.emplace_back(f.tab[x], g.tab[x]);
  }
  Congruence c = congruence_closure(T, B, pairs);
  QuotientResult qr = quotient_algebra(T, c);
  for (size_t x = 0; x < P.carrier->size(); ++x)
    if (qr.projection.tab[size_t(f.tab[x])] != qr.projection.tab[size_t(g.tab[x])])
      throw EngineInvariantError("coequalizer projection does not coequalize the pair");
  return CoequalizerResult{std::move(qr.algebra), std::move(qr.projection), std::move(c)};
}

std::vector<FinMap> enumerate_coequalizing_homs_free(
    const Monad& T, const Obj& G, const std::vector<std::pair<Idx, Idx>>& pairs,
    const Algebra& C) {
  std::vector<FinMap> out;
  size_t nc = C.carrier->size();
  size_t ng = G->size();
  auto tg = T.app(G);
  if (nc == 0) return out;
  auto tc = T.app(C.carrier);
  const MonadKernel& ker = T.kernel();

  // h = c∘T(u); a pair constraint is decidable once the joint support of its
  // two codes is assigned
  struct Cons {
    uint64_t a, b;
    std::vector<Idx> sup;
  };
  std::vector<Cons> cons;
  std::vector<Idx> sup;
  std::vector<Cons> closed;  // empty-support constraints
  for (auto& [x, y] : pairs) {
    if (x == y) continue;
    Cons cn{tg->code_of[size_t(x)], tg->code_of[size_t(y)], {}};
    ker.support(cn.a, ng, sup);
    cn.sup = sup;
    ker.support(cn.b, ng, sup);
    cn.sup.insert(cn.sup.end(), sup.begin(), sup.end());
    std::sort(cn.sup.begin(), cn.sup.end());
    cn.sup.erase(std::unique(cn.sup.begin(), cn.sup.end()), cn.sup.end());
    if (cn.sup.empty())
      closed.push_back(cn);
    else
      cons.push_back(cn);
  }

  // assignment order: cluster the generators of small constraints first so
  // pruning kicks in early
  std::vector<size_t> order;
  {
    std::vector<char> seen(ng, 0);
    std::vector<size_t> by_size(cons.size());
    for (size_t i = 0; i < by_size.size(); ++i) by_size[i] = i;
    std::stable_sort(by_size.begin(), by_size.end(), [&](size_t a, size_t b) {
      return cons[a].sup.size() < cons[b].sup.size();
    });
    for (size_t ci : by_size)
      for (Idx s : cons[ci].sup)
        if (!seen[size_t(s)]) {
          seen[size_t(s)] = 1;
          order.push_back(size_t(s));
        }
    for (size_t g = 0; g < ng; ++g)
      if (!seen[g]) order.push_back(g);
  }
  std::vector<size_t> pos_of(ng);
  for (size_t d = 0; d < ng; ++d) pos_of[order[d]] = d;
  std::vector<std::vector<size_t>> by_depth(ng);
  for (size_t i = 0; i < cons.size(); ++i) {
    size_t ready = 0;
    for (Idx s : cons[i].sup) ready = std::max(ready, pos_of[size_t(s)]);
    by_depth[ready].push_back(i);
  }

  std::vector<Idx> u(ng, -1);
  auto h_of = [&](uint64_t code) {
    return C.structure.tab[size_t(tc->of_code(ker.map_code(code, u, nc)))];
  };
  for (auto& cn : closed)
    if (h_of(cn.a) != h_of(cn.b)) return out;

  std::function<void(size_t)> dfs = [&](size_t depth) {
    if (depth == ng) {
      std::vector<Idx> tabh(tg->TX->size());
      for (size_t t = 0; t < tabh.size(); ++t) tabh[t] = h_of(tg->code_of[t]);
      out.emplace_back(tg->TX, C.carrier, std::move(tabh));
      return;
    }
    for (Idx v = 0; v < Idx(nc); ++v) {
      u[order[depth]] = v;
      bool ok = true;
      for (size_t ci : by_depth[depth])
        if (h_of(cons[ci].a) != h_of(cons[ci].b)) {
          ok = false;
          break;
        }
      if (ok) dfs(depth + 1);
    }
    u[order[depth]] = -1;
  };
  dfs(0);
  std::sort(out.begin(), out.end(),
            [](const FinMap& a, const FinMap& b) { return a.tab < b.tab; });
  return out;
}

std::vector<FinMap> enumerate_coequalizing_homs(const Monad& T, const Algebra& B,
                                                const std::vector<std::pair<Idx, Idx>>& pairs,
                                                const Algebra& C) {
  if (B.free_on) return enumerate_coequalizing_homs_free(T, *B.free_on, pairs, C);
  std::vector<FinMap> out;
  for (const FinMap& h : enumerate_homs(T, B, C)) {
    bool ok = true;
    for (auto& [x, y] : pairs)
      if (h.tab[size_t(x)] != h.tab[size_t(y)]) {
        ok = false;
        break;
      }
    if (ok) out.push_back(h);
  }
  return out;
}

namespace {

Report verify_universal_impl(const Monad& T, const Obj& Bcar,
                             const std::function<std::vector<FinMap>(const Algebra&)>& coeq_homs,
                             const Algebra& Q, const FinMap& q,
                             const std::vector<std::pair<Idx, Idx>>& pairs,
                             const std::vector<Algebra>& test_codomains) {
  Report rep;
  for (auto& [x, y] : pairs)
    if (q.tab[size_t(x)] != q.tab[size_t(y)]) {
      rep.fail("q coequalizes the pair",
               "q splits " + Bcar->label(x) + " and " + Bcar->label(y));
      return rep;
    }
  rep.pass("q coequalizes the pair");
  rep.check("q surjective", q.is_surjection(), "q not onto");

  for (size_t ci = 0; ci < test_codomains.size(); ++ci) {
    const Algebra& C = test_codomains[ci];
    std::string at = " vs codomain#" + std::to_string(ci) +
                     " (|C|=" + std::to_string(C.carrier->size()) + ")";
    std::vector<FinMap> coeq = coeq_homs(C);
    std::vector<FinMap> homs = enumerate_homs(T, Q, C);
    rep.check("|coequalizing homs| = |Hom(Q,C)|" + at, coeq.size() == homs.size(),
              std::to_string(coeq.size()) + " != " + std::to_string(homs.size()));
    bool factors = true;
    std::string w;
    for (const FinMap& h : coeq) {
      std::vector<Idx> utab(Q.carrier->size(), -1);
      for (size_t b = 0; b < Bcar->size() && factors; ++b) {
        Idx cls = q.tab[b];
        if (utab[size_t(cls)] < 0)
          utab[size_t(cls)] = h.tab[b];
        else if (utab[size_t(cls)] != h.tab[b]) {
          factors = false;
          w = "hom not constant on the class of " + Bcar->label(Idx(b));
        }
      }
      if (!factors) break;
      bool total = true;
      for (Idx v : utab) total &= (v >= 0);
      if (!total) {
        factors = false;
        w = "projection misses a class";
        break;
      }
      FinMap u(Q.carrier, C.carrier, utab);
      if (!is_algebra_hom(T, Q, C, u)) {
        factors = false;
        w = "induced factorization is not a homomorphism";
        break;
      }
    }
    rep.check("every coequalizing hom factors through q" + at, factors, w);
  }
  return rep;
}

}  // namespace

Report verify_coequalizer_universal_free(const Monad& T, const Obj& G, const Algebra& Q,
                                         const FinMap& q,
                                         const std::vector<std::pair<Idx, Idx>>& pairs,
                                         const std::vector<Algebra>& test_codomains) {
  return verify_universal_impl(
      T, q.dom,
      [&](const Algebra& C) { return enumerate_coequalizing_homs_free(T, G, pairs, C); }, Q, q,
      pairs, test_codomains);
}

Report verify_coequalizer_universal(const Monad& T, const Algebra& B, const Algebra& Q,
                                    const FinMap& q,
                                    const std::vector<std::pair<Idx, Idx>>& pairs,
                                    const std::vector<Algebra>& test_codomains) {
  return verify_universal_impl(
      T, B.carrier,
      [&](const Algebra& C) { return enumerate_coequalizing_homs(T, B, pairs, C); }, Q, q, pairs,
      test_codomains);
}

}  // namespace emt
