#include "linrec.hpp"

#include <algorithm>
#include <cmath>

#include "ntt.hpp"

namespace cz {

PMat LinMat::at(const PElt& x) const { return M0 + mat_scale(M1, x); }

PMat LinMat::at(std::int64_t x) const { return at(M0.ctx().from_int(x)); }

bool bsgs_applicable(const IntervalSet& I, std::int64_t K, std::uint64_t p) {
  using u128 = unsigned __int128;
  if (K < 1) return false;
  const u128 h = I.size();
  if (!(h * h < static_cast<u128>(K))) return false;
  const u128 pm1 = p - 1;
  return static_cast<u128>(K) < pm1 * pm1;
}

namespace {

constexpr std::size_t kMatKronThreshold = 16;
constexpr std::size_t kMatNttThreshold = 16;
constexpr std::size_t kLeaf = 8;

std::size_t max_len(const MatPoly& a) {
  std::size_t l = 0;
  for (const auto& f : a.e) l = std::max(l, f.size());
  return l;
}

int matpoly_prec(const MatPoly& a, const MatPoly& b, const RingCtx& ctx) {
  const int W = ctx.W();
  int pa = W, pb = W;
  for (const auto& f : a.e) pa = std::min(pa, f.min_prec());
  for (const auto& f : b.e) pb = std::min(pb, f.min_prec());
  auto minval = [](const MatPoly& m, int cap) {
    int v = cap;
    for (const auto& f : m.e)
      for (std::size_t i = 0; i < f.size() && v > 0; ++i) v = std::min(v, f[i].val_upto(cap));
    return v;
  };
  int prec = W;
  if (pb < W) prec = std::min(prec, pb + minval(a, W - pb));
  if (pa < W) prec = std::min(prec, pa + minval(b, W - pa));
  return prec;
}

MatPoly matpoly_mul_kron(const MatPoly& a, const MatPoly& b, const RingCtx& ctx) {
  const int m = a.m;
  const std::size_t la = max_len(a), lb = max_len(b);
  const int prec = matpoly_prec(a, b, ctx);
  const std::size_t slot = detail::kron_slot_bits(ctx, static_cast<std::size_t>(m) * std::min(la, lb));
  const std::size_t LA = detail::kron_limbs(la, slot), LB = detail::kron_limbs(lb, slot);
  std::vector<mp_limb_t> pa(static_cast<std::size_t>(m) * m * LA), pb(static_cast<std::size_t>(m) * m * LB);
  for (int i = 0; i < m * m; ++i) {
    detail::kron_pack(a.e[i].coeffs().data(), a.e[i].size(), slot, pa.data() + i * LA, LA);
    detail::kron_pack(b.e[i].coeffs().data(), b.e[i].size(), slot, pb.data() + i * LB, LB);
  }
  std::vector<mp_limb_t> tmp(LA + LB), acc(LA + LB + 1);
  MatPoly c;
  c.m = m;
  c.e.assign(static_cast<std::size_t>(m) * m, PPoly(ctx, la + lb - 1));
  for (int i = 0; i < m; ++i) {
    for (int k = 0; k < m; ++k) {
      std::fill(acc.begin(), acc.end(), 0);
      for (int j = 0; j < m; ++j) {
        const mp_limb_t* A = pa.data() + (i * m + j) * LA;
        const mp_limb_t* B = pb.data() + (j * m + k) * LB;
        if (LA >= LB) mpn_mul(tmp.data(), A, LA, B, LB);
        else mpn_mul(tmp.data(), B, LB, A, LA);
        acc[LA + LB] += mpn_add_n(acc.data(), acc.data(), tmp.data(), LA + LB);
      }
      PPoly& out = c.at(i, k);
      detail::kron_unpack(ctx, acc.data(), acc.size(), slot, out.size(), out.coeffs().data(), prec);
    }
  }
  return c;
}

MatPoly matpoly_mul_ntt(const MatPoly& a, const MatPoly& b, const ntt::Plan& plan, const RingCtx& ctx) {
  const int m = a.m;
  const std::size_t len = max_len(a) + max_len(b) - 1, w = plan.words();
  const int prec = matpoly_prec(a, b, ctx);
  std::vector<ntt::u64> fa(static_cast<std::size_t>(m) * m * w), fb(fa.size()), acc(w);
  for (int i = 0; i < m * m; ++i) {
    plan.forward(a.e[i].coeffs().data(), a.e[i].size(), fa.data() + i * w);
    plan.forward(b.e[i].coeffs().data(), b.e[i].size(), fb.data() + i * w);
  }
  MatPoly c;
  c.m = m;
  c.e.assign(static_cast<std::size_t>(m) * m, PPoly(ctx, len));
  for (int i = 0; i < m; ++i) {
    for (int k = 0; k < m; ++k) {
      std::fill(acc.begin(), acc.end(), 0);
      for (int j = 0; j < m; ++j) plan.mul_acc(fa.data() + (i * m + j) * w, fb.data() + (j * m + k) * w, acc.data());
      plan.inverse(acc.data(), len, c.at(i, k).coeffs().data(), prec);
    }
  }
  return c;
}

// ---------------------------------------------------------------- remainder tree

class EvalTree {
 public:
  EvalTree(const RingCtx& ctx, const std::vector<PElt>& pts) : ctx_(ctx), pts_(pts) {
    if (!pts.empty()) root_ = build(0, pts.size());
  }

  // out[k][i] = polys[k](pts[i])
  void eval(const std::vector<const PPoly*>& polys, std::vector<std::vector<PElt>>& out) {
    if (pts_.empty()) return;
    std::vector<PPoly> as;
    for (const PPoly* f : polys) as.push_back(*f);
    eval_node(reduce_all(as, root_), root_, out);
  }

 private:
  struct Node {
    std::size_t lo, hi;
    int left = -1, right = -1;
    PPoly poly;  // monic, prod (X - x_i)
    PPoly inv;   // 1 / rev(poly) mod X^inv.size()
  };

  int build(std::size_t lo, std::size_t hi) {
    Node nd;
    nd.lo = lo;
    nd.hi = hi;
    if (hi - lo <= kLeaf) {
      PPoly f = PPoly::from_ints(ctx_, {1});
      for (std::size_t i = lo; i < hi; ++i) {
        PPoly lin(ctx_, 2);
        lin[0] = -pts_[i];
        lin[1] = ctx_.one();
        f = f * lin;
      }
      nd.poly = std::move(f);
    } else {
      const std::size_t mid = lo + (hi - lo) / 2;
      nd.left = build(lo, mid);
      nd.right = build(mid, hi);
      nd.poly = nodes_[nd.left].poly * nodes_[nd.right].poly;
    }
    nodes_.push_back(std::move(nd));
    return static_cast<int>(nodes_.size()) - 1;
  }

  const PPoly& inverse(Node& nd, std::size_t k) {
    if (nd.inv.ctx_ptr() != nullptr && nd.inv.size() >= k) return nd.inv;
    const std::size_t n = nd.poly.size() - 1;
    PPoly rev(ctx_, std::min(n + 1, k));
    for (std::size_t i = 0; i < rev.size(); ++i) rev[i] = nd.poly[n - i];
    PPoly g = PPoly::from_ints(ctx_, {1});
    std::size_t len = 1;
    while (len < k) {
      const std::size_t len2 = std::min(2 * len, k);
      PPoly t = (rev.truncated(len2) * g).truncated(len2);
      for (std::size_t i = 0; i < t.size(); ++i) t[i] = -t[i];
      t.resize(std::max<std::size_t>(t.size(), 1));
      t[0] += ctx_.from_int(2);
      g = (g * t).truncated(len2);
      len = len2;
    }
    g.resize(k);
    nd.inv = std::move(g);
    return nd.inv;
  }

  PPoly reduce(const PPoly& a, int idx) {
    Node& nd = nodes_[idx];
    const std::size_t n = nd.poly.size() - 1;
    if (a.size() <= n) return a;
    const std::size_t k = a.size() - n;
    const PPoly& inv = inverse(nd, k);
    PPoly reva(ctx_, k);
    for (std::size_t i = 0; i < k; ++i) reva[i] = a[a.size() - 1 - i];
    PPoly qrev = (reva * inv.truncated(k)).truncated(k);
    qrev.resize(k);
    PPoly q(ctx_, k);
    for (std::size_t i = 0; i < k; ++i) q[i] = qrev[k - 1 - i];
    PPoly qb = (q * nd.poly).truncated(n);
    qb.resize(n);
    return a.truncated(n) - qb;
  }

  std::vector<PPoly> reduce_all(const std::vector<PPoly>& as, int idx) {
    std::vector<PPoly> out;
    out.reserve(as.size());
    for (const auto& a : as) out.push_back(reduce(a, idx));
    return out;
  }

  void eval_node(const std::vector<PPoly>& as, int idx, std::vector<std::vector<PElt>>& out) {
    const Node& nd = nodes_[idx];
    if (nd.left < 0) {
      for (std::size_t k = 0; k < as.size(); ++k)
        for (std::size_t i = nd.lo; i < nd.hi; ++i) out[k][i] = poly_eval(as[k], pts_[i]);
      return;
    }
    const int l = nd.left, r = nd.right;
    eval_node(reduce_all(as, l), l, out);
    eval_node(reduce_all(as, r), r, out);
  }

  const RingCtx& ctx_;
  const std::vector<PElt>& pts_;
  std::vector<Node> nodes_;
  int root_ = -1;
};

MatPoly shifted_product(const LinMat& L, std::int64_t lo, std::int64_t hi) {
  const RingCtx& ctx = L.M0.ctx();
  const int m = L.size();
  if (hi - lo == 1) {
    // M(X + hi) = (M0 + hi M1) + X M1
    MatPoly leaf;
    leaf.m = m;
    leaf.e.assign(static_cast<std::size_t>(m) * m, PPoly(ctx, 2));
    PMat c = L.at(hi);
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < m; ++j) {
        leaf.at(i, j)[0] = c.at(i, j);
        leaf.at(i, j)[1] = L.M1.at(i, j);
      }
    }
    return leaf;
  }
  const std::int64_t mid = lo + (hi - lo) / 2;
  return matpoly_mul(shifted_product(L, lo, mid), shifted_product(L, mid, hi));
}

PMat naive_product(const LinMat& L, std::int64_t a, std::int64_t b) {
  const RingCtx& ctx = L.M0.ctx();
  PMat acc = PMat::identity(ctx, L.size());
  PElt x = ctx.from_int(a);
  const PElt one = ctx.one();
  for (std::int64_t t = a + 1; t <= b; ++t) {
    x += one;
    acc = acc * L.at(x);
  }
  return acc;
}

void validate(const IntervalSet& I, std::int64_t K) {
  std::int64_t prev = 0;
  for (const auto& [a, b] : I) {
    if (a < prev || b < a || b > K) fail(Errc::InvalidArgument, "interval set must be sorted, disjoint and within [0, K]");
    prev = b;
  }
}

}  // namespace

MatPoly matpoly_mul(const MatPoly& a, const MatPoly& b) {
  const RingCtx& ctx = a.e.front().ctx();
  const int m = a.m;
  const std::size_t la = max_len(a), lb = max_len(b);
  if (std::min(la, lb) >= kMatNttThreshold) {
    if (auto plan = ntt::Plan::make(ctx, la + lb - 1, static_cast<std::size_t>(m) * std::min(la, lb)))
      return matpoly_mul_ntt(a, b, *plan, ctx);
  }
  if (std::min(la, lb) >= kMatKronThreshold) return matpoly_mul_kron(a, b, ctx);
  MatPoly c;
  c.m = m;
  c.e.assign(static_cast<std::size_t>(m) * m, PPoly(ctx, la + lb - 1));
  bool exact = true;
  for (const auto& f : a.e) exact = exact && f.min_prec() == ctx.W();
  for (const auto& f : b.e) exact = exact && f.min_prec() == ctx.W();
  detail::MulAcc acc(ctx);
  for (int i = 0; i < m; ++i)
    for (int k = 0; k < m; ++k) {
      PPoly& out = c.at(i, k);
      for (std::size_t w = 0; w < out.size(); ++w) {
        acc.clear();
        int prec = ctx.W();
        for (int j = 0; j < m; ++j) {
          const PPoly& f = a.at(i, j);
          const PPoly& g = b.at(j, k);
          for (std::size_t u = 0; u < f.size() && u <= w; ++u) {
            if (w - u >= g.size()) continue;
            acc.add(f[u], g[w - u]);
            if (!exact) prec = std::min(prec, product_prec(f[u], g[w - u]));
          }
        }
        acc.store(out[w], prec);
      }
    }
  return c;
}

std::vector<std::vector<PElt>> multipoint_eval(const std::vector<const PPoly*>& polys, const std::vector<PElt>& points) {
  std::vector<std::vector<PElt>> out(polys.size());
  if (points.empty() || polys.empty()) return out;
  const RingCtx& ctx = points.front().ctx();
  if (points.size() <= 2 * kLeaf) {
    for (std::size_t k = 0; k < polys.size(); ++k) {
      out[k].reserve(points.size());
      for (const auto& x : points) out[k].push_back(poly_eval(*polys[k], x));
    }
    return out;
  }
  EvalTree tree(ctx, points);
  for (auto& v : out) v.assign(points.size(), ctx.zero());
  tree.eval(polys, out);
  return out;
}

std::vector<PMat> eval_intervals(const LinMat& L, const IntervalSet& I, std::int64_t K, LinStrategy strategy) {
  validate(I, K);
  const RingCtx& ctx = L.M0.ctx();
  std::vector<PMat> out;
  out.reserve(I.size());
  if (strategy == LinStrategy::Naive) {
    for (const auto& [a, b] : I) out.push_back(naive_product(L, a, b));
    return out;
  }
  if (!bsgs_applicable(I, K, ctx.p())) fail(Errc::PreconditionFailed, "baby-step giant-step needs h < sqrt(K) < p - 1");

  std::int64_t s = static_cast<std::int64_t>(std::sqrt(static_cast<double>(K)));
  while (s * s < K) ++s;
  while (s > 1 && (s - 1) * (s - 1) >= K) --s;

  std::vector<PElt> pts;
  for (const auto& [a, b] : I)
    for (std::int64_t q = 0; q < (b - a) / s; ++q) pts.push_back(ctx.from_int(a + q * s));

  std::vector<std::vector<PElt>> vals;
  const int m = L.size();
  if (!pts.empty()) {
    // P(X) = M(X+1) M(X+2) ... M(X+s)
    MatPoly P = shifted_product(L, 0, s);
    std::vector<const PPoly*> entries;
    for (const auto& f : P.e) entries.push_back(&f);
    vals = multipoint_eval(entries, pts);
  }

  std::size_t idx = 0;
  for (const auto& [a, b] : I) {
    PMat acc = PMat::identity(ctx, m);
    const std::int64_t nb = (b - a) / s;
    for (std::int64_t q = 0; q < nb; ++q, ++idx) {
      PMat block(ctx, m, m);
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) block.at(i, j) = vals[static_cast<std::size_t>(i) * m + j][idx];
      acc = acc * block;
    }
    PElt x = ctx.from_int(a + nb * s);
    const PElt one = ctx.one();
    for (std::int64_t t = a + nb * s + 1; t <= b; ++t) {
      x += one;
      acc = acc * L.at(x);
    }
    out.push_back(std::move(acc));
  }
  return out;
}

}  // namespace cz
