#include "eigraph/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "eigraph/io.hpp"
#include "eigraph/nn.hpp"
#include "eigraph/plugin.hpp"
#include "eigraph/rng.hpp"

namespace eigraph {

double EigenBasis::worst_residual() const {
  double worst = 0.0;
  for (double r : residuals) worst = std::max(worst, r);
  return worst;
}

namespace {

// Symmetric tridiagonal eigensolver: QL with implicit shifts. diag holds the
// eigenvalues on exit; z must be the identity on entry and holds eigenvectors
// in its columns on exit. off[i] couples i and i+1.
void tridiag_ql(std::vector<double>& diag, std::vector<double> off, Matrix& z) {
  const int n = static_cast<int>(diag.size());
  if (n == 0) return;
  off.resize(n, 0.0);
  for (int l = 0; l < n; ++l) {
    int iter = 0;
    while (true) {
      int m = l;
      for (; m < n - 1; ++m) {
        const double dd = std::fabs(diag[m]) + std::fabs(diag[m + 1]);
        if (std::fabs(off[m]) <= std::numeric_limits<double>::epsilon() * dd) break;
      }
      if (m == l) break;
      if (++iter > 60) throw std::runtime_error("tridiagonal QL: too many iterations");
      double g = (diag[l + 1] - diag[l]) / (2.0 * off[l]);
      double r = std::hypot(g, 1.0);
      g = diag[m] - diag[l] + off[l] / (g + std::copysign(r, g));
      double s = 1.0, c = 1.0, p = 0.0;
      int i = m - 1;
      for (; i >= l; --i) {
        double f = s * off[i];
        const double b = c * off[i];
        r = std::hypot(f, g);
        off[i + 1] = r;
        if (r == 0.0) {
          diag[i + 1] -= p;
          off[m] = 0.0;
          break;
        }
        s = f / r;
        c = g / r;
        g = diag[i + 1] - p;
        r = (diag[i] - g) * s + 2.0 * c * b;
        p = s * r;
        diag[i + 1] = g + p;
        g = c * r - b;
        for (int k = 0; k < n; ++k) {
          f = z(k, i + 1);
          z(k, i + 1) = s * z(k, i) + c * f;
          z(k, i) = c * z(k, i) - s * f;
        }
      }
      if (r == 0.0 && i >= l) continue;
      diag[l] -= p;
      off[l] = g;
      off[m] = 0.0;
    }
  }
}

void sign_normalize(std::vector<double>& v) {
  int best = 0;
  double best_abs = -1.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double a = std::fabs(v[i]);
    if (a > best_abs) {
      best_abs = a;
      best = static_cast<int>(i);
    }
  }
  if (v[best] < 0.0)
    for (double& x : v) x = -x;
}

// Total order: |lambda| desc, signed lambda desc, then first differing entry
// of the sign-fixed vectors. Magnitudes within 1e-12 (relative) of each other
// collapse into one tie group first; otherwise fp noise in a +/- pair would
// decide the order instead of the signed-value rule.
EigenBasis finalize_basis(int n, int d, std::vector<double> vals,
                          std::vector<std::vector<double>> vecs, std::vector<double> res,
                          std::int64_t iterations, double tol) {
  for (auto& v : vecs) sign_normalize(v);
  const int total = static_cast<int>(vals.size());
  std::vector<int> order(total);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return std::fabs(vals[a]) > std::fabs(vals[b]);
  });
  std::vector<int> group(total, 0);
  if (total > 0) {
    const double tie = 1e-12 * std::max(1.0, std::fabs(vals[order[0]]));
    for (int i = 1; i < total; ++i) {
      const double gap = std::fabs(vals[order[i - 1]]) - std::fabs(vals[order[i]]);
      group[order[i]] = group[order[i - 1]] + (gap > tie ? 1 : 0);
    }
  }
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    if (group[a] != group[b]) return group[a] < group[b];
    if (vals[a] != vals[b]) return vals[a] > vals[b];
    for (int i = 0; i < n; ++i)
      if (vecs[a][i] != vecs[b][i]) return vecs[a][i] > vecs[b][i];
    return false;
  });

  EigenBasis basis;
  basis.d = d;
  basis.eigenvalues.resize(d);
  basis.residuals.resize(d);
  basis.vectors = Matrix(n, d);
  for (int c = 0; c < d; ++c) {
    const int src = order[c];
    basis.eigenvalues[c] = vals[src];
    basis.residuals[c] = res[src];
    for (int i = 0; i < n; ++i) basis.vectors(i, c) = vecs[src][i];
  }
  basis.iterations_used = iterations;
  basis.converged = basis.worst_residual() < tol;
  return basis;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

}  // namespace

EigenBasis top_eigenpairs(const StructureMatrix& m, int d, double tol, std::int64_t max_iters,
                          std::uint64_t seed) {
  const int n = m.num_nodes();
  if (d < 1) throw std::invalid_argument("top_eigenpairs: d must be positive");
  if (d > n)
    throw std::invalid_argument("top_eigenpairs: d = " + std::to_string(d) + " exceeds N = " +
                                std::to_string(n));
  if (max_iters <= 0) max_iters = 300LL * d + 3000;

  Rng rng = make_rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  std::vector<std::vector<double>> locked;
  std::vector<double> locked_vals, locked_res;
  std::int64_t steps = 0;
  bool budget_hit = false;
  std::vector<double> restart;

  auto orth_locked = [&](std::vector<double>& v) {
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& u : locked) {
        const double c = dot(u, v);
        if (c != 0.0) axpy(-c, u, v);
      }
  };

  // Cycle state kept for the best-effort fill if the budget runs out.
  std::vector<std::vector<double>> last_v;
  Matrix last_z;
  std::vector<double> last_theta;
  std::vector<char> last_consumed;

  while (!budget_hit) {
    // A cycle seeded from a fresh random vector probes every eigendirection of
    // the complement of the locked space; restart cycles only chase a single
    // Ritz direction and cannot certify the complement.
    const bool fresh_probe = restart.empty();
    const std::size_t locked_before = locked.size();
    std::vector<double> v0;
    if (!restart.empty()) {
      v0 = std::move(restart);
      restart.clear();
    } else {
      v0.resize(n);
      for (double& x : v0) x = gauss(rng);
    }
    orth_locked(v0);
    double nv = norm2(v0);
    for (int guard = 0; nv < 1e-7 && guard < 32; ++guard) {
      for (double& x : v0) x = gauss(rng);
      orth_locked(v0);
      nv = norm2(v0);
    }
    if (nv < 1e-7) break;  // no independent direction left
    scale(v0, 1.0 / nv);

    const int mdim = static_cast<int>(std::min<std::int64_t>(
        n - static_cast<int>(locked.size()), std::max(2 * d + 10, 40)));
    if (mdim < 1) break;

    std::vector<std::vector<double>> basis_v;
    basis_v.reserve(mdim);
    basis_v.push_back(std::move(v0));
    std::vector<double> alpha, beta;
    double beta_last = 0.0;

    for (int j = 0; j < mdim; ++j) {
      if (steps >= max_iters) {
        budget_hit = true;
        break;
      }
      std::vector<double> w = spmv(m, basis_v[j]);
      ++steps;
      double a = dot(w, basis_v[j]);
      axpy(-a, basis_v[j], w);
      if (j > 0) axpy(-beta[j - 1], basis_v[j - 1], w);
      // Two-pass classical Gram-Schmidt against locked pairs and the whole
      // Krylov basis; the coefficient along v_j folds back into alpha.
      for (int pass = 0; pass < 2; ++pass) {
        for (const auto& u : locked) {
          const double c = dot(u, w);
          if (c != 0.0) axpy(-c, u, w);
        }
        for (int t = 0; t <= j; ++t) {
          const double c = dot(basis_v[t], w);
          if (c != 0.0) {
            axpy(-c, basis_v[t], w);
            if (t == j) a += c;
          }
        }
      }
      alpha.push_back(a);
      const double b = norm2(w);
      if (j + 1 < mdim) {
        if (b < 1e-13) {
          beta_last = 0.0;  // invariant subspace found
          break;
        }
        beta.push_back(b);
        scale(w, 1.0 / b);
        basis_v.push_back(std::move(w));
      } else {
        beta_last = b;
      }
    }

    const int k = static_cast<int>(alpha.size());
    if (k == 0) break;
    basis_v.resize(k);

    std::vector<double> theta = alpha;
    Matrix z = Matrix::identity(k);
    tridiag_ql(theta, beta, z);

    std::vector<int> order(k);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      const double fa = std::fabs(theta[a]), fb = std::fabs(theta[b]);
      if (fa != fb) return fa > fb;
      if (theta[a] != theta[b]) return theta[a] > theta[b];
      return a < b;
    });

    auto ritz_vector = [&](int idx) {
      std::vector<double> x(n, 0.0);
      for (int t = 0; t < k; ++t) {
        const double c = z(t, idx);
        if (c != 0.0) axpy(c, basis_v[t], x);
      }
      orth_locked(x);
      const double nx = norm2(x);
      if (nx < 1e-10) return std::vector<double>();  // collapsed onto locked space
      scale(x, 1.0 / nx);
      return x;
    };

    std::vector<char> consumed(k, 0);
    for (int idx : order) {
      const double estimate = std::fabs(beta_last * z(k - 1, idx));
      if (estimate > tol * 10.0) continue;
      std::vector<double> x = ritz_vector(idx);
      if (x.empty()) {
        consumed[idx] = 1;
        continue;
      }
      std::vector<double> w = spmv(m, x);
      ++steps;
      const double lam = dot(w, x);
      axpy(-lam, x, w);
      const double r = norm2(w);
      if (r < tol) {
        locked.push_back(std::move(x));
        locked_vals.push_back(lam);
        locked_res.push_back(r);
        consumed[idx] = 1;
      }
    }

    bool chase_open = static_cast<int>(locked.size()) < d;
    if (!chase_open) {
      // Certify the top-d only from a fresh probe whose view of the complement
      // held nothing above the d-th locked magnitude. A cycle that locked a
      // value above that bound may sit inside an eigenspace with unseen extra
      // multiplicity, so another probe of the new complement is required.
      const double slack = std::max(10.0 * tol, 1e-12);
      std::vector<double> mags;
      mags.reserve(locked_vals.size());
      for (double v : locked_vals) mags.push_back(std::fabs(v));
      std::nth_element(mags.begin(), mags.begin() + (d - 1), mags.end(),
                       std::greater<double>());
      const double dth = mags[d - 1];
      double max_open = 0.0;
      for (int idx = 0; idx < k; ++idx)
        if (!consumed[idx]) max_open = std::max(max_open, std::fabs(theta[idx]));
      double max_new = 0.0;
      for (std::size_t i = locked_before; i < locked_vals.size(); ++i)
        max_new = std::max(max_new, std::fabs(locked_vals[i]));
      if (max_open <= dth + slack) {
        if (fresh_probe && max_new <= dth + slack) break;
        // nothing left worth chasing in this cycle: probe the complement afresh
      } else {
        chase_open = true;
      }
    }

    if (chase_open) {
      for (int idx : order) {
        if (consumed[idx]) continue;
        std::vector<double> x = ritz_vector(idx);
        if (!x.empty()) restart = std::move(x);
        break;
      }
    }

    last_z = std::move(z);
    last_theta = std::move(theta);
    last_consumed = std::move(consumed);
    last_v = std::move(basis_v);
  }

  // Best-effort fill from the final cycle's Ritz approximations, then random
  // orthonormal padding; residuals report the truth either way.
  if (static_cast<int>(locked.size()) < d && last_z.rows() > 0) {
    const int k = last_z.rows();
    std::vector<int> order(k);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      return std::fabs(last_theta[a]) > std::fabs(last_theta[b]);
    });
    for (int idx : order) {
      if (static_cast<int>(locked.size()) >= d) break;
      if (last_consumed[idx]) continue;
      std::vector<double> x(n, 0.0);
      for (int t = 0; t < k; ++t) axpy(last_z(t, idx), last_v[t], x);
      orth_locked(x);
      const double nx = norm2(x);
      if (nx < 1e-10) continue;
      scale(x, 1.0 / nx);
      std::vector<double> w = spmv(m, x);
      const double lam = dot(w, x);
      axpy(-lam, x, w);
      locked_vals.push_back(lam);
      locked_res.push_back(norm2(w));
      locked.push_back(std::move(x));
    }
  }
  while (static_cast<int>(locked.size()) < d) {
    std::vector<double> x(n);
    for (double& v : x) v = gauss(rng);
    orth_locked(x);
    const double nx = norm2(x);
    if (nx < 1e-7) continue;
    scale(x, 1.0 / nx);
    std::vector<double> w = spmv(m, x);
    const double lam = dot(w, x);
    axpy(-lam, x, w);
    locked_vals.push_back(lam);
    locked_res.push_back(norm2(w));
    locked.push_back(std::move(x));
  }

  return finalize_basis(n, d, std::move(locked_vals), std::move(locked), std::move(locked_res),
                        steps, tol);
}

EigenBasis dense_eig_oracle(const Matrix& m) {
  const int n = m.rows();
  if (m.cols() != n) throw std::invalid_argument("dense_eig_oracle: matrix must be square");
  if (n > 500)
    throw std::invalid_argument("dense_eig_oracle: N = " + std::to_string(n) + " exceeds 500");
  double asym = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      asym = std::max(asym, std::fabs(m(i, j) - m(j, i)));
  if (asym > 1e-12)
    throw std::invalid_argument("dense_eig_oracle: input asymmetric, max |M_ij - M_ji| = " +
                                format_double(asym));

  Matrix a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = 0.5 * (m(i, j) + m(j, i));
  const Matrix sym = a;
  Matrix v = Matrix::identity(n);

  const double target = 1e-12;
  bool done = false;
  int sweeps = 0;
  for (; sweeps < 100; ++sweeps) {
    double off = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) off += a(i, j) * a(i, j);
    if (std::sqrt(2.0 * off) < target) {
      done = true;
      break;
    }
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        double t;
        if (std::fabs(theta) > 1e150)
          t = 0.5 / theta;
        else
          t = std::copysign(1.0, theta) / (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        const double tau = s / (1.0 + c);
        a(p, p) -= t * apq;
        a(q, q) += t * apq;
        a(p, q) = a(q, p) = 0.0;
        for (int k = 0; k < n; ++k) {
          if (k == p || k == q) continue;
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = a(p, k) = akp - s * (akq + tau * akp);
          a(k, q) = a(q, k) = akq + s * (akp - tau * akq);
        }
        for (int k = 0; k < n; ++k) {
          const double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = vkp - s * (vkq + tau * vkp);
          v(k, q) = vkq + s * (vkp - tau * vkq);
        }
      }
    }
  }
  if (!done) {
    double off = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) off += a(i, j) * a(i, j);
    if (std::sqrt(2.0 * off) >= target)
      throw std::runtime_error("dense_eig_oracle: Jacobi sweeps stalled above 1e-12");
  }

  std::vector<double> vals(n);
  std::vector<std::vector<double>> vecs(n, std::vector<double>(n));
  std::vector<double> res(n);
  for (int c = 0; c < n; ++c) {
    vals[c] = a(c, c);
    for (int i = 0; i < n; ++i) vecs[c][i] = v(i, c);
  }
  for (int c = 0; c < n; ++c) {
    double rr = 0.0;
    for (int i = 0; i < n; ++i) {
      double s = 0.0;
      for (int j = 0; j < n; ++j) s += sym(i, j) * vecs[c][j];
      s -= vals[c] * vecs[c][i];
      rr += s * s;
    }
    res[c] = std::sqrt(rr);
  }
  return finalize_basis(n, n, std::move(vals), std::move(vecs), std::move(res), sweeps, 1e-8);
}

std::string to_string(FMode mode) {
  switch (mode) {
    case FMode::identity: return "identity";
    case FMode::abs: return "abs";
    case FMode::frobenius_norm: return "frobenius_norm";
  }
  return "unknown";
}

FMode f_mode_from_string(const std::string& name) {
  if (name == "identity") return FMode::identity;
  if (name == "abs") return FMode::abs;
  if (name == "frobenius_norm") return FMode::frobenius_norm;
  throw std::invalid_argument("unknown f mode: " + name);
}

Matrix apply_f(const EigenBasis& basis, FMode mode) {
  Matrix q = basis.vectors;
  switch (mode) {
    case FMode::identity:
      break;
    case FMode::abs:
      for (double& x : q.data()) x = std::fabs(x);
      break;
    case FMode::frobenius_norm: {
      const double norm = frobenius_norm(q);
      if (norm > 0.0) scale_inplace(q, 1.0 / norm);
      break;
    }
  }
  return q;
}

std::vector<double> sgc_limit_check(const SparseGraph& g, const Matrix& x, int propagations,
                                    std::uint64_t seed) {
  if (!is_connected(g))
    throw std::domain_error("sgc_limit_check: graph must be connected");
  if (x.rows() != g.num_nodes)
    throw std::invalid_argument("sgc_limit_check: feature rows != N");
  const StructureMatrix f = renormalized_adjacency(g);
  Matrix u = x;
  for (int l = 0; l < propagations; ++l) u = spmm(f, u);
  const EigenBasis top1 = top_eigenpairs(f, 1, 1e-12, 0, seed);

  std::vector<double> angles(x.cols());
  for (int c = 0; c < x.cols(); ++c) {
    double uu = 0.0, uq = 0.0;
    for (int i = 0; i < x.rows(); ++i) {
      uu += u(i, c) * u(i, c);
      uq += u(i, c) * top1.vectors(i, 0);
    }
    if (uu < 1e-300) {
      angles[c] = std::acos(0.0);
      continue;
    }
    const double cosine = std::min(1.0, std::fabs(uq) / std::sqrt(uu));
    angles[c] = std::acos(cosine);
  }
  return angles;
}

namespace {

StructureMatrix build_structure(const SparseGraph& g, StructureKind kind) {
  switch (kind) {
    case StructureKind::renorm_adjacency: return renormalized_adjacency(g);
    case StructureKind::plain_norm_adjacency: return plain_normalized_adjacency(g);
    case StructureKind::transition_power: return transition_power(g, 1);
  }
  throw std::invalid_argument("build_structure: unknown kind");
}

EigenBasis head_of(const EigenBasis& basis, int d) {
  EigenBasis out;
  out.d = d;
  out.eigenvalues.assign(basis.eigenvalues.begin(), basis.eigenvalues.begin() + d);
  out.residuals.assign(basis.residuals.begin(), basis.residuals.begin() + d);
  out.vectors = Matrix(basis.vectors.rows(), d);
  for (int i = 0; i < basis.vectors.rows(); ++i)
    for (int c = 0; c < d; ++c) out.vectors(i, c) = basis.vectors(i, c);
  out.iterations_used = basis.iterations_used;
  out.converged = basis.converged;
  return out;
}

double max_row_deviation(const Matrix& a, const Matrix& b, const std::vector<int>& perm) {
  double dev = 0.0;
  for (int i = 0; i < a.rows(); ++i)
    for (int c = 0; c < a.cols(); ++c)
      dev = std::max(dev, std::fabs(a(i, c) - b(perm[i], c)));
  return dev;
}

}  // namespace

double equivariance_check(const SparseGraph& g, const Matrix* x, const std::vector<int>& perm,
                          int d, const Model& model, StructureKind kind, std::uint64_t seed) {
  const int n = g.num_nodes;
  if (x && x->rows() != n)
    throw std::invalid_argument("equivariance_check: feature rows != N");

  const StructureMatrix ma = build_structure(g, kind);
  const int dcheck = std::min(d + 1, n);
  const EigenBasis probe = top_eigenpairs(ma, dcheck, 1e-12, 0, seed);
  for (int i = 0; i < dcheck; ++i)
    for (int j = i + 1; j < dcheck; ++j)
      if (std::fabs(probe.eigenvalues[i] - probe.eigenvalues[j]) <= 1e-6)
        throw std::domain_error(
            "equivariance_check: eigenvalue gap |" + format_double(probe.eigenvalues[i]) +
            " - " + format_double(probe.eigenvalues[j]) +
            "| <= 1e-6; the top-d eigenvalues must be unique for the basis to be "
            "permutation-equivariant");

  const SparseGraph gp = permute(g, perm);
  const StructureMatrix mb = build_structure(gp, kind);
  const EigenBasis ba = head_of(probe, d);
  const EigenBasis bb = head_of(top_eigenpairs(mb, dcheck, 1e-12, 0, seed), d);

  Matrix xb;
  if (x) {
    xb = Matrix(n, x->cols());
    for (int i = 0; i < n; ++i)
      for (int c = 0; c < x->cols(); ++c) xb(perm[i], c) = (*x)(i, c);
  }
  const InitialBasis ha = build_initial_basis(x, &ba, FMode::abs);
  const InitialBasis hb = build_initial_basis(x ? &xb : nullptr, &bb, FMode::abs);

  if (model.arch == Arch::gin) {
    const GinTrace ta = gin_forward(g, ha.matrix, model);
    const GinTrace tb = gin_forward(gp, hb.matrix, model);
    double dev = max_row_deviation(ta.node_embeddings, tb.node_embeddings, perm);
    dev = std::max(dev, max_abs_diff(ta.logits, tb.logits));
    return dev;
  }

  std::vector<Matrix> la, lb;
  switch (model.arch) {
    case Arch::gcn:
      la = gcn_forward(ma, ha.matrix, model);
      lb = gcn_forward(mb, hb.matrix, model);
      break;
    case Arch::mlp:
      la = mlp_forward(ha.matrix, model);
      lb = mlp_forward(hb.matrix, model);
      break;
    case Arch::sgc: {
      const Matrix ua = sgc_propagate(ma, ha.matrix, model.propagations);
      const Matrix ub = sgc_propagate(mb, hb.matrix, model.propagations);
      la = {ha.matrix, ua, matmul(ua, model.weights.at(0))};
      lb = {hb.matrix, ub, matmul(ub, model.weights.at(0))};
      break;
    }
    case Arch::gin:
      break;  // handled above
  }
  double dev = 0.0;
  for (std::size_t l = 0; l < la.size(); ++l)
    dev = std::max(dev, max_row_deviation(la[l], lb[l], perm));
  return dev;
}

void save_eigenbasis(const std::string& path, const EigenBasis& basis) {
  Matrix out(basis.vectors.rows() + 1, basis.d);
  for (int c = 0; c < basis.d; ++c) out(0, c) = basis.eigenvalues[c];
  for (int i = 0; i < basis.vectors.rows(); ++i)
    for (int c = 0; c < basis.d; ++c) out(i + 1, c) = basis.vectors(i, c);
  save_csv_matrix(path, out);
}

EigenBasis load_eigenbasis(const std::string& path) {
  const Matrix in = load_csv_matrix(path);
  if (in.rows() < 1 || in.cols() < 1)
    throw std::runtime_error("eigenbasis file is empty: " + path);
  EigenBasis basis;
  basis.d = in.cols();
  basis.eigenvalues.resize(basis.d);
  for (int c = 0; c < basis.d; ++c) basis.eigenvalues[c] = in(0, c);
  basis.vectors = Matrix(in.rows() - 1, in.cols());
  for (int i = 0; i < basis.vectors.rows(); ++i)
    for (int c = 0; c < basis.d; ++c) basis.vectors(i, c) = in(i + 1, c);
  basis.residuals.assign(basis.d, 0.0);
  return basis;
}

}  // namespace eigraph
