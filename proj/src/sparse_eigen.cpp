#include "dnstrip/sparse_eigen.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <random>

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>
#include <fmt/format.h>

#include "dnstrip/errors.hpp"

namespace dnstrip {

namespace {

using ColMatrix = Eigen::SparseMatrix<double, Eigen::ColMajor>;
using Factor = Eigen::SimplicialLDLT<ColMatrix, Eigen::Lower, Eigen::AMDOrdering<int>>;

double dot(const std::vector<double>& x, const std::vector<double>& y) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

double norm(const std::vector<double>& x) { return std::sqrt(dot(x, x)); }

void axpy(double alpha, const std::vector<double>& x, std::vector<double>& y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

double gershgorin_lower(const RowMatrix& a) {
  double lo = std::numeric_limits<double>::infinity();
  for (int r = 0; r < a.outerSize(); ++r) {
    double diag = 0.0;
    double off = 0.0;
    for (RowMatrix::InnerIterator it(a, r); it; ++it) {
      if (it.col() == r) {
        diag = it.value();
      } else {
        off += std::abs(it.value());
      }
    }
    lo = std::min(lo, diag - off);
  }
  return lo;
}

// Factor of A - sigma I, or null when it is not positive definite.
std::unique_ptr<Factor> factor_shifted(const ColMatrix& a, double sigma) {
  ColMatrix shifted = a;
  for (int k = 0; k < shifted.outerSize(); ++k) shifted.coeffRef(k, k) -= sigma;
  auto f = std::make_unique<Factor>();
  f->compute(shifted);
  if (f->info() != Eigen::Success) return nullptr;
  const auto& d = f->vectorD();
  for (Eigen::Index i = 0; i < d.size(); ++i) {
    if (!(d[i] > 0.0)) return nullptr;
  }
  return f;
}

}  // namespace

SparseEigenResult smallest_eigenpair(const RowMatrix& a, const LanczosOptions& opts) {
  const auto n = static_cast<std::size_t>(a.rows());
  if (n == 0 || a.rows() != a.cols()) throw DomainError("smallest_eigenpair: matrix must be square and non-empty");

  ColMatrix col = a;
  // Diagonal entries must exist structurally for the shift.
  for (int k = 0; k < col.outerSize(); ++k) col.coeffRef(k, k) += 0.0;
  col.makeCompressed();

  std::vector<double> shifts;
  for (double c : {opts.shift_hint, 0.5, 0.0, -0.5, -2.0, -8.0}) {
    if (c <= opts.shift_hint) shifts.push_back(c * opts.scale);
  }
  const double g = gershgorin_lower(a);
  shifts.push_back(g - 0.01 * std::max(std::abs(g), opts.scale));

  SparseEigenResult res;
  std::unique_ptr<Factor> factor;
  for (double s : shifts) {
    factor = factor_shifted(col, s);
    if (factor) {
      res.shift = s;
      break;
    }
  }
  if (!factor) throw ConvergenceError("smallest_eigenpair: no positive definite shift found");

  const int m = std::max(1, std::min<int>(opts.krylov_dim, static_cast<int>(n)));
  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  std::vector<double> x(n);
  for (auto& xi : x) xi = 1.0 + 0.1 * unif(rng);
  {
    const double nx = norm(x);
    for (auto& xi : x) xi /= nx;
  }

  const double target = opts.tol * opts.scale;
  std::vector<double> ax(n);
  Eigen::VectorXd rhs(static_cast<Eigen::Index>(n));
  for (int restart = 0; restart <= opts.max_restarts; ++restart) {
    std::vector<std::vector<double>> q{x};
    std::vector<double> alpha;
    std::vector<double> beta;
    for (int k = 0; k < m; ++k) {
      for (std::size_t i = 0; i < n; ++i) rhs[static_cast<Eigen::Index>(i)] = q[k][i];
      const Eigen::VectorXd sol = factor->solve(rhs);
      std::vector<double> w(sol.data(), sol.data() + n);
      ++res.iterations;
      alpha.push_back(dot(w, q[k]));
      // Two passes of classical Gram-Schmidt against the whole basis.
      for (int pass = 0; pass < 2; ++pass) {
        for (const auto& qj : q) axpy(-dot(w, qj), qj, w);
      }
      const double b = norm(w);
      if (k + 1 == m || b <= 1e-13 * std::abs(alpha.back())) break;
      beta.push_back(b);
      for (auto& wi : w) wi /= b;
      q.push_back(std::move(w));
    }

    const auto k = static_cast<Eigen::Index>(alpha.size());
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(k, k);
    for (Eigen::Index i = 0; i < k; ++i) {
      t(i, i) = alpha[static_cast<std::size_t>(i)];
      if (i + 1 < k) t(i, i + 1) = t(i + 1, i) = beta[static_cast<std::size_t>(i)];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
    const Eigen::VectorXd s = es.eigenvectors().col(k - 1);

    std::fill(x.begin(), x.end(), 0.0);
    for (Eigen::Index j = 0; j < k; ++j) axpy(s[j], q[static_cast<std::size_t>(j)], x);
    const double nx = norm(x);
    for (auto& xi : x) xi /= nx;

    spmv(a, x, ax, opts.policy);
    const double mu = dot(x, ax);
    axpy(-mu, x, ax);
    res.value = mu;
    res.residual = norm(ax);
    res.restarts = restart;
    if (res.residual <= target) {
      res.vector = std::move(x);
      return res;
    }
  }
  throw ConvergenceError(fmt::format("smallest_eigenpair: residual {:.3e} above target {:.3e} after {} restarts",
                                     res.residual, target, opts.max_restarts));
}

}  // namespace dnstrip
