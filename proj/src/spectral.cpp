#include "contilearn/spectral.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace contilearn {

EigenDecomposition eig_sym(const Eigen::MatrixXd& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("eig_sym: matrix is not square");
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  if ((a - a.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale)
    throw std::invalid_argument("eig_sym: matrix is not symmetric");

  const Index n = a.rows();
  EigenDecomposition out;
  if (n == 0) return out;

  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("eig_sym: eigensolver did not converge");

  // Eigen returns ascending order.
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index i, Index j) {
    return solver.eigenvalues()[i] > solver.eigenvalues()[j];
  });

  out.values.resize(n);
  out.vectors.resize(n, n);
  for (Index c = 0; c < n; ++c) {
    const Index src = order[static_cast<std::size_t>(c)];
    out.values[c] = solver.eigenvalues()[src];
    Eigen::VectorXd v = solver.eigenvectors().col(src);
    Index pivot = 0;
    for (Index i = 1; i < n; ++i)
      if (std::abs(v[i]) > std::abs(v[pivot]) * (1.0 + 1e-12)) pivot = i;
    if (v[pivot] < 0.0) v = -v;
    out.vectors.col(c) = v;
  }
  return out;
}

PrincipalComponents select_components(const SolutionDistribution& dist,
                                      double rel_threshold, Index k_max) {
  if (!(rel_threshold > 0.0 && rel_threshold <= 1.0))
    throw std::invalid_argument("rel_threshold must lie in (0, 1]");
  if (k_max < 1) throw std::invalid_argument("k_max must be at least 1");

  const EigenDecomposition eig = eig_sym(dist.cov);
  PrincipalComponents pc;
  pc.v0 = dist.mean;
  pc.spectrum = eig.values;

  const double top = eig.values.size() ? eig.values[0] : 0.0;
  Index k = 0;
  if (top > 0.0) {
    const double cut = rel_threshold * top;
    while (k < eig.values.size() && k < k_max && eig.values[k] >= cut) ++k;
    k = std::max<Index>(k, 1);
  }
  pc.u = eig.vectors.leftCols(k).transpose();
  pc.eigenvalues = eig.values.head(k);
  return pc;
}

}  // namespace contilearn
