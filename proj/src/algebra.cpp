#include "contilearn/algebra.hpp"

#include "contilearn/errors.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <stdexcept>

namespace contilearn {

namespace {

constexpr double kRidge = 1e-10;
constexpr double kIllConditioned = 1e-12;

}  // namespace

StructureConstants::StructureConstants(Index n) : n_(n) {
  if (n < 1) throw std::invalid_argument("algebra dimension must be at least 1");
  c_.assign(static_cast<std::size_t>(n * n * n), 0.0);
}

ReferenceAlgebra complex_algebra() {
  StructureConstants c(2);
  c(0, 0, 0) = 1.0;
  c(0, 1, 1) = 1.0;
  c(1, 0, 1) = 1.0;
  c(1, 1, 0) = -1.0;
  return {"complex", c, 0};
}

ReferenceAlgebra quaternion_algebra() {
  StructureConstants c(4);
  for (Index a = 0; a < 4; ++a) {
    c(0, a, a) = 1.0;
    c(a, 0, a) = 1.0;
  }
  for (Index a = 1; a < 4; ++a) c(a, a, 0) = -1.0;
  // ij = k, jk = i, ki = j and the anticommuting reverses.
  const Index cyc[3][3] = {{1, 2, 3}, {2, 3, 1}, {3, 1, 2}};
  for (const auto& t : cyc) {
    c(t[0], t[1], t[2]) = 1.0;
    c(t[1], t[0], t[2]) = -1.0;
  }
  return {"quaternion", c, 0};
}

ReferenceAlgebra reference_algebra(std::string_view name) {
  if (name == "complex") return complex_algebra();
  if (name == "quaternion") return quaternion_algebra();
  throw std::invalid_argument("unknown algebra '" + std::string(name) + "'");
}

double associativity_residual(const StructureConstants& c) {
  const Index n = c.dim();
  double worst = 0.0;
  for (Index a = 0; a < n; ++a)
    for (Index b = 0; b < n; ++b)
      for (Index g = 0; g < n; ++g)
        for (Index v = 0; v < n; ++v) {
          double lhs = 0.0;
          double rhs = 0.0;
          for (Index mu = 0; mu < n; ++mu) {
            lhs += c(a, b, mu) * c(mu, g, v);
            rhs += c(a, mu, v) * c(b, g, mu);
          }
          worst = std::max(worst, std::abs(lhs - rhs));
        }
  return worst;
}

Eigen::VectorXd multiply(const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                         const StructureConstants& c) {
  const Index n = c.dim();
  if (a.size() != n || b.size() != n)
    throw DimensionError("multiply: operands must have the algebra dimension " +
                         std::to_string(n));
  Eigen::VectorXd out = Eigen::VectorXd::Zero(n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) {
      const double ab = a[i] * b[j];
      if (ab == 0.0) continue;
      for (Index g = 0; g < n; ++g) out[g] += ab * c(i, j, g);
    }
  return out;
}

Eigen::VectorXd power_series(std::span<const double> coeffs, const Eigen::VectorXd& a,
                             const StructureConstants& c, Index identity) {
  const Index n = c.dim();
  if (identity < 0 || identity >= n)
    throw std::invalid_argument("power_series: algebra has no identity element at index " +
                                std::to_string(identity));
  if (a.size() != n) throw DimensionError("power_series: operand dimension mismatch");
  const Eigen::VectorXd unit = Eigen::VectorXd::Unit(n, identity);
  if (coeffs.empty()) return Eigen::VectorXd::Zero(n);

  Eigen::VectorXd acc = coeffs.back() * unit;
  for (std::size_t p = coeffs.size() - 1; p-- > 0;) acc = multiply(acc, a, c) + coeffs[p] * unit;
  return acc;
}

AlgebraFitReport fit_structure_constants(const Eigen::MatrixXd& samples) {
  const Index n = samples.cols();
  const Index t = samples.rows();
  if (n < 1) throw std::invalid_argument("fit_structure_constants: no features");
  if (t < n)
    throw std::invalid_argument("fit_structure_constants: need at least as many samples as features");

  AlgebraFitReport report;
  report.constants = StructureConstants(n);

  Eigen::MatrixXd gram = samples.transpose() * samples;
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> spectrum(gram, Eigen::EigenvaluesOnly);
  const double top = spectrum.eigenvalues().maxCoeff();
  const double bottom = spectrum.eigenvalues().minCoeff();
  report.ill_conditioned = !(top > 0.0) || bottom <= kIllConditioned * top;

  gram.diagonal().array() += kRidge;
  const Eigen::LDLT<Eigen::MatrixXd> normal(gram);

  double defect_sq = 0.0;
  double product_sq = 0.0;
  for (Index a = 0; a < n; ++a)
    for (Index b = a; b < n; ++b) {
      const Eigen::VectorXd product = samples.col(a).cwiseProduct(samples.col(b));
      const Eigen::VectorXd coef = normal.solve(samples.transpose() * product);
      for (Index g = 0; g < n; ++g) {
        report.constants(a, b, g) = coef[g];
        report.constants(b, a, g) = coef[g];
      }
      defect_sq += (product - samples * coef).squaredNorm();
      product_sq += product.squaredNorm();
    }

  const double pairs = static_cast<double>(n * (n + 1) / 2);
  const double count = pairs * static_cast<double>(t);
  const double rms_defect = std::sqrt(defect_sq / count);
  const double rms_product = std::sqrt(product_sq / count);
  report.closure_residual = rms_product > 0.0 ? rms_defect / rms_product : rms_defect;
  report.associativity_residual = associativity_residual(report.constants);
  return report;
}

}  // namespace contilearn
