#pragma once

#include <Eigen/Dense>

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace contilearn {

using Index = Eigen::Index;

/// Structure constants C[a][b][g] of a finite-dimensional algebra:
/// e_a * e_b = sum_g C[a][b][g] e_g.
class StructureConstants {
 public:
  explicit StructureConstants(Index n);

  Index dim() const { return n_; }
  double& operator()(Index a, Index b, Index g) { return c_[offset(a, b, g)]; }
  double operator()(Index a, Index b, Index g) const { return c_[offset(a, b, g)]; }
  std::span<const double> data() const { return c_; }

 private:
  std::size_t offset(Index a, Index b, Index g) const {
    return static_cast<std::size_t>((a * n_ + b) * n_ + g);
  }

  Index n_;
  std::vector<double> c_;
};

/// A reference algebra with the basis index of its identity element.
struct ReferenceAlgebra {
  std::string name;
  StructureConstants constants;
  Index identity;
};

ReferenceAlgebra complex_algebra();     // basis (1, i)
ReferenceAlgebra quaternion_algebra();  // basis (1, i, j, k)

/// "complex" or "quaternion"; throws std::invalid_argument("unknown algebra ...").
ReferenceAlgebra reference_algebra(std::string_view name);

/// max |(e_a e_b) e_g - e_a (e_b e_g)| over all index quadruples.
double associativity_residual(const StructureConstants& c);

/// (a * b)_g = sum_{a', b'} a_a' b_b' C[a'][b'][g]
Eigen::VectorXd multiply(const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                         const StructureConstants& c);

/// sum_p coeffs[p] a^p evaluated by Horner's rule inside the algebra; the
/// constant term is coeffs[0] times the identity element.
Eigen::VectorXd power_series(std::span<const double> coeffs, const Eigen::VectorXd& a,
                             const StructureConstants& c, Index identity);

struct AlgebraFitReport {
  StructureConstants constants{1};
  double closure_residual = 0.0;        // RMS product defect / RMS product
  double associativity_residual = 0.0;
  bool ill_conditioned = false;
};

/// Least-squares structure constants from sampled super-features (one
/// sample per row): for every pair a <= b, the product column F_a F_b is
/// regressed on all F_g through ridge-damped normal equations. C is
/// symmetric in (a, b) by construction.
AlgebraFitReport fit_structure_constants(const Eigen::MatrixXd& samples);

}  // namespace contilearn
