#pragma once

// Test-only polynomial oracles for the feature map: least-squares
// interpolation by total-degree polynomials, and a random-layer builder.

#include "contilearn/featuremap.hpp"
#include "test_util.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <vector>

namespace polyoracle {

/// Exponent tuples of all monomials in d variables with total degree <= deg.
inline std::vector<std::vector<int>> monomials(int d, int deg) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(static_cast<std::size_t>(d), 0);
  auto rec = [&](auto&& self, int var, int left) -> void {
    if (var == d) {
      out.push_back(cur);
      return;
    }
    for (int e = 0; e <= left; ++e) {
      cur[static_cast<std::size_t>(var)] = e;
      self(self, var + 1, left - e);
    }
    cur[static_cast<std::size_t>(var)] = 0;
  };
  rec(rec, 0, deg);
  return out;
}

/// Relative RMS residual of the best total-degree-`deg` polynomial through
/// (points[i], values[i]).
inline double interpolation_residual(const Eigen::MatrixXd& points, const Eigen::VectorXd& values,
                                     int deg) {
  const auto mons = monomials(static_cast<int>(points.cols()), deg);
  Eigen::MatrixXd vander(points.rows(), static_cast<Eigen::Index>(mons.size()));
  for (Eigen::Index i = 0; i < points.rows(); ++i)
    for (std::size_t k = 0; k < mons.size(); ++k) {
      double v = 1.0;
      for (Eigen::Index j = 0; j < points.cols(); ++j)
        v *= std::pow(points(i, j), mons[k][static_cast<std::size_t>(j)]);
      vander(i, static_cast<Eigen::Index>(k)) = v;
    }
  const Eigen::VectorXd coef = vander.colPivHouseholderQr().solve(values);
  const double scale = std::max(1.0, values.norm());
  return (vander * coef - values).norm() / scale;
}

/// Layer with random V0, random orthonormal U rows and scales calibrated on
/// the given feature rows.
inline contilearn::Layer random_layer(std::mt19937_64& rng, const Eigen::MatrixXd& features,
                                      Eigen::Index k) {
  const Eigen::Index m = features.cols();
  contilearn::Layer layer;
  layer.v0 = testutil::random_vector(rng, m);
  const Eigen::HouseholderQR<Eigen::MatrixXd> qr(testutil::random_matrix(rng, m, m));
  const Eigen::MatrixXd q = qr.householderQ();
  layer.u = q.leftCols(k).transpose();
  Eigen::MatrixXd super(features.rows(), k + 1);
  for (Eigen::Index t = 0; t < features.rows(); ++t)
    super.row(t) = layer.super_features(features.row(t).transpose()).transpose();
  layer.scales = contilearn::calibrate_scales(super);
  return layer;
}

/// Feature map of `layers` random layers on d inputs, each keeping up to
/// `k` components, calibrated on `inputs` (standardized).
inline contilearn::RecursiveFeatureMap random_map(std::mt19937_64& rng, const Eigen::MatrixXd& inputs,
                                                  int layers, Eigen::Index k) {
  contilearn::RecursiveFeatureMap map;
  map.d = inputs.cols();
  map.standardization.mean = Eigen::VectorXd::Zero(map.d);
  map.standardization.scale = Eigen::VectorXd::Ones(map.d);
  for (int i = 0; i < layers; ++i) {
    const Eigen::MatrixXd features = map.feature_matrix(inputs);
    map.layers.push_back(random_layer(rng, features, std::min(k, features.cols())));
  }
  return map;
}

}  // namespace polyoracle
