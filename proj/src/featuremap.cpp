#include "contilearn/featuremap.hpp"

#include "contilearn/errors.hpp"

#include <cmath>
#include <string>

namespace contilearn {

Index ExpandedIndex::pair(Index a, Index b) const {
  if (a > b) std::swap(a, b);
  // Rows 0..a-1 of the upper triangle hold m + (m-1) + ... + (m-a+1) terms.
  return m_ + a * m_ - a * (a - 1) / 2 + (b - a);
}

ExpandedIndex::Term ExpandedIndex::term(Index position) const {
  if (position < m_) return {position, -1};
  Index rest = position - m_;
  for (Index a = 0; a < m_; ++a) {
    const Index row = m_ - a;
    if (rest < row) return {a, a + rest};
    rest -= row;
  }
  throw std::out_of_range("expanded position " + std::to_string(position) + " out of range");
}

Eigen::VectorXd redefine(const Eigen::VectorXd& v0, const Eigen::MatrixXd& u,
                         const Eigen::VectorXd& f) {
  if (f.size() != v0.size() || (u.rows() > 0 && u.cols() != v0.size())) {
    throw DimensionError("redefine: feature dimension " + std::to_string(f.size()) +
                         " does not match layer input dimension " +
                         std::to_string(v0.size()));
  }
  Eigen::VectorXd out(u.rows() + 1);
  const double norm = v0.norm();
  out[0] = norm > 0.0 ? v0.dot(f) / norm : 1.0;
  if (u.rows() > 0) out.tail(u.rows()) = u * f;
  return out;
}

Eigen::VectorXd redefine(const PrincipalComponents& pc, const Eigen::VectorXd& f) {
  return redefine(pc.v0, pc.u, f);
}

Eigen::VectorXd expand(const Eigen::VectorXd& features, const Eigen::VectorXd& scales) {
  const Index m = features.size();
  const ExpandedIndex index(m);
  if (scales.size() != index.size()) {
    throw DimensionError("expand: expected " + std::to_string(index.size()) +
                         " scales, got " + std::to_string(scales.size()));
  }
  Eigen::VectorXd out(index.size());
  Index pos = 0;
  for (Index a = 0; a < m; ++a, ++pos) out[pos] = features[a] / scales[pos];
  for (Index a = 0; a < m; ++a)
    for (Index b = a; b < m; ++b, ++pos) out[pos] = features[a] * features[b] / scales[pos];
  return out;
}

Eigen::VectorXd calibrate_scales(const Eigen::MatrixXd& super_features) {
  const Index m = super_features.cols();
  const Index n = super_features.rows();
  const Eigen::VectorXd unit = Eigen::VectorXd::Ones(expanded_dim(m));
  Eigen::VectorXd sum_sq = Eigen::VectorXd::Zero(unit.size());
  for (Index t = 0; t < n; ++t) {
    const Eigen::VectorXd row = expand(super_features.row(t).transpose(), unit);
    sum_sq += row.cwiseAbs2();
  }
  Eigen::VectorXd scales(unit.size());
  for (Index i = 0; i < scales.size(); ++i) {
    const double rms = n > 0 ? std::sqrt(sum_sq[i] / static_cast<double>(n)) : 0.0;
    scales[i] = rms > 0.0 && std::isfinite(rms) ? rms : 1.0;
  }
  return scales;
}

Eigen::VectorXd Layer::apply(const Eigen::VectorXd& f) const {
  return expand(super_features(f), scales);
}

void Layer::validate() const {
  if (u.rows() > 0 && u.cols() != v0.size())
    throw DimensionError("layer: eigenvector length differs from V0 length");
  if (scales.size() != output_dim())
    throw DimensionError("layer: expected " + std::to_string(output_dim()) +
                         " scales, got " + std::to_string(scales.size()));
  if (!(scales.array() > 0.0).all()) throw DimensionError("layer: scales must be positive");
}

Eigen::VectorXd embed_mean_solution(const Layer& layer) {
  Eigen::VectorXd w = Eigen::VectorXd::Zero(layer.output_dim());
  const double norm = layer.v0.norm();
  if (norm > 0.0) w[ExpandedIndex(layer.super_dim()).linear(0)] = norm * layer.scales[0];
  return w;
}

Index RecursiveFeatureMap::output_dim() const {
  return layers.empty() ? d + 1 : layers.back().output_dim();
}

Eigen::VectorXd RecursiveFeatureMap::evaluate(const Eigen::VectorXd& raw) const {
  return evaluate_standardized(standardization.apply(raw));
}

Eigen::VectorXd RecursiveFeatureMap::evaluate_standardized(const Eigen::VectorXd& x) const {
  Eigen::VectorXd f = basic_features(x, d);
  for (const auto& layer : layers) f = layer.apply(f);
  return f;
}

Eigen::VectorXd RecursiveFeatureMap::super_features_standardized(
    const Eigen::VectorXd& x) const {
  Eigen::VectorXd f = basic_features(x, d);
  if (layers.empty()) return f;
  for (std::size_t i = 0; i + 1 < layers.size(); ++i) f = layers[i].apply(f);
  return layers.back().super_features(f);
}

Eigen::MatrixXd RecursiveFeatureMap::feature_matrix(
    const Eigen::MatrixXd& standardized_inputs) const {
  Eigen::MatrixXd out(standardized_inputs.rows(), output_dim());
  for (Index t = 0; t < standardized_inputs.rows(); ++t)
    out.row(t) = evaluate_standardized(standardized_inputs.row(t).transpose()).transpose();
  return out;
}

Eigen::MatrixXd RecursiveFeatureMap::super_feature_matrix(
    const Eigen::MatrixXd& standardized_inputs) const {
  const Index cols = layers.empty() ? d + 1 : layers.back().super_dim();
  Eigen::MatrixXd out(standardized_inputs.rows(), cols);
  for (Index t = 0; t < standardized_inputs.rows(); ++t)
    out.row(t) =
        super_features_standardized(standardized_inputs.row(t).transpose()).transpose();
  return out;
}

void RecursiveFeatureMap::validate() const {
  if (standardization.dim() != d || standardization.scale.size() != d)
    throw DimensionError("feature map: standardization dimension differs from d");
  Index m = d + 1;
  for (std::size_t i = 0; i < layers.size(); ++i) {
    layers[i].validate();
    if (layers[i].input_dim() != m)
      throw DimensionError("feature map: layer " + std::to_string(i) + " expects input dimension " +
                           std::to_string(layers[i].input_dim()) + ", previous output is " +
                           std::to_string(m));
    m = layers[i].output_dim();
  }
}

}  // namespace contilearn
