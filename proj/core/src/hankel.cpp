#include "imsparkle/hankel.hpp"

#include <algorithm>
#include <string>

namespace imsparkle {

HankelShape::HankelShape(Eigen::Index rows, Eigen::Index cols) : rows_(rows), cols_(cols) {
  if (rows < 1 || cols < 1) {
    throw std::invalid_argument("HankelShape: dimensions must be positive");
  }
}

Eigen::Index HankelShape::multiplicity(Eigen::Index k) const {
  if (k < 0 || k >= length()) throw std::out_of_range("HankelShape::multiplicity");
  return std::min({k + 1, length() - k, rows_, cols_});
}

Eigen::VectorXd HankelShape::multiplicities() const {
  Eigen::VectorXd w(length());
  for (Eigen::Index k = 0; k < length(); ++k) w[k] = static_cast<double>(multiplicity(k));
  return w;
}

HankelShape default_shape(Eigen::Index length) {
  if (length < 3) {
    throw std::invalid_argument("default_shape: need at least 3 samples for a 2 x 2 lifting");
  }
  const Eigen::Index cols = length / 2 + 1;
  return HankelShape(length - cols + 1, cols);
}

CMatrix lift(const CVector& v, const HankelShape& shape) {
  if (v.size() != shape.length()) {
    throw std::invalid_argument("lift: vector length " + std::to_string(v.size()) +
                                " does not match m + n - 1 = " + std::to_string(shape.length()));
  }
  CMatrix out(shape.rows(), shape.cols());
  // Column q is the contiguous slice v[q .. q + m).
  for (Eigen::Index q = 0; q < shape.cols(); ++q) {
    out.col(q) = v.segment(q, shape.rows());
  }
  return out;
}

CVector unlift_pick(const CMatrix& m) {
  const Eigen::Index rows = m.rows();
  const Eigen::Index cols = m.cols();
  CVector out(rows + cols - 1);
  out.head(rows) = m.col(0);
  if (cols > 1) out.tail(cols - 1) = m.row(rows - 1).tail(cols - 1).transpose();
  return out;
}

CVector adjoint(const CMatrix& m) {
  const Eigen::Index rows = m.rows();
  CVector out = CVector::Zero(rows + m.cols() - 1);
  for (Eigen::Index q = 0; q < m.cols(); ++q) {
    out.segment(q, rows) += m.col(q);
  }
  return out;
}

CVector unlift_average(const CMatrix& m) {
  const HankelShape shape(m.rows(), m.cols());
  return adjoint(m).cwiseQuotient(shape.multiplicities().cast<Complex>());
}

}  // namespace imsparkle
