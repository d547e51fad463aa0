#pragma once

#include "imsparkle/types.hpp"

namespace imsparkle {

// Geometry of an m x n Hankel lifting of a length m + n - 1 vector.
class HankelShape {
 public:
  HankelShape(Eigen::Index rows, Eigen::Index cols);

  Eigen::Index rows() const { return rows_; }
  Eigen::Index cols() const { return cols_; }
  Eigen::Index length() const { return rows_ + cols_ - 1; }

  // Number of matrix entries on anti-diagonal k, i.e. the multiplicity with
  // which sample k appears in the lifted matrix.
  Eigen::Index multiplicity(Eigen::Index k) const;
  Eigen::VectorXd multiplicities() const;

  bool operator==(const HankelShape&) const = default;

 private:
  Eigen::Index rows_;
  Eigen::Index cols_;
};

// Near-square lifting: n = floor(N/2) + 1, m = N - n + 1.
HankelShape default_shape(Eigen::Index length);

// M(p, q) = v(p + q).
CMatrix lift(const CVector& v, const HankelShape& shape);

// First column top to bottom, then the last row without its first entry.
// Left inverse of lift().
CVector unlift_pick(const CMatrix& m);

// Mean over each anti-diagonal. This is the Moore-Penrose pseudoinverse of
// lift().
CVector unlift_average(const CMatrix& m);

// Sum over each anti-diagonal; <M, lift(v)> = <adjoint(M), v>.
CVector adjoint(const CMatrix& m);

}  // namespace imsparkle
