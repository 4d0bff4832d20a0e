#pragma once

#include <algorithm>
#include <vector>

#include <Eigen/Dense>

#include "loopoid/core.hpp"

namespace loopoid::linalg {

inline int numerical_rank(const Mat& A, double rel_tol = 1e-9) {
  if (A.size() == 0) return 0;
  Eigen::JacobiSVD<Mat> svd(A);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s[0] == 0.0) return 0;
  int rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s[i] > rel_tol * std::max(1.0, s[0])) ++rank;
  return rank;
}

inline double min_singular_value(const Mat& A) {
  if (A.size() == 0) return 0.0;
  Eigen::JacobiSVD<Mat> svd(A);
  const auto& s = svd.singularValues();
  return A.rows() < A.cols() ? (s.size() < A.cols() ? 0.0 : s[s.size() - 1])
                             : s[s.size() - 1];
}

/// Orthonormal basis of ker A (columns).
inline Mat null_space(const Mat& A, double rel_tol = 1e-9) {
  const Eigen::Index n = A.cols();
  if (A.rows() == 0) return Mat::Identity(n, n);
  Eigen::JacobiSVD<Mat> svd(A, Eigen::ComputeFullV);
  const int rank = numerical_rank(A, rel_tol);
  return svd.matrixV().rightCols(n - rank);
}

/// Rows of N (n x r, full column rank) that pivot a column-pivoted QR of N^T,
/// sorted ascending. Normalizing N so these rows form the identity gives a
/// basis that depends smoothly on N as long as the pivots stay valid.
inline std::vector<int> pivot_rows(const Mat& N) {
  const Eigen::Index r = N.cols();
  std::vector<int> rows;
  if (r == 0) return rows;
  Eigen::ColPivHouseholderQR<Mat> qr(N.transpose());
  for (Eigen::Index i = 0; i < r; ++i) rows.push_back(static_cast<int>(qr.colsPermutation().indices()[i]));
  std::sort(rows.begin(), rows.end());
  return rows;
}

/// Re-express the column span of N so that rows `pivots` become the identity.
inline Mat normalize_on_pivots(const Mat& N, const std::vector<int>& pivots) {
  const auto r = static_cast<Eigen::Index>(pivots.size());
  Mat P(r, N.cols());
  for (Eigen::Index i = 0; i < r; ++i) P.row(i) = N.row(pivots[static_cast<std::size_t>(i)]);
  return N * P.fullPivLu().inverse();
}

/// Min-norm least-squares solve.
inline Vec lstsq(const Mat& A, const Vec& b, double threshold = 1e-12) {
  Eigen::CompleteOrthogonalDecomposition<Mat> cod(A);
  cod.setThreshold(threshold);
  return cod.solve(b);
}

inline Mat pinv(const Mat& A, double threshold = 1e-12) {
  Eigen::CompleteOrthogonalDecomposition<Mat> cod(A);
  cod.setThreshold(threshold);
  return cod.pseudoInverse();
}

}  // namespace loopoid::linalg
