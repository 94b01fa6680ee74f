#pragma once
// Dense complex tensors, SVD truncation and non-Hermitian eigensolvers
// (dense LAPACK path + restarted Arnoldi for matrix-free operators).

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <utility>
#include <vector>

#include "magic_spectra/errors.hpp"

namespace msp {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

// Minimal dense tensor: row-major flat storage + shape.
struct ComplexTensor {
  std::vector<long> shape;
  std::vector<cplx> data;

  ComplexTensor() = default;
  explicit ComplexTensor(std::vector<long> shp);

  long size() const;
  long rank() const { return static_cast<long>(shape.size()); }
  cplx& at(const std::vector<long>& idx);
  cplx at(const std::vector<long>& idx) const;

  static ComplexTensor from_matrix(const Mat& m);
  // Fuse the first `row_ndims` indices into rows, the rest into columns.
  Mat as_matrix(int row_ndims) const;
};

// Contract tensors a and b over the given (axis_of_a, axis_of_b) pairs.
// Free indices of a (in order) precede free indices of b in the result.
ComplexTensor contract(const ComplexTensor& a, const ComplexTensor& b,
                       const std::vector<std::pair<int, int>>& pairs);

// y = A x, plus the plain transpose A^T x used to obtain left eigenvectors.
struct LinearOperatorHandle {
  long dim = 0;
  std::function<Vec(const Vec&)> apply;
  std::function<Vec(const Vec&)> apply_transpose;
  bool is_dense_materializable = false;
  std::function<Mat()> materialize;  // optional; built from apply if absent
};

LinearOperatorHandle dense_operator(const Mat& a);

// Eigen-decomposition result. Values sorted by descending modulus, ties
// broken by descending real part, then descending imaginary part.
// left.col(i) is the plain (unconjugated) row vector: l_i^T A = v_i l_i^T,
// binormalized so that l_i^T r_j = delta_ij (group-wise Gram for degenerate
// clusters with |v| above 1e-12; exact degeneracy at zero is left alone).
struct EigenPairs {
  Vec values;
  Mat right;
  Mat left;
  Eigen::VectorXd residuals;
};

// Full dense decomposition (LAPACK zgeev, left + right vectors).
EigenPairs dense_eigen(const Mat& a);

// Top-k eigenpairs of a linear operator. Operators of dimension <= 4096 (or
// ones that advertise dense materialization) fall back to the dense path;
// larger ones use a restarted Arnoldi iteration seeded deterministically,
// with left vectors from the transpose operator at the same seed.
EigenPairs top_k_eigen(const LinearOperatorHandle& op, int k,
                       double tol = 1e-10, unsigned seed = 7);

// Partition indices of `values` into groups of (near-)equal eigenvalues:
// |v_i - v_j| <= tol * max(1, |v_i|). Groups ordered by first member.
std::vector<std::vector<int>> group_degenerate(const Vec& values,
                                               double tol = 1e-8);

struct SvdTruncation {
  Mat U;
  Eigen::VectorXd S;
  Mat V;  // columns; m ~= U * S.asDiagonal() * V^H
  double discarded_weight = 0.0;  // sum of dropped sigma^2 / total sigma^2
};

// Keep at most max_rank singular values, dropping any with
// sigma_i < cutoff * sigma_0.
SvdTruncation svd_truncate(const Mat& m, int max_rank, double cutoff);

// Sorting comparator shared by all spectral code.
bool eigenvalue_less_dominant(const cplx& a, const cplx& b);
std::vector<int> sort_eigenvalues(const Vec& values);

}  // namespace msp
