#pragma once

#include <Eigen/Core>

namespace rivid::nn {

template <typename T>
using MatMap = Eigen::Map<Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;
template <typename T>
using ConstMatMap =
    Eigen::Map<const Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;

/// C = A(m x k) * B(k x n), all row-major dense.
template <typename T>
void gemm(const T* a, const T* b, T* c, int m, int k, int n) {
  MatMap<T>(c, m, n).noalias() = ConstMatMap<T>(a, m, k) * ConstMatMap<T>(b, k, n);
}

/// C = A^T(m x k with A k x m... ) -- explicit transpose variants.
template <typename T>
void gemm_tn(const T* a, const T* b, T* c, int m, int k, int n) {
  // a is (k x m) stored row-major; compute C = a^T * b
  MatMap<T>(c, m, n).noalias() = ConstMatMap<T>(a, k, m).transpose() * ConstMatMap<T>(b, k, n);
}

template <typename T>
void gemm_nt(const T* a, const T* b, T* c, int m, int k, int n) {
  // b is (n x k) stored row-major; compute C = a * b^T
  MatMap<T>(c, m, n).noalias() = ConstMatMap<T>(a, m, k) * ConstMatMap<T>(b, n, k).transpose();
}

}  // namespace rivid::nn
