#pragma once

#include <cstddef>

namespace rlqas::kernels {

// Dense row-major kernels backing the Q-network math. Every output element is
// computed by a single serial inner loop, so the OpenMP variants below produce
// results bit-identical to the serial reference for any thread count.
//
// Shapes (row-major):
//   matmul_nt : c[m x n] = a[m x k] * b[n x k]^T
//   matmul_nn : c[m x n] = a[m x k] * b[k x n]
//   matmul_tn : c[m x n] = a[k x m]^T * b[k x n]

namespace serial {

void matmul_nt(const double* a, const double* b, double* c,
               std::size_t m, std::size_t n, std::size_t k);
void matmul_nn(const double* a, const double* b, double* c,
               std::size_t m, std::size_t n, std::size_t k);
void matmul_tn(const double* a, const double* b, double* c,
               std::size_t m, std::size_t n, std::size_t k);

// y[r,c] += bias[c], then optionally y = max(y, 0).
void add_bias(double* y, const double* bias, std::size_t rows, std::size_t cols);
void add_bias_relu(double* y, const double* bias, std::size_t rows, std::size_t cols);

// grad[i] = activation[i] > 0 ? grad[i] : 0  (ReLU mask from the forward pass).
void relu_backward(double* grad, const double* activation, std::size_t count);

// out[c] = sum_r a[r,c].
void col_sums(const double* a, double* out, std::size_t rows, std::size_t cols);

}  // namespace serial

void matmul_nt(const double* a, const double* b, double* c,
               std::size_t m, std::size_t n, std::size_t k);
void matmul_nn(const double* a, const double* b, double* c,
               std::size_t m, std::size_t n, std::size_t k);
void matmul_tn(const double* a, const double* b, double* c,
               std::size_t m, std::size_t n, std::size_t k);
void add_bias(double* y, const double* bias, std::size_t rows, std::size_t cols);
void add_bias_relu(double* y, const double* bias, std::size_t rows, std::size_t cols);
void relu_backward(double* grad, const double* activation, std::size_t count);
void col_sums(const double* a, double* out, std::size_t rows, std::size_t cols);

}  // namespace rlqas::kernels
