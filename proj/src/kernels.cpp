#include "rlqas/kernels.hpp"

namespace rlqas::kernels {

namespace {

// Shared row kernels: both the serial and the OpenMP entry points call these,
// so the two variants execute the same machine code per output row.

inline void nt_row(const double* a_row, const double* b, double* c_row,
                   std::size_t n, std::size_t k) {
    for (std::size_t j = 0; j < n; ++j) {
        const double* b_row = b + j * k;
        double acc = 0.0;
        for (std::size_t l = 0; l < k; ++l) acc += a_row[l] * b_row[l];
        c_row[j] = acc;
    }
}

inline void nn_row(const double* a_row, const double* b, double* c_row,
                   std::size_t n, std::size_t k) {
    for (std::size_t j = 0; j < n; ++j) c_row[j] = 0.0;
    for (std::size_t l = 0; l < k; ++l) {
        const double av = a_row[l];
        const double* b_row = b + l * n;
        for (std::size_t j = 0; j < n; ++j) c_row[j] += av * b_row[j];
    }
}

inline void tn_row(const double* a, const double* b, double* c_row,
                   std::size_t i, std::size_t m, std::size_t n, std::size_t k) {
    for (std::size_t j = 0; j < n; ++j) c_row[j] = 0.0;
    for (std::size_t l = 0; l < k; ++l) {
        const double av = a[l * m + i];
        const double* b_row = b + l * n;
        for (std::size_t j = 0; j < n; ++j) c_row[j] += av * b_row[j];
    }
}

inline void bias_row(double* y_row, const double* bias, std::size_t cols, bool relu) {
    for (std::size_t j = 0; j < cols; ++j) {
        double v = y_row[j] + bias[j];
        if (relu && v < 0.0) v = 0.0;
        y_row[j] = v;
    }
}

}  // namespace

namespace serial {

void matmul_nt(const double* a, const double* b, double* c,
               std::size_t m, std::size_t n, std::size_t k) {
    for (std::size_t i = 0; i < m; ++i) nt_row(a + i * k, b, c + i * n, n, k);
}

void matmul_nn(const double* a, const double* b, double* c,
               std::size_t m, std::size_t n, std::size_t k) {
    for (std::size_t i = 0; i < m; ++i) nn_row(a + i * k, b, c + i * n, n, k);
}

void matmul_tn(const double* a, const double* b, double* c,
               std::size_t m, std::size_t n, std::size_t k) {
    for (std::size_t i = 0; i < m; ++i) tn_row(a, b, c + i * n, i, m, n, k);
}

void add_bias(double* y, const double* bias, std::size_t rows, std::size_t cols) {
    for (std::size_t i = 0; i < rows; ++i) bias_row(y + i * cols, bias, cols, false);
}

void add_bias_relu(double* y, const double* bias, std::size_t rows, std::size_t cols) {
    for (std::size_t i = 0; i < rows; ++i) bias_row(y + i * cols, bias, cols, true);
}

void relu_backward(double* grad, const double* activation, std::size_t count) {
    for (std::size_t i = 0; i < count; ++i) {
        if (activation[i] <= 0.0) grad[i] = 0.0;
    }
}

void col_sums(const double* a, double* out, std::size_t rows, std::size_t cols) {
    for (std::size_t j = 0; j < cols; ++j) {
        double acc = 0.0;
        for (std::size_t i = 0; i < rows; ++i) acc += a[i * cols + j];
        out[j] = acc;
    }
}

}  // namespace serial

void matmul_nt(const double* a, const double* b, double* c,
               std::size_t m, std::size_t n, std::size_t k) {
#pragma omp parallel for schedule(static)
    for (std::size_t i = 0; i < m; ++i) nt_row(a + i * k, b, c + i * n, n, k);
}

void matmul_nn(const double* a, const double* b, double* c,
               std::size_t m, std::size_t n, std::size_t k) {
#pragma omp parallel for schedule(static)
    for (std::size_t i = 0; i < m; ++i) nn_row(a + i * k, b, c + i * n, n, k);
}

void matmul_tn(const double* a, const double* b, double* c,
               std::size_t m, std::size_t n, std::size_t k) {
#pragma omp parallel for schedule(static)
    for (std::size_t i = 0; i < m; ++i) tn_row(a, b, c + i * n, i, m, n, k);
}

void add_bias(double* y, const double* bias, std::size_t rows, std::size_t cols) {
#pragma omp parallel for schedule(static)
    for (std::size_t i = 0; i < rows; ++i) bias_row(y + i * cols, bias, cols, false);
}

void add_bias_relu(double* y, const double* bias, std::size_t rows, std::size_t cols) {
#pragma omp parallel for schedule(static)
    for (std::size_t i = 0; i < rows; ++i) bias_row(y + i * cols, bias, cols, true);
}

void relu_backward(double* grad, const double* activation, std::size_t count) {
#pragma omp parallel for schedule(static)
    for (std::size_t i = 0; i < count; ++i) {
        if (activation[i] <= 0.0) grad[i] = 0.0;
    }
}

void col_sums(const double* a, double* out, std::size_t rows, std::size_t cols) {
#pragma omp parallel for schedule(static)
    for (std::size_t j = 0; j < cols; ++j) {
        double acc = 0.0;
        for (std::size_t i = 0; i < rows; ++i) acc += a[i * cols + j];
        out[j] = acc;
    }
}

}  // namespace rlqas::kernels
