#pragma once

#include <cstddef>

// Dense row-major kernels used by the network and batch evaluation code.
//
// Every kernel exists twice: the OpenMP version in nqe::kernels and a plain
// serial version in nqe::kernels::ref. The loop bodies are identical and the
// parallel split is by output row, so both produce bit-identical results for
// any thread count; the tests assert exact equality and the kernel benchmark
// tool compares their throughput.

namespace nqe::kernels {

// Global worker cap: set_threads() > NQE_KIT_THREADS env > OpenMP default.
int max_threads();
void set_threads(int n);

// c[m x n] = a[m x k] * b[k x n]
void gemm_nn(const double* a, const double* b, double* c, int m, int k, int n);
// c[m x n] = a[m x k] * b[n x k]^T
void gemm_nt(const double* a, const double* b, double* c, int m, int k, int n);
// c[m x n] = a[k x m]^T * b[k x n]
void gemm_tn(const double* a, const double* b, double* c, int m, int k, int n);

// z[m x n] = x[m x k] * w[k x n] + bias[n] (row broadcast)
void linear_forward(const double* x, const double* w, const double* bias,
                    double* z, int m, int k, int n);

void relu(const double* z, double* h, std::size_t count);
// dz = dh where z > 0, else 0
void relu_backward(const double* z, const double* dh, double* dz, std::size_t count);

// Row-wise softmax of z[m x n] into s[m x n].
void softmax_rows(const double* z, double* s, int m, int n);

// bias gradient: g[n] = column sums of dz[m x n]
void colsum(const double* dz, double* g, int m, int n);

namespace ref {
void gemm_nn(const double* a, const double* b, double* c, int m, int k, int n);
void gemm_nt(const double* a, const double* b, double* c, int m, int k, int n);
void gemm_tn(const double* a, const double* b, double* c, int m, int k, int n);
void linear_forward(const double* x, const double* w, const double* bias,
                    double* z, int m, int k, int n);
void relu(const double* z, double* h, std::size_t count);
void relu_backward(const double* z, const double* dh, double* dz, std::size_t count);
void softmax_rows(const double* z, double* s, int m, int n);
void colsum(const double* dz, double* g, int m, int n);
} // namespace ref

} // namespace nqe::kernels
