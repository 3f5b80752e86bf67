#include "nqe/kernels.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <cstring>

#include <omp.h>

namespace nqe::kernels {

namespace {

int resolve_default_threads() {
    if (const char* env = std::getenv("NQE_KIT_THREADS")) {
        int n = std::atoi(env);
        if (n > 0) return n;
    }
    return omp_get_max_threads();
}

std::atomic<int> g_threads{0};

} // namespace

int max_threads() {
    int n = g_threads.load(std::memory_order_relaxed);
    if (n <= 0) {
        n = resolve_default_threads();
        g_threads.store(n, std::memory_order_relaxed);
    }
    return n;
}

void set_threads(int n) { g_threads.store(std::max(1, n), std::memory_order_relaxed); }

// ---------------------------------------------------------------------------
// serial reference bodies

namespace ref {

void gemm_nn(const double* a, const double* b, double* c, int m, int k, int n) {
    for (int i = 0; i < m; ++i) {
        double* ci = c + static_cast<std::size_t>(i) * n;
        std::memset(ci, 0, sizeof(double) * n);
        const double* ai = a + static_cast<std::size_t>(i) * k;
        for (int p = 0; p < k; ++p) {
            const double aip = ai[p];
            const double* bp = b + static_cast<std::size_t>(p) * n;
            for (int j = 0; j < n; ++j) ci[j] += aip * bp[j];
        }
    }
}

void gemm_nt(const double* a, const double* b, double* c, int m, int k, int n) {
    for (int i = 0; i < m; ++i) {
        const double* ai = a + static_cast<std::size_t>(i) * k;
        double* ci = c + static_cast<std::size_t>(i) * n;
        for (int j = 0; j < n; ++j) {
            const double* bj = b + static_cast<std::size_t>(j) * k;
            double acc = 0.0;
            for (int p = 0; p < k; ++p) acc += ai[p] * bj[p];
            ci[j] = acc;
        }
    }
}

void gemm_tn(const double* a, const double* b, double* c, int m, int k, int n) {
    for (int i = 0; i < m; ++i) {
        double* ci = c + static_cast<std::size_t>(i) * n;
        std::memset(ci, 0, sizeof(double) * n);
        for (int p = 0; p < k; ++p) {
            const double api = a[static_cast<std::size_t>(p) * m + i];
            const double* bp = b + static_cast<std::size_t>(p) * n;
            for (int j = 0; j < n; ++j) ci[j] += api * bp[j];
        }
    }
}

void linear_forward(const double* x, const double* w, const double* bias,
                    double* z, int m, int k, int n) {
    for (int i = 0; i < m; ++i) {
        double* zi = z + static_cast<std::size_t>(i) * n;
        std::memcpy(zi, bias, sizeof(double) * n);
        const double* xi = x + static_cast<std::size_t>(i) * k;
        for (int p = 0; p < k; ++p) {
            const double xip = xi[p];
            const double* wp = w + static_cast<std::size_t>(p) * n;
            for (int j = 0; j < n; ++j) zi[j] += xip * wp[j];
        }
    }
}

void relu(const double* z, double* h, std::size_t count) {
    for (std::size_t i = 0; i < count; ++i) h[i] = z[i] > 0.0 ? z[i] : 0.0;
}

void relu_backward(const double* z, const double* dh, double* dz, std::size_t count) {
    for (std::size_t i = 0; i < count; ++i) dz[i] = z[i] > 0.0 ? dh[i] : 0.0;
}

void softmax_rows(const double* z, double* s, int m, int n) {
    for (int i = 0; i < m; ++i) {
        const double* zi = z + static_cast<std::size_t>(i) * n;
        double* si = s + static_cast<std::size_t>(i) * n;
        double mx = zi[0];
        for (int j = 1; j < n; ++j) mx = std::max(mx, zi[j]);
        double sum = 0.0;
        for (int j = 0; j < n; ++j) {
            si[j] = std::exp(zi[j] - mx);
            sum += si[j];
        }
        const double inv = 1.0 / sum;
        for (int j = 0; j < n; ++j) si[j] *= inv;
    }
}

void colsum(const double* dz, double* g, int m, int n) {
    std::memset(g, 0, sizeof(double) * n);
    for (int i = 0; i < m; ++i) {
        const double* row = dz + static_cast<std::size_t>(i) * n;
        for (int j = 0; j < n; ++j) g[j] += row[j];
    }
}

} // namespace ref

// ---------------------------------------------------------------------------
// OpenMP variants: same per-row body, rows split statically.

void gemm_nn(const double* a, const double* b, double* c, int m, int k, int n) {
    const int nt = max_threads();
#pragma omp parallel for schedule(static) num_threads(nt) if (nt > 1 && m > 1)
    for (int i = 0; i < m; ++i) {
        double* ci = c + static_cast<std::size_t>(i) * n;
        std::memset(ci, 0, sizeof(double) * n);
        const double* ai = a + static_cast<std::size_t>(i) * k;
        for (int p = 0; p < k; ++p) {
            const double aip = ai[p];
            const double* bp = b + static_cast<std::size_t>(p) * n;
            for (int j = 0; j < n; ++j) ci[j] += aip * bp[j];
        }
    }
}

void gemm_nt(const double* a, const double* b, double* c, int m, int k, int n) {
    const int nt = max_threads();
#pragma omp parallel for schedule(static) num_threads(nt) if (nt > 1 && m > 1)
    for (int i = 0; i < m; ++i) {
        const double* ai = a + static_cast<std::size_t>(i) * k;
        double* ci = c + static_cast<std::size_t>(i) * n;
        for (int j = 0; j < n; ++j) {
            const double* bj = b + static_cast<std::size_t>(j) * k;
            double acc = 0.0;
            for (int p = 0; p < k; ++p) acc += ai[p] * bj[p];
            ci[j] = acc;
        }
    }
}

void gemm_tn(const double* a, const double* b, double* c, int m, int k, int n) {
    // Split by output row i (column of a); each c row is still accumulated
    // over p in serial order.
    const int nt = max_threads();
#pragma omp parallel for schedule(static) num_threads(nt) if (nt > 1 && m > 1)
    for (int i = 0; i < m; ++i) {
        double* ci = c + static_cast<std::size_t>(i) * n;
        std::memset(ci, 0, sizeof(double) * n);
        for (int p = 0; p < k; ++p) {
            const double api = a[static_cast<std::size_t>(p) * m + i];
            const double* bp = b + static_cast<std::size_t>(p) * n;
            for (int j = 0; j < n; ++j) ci[j] += api * bp[j];
        }
    }
}

void linear_forward(const double* x, const double* w, const double* bias,
                    double* z, int m, int k, int n) {
    const int nt = max_threads();
#pragma omp parallel for schedule(static) num_threads(nt) if (nt > 1 && m > 1)
    for (int i = 0; i < m; ++i) {
        double* zi = z + static_cast<std::size_t>(i) * n;
        std::memcpy(zi, bias, sizeof(double) * n);
        const double* xi = x + static_cast<std::size_t>(i) * k;
        for (int p = 0; p < k; ++p) {
            const double xip = xi[p];
            const double* wp = w + static_cast<std::size_t>(p) * n;
            for (int j = 0; j < n; ++j) zi[j] += xip * wp[j];
        }
    }
}

void relu(const double* z, double* h, std::size_t count) {
    const int nt = max_threads();
#pragma omp parallel for schedule(static) num_threads(nt) if (nt > 1 && count > 4096)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(count); ++i)
        h[i] = z[i] > 0.0 ? z[i] : 0.0;
}

void relu_backward(const double* z, const double* dh, double* dz, std::size_t count) {
    const int nt = max_threads();
#pragma omp parallel for schedule(static) num_threads(nt) if (nt > 1 && count > 4096)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(count); ++i)
        dz[i] = z[i] > 0.0 ? dh[i] : 0.0;
}

void softmax_rows(const double* z, double* s, int m, int n) {
    const int nt = max_threads();
#pragma omp parallel for schedule(static) num_threads(nt) if (nt > 1 && m > 1)
    for (int i = 0; i < m; ++i) ref::softmax_rows(z + static_cast<std::size_t>(i) * n,
                                                  s + static_cast<std::size_t>(i) * n, 1, n);
}

void colsum(const double* dz, double* g, int m, int n) {
    // n is small for our nets; keep the reduction serial over rows.
    ref::colsum(dz, g, m, n);
}

} // namespace nqe::kernels
