#pragma once

#include <functional>
#include <thread>
#include <vector>

namespace ctlab {

// golden-section minimization on [lo, hi]
template <typename F>
double golden_min(F&& f, double lo, double hi, int iters = 30) {
    const double inv_phi = 0.6180339887498949;
    double a = lo, b = hi;
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (int i = 0; i < iters; ++i) {
        if (f1 < f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        }
    }
    return f1 < f2 ? x1 : x2;
}

// index-parallel loop with deterministic result placement; the first worker
// exception is rethrown on the caller
inline void parallel_for_index(std::size_t n, int threads, const std::function<void(std::size_t)>& fn) {
    if (threads <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    std::size_t nt = std::min<std::size_t>(threads, n);
    std::vector<std::exception_ptr> errors(nt);
    for (std::size_t t = 0; t < nt; ++t) {
        pool.emplace_back([&, t]() {
            try {
                for (std::size_t i = t; i < n; i += nt) fn(i);
            } catch (...) {
                errors[t] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

// solve A x = b for small dense symmetric-ish systems (Gauss, partial pivot)
inline bool solve_dense(std::vector<std::vector<double>> A, std::vector<double> b,
                        std::vector<double>& x) {
    const std::size_t n = A.size();
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        for (std::size_t r = c + 1; r < n; ++r)
            if (std::abs(A[r][c]) > std::abs(A[piv][c])) piv = r;
        if (std::abs(A[piv][c]) < 1e-14) return false;
        std::swap(A[piv], A[c]);
        std::swap(b[piv], b[c]);
        for (std::size_t r = c + 1; r < n; ++r) {
            double m = A[r][c] / A[c][c];
            for (std::size_t k = c; k < n; ++k) A[r][k] -= m * A[c][k];
            b[r] -= m * b[c];
        }
    }
    x.assign(n, 0.0);
    for (std::size_t r = n; r-- > 0;) {
        double s = b[r];
        for (std::size_t k = r + 1; k < n; ++k) s -= A[r][k] * x[k];
        x[r] = s / A[r][r];
    }
    return true;
}

}  // namespace ctlab
