#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace adem {

using Vec = std::vector<double>;

// Drift evaluator: writes f(x) into out, both of the model's state dimension.
using DriftFn = std::function<void(std::span<const double>, std::span<double>)>;

inline double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double norm(std::span<const double> v) { return std::sqrt(dot(v, v)); }

inline bool all_finite(std::span<const double> v) {
    for (double x : v) {
        if (!std::isfinite(x)) return false;
    }
    return true;
}

// Dense row-major matrix; volatility evaluations fill one of shape
// state_dim x noise_dim.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> a;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, 0.0) {}

    double& operator()(std::size_t i, std::size_t j) { return a[i * cols + j]; }
    double operator()(std::size_t i, std::size_t j) const { return a[i * cols + j]; }

    void set_zero() { std::fill(a.begin(), a.end(), 0.0); }
};

// out = m * v
inline void matvec(const Matrix& m, std::span<const double> v, std::span<double> out) {
    for (std::size_t i = 0; i < m.rows; ++i) {
        const double* row = m.a.data() + i * m.cols;
        double s = 0.0;
        for (std::size_t j = 0; j < m.cols; ++j) s += row[j] * v[j];
        out[i] = s;
    }
}

}  // namespace adem
