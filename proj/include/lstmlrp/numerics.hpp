#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "lstmlrp/errors.hpp"

// Minimal dense double-precision carriers and the element-wise kernels the
// rest of the library is built on. Everything is 64-bit: the gradient and
// conservation checks downstream need ~1e-8 headroom.

namespace lstmlrp {

using Vector = std::vector<double>;

// Row-major dense matrix.
struct Matrix {
    int rows = 0;
    int cols = 0;
    std::vector<double> a;

    Matrix() = default;
    Matrix(int r, int c, double fill = 0.0)
        : rows(r), cols(c), a(static_cast<size_t>(r) * static_cast<size_t>(c), fill) {
        if (r < 0 || c < 0) throw dimension_error("matrix dimensions must be non-negative");
    }

    double& operator()(int r, int c) { return a[static_cast<size_t>(r) * cols + c]; }
    const double& operator()(int r, int c) const { return a[static_cast<size_t>(r) * cols + c]; }

    static Matrix identity(int n) {
        Matrix m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }
};

inline void ensure_finite(const Vector& v, const char* what) {
    for (double x : v)
        if (!std::isfinite(x)) throw numeric_error(std::string("non-finite value in ") + what);
}

inline void ensure_finite(const Matrix& m, const char* what) {
    for (double x : m.a)
        if (!std::isfinite(x)) throw numeric_error(std::string("non-finite value in ") + what);
}

// y = M v
inline Vector matvec(const Matrix& m, const Vector& v) {
    if (m.cols != static_cast<int>(v.size()))
        throw dimension_error("matvec: " + std::to_string(m.rows) + "x" + std::to_string(m.cols) +
                              " times vector of length " + std::to_string(v.size()));
    Vector y(m.rows, 0.0);
    for (int r = 0; r < m.rows; ++r) {
        const double* row = m.a.data() + static_cast<size_t>(r) * m.cols;
        double acc = 0.0;
        for (int c = 0; c < m.cols; ++c) acc += row[c] * v[c];
        y[r] = acc;
    }
    ensure_finite(y, "matvec");
    return y;
}

// y = M^T v
inline Vector matvec_transpose(const Matrix& m, const Vector& v) {
    if (m.rows != static_cast<int>(v.size()))
        throw dimension_error("matvec_transpose: " + std::to_string(m.rows) + "x" +
                              std::to_string(m.cols) + " transposed times vector of length " +
                              std::to_string(v.size()));
    Vector y(m.cols, 0.0);
    for (int r = 0; r < m.rows; ++r) {
        const double* row = m.a.data() + static_cast<size_t>(r) * m.cols;
        const double s = v[r];
        for (int c = 0; c < m.cols; ++c) y[c] += row[c] * s;
    }
    ensure_finite(y, "matvec_transpose");
    return y;
}

inline void check_same_length(const Vector& a, const Vector& b, const char* what) {
    if (a.size() != b.size())
        throw dimension_error(std::string(what) + ": length mismatch " + std::to_string(a.size()) +
                              " vs " + std::to_string(b.size()));
}

inline Vector add(const Vector& a, const Vector& b) {
    check_same_length(a, b, "add");
    Vector y(a.size());
    for (size_t i = 0; i < a.size(); ++i) y[i] = a[i] + b[i];
    ensure_finite(y, "add");
    return y;
}

inline Vector hadamard(const Vector& a, const Vector& b) {
    check_same_length(a, b, "hadamard");
    Vector y(a.size());
    for (size_t i = 0; i < a.size(); ++i) y[i] = a[i] * b[i];
    ensure_finite(y, "hadamard");
    return y;
}

// sigm(x) = 1 / (1 + e^-x), element-wise; output strictly inside (0,1)
inline Vector sigm(const Vector& v) {
    Vector y(v.size());
    for (size_t i = 0; i < v.size(); ++i) y[i] = 1.0 / (1.0 + std::exp(-v[i]));
    ensure_finite(y, "sigm");
    return y;
}

inline Vector tanh(const Vector& v) {
    Vector y(v.size());
    for (size_t i = 0; i < v.size(); ++i) y[i] = std::tanh(v[i]);
    ensure_finite(y, "tanh");
    return y;
}

inline double dot(const Vector& a, const Vector& b) {
    check_same_length(a, b, "dot");
    double acc = 0.0;
    for (size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    if (!std::isfinite(acc)) throw numeric_error("non-finite value in dot");
    return acc;
}

inline double sum(const Vector& v) {
    double acc = 0.0;
    for (double x : v) acc += x;
    return acc;
}

inline Vector concat(const Vector& a, const Vector& b) {
    Vector y;
    y.reserve(a.size() + b.size());
    y.insert(y.end(), a.begin(), a.end());
    y.insert(y.end(), b.begin(), b.end());
    return y;
}

// First index of the maximum; ties resolve to the lowest index.
inline int argmax(const Vector& v) {
    if (v.empty()) throw dimension_error("argmax of empty vector");
    int best = 0;
    for (int i = 1; i < static_cast<int>(v.size()); ++i)
        if (v[i] > v[best]) best = i;
    return best;
}

}  // namespace lstmlrp
