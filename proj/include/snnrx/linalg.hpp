#pragma once

#include <cassert>
#include <cmath>
#include <cstddef>
#include <vector>

namespace snnrx {

// Small dense row-major matrix. All network weights and potential traces in
// this project are tiny (at most a few hundred rows/columns), so a flat
// vector plus explicit loops beats pulling in a full linear algebra package.
struct Mat {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> a;

    Mat() = default;
    Mat(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), a(r * c, fill) {}

    double& operator()(std::size_t r, std::size_t c) {
        assert(r < rows && c < cols);
        return a[r * cols + c];
    }
    double operator()(std::size_t r, std::size_t c) const {
        assert(r < rows && c < cols);
        return a[r * cols + c];
    }

    double* row(std::size_t r) { return a.data() + r * cols; }
    const double* row(std::size_t r) const { return a.data() + r * cols; }

    std::size_t size() const { return a.size(); }

    void fill(double v) { std::fill(a.begin(), a.end(), v); }

    bool same_shape(const Mat& o) const { return rows == o.rows && cols == o.cols; }

    bool all_finite() const {
        for (double v : a)
            if (!std::isfinite(v)) return false;
        return true;
    }
};

// y += M x
inline void matvec_acc(const Mat& m, const double* x, double* y) {
    for (std::size_t r = 0; r < m.rows; ++r) {
        const double* mr = m.row(r);
        double s = 0.0;
        for (std::size_t c = 0; c < m.cols; ++c) s += mr[c] * x[c];
        y[r] += s;
    }
}

// y += M^T x
inline void matvec_t_acc(const Mat& m, const double* x, double* y) {
    for (std::size_t r = 0; r < m.rows; ++r) {
        const double* mr = m.row(r);
        const double xr = x[r];
        if (xr == 0.0) continue;
        for (std::size_t c = 0; c < m.cols; ++c) y[c] += mr[c] * xr;
    }
}

// M += a x y^T (outer product accumulate)
inline void outer_acc(Mat& m, const double* x, const double* y, double a = 1.0) {
    for (std::size_t r = 0; r < m.rows; ++r) {
        const double xr = a * x[r];
        if (xr == 0.0) continue;
        double* mr = m.row(r);
        for (std::size_t c = 0; c < m.cols; ++c) mr[c] += xr * y[c];
    }
}

inline double mean_sq(const Mat& m) {
    if (m.a.empty()) return 0.0;
    double s = 0.0;
    for (double v : m.a) s += v * v;
    return s / static_cast<double>(m.a.size());
}

}  // namespace snnrx
