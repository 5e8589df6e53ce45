#include "snnrx/fir.hpp"

#include <cmath>
#include <stdexcept>

namespace snnrx::eq {

namespace {

// Solve (A + ridge I) x = b in place, plain Gaussian elimination with
// partial pivoting; dimensions here are tiny.
std::vector<double> solve_ridge(std::vector<std::vector<double>> a, std::vector<double> b,
                                double ridge) {
    const std::size_t n = a.size();
    for (std::size_t i = 0; i < n; ++i) a[i][i] += ridge;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
        std::swap(a[col], a[piv]);
        std::swap(b[col], b[piv]);
        if (a[col][col] == 0.0) throw std::runtime_error("fir_equalize: singular system");
        for (std::size_t r = col + 1; r < n; ++r) {
            const double f = a[r][col] / a[col][col];
            if (f == 0.0) continue;
            for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
            b[r] -= f * b[col];
        }
    }
    std::vector<double> x(n, 0.0);
    for (std::size_t i = n; i-- > 0;) {
        double s = b[i];
        for (std::size_t c = i + 1; c < n; ++c) s -= a[i][c] * x[c];
        x[i] = s / a[i][i];
    }
    return x;
}

std::size_t nearest_level(double v, const chan::Constellation& c) {
    std::size_t best = 0;
    double bd = std::abs(v - c.points[0].real());
    for (std::size_t i = 1; i < c.size(); ++i) {
        const double d = std::abs(v - c.points[i].real());
        if (d < bd) {
            bd = d;
            best = i;
        }
    }
    return best;
}

}  // namespace

double FirEqualizer::filter_ff(const std::vector<double>& window) const {
    double s = bias;
    for (std::size_t i = 0; i < ff.size(); ++i) s += ff[i] * window[i];
    return s;
}

FirEqualizer fir_equalize(bool dfe, const std::vector<double>& y,
                          const std::vector<std::size_t>& index, const chan::Constellation& c,
                          std::size_t n_ff, std::size_t n_fb, std::size_t delta) {
    if (y.size() != index.size()) throw std::invalid_argument("fir_equalize: length mismatch");
    if (!dfe) n_fb = 0;
    const std::size_t dim = n_ff + n_fb + 1;  // + intercept
    const std::size_t n = y.size();

    std::vector<std::vector<double>> ata(dim, std::vector<double>(dim, 0.0));
    std::vector<double> atb(dim, 0.0);
    std::vector<double> row(dim);
    std::size_t used = 0;

    for (std::size_t k = n_ff; k < n; ++k) {
        // target symbol at t = k - delta, feedback over t-1 .. t-n_fb
        if (k < delta) continue;
        const std::size_t t = k - delta;
        if (t >= n || t < n_fb) continue;
        for (std::size_t i = 0; i < n_ff; ++i) row[i] = y[k - i];
        for (std::size_t i = 0; i < n_fb; ++i) row[n_ff + i] = c.points[index[t - 1 - i]].real();
        row[dim - 1] = 1.0;
        const double target = c.points[index[t]].real();
        for (std::size_t i = 0; i < dim; ++i) {
            atb[i] += row[i] * target;
            for (std::size_t j = 0; j < dim; ++j) ata[i][j] += row[i] * row[j];
        }
        ++used;
    }
    if (used < dim) throw std::invalid_argument("fir_equalize: pilot block too short");

    const auto x = solve_ridge(ata, atb, 1e-8);
    FirEqualizer f;
    f.dfe = dfe;
    f.ff.assign(x.begin(), x.begin() + n_ff);
    f.fb.assign(x.begin() + n_ff, x.begin() + n_ff + n_fb);
    f.bias = x[dim - 1];

    // residual MSE on the pilot block
    double mse = 0.0;
    for (std::size_t k = n_ff; k < n; ++k) {
        if (k < delta) continue;
        const std::size_t t = k - delta;
        if (t >= n || t < n_fb) continue;
        double est = f.bias;
        for (std::size_t i = 0; i < n_ff; ++i) est += f.ff[i] * y[k - i];
        for (std::size_t i = 0; i < n_fb; ++i)
            est += f.fb[i] * c.points[index[t - 1 - i]].real();
        const double e = est - c.points[index[t]].real();
        mse += e * e;
    }
    f.residual_mse = mse / static_cast<double>(used);
    return f;
}

std::vector<std::size_t> fir_detect(const FirEqualizer& f, const std::vector<double>& y,
                                    const chan::Constellation& c, std::size_t n_ff,
                                    std::size_t delta) {
    const std::size_t n = y.size();
    std::vector<std::size_t> dec(n, 0);
    std::vector<double> window(n_ff);
    const std::size_t n_fb = f.fb.size();

    for (std::size_t t = 0; t < n; ++t) {
        const std::size_t k = t + delta;
        for (std::size_t i = 0; i < n_ff; ++i) {
            // pad sequence edges with zero-order hold of the nearest sample
            const std::ptrdiff_t p = static_cast<std::ptrdiff_t>(k) - static_cast<std::ptrdiff_t>(i);
            window[i] = y[std::min<std::size_t>(n - 1, static_cast<std::size_t>(std::max<std::ptrdiff_t>(0, p)))];
        }
        double est = f.filter_ff(window);
        for (std::size_t i = 0; i < n_fb; ++i) {
            // decisions before the start count as the lowest level
            const std::size_t di = t >= i + 1 ? dec[t - 1 - i] : 0;
            est += f.fb[i] * c.points[di].real();
        }
        dec[t] = nearest_level(est, c);
    }
    return dec;
}

}  // namespace snnrx::eq
