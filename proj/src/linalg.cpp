#include "optcast/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace optcast {

SymBandMatrix::SymBandMatrix(std::size_t n, std::size_t half_bandwidth)
    : n_(n), hb_(half_bandwidth >= n && n > 0 ? n - 1 : half_bandwidth),
      band_(n * (hb_ + 1), 0.0) {}

double SymBandMatrix::at(std::size_t r, std::size_t c) const {
    if (c < r) std::swap(r, c);
    const std::size_t off = c - r;
    if (off > hb_) return 0.0;
    return band_[r * (hb_ + 1) + off];
}

void SymBandMatrix::add(std::size_t r, std::size_t c, double v) {
    if (c < r) std::swap(r, c);
    const std::size_t off = c - r;
    if (off > hb_) throw std::out_of_range("SymBandMatrix::add outside band");
    band_[r * (hb_ + 1) + off] += v;
}

void SymBandMatrix::multiply(std::span<const double> x, std::span<double> y) const {
    if (x.size() != n_ || y.size() != n_) throw std::invalid_argument("SymBandMatrix::multiply size mismatch");
    for (std::size_t r = 0; r < n_; ++r) y[r] = band_[r * (hb_ + 1)] * x[r];
    for (std::size_t r = 0; r < n_; ++r) {
        const std::size_t cmax = std::min(n_ - 1, r + hb_);
        const double xr = x[r];
        double acc = 0.0;
        for (std::size_t c = r + 1; c <= cmax; ++c) {
            const double v = band_[r * (hb_ + 1) + (c - r)];
            acc += v * x[c];
            y[c] += v * xr;
        }
        y[r] += acc;
    }
}

std::vector<std::vector<double>> SymBandMatrix::to_dense() const {
    std::vector<std::vector<double>> dense(n_, std::vector<double>(n_, 0.0));
    for (std::size_t r = 0; r < n_; ++r)
        for (std::size_t off = 0; off <= hb_ && r + off < n_; ++off) {
            dense[r][r + off] = band_[r * (hb_ + 1) + off];
            dense[r + off][r] = dense[r][r + off];
        }
    return dense;
}

std::vector<double> cholesky_solve(const SymBandMatrix& a, std::span<const double> b) {
    const std::size_t n = a.size();
    const std::size_t hb = a.half_bandwidth();
    if (b.size() != n) throw std::invalid_argument("cholesky_solve size mismatch");

    // lower-banded factor L, stored as L(r, r-off) at l[r][off]
    std::vector<double> l(n * (hb + 1), 0.0);
    auto lv = [&](std::size_t r, std::size_t c) -> double& { return l[r * (hb + 1) + (r - c)]; };

    for (std::size_t j = 0; j < n; ++j) {
        double d = a.at(j, j);
        const std::size_t kmin = j > hb ? j - hb : 0;
        for (std::size_t k = kmin; k < j; ++k) d -= lv(j, k) * lv(j, k);
        if (!(d > 0.0)) throw std::runtime_error("cholesky_solve: matrix not positive definite");
        const double dj = std::sqrt(d);
        lv(j, j) = dj;
        const std::size_t imax = std::min(n - 1, j + hb);
        for (std::size_t i = j + 1; i <= imax; ++i) {
            double s = a.at(i, j);
            const std::size_t k0 = std::max(i > hb ? i - hb : 0, kmin);
            for (std::size_t k = k0; k < j; ++k) s -= lv(i, k) * lv(j, k);
            lv(i, j) = s / dj;
        }
    }

    std::vector<double> x(b.begin(), b.end());
    for (std::size_t i = 0; i < n; ++i) {  // L y = b
        const std::size_t kmin = i > hb ? i - hb : 0;
        double s = x[i];
        for (std::size_t k = kmin; k < i; ++k) s -= lv(i, k) * x[k];
        x[i] = s / lv(i, i);
    }
    for (std::size_t ii = n; ii-- > 0;) {  // L^T x = y
        const std::size_t imax = std::min(n - 1, ii + hb);
        double s = x[ii];
        for (std::size_t k = ii + 1; k <= imax; ++k) s -= lv(k, ii) * x[k];
        x[ii] = s / lv(ii, ii);
    }
    return x;
}

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

CgResult conjugate_gradient(const SymBandMatrix& a, std::span<const double> b, double rel_tol,
                            std::size_t max_iter, std::span<const double> x0) {
    const std::size_t n = a.size();
    CgResult res;
    res.x.assign(n, 0.0);
    if (!x0.empty()) {
        if (x0.size() != n) throw std::invalid_argument("conjugate_gradient x0 size mismatch");
        res.x.assign(x0.begin(), x0.end());
    }

    std::vector<double> inv_diag(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double d = a.at(i, i);
        inv_diag[i] = d > 0.0 ? 1.0 / d : 1.0;
    }

    std::vector<double> r(n), z(n), p(n), ap(n);
    a.multiply(res.x, ap);
    for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - ap[i];

    const double bnorm = norm2(b);
    const double target = rel_tol * (bnorm > 0.0 ? bnorm : 1.0);
    double rnorm = norm2(r);
    if (rnorm <= target) {
        res.converged = true;
        res.relative_residual = bnorm > 0.0 ? rnorm / bnorm : rnorm;
        return res;
    }

    for (std::size_t i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
    p = z;
    double rz = dot(r, z);

    for (std::size_t it = 0; it < max_iter; ++it) {
        a.multiply(p, ap);
        const double pap = dot(p, ap);
        if (!(pap > 0.0)) break;  // matrix not SPD or breakdown
        const double alpha = rz / pap;
        for (std::size_t i = 0; i < n; ++i) res.x[i] += alpha * p[i];
        for (std::size_t i = 0; i < n; ++i) r[i] -= alpha * ap[i];
        res.iterations = it + 1;
        rnorm = norm2(r);
        if (rnorm <= target) {
            res.converged = true;
            break;
        }
        for (std::size_t i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
        const double rz_next = dot(r, z);
        const double beta = rz_next / rz;
        rz = rz_next;
        for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
    }
    res.relative_residual = bnorm > 0.0 ? rnorm / bnorm : rnorm;
    return res;
}

}  // namespace optcast
