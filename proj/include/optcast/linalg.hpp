#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace optcast {

// Symmetric positive definite matrix in banded storage: entry (r, c) with
// c >= r and c - r <= half_bandwidth lives at band[r * (hb + 1) + (c - r)].
class SymBandMatrix {
public:
    SymBandMatrix() = default;
    SymBandMatrix(std::size_t n, std::size_t half_bandwidth);

    std::size_t size() const { return n_; }
    std::size_t half_bandwidth() const { return hb_; }

    double at(std::size_t r, std::size_t c) const;
    void add(std::size_t r, std::size_t c, double v);  // upper triangle only (c >= r)

    void multiply(std::span<const double> x, std::span<double> y) const;  // y = A x

    std::vector<std::vector<double>> to_dense() const;

private:
    std::size_t n_ = 0;
    std::size_t hb_ = 0;
    std::vector<double> band_;
};

// In-place-free banded Cholesky solve (A = L L^T). Throws if A is not
// positive definite.
std::vector<double> cholesky_solve(const SymBandMatrix& a, std::span<const double> b);

struct CgResult {
    std::vector<double> x;
    std::size_t iterations = 0;
    double relative_residual = 0.0;
    bool converged = false;
};

// Jacobi-preconditioned conjugate gradient for SPD systems.
CgResult conjugate_gradient(const SymBandMatrix& a, std::span<const double> b, double rel_tol,
                            std::size_t max_iter, std::span<const double> x0 = {});

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);

}  // namespace optcast
