#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace monospde {

/// Compressed-row sparse matrix over grid nodes.
class SparseMatrix {
public:
    SparseMatrix() = default;
    explicit SparseMatrix(std::size_t rows) : row_ptr_(rows + 1, 0) {}

    std::size_t rows() const { return row_ptr_.empty() ? 0 : row_ptr_.size() - 1; }

    /// Rows must be appended in order; duplicate columns within a row are summed.
    void append_row(std::size_t row, std::span<const std::size_t> cols, std::span<const double> vals);

    void multiply(std::span<const double> x, std::span<double> y) const;
    std::vector<double> multiply(std::span<const double> x) const;

    double diagonal(std::size_t row) const;
    double at(std::size_t row, std::size_t col) const;
    bool is_symmetric(double tol = 1e-14) const;

    /// Returns alpha * I + beta * this.
    SparseMatrix shifted(double alpha, double beta) const;

    std::span<const std::size_t> row_cols(std::size_t row) const;
    std::span<const double> row_vals(std::size_t row) const;

private:
    std::vector<std::size_t> row_ptr_;
    std::vector<std::size_t> cols_;
    std::vector<double> vals_;
    std::size_t filled_ = 0;
};

/// Tridiagonal system lower[i] x[i-1] + diag[i] x[i] + upper[i] x[i+1] = rhs[i],
/// solved by elimination without pivoting. The factorization is reusable.
class TridiagonalSolver {
public:
    TridiagonalSolver(std::vector<double> lower, std::vector<double> diag, std::vector<double> upper);
    void solve(std::span<const double> rhs, std::span<double> x) const;
    std::size_t size() const { return diag_.size(); }

private:
    std::vector<double> lower_;
    std::vector<double> diag_;   // modified pivots
    std::vector<double> upper_;  // modified super-diagonal
};

struct IterativeResult {
    std::size_t iterations = 0;
    double relative_residual = 0.0;
    bool converged = false;
};

/// Jacobi-preconditioned conjugate gradients for symmetric positive definite A.
/// `x` holds the initial guess on entry.
IterativeResult preconditioned_cg(const SparseMatrix& a, std::span<const double> b, std::span<double> x, double tol,
                                  std::size_t max_iter);

/// Jacobi-preconditioned BiCGSTAB for nonsymmetric A.
IterativeResult bicgstab(const SparseMatrix& a, std::span<const double> b, std::span<double> x, double tol,
                         std::size_t max_iter);

}  // namespace monospde
