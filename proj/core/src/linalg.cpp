#include "monospde/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "monospde/errors.hpp"

namespace monospde {

void SparseMatrix::append_row(std::size_t row, std::span<const std::size_t> cols, std::span<const double> vals) {
    if (row != filled_) throw std::logic_error("SparseMatrix rows must be appended in order");
    std::vector<std::size_t> order(cols.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return cols[a] < cols[b]; });
    for (std::size_t k : order) {
        if (!cols_.empty() && cols_.size() > row_ptr_[row] && cols_.back() == cols[k]) {
            vals_.back() += vals[k];
        } else {
            cols_.push_back(cols[k]);
            vals_.push_back(vals[k]);
        }
    }
    row_ptr_[row + 1] = cols_.size();
    ++filled_;
}

void SparseMatrix::multiply(std::span<const double> x, std::span<double> y) const {
    for (std::size_t r = 0; r < rows(); ++r) {
        double s = 0.0;
        for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) s += vals_[k] * x[cols_[k]];
        y[r] = s;
    }
}

std::vector<double> SparseMatrix::multiply(std::span<const double> x) const {
    std::vector<double> y(rows(), 0.0);
    multiply(x, y);
    return y;
}

double SparseMatrix::at(std::size_t row, std::size_t col) const {
    for (std::size_t k = row_ptr_[row]; k < row_ptr_[row + 1]; ++k)
        if (cols_[k] == col) return vals_[k];
    return 0.0;
}

double SparseMatrix::diagonal(std::size_t row) const { return at(row, row); }

bool SparseMatrix::is_symmetric(double tol) const {
    for (std::size_t r = 0; r < rows(); ++r)
        for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
            const double other = at(cols_[k], r);
            if (std::abs(vals_[k] - other) > tol * std::max({1.0, std::abs(vals_[k]), std::abs(other)})) return false;
        }
    return true;
}

SparseMatrix SparseMatrix::shifted(double alpha, double beta) const {
    SparseMatrix out(rows());
    std::vector<std::size_t> cols;
    std::vector<double> vals;
    for (std::size_t r = 0; r < rows(); ++r) {
        cols.assign(cols_.begin() + row_ptr_[r], cols_.begin() + row_ptr_[r + 1]);
        vals.assign(vals_.begin() + row_ptr_[r], vals_.begin() + row_ptr_[r + 1]);
        for (double& v : vals) v *= beta;
        cols.push_back(r);
        vals.push_back(alpha);
        out.append_row(r, cols, vals);
    }
    return out;
}

std::span<const std::size_t> SparseMatrix::row_cols(std::size_t row) const {
    return {cols_.data() + row_ptr_[row], row_ptr_[row + 1] - row_ptr_[row]};
}

std::span<const double> SparseMatrix::row_vals(std::size_t row) const {
    return {vals_.data() + row_ptr_[row], row_ptr_[row + 1] - row_ptr_[row]};
}

TridiagonalSolver::TridiagonalSolver(std::vector<double> lower, std::vector<double> diag, std::vector<double> upper)
    : lower_(std::move(lower)), diag_(std::move(diag)), upper_(std::move(upper)) {
    const std::size_t n = diag_.size();
    if (lower_.size() != n || upper_.size() != n) throw std::invalid_argument("tridiagonal bands differ in length");
    for (std::size_t i = 0; i < n; ++i) {
        if (i > 0) {
            const double m = lower_[i] / diag_[i - 1];
            diag_[i] -= m * upper_[i - 1];
            lower_[i] = m;
        }
        if (diag_[i] == 0.0 || !std::isfinite(diag_[i])) throw NumericalError("tridiagonal elimination hit a zero pivot");
    }
}

void TridiagonalSolver::solve(std::span<const double> rhs, std::span<double> x) const {
    const std::size_t n = diag_.size();
    if (n == 0) return;
    // forward sweep with stored multipliers
    x[0] = rhs[0];
    for (std::size_t i = 1; i < n; ++i) x[i] = rhs[i] - lower_[i] * x[i - 1];
    x[n - 1] /= diag_[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) x[i] = (x[i] - upper_[i] * x[i + 1]) / diag_[i];
}

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

std::vector<double> inverse_diagonal(const SparseMatrix& a) {
    std::vector<double> inv(a.rows());
    for (std::size_t r = 0; r < a.rows(); ++r) {
        const double d = a.diagonal(r);
        inv[r] = d != 0.0 ? 1.0 / d : 1.0;
    }
    return inv;
}

}  // namespace

IterativeResult preconditioned_cg(const SparseMatrix& a, std::span<const double> b, std::span<double> x, double tol,
                                  std::size_t max_iter) {
    const std::size_t n = a.rows();
    const auto inv_diag = inverse_diagonal(a);
    std::vector<double> r(n), z(n), p(n), ap(n);
    a.multiply(x, ap);
    for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - ap[i];
    const double bnorm = std::sqrt(dot(b, b));
    IterativeResult res;
    if (bnorm == 0.0) {
        std::fill(x.begin(), x.end(), 0.0);
        res.converged = true;
        return res;
    }
    for (std::size_t i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
    p = z;
    double rz = dot(r, z);
    res.relative_residual = std::sqrt(dot(r, r)) / bnorm;
    while (res.relative_residual > tol && res.iterations < max_iter) {
        a.multiply(p, ap);
        const double pap = dot(p, ap);
        if (pap <= 0.0) break;
        const double alpha = rz / pap;
        for (std::size_t i = 0; i < n; ++i) {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        for (std::size_t i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
        const double rz_new = dot(r, z);
        const double beta = rz_new / rz;
        rz = rz_new;
        for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
        ++res.iterations;
        res.relative_residual = std::sqrt(dot(r, r)) / bnorm;
    }
    res.converged = res.relative_residual <= tol;
    return res;
}

IterativeResult bicgstab(const SparseMatrix& a, std::span<const double> b, std::span<double> x, double tol,
                         std::size_t max_iter) {
    const std::size_t n = a.rows();
    const auto inv_diag = inverse_diagonal(a);
    std::vector<double> r(n), r0(n), p(n, 0.0), v(n, 0.0), s(n), t(n), phat(n), shat(n);
    a.multiply(x, v);
    for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - v[i];
    r0 = r;
    std::fill(v.begin(), v.end(), 0.0);
    const double bnorm = std::sqrt(dot(b, b));
    IterativeResult res;
    if (bnorm == 0.0) {
        std::fill(x.begin(), x.end(), 0.0);
        res.converged = true;
        return res;
    }
    double rho = 1.0, alpha = 1.0, omega = 1.0;
    res.relative_residual = std::sqrt(dot(r, r)) / bnorm;
    while (res.relative_residual > tol && res.iterations < max_iter) {
        const double rho_new = dot(r0, r);
        if (rho_new == 0.0) break;
        const double beta = (rho_new / rho) * (alpha / omega);
        rho = rho_new;
        for (std::size_t i = 0; i < n; ++i) p[i] = r[i] + beta * (p[i] - omega * v[i]);
        for (std::size_t i = 0; i < n; ++i) phat[i] = inv_diag[i] * p[i];
        a.multiply(phat, v);
        alpha = rho / dot(r0, v);
        for (std::size_t i = 0; i < n; ++i) s[i] = r[i] - alpha * v[i];
        for (std::size_t i = 0; i < n; ++i) shat[i] = inv_diag[i] * s[i];
        a.multiply(shat, t);
        const double tt = dot(t, t);
        omega = tt > 0.0 ? dot(t, s) / tt : 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            x[i] += alpha * phat[i] + omega * shat[i];
            r[i] = s[i] - omega * t[i];
        }
        ++res.iterations;
        res.relative_residual = std::sqrt(dot(r, r)) / bnorm;
        if (omega == 0.0) break;
    }
    res.converged = res.relative_residual <= tol;
    return res;
}

}  // namespace monospde
