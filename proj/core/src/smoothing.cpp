#include "monospde/smoothing.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace monospde {

SmoothPower::SmoothPower(double p_, int n_) : p(p_), n(n_) {
    if (!(p >= 2.0)) throw std::invalid_argument("smoothed power needs p >= 2");
    if (n < 1) throw std::invalid_argument("smoothed power needs n >= 1");
}

double SmoothPower::value(double r) const {
    const double a = std::abs(r);
    if (a < n) return std::pow(a, p);
    const double s = a - n;
    return std::pow(n, p - 2.0) * p * (p - 1.0) / 2.0 * s * s + p * std::pow(n, p - 1.0) * s + std::pow(n, p);
}

double SmoothPower::d1(double r) const {
    const double a = std::abs(r);
    if (r == 0.0) return 0.0;
    const double sign = r > 0.0 ? 1.0 : -1.0;
    if (a < n) return p * std::pow(a, p - 2.0) * r;
    return sign * (std::pow(n, p - 2.0) * p * (p - 1.0) * (a - n) + p * std::pow(n, p - 1.0));
}

double SmoothPower::d2(double r) const {
    const double a = std::abs(r);
    if (a < n) {
        if (p == 2.0) return 2.0;
        if (a == 0.0) return 0.0;
        return p * (p - 1.0) * std::pow(a, p - 2.0);
    }
    return std::pow(n, p - 2.0) * p * (p - 1.0);
}

double PhiInequalityReport::max_violation() const { return std::max({a, b, c, d}); }

namespace {

// Relative excess of lhs over rhs, 0 when satisfied within tolerance.
double excess(double lhs, double rhs, double rel_tol) {
    if (lhs <= rhs) return 0.0;
    const double scale = std::max(std::abs(lhs), std::abs(rhs));
    const double rel = (lhs - rhs) / scale;
    return rel > rel_tol ? rel : 0.0;
}

}  // namespace

PhiInequalityReport check_phi_inequalities(const SmoothPower& s, std::span<const double> r_samples, double rel_tol) {
    PhiInequalityReport rep;
    const double p = s.p;
    for (double r : r_samples) {
        const double f = s.value(r), f1 = s.d1(r), f2 = s.d2(r);
        const double ea = excess(std::abs(r * f1), p * f, rel_tol);
        const double eb = excess(std::abs(r * r * f2), p * (p - 1.0) * f, rel_tol);
        const double ec = excess(f1 * f1, 4.0 * p * f2 * f, rel_tol);
        double ed = 0.0;
        if (p != 2.0) {
            const double e = p / (p - 2.0);
            ed = excess(std::pow(std::abs(f2), e), std::pow(p * (p - 1.0), e) * f, rel_tol);
        }
        rep.a = std::max(rep.a, ea);
        rep.b = std::max(rep.b, eb);
        rep.c = std::max(rep.c, ec);
        rep.d = std::max(rep.d, ed);
        if (ea > 0.0 || eb > 0.0 || ec > 0.0 || ed > 0.0) ++rep.violations;
    }
    return rep;
}

std::vector<PhiLimitRow> check_phi_limits(double p, double r, std::span<const int> n_sequence) {
    std::vector<PhiLimitRow> rows;
    const double a = std::abs(r);
    const double tv = std::pow(a, p);
    const double t1 = r == 0.0 ? 0.0 : p * std::pow(a, p - 2.0) * r;
    const double t2 = p == 2.0 ? 2.0 : (a == 0.0 ? 0.0 : p * (p - 1.0) * std::pow(a, p - 2.0));
    for (int n : n_sequence) {
        const SmoothPower s(p, n);
        PhiLimitRow row{n, s.value(r), s.d1(r), s.d2(r), tv, t1, t2, false};
        row.exact = row.value == tv && row.d1 == t1 && row.d2 == t2;
        rows.push_back(row);
    }
    return rows;
}

double fit_growth_constant(double p, std::span<const int> n_values, std::span<const double> r_samples) {
    double worst = 0.0;
    for (int n : n_values) {
        const SmoothPower s(p, n);
        for (double r : r_samples) {
            if (r == 0.0) continue;
            worst = std::max(worst, s.value(r) / std::pow(std::abs(r), p));
        }
    }
    return worst;
}

}  // namespace monospde
