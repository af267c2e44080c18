#include "crossframe/spline.hpp"

#include <cassert>
#include <cstddef>

namespace crossframe {

void CubicSpline::fit(std::span<const double> xs, std::span<const double> ys) {
    const std::size_t n = xs.size();
    assert(n >= 2 && n == ys.size());
    x_.assign(xs.begin(), xs.end());
    y_.assign(ys.begin(), ys.end());
    m_.assign(n, 0.0);
    if (n == 2) {
        return;  // straight line, second derivatives stay zero
    }

    // Thomas algorithm on the natural-spline tridiagonal system.
    diag_.assign(n, 0.0);
    rhs_.assign(n, 0.0);
    upper_.assign(n, 0.0);
    diag_[0] = 1.0;
    diag_[n - 1] = 1.0;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double h0 = x_[i] - x_[i - 1];
        const double h1 = x_[i + 1] - x_[i];
        diag_[i] = 2.0 * (h0 + h1);
        upper_[i] = h1;
        rhs_[i] = 6.0 * ((y_[i + 1] - y_[i]) / h1 - (y_[i] - y_[i - 1]) / h0);
    }
    // forward sweep (lower diagonal of row i is h0, zero in rows 0 and n-1)
    for (std::size_t i = 2; i + 1 < n; ++i) {
        const double h0 = x_[i] - x_[i - 1];
        const double w = h0 / diag_[i - 1];
        diag_[i] -= w * upper_[i - 1];
        rhs_[i] -= w * rhs_[i - 1];
    }
    for (std::size_t i = n - 2; i >= 1; --i) {
        m_[i] = (rhs_[i] - upper_[i] * m_[i + 1]) / diag_[i];
    }
}

std::size_t CubicSpline::interval_for(double x) const {
    // last i with x_[i] <= x, clamped to a valid segment
    std::size_t lo = 0, hi = x_.size() - 1;
    if (x <= x_[0]) return 0;
    if (x >= x_[hi]) return hi - 1;
    while (hi - lo > 1) {
        const std::size_t mid = (lo + hi) / 2;
        (x_[mid] <= x ? lo : hi) = mid;
    }
    return lo;
}

double CubicSpline::operator()(double x) const {
    const std::size_t i = interval_for(x);
    const double h = x_[i + 1] - x_[i];
    const double a = (x_[i + 1] - x) / h;
    const double b = (x - x_[i]) / h;
    return a * y_[i] + b * y_[i + 1] +
           ((a * a * a - a) * m_[i] + (b * b * b - b) * m_[i + 1]) * (h * h) / 6.0;
}

void CubicSpline::evaluate_grid(double x0, std::span<double> out) const {
    std::size_t seg = 0;
    const std::size_t last_seg = x_.size() - 2;
    for (std::size_t j = 0; j < out.size(); ++j) {
        const double x = x0 + static_cast<double>(j);
        while (seg < last_seg && x_[seg + 1] < x) {
            ++seg;
        }
        const double h = x_[seg + 1] - x_[seg];
        const double a = (x_[seg + 1] - x) / h;
        const double b = (x - x_[seg]) / h;
        out[j] = a * y_[seg] + b * y_[seg + 1] +
                 ((a * a * a - a) * m_[seg] + (b * b * b - b) * m_[seg + 1]) * (h * h) / 6.0;
    }
}

}  // namespace crossframe
