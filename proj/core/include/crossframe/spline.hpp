#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace crossframe {

// Natural cubic spline through strictly increasing knots.
// Second derivatives are zero at both ends; interior ones come from the
// standard tridiagonal system solved by the Thomas algorithm.
class CubicSpline {
public:
    // Requires xs strictly increasing, xs.size() == ys.size() >= 2.
    void fit(std::span<const double> xs, std::span<const double> ys);

    double operator()(double x) const;

    // Evaluates at x = x0, x0+1, ..., x0+n-1 into out (out.size() == n).
    // Marches through the knot intervals once; eval points must be ascending.
    void evaluate_grid(double x0, std::span<double> out) const;

    bool fitted() const { return !x_.empty(); }

private:
    std::size_t interval_for(double x) const;

    std::vector<double> x_;
    std::vector<double> y_;
    std::vector<double> m_;  // second derivatives at knots

    // solver workspace, reused across fits
    std::vector<double> diag_;
    std::vector<double> rhs_;
    std::vector<double> upper_;
};

}  // namespace crossframe
