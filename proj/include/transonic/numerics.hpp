#pragma once

#include <algorithm>
#include <array>
#include <cassert>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

#include "transonic/errors.hpp"

namespace transonic {

// ---------------------------------------------------------------------------
// Quadrature
// ---------------------------------------------------------------------------

// Composite trapezoid over samples f_k at uniform spacing h.
inline double trapezoid_uniform(const std::vector<double>& f, double h) {
    assert(f.size() >= 2);
    double s = 0.5 * (f.front() + f.back());
    for (std::size_t k = 1; k + 1 < f.size(); ++k) s += f[k];
    return s * h;
}

// Cumulative trapezoid: out[k] = integral from node 0 to node k.
inline std::vector<double> cumulative_trapezoid_uniform(const std::vector<double>& f, double h) {
    std::vector<double> out(f.size(), 0.0);
    for (std::size_t k = 1; k < f.size(); ++k)
        out[k] = out[k - 1] + 0.5 * h * (f[k - 1] + f[k]);
    return out;
}

// Trapezoid over a non-uniform abscissa table.
inline double trapezoid(const std::vector<double>& x, const std::vector<double>& f) {
    assert(x.size() == f.size() && x.size() >= 2);
    double s = 0.0;
    for (std::size_t k = 1; k < x.size(); ++k)
        s += 0.5 * (f[k - 1] + f[k]) * (x[k] - x[k - 1]);
    return s;
}

// 4-point Gauss-Legendre quadrature of f over [0, 1].
template <typename F>
double gauss4_unit(F&& f) {
    static constexpr std::array<double, 4> xs = {
        0.069431844202973712, 0.330009478207571868,
        0.669990521792428132, 0.930568155797026288};
    static constexpr std::array<double, 4> ws = {
        0.173927422568726929, 0.326072577431273071,
        0.326072577431273071, 0.173927422568726929};
    double s = 0.0;
    for (int k = 0; k < 4; ++k) s += ws[k] * f(xs[k]);
    return s;
}

namespace detail {
template <typename F>
double adaptive_simpson_rec(F& f, double a, double b, double eps, double fa, double fm, double fb,
                            double whole, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * eps)
        return left + right + delta / 15.0;
    return adaptive_simpson_rec(f, a, m, 0.5 * eps, fa, flm, fm, left, depth - 1) +
           adaptive_simpson_rec(f, m, b, 0.5 * eps, fm, frm, fb, right, depth - 1);
}
}  // namespace detail

// Adaptive Simpson quadrature with Richardson correction.
template <typename F>
double adaptive_simpson(F&& f, double a, double b, double eps, int max_depth = 60) {
    if (a == b) return 0.0;
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return detail::adaptive_simpson_rec(f, a, b, eps, fa, fm, fb, whole, max_depth);
}

// ---------------------------------------------------------------------------
// Scalar root finding
// ---------------------------------------------------------------------------

// Newton iteration safeguarded by a bracketing bisection fallback.  The
// bracket [lo, hi] must satisfy f(lo) * f(hi) <= 0; each step that leaves
// the bracket, or fails to shrink it, falls back to bisection.
template <typename F, typename DF>
double safeguarded_newton(F&& f, DF&& df, double lo, double hi, double x0, double x_tol,
                          int max_iter = 100) {
    double flo = f(lo), fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo > 0.0) == (fhi > 0.0))
        throw std::invalid_argument("safeguarded_newton: bracket does not straddle a root");
    double x = std::clamp(x0, lo, hi);
    for (int it = 0; it < max_iter; ++it) {
        const double fx = f(x);
        if (fx == 0.0) return x;
        if ((fx > 0.0) == (fhi > 0.0)) {
            hi = x;
            fhi = fx;
        } else {
            lo = x;
            flo = fx;
        }
        const double d = df(x);
        double step = (d != 0.0) ? -fx / d : std::numeric_limits<double>::infinity();
        double x_new = x + step;
        if (!(x_new > lo && x_new < hi))
            x_new = 0.5 * (lo + hi);
        if (std::abs(x_new - x) <= x_tol) return x_new;
        x = x_new;
    }
    return x;
}

// Plain bisection to a given x tolerance; used by test oracles as well.
template <typename F>
double bisect(F&& f, double lo, double hi, double x_tol, int max_iter = 200) {
    double flo = f(lo);
    if (flo == 0.0) return lo;
    if ((flo > 0.0) == (f(hi) > 0.0))
        throw std::invalid_argument("bisect: bracket does not straddle a root");
    for (int it = 0; it < max_iter && (hi - lo) > x_tol; ++it) {
        const double m = 0.5 * (lo + hi);
        const double fm = f(m);
        if (fm == 0.0) return m;
        if ((fm > 0.0) == (flo > 0.0)) {
            lo = m;
            flo = fm;
        } else {
            hi = m;
        }
    }
    return 0.5 * (lo + hi);
}

// ---------------------------------------------------------------------------
// Monotone cubic interpolation (Fritsch-Carlson)
// ---------------------------------------------------------------------------

// C^1 piecewise-cubic interpolant of a sample table.  Slopes are limited so
// that monotone data produce a monotone interpolant; evaluation outside the
// table continues with the end values (constant extension).
class MonotoneCubic {
public:
    MonotoneCubic() = default;

    MonotoneCubic(std::vector<double> x, std::vector<double> f)
        : x_(std::move(x)), f_(std::move(f)) {
        const std::size_t n = x_.size();
        if (n < 2 || f_.size() != n)
            throw std::invalid_argument("MonotoneCubic: need at least two samples");
        for (std::size_t k = 1; k < n; ++k)
            if (!(x_[k] > x_[k - 1]))
                throw std::invalid_argument("MonotoneCubic: abscissae must be strictly increasing");
        d_.assign(n, 0.0);
        std::vector<double> delta(n - 1);
        for (std::size_t k = 0; k + 1 < n; ++k)
            delta[k] = (f_[k + 1] - f_[k]) / (x_[k + 1] - x_[k]);
        d_[0] = delta[0];
        d_[n - 1] = delta[n - 2];
        for (std::size_t k = 1; k + 1 < n; ++k) {
            if (delta[k - 1] * delta[k] <= 0.0) {
                d_[k] = 0.0;
            } else {
                // weighted harmonic mean of adjacent secants
                const double w1 = 2.0 * (x_[k + 1] - x_[k]) + (x_[k] - x_[k - 1]);
                const double w2 = (x_[k + 1] - x_[k]) + 2.0 * (x_[k] - x_[k - 1]);
                d_[k] = (w1 + w2) / (w1 / delta[k - 1] + w2 / delta[k]);
            }
        }
        // clamp end slopes (Fritsch-Carlson end condition)
        for (std::size_t e : {std::size_t(0), n - 1}) {
            const double del = (e == 0) ? delta[0] : delta[n - 2];
            if (d_[e] * del <= 0.0)
                d_[e] = 0.0;
            else if (std::abs(d_[e]) > 3.0 * std::abs(del))
                d_[e] = 3.0 * del;
        }
    }

    double operator()(double x) const { return eval<0>(x); }
    double derivative(double x) const { return eval<1>(x); }
    double second_derivative(double x) const { return eval<2>(x); }

    double x_min() const { return x_.front(); }
    double x_max() const { return x_.back(); }

private:
    template <int Order>
    double eval(double x) const {
        if (x <= x_.front()) return edge<Order>(0, x);
        if (x >= x_.back()) return edge<Order>(x_.size() - 1, x);
        const auto it = std::upper_bound(x_.begin(), x_.end(), x);
        const std::size_t k = static_cast<std::size_t>(it - x_.begin()) - 1;
        const double h = x_[k + 1] - x_[k];
        const double t = (x - x_[k]) / h;
        const double f0 = f_[k], f1 = f_[k + 1];
        const double m0 = d_[k] * h, m1 = d_[k + 1] * h;
        if constexpr (Order == 0) {
            const double h00 = (1 + 2 * t) * (1 - t) * (1 - t);
            const double h10 = t * (1 - t) * (1 - t);
            const double h01 = t * t * (3 - 2 * t);
            const double h11 = t * t * (t - 1);
            return h00 * f0 + h10 * m0 + h01 * f1 + h11 * m1;
        } else if constexpr (Order == 1) {
            const double dh00 = 6 * t * (t - 1);
            const double dh10 = (1 - t) * (1 - 3 * t);
            const double dh01 = -6 * t * (t - 1);
            const double dh11 = t * (3 * t - 2);
            return (dh00 * f0 + dh10 * m0 + dh01 * f1 + dh11 * m1) / h;
        } else {
            const double d2h00 = 12 * t - 6;
            const double d2h10 = 6 * t - 4;
            const double d2h01 = 6 - 12 * t;
            const double d2h11 = 6 * t - 2;
            return (d2h00 * f0 + d2h10 * m0 + d2h01 * f1 + d2h11 * m1) / (h * h);
        }
    }

    template <int Order>
    double edge(std::size_t k, double) const {
        if constexpr (Order == 0) return f_[k];
        else return 0.0;  // constant extension
    }

    std::vector<double> x_, f_, d_;
};

// Cubic Hermite evaluation on a uniform table with known nodal derivatives.
// Used by tabulated closures; O(h^4) accurate between nodes.
inline double hermite_uniform(const std::vector<double>& x, const std::vector<double>& f,
                              const std::vector<double>& df, double xq) {
    assert(x.size() >= 2 && f.size() == x.size() && df.size() == x.size());
    const double h = x[1] - x[0];
    int k = static_cast<int>(std::floor((xq - x[0]) / h));
    k = std::clamp(k, 0, static_cast<int>(x.size()) - 2);
    const double t = (xq - x[k]) / h;
    const double h00 = (1 + 2 * t) * (1 - t) * (1 - t);
    const double h10 = t * (1 - t) * (1 - t);
    const double h01 = t * t * (3 - 2 * t);
    const double h11 = t * t * (t - 1);
    return h00 * f[k] + h10 * h * df[k] + h01 * f[k + 1] + h11 * h * df[k + 1];
}

}  // namespace transonic
