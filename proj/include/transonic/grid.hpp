#pragma once

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstddef>
#include <vector>

namespace transonic {

// Dense 2D nodal field, row-major in (i, j) = (xi index, eta index).
class Field2D {
public:
    Field2D() = default;
    Field2D(int nx, int ny, double value = 0.0)
        : nx_(nx), ny_(ny), data_(static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny), value) {}

    int nx() const { return nx_; }
    int ny() const { return ny_; }
    bool empty() const { return data_.empty(); }

    double& operator()(int i, int j) { return data_[idx(i, j)]; }
    double operator()(int i, int j) const { return data_[idx(i, j)]; }

    const std::vector<double>& data() const { return data_; }
    std::vector<double>& data() { return data_; }

    void fill(double value) { std::fill(data_.begin(), data_.end(), value); }

    double max_abs() const {
        double m = 0.0;
        for (double v : data_) m = std::max(m, std::abs(v));
        return m;
    }

private:
    std::size_t idx(int i, int j) const {
        assert(i >= 0 && i < nx_ && j >= 0 && j < ny_);
        return static_cast<std::size_t>(i) * ny_ + j;
    }
    int nx_ = 0, ny_ = 0;
    std::vector<double> data_;
};

inline double max_abs_diff(const Field2D& a, const Field2D& b) {
    assert(a.nx() == b.nx() && a.ny() == b.ny());
    double m = 0.0;
    for (std::size_t k = 0; k < a.data().size(); ++k)
        m = std::max(m, std::abs(a.data()[k] - b.data()[k]));
    return m;
}

// Discrete norm used for convergence control: sup norm plus the sup of
// undivided first differences along both grid directions.
inline double sup_plus_diff_norm(const Field2D& f) {
    double m = f.max_abs();
    for (int i = 0; i < f.nx(); ++i)
        for (int j = 0; j + 1 < f.ny(); ++j)
            m = std::max(m, std::abs(f(i, j + 1) - f(i, j)));
    for (int j = 0; j < f.ny(); ++j)
        for (int i = 0; i + 1 < f.nx(); ++i)
            m = std::max(m, std::abs(f(i + 1, j) - f(i, j)));
    return m;
}

inline double max_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    assert(a.size() == b.size());
    double m = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
    return m;
}

}  // namespace transonic
