#pragma once

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>
#include <vector>

#include "transonic/errors.hpp"
#include "transonic/grid.hpp"
#include "transonic/numerics.hpp"
#include "transonic/thermo.hpp"

namespace transonic::supersonic {

using thermo::GasModel;

// ---------------------------------------------------------------------------
// Pressure-to-angle potential
// ---------------------------------------------------------------------------

// Tabulated antiderivative Theta(p) of sqrt(q^2-c^2)/(rho c q^2) for one
// (B, A) streamline pair, anchored at Theta(p_ref) = 0.  Theta is strictly
// increasing on the supersonic pressure interval; its differences encode the
// pressure part of the Riemann invariants.
class ThetaClosure {
public:
    ThetaClosure() = default;

    static ThetaClosure build(double B, double A, const GasModel& gas, double p_ref,
                              double quad_tol = 1e-12, int n_nodes = 1025) {
        ThetaClosure c;
        c.B_ = B;
        c.A_ = A;
        c.gamma_ = gas.gamma;
        c.p_ref_ = p_ref;
        c.quad_tol_ = quad_tol;
        const double p_sonic = c.sonic_pressure();
        if (!(p_ref < p_sonic))
            throw sonic_error("ThetaClosure: reference pressure is not supersonic-admissible");
        c.p_lo_ = 0.70 * p_ref;
        c.p_hi_ = std::min(1.30 * p_ref, 0.995 * p_sonic);
        // put p_ref exactly on the grid
        const int n = std::max(n_nodes, 9);
        const double h0 = (c.p_hi_ - c.p_lo_) / (n - 1);
        const int k_ref = static_cast<int>(std::round((p_ref - c.p_lo_) / h0));
        c.p_lo_ = p_ref - k_ref * h0;
        c.nodes_.resize(n);
        c.theta_.assign(n, 0.0);
        c.dtheta_.resize(n);
        for (int k = 0; k < n; ++k) {
            c.nodes_[k] = c.p_lo_ + k * h0;
            c.dtheta_[k] = c.dtheta(c.nodes_[k]);
        }
        auto f = [&c](double p) { return c.dtheta(p); };
        for (int k = k_ref + 1; k < n; ++k)
            c.theta_[k] = c.theta_[k - 1] + adaptive_simpson(f, c.nodes_[k - 1], c.nodes_[k], quad_tol);
        for (int k = k_ref - 1; k >= 0; --k)
            c.theta_[k] = c.theta_[k + 1] - adaptive_simpson(f, c.nodes_[k], c.nodes_[k + 1], quad_tol);
        return c;
    }

    double bernoulli() const { return B_; }
    double multiplier() const { return A_; }
    double reference_pressure() const { return p_ref_; }
    double admissible_lo() const { return p_lo_; }
    double admissible_hi() const { return p_hi_; }
    double quadrature_tolerance() const { return quad_tol_; }

    // Pressure where the flow turns sonic for this (B, A) pair.
    double sonic_pressure() const {
        const double g = gamma_;
        const double a1g = std::pow(A_, 1.0 / g);
        return std::pow(2.0 * (g - 1.0) * B_ / (g * (g + 1.0) * a1g), g / (g - 1.0));
    }

    // Closed-form derivative d Theta / d p = sqrt(q^2 - c^2) / (rho c q^2).
    double dtheta(double p) const {
        check_admissible(p);
        const double g = gamma_;
        const double rho = std::pow(p / A_, 1.0 / g);
        const double c2 = g * p / rho;
        const double q2 = 2.0 * ((g - 1.0) * B_ - g * std::pow(A_ * std::pow(p, g - 1.0), 1.0 / g)) /
                          (g - 1.0);
        return std::sqrt(q2 - c2) / (rho * std::sqrt(c2) * q2);
    }

    // Theta(p) by adaptive quadrature anchored at the nearest table node, so
    // each call integrates at most one table cell at the closure tolerance.
    double theta(double p) const {
        check_admissible(p);
        if (p == p_ref_) return 0.0;
        const int k = nearest_node(p);
        auto f = [this](double t) { return dtheta(t); };
        return theta_[k] + adaptive_simpson(f, nodes_[k], p, quad_tol_);
    }

    // Fast surrogate: cubic Hermite between table nodes (the table carries
    // exact nodal derivatives).  Agrees with theta() to O(h^4).
    double theta_fast(double p) const {
        check_admissible(p);
        return hermite_uniform(nodes_, theta_, dtheta_, p);
    }

    // Solve Theta(p) = target by Newton with the closed-form derivative.
    double invert(double target) const {
        if (!(target >= theta_.front() && target <= theta_.back())) {
            std::ostringstream os;
            os << "ThetaClosure::invert: target " << target
               << " outside the admissible range [" << theta_.front() << ", " << theta_.back()
               << "] (sonic limit)";
            throw sonic_error(os.str());
        }
        const auto it = std::lower_bound(theta_.begin(), theta_.end(), target);
        std::size_t k = static_cast<std::size_t>(std::max<std::ptrdiff_t>(it - theta_.begin() - 1, 0));
        double lo = nodes_[k], hi = nodes_[std::min(k + 1, nodes_.size() - 1)];
        if (hi <= lo) hi = nodes_.back();
        auto f = [&](double p) { return theta_fast(p) - target; };
        auto df = [&](double p) { return dtheta(p); };
        return safeguarded_newton(f, df, lo, hi, 0.5 * (lo + hi), 1e-11, 100);
    }

private:
    void check_admissible(double p) const {
        if (!(p >= p_lo_ && p <= p_hi_)) {
            std::ostringstream os;
            os << "ThetaClosure: pressure " << p << " outside the supersonic-admissible interval ["
               << p_lo_ << ", " << p_hi_ << "] (sonic limit)";
            throw sonic_error(os.str());
        }
    }

    int nearest_node(double p) const {
        const double h = nodes_[1] - nodes_[0];
        int k = static_cast<int>(std::round((p - nodes_[0]) / h));
        return std::clamp(k, 0, static_cast<int>(nodes_.size()) - 1);
    }

    double B_ = 0.0, A_ = 0.0, gamma_ = 1.4;
    double p_ref_ = 0.0, p_lo_ = 0.0, p_hi_ = 0.0, quad_tol_ = 1e-12;
    std::vector<double> nodes_, theta_, dtheta_;
};

// ---------------------------------------------------------------------------
// Invariant algebra
// ---------------------------------------------------------------------------

struct RiemannPair {
    double z_minus = 0.0;
    double z_plus = 0.0;
};

inline RiemannPair riemann_from_state(double omega, double p, const ThetaClosure& closure) {
    const double th = closure.theta(p);
    const double a = std::atan(omega);
    return {a + th, a - th};
}

// Inversion: omega = tan((z- + z+)/2), p = Theta^{-1}((z- - z+)/2).
inline std::pair<double, double> state_from_riemann(const RiemannPair& z,
                                                    const ThetaClosure& closure) {
    const double half_sum = 0.5 * (z.z_minus + z.z_plus);
    const double p = closure.invert(0.5 * (z.z_minus - z.z_plus));
    return {std::tan(half_sum), p};
}

// Velocities from the angle/pressure pair through the Bernoulli relation.
inline std::pair<double, double> velocities_from(double omega, double p, double B, double A,
                                                 const GasModel& gas) {
    const double g = gas.gamma;
    const double rad = (g - 1.0) * B - g * std::pow(A * std::pow(p, g - 1.0), 1.0 / g);
    if (!(rad > 0.0))
        throw admissibility_error("velocities_from: Bernoulli radicand is not positive");
    const double u = std::sqrt(2.0 * rad / ((g - 1.0) * (1.0 + omega * omega)));
    return {u, omega * u};
}

// Characteristic speeds of the diagonal system.  Requires the implied state
// to be horizontally supersonic (u > c).
inline std::pair<double, double> char_speeds(const RiemannPair& z, double B, double A,
                                             const GasModel& gas, const ThetaClosure& closure) {
    const auto [omega, p] = state_from_riemann(z, closure);
    const auto [u, v] = velocities_from(omega, p, B, A, gas);
    const double rho = std::pow(p / A, 1.0 / gas.gamma);
    const double c2 = gas.gamma * p / rho;
    const double q2 = u * u + v * v;
    if (!(u * u > c2))
        throw sonic_error("char_speeds: state is not horizontally supersonic");
    const double front = rho * u * c2 / (u * u - c2);
    const double slope = std::sqrt(q2 - c2) / std::sqrt(c2);
    return {front * (v / u - slope), front * (v / u + slope)};
}

// ---------------------------------------------------------------------------
// Characteristic march
// ---------------------------------------------------------------------------

struct MarchInput {
    int n_xi = 0;
    double length = 0.0;
    int n_eta = 0;    // eta nodes from -m_h (wall, j=0) to 0 (contact, j=n_eta-1)
    double m_h = 0.0;
    std::vector<double> z_minus0, z_plus0;    // inlet traces, size n_eta
    std::vector<double> wall_slope;           // g_-'(xi) on the xi grid
    std::vector<double> contact_pressure;     // subsonic-side p on the xi grid
    std::vector<double> B0, A0;               // streamline invariants per eta node
    const std::vector<ThetaClosure>* closures = nullptr;  // per eta node
    const ThetaClosure* contact_closure = nullptr;        // closure at eta = 0
    const Field2D* frozen_lambda_plus = nullptr;          // optional linearization speeds
    const Field2D* frozen_lambda_minus = nullptr;
};

struct MarchResult {
    Field2D z_minus, z_plus;
    Field2D lambda_plus, lambda_minus;          // speeds actually used
    std::vector<double> contact_omega;          // tan((z- + z+)/2) on eta = 0
    std::vector<double> contact_pressure_sup;   // supersonic-side p on eta = 0
    double max_abs_speed = 0.0;
};

// First-order upwind march of the diagonal system in xi.  z- rides the
// lambda+ family (upward), z+ rides the lambda- family (downward); the wall
// reflects the lambda+ family, the contact reflects the lambda- family.
// Speeds are either evaluated from the current level (self-frozen) or taken
// from the supplied previous-iterate fields.
inline MarchResult march_supersonic(const MarchInput& in, const GasModel& gas,
                                    double pole_margin = 1e-2) {
    const int nx = in.n_xi, ny = in.n_eta;
    if (nx < 2 || ny < 2) throw configuration_error("march_supersonic: grid too small");
    if (static_cast<int>(in.z_minus0.size()) != ny || static_cast<int>(in.z_plus0.size()) != ny ||
        static_cast<int>(in.wall_slope.size()) != nx ||
        static_cast<int>(in.contact_pressure.size()) != nx ||
        static_cast<int>(in.B0.size()) != ny || static_cast<int>(in.A0.size()) != ny ||
        in.closures == nullptr || static_cast<int>(in.closures->size()) != ny ||
        in.contact_closure == nullptr)
        throw configuration_error("march_supersonic: inconsistent input sizes");
    const double dxi = in.length / (nx - 1);
    const double deta = in.m_h / (ny - 1);

    MarchResult out;
    out.z_minus = Field2D(nx, ny);
    out.z_plus = Field2D(nx, ny);
    out.lambda_plus = Field2D(nx, ny);
    out.lambda_minus = Field2D(nx, ny);
    for (int j = 0; j < ny; ++j) {
        out.z_minus(0, j) = in.z_minus0[j];
        out.z_plus(0, j) = in.z_plus0[j];
    }

    auto speeds_at = [&](int i, int j) -> std::pair<double, double> {
        if (in.frozen_lambda_plus && in.frozen_lambda_minus)
            return {(*in.frozen_lambda_minus)(i, j), (*in.frozen_lambda_plus)(i, j)};
        try {
            return char_speeds({out.z_minus(i, j), out.z_plus(i, j)}, in.B0[j], in.A0[j], gas,
                               (*in.closures)[j]);
        } catch (const sonic_error& e) {
            std::ostringstream os;
            os << "march_supersonic: " << e.what() << " at node (i=" << i << ", j=" << j << ")";
            throw sonic_error(os.str());
        }
    };

    for (int i = 0; i + 1 < nx; ++i) {
        double level_max = 0.0;
        for (int j = 0; j < ny; ++j) {
            const auto [lm, lp] = speeds_at(i, j);
            out.lambda_minus(i, j) = lm;
            out.lambda_plus(i, j) = lp;
            level_max = std::max({level_max, std::abs(lm), std::abs(lp)});
            if (!(lp > 0.0) || !(lm < 0.0)) {
                std::ostringstream os;
                os << "march_supersonic: characteristic speeds lost their sign at (i=" << i
                   << ", j=" << j << ")";
                throw sonic_error(os.str());
            }
        }
        out.max_abs_speed = std::max(out.max_abs_speed, level_max);
        if (dxi * level_max > deta) {
            std::ostringstream os;
            os << "march_supersonic: CFL violated at step " << i << ": dxi*max|lambda| = "
               << dxi * level_max << " > deta = " << deta;
            throw configuration_error(os.str());
        }
        const double nu = dxi / deta;
        for (int j = 1; j < ny; ++j)
            out.z_minus(i + 1, j) =
                out.z_minus(i, j) -
                nu * out.lambda_plus(i, j) * (out.z_minus(i, j) - out.z_minus(i, j - 1));
        for (int j = 0; j + 1 < ny; ++j)
            out.z_plus(i + 1, j) =
                out.z_plus(i, j) -
                nu * out.lambda_minus(i, j) * (out.z_plus(i, j + 1) - out.z_plus(i, j));
        // wall: reflect the lambda+ family
        out.z_minus(i + 1, 0) = 2.0 * std::atan(in.wall_slope[i + 1]) - out.z_plus(i + 1, 0);
        // contact: reflect the lambda- family against the subsonic pressure
        out.z_plus(i + 1, ny - 1) =
            out.z_minus(i + 1, ny - 1) -
            2.0 * in.contact_closure->theta(in.contact_pressure[i + 1]);
    }
    for (int j = 0; j < ny; ++j) {
        const auto [lm, lp] = speeds_at(nx - 1, j);
        out.lambda_minus(nx - 1, j) = lm;
        out.lambda_plus(nx - 1, j) = lp;
    }

    out.contact_omega.resize(nx);
    out.contact_pressure_sup.resize(nx);
    for (int i = 0; i < nx; ++i) {
        const double arg = 0.5 * (out.z_minus(i, ny - 1) + out.z_plus(i, ny - 1));
        if (std::abs(arg) >= 0.5 * M_PI - pole_margin)
            throw admissibility_error("march_supersonic: contact flow angle reached the tan pole");
        out.contact_omega[i] = std::tan(arg);
        out.contact_pressure_sup[i] =
            in.contact_closure->invert(0.5 * (out.z_minus(i, ny - 1) - out.z_plus(i, ny - 1)));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Diagnostic characteristic tracer
// ---------------------------------------------------------------------------

struct CharacteristicTrace {
    std::vector<double> xi, eta;
};

// Integrates d eta / d xi = lambda(xi, eta) through a nodal speed field with
// bilinear interpolation (midpoint rule), starting from (0, eta0); stops at
// the strip boundary.  Used for reflection-count checks and plot footprints.
inline CharacteristicTrace trace_characteristic(const Field2D& lambda, double length, double m_h,
                                                double eta0, int substeps = 4) {
    const int nx = lambda.nx(), ny = lambda.ny();
    const double dxi = length / (nx - 1);
    auto interp = [&](double xi, double eta) {
        const double fi = std::clamp(xi / dxi, 0.0, double(nx - 1));
        const double fj = std::clamp((eta + m_h) / (m_h / (ny - 1)), 0.0, double(ny - 1));
        const int i = std::min(static_cast<int>(fi), nx - 2);
        const int j = std::min(static_cast<int>(fj), ny - 2);
        const double s = fi - i, t = fj - j;
        return (1 - s) * (1 - t) * lambda(i, j) + s * (1 - t) * lambda(i + 1, j) +
               (1 - s) * t * lambda(i, j + 1) + s * t * lambda(i + 1, j + 1);
    };
    CharacteristicTrace tr;
    double xi = 0.0, eta = std::clamp(eta0, -m_h, 0.0);
    tr.xi.push_back(xi);
    tr.eta.push_back(eta);
    const double h = dxi / substeps;
    while (xi < length - 1e-14) {
        const double step = std::min(h, length - xi);
        const double k1 = interp(xi, eta);
        const double k2 = interp(xi + 0.5 * step, eta + 0.5 * step * k1);
        double eta_new = eta + step * k2;
        double xi_new = xi + step;
        if (eta_new > 0.0 || eta_new < -m_h) {
            const double target = (eta_new > 0.0) ? 0.0 : -m_h;
            const double frac = (target - eta) / (eta_new - eta);
            xi_new = xi + frac * step;
            eta_new = target;
            tr.xi.push_back(xi_new);
            tr.eta.push_back(eta_new);
            break;
        }
        xi = xi_new;
        eta = eta_new;
        tr.xi.push_back(xi);
        tr.eta.push_back(eta);
    }
    return tr;
}

}  // namespace transonic::supersonic
