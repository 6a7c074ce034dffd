#pragma once

#include <cmath>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "transonic/errors.hpp"
#include "transonic/grid.hpp"
#include "transonic/numerics.hpp"
#include "transonic/thermo.hpp"

namespace transonic::lagrangian {

// ---------------------------------------------------------------------------
// Geometry
// ---------------------------------------------------------------------------

// Nozzle walls sampled on a uniform x-grid over [0, L].  Values and the two
// derivatives come from the declared interpolant: monotone cubic (order 3,
// default) or piecewise linear (order 1).
class NozzleGeometry {
public:
    NozzleGeometry() = default;

    NozzleGeometry(double length, std::vector<double> lower, std::vector<double> upper,
                   int interp_order = 3)
        : length_(length), lower_(std::move(lower)), upper_(std::move(upper)),
          order_(interp_order) {
        if (length_ <= 0.0) throw data_error("NozzleGeometry: length must be positive");
        if (lower_.size() < 2 || lower_.size() != upper_.size())
            throw data_error("NozzleGeometry: need matching wall sample tables");
        if (order_ != 1 && order_ != 3)
            throw data_error("NozzleGeometry: interpolation order must be 1 or 3");
        x_.resize(lower_.size());
        for (std::size_t k = 0; k < x_.size(); ++k)
            x_[k] = length_ * static_cast<double>(k) / static_cast<double>(x_.size() - 1);
        for (std::size_t k = 0; k < x_.size(); ++k)
            if (!(lower_[k] < upper_[k]))
                throw data_error("NozzleGeometry: walls cross at sample " + std::to_string(k));
        if (order_ == 3) {
            lower_itp_ = MonotoneCubic(x_, lower_);
            upper_itp_ = MonotoneCubic(x_, upper_);
        }
    }

    static NozzleGeometry from_functions(double length, const std::function<double(double)>& lo,
                                         const std::function<double(double)>& up, int n_samples,
                                         int interp_order = 3) {
        std::vector<double> l(n_samples), u(n_samples);
        for (int k = 0; k < n_samples; ++k) {
            const double x = length * k / (n_samples - 1);
            l[k] = lo(x);
            u[k] = up(x);
        }
        return NozzleGeometry(length, std::move(l), std::move(u), interp_order);
    }

    double length() const { return length_; }
    int interp_order() const { return order_; }

    double lower(double x) const { return value(lower_, lower_itp_, x); }
    double upper(double x) const { return value(upper_, upper_itp_, x); }
    double lower_slope(double x) const { return slope(lower_, lower_itp_, x); }
    double upper_slope(double x) const { return slope(upper_, upper_itp_, x); }
    double lower_curvature(double x) const { return curvature(lower_itp_, x); }
    double upper_curvature(double x) const { return curvature(upper_itp_, x); }

private:
    double value(const std::vector<double>& s, const MonotoneCubic& itp, double x) const {
        if (order_ == 3) return itp(x);
        return linear<0>(s, x);
    }
    double slope(const std::vector<double>& s, const MonotoneCubic& itp, double x) const {
        if (order_ == 3) return itp.derivative(x);
        return linear<1>(s, x);
    }
    double curvature(const MonotoneCubic& itp, double x) const {
        return order_ == 3 ? itp.second_derivative(x) : 0.0;
    }
    template <int Order>
    double linear(const std::vector<double>& s, double x) const {
        const double h = x_[1] - x_[0];
        int k = static_cast<int>(std::floor(x / h));
        k = std::clamp(k, 0, static_cast<int>(s.size()) - 2);
        if constexpr (Order == 0) {
            const double t = (x - x_[k]) / h;
            return (1 - t) * s[k] + t * s[k + 1];
        } else {
            return (s[k + 1] - s[k]) / h;
        }
    }

    double length_ = 0.0;
    std::vector<double> x_, lower_, upper_;
    int order_ = 3;
    MonotoneCubic lower_itp_, upper_itp_;
};

// ---------------------------------------------------------------------------
// Mass-coordinate rectangles
// ---------------------------------------------------------------------------

// The fixed rectangle pair in (xi, eta): supersonic strip eta in [-m_h, 0],
// subsonic strip eta in [0, m_e].  The subsonic grid lives on the normalized
// coordinate eta_hat = eta / m_e, so updating m_e only rescales the metric.
struct LagrangianDomain {
    double m_e = 0.0;  // subsonic mass flux (free boundary unknown)
    double m_h = 0.0;  // supersonic mass flux (fixed by the inlet)
    int n_xi = 0, n_eta_sub = 0, n_eta_sup = 0;
    double length = 0.0;

    double h_xi() const { return length / (n_xi - 1); }
    double h_eta_hat() const { return 1.0 / (n_eta_sub - 1); }
    double h_eta_sup() const { return m_h / (n_eta_sup - 1); }

    double xi(int i) const { return length * i / (n_xi - 1); }
    double eta_hat(int j) const { return static_cast<double>(j) / (n_eta_sub - 1); }
    double eta_sub(int j) const { return m_e * eta_hat(j); }
    // j = 0 at the lower wall, j = n_eta_sup - 1 on the contact
    double eta_sup(int j) const { return -m_h + m_h * j / (n_eta_sup - 1); }

    void check() const {
        if (!(m_e > 0.0) || !(m_h > 0.0))
            throw data_error("LagrangianDomain: mass fluxes must be positive");
        if (n_xi < 3 || n_eta_sub < 3 || n_eta_sup < 3)
            throw configuration_error("LagrangianDomain: need at least 3 nodes per axis");
    }
};

// ---------------------------------------------------------------------------
// Inlet data in mass coordinates
// ---------------------------------------------------------------------------

// Sampled inlet and exit data.  Subsonic profiles live on the eta_hat grid
// (positions eta = m_e eta_hat); supersonic profiles live on the eta grid
// from -m_h to 0.  p0_sup is retained both for validation and as the second
// parametrization record of y-ingested data.
struct InletData {
    std::vector<double> p0, B0, A0;   // subsonic inlet
    std::vector<double> exit_angle;   // omega_e on the subsonic eta_hat grid
    std::vector<double> z_minus0, z_plus0, B0h, A0h, p0_sup;  // supersonic inlet
    double corner_wall_slope = 0.0;   // g_-'(0)

    thermo::ValidationReport validate(double amplitude_bound, double tol = 1e-9) const {
        thermo::ValidationReport rep;
        const double p_gap = std::abs(p0.front() - p0_sup.back());
        rep.add("inlet pressure match", p_gap <= tol, tol - p_gap,
                "subsonic and supersonic inlet pressures at the contact");
        const double corner = z_minus0.front() + z_plus0.front() -
                              2.0 * std::atan(corner_wall_slope);
        rep.add("corner compatibility", std::abs(corner) <= tol, tol - std::abs(corner),
                "z-,0 + z+,0 = 2 arctan g_-'(0) at the lower corner");
        const double exit0 = std::abs(exit_angle.front());
        rep.add("exit angle regime", exit0 <= amplitude_bound + tol,
                amplitude_bound + tol - exit0,
                "omega_e(0) within the perturbation regime; the solver pins the "
                "contact angle to it at xi = L");
        return rep;
    }
};

// ---------------------------------------------------------------------------
// Transform operations
// ---------------------------------------------------------------------------

// Mass flux of the supersonic inlet: integral of rho*u over the inlet
// section, composite trapezoid on the sample table.
inline double inlet_mass_flux(const std::vector<double>& y, const std::vector<double>& rho_u) {
    if (y.size() != rho_u.size() || y.size() < 2)
        throw std::domain_error("inlet_mass_flux: need a sample table");
    for (std::size_t k = 0; k < rho_u.size(); ++k)
        if (!(rho_u[k] > 0.0))
            throw std::domain_error("inlet_mass_flux: rho*u must be positive at every sample");
    return trapezoid(y, rho_u);
}

// Mass coordinate of a point: eta(x, y) integrates rho*u from the lower wall
// and subtracts m_h, so the contact streamline sits at eta = 0.  The sample
// table must start at y = g_-(x).
inline double eta_of_y(double y, const std::vector<double>& y_samples,
                       const std::vector<double>& rho_u, double m_h) {
    if (y_samples.size() != rho_u.size() || y_samples.size() < 2)
        throw std::domain_error("eta_of_y: need a sample table");
    if (y < y_samples.front() - 1e-14 || y > y_samples.back() + 1e-14)
        throw std::domain_error("eta_of_y: y outside the nozzle section");
    double acc = 0.0;
    for (std::size_t k = 1; k < y_samples.size(); ++k) {
        const double y0 = y_samples[k - 1], y1 = y_samples[k];
        if (y >= y1) {
            acc += 0.5 * (rho_u[k - 1] + rho_u[k]) * (y1 - y0);
        } else {
            const double t = (y - y0) / (y1 - y0);
            const double f_mid = (1 - t) * rho_u[k - 1] + t * rho_u[k];
            acc += 0.5 * (rho_u[k - 1] + f_mid) * (y - y0);
            break;
        }
    }
    return acc - m_h;
}

// Physical ordinates of the Lagrangian grid nodes.  Integrates 1/(rho u)
// upward from the lower wall through both regions; the top-wall landing
// defect |y(xi, m_e) - g_+| is the free-boundary residual.
struct PhysicalMap {
    Field2D y_sup;                   // (n_xi, n_eta_sup)
    Field2D y_sub;                   // (n_xi, n_eta_sub)
    std::vector<double> top_defect;  // y(xi, m_e) - g_+(xi) per xi node
};

inline PhysicalMap inverse_map(const Field2D& inv_rho_u_sup, const Field2D& inv_rho_u_sub,
                               const LagrangianDomain& dom, const NozzleGeometry& geom) {
    const int nx = dom.n_xi, ns = dom.n_eta_sup, ne = dom.n_eta_sub;
    if (inv_rho_u_sup.nx() != nx || inv_rho_u_sup.ny() != ns || inv_rho_u_sub.nx() != nx ||
        inv_rho_u_sub.ny() != ne)
        throw data_error("inverse_map: field shapes do not match the domain");
    for (const auto* f : {&inv_rho_u_sup, &inv_rho_u_sub})
        for (double v : f->data())
            if (!(v > 0.0))
                throw admissibility_error("inverse_map: degenerate flow, 1/(rho u) <= 0");

    PhysicalMap out;
    out.y_sup = Field2D(nx, ns);
    out.y_sub = Field2D(nx, ne);
    out.top_defect.resize(nx);
    const double dsup = dom.h_eta_sup();
    const double dsub = dom.m_e * dom.h_eta_hat();
    for (int i = 0; i < nx; ++i) {
        double y = geom.lower(dom.xi(i));
        out.y_sup(i, 0) = y;
        for (int j = 1; j < ns; ++j) {
            y += 0.5 * dsup * (inv_rho_u_sup(i, j - 1) + inv_rho_u_sup(i, j));
            out.y_sup(i, j) = y;
        }
        out.y_sub(i, 0) = y;  // contact line continues into the subsonic strip
        for (int j = 1; j < ne; ++j) {
            y += 0.5 * dsub * (inv_rho_u_sub(i, j - 1) + inv_rho_u_sub(i, j));
            out.y_sub(i, j) = y;
        }
        out.top_defect[i] = y - geom.upper(dom.xi(i));
    }
    return out;
}

// Contact line and slope in physical coordinates.  The line is the eta = 0
// image under the inverse transform; the slope is the v/u trace there.
struct ContactLine {
    std::vector<double> x, height, slope;
};

inline ContactLine reconstruct_contact(const Field2D& inv_rho_u_sup,
                                       const std::vector<double>& contact_omega,
                                       const LagrangianDomain& dom, const NozzleGeometry& geom) {
    const int nx = dom.n_xi, ns = dom.n_eta_sup;
    if (static_cast<int>(contact_omega.size()) != nx)
        throw data_error("reconstruct_contact: trace size mismatch");
    for (double v : inv_rho_u_sup.data())
        if (!(v > 0.0))
            throw admissibility_error("reconstruct_contact: degenerate flow, 1/(rho u) <= 0");
    ContactLine out;
    out.x.resize(nx);
    out.height.resize(nx);
    out.slope = contact_omega;
    const double dsup = dom.h_eta_sup();
    for (int i = 0; i < nx; ++i) {
        out.x[i] = dom.xi(i);
        double y = geom.lower(out.x[i]);
        for (int j = 1; j < ns; ++j)
            y += 0.5 * dsup * (inv_rho_u_sup(i, j - 1) + inv_rho_u_sup(i, j));
        out.height[i] = y;
    }
    return out;
}

}  // namespace transonic::lagrangian
