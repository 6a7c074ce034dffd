#pragma once

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <cmath>
#include <sstream>
#include <utility>
#include <vector>

#include "transonic/errors.hpp"
#include "transonic/grid.hpp"
#include "transonic/numerics.hpp"
#include "transonic/thermo.hpp"

namespace transonic::subsonic {

using thermo::GasModel;

// Stream-function gradient in the physical mass coordinate:
// d_xi = v/u trace, d_eta = 1/(rho u).
struct Gradient {
    double d_xi = 0.0;
    double d_eta = 0.0;
};

inline double kinetic_parameter(const Gradient& g) {
    return (g.d_xi * g.d_xi + 1.0) / (2.0 * g.d_eta * g.d_eta);
}

// Subsonic root of  (gamma A/(gamma-1)) rho^{gamma+1} - B rho^2 + chi = 0.
// The two positive roots merge at the sonic density; the subsonic branch is
// the larger root, bracketed by (rho_sonic, rho_max] with rho_max the
// stagnation density.  Safeguarded Newton, |drho| tolerance 1e-12.
inline double density_from_stream_gradient(const Gradient& dphi, double B, double A,
                                           const GasModel& gas) {
    if (!(dphi.d_eta > 0.0))
        throw std::domain_error("density_from_stream_gradient: d_eta must be positive");
    const double g = gas.gamma;
    const double c0 = g * A / (g - 1.0);
    const double chi = kinetic_parameter(dphi);
    const double rho_sonic = std::pow(2.0 * B * (g - 1.0) / (g * A * (g + 1.0)), 1.0 / (g - 1.0));
    const double rho_max = std::pow(B * (g - 1.0) / (g * A), 1.0 / (g - 1.0));
    const double chi_crit = B * rho_sonic * rho_sonic * (g - 1.0) / (g + 1.0);
    if (!(chi < chi_crit)) {
        std::ostringstream os;
        os << "density_from_stream_gradient: no subsonic root, chi = " << chi
           << " >= critical chi = " << chi_crit;
        throw sonic_error(os.str());
    }
    auto f = [&](double r) { return c0 * std::pow(r, g + 1.0) - B * r * r + chi; };
    auto df = [&](double r) { return (g + 1.0) * c0 * std::pow(r, g) - 2.0 * B * r; };
    return safeguarded_newton(f, df, rho_sonic, rho_max, rho_max, 1e-12, 100);
}

inline double pressure_from_stream_gradient(const Gradient& dphi, double B, double A,
                                            const GasModel& gas) {
    const double rho = density_from_stream_gradient(dphi, B, A, gas);
    return A * std::pow(rho, gas.gamma);
}

// Divergence-form fluxes of the stream-function equation:
// N1 = d_xi phi / (rho d_eta phi) (= v/u-weighted flux), N2 = pressure.
inline std::pair<double, double> flux_functions(const Gradient& dphi, double B, double A,
                                                const GasModel& gas) {
    const double rho = density_from_stream_gradient(dphi, B, A, gas);
    return {dphi.d_xi / (rho * dphi.d_eta), A * std::pow(rho, gas.gamma)};
}

namespace detail {

struct ClosureState {
    double rho, c2, q2;   // density, sonic speed squared, speed squared
    double drho_dxi;      // d rho / d (d_xi phi)
    double drho_deta;     // d rho / d (d_eta phi)
};

inline ClosureState closure_state(const Gradient& dphi, double B, double A, const GasModel& gas) {
    ClosureState s;
    s.rho = density_from_stream_gradient(dphi, B, A, gas);
    s.c2 = gas.gamma * A * std::pow(s.rho, gas.gamma - 1.0);
    s.q2 = (dphi.d_xi * dphi.d_xi + 1.0) / (s.rho * s.rho * dphi.d_eta * dphi.d_eta);
    const double gap = s.c2 - s.q2;  // positive on the subsonic branch
    s.drho_dxi = -dphi.d_xi / (s.rho * dphi.d_eta * dphi.d_eta * gap);
    s.drho_deta = (dphi.d_xi * dphi.d_xi + 1.0) / (s.rho * std::pow(dphi.d_eta, 3) * gap);
    return s;
}

}  // namespace detail

struct PressurePartials {
    double d_xi = 0.0;   // d p / d (d_xi phi)
    double d_eta = 0.0;  // d p / d (d_eta phi)
};

inline PressurePartials pressure_partials(const Gradient& dphi, double B, double A,
                                          const GasModel& gas) {
    const auto s = detail::closure_state(dphi, B, A, gas);
    return {s.c2 * s.drho_dxi, s.c2 * s.drho_deta};
}

// Jacobian of (N1, N2) with respect to (d_xi phi, d_eta phi).
struct FluxPartials {
    double a11 = 0.0, a12 = 0.0, a21 = 0.0, a22 = 0.0;
};

inline FluxPartials flux_partials(const Gradient& dphi, double B, double A, const GasModel& gas) {
    const auto s = detail::closure_state(dphi, B, A, gas);
    FluxPartials out;
    const double inv = 1.0 / (s.rho * dphi.d_eta);
    out.a11 = inv * (1.0 - dphi.d_xi * s.drho_dxi / s.rho);
    out.a12 = -dphi.d_xi * inv * (1.0 / dphi.d_eta + s.drho_deta / s.rho);
    out.a21 = s.c2 * s.drho_dxi;
    out.a22 = s.c2 * s.drho_deta;
    return out;
}

// Path-integrated coefficients a_ij = int_0^1 dN_i/d(d_j phi) along the
// straight segment from the background gradient to the iterate gradient.
// 4-point Gauss-Legendre; the integrand is smooth in the path parameter.
inline FluxPartials path_flux_coefficients(const Gradient& base, const Gradient& delta, double B,
                                           double A, const GasModel& gas) {
    FluxPartials acc;
    auto add = [&](double w, const FluxPartials& f) {
        acc.a11 += w * f.a11;
        acc.a12 += w * f.a12;
        acc.a21 += w * f.a21;
        acc.a22 += w * f.a22;
    };
    static constexpr double xs[4] = {0.069431844202973712, 0.330009478207571868,
                                     0.669990521792428132, 0.930568155797026288};
    static constexpr double ws[4] = {0.173927422568726929, 0.326072577431273071,
                                     0.326072577431273071, 0.173927422568726929};
    for (int k = 0; k < 4; ++k) {
        Gradient g{base.d_xi + xs[k] * delta.d_xi, base.d_eta + xs[k] * delta.d_eta};
        add(ws[k], flux_partials(g, B, A, gas));
    }
    return acc;
}

inline PressurePartials path_pressure_coefficients(const Gradient& base, const Gradient& delta,
                                                   double B, double A, const GasModel& gas) {
    const FluxPartials f = path_flux_coefficients(base, delta, B, A, gas);
    return {f.a21, f.a22};
}

// Background constants of the linearization.
inline double background_e1(const thermo::PrimitiveState& sub) { return sub.u; }

inline double background_beta02(const thermo::PrimitiveState& sub, const GasModel& gas) {
    const double c2 = gas.gamma * sub.p / sub.rho;
    return sub.rho * sub.rho * c2 * std::pow(sub.u, 3) / (c2 - sub.u * sub.u);
}

// ---------------------------------------------------------------------------
// Linearized mixed boundary-value problem on the unit strip
// ---------------------------------------------------------------------------

// Frozen-coefficient operator for the deviation psi(xi, eta_hat), where
// eta = m_e * eta_hat.  Coefficients are nodal, in the physical-eta metric;
// the discretization supplies the metric factors.
struct EllipticOperator {
    int n_xi = 0, n_eta = 0;
    double h_xi = 0.0, h_eta = 0.0;  // spacings in (xi, eta_hat)
    double m_e = 0.0;
    Field2D a11, a12, a21, a22;
    Field2D b1, b2;   // divergence-form source fluxes (same metric as a_ij)
    Field2D source;   // optional pointwise right-hand side; empty means zero
    double lambda_min = 0.0, lambda_max = 0.0;
};

struct BoundaryData {
    std::vector<double> inlet;       // Dirichlet at xi = 0, size n_eta
    std::vector<double> top;         // Dirichlet at eta_hat = 1, size n_xi
    std::vector<double> contact;     // Dirichlet at eta_hat = 0, size n_xi
    std::vector<double> exit_slope;  // Neumann d_xi psi at xi = L, size n_eta
    double corner_tol = 1e-9;
};

// Assembles and factorizes once; solve() may be called repeatedly with new
// boundary data (only the right-hand side changes).
class EllipticSolver {
public:
    explicit EllipticSolver(EllipticOperator op) : op_(std::move(op)) { assemble(); }

    const EllipticOperator& op() const { return op_; }

    Field2D solve(const BoundaryData& bd) const {
        const int nx = op_.n_xi, ny = op_.n_eta;
        if (static_cast<int>(bd.inlet.size()) != ny || static_cast<int>(bd.top.size()) != nx ||
            static_cast<int>(bd.contact.size()) != nx ||
            static_cast<int>(bd.exit_slope.size()) != ny)
            throw data_error("EllipticSolver: boundary trace sizes do not match the grid");
        const double scale = std::max({1.0, max_abs(bd.inlet), max_abs(bd.top), max_abs(bd.contact)});
        if (std::abs(bd.inlet.front() - bd.contact.front()) > bd.corner_tol * scale ||
            std::abs(bd.inlet.back() - bd.top.front()) > bd.corner_tol * scale)
            throw data_error("EllipticSolver: Dirichlet traces disagree at a shared corner");

        Eigen::VectorXd rhs = rhs_base_;
        for (int j = 0; j < ny; ++j) {
            if (j > 0 && j < ny - 1) {
                rhs[index(0, j)] = bd.inlet[j];
                rhs[index(nx - 1, j)] = bd.exit_slope[j];
            }
        }
        for (int i = 0; i < nx; ++i) {
            rhs[index(i, 0)] = bd.contact[i];
            rhs[index(i, ny - 1)] = bd.top[i];
        }

        Eigen::VectorXd x = lu_.solve(rhs);
        if (lu_.info() != Eigen::Success)
            throw singular_operator_error("EllipticSolver: back substitution failed");
        const double resid = (matrix_ * x - rhs).cwiseAbs().maxCoeff();
        const double denom = std::max(rhs.cwiseAbs().maxCoeff(), 1.0) +
                             (matrix_ * x).cwiseAbs().maxCoeff();
        if (resid > 1e-12 * denom)
            throw singular_operator_error("EllipticSolver: discrete residual above 1e-12 relative");

        Field2D out(nx, ny);
        for (int i = 0; i < nx; ++i)
            for (int j = 0; j < ny; ++j) out(i, j) = x[index(i, j)];
        return out;
    }

private:
    int index(int i, int j) const { return i * op_.n_eta + j; }

    void assemble() {
        const int nx = op_.n_xi, ny = op_.n_eta;
        const double hx = op_.h_xi, hy = op_.h_eta, me = op_.m_e;
        std::vector<Eigen::Triplet<double>> trip;
        trip.reserve(static_cast<std::size_t>(nx) * ny * 9);
        rhs_base_ = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(nx) * ny);

        auto face_x = [&](const Field2D& f, int i, int j) { return 0.5 * (f(i, j) + f(i + 1, j)); };
        auto face_y = [&](const Field2D& f, int i, int j) { return 0.5 * (f(i, j) + f(i, j + 1)); };

        for (int i = 0; i < nx; ++i) {
            for (int j = 0; j < ny; ++j) {
                const int row = index(i, j);
                const bool dirichlet = (j == 0) || (j == ny - 1) || (i == 0);
                if (dirichlet) {
                    trip.emplace_back(row, row, 1.0);
                    continue;
                }
                if (i == nx - 1) {
                    // one-sided second-order Neumann at the exit
                    trip.emplace_back(row, index(i, j), 3.0 / (2.0 * hx));
                    trip.emplace_back(row, index(i - 1, j), -4.0 / (2.0 * hx));
                    trip.emplace_back(row, index(i - 2, j), 1.0 / (2.0 * hx));
                    continue;
                }

                std::array<std::array<double, 3>, 3> st{};  // st[di+1][dj+1]
                auto add = [&](int di, int dj, double w) { st[di + 1][dj + 1] += w; };

                // d_xi(me a11 d_xi u): faces (i +/- 1/2, j)
                const double cE = me * face_x(op_.a11, i, j) / (hx * hx);
                const double cW = me * face_x(op_.a11, i - 1, j) / (hx * hx);
                add(1, 0, cE);
                add(-1, 0, cW);
                add(0, 0, -cE - cW);

                // d_eta_hat(a22/me d_eta_hat u): faces (i, j +/- 1/2)
                const double cN = face_y(op_.a22, i, j) / (me * hy * hy);
                const double cS = face_y(op_.a22, i, j - 1) / (me * hy * hy);
                add(0, 1, cN);
                add(0, -1, cS);
                add(0, 0, -cN - cS);

                // d_xi(a12 d_eta_hat u): face value of a12 times the mean of
                // the centered eta_hat-derivatives on either side of the face.
                const double mE = face_x(op_.a12, i, j) / (hx * 4.0 * hy);
                const double mW = face_x(op_.a12, i - 1, j) / (hx * 4.0 * hy);
                add(0, 1, mE);
                add(1, 1, mE);
                add(0, -1, -mE);
                add(1, -1, -mE);
                add(-1, 1, -mW);
                add(0, 1, -mW);
                add(-1, -1, mW);
                add(0, -1, mW);

                // d_eta_hat(a21 d_xi u)/... same construction transposed
                const double mN = face_y(op_.a21, i, j) / (hy * 4.0 * hx);
                const double mS = face_y(op_.a21, i, j - 1) / (hy * 4.0 * hx);
                add(1, 0, mN);
                add(1, 1, mN);
                add(-1, 0, -mN);
                add(-1, 1, -mN);
                add(1, -1, -mS);
                add(1, 0, -mS);
                add(-1, -1, mS);
                add(-1, 0, mS);

                for (int di = -1; di <= 1; ++di)
                    for (int dj = -1; dj <= 1; ++dj)
                        if (st[di + 1][dj + 1] != 0.0)
                            trip.emplace_back(row, index(i + di, j + dj), st[di + 1][dj + 1]);

                // divergence-form source, discretized with the same face scheme
                const double div_b =
                    me * (face_x(op_.b1, i, j) - face_x(op_.b1, i - 1, j)) / hx +
                    (face_y(op_.b2, i, j) - face_y(op_.b2, i, j - 1)) / hy;
                rhs_base_[row] = -div_b;
                if (!op_.source.empty()) rhs_base_[row] += op_.source(i, j);
            }
        }

        matrix_.resize(static_cast<Eigen::Index>(nx) * ny, static_cast<Eigen::Index>(nx) * ny);
        matrix_.setFromTriplets(trip.begin(), trip.end());
        matrix_.makeCompressed();
        lu_.analyzePattern(matrix_);
        lu_.factorize(matrix_);
        if (lu_.info() != Eigen::Success)
            throw singular_operator_error("EllipticSolver: sparse factorization failed");
    }

    EllipticOperator op_;
    Eigen::SparseMatrix<double> matrix_;
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu_;
    Eigen::VectorXd rhs_base_;
};

inline Field2D solve_linearized_elliptic(const EllipticOperator& op, const BoundaryData& bd) {
    return EllipticSolver(op).solve(bd);
}

// ---------------------------------------------------------------------------
// Coefficient assembly from an iterate
// ---------------------------------------------------------------------------

// Nodal discrete gradient of a field on the (xi, eta_hat) grid: centered
// inside, one-sided second order on the boundary.
inline void nodal_gradients(const Field2D& psi, double h_xi, double h_eta, Field2D& d_xi,
                            Field2D& d_eta) {
    const int nx = psi.nx(), ny = psi.ny();
    d_xi = Field2D(nx, ny);
    d_eta = Field2D(nx, ny);
    for (int i = 0; i < nx; ++i) {
        for (int j = 0; j < ny; ++j) {
            if (i == 0)
                d_xi(i, j) = (-3.0 * psi(0, j) + 4.0 * psi(1, j) - psi(2, j)) / (2.0 * h_xi);
            else if (i == nx - 1)
                d_xi(i, j) = (3.0 * psi(nx - 1, j) - 4.0 * psi(nx - 2, j) + psi(nx - 3, j)) /
                             (2.0 * h_xi);
            else
                d_xi(i, j) = (psi(i + 1, j) - psi(i - 1, j)) / (2.0 * h_xi);
            if (j == 0)
                d_eta(i, j) = (-3.0 * psi(i, 0) + 4.0 * psi(i, 1) - psi(i, 2)) / (2.0 * h_eta);
            else if (j == ny - 1)
                d_eta(i, j) = (3.0 * psi(i, ny - 1) - 4.0 * psi(i, ny - 2) + psi(i, ny - 3)) /
                              (2.0 * h_eta);
            else
                d_eta(i, j) = (psi(i, j + 1) - psi(i, j - 1)) / (2.0 * h_eta);
        }
    }
}

// Linearized operator about the iterate psi (deviation of the stream function
// on the unit strip).  B0 and A0 are the inlet invariants sampled on the
// eta_hat grid; bg_sub supplies the background gradient.  Throws when the
// coefficient matrix loses ellipticity at any node.
inline EllipticOperator linearized_coefficients(const Field2D& psi, const std::vector<double>& B0,
                                                const std::vector<double>& A0, double m_e,
                                                double length,
                                                const thermo::PrimitiveState& bg_sub,
                                                const GasModel& gas) {
    const int nx = psi.nx(), ny = psi.ny();
    if (static_cast<int>(B0.size()) != ny || static_cast<int>(A0.size()) != ny)
        throw data_error("linearized_coefficients: profile sizes do not match the grid");
    EllipticOperator op;
    op.n_xi = nx;
    op.n_eta = ny;
    op.h_xi = length / (nx - 1);
    op.h_eta = 1.0 / (ny - 1);
    op.m_e = m_e;
    op.a11 = op.a12 = op.a21 = op.a22 = Field2D(nx, ny);
    op.b1 = Field2D(nx, ny, 0.0);
    op.b2 = Field2D(nx, ny, 0.0);

    const Gradient base{0.0, 1.0 / (bg_sub.rho * bg_sub.u)};
    Field2D dpsi_xi, dpsi_eta;
    nodal_gradients(psi, op.h_xi, op.h_eta, dpsi_xi, dpsi_eta);

    double lam_min = std::numeric_limits<double>::infinity();
    double lam_max = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < nx; ++i) {
        for (int j = 0; j < ny; ++j) {
            const Gradient delta{dpsi_xi(i, j), dpsi_eta(i, j) / m_e};
            const FluxPartials a = path_flux_coefficients(base, delta, B0[j], A0[j], gas);
            op.a11(i, j) = a.a11;
            op.a12(i, j) = a.a12;
            op.a21(i, j) = a.a21;
            op.a22(i, j) = a.a22;
            op.b2(i, j) = pressure_from_stream_gradient(base, B0[j], A0[j], gas);
            // eigenvalues of the symmetric part
            const double tr = 0.5 * (a.a11 + a.a22);
            const double off = 0.5 * (a.a12 + a.a21);
            const double disc = std::sqrt(0.25 * (a.a11 - a.a22) * (a.a11 - a.a22) + off * off);
            lam_min = std::min(lam_min, tr - disc);
            lam_max = std::max(lam_max, tr + disc);
        }
    }
    op.lambda_min = lam_min;
    op.lambda_max = lam_max;
    if (!(lam_min > 0.0)) {
        std::ostringstream os;
        os << "linearized_coefficients: iterate out of range, ellipticity lost (lambda_min = "
           << lam_min << ")";
        throw admissibility_error(os.str());
    }
    return op;
}

// Dirichlet traces of the linearized problem.  The inlet trace integrates the
// linearized pressure condition from the anchor point; the top trace follows
// the wall with the shared-corner value from the inlet.
struct BoundaryClosures {
    std::vector<double> inlet_trace;        // on the eta_hat grid
    std::vector<double> top_trace;          // on the xi grid
    std::vector<double> beta01, beta02;     // path coefficients at the inlet
};

inline BoundaryClosures boundary_closures(const Field2D& psi, const std::vector<double>& p0,
                                          const std::vector<double>& B0,
                                          const std::vector<double>& A0,
                                          const std::vector<double>& g_plus_on_xi, double m_e,
                                          double length, const thermo::PrimitiveState& bg_sub,
                                          const GasModel& gas) {
    const int nx = psi.nx(), ny = psi.ny();
    if (static_cast<int>(p0.size()) != ny)
        throw data_error("boundary_closures: inlet pressure profile size mismatch");
    if (static_cast<int>(g_plus_on_xi.size()) != nx)
        throw data_error("boundary_closures: top wall sample size mismatch");
    const double h_xi = length / (nx - 1);
    const double h_eta = 1.0 / (ny - 1);
    const Gradient base{0.0, 1.0 / (bg_sub.rho * bg_sub.u)};
    const double beta02_bar = background_beta02(bg_sub, gas);

    Field2D dpsi_xi, dpsi_eta;
    nodal_gradients(psi, h_xi, h_eta, dpsi_xi, dpsi_eta);

    BoundaryClosures out;
    out.beta01.resize(ny);
    out.beta02.resize(ny);
    std::vector<double> integrand(ny);
    for (int j = 0; j < ny; ++j) {
        const Gradient delta{dpsi_xi(0, j), dpsi_eta(0, j) / m_e};
        const PressurePartials beta = path_pressure_coefficients(base, delta, B0[j], A0[j], gas);
        out.beta01[j] = beta.d_xi;
        out.beta02[j] = beta.d_eta;
        const double p_ref = pressure_from_stream_gradient(base, B0[j], A0[j], gas);
        integrand[j] = p0[j] - p_ref - beta.d_xi * delta.d_xi -
                       (beta.d_eta - beta02_bar) * delta.d_eta;
    }
    out.inlet_trace = cumulative_trapezoid_uniform(integrand, m_e * h_eta);
    for (double& v : out.inlet_trace) v /= beta02_bar;

    out.top_trace.resize(nx);
    for (int i = 0; i < nx; ++i)
        out.top_trace[i] = g_plus_on_xi[i] - g_plus_on_xi[0] + out.inlet_trace.back();
    return out;
}

}  // namespace transonic::subsonic
