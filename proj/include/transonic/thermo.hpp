#pragma once

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "transonic/errors.hpp"

namespace transonic::thermo {

// Ideal-gas constants.  kappa and c_nu only enter when the entropy itself is
// reported; the solver works with the multiplier A = p / rho^gamma throughout.
struct GasModel {
    double gamma = 1.4;
    double kappa = 1.0;
    double c_nu = 1.0;
};

struct PrimitiveState {
    double u = 0.0;
    double v = 0.0;
    double p = 0.0;
    double rho = 0.0;
};

// Two-layer reference state: subsonic on top, supersonic below, equal
// pressures, both horizontal.
struct BackgroundState {
    PrimitiveState sub;
    PrimitiveState sup;
    double delta0 = 0.05;  // sonic margin required of both layers
};

inline double sound_speed(double p, double rho, const GasModel& gas) {
    if (!(p > 0.0) || !(rho > 0.0))
        throw std::domain_error("sound_speed: p and rho must be positive");
    return std::sqrt(gas.gamma * p / rho);
}

inline double speed(const PrimitiveState& s) { return std::hypot(s.u, s.v); }

inline double mach_number(const PrimitiveState& s, const GasModel& gas) {
    return speed(s) / sound_speed(s.p, s.rho, gas);
}

inline double bernoulli(const PrimitiveState& s, const GasModel& gas) {
    return 0.5 * (s.u * s.u + s.v * s.v) + gas.gamma * s.p / ((gas.gamma - 1.0) * s.rho);
}

// Streamline invariant A = p / rho^gamma.  The inverse relation
// p = A rho^gamma holds to round-off.
inline double entropy_multiplier(const PrimitiveState& s, const GasModel& gas) {
    if (!(s.p > 0.0) || !(s.rho > 0.0))
        throw std::domain_error("entropy_multiplier: p and rho must be positive");
    return s.p / std::pow(s.rho, gas.gamma);
}

// Physical entropy, for reporting only.
inline double entropy(const PrimitiveState& s, const GasModel& gas) {
    return gas.c_nu * std::log(s.p / (gas.kappa * std::pow(s.rho, gas.gamma)));
}

struct ValidationCheck {
    std::string name;
    bool passed = false;
    double slack = 0.0;  // positive means satisfied with this margin
    std::string detail;
};

struct ValidationReport {
    bool passed = true;
    std::vector<ValidationCheck> checks;

    void add(const std::string& name, bool ok, double slack, const std::string& detail) {
        checks.push_back({name, ok, slack, detail});
        passed = passed && ok;
    }

    std::string summary() const {
        std::ostringstream os;
        for (const auto& c : checks)
            os << (c.passed ? "  ok   " : "  FAIL ") << c.name << "  slack=" << c.slack
               << (c.detail.empty() ? "" : "  [" + c.detail + "]") << "\n";
        return os.str();
    }

    std::string first_failure() const {
        for (const auto& c : checks)
            if (!c.passed) return c.name;
        return {};
    }
};

// Admissibility gates on the background state.  Returns a structured report;
// never throws on a failed condition.  The Mach gate
// M_sup > sqrt(1 + L^2/4) limits characteristic reflections in a nozzle of
// length L; its equivalent form sqrt(M_sup^2 - 1) >= L/2 is reported too.
inline ValidationReport validate_background(const BackgroundState& bg, double length,
                                            const GasModel& gas) {
    ValidationReport rep;
    auto positive = [&](const char* name, double v) {
        rep.add(name, v > 0.0, v, "");
    };
    positive("sub.u > 0", bg.sub.u);
    positive("sub.p > 0", bg.sub.p);
    positive("sub.rho > 0", bg.sub.rho);
    positive("sup.u > 0", bg.sup.u);
    positive("sup.p > 0", bg.sup.p);
    positive("sup.rho > 0", bg.sup.rho);
    rep.add("sub.v = 0", bg.sub.v == 0.0, -std::abs(bg.sub.v), "");
    rep.add("sup.v = 0", bg.sup.v == 0.0, -std::abs(bg.sup.v), "");

    const double pressure_gap = std::abs(bg.sub.p - bg.sup.p);
    rep.add("pressure match", pressure_gap <= 1e-12 * std::abs(bg.sub.p),
            1e-12 * std::abs(bg.sub.p) - pressure_gap, "|p_sub - p_sup|");

    if (!rep.passed) return rep;  // sound speeds below need positive states

    const double c_sub = sound_speed(bg.sub.p, bg.sub.rho, gas);
    const double c_sup = sound_speed(bg.sup.p, bg.sup.rho, gas);
    rep.add("subsonic margin", c_sub - bg.sub.u > bg.delta0, c_sub - bg.sub.u - bg.delta0,
            "c_sub - u_sub > delta0");
    rep.add("supersonic margin", bg.sup.u - c_sup > bg.delta0, bg.sup.u - c_sup - bg.delta0,
            "u_sup - c_sup > delta0");

    const double mach_sup = bg.sup.u / c_sup;
    const double gate = std::sqrt(1.0 + 0.25 * length * length);
    rep.add("mach gate", mach_sup > gate, mach_sup - gate,
            "M_sup > sqrt(1 + L^2/4), M_sup = " + std::to_string(mach_sup));
    if (mach_sup > 1.0) {
        const double reach = std::sqrt(mach_sup * mach_sup - 1.0);
        rep.add("reflection reach", reach >= 0.5 * length, reach - 0.5 * length,
                "sqrt(M_sup^2 - 1) >= L/2");
    } else {
        rep.add("reflection reach", false, mach_sup - 1.0, "supersonic layer is not supersonic");
    }
    return rep;
}

}  // namespace transonic::thermo
