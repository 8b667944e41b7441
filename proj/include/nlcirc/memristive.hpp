#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "nlcirc/signals.hpp"

namespace nlcirc::memristive {

/// v = M(q) * i with dq/dt = i; M is a polynomial, coefficients ascending.
struct ChargeControlledModel {
    std::vector<double> M;
    double q0 = 0.0;
    double psi0 = 0.0;
};

/// i = W(psi) * v with dpsi/dt = v; W is a polynomial, coefficients ascending.
struct FluxControlledModel {
    std::vector<double> W;
    double psi0 = 0.0;
    double q0 = 0.0;
};

/// d-dimensional memristive 1-port. Current-driven it reads
/// v = R(x, i) * i, dx/dt = f(x, i); voltage-driven the same pair acts as
/// the dual, i = R(x, v) * v, dx/dt = f(x, v).
struct GenericMemristiveSystem {
    int dim = 1;
    std::function<double(const Eigen::VectorXd&, double)> R;
    std::function<Eigen::VectorXd(const Eigen::VectorXd&, double)> f;
    Eigen::VectorXd x0;
};

/// Simulation record on a uniform grid (steps*periods + 1 points, endpoint
/// included). q and psi are cumulative trapezoidal integrals of i and v on
/// that grid, offset by the model's initial charge/flux.
struct MemristiveTraces {
    double T = 0.0;
    double dt = 0.0;
    int periods = 0;
    std::vector<double> t, i, v, q, psi;
    std::vector<std::vector<double>> x;  // one vector per state component
    bool passivity_warning = false;      // memristance <= 0 seen at a sample

    /// Build traces directly from one period of paired waveforms (q and psi
    /// accumulated by trapezoid, empty state). For checks on externally
    /// produced cycles.
    static MemristiveTraces from_waveforms(const signals::PeriodicWaveform& i,
                                           const signals::PeriodicWaveform& v);

    /// Waveform view of the last recorded period of one trace column.
    signals::PeriodicWaveform last_period(const std::vector<double>& column) const;
};

MemristiveTraces simulate_current_driven(const ChargeControlledModel& m,
                                         const signals::Drive& i_drive, int periods, double dt);
MemristiveTraces simulate_current_driven(const GenericMemristiveSystem& m,
                                         const signals::Drive& i_drive, int periods, double dt);
MemristiveTraces simulate_voltage_driven(const FluxControlledModel& m,
                                         const signals::Drive& v_drive, int periods, double dt);
MemristiveTraces simulate_voltage_driven(const GenericMemristiveSystem& m,
                                         const signals::Drive& v_drive, int periods, double dt);

/// The (q, psi) locus traced by a simulation.
std::vector<std::pair<double, double>> flux_charge_curve(const MemristiveTraces& tr);

struct PinchedLoopReport {
    bool applicable = false;  // false when i never crosses zero
    bool pinched = false;
    double worst_violation = 0.0;  // max |v| at an i-zerocrossing
    double max_v = 0.0;
    std::size_t crossing_count = 0;
};

/// Interpolate v at every zerocrossing of i; pinched iff all values stay
/// within rel_tol * max|v|.
PinchedLoopReport pinched_loop_check(const MemristiveTraces& tr, double rel_tol);

/// Max deviation between the simulated flux and the symbolic integral of M
/// along the simulated charge, max_t |psi(t) - (psi0 + int_{q0}^{q(t)} M)|.
double flux_charge_deviation(const MemristiveTraces& tr, const ChargeControlledModel& m);

/// Dual: max_t |q(t) - (q0 + int_{psi0}^{psi(t)} W)|.
double charge_flux_deviation(const MemristiveTraces& tr, const FluxControlledModel& m);

/// Max |psi_a(q) - psi_b(q)| over the shared charge range, interpolating
/// curve b in q. Both runs must traverse overlapping charge ranges.
double flux_charge_curve_deviation(const MemristiveTraces& a, const MemristiveTraces& b);

/// psi interpolated where the charge trace first crosses q_target
/// (transversally); empty when the trace never reaches it.
std::optional<double> psi_at_charge(const MemristiveTraces& tr, double q_target);

} // namespace nlcirc::memristive
