#pragma once

#include <complex>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "nlcirc/signals.hpp"

namespace nlcirc::lamp {

/// Discharge lamp as an ideal hardlimiter: v = A * sign(i), sign(0) = 0.
struct HardlimiterLamp {
    double A;

    explicit HardlimiterLamp(double A);
};

/// Hardlimiter with series/shunt inductive correction:
/// v = A * (1 + (L1 + L2)/L) * sign(i) + L1 * di/dt in a circuit whose main
/// inductance is L. The common symmetric case L1 = L2 = L' gives the factor
/// (1 + 2L'/L).
struct HysteresisLamp {
    double A;
    double L1;
    double L2;

    HysteresisLamp(double A, double Lprime);
    HysteresisLamp(double A, double L1, double L2);

    double effective_A(double L_ballast) const;
};

using LampModel = std::variant<HardlimiterLamp, HysteresisLamp>;

/// Series L and C feeding the lamp from the source.
struct SeriesBallast {
    double L;
    double C;

    SeriesBallast(double L, double C);
};

/// Periodic source U * xi(t) with the unit-amplitude convention max|xi| = 1.
struct SourceSpec {
    double U;
    signals::Drive xi;

    SourceSpec(double U, signals::Drive xi);

    static SourceSpec sine(double U, double T);
    /// Normalizes the waveform to unit amplitude before use.
    static SourceSpec sampled(double U, const signals::PeriodicWaveform& w);
};

struct SolverOptions {
    double dt = 0.0;  // 0 picks T/4096
    double tol = 1e-8;
    int max_periods = 500;
};

struct LampEvent {
    double t;  // absolute time within the recorded period
    bool rising;
};

/// Periodic steady state of the ballast-lamp loop.
struct LampSteadyState {
    signals::PeriodicWaveform i;
    signals::PeriodicWaveform v_lamp;
    std::vector<double> q;  // capacitor charge at the same grid points
    double t1;              // first rising zerocrossing of i, NaN without crossings
    double P;               // mean lamp power over the period
    double amplitude;       // peak |i|, parabolic refinement over the grid
    bool converged;
    int iterations;
    bool has_crossings;
    double energy_in;           // contour integral of v_in * i dt
    double energy_lamp;         // contour integral of v_lamp * i dt
    double energy_balance_rel;  // |energy_in - energy_lamp| / total exchanged energy
    double W_Lprime;            // 0.5 * L1 * amplitude^2, 0 for the hardlimiter
    std::vector<LampEvent> events;
};

/// Pointwise lamp voltage for a given current cycle.
signals::PeriodicWaveform lamp_voltage_hardlimiter(const signals::PeriodicWaveform& i,
                                                   const HardlimiterLamp& lamp);

/// Pointwise hysteresis-lamp voltage; di/dt by central differences on the
/// periodic grid. L_ballast is the circuit inductance entering the sign-term
/// factor.
signals::PeriodicWaveform lamp_voltage_hysteresis(const signals::PeriodicWaveform& i,
                                                  const HysteresisLamp& lamp, double L_ballast);

/// Periodic steady state of L di/dt + v_lamp(i) + q/C = U xi(t). Sign flips
/// of i are located by bisection inside RK4 steps; the steady state comes
/// from period-map fixed-point iteration (one-shot periodic solve when the
/// lamp term vanishes, A = 0).
LampSteadyState simulate_lamp_circuit(const SeriesBallast& ballast, const LampModel& lamp,
                                      const SourceSpec& src, const SolverOptions& opts = {});

struct SweepRow {
    double U = 0.0;
    double t1 = 0.0;
    double P = 0.0;
    double P_over_U2 = 0.0;
    bool ok = false;
    std::string message;
};

/// Steady-state table over source amplitudes; rows for failed amplitudes
/// carry ok = false and NaN values. Rows are independent simulations and run
/// in parallel unless disabled.
std::vector<SweepRow> zerocrossing_sweep(const SeriesBallast& ballast, const LampModel& lamp,
                                         const signals::Drive& xi, std::span<const double> U_values,
                                         const SolverOptions& opts = {}, bool parallel = true);

struct AffineCheckReport {
    double affine_residual;  // max_t |i_{U1+U2} - i_{U1} - i_{U2} + i_0|
    double scaling_gap;      // max_t |i_{2*U1} - 2*i_{U1}|
    double max_i;            // max_t |i_{U1+U2}|, the residual scale
};

/// Substitution-theorem check: the sign term is replaced by the fixed square
/// wave with rising crossing at t1_fixed, making the circuit affine in U.
/// Periodic responses are computed exactly (monodromy) for
/// U in {0, U1, U2, U1+U2, 2*U1}.
AffineCheckReport affine_check(const SeriesBallast& ballast, double A, const signals::Drive& xi,
                               double t1_fixed, double U1, double U2, double dt = 0.0);

/// Admittance as a ratio of polynomials in s, coefficients ascending.
struct RationalAdmittance {
    std::vector<double> num;
    std::vector<double> den;

    std::complex<double> eval(std::complex<double> s) const;
    /// Parallel combination, Y1 + Y2.
    RationalAdmittance parallel(const RationalAdmittance& other) const;
};

/// n*omega*|Y(j*n*omega)| for every odd n up to n_max; index k holds n = 2k+1.
/// Parallel over harmonics.
std::vector<double> admittance_scan(const RationalAdmittance& Y, double omega, int n_max);

/// Serial reference for admittance_scan.
std::vector<double> admittance_scan_serial(const RationalAdmittance& Y, double omega, int n_max);

/// High-frequency series inductance 1/lim_{n->inf} n*omega*|Y(j*n*omega)|,
/// taken over odd harmonics with Richardson extrapolation in 1/n^2. Throws
/// SimulationError when the admittance has no inductive asymptote.
double asymptotic_inductance(const RationalAdmittance& Y, double omega, int n_max);

} // namespace nlcirc::lamp
