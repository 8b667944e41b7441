#include "nlcirc/lamp.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "nlcirc/errors.hpp"
#include "nlcirc/kernels.hpp"
#include "nlcirc/poly.hpp"

namespace nlcirc::lamp {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kEventRelTol = 1e-12;   // |i| at a located sign flip, relative to peak
constexpr double kDwellRelTol = 1e-9;    // |i| counting as "no current" for pause detection
constexpr double kDwellFraction = 0.01;  // of a period
constexpr std::size_t kMaxEvents = 1000000;

inline int sgn(double x) { return (x > 0.0) - (x < 0.0); }

void check_finite_positive(double x, const char* what) {
    if (!(x > 0.0) || !std::isfinite(x)) {
        throw std::invalid_argument(std::string(what) + " must be finite and > 0");
    }
}

void check_finite_nonnegative(double x, const char* what) {
    if (!(x >= 0.0) || !std::isfinite(x)) {
        throw std::invalid_argument(std::string(what) + " must be finite and >= 0");
    }
}

std::size_t snapped_steps(double T, double dt_req, const char* who) {
    const double dt = dt_req == 0.0 ? T / 4096.0 : dt_req;
    if (!(dt > 0.0) || !std::isfinite(dt))
        throw std::invalid_argument(std::string(who) + ": dt must be finite and > 0");
    const double steps = std::round(T / dt);
    if (steps < 256.0) throw std::invalid_argument(std::string(who) + ": dt must be <= T/256");
    return std::size_t(steps);
}

// ============================================================================
// Event-driven integrator for L_tot di/dt + A_eff s + q/C = U xi(t), q' = i,
// with s = sign(i) held constant between located sign flips. Three quadrature
// states ride along: energy in, lamp energy, and total exchanged energy.
// ============================================================================

using State = std::array<double, 5>;  // i, q, E_in, E_lamp, E_abs

struct Dyn {
    double L_tot;
    double C;
    double A_eff;
    double Lp;
    double U;
    const signals::Drive* xi;

    void rhs(double t, double s, const State& x, State& dx) const {
        const double vin = U * (*xi)(t);
        const double di = (vin - A_eff * s - x[1] / C) / L_tot;
        const double vlamp = A_eff * s + Lp * di;
        dx[0] = di;
        dx[1] = x[0];
        dx[2] = vin * x[0];
        dx[3] = vlamp * x[0];
        dx[4] = std::abs(vin * x[0]);
    }

    double di_dt(double t, double s, const State& x) const {
        return (U * (*xi)(t) - A_eff * s - x[1] / C) / L_tot;
    }

    double v_lamp(double t, double s, const State& x) const {
        return A_eff * s + Lp * di_dt(t, s, x);
    }
};

State rk4(const Dyn& d, double t, double s, double h, const State& x) {
    State k1, k2, k3, k4, tmp;
    d.rhs(t, s, x, k1);
    for (int m = 0; m < 5; ++m) tmp[m] = x[m] + 0.5 * h * k1[m];
    d.rhs(t + 0.5 * h, s, tmp, k2);
    for (int m = 0; m < 5; ++m) tmp[m] = x[m] + 0.5 * h * k2[m];
    d.rhs(t + 0.5 * h, s, tmp, k3);
    for (int m = 0; m < 5; ++m) tmp[m] = x[m] + h * k3[m];
    d.rhs(t + h, s, tmp, k4);
    State out;
    for (int m = 0; m < 5; ++m)
        out[m] = x[m] + (h / 6.0) * (k1[m] + 2.0 * k2[m] + 2.0 * k3[m] + k4[m]);
    return out;
}

struct Recorder {
    std::vector<double> i, v, q;
    std::vector<LampEvent> events;
};

struct PeriodStats {
    double max_i = 0.0;
    double max_q = 0.0;
    std::size_t dwell = 0;
};

[[noreturn]] void throw_pause(double t) {
    throw SimulationError("uninterrupted-current assumption violated (current pause near t=" +
                          std::to_string(t) + ")");
}

/// Advance one period on the grid t_j = j*dt, locating sign flips of i by
/// bisection on the RK4 substep length. `i_scale` is the running peak |i|
/// across the whole simulation; `total_events` guards against chattering.
PeriodStats run_period(const Dyn& d, std::size_t steps, double dt, State& x, int& s,
                       double& i_scale, std::size_t& total_events, Recorder* rec) {
    const bool events_on = d.A_eff != 0.0;
    PeriodStats st;
    for (std::size_t j = 0; j < steps; ++j) {
        const double t = double(j) * dt;
        i_scale = std::max(i_scale, std::abs(x[0]));
        st.max_i = std::max(st.max_i, std::abs(x[0]));
        st.max_q = std::max(st.max_q, std::abs(x[1]));
        if (std::abs(x[0]) <= kDwellRelTol * i_scale) ++st.dwell;
        if (rec) {
            rec->i.push_back(x[0]);
            rec->q.push_back(x[1]);
            rec->v.push_back(d.v_lamp(t, double(s), x));
        }

        double t_cur = t;
        double h_rem = dt;
        int flips_this_step = 0;
        while (h_rem > 0.0) {
            if (!events_on && s == 0) s = sgn(x[0]);
            State trial = rk4(d, t_cur, double(s), h_rem, x);
            if (!events_on || s == 0 || sgn(trial[0]) != -s) {
                x = trial;
                t_cur += h_rem;
                if (s == 0) s = sgn(x[0]);
                break;
            }

            // Sign flip inside this substep: bisect the step length.
            const double tol_i = kEventRelTol * std::max(i_scale, 1e-30);
            double h_evt;
            State x_evt;
            if (std::abs(x[0]) <= tol_i) {
                h_evt = 0.0;
                x_evt = x;
            } else {
                double lo = 0.0, hi = h_rem;
                x_evt = trial;
                for (int iter = 0; iter < 200; ++iter) {
                    const double mid = 0.5 * (lo + hi);
                    State xm = rk4(d, t_cur, double(s), mid, x);
                    if (std::abs(xm[0]) <= tol_i) {
                        hi = mid;
                        x_evt = xm;
                        break;
                    }
                    if (sgn(xm[0]) == s) {
                        lo = mid;
                    } else {
                        hi = mid;
                        x_evt = xm;
                    }
                    if (hi - lo <= 1e-16 * dt) break;
                }
                h_evt = hi;
            }

            const int s_new = -s;
            const double d_new = d.di_dt(t_cur + h_evt, double(s_new), x_evt);
            if (d_new * double(s_new) < 0.0) throw_pause(t_cur + h_evt);
            if (++flips_this_step > 100 || ++total_events > kMaxEvents)
                throw_pause(t_cur + h_evt);
            if (rec) rec->events.push_back({t_cur + h_evt, s_new > 0});
            x = x_evt;
            s = s_new;
            t_cur += h_evt;
            h_rem = (t + dt) - t_cur;
        }
        if (!std::isfinite(x[0]) || !std::isfinite(x[1]))
            throw SimulationError("lamp simulation diverged near t=" + std::to_string(t));
    }
    if (st.dwell > kDwellFraction * double(steps)) throw_pause(0.0);
    return st;
}

// ============================================================================
// Linear periodic solves (monodromy) for the A = 0 limit, warm starts, and
// the affine substitution check. x = (i, q), x' = [(src(t) - q/C)/L ; i].
// ============================================================================

using Eigen::Matrix2d;
using Eigen::Vector2d;

template <class Src>
Vector2d lin_rk4(double L, double C, Src&& src, double c0, double t, double h, Vector2d x) {
    auto f = [&](double tt, const Vector2d& xx) {
        return Vector2d((src(tt) + c0 - xx[1] / C) / L, xx[0]);
    };
    const Vector2d k1 = f(t, x);
    const Vector2d k2 = f(t + 0.5 * h, x + 0.5 * h * k1);
    const Vector2d k3 = f(t + 0.5 * h, x + 0.5 * h * k2);
    const Vector2d k4 = f(t + h, x + h * k3);
    return x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

/// Square wave with rising crossing at t1, evaluated by period position.
double square_sign(double t, double t1, double T) {
    double u = std::fmod(t - t1, T);
    if (u < 0.0) u += T;
    return u < 0.5 * T ? 1.0 : -1.0;
}

/// One period of the linear circuit with source U*xi(t) - A*square(t; t1).
/// Integration legs are split at grid points and at the square-wave jumps;
/// the square value is frozen per leg (evaluated at the leg midpoint).
/// Records i at the grid points when `i_rec` is given.
Vector2d linear_period(double L, double C, double U, const signals::Drive& xi, double A,
                       double t1, std::size_t steps, Vector2d x, std::vector<double>* i_rec) {
    const double T = xi.period();
    const double dt = T / double(steps);
    std::vector<double> breaks;
    if (A != 0.0) {
        breaks.push_back(std::fmod(t1, T));
        breaks.push_back(std::fmod(t1 + 0.5 * T, T));
        std::sort(breaks.begin(), breaks.end());
    }
    auto src = [&](double t) { return U * xi(t); };
    for (std::size_t j = 0; j < steps; ++j) {
        if (i_rec) i_rec->push_back(x[0]);
        const double a = double(j) * dt;
        const double b = double(j + 1) * dt;
        double t_cur = a;
        for (double brk : breaks) {
            if (brk > t_cur && brk < b) {
                const double mid = 0.5 * (t_cur + brk);
                x = lin_rk4(L, C, src, -A * square_sign(mid, t1, T), t_cur, brk - t_cur, x);
                t_cur = brk;
            }
        }
        const double mid = 0.5 * (t_cur + b);
        const double c0 = A == 0.0 ? 0.0 : -A * square_sign(mid, t1, T);
        x = lin_rk4(L, C, src, c0, t_cur, b - t_cur, x);
    }
    return x;
}

/// Periodic fixed point x* = (I - Phi)^-1 p of the linear circuit above.
Vector2d linear_fixed_point(double L, double C, double U, const signals::Drive& xi, double A,
                            double t1, std::size_t steps) {
    auto zero = signals::Drive(xi.period(), [](double) { return 0.0; });
    Matrix2d phi;
    phi.col(0) = linear_period(L, C, 0.0, zero, 0.0, 0.0, steps, Vector2d(1.0, 0.0), nullptr);
    phi.col(1) = linear_period(L, C, 0.0, zero, 0.0, 0.0, steps, Vector2d(0.0, 1.0), nullptr);
    const Vector2d p = linear_period(L, C, U, xi, A, t1, steps, Vector2d::Zero(), nullptr);
    const Matrix2d m = Matrix2d::Identity() - phi;
    if (std::abs(m.determinant()) <= 1e-12 * (1.0 + phi.cwiseAbs().maxCoeff()))
        throw SimulationError("resonant ballast: period map is singular at the drive period");
    return m.partialPivLu().solve(p);
}

double refined_amplitude(const std::vector<double>& i) {
    const std::size_t N = i.size();
    std::size_t jm = 0;
    for (std::size_t j = 1; j < N; ++j)
        if (std::abs(i[j]) > std::abs(i[jm])) jm = j;
    const double y0 = i[(jm + N - 1) % N];
    const double y1 = i[jm];
    const double y2 = i[(jm + 1) % N];
    const double denom = y0 - 2.0 * y1 + y2;
    if (denom == 0.0) return std::abs(y1);
    const double delta = 0.5 * (y0 - y2) / denom;
    if (std::abs(delta) > 1.0) return std::abs(y1);
    return std::abs(y1 - 0.25 * (y0 - y2) * delta);
}

struct LampParams {
    double A_eff;
    double L_tot;
    double Lp;
};

LampParams resolve_lamp(const SeriesBallast& b, const LampModel& lamp) {
    return std::visit(
        [&](const auto& m) -> LampParams {
            using M = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<M, HardlimiterLamp>) {
                return {m.A, b.L, 0.0};
            } else {
                return {m.effective_A(b.L), b.L + m.L1, m.L1};
            }
        },
        lamp);
}

} // namespace

// ============================================================================
// Types
// ============================================================================

HardlimiterLamp::HardlimiterLamp(double A_) : A(A_) {
    check_finite_nonnegative(A, "HardlimiterLamp: A");
}

HysteresisLamp::HysteresisLamp(double A_, double Lprime) : HysteresisLamp(A_, Lprime, Lprime) {}

HysteresisLamp::HysteresisLamp(double A_, double L1_, double L2_) : A(A_), L1(L1_), L2(L2_) {
    check_finite_nonnegative(A, "HysteresisLamp: A");
    check_finite_nonnegative(L1, "HysteresisLamp: L1");
    check_finite_nonnegative(L2, "HysteresisLamp: L2");
}

double HysteresisLamp::effective_A(double L_ballast) const {
    check_finite_positive(L_ballast, "HysteresisLamp: ballast inductance");
    return A * (1.0 + (L1 + L2) / L_ballast);
}

SeriesBallast::SeriesBallast(double L_, double C_) : L(L_), C(C_) {
    check_finite_positive(L, "SeriesBallast: L");
    check_finite_positive(C, "SeriesBallast: C");
}

SourceSpec::SourceSpec(double U_, signals::Drive xi_) : U(U_), xi(std::move(xi_)) {
    check_finite_nonnegative(U, "SourceSpec: U");
}

SourceSpec SourceSpec::sine(double U, double T) { return SourceSpec(U, signals::Drive::sine(1.0, T)); }

SourceSpec SourceSpec::sampled(double U, const signals::PeriodicWaveform& w) {
    const double m = w.max_abs();
    if (m == 0.0)
        throw std::invalid_argument("SourceSpec: cannot normalize an identically zero waveform");
    std::vector<double> y(w.samples().begin(), w.samples().end());
    for (double& v : y) v /= m;
    return SourceSpec(U, signals::Drive::from_waveform(
                             signals::PeriodicWaveform(w.period(), std::move(y))));
}

// ============================================================================
// Pointwise lamp voltages
// ============================================================================

signals::PeriodicWaveform lamp_voltage_hardlimiter(const signals::PeriodicWaveform& i,
                                                   const HardlimiterLamp& lamp) {
    std::vector<double> v(i.size());
    for (std::size_t j = 0; j < i.size(); ++j) v[j] = lamp.A * double(sgn(i[j]));
    return signals::PeriodicWaveform(i.period(), std::move(v));
}

signals::PeriodicWaveform lamp_voltage_hysteresis(const signals::PeriodicWaveform& i,
                                                  const HysteresisLamp& lamp, double L_ballast) {
    const double A1 = lamp.effective_A(L_ballast);
    const std::size_t N = i.size();
    const double h = i.dt();
    std::vector<double> v(N);
    for (std::size_t j = 0; j < N; ++j) {
        const double didt = (i[(j + 1) % N] - i[(j + N - 1) % N]) / (2.0 * h);
        v[j] = A1 * double(sgn(i[j])) + lamp.L1 * didt;
    }
    return signals::PeriodicWaveform(i.period(), std::move(v));
}

// ============================================================================
// Steady-state simulation
// ============================================================================

LampSteadyState simulate_lamp_circuit(const SeriesBallast& ballast, const LampModel& lamp,
                                      const SourceSpec& src, const SolverOptions& opts) {
    if (!(opts.tol > 0.0) || !std::isfinite(opts.tol))
        throw std::invalid_argument("simulate_lamp_circuit: tol must be finite and > 0");
    if (opts.max_periods < 1)
        throw std::invalid_argument("simulate_lamp_circuit: max_periods must be >= 1");

    const double T = src.xi.period();
    const std::size_t steps = snapped_steps(T, opts.dt, "simulate_lamp_circuit");
    const double dt = T / double(steps);
    const auto [A_eff, L_tot, Lp] = resolve_lamp(ballast, lamp);
    const Dyn dyn{L_tot, ballast.C, A_eff, Lp, src.U, &src.xi};

    State x{0.0, 0.0, 0.0, 0.0, 0.0};
    int s = 0;
    bool converged = false;
    int iterations = 0;
    double i_scale = 0.0;
    std::size_t total_events = 0;

    if (A_eff == 0.0) {
        const Vector2d xs = linear_fixed_point(L_tot, ballast.C, src.U, src.xi, 0.0, 0.0, steps);
        x[0] = xs[0];
        x[1] = xs[1];
        converged = true;
    } else {
        try {
            const Vector2d warm =
                linear_fixed_point(L_tot, ballast.C, src.U, src.xi, 0.0, 0.0, steps);
            x[0] = warm[0];
            x[1] = warm[1];
        } catch (const SimulationError&) {
            // resonant linear limit: start from rest instead
        }
        s = sgn(x[0]);
        for (int p = 1; p <= opts.max_periods; ++p) {
            const double i_start = x[0];
            const double q_start = x[1];
            const PeriodStats st =
                run_period(dyn, steps, dt, x, s, i_scale, total_events, nullptr);
            iterations = p;
            const double tiny = 1e-300;
            const double rel = std::max(std::abs(x[0] - i_start) / std::max(st.max_i, tiny),
                                        std::abs(x[1] - q_start) / std::max(st.max_q, tiny));
            if (rel < opts.tol) {
                converged = true;
                break;
            }
        }
    }

    // Record one period from the (approximate) fixed point.
    x[2] = x[3] = x[4] = 0.0;
    s = sgn(x[0]);
    Recorder rec;
    rec.i.reserve(steps);
    rec.v.reserve(steps);
    rec.q.reserve(steps);
    run_period(dyn, steps, dt, x, s, i_scale, total_events, &rec);

    LampSteadyState out{
        .i = signals::PeriodicWaveform(T, rec.i),
        .v_lamp = signals::PeriodicWaveform(T, rec.v),
        .q = std::move(rec.q),
        .t1 = kNaN,
        .P = x[3] / T,
        .amplitude = refined_amplitude(rec.i),
        .converged = converged,
        .iterations = iterations,
        .has_crossings = false,
        .energy_in = x[2],
        .energy_lamp = x[3],
        .energy_balance_rel = std::abs(x[2] - x[3]) / std::max(x[4], 1e-300),
        .W_Lprime = 0.0,
        .events = std::move(rec.events),
    };
    out.W_Lprime = 0.5 * Lp * out.amplitude * out.amplitude;

    if (!out.events.empty()) {
        out.has_crossings = true;
        for (const auto& e : out.events) {
            if (e.rising) {
                out.t1 = e.t;
                break;
            }
        }
    } else {
        const auto zc = signals::find_zerocrossings(out.i);
        out.has_crossings = !zc.crossings.empty();
        if (auto t1 = zc.first_rising()) out.t1 = *t1;
    }
    return out;
}

std::vector<SweepRow> zerocrossing_sweep(const SeriesBallast& ballast, const LampModel& lamp,
                                         const signals::Drive& xi, std::span<const double> U_values,
                                         const SolverOptions& opts, bool parallel) {
    std::vector<SweepRow> rows(U_values.size());
    auto work = [&](std::ptrdiff_t k) {
        SweepRow& row = rows[std::size_t(k)];
        row.U = U_values[std::size_t(k)];
        row.t1 = row.P = row.P_over_U2 = kNaN;
        try {
            const auto st = simulate_lamp_circuit(ballast, lamp, SourceSpec(row.U, xi), opts);
            if (!st.converged)
                throw SimulationError("did not converge within max_periods");
            if (!st.has_crossings || std::isnan(st.t1))
                throw SimulationError("steady current has no rising zerocrossing");
            row.t1 = st.t1;
            row.P = st.P;
            row.P_over_U2 = st.P / (row.U * row.U);
            row.ok = true;
        } catch (const std::exception& e) {
            row.ok = false;
            row.message = e.what();
        }
    };
    if (parallel) {
        kernels::parallel_for(std::ptrdiff_t(rows.size()), work);
    } else {
        kernels::serial_for(std::ptrdiff_t(rows.size()), work);
    }
    return rows;
}

AffineCheckReport affine_check(const SeriesBallast& ballast, double A, const signals::Drive& xi,
                               double t1_fixed, double U1, double U2, double dt) {
    check_finite_nonnegative(A, "affine_check: A");
    check_finite_nonnegative(U1, "affine_check: U1");
    check_finite_nonnegative(U2, "affine_check: U2");
    const double T = xi.period();
    if (!(t1_fixed >= 0.0) || !(t1_fixed < T))
        throw std::invalid_argument("affine_check: t1_fixed must lie in [0, T)");
    const std::size_t steps = snapped_steps(T, dt, "affine_check");

    auto solve = [&](double U) {
        std::vector<double> i_rec;
        i_rec.reserve(steps);
        const Vector2d xs =
            linear_fixed_point(ballast.L, ballast.C, U, xi, A, t1_fixed, steps);
        linear_period(ballast.L, ballast.C, U, xi, A, t1_fixed, steps, xs, &i_rec);
        return i_rec;
    };

    const auto i_zero = solve(0.0);
    const auto i_u1 = solve(U1);
    const auto i_u2 = solve(U2);
    const auto i_sum = solve(U1 + U2);
    const auto i_2u1 = solve(2.0 * U1);

    AffineCheckReport rep{0.0, 0.0, 0.0};
    for (std::size_t j = 0; j < steps; ++j) {
        rep.max_i = std::max(rep.max_i, std::abs(i_sum[j]));
        rep.affine_residual =
            std::max(rep.affine_residual, std::abs(i_sum[j] - i_u1[j] - i_u2[j] + i_zero[j]));
        rep.scaling_gap = std::max(rep.scaling_gap, std::abs(i_2u1[j] - 2.0 * i_u1[j]));
    }
    return rep;
}

// ============================================================================
// Asymptotic inductance
// ============================================================================

std::complex<double> RationalAdmittance::eval(std::complex<double> s) const {
    return poly::eval(num, s) / poly::eval(den, s);
}

RationalAdmittance RationalAdmittance::parallel(const RationalAdmittance& other) const {
    return {poly::add(poly::mul(num, other.den), poly::mul(other.num, den)),
            poly::mul(den, other.den)};
}

namespace {

std::vector<double> scan_impl(const RationalAdmittance& Y, double omega, int n_max, bool par) {
    check_finite_positive(omega, "admittance_scan: omega");
    if (n_max < 1) throw std::invalid_argument("admittance_scan: n_max must be >= 1");
    const std::ptrdiff_t count = (n_max + 1) / 2;
    std::vector<double> out(static_cast<std::size_t>(count), 0.0);
    auto work = [&](std::ptrdiff_t k) {
        const double x = double(2 * k + 1) * omega;
        out[std::size_t(k)] = x * std::abs(Y.eval(std::complex<double>(0.0, x)));
    };
    if (par) {
        kernels::parallel_for(count, work);
    } else {
        kernels::serial_for(count, work);
    }
    return out;
}

} // namespace

std::vector<double> admittance_scan(const RationalAdmittance& Y, double omega, int n_max) {
    return scan_impl(Y, omega, n_max, true);
}

std::vector<double> admittance_scan_serial(const RationalAdmittance& Y, double omega, int n_max) {
    return scan_impl(Y, omega, n_max, false);
}

double asymptotic_inductance(const RationalAdmittance& Y, double omega, int n_max) {
    check_finite_positive(omega, "asymptotic_inductance: omega");
    if (n_max < 100)
        throw std::invalid_argument("asymptotic_inductance: n_max must be >= 100");
    const int dn = poly::degree(Y.den);
    if (dn < 0)
        throw std::invalid_argument(
            "asymptotic_inductance: denominator must not be identically zero");
    const int nn = poly::degree(Y.num);
    if (nn < 0)
        throw SimulationError(
            "ballast lacks asymptotic inductance (n*omega*|Y| tends to zero)");
    if (nn >= dn)
        throw SimulationError(
            "ballast lacks asymptotic inductance (n*omega*|Y| diverges at high harmonics)");
    if (dn - nn != 1)
        throw SimulationError(
            "ballast lacks asymptotic inductance (n*omega*|Y| tends to zero)");

    const auto scan = admittance_scan(Y, omega, n_max);
    auto anchor = [&](int m) {
        int n = m % 2 == 0 ? m - 1 : m;
        n = std::max(n, 1);
        return std::pair<double, double>(double(n), scan[std::size_t((n - 1) / 2)]);
    };
    const auto [na, sa] = anchor(n_max);
    const auto [nb, sb] = anchor(n_max / 2);
    const auto [nc, sc] = anchor(n_max / 4);

    // Richardson step: s(n) = alpha + beta/n^2 + gamma/n^4 + O(n^-6).
    Eigen::Matrix3d M;
    Eigen::Vector3d rhs(sa, sb, sc);
    const double ua = 1.0 / (na * na), ub = 1.0 / (nb * nb), uc = 1.0 / (nc * nc);
    M << 1.0, ua, ua * ua, 1.0, ub, ub * ub, 1.0, uc, uc * uc;
    const Eigen::Vector3d coef = M.partialPivLu().solve(rhs);
    const double alpha = coef[0];
    if (!std::isfinite(alpha) || alpha <= 0.0)
        throw SimulationError("ballast lacks asymptotic inductance (limit is not positive)");
    return 1.0 / alpha;
}

} // namespace nlcirc::lamp
