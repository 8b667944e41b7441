// Acceptance suite: one pass/fail line per criterion, exit 0 only when all
// pass. Each criterion is self-contained and prints its failure details.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "nlcirc/errors.hpp"
#include "nlcirc/fields.hpp"
#include "nlcirc/lamp.hpp"
#include "nlcirc/memristive.hpp"
#include "nlcirc/powerlaw.hpp"
#include "nlcirc/signals.hpp"
#include "nlcirc/switched.hpp"

namespace fs = std::filesystem;
using namespace nlcirc;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Criterion {
    bool ok = true;
    std::vector<std::string> notes;  // failure details
    std::vector<std::string> info;   // always printed under the verdict line

    void require(bool cond, const std::string& what) {
        if (!cond) {
            ok = false;
            notes.push_back(what);
        }
    }
    void require_close(double got, double want, double tol, const std::string& what) {
        if (!(std::abs(got - want) <= tol)) {
            ok = false;
            std::ostringstream msg;
            msg.precision(17);
            msg << what << ": got " << got << ", want " << want << " +/- " << tol;
            notes.push_back(msg.str());
        }
    }
};

std::string fmt(double x) {
    std::ostringstream s;
    s.precision(17);
    s << x;
    return s.str();
}

// --- 1: surface energy inflow --------------------------------------------

void criterion_1(Criterion& c) {
    std::mt19937_64 rng(2026);
    std::uniform_real_distribution<double> geom(1e-4, 1e4);
    std::uniform_real_distribution<double> elec(-1e3, 1e3);
    int violations = 0;
    double worst = 0.0;
    for (int k = 0; k < 1000; ++k) {
        const double l = geom(rng), r = geom(rng);
        const double v = elec(rng), i = elec(rng);
        const auto p = fields::poynting_inflow(fields::CylindricalConductor(l, r, v, i));
        const double target = v * i;
        const double ulp = std::abs(target) * std::numeric_limits<double>::epsilon();
        const double bound = 8.0 * std::max(ulp, std::numeric_limits<double>::denorm_min());
        const double err = std::abs(p.inflow - target);
        worst = std::max(worst, bound > 0 ? err / bound : 0.0);
        if (err > bound) ++violations;
    }
    c.require(violations == 0, "inflow off by more than 8 ulp on " +
                                   std::to_string(violations) + " of 1000 conductors (worst " +
                                   fmt(worst) + "x the bound)");
}

// --- 2: square-wave synthesis ---------------------------------------------

void criterion_2(Criterion& c) {
    const double T = 1.0, t1 = 0.2345;
    const int n_terms = 5000;
    const std::size_t N = 8192;
    const auto w = signals::synth_square(t1, T, n_terms, N);
    const double dt = T / double(N);

    const double c2 = t1 + T / 2.0;
    auto dist_to_crossing = [&](double t) {
        double best = T;
        for (double cr : {t1, c2}) {
            double d = std::abs(t - cr);
            d = std::min(d, T - d);
            best = std::min(best, d);
        }
        return best;
    };
    auto ideal = [&](double t) {
        double u = std::fmod(t - t1, T);
        if (u < 0) u += T;
        return u < T / 2.0 ? 1.0 : -1.0;
    };

    double worst = 0.0;
    for (std::size_t j = 0; j < N; ++j) {
        const double t = w.time_at(j);
        if (dist_to_crossing(t) < 0.01 * T) continue;
        worst = std::max(worst, std::abs(w[j] - ideal(t)));
    }
    c.require(worst < 5e-3,
              "synthesis error " + fmt(worst) + " at >= 0.01T from crossings (want < 5e-3)");

    const auto zc = signals::find_zerocrossings(w);
    const auto rising = zc.first_rising();
    c.require(rising.has_value(), "no rising crossing recovered");
    if (rising) c.require_close(*rising, t1, dt, "rising crossing");
    bool falling_found = false;
    for (const auto& cr : zc.crossings)
        if (cr.dir == signals::Direction::falling && std::abs(cr.t - c2) <= dt)
            falling_found = true;
    c.require(falling_found, "falling crossing not within one grid step of the ideal");
}

// --- 3: one flux-charge curve per model ------------------------------------

void criterion_3(Criterion& c) {
    const memristive::ChargeControlledModel m{{1.0, 1.0}, 0.0, 0.0};
    const double T = kTwoPi;

    const auto tr_a = memristive::simulate_current_driven(m, signals::Drive::sine(1.0, T), 2, T / 4096);
    const auto tr_b = memristive::simulate_current_driven(
        m, signals::Drive::sine(2.0, T, kPi / 2.0), 2, T / 4096);

    double max_psi = 0.0;
    for (double p : tr_a.psi) max_psi = std::max(max_psi, std::abs(p));
    for (double p : tr_b.psi) max_psi = std::max(max_psi, std::abs(p));
    const double dev = memristive::flux_charge_curve_deviation(tr_a, tr_b);
    c.require(dev < 1e-5 * max_psi, "flux-charge curves differ by " + fmt(dev) +
                                        " (want < " + fmt(1e-5 * max_psi) + ")");

    // the absolute 1e-6 check on psi(q=1) = 1.5 needs the finer grid
    const auto tr_fine =
        memristive::simulate_current_driven(m, signals::Drive::sine(1.0, T), 2, T / 16384);
    const auto psi1 = memristive::psi_at_charge(tr_fine, 1.0);
    c.require(psi1.has_value(), "charge trace never reaches q = 1");
    if (psi1) c.require_close(*psi1, 1.5, 1e-6, "psi at q = 1");
}

// --- 4: pinched loops -------------------------------------------------------

void criterion_4(Criterion& c) {
    const double T = kTwoPi;

    const memristive::ChargeControlledModel cm{{1.0, 1.0}, 0.0, 0.0};
    const auto tr_i =
        memristive::simulate_current_driven(cm, signals::Drive::sine(1.0, T), 3, T / 4096);
    const auto rep_i = memristive::pinched_loop_check(tr_i, 1e-5);
    c.require(rep_i.applicable && rep_i.pinched,
              "charge-controlled loop not pinched (worst |v| at i-zero " +
                  fmt(rep_i.worst_violation) + ", max |v| " + fmt(rep_i.max_v) + ")");

    const memristive::FluxControlledModel fm{{1.0, 0.5}, 0.0, 0.0};
    const auto tr_v =
        memristive::simulate_voltage_driven(fm, signals::Drive::sine(1.0, T), 3, T / 4096);
    const auto rep_v = memristive::pinched_loop_check(tr_v, 1e-5);
    c.require(rep_v.applicable && rep_v.pinched,
              "flux-controlled loop not pinched (worst |v| at i-zero " +
                  fmt(rep_v.worst_violation) + ")");

    const auto i = signals::PeriodicWaveform::from_function(T, 4096, [](double t) { return std::sin(t); });
    const auto v = signals::PeriodicWaveform::from_function(T, 4096, [](double t) { return std::cos(t); });
    const auto rep_l = memristive::pinched_loop_check(memristive::MemristiveTraces::from_waveforms(i, v), 1e-5);
    c.require(rep_l.applicable && !rep_l.pinched, "inductor cycle wrongly reported pinched");
}

// --- 5: loop classification -------------------------------------------------

void criterion_5(Criterion& c) {
    const double T = kTwoPi;
    const std::size_t N = 4096;
    const auto i = signals::PeriodicWaveform::from_function(T, N, [](double t) { return std::sin(t); });
    const auto vL = signals::PeriodicWaveform::from_function(T, N, [](double t) { return std::cos(t); });
    const auto vC = signals::PeriodicWaveform::from_function(T, N, [](double t) { return -std::cos(t); });

    const auto mL = signals::loop_metrics(i, vL);
    c.require_close(mL.signed_area, kPi, 1e-3, "inductor loop area");
    c.require(mL.classification == signals::LoopClass::inductive, "inductor loop not inductive");

    const auto mC = signals::loop_metrics(i, vC);
    c.require_close(mC.signed_area, -kPi, 1e-3, "capacitor loop area");
    c.require(mC.classification == signals::LoopClass::capacitive, "capacitor loop not capacitive");

    const auto mR = signals::loop_metrics(i, i);
    c.require(std::abs(mR.signed_area) < 1e-6, "resistor loop area " + fmt(mR.signed_area));
    c.require(mR.classification == signals::LoopClass::resistive, "resistor loop not resistive");

    lamp::SolverOptions opts;
    opts.dt = 1.0 / 4096.0;
    const auto st = lamp::simulate_lamp_circuit(lamp::SeriesBallast(0.5, 0.2),
                                                lamp::HysteresisLamp(1.0, 0.05),
                                                lamp::SourceSpec::sine(5.0, 1.0), opts);
    c.require(st.converged, "lamp steady state did not converge");
    const auto mLamp = signals::loop_metrics(st.i, st.v_lamp);
    c.require(mLamp.signed_area > 0.0,
              "lamp loop area " + fmt(mLamp.signed_area) + " not positive");
    c.require(mLamp.classification == signals::LoopClass::inductive, "lamp loop not inductive");
}

// --- 6: linear limit of the lamp circuit ------------------------------------

void criterion_6(Criterion& c) {
    const double L = 0.5, C = 0.2, T = 1.0, U = 3.0;
    lamp::SolverOptions opts;
    opts.dt = T / 4096.0;
    const auto st = lamp::simulate_lamp_circuit(lamp::SeriesBallast(L, C), lamp::HardlimiterLamp(0.0),
                                                lamp::SourceSpec::sine(U, T), opts);
    c.require(st.converged, "linear lamp run did not converge");

    const double omega = kTwoPi / T;
    const double X = std::abs(L * omega - 1.0 / (C * omega));
    const double expected = U / X;
    c.require(std::abs(st.amplitude - expected) < 1e-6 * expected,
              "amplitude " + fmt(st.amplitude) + " vs phasor " + fmt(expected));
    c.require(st.energy_balance_rel < 1e-6,
              "energy balance " + fmt(st.energy_balance_rel) + " (want < 1e-6)");
}

// --- 7: zerocrossing nonlinearity --------------------------------------------

void criterion_7(Criterion& c) {
    const lamp::SeriesBallast ballast(0.5, 0.2);
    const auto xi = signals::Drive::sine(1.0, 1.0);
    const std::vector<double> U{2.0, 3.0, 5.0, 8.0, 12.0, 20.0};
    lamp::SolverOptions opts;
    opts.dt = 1.0 / 4096.0;

    auto column_range = [](const std::vector<lamp::SweepRow>& rows, auto field) {
        double lo = field(rows.front()), hi = lo;
        for (const auto& r : rows) {
            lo = std::min(lo, field(r));
            hi = std::max(hi, field(r));
        }
        return std::pair{lo, hi};
    };

    const auto hot = lamp::zerocrossing_sweep(ballast, lamp::HardlimiterLamp(1.0), xi, U, opts);
    for (const auto& row : hot)
        c.require(row.ok, "sweep row U = " + fmt(row.U) + " failed: " + row.message);
    if (c.ok) {
        const auto [t1_lo, t1_hi] = column_range(hot, [](const lamp::SweepRow& r) { return r.t1; });
        c.require(t1_hi - t1_lo > 10.0 * opts.dt,
                  "t1 range " + fmt(t1_hi - t1_lo) + " spans <= 10 grid steps");
        const auto [p_lo, p_hi] =
            column_range(hot, [](const lamp::SweepRow& r) { return r.P_over_U2; });
        c.require(p_hi - p_lo > 0.05 * p_hi,
                  "P/U^2 varies by " + fmt(p_hi - p_lo) + ", less than 5% of " + fmt(p_hi));
    }

    const auto cold = lamp::zerocrossing_sweep(ballast, lamp::HardlimiterLamp(0.0), xi, U, opts);
    for (const auto& row : cold)
        c.require(row.ok, "linear sweep row U = " + fmt(row.U) + " failed: " + row.message);
    if (c.ok) {
        const auto [t1_lo, t1_hi] = column_range(cold, [](const lamp::SweepRow& r) { return r.t1; });
        c.require(t1_hi - t1_lo < 1e-9, "linear t1 range " + fmt(t1_hi - t1_lo));
        const auto [p_lo, p_hi] =
            column_range(cold, [](const lamp::SweepRow& r) { return r.P_over_U2; });
        c.require(p_hi - p_lo < 1e-9, "linear P/U^2 range " + fmt(p_hi - p_lo));
    }
}

// --- 8: affine nonlinearity ---------------------------------------------------

void criterion_8(Criterion& c) {
    const lamp::SeriesBallast ballast(0.5, 0.2);
    const auto xi = signals::Drive::sine(1.0, 1.0);
    const auto rep = lamp::affine_check(ballast, 1.0, xi, 0.23, 4.0, 7.0);
    c.require(rep.affine_residual < 1e-8 * rep.max_i,
              "affine residual " + fmt(rep.affine_residual) + " vs bound " + fmt(1e-8 * rep.max_i));
    c.require(rep.scaling_gap > 1e-3 * rep.max_i,
              "scaling gap " + fmt(rep.scaling_gap) + " not above " + fmt(1e-3 * rep.max_i));
}

// --- 9: asymptotic inductance --------------------------------------------------

void criterion_9(Criterion& c) {
    const double omega = 2.0;
    const int n_max = 9999;

    const double L_lc = 2.0, C_lc = 0.3;
    const lamp::RationalAdmittance lc{{0.0, C_lc}, {1.0, 0.0, L_lc * C_lc}};
    const double got_lc = lamp::asymptotic_inductance(lc, omega, n_max);
    c.require(std::abs(got_lc - L_lc) < 1e-4 * L_lc,
              "series-LC inductance " + fmt(got_lc) + " vs " + fmt(L_lc));

    const double R_rl = 1.3, L_rl = 3.0;
    const lamp::RationalAdmittance rl{{1.0}, {R_rl, L_rl}};
    const double got_rl = lamp::asymptotic_inductance(rl, omega, n_max);
    c.require(std::abs(got_rl - L_rl) < 1e-4 * L_rl,
              "series-RL inductance " + fmt(got_rl) + " vs " + fmt(L_rl));

    bool raised = false;
    try {
        lamp::asymptotic_inductance(lamp::RationalAdmittance{{0.0, 0.7}, {1.0}}, omega, n_max);
    } catch (const SimulationError&) {
        raised = true;
    }
    c.require(raised, "pure-capacitor admittance did not raise the no-asymptote error");
}

// --- 10: power-law degree preservation -----------------------------------------

powerlaw::OnePortNetwork series_pair(double alpha, double Da, double Db) {
    powerlaw::OnePortNetwork net(3, 0, 2);
    net.add_element(0, 1, powerlaw::PowerLawElement(alpha, Da));
    net.add_element(1, 2, powerlaw::PowerLawElement(alpha, Db));
    return net;
}

powerlaw::OnePortNetwork bridge(double alpha, const std::vector<double>& D) {
    powerlaw::OnePortNetwork net(4, 0, 3);
    net.add_element(0, 1, powerlaw::PowerLawElement(alpha, D[0]));
    net.add_element(0, 2, powerlaw::PowerLawElement(alpha, D[1]));
    net.add_element(1, 3, powerlaw::PowerLawElement(alpha, D[2]));
    net.add_element(2, 3, powerlaw::PowerLawElement(alpha, D[3]));
    net.add_element(1, 2, powerlaw::PowerLawElement(alpha, D[4]));
    return net;
}

double bisect(const std::function<double(double)>& f, double lo, double hi) {
    double flo = f(lo);
    for (int k = 0; k < 200; ++k) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if ((fm > 0) == (flo > 0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

void criterion_10(Criterion& c) {
    std::mt19937_64 rng(2026);
    std::uniform_real_distribution<double> coeff(0.5, 3.0);
    const double alphas[] = {0.5, 1.5, 3.0};

    for (int trial = 0; trial < 20; ++trial) {
        const double alpha = alphas[trial % 3];
        std::uniform_int_distribution<int> nodes_dist(2, 5);
        const int n = nodes_dist(rng);
        powerlaw::OnePortNetwork net(n, 0, n - 1);
        for (int k = 0; k + 1 < n; ++k)
            net.add_element(k, k + 1, powerlaw::PowerLawElement(alpha, coeff(rng)));
        std::uniform_int_distribution<int> extra(0, 12 - (n - 1));
        const int add = extra(rng);
        for (int k = 0; k < add; ++k) {
            std::uniform_int_distribution<int> pick(0, n - 1);
            const int a = pick(rng), b = pick(rng);
            if (a == b) continue;
            net.add_element(a, b, powerlaw::PowerLawElement(alpha, coeff(rng)));
        }

        const double D_eff = powerlaw::effective_coefficient(net);
        for (double I : {0.3, 1.0, 4.2}) {
            const auto sol = powerlaw::solve_dc(net, powerlaw::CurrentDrive{I});
            const double want = D_eff * std::pow(I, alpha);
            c.require(std::abs(sol.V_in - want) <= 1e-7 * std::max(1.0, std::abs(sol.V_in)),
                      "trial " + std::to_string(trial) + ": V_in " + fmt(sol.V_in) +
                          " off the homogeneous form " + fmt(want));
        }
    }

    const double alpha = 1.5, Da = 2.0, Db = 3.0;
    const double ser = powerlaw::effective_coefficient(series_pair(alpha, Da, Db));
    c.require(std::abs(ser - (Da + Db)) < 1e-9 * (Da + Db),
              "series closed form: " + fmt(ser) + " vs " + fmt(Da + Db));
    powerlaw::OnePortNetwork par(2, 0, 1);
    par.add_element(0, 1, powerlaw::PowerLawElement(alpha, Da));
    par.add_element(0, 1, powerlaw::PowerLawElement(alpha, Db));
    const double want_par =
        std::pow(std::pow(Da, -1.0 / alpha) + std::pow(Db, -1.0 / alpha), -alpha);
    const double got_par = powerlaw::effective_coefficient(par);
    c.require(std::abs(got_par - want_par) < 1e-9 * want_par,
              "parallel closed form: " + fmt(got_par) + " vs " + fmt(want_par));

    const std::vector<double> D{2.0, 1.0, 1.5, 2.5, 0.7};
    const double V = 5.0;
    auto i_ab = [&](double va, double vb, double Dk) {
        return powerlaw::element_i(powerlaw::PowerLawElement(alpha, Dk), va - vb);
    };
    auto v1_of_v2 = [&](double v2) {
        return bisect(
            [&](double v1) { return i_ab(V, v1, D[0]) - i_ab(v1, 0.0, D[2]) - i_ab(v1, v2, D[4]); },
            -1.0, V + 1.0);
    };
    const double v2 = bisect(
        [&](double v2c) {
            const double v1 = v1_of_v2(v2c);
            return i_ab(V, v2c, D[1]) + i_ab(v1, v2c, D[4]) - i_ab(v2c, 0.0, D[3]);
        },
        -1.0, V + 1.0);
    const double v1 = v1_of_v2(v2);
    const double I_in = i_ab(V, v1, D[0]) + i_ab(V, v2, D[1]);

    const auto sol = powerlaw::solve_dc(bridge(alpha, D), powerlaw::VoltageDrive{V});
    c.require(std::abs(sol.node_voltages[1] - v1) < 1e-8,
              "bridge node 1: " + fmt(sol.node_voltages[1]) + " vs oracle " + fmt(v1));
    c.require(std::abs(sol.node_voltages[2] - v2) < 1e-8,
              "bridge node 2: " + fmt(sol.node_voltages[2]) + " vs oracle " + fmt(v2));
    c.require(std::abs(sol.I_in - I_in) < 1e-8,
              "bridge input current: " + fmt(sol.I_in) + " vs oracle " + fmt(I_in));
}

// --- 11: fractal expansion -------------------------------------------------------

void criterion_11(Criterion& c) {
    const auto base = series_pair(2.0, 1.0, 1.0);
    for (int depth = 0; depth <= 3; ++depth) {
        const double want = std::pow(2.0, depth + 1);
        const double got =
            powerlaw::effective_coefficient(powerlaw::fractal_expand(base, depth));
        c.require(std::abs(got - want) < 1e-6 * want,
                  "depth " + std::to_string(depth) + ": D_eff " + fmt(got) + " vs " + fmt(want));
    }
}

// --- 12: eye loops -----------------------------------------------------------------

void criterion_12(Criterion& c) {
    const powerlaw::EyeElement e(1.0, 2.0, 2.0, 1.0);
    const auto [i_r, v_r] = powerlaw::return_point(e);
    c.require(std::abs(e.branch_v(i_r, true) - v_r) < 1e-9,
              "rising branch misses the return point by " + fmt(e.branch_v(i_r, true) - v_r));
    c.require(std::abs(e.branch_v(i_r, false) - v_r) < 1e-9,
              "falling branch misses the return point by " + fmt(e.branch_v(i_r, false) - v_r));

    const powerlaw::EyeElement f(1.5, 3.0, 2.5, 0.75);
    const auto [i_r2, v_r2] = powerlaw::return_point(f);
    c.require_close(i_r2, 3.0 / 0.75, 1e-12, "successor-exponent return current D1/D2");

    c.require(powerlaw::eye_loop_area(powerlaw::EyeElement(1.0, 1.0, 2.0, 1.0)) > 0.0,
              "area not positive for ascending exponents");
    c.require(powerlaw::eye_loop_area(powerlaw::EyeElement(2.0, 1.0, 1.0, 1.0)) < 0.0,
              "area not negative for descending exponents");

    double prev = std::numeric_limits<double>::infinity();
    for (double eps : {0.2, 0.1, 0.05}) {
        const double area =
            powerlaw::eye_loop_area(powerlaw::EyeElement(1.0 - eps, 1.0, 1.0 + eps, 1.0));
        const double want = 2.0 * eps / (4.0 - eps * eps);
        c.require_close(area, want, 1e-12, "area at eps = " + fmt(eps));
        c.require(area > 0.0 && area < prev,
                  "area at eps = " + fmt(eps) + " does not shrink monotonically");
        prev = area;
    }
}

// --- 13: approximate superposition -----------------------------------------------

void criterion_13(Criterion& c) {
    const auto a = bridge(1.5, {2.0, 1.0, 1.5, 2.5, 0.7});
    const auto b = bridge(1.5, {4.0, 2.0, 3.0, 5.0, 1.4});
    const auto exact = powerlaw::approximate_superposition(a, b, 5.0);
    c.require(exact.relative_deviation < 1e-9,
              "identical-exponent merge deviation " + fmt(exact.relative_deviation));

    auto make = [](double a1, double a2, double a3) {
        powerlaw::OnePortNetwork net(4, 0, 3);
        net.add_element(0, 1, powerlaw::PowerLawElement(a1, 1.0));
        net.add_element(1, 3, powerlaw::PowerLawElement(a2, 2.0));
        net.add_element(1, 2, powerlaw::PowerLawElement(a2, 1.5));
        net.add_element(2, 3, powerlaw::PowerLawElement(a3, 1.0));
        return net;
    };
    const auto ladder = powerlaw::approximate_superposition(make(0.5, 1.0, 2.0),
                                                            make(2.0, 1.0, 0.5), 3.0);
    // frozen baseline from the first run of this suite; the deterministic
    // solver must keep reproducing it
    const double baseline = 0.032654047707539539;
    c.info.push_back("ladder deviation = " + fmt(ladder.relative_deviation) + " (baseline " +
                     fmt(baseline) + ")");
    c.require(std::abs(ladder.relative_deviation - baseline) < 1e-9 * baseline,
              "ladder deviation " + fmt(ladder.relative_deviation) + " drifted off the baseline " +
                  fmt(baseline));
}

// --- 14: switched systems -----------------------------------------------------------

Eigen::MatrixXd expm(const Eigen::MatrixXd& A) {
    int halvings = 0;
    double norm = A.cwiseAbs().rowwise().sum().maxCoeff();
    while (norm > 0.5) {
        norm /= 2.0;
        ++halvings;
    }
    const Eigen::MatrixXd As = A / std::pow(2.0, halvings);
    Eigen::MatrixXd result = Eigen::MatrixXd::Identity(A.rows(), A.cols());
    Eigen::MatrixXd term = result;
    for (int k = 1; k <= 24; ++k) {
        term = (term * As) / double(k);
        result += term;
    }
    for (int k = 0; k < halvings; ++k) result = result * result;
    return result;
}

Eigen::MatrixXd osc(double w2) {
    Eigen::MatrixXd A(2, 2);
    A << 0.0, 1.0, -w2, 0.0;
    return A;
}

void criterion_14(Criterion& c) {
    using namespace nlcirc::switched;
    const double dt = 1e-3;

    Eigen::MatrixXd A1(1, 1);
    A1 << -1.0;
    const SwitchedLinearSystem scalar({Mode{A1, Eigen::MatrixXd()}}, NoRule{});
    c.require(classify_system(scalar) == SystemClass::LTI, "single fixed mode not LTI");
    Eigen::VectorXd x0s(1);
    x0s << 1.0;
    const auto traj_s = simulate_switched(scalar, x0s, ZeroInput{}, 1.0, dt);
    c.require(std::abs(traj_s.x.back()[0] - std::exp(-1.0)) < 1e-8,
              "scalar decay " + fmt(traj_s.x.back()[0]) + " vs " + fmt(std::exp(-1.0)));

    const SwitchedLinearSystem rotor({Mode{osc(4.0), Eigen::MatrixXd()}}, NoRule{});
    Eigen::VectorXd x0(2);
    x0 << 1.0, 0.0;
    const auto traj_r = simulate_switched(rotor, x0, ZeroInput{}, 1.0, dt);
    for (std::size_t k : {250u, 500u, 1000u}) {
        const Eigen::VectorXd want = expm(osc(4.0) * traj_r.t[k]) * x0;
        c.require((traj_r.x[k] - want).norm() < 1e-8,
                  "trajectory off the matrix exponential at t = " + fmt(traj_r.t[k]));
    }

    const SwitchedLinearSystem sched(
        {Mode{osc(4.0), Eigen::MatrixXd()}, Mode{osc(9.0), Eigen::MatrixXd()}},
        ScheduleRule{{0.5, 1.25}});
    c.require(classify_system(sched) == SystemClass::LTV, "scheduled switching not LTV");

    const SwitchedLinearSystem leveled(
        {Mode{osc(4.0), Eigen::MatrixXd()}, Mode{osc(9.0), Eigen::MatrixXd()}},
        LevelCrossingRule{0, 0.0, 0.0});
    c.require(classify_system(leveled) == SystemClass::NL, "level switching not NL");

    const double t_span = 2.0;
    const auto traj = simulate_switched(leveled, x0, ZeroInput{}, t_span, dt);
    c.require(!traj.switches.empty(), "no level crossings located");

    std::vector<double> samples;
    for (std::size_t k = 0; k + 1 < traj.t.size(); ++k) samples.push_back(traj.x[k][0]);
    const auto zc =
        signals::find_zerocrossings(signals::PeriodicWaveform(t_span, std::move(samples)));
    c.require(zc.crossings.size() == traj.switches.size(),
              "located " + std::to_string(traj.switches.size()) + " switches but " +
                  std::to_string(zc.crossings.size()) + " sampled crossings");
    for (const auto& sw : traj.switches) {
        double best = t_span;
        for (const auto& cr : zc.crossings) best = std::min(best, std::abs(cr.t - sw.t));
        c.require(best <= dt, "switch at t = " + fmt(sw.t) +
                                  " is " + fmt(best) + " from the nearest sampled crossing");
    }
}

// --- 15: recipe determinism -----------------------------------------------------------

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void criterion_15(Criterion& c) {
    const fs::path recipes(NLCIRC_RECIPES_DIR);
    const fs::path work = fs::temp_directory_path() / "nlcirc_acceptance";
    fs::remove_all(work);

    std::vector<fs::path> configs;
    for (const auto& entry : fs::directory_iterator(recipes))
        if (entry.path().extension() == ".json") configs.push_back(entry.path());
    std::sort(configs.begin(), configs.end());
    c.require(!configs.empty(), "no recipes found in " + recipes.string());

    for (const auto& cfg : configs) {
        const fs::path out_a = work / cfg.stem() / "a";
        const fs::path out_b = work / cfg.stem() / "b";
        for (const auto& out : {out_a, out_b}) {
            const std::string cmd = std::string("\"") + NLCIRC_CLI_PATH + "\" --config \"" +
                                    cfg.string() + "\" --out \"" + out.string() +
                                    "\" --quiet >/dev/null 2>&1";
            const int rc = std::system(cmd.c_str());
            c.require(rc != -1 && WEXITSTATUS(rc) == 0,
                      cfg.filename().string() + ": run exited " +
                          std::to_string(rc == -1 ? -1 : WEXITSTATUS(rc)));
        }

        std::map<std::string, std::string> files_a;
        for (const auto& entry : fs::recursive_directory_iterator(out_a))
            if (entry.is_regular_file())
                files_a[fs::relative(entry.path(), out_a).string()] = slurp(entry.path());
        std::size_t count_b = 0;
        for (const auto& entry : fs::recursive_directory_iterator(out_b)) {
            if (!entry.is_regular_file()) continue;
            ++count_b;
            const std::string rel = fs::relative(entry.path(), out_b).string();
            const auto it = files_a.find(rel);
            if (it == files_a.end()) {
                c.require(false, cfg.filename().string() + ": " + rel + " only in rerun");
            } else {
                c.require(it->second == slurp(entry.path()),
                          cfg.filename().string() + ": " + rel + " differs between reruns");
            }
        }
        c.require(count_b == files_a.size(),
                  cfg.filename().string() + ": rerun wrote a different file set");
        c.require(!files_a.empty(), cfg.filename().string() + ": no output files");
    }
}

} // namespace

int main() {
    struct Entry {
        int num;
        const char* label;
        void (*fn)(Criterion&);
    };
    const Entry entries[] = {
        {1, "surface energy inflow equals terminal power on random conductors", criterion_1},
        {2, "square-wave synthesis converges away from crossings and recovers t1", criterion_2},
        {3, "charge-controlled memristor traces a single flux-charge curve", criterion_3},
        {4, "memristive loops are pinched at the origin, an inductor's is not", criterion_4},
        {5, "loop areas classify inductive, capacitive, resistive, and lamp cycles", criterion_5},
        {6, "zero-knee lamp circuit matches the phasor amplitude and energy balance", criterion_6},
        {7, "crossing times and P/U^2 bend with U only when the knee is active", criterion_7},
        {8, "fixed-crossing substitution is affine in U yet breaks scaling", criterion_8},
        {9, "admittance scans recover the series inductance and reject a capacitor", criterion_9},
        {10, "uniform-exponent networks preserve their degree", criterion_10},
        {11, "fractal expansion doubles the effective coefficient per level", criterion_11},
        {12, "eye loops close at the return point with exponent-ordered area sign", criterion_12},
        {13, "superposition is exact for equal exponents and pinned for mixed", criterion_13},
        {14, "switched trajectories match matrix exponentials and located crossings", criterion_14},
        {15, "every recipe rerun is byte-identical", criterion_15},
    };

    int failures = 0;
    for (const auto& entry : entries) {
        Criterion c;
        try {
            entry.fn(c);
        } catch (const std::exception& e) {
            c.ok = false;
            c.notes.push_back(std::string("unexpected exception: ") + e.what());
        }
        std::printf("[%s] criterion %d: %s\n", c.ok ? "PASS" : "FAIL", entry.num, entry.label);
        for (const auto& line : c.info) std::printf("        %s\n", line.c_str());
        for (const auto& note : c.notes) std::printf("        %s\n", note.c_str());
        if (!c.ok) ++failures;
    }
    if (failures > 0) std::printf("%d of 15 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
