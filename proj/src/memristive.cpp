#include "nlcirc/memristive.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "nlcirc/errors.hpp"
#include "nlcirc/poly.hpp"

namespace nlcirc::memristive {

namespace {

using Eigen::VectorXd;

std::size_t snapped_steps(double T, double dt) {
    if (!(dt > 0.0) || !std::isfinite(dt))
        throw std::invalid_argument("simulate: dt must be finite and > 0");
    const double steps = std::round(T / dt);
    if (steps < 256.0)
        throw std::invalid_argument("simulate: dt must be <= T/256");
    return std::size_t(steps);
}

void cumtrapz(const std::vector<double>& t, const std::vector<double>& y, double y0,
              std::vector<double>& out) {
    out.resize(y.size());
    double acc = y0;
    out[0] = acc;
    for (std::size_t j = 1; j < y.size(); ++j) {
        acc += 0.5 * (y[j - 1] + y[j]) * (t[j] - t[j - 1]);
        out[j] = acc;
    }
}

/// RK4 over dx/dt = f(x, u(t)) with output y = R(x, u) * u recorded on the
/// grid. `u` is the driving signal (current or voltage); the caller decides
/// which physical column the drive and the response land in.
struct SimResult {
    std::vector<double> t, u, y;
    std::vector<std::vector<double>> x;
    bool nonpositive_coefficient = false;
};

SimResult run_rk4(const GenericMemristiveSystem& m, const signals::Drive& drive, int periods,
                  double dt_req) {
    if (periods < 1) throw std::invalid_argument("simulate: periods must be >= 1");
    if (m.dim < 1) throw std::invalid_argument("simulate: state dimension must be >= 1");
    if (!m.R || !m.f) throw std::invalid_argument("simulate: model functions must be callable");
    if (m.x0.size() != m.dim)
        throw std::invalid_argument("simulate: x0 size must match the state dimension");

    const double T = drive.period();
    const std::size_t steps = snapped_steps(T, dt_req);
    const double dt = T / double(steps);
    const std::size_t total = steps * std::size_t(periods);

    SimResult r;
    r.t.resize(total + 1);
    r.u.resize(total + 1);
    r.y.resize(total + 1);
    r.x.assign(std::size_t(m.dim), std::vector<double>(total + 1));

    VectorXd x = m.x0;
    VectorXd k1(m.dim), k2(m.dim), k3(m.dim), k4(m.dim);
    double t = 0.0;
    for (std::size_t n = 0; n <= total; ++n) {
        t = double(n) * dt;
        const double un = drive(t);
        double yn;
        try {
            const double coeff = m.R(x, un);
            if (!std::isfinite(coeff)) throw SimulationError("non-finite memristance");
            if (coeff <= 0.0) r.nonpositive_coefficient = true;
            yn = coeff * un;
        } catch (const std::exception& e) {
            throw SimulationError("simulation aborted at t=" + std::to_string(t) +
                                  ": model evaluation failed (" + e.what() + ")");
        }
        r.t[n] = t;
        r.u[n] = un;
        r.y[n] = yn;
        for (int d = 0; d < m.dim; ++d) r.x[std::size_t(d)][n] = x[d];
        if (n == total) break;

        try {
            const double um = drive(t + 0.5 * dt);
            const double ue = drive(t + dt);
            k1 = m.f(x, un);
            k2 = m.f(x + 0.5 * dt * k1, um);
            k3 = m.f(x + 0.5 * dt * k2, um);
            k4 = m.f(x + dt * k3, ue);
            x += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        } catch (const std::exception& e) {
            throw SimulationError("simulation aborted at t=" + std::to_string(t) +
                                  ": model evaluation failed (" + e.what() + ")");
        }
        if (!x.allFinite())
            throw SimulationError("simulation aborted at t=" + std::to_string(t) +
                                  ": state became non-finite");
    }
    return r;
}

MemristiveTraces assemble(SimResult&& r, double T, int periods, bool current_driven, double q0,
                          double psi0) {
    MemristiveTraces tr;
    tr.T = T;
    tr.dt = r.t.size() > 1 ? r.t[1] - r.t[0] : 0.0;
    tr.periods = periods;
    tr.t = std::move(r.t);
    if (current_driven) {
        tr.i = std::move(r.u);
        tr.v = std::move(r.y);
    } else {
        tr.v = std::move(r.u);
        tr.i = std::move(r.y);
    }
    cumtrapz(tr.t, tr.i, q0, tr.q);
    cumtrapz(tr.t, tr.v, psi0, tr.psi);
    tr.x = std::move(r.x);
    tr.passivity_warning = r.nonpositive_coefficient;
    return tr;
}

GenericMemristiveSystem wrap_charge(const ChargeControlledModel& m) {
    GenericMemristiveSystem g;
    g.dim = 1;
    g.R = [coeffs = m.M](const VectorXd& x, double) { return poly::eval(coeffs, x[0]); };
    g.f = [](const VectorXd&, double u) { return VectorXd::Constant(1, u); };
    g.x0 = VectorXd::Constant(1, m.q0);
    return g;
}

GenericMemristiveSystem wrap_flux(const FluxControlledModel& m) {
    GenericMemristiveSystem g;
    g.dim = 1;
    g.R = [coeffs = m.W](const VectorXd& x, double) { return poly::eval(coeffs, x[0]); };
    g.f = [](const VectorXd&, double u) { return VectorXd::Constant(1, u); };
    g.x0 = VectorXd::Constant(1, m.psi0);
    return g;
}

} // namespace

MemristiveTraces simulate_current_driven(const ChargeControlledModel& m,
                                         const signals::Drive& i_drive, int periods, double dt) {
    auto r = run_rk4(wrap_charge(m), i_drive, periods, dt);
    return assemble(std::move(r), i_drive.period(), periods, true, m.q0, m.psi0);
}

MemristiveTraces simulate_current_driven(const GenericMemristiveSystem& m,
                                         const signals::Drive& i_drive, int periods, double dt) {
    auto r = run_rk4(m, i_drive, periods, dt);
    return assemble(std::move(r), i_drive.period(), periods, true, 0.0, 0.0);
}

MemristiveTraces simulate_voltage_driven(const FluxControlledModel& m,
                                         const signals::Drive& v_drive, int periods, double dt) {
    auto r = run_rk4(wrap_flux(m), v_drive, periods, dt);
    return assemble(std::move(r), v_drive.period(), periods, false, m.q0, m.psi0);
}

MemristiveTraces simulate_voltage_driven(const GenericMemristiveSystem& m,
                                         const signals::Drive& v_drive, int periods, double dt) {
    auto r = run_rk4(m, v_drive, periods, dt);
    return assemble(std::move(r), v_drive.period(), periods, false, 0.0, 0.0);
}

MemristiveTraces MemristiveTraces::from_waveforms(const signals::PeriodicWaveform& i,
                                                  const signals::PeriodicWaveform& v) {
    if (i.size() != v.size() || i.period() != v.period())
        throw std::invalid_argument("from_waveforms: waveforms must share period and sample count");
    const std::size_t N = i.size();
    MemristiveTraces tr;
    tr.T = i.period();
    tr.dt = i.dt();
    tr.periods = 1;
    tr.t.resize(N + 1);
    tr.i.resize(N + 1);
    tr.v.resize(N + 1);
    for (std::size_t j = 0; j <= N; ++j) {
        tr.t[j] = double(j) * tr.dt;
        tr.i[j] = i[j % N];
        tr.v[j] = v[j % N];
    }
    cumtrapz(tr.t, tr.i, 0.0, tr.q);
    cumtrapz(tr.t, tr.v, 0.0, tr.psi);
    return tr;
}

signals::PeriodicWaveform MemristiveTraces::last_period(const std::vector<double>& column) const {
    const std::size_t steps = std::size_t(std::round(T / dt));
    if (column.size() != std::size_t(periods) * steps + 1)
        throw std::invalid_argument("last_period: column does not belong to these traces");
    std::vector<double> y(column.end() - std::ptrdiff_t(steps) - 1, column.end() - 1);
    return signals::PeriodicWaveform(T, std::move(y));
}

std::vector<std::pair<double, double>> flux_charge_curve(const MemristiveTraces& tr) {
    std::vector<std::pair<double, double>> out(tr.q.size());
    for (std::size_t j = 0; j < tr.q.size(); ++j) out[j] = {tr.q[j], tr.psi[j]};
    return out;
}

PinchedLoopReport pinched_loop_check(const MemristiveTraces& tr, double rel_tol) {
    if (!(rel_tol >= 0.0)) throw std::invalid_argument("pinched_loop_check: rel_tol must be >= 0");
    if (tr.i.size() < 2) throw std::invalid_argument("pinched_loop_check: traces are empty");
    PinchedLoopReport rep;
    for (double v : tr.v) rep.max_v = std::max(rep.max_v, std::abs(v));
    for (std::size_t j = 0; j + 1 < tr.i.size(); ++j) {
        const double a = tr.i[j];
        const double b = tr.i[j + 1];
        double v_at = 0.0;
        if (a == 0.0) {
            v_at = tr.v[j];
        } else if (a * b < 0.0) {
            const double frac = a / (a - b);
            v_at = tr.v[j] + frac * (tr.v[j + 1] - tr.v[j]);
        } else {
            continue;
        }
        ++rep.crossing_count;
        rep.worst_violation = std::max(rep.worst_violation, std::abs(v_at));
    }
    rep.applicable = rep.crossing_count > 0;
    rep.pinched = rep.applicable && rep.worst_violation <= rel_tol * rep.max_v;
    return rep;
}

double flux_charge_deviation(const MemristiveTraces& tr, const ChargeControlledModel& m) {
    const auto P = poly::antiderivative(m.M);
    const double P0 = poly::eval(P, m.q0);
    double worst = 0.0;
    for (std::size_t j = 0; j < tr.q.size(); ++j) {
        const double expected = m.psi0 + poly::eval(P, tr.q[j]) - P0;
        worst = std::max(worst, std::abs(tr.psi[j] - expected));
    }
    return worst;
}

double charge_flux_deviation(const MemristiveTraces& tr, const FluxControlledModel& m) {
    const auto P = poly::antiderivative(m.W);
    const double P0 = poly::eval(P, m.psi0);
    double worst = 0.0;
    for (std::size_t j = 0; j < tr.psi.size(); ++j) {
        const double expected = m.q0 + poly::eval(P, tr.psi[j]) - P0;
        worst = std::max(worst, std::abs(tr.q[j] - expected));
    }
    return worst;
}

double flux_charge_curve_deviation(const MemristiveTraces& a, const MemristiveTraces& b) {
    auto pts = flux_charge_curve(b);
    std::sort(pts.begin(), pts.end());
    if (pts.empty() || a.q.empty())
        throw std::invalid_argument("flux_charge_curve_deviation: traces are empty");
    const double qlo = pts.front().first;
    const double qhi = pts.back().first;
    double worst = 0.0;
    bool overlap = false;
    for (std::size_t j = 0; j < a.q.size(); ++j) {
        const double q = a.q[j];
        if (q < qlo || q > qhi) continue;
        overlap = true;
        auto it = std::lower_bound(pts.begin(), pts.end(), std::make_pair(q, -1e300));
        double psi_b;
        if (it == pts.begin()) {
            psi_b = it->second;
        } else {
            const auto lo = std::prev(it);
            const double dq = it->first - lo->first;
            psi_b = dq == 0.0 ? lo->second
                              : lo->second + (q - lo->first) / dq * (it->second - lo->second);
        }
        worst = std::max(worst, std::abs(a.psi[j] - psi_b));
    }
    if (!overlap)
        throw std::invalid_argument("flux_charge_curve_deviation: charge ranges do not overlap");
    return worst;
}

std::optional<double> psi_at_charge(const MemristiveTraces& tr, double q_target) {
    for (std::size_t j = 0; j + 1 < tr.q.size(); ++j) {
        const double a = tr.q[j] - q_target;
        const double b = tr.q[j + 1] - q_target;
        if (a == 0.0) return tr.psi[j];
        if (a * b < 0.0) {
            const double frac = a / (a - b);
            return tr.psi[j] + frac * (tr.psi[j + 1] - tr.psi[j]);
        }
    }
    return std::nullopt;
}

} // namespace nlcirc::memristive
