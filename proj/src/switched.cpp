#include "nlcirc/switched.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "nlcirc/errors.hpp"

namespace nlcirc::switched {

namespace {

constexpr std::size_t kMaxSwitches = 1000000;

inline int sgn(double x) { return (x > 0.0) - (x < 0.0); }

struct InputEval {
    const InputSignal* u;
    int m;

    Eigen::VectorXd operator()(double t) const {
        if (std::holds_alternative<ZeroInput>(*u)) return Eigen::VectorXd::Zero(m);
        if (const auto* c = std::get_if<Eigen::VectorXd>(u)) return *c;
        const auto& w = std::get<signals::PeriodicWaveform>(*u);
        Eigen::VectorXd v(1);
        v[0] = w.interp(t);
        return v;
    }
};

Eigen::VectorXd rk4_step(const Mode& mode, const InputEval& u, double t, double h,
                         const Eigen::VectorXd& x) {
    auto f = [&](double tt, const Eigen::VectorXd& xx) -> Eigen::VectorXd {
        if (mode.B.cols() == 0) return mode.A * xx;
        return mode.A * xx + mode.B * u(tt);
    };
    const Eigen::VectorXd k1 = f(t, x);
    const Eigen::VectorXd k2 = f(t + 0.5 * h, x + 0.5 * h * k1);
    const Eigen::VectorXd k3 = f(t + 0.5 * h, x + 0.5 * h * k2);
    const Eigen::VectorXd k4 = f(t + h, x + h * k3);
    return x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

} // namespace

SwitchedLinearSystem::SwitchedLinearSystem(std::vector<Mode> modes, SwitchingRule rule)
    : modes_(std::move(modes)), rule_(std::move(rule)) {
    if (modes_.empty())
        throw std::invalid_argument("SwitchedLinearSystem: need at least one mode");
    n_ = int(modes_[0].A.rows());
    m_ = int(modes_[0].B.cols());
    if (n_ < 1) throw std::invalid_argument("SwitchedLinearSystem: state dimension must be >= 1");
    for (const auto& mode : modes_) {
        if (mode.A.rows() != n_ || mode.A.cols() != n_)
            throw std::invalid_argument("SwitchedLinearSystem: every A must be n x n");
        if (mode.B.cols() != m_ || (m_ > 0 && mode.B.rows() != n_))
            throw std::invalid_argument(
                "SwitchedLinearSystem: every B must be n x m with a common m");
        if (!mode.A.allFinite() || !mode.B.allFinite())
            throw std::invalid_argument("SwitchedLinearSystem: matrices must be finite");
    }
    if (const auto* sched = std::get_if<ScheduleRule>(&rule_)) {
        for (std::size_t k = 0; k < sched->times.size(); ++k) {
            if (!std::isfinite(sched->times[k]))
                throw std::invalid_argument("SwitchedLinearSystem: schedule times must be finite");
            if (k > 0 && sched->times[k] <= sched->times[k - 1])
                throw std::invalid_argument(
                    "SwitchedLinearSystem: schedule times must be strictly increasing");
        }
    }
    if (const auto* level = std::get_if<LevelCrossingRule>(&rule_)) {
        if (level->j < 0 || level->j >= n_)
            throw std::invalid_argument(
                "SwitchedLinearSystem: monitored state index j must satisfy 0 <= j < n");
        if (!std::isfinite(level->c))
            throw std::invalid_argument("SwitchedLinearSystem: level c must be finite");
        if (!(level->band >= 0.0) || !std::isfinite(level->band))
            throw std::invalid_argument("SwitchedLinearSystem: band must be finite and >= 0");
    }
}

SystemClass classify_system(const SwitchedLinearSystem& sys) {
    if (std::holds_alternative<NoRule>(sys.rule())) return SystemClass::LTI;
    if (std::holds_alternative<ScheduleRule>(sys.rule())) return SystemClass::LTV;
    return SystemClass::NL;
}

SwitchedTrajectory simulate_switched(const SwitchedLinearSystem& sys, const Eigen::VectorXd& x0,
                                     const InputSignal& u, double t_span, double dt) {
    const int n = sys.state_dim();
    if (x0.size() != n)
        throw std::invalid_argument("simulate_switched: x0 dimension mismatch");
    if (!(dt > 0.0) || !std::isfinite(dt))
        throw std::invalid_argument("simulate_switched: dt must be finite and > 0");
    if (!(t_span > 0.0) || !std::isfinite(t_span))
        throw std::invalid_argument("simulate_switched: t_span must be finite and > 0");
    if (std::holds_alternative<Eigen::VectorXd>(u) &&
        std::get<Eigen::VectorXd>(u).size() != sys.input_dim())
        throw std::invalid_argument("simulate_switched: constant input dimension mismatch");
    if (std::holds_alternative<signals::PeriodicWaveform>(u) && sys.input_dim() != 1)
        throw std::invalid_argument(
            "simulate_switched: waveform input requires a single input channel");

    const std::size_t steps = std::size_t(std::max(1.0, std::round(t_span / dt)));
    const double h = t_span / double(steps);
    const InputEval ueval{&u, sys.input_dim()};
    const int n_modes = int(sys.modes().size());

    const auto* level = std::get_if<LevelCrossingRule>(&sys.rule());
    const auto* sched = std::get_if<ScheduleRule>(&sys.rule());

    SwitchedTrajectory traj;
    traj.t.reserve(steps + 1);
    traj.x.reserve(steps + 1);
    traj.mode.reserve(steps + 1);
    if (level) traj.band_used = level->band;

    Eigen::VectorXd x = x0;
    int active = 0;
    std::size_t next_sched = 0;
    while (sched && next_sched < sched->times.size() && sched->times[next_sched] <= 0.0)
        ++next_sched; // only instants inside (0, t_span] can fire
    double g_scale = level ? std::max(std::abs(x[level->j] - level->c), 1e-30) : 0.0;
    int last_sign = level ? sgn(x[level->j] - level->c) : 0;
    bool armed = level && last_sign != 0 &&
                 (level->band == 0.0 || std::abs(x[level->j] - level->c) > level->band);
    int stalled_events = 0;

    traj.t.push_back(0.0);
    traj.x.push_back(x);
    traj.mode.push_back(active);

    for (std::size_t jstep = 0; jstep < steps; ++jstep) {
        const double t0 = double(jstep) * h;
        const double t1 = double(jstep + 1) * h;
        double t_cur = t0;

        while (t_cur < t1) {
            double h_sub = t1 - t_cur;
            bool sched_hit = false;
            if (sched && next_sched < sched->times.size()) {
                const double ts = sched->times[next_sched];
                if (ts > t_cur && ts <= t_cur + h_sub) {
                    h_sub = ts - t_cur;
                    sched_hit = true;
                }
            }

            Eigen::VectorXd x_new =
                rk4_step(sys.modes()[std::size_t(active)], ueval, t_cur, h_sub, x);
            if (!x_new.allFinite())
                throw SimulationError("simulate_switched: trajectory diverged near t=" +
                                      std::to_string(t_cur));

            if (level) {
                const double g_new = x_new[level->j] - level->c;
                g_scale = std::max(g_scale, std::abs(g_new));
                if (!armed && std::abs(g_new) > level->band) {
                    armed = true;
                    last_sign = sgn(g_new);
                }
                if (armed && last_sign != 0 && sgn(g_new) == -last_sign) {
                    // locate the crossing by bisection on the substep length
                    const double tol_g = 1e-12 * g_scale;
                    double lo = 0.0, hi = h_sub;
                    Eigen::VectorXd x_evt = x_new;
                    if (std::abs(x[level->j] - level->c) <= tol_g) {
                        hi = 0.0;
                        x_evt = x;
                    } else {
                        for (int iter = 0; iter < 200; ++iter) {
                            const double mid = 0.5 * (lo + hi);
                            const Eigen::VectorXd xm =
                                rk4_step(sys.modes()[std::size_t(active)], ueval, t_cur, mid, x);
                            const double gm = xm[level->j] - level->c;
                            if (std::abs(gm) <= tol_g) {
                                hi = mid;
                                x_evt = xm;
                                break;
                            }
                            if (sgn(gm) == last_sign) {
                                lo = mid;
                            } else {
                                hi = mid;
                                x_evt = xm;
                            }
                            if (hi - lo <= 1e-16 * h) break;
                        }
                    }
                    const double t_evt = t_cur + hi;
                    traj.switches.push_back({t_evt, -last_sign});
                    if (traj.switches.size() > kMaxSwitches)
                        throw SimulationError("chattering detected: more than 1000000 switches");
                    stalled_events = hi == 0.0 ? stalled_events + 1 : 0;
                    if (stalled_events > 100)
                        throw SimulationError(
                            "chattering detected: repeated switching without time advance");
                    active = (active + 1) % n_modes;
                    x = x_evt;
                    t_cur = t_evt;
                    last_sign = -last_sign;
                    armed = level->band == 0.0;
                    continue;
                }
                last_sign = sgn(g_new) != 0 ? sgn(g_new) : last_sign;
            }

            x = x_new;
            t_cur += h_sub;
            stalled_events = 0;
            if (sched_hit) {
                traj.switches.push_back({sched->times[next_sched], 0});
                if (traj.switches.size() > kMaxSwitches)
                    throw SimulationError("chattering detected: more than 1000000 switches");
                active = (active + 1) % n_modes;
                ++next_sched;
            }
        }

        traj.t.push_back(t1);
        traj.x.push_back(x);
        traj.mode.push_back(active);
    }
    return traj;
}

} // namespace nlcirc::switched
