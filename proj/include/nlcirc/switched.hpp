#pragma once

#include <Eigen/Dense>
#include <variant>
#include <vector>

#include "nlcirc/signals.hpp"

namespace nlcirc::switched {

/// One linear mode dx/dt = A x + B u.
struct Mode {
    Eigen::MatrixXd A;
    Eigen::MatrixXd B;
};

/// No switching: the first mode stays active.
struct NoRule {};

/// Mode toggles at the prescribed instants (strictly increasing).
struct ScheduleRule {
    std::vector<double> times;
};

/// Mode toggles whenever state component j crosses level c with a strict sign
/// change of x_j - c. A nonzero band re-arms the detector only after
/// |x_j - c| exceeds the band, suppressing chattering; band 0 keeps plain
/// strict-sign-change semantics.
struct LevelCrossingRule {
    int j;
    double c;
    double band = 0.0;
};

using SwitchingRule = std::variant<NoRule, ScheduleRule, LevelCrossingRule>;

class SwitchedLinearSystem {
  public:
    SwitchedLinearSystem(std::vector<Mode> modes, SwitchingRule rule);

    int state_dim() const { return n_; }
    int input_dim() const { return m_; }
    const std::vector<Mode>& modes() const { return modes_; }
    const SwitchingRule& rule() const { return rule_; }

  private:
    std::vector<Mode> modes_;
    SwitchingRule rule_;
    int n_;
    int m_;
};

enum class SystemClass { LTI, LTV, NL };

/// Fixed mode -> LTI; prescribed switching times -> LTV; state-dependent
/// (level-crossing) switching -> NL.
SystemClass classify_system(const SwitchedLinearSystem& sys);

/// Input signal: absent (zero input), a constant vector of dimension m, or a
/// periodic waveform (single-channel input, m = 1).
struct ZeroInput {};
using InputSignal = std::variant<ZeroInput, Eigen::VectorXd, signals::PeriodicWaveform>;

struct SwitchEvent {
    double t;
    int direction; // +1 upward level crossing, -1 downward, 0 scheduled
};

struct SwitchedTrajectory {
    std::vector<double> t;             // uniform grid, t.front() = 0
    std::vector<Eigen::VectorXd> x;    // state at each grid point
    std::vector<int> mode;             // active mode at each grid point
    std::vector<SwitchEvent> switches; // located events, increasing in t
    double band_used = 0.0;            // level-rule hysteresis band in effect
};

/// Integrates the switched system over [0, t_span] with fixed-step RK4.
/// Level crossings are located by bisecting the step; scheduled switches split
/// the step at the prescribed instant exactly. The state is continuous across
/// switches; only the active mode changes. Throws SimulationError
/// ("chattering detected") past 10^6 switches.
SwitchedTrajectory simulate_switched(const SwitchedLinearSystem& sys, const Eigen::VectorXd& x0,
                                     const InputSignal& u, double t_span, double dt);

} // namespace nlcirc::switched
