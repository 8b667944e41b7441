#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace nlcirc::signals {

/// One period of a uniformly sampled periodic signal. Sample j sits at
/// t_j = j*T/N; the waveform is immutable after construction.
class PeriodicWaveform {
public:
    static constexpr std::size_t kMinSamples = 8;

    PeriodicWaveform(double T, std::vector<double> samples);

    /// Sample fn(t_j) at N uniform points over one period.
    static PeriodicWaveform from_function(double T, std::size_t N,
                                          const std::function<double(double)>& fn);

    double period() const { return T_; }
    double omega() const;
    double dt() const { return T_ / double(samples_.size()); }
    std::size_t size() const { return samples_.size(); }
    double operator[](std::size_t j) const { return samples_[j]; }
    std::span<const double> samples() const { return samples_; }
    double time_at(std::size_t j) const { return double(j) * dt(); }

    /// Periodic linear interpolation at arbitrary t.
    double interp(double t) const;

    double max_abs() const;

private:
    double T_;
    std::vector<double> samples_;
};

/// Continuous-time periodic source: a period plus an evaluator, so
/// integrators can sample it at stage midpoints and event times. Sampled
/// waveforms become drives through linear interpolation (accuracy then
/// limited by the sample grid); analytic factories keep full solver order.
class Drive {
public:
    Drive(double T, std::function<double(double)> eval);

    static Drive sine(double amplitude, double T, double phase = 0.0);
    /// Finite harmonic mix: sum_k a_k*sin(2*pi*k*t/T) + b_k*cos(2*pi*k*t/T),
    /// with terms given as (k, a_k, b_k).
    static Drive harmonics(double T, std::vector<std::array<double, 3>> terms);
    static Drive from_waveform(PeriodicWaveform w);

    double period() const { return T_; }
    double operator()(double t) const { return eval_(t); }

private:
    double T_;
    std::function<double(double)> eval_;
};

enum class Direction { rising, falling };

struct ZeroCrossing {
    double t;       // in [0, T)
    Direction dir;  // rising = - to +
};

/// Zerocrossing times of one period, strictly increasing, directions
/// alternating. `degenerate` marks an identically zero waveform.
struct ZeroCrossingSet {
    std::vector<ZeroCrossing> crossings;
    bool degenerate = false;

    std::optional<double> first_rising() const;
};

enum class LoopClass { inductive, capacitive, resistive };

/// Signed loop area and mean power of a (i, v) cycle.
struct LoopMetrics {
    double signed_area;     // contour integral of v di over one period
    double avg_power;       // mean of v*i over the sample grid
    double area_tolerance;  // |area| at or below this classifies resistive
    LoopClass classification;
};

/// Truncated Fourier synthesis of a unit square wave with rising crossing at
/// t1: (4/pi) * sum_{odd n} sin(n*omega*(t - t1))/n, first n_harmonics odd
/// terms, N samples over one period T.
PeriodicWaveform synth_square(double t1, double T, int n_harmonics, std::size_t N);

/// Locate zerocrossings by linear interpolation between samples. Samples that
/// are exactly zero attach to the following interval; zero runs that return
/// to the same sign do not count as crossings.
ZeroCrossingSet find_zerocrossings(const PeriodicWaveform& w);

/// Loop metrics of the cycle (i(t), v(t)); both waveforms must share period
/// and sample count. Signed area is the cyclic trapezoidal contour integral
/// of v di (positive = clockwise = inductive).
LoopMetrics loop_metrics(const PeriodicWaveform& i, const PeriodicWaveform& v, double tol);

/// Same with the default tolerance 1e-9 * max|v| * max|i|.
LoopMetrics loop_metrics(const PeriodicWaveform& i, const PeriodicWaveform& v);

} // namespace nlcirc::signals
