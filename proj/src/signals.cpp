#include "nlcirc/signals.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "nlcirc/kernels.hpp"

namespace nlcirc::signals {

PeriodicWaveform::PeriodicWaveform(double T, std::vector<double> samples)
    : T_(T), samples_(std::move(samples)) {
    if (!(T > 0.0) || !std::isfinite(T))
        throw std::invalid_argument("PeriodicWaveform: period T must be finite and > 0");
    if (samples_.size() < kMinSamples)
        throw std::invalid_argument("PeriodicWaveform: need at least 8 samples");
    for (double y : samples_)
        if (!std::isfinite(y))
            throw std::invalid_argument("PeriodicWaveform: samples must be finite");
}

PeriodicWaveform PeriodicWaveform::from_function(double T, std::size_t N,
                                                 const std::function<double(double)>& fn) {
    if (!(T > 0.0) || !std::isfinite(T))
        throw std::invalid_argument("PeriodicWaveform: period T must be finite and > 0");
    if (N < kMinSamples)
        throw std::invalid_argument("PeriodicWaveform: need at least 8 samples");
    std::vector<double> y(N);
    const double h = T / double(N);
    for (std::size_t j = 0; j < N; ++j) y[j] = fn(double(j) * h);
    return PeriodicWaveform(T, std::move(y));
}

double PeriodicWaveform::omega() const { return 2.0 * std::numbers::pi / T_; }

double PeriodicWaveform::interp(double t) const {
    const std::size_t N = samples_.size();
    double u = std::fmod(t, T_);
    if (u < 0.0) u += T_;
    const double pos = u / dt();
    std::size_t j = std::size_t(pos);
    if (j >= N) j = N - 1;
    const double frac = pos - double(j);
    const double a = samples_[j];
    const double b = samples_[(j + 1) % N];
    return a + frac * (b - a);
}

double PeriodicWaveform::max_abs() const {
    double m = 0.0;
    for (double y : samples_) m = std::max(m, std::abs(y));
    return m;
}

Drive::Drive(double T, std::function<double(double)> eval) : T_(T), eval_(std::move(eval)) {
    if (!(T > 0.0) || !std::isfinite(T))
        throw std::invalid_argument("Drive: period T must be finite and > 0");
    if (!eval_) throw std::invalid_argument("Drive: evaluator must be callable");
}

Drive Drive::sine(double amplitude, double T, double phase) {
    const double w = 2.0 * std::numbers::pi / T;
    return Drive(T, [amplitude, w, phase](double t) { return amplitude * std::sin(w * t + phase); });
}

Drive Drive::harmonics(double T, std::vector<std::array<double, 3>> terms) {
    const double w = 2.0 * std::numbers::pi / T;
    return Drive(T, [w, terms = std::move(terms)](double t) {
        double acc = 0.0;
        for (const auto& [k, a, b] : terms)
            acc += a * std::sin(k * w * t) + b * std::cos(k * w * t);
        return acc;
    });
}

Drive Drive::from_waveform(PeriodicWaveform w) {
    const double T = w.period();
    return Drive(T, [w = std::move(w)](double t) { return w.interp(t); });
}

std::optional<double> ZeroCrossingSet::first_rising() const {
    for (const auto& c : crossings)
        if (c.dir == Direction::rising) return c.t;
    return std::nullopt;
}

PeriodicWaveform synth_square(double t1, double T, int n_harmonics, std::size_t N) {
    if (!(T > 0.0) || !std::isfinite(T))
        throw std::invalid_argument("synth_square: period T must be finite and > 0");
    if (!(t1 >= 0.0) || !(t1 < T))
        throw std::invalid_argument("synth_square: t1 must lie in [0, T)");
    if (n_harmonics < 1)
        throw std::invalid_argument("synth_square: n_harmonics must be >= 1");
    if (N < PeriodicWaveform::kMinSamples)
        throw std::invalid_argument("synth_square: need at least 8 samples");
    std::vector<double> y(N);
    kernels::square_wave_samples(t1, T, n_harmonics, y);
    return PeriodicWaveform(T, std::move(y));
}

namespace {

inline int sgn(double x) { return (x > 0.0) - (x < 0.0); }

} // namespace

ZeroCrossingSet find_zerocrossings(const PeriodicWaveform& w) {
    const std::size_t N = w.size();
    const double h = w.dt();
    const double T = w.period();

    std::size_t j0 = N;
    for (std::size_t j = 0; j < N; ++j)
        if (w[j] != 0.0) { j0 = j; break; }
    if (j0 == N) return {.crossings = {}, .degenerate = true};

    ZeroCrossingSet out;
    int prev_sign = sgn(w[j0]);
    std::optional<double> pending;  // time of the first zero sample in a run
    for (std::size_t k = 1; k <= N; ++k) {
        const std::size_t j = (j0 + k) % N;
        const double a = w[j];
        if (a == 0.0) {
            if (!pending) pending = double(j) * h;
            continue;
        }
        const int s = sgn(a);
        if (s != prev_sign) {
            double t;
            if (pending) {
                t = *pending;
            } else {
                const std::size_t jp = (j + N - 1) % N;
                const double yp = w[jp];
                t = std::fmod(double(jp) * h + h * yp / (yp - a), T);
            }
            out.crossings.push_back({t, s > 0 ? Direction::rising : Direction::falling});
            prev_sign = s;
        }
        pending.reset();
    }
    std::sort(out.crossings.begin(), out.crossings.end(),
              [](const ZeroCrossing& a, const ZeroCrossing& b) { return a.t < b.t; });
    return out;
}

LoopMetrics loop_metrics(const PeriodicWaveform& i, const PeriodicWaveform& v, double tol) {
    if (i.size() != v.size() || i.period() != v.period())
        throw std::invalid_argument("loop_metrics: waveforms must share period and sample count");
    if (!(tol >= 0.0))
        throw std::invalid_argument("loop_metrics: tolerance must be >= 0");
    const std::size_t N = i.size();
    double area = 0.0;
    double power = 0.0;
    for (std::size_t j = 0; j < N; ++j) {
        const std::size_t k = (j + 1) % N;
        area += 0.5 * (v[j] + v[k]) * (i[k] - i[j]);
        power += v[j] * i[j];
    }
    power /= double(N);
    LoopClass cls = LoopClass::resistive;
    if (area > tol) cls = LoopClass::inductive;
    else if (area < -tol) cls = LoopClass::capacitive;
    return {.signed_area = area, .avg_power = power, .area_tolerance = tol, .classification = cls};
}

LoopMetrics loop_metrics(const PeriodicWaveform& i, const PeriodicWaveform& v) {
    return loop_metrics(i, v, 1e-9 * i.max_abs() * v.max_abs());
}

} // namespace nlcirc::signals
