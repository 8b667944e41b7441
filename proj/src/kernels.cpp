#include "nlcirc/kernels.hpp"

#include <cmath>
#include <numbers>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace nlcirc::kernels {

bool openmp_enabled() {
#ifdef _OPENMP
    return true;
#else
    return false;
#endif
}

int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

namespace {

// One sample of the partial sum; harmonics are summed in fixed ascending
// order so the result does not depend on how samples are distributed.
inline double square_wave_point(double theta, int n_odd_terms) {
    double acc = 0.0;
    for (int k = 0; k < n_odd_terms; ++k) {
        const double n = double(2 * k + 1);
        acc += std::sin(n * theta) / n;
    }
    return acc * (4.0 / std::numbers::pi);
}

} // namespace

void square_wave_samples(double t1, double T, int n_odd_terms, std::span<double> out) {
    const double omega = 2.0 * std::numbers::pi / T;
    const double dt = T / double(out.size());
    parallel_for(std::ptrdiff_t(out.size()), [&](std::ptrdiff_t j) {
        out[std::size_t(j)] = square_wave_point(omega * (double(j) * dt - t1), n_odd_terms);
    });
}

void square_wave_samples_serial(double t1, double T, int n_odd_terms, std::span<double> out) {
    const double omega = 2.0 * std::numbers::pi / T;
    const double dt = T / double(out.size());
    serial_for(std::ptrdiff_t(out.size()), [&](std::ptrdiff_t j) {
        out[std::size_t(j)] = square_wave_point(omega * (double(j) * dt - t1), n_odd_terms);
    });
}

} // namespace nlcirc::kernels
