#pragma once

#include <cstddef>
#include <span>

namespace nlcirc::kernels {

// Hot loops shared by the modules. Every parallel kernel distributes work over
// independent elements only (one output slot per index, fixed inner summation
// order), so its results are bitwise identical to the serial reference for any
// thread count. The serial references are kept for tests and for bench_kernels.

/// True when the library was built with OpenMP.
bool openmp_enabled();

/// Worker count an OpenMP parallel region would use (1 without OpenMP).
int max_threads();

/// Run fn(j) for j in [0, n), distributed across threads.
template <class Fn>
void parallel_for(std::ptrdiff_t n, Fn&& fn) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t j = 0; j < n; ++j) fn(j);
}

/// Serial reference for parallel_for.
template <class Fn>
void serial_for(std::ptrdiff_t n, Fn&& fn) {
    for (std::ptrdiff_t j = 0; j < n; ++j) fn(j);
}

/// Square-wave Fourier partial sum, (4/pi) * sum over the first n_odd_terms
/// odd harmonics of sin(n*omega*(t - t1))/n, sampled at out.size() points
/// t_j = j*T/out.size(). Parallel over samples.
void square_wave_samples(double t1, double T, int n_odd_terms, std::span<double> out);

/// Serial reference for square_wave_samples.
void square_wave_samples_serial(double t1, double T, int n_odd_terms, std::span<double> out);

} // namespace nlcirc::kernels
