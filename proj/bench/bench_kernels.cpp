// Times the OpenMP kernels against their serial reference implementations and
// verifies that both produce bitwise-identical results.

#include <chrono>
#include <cstdio>
#include <cstring>
#include <functional>
#include <vector>

#include "nlcirc/kernels.hpp"
#include "nlcirc/lamp.hpp"
#include "nlcirc/signals.hpp"

namespace {

using clock_type = std::chrono::steady_clock;

double time_ms(const std::function<void()>& fn, int reps) {
    fn(); // warm up
    const auto t0 = clock_type::now();
    for (int r = 0; r < reps; ++r) fn();
    const auto t1 = clock_type::now();
    return std::chrono::duration<double, std::milli>(t1 - t0).count() / reps;
}

void report(const char* name, double serial_ms, double parallel_ms, bool identical) {
    std::printf("%-24s serial %9.3f ms   parallel %9.3f ms   speedup %5.2fx   bitwise %s\n",
                name, serial_ms, parallel_ms, serial_ms / parallel_ms,
                identical ? "identical" : "DIFFERENT");
}

bool same_bits(const std::vector<double>& a, const std::vector<double>& b) {
    return a.size() == b.size() &&
           std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

} // namespace

int main() {
    std::printf("OpenMP enabled: %s, max threads: %d\n\n",
                nlcirc::kernels::openmp_enabled() ? "yes" : "no",
                nlcirc::kernels::max_threads());

    {
        const double t1 = 0.23, T = 1.0;
        const int terms = 5000;
        const std::size_t N = 16384;
        std::vector<double> par(N), ser(N);
        const double par_ms = time_ms(
            [&] { nlcirc::kernels::square_wave_samples(t1, T, terms, par); }, 3);
        const double ser_ms = time_ms(
            [&] { nlcirc::kernels::square_wave_samples_serial(t1, T, terms, ser); }, 3);
        report("square_wave_samples", ser_ms, par_ms, same_bits(par, ser));
    }

    {
        const nlcirc::lamp::RationalAdmittance Y{{0.0, 0.3}, {1.0, 0.0, 0.7 * 0.3}};
        const double omega = 1.0;
        const int n_max = 2000001;
        std::vector<double> par, ser;
        const double par_ms =
            time_ms([&] { par = nlcirc::lamp::admittance_scan(Y, omega, n_max); }, 3);
        const double ser_ms =
            time_ms([&] { ser = nlcirc::lamp::admittance_scan_serial(Y, omega, n_max); }, 3);
        report("admittance_scan", ser_ms, par_ms, same_bits(par, ser));
    }

    {
        const nlcirc::lamp::SeriesBallast ballast(0.5, 0.2);
        const nlcirc::lamp::LampModel lamp = nlcirc::lamp::HardlimiterLamp(1.0);
        const auto xi = nlcirc::signals::Drive::sine(1.0, 1.0);
        const std::vector<double> U{4.0, 6.0, 8.0, 10.0, 12.0, 14.0, 16.0, 18.0};
        nlcirc::lamp::SolverOptions opts;
        opts.dt = 1.0 / 1024.0;
        std::vector<nlcirc::lamp::SweepRow> par, ser;
        const double par_ms = time_ms(
            [&] { par = nlcirc::lamp::zerocrossing_sweep(ballast, lamp, xi, U, opts, true); }, 1);
        const double ser_ms = time_ms(
            [&] { ser = nlcirc::lamp::zerocrossing_sweep(ballast, lamp, xi, U, opts, false); }, 1);
        bool identical = par.size() == ser.size();
        for (std::size_t k = 0; identical && k < par.size(); ++k) {
            identical = std::memcmp(&par[k].t1, &ser[k].t1, sizeof(double)) == 0 &&
                        std::memcmp(&par[k].P, &ser[k].P, sizeof(double)) == 0;
        }
        report("zerocrossing_sweep", ser_ms, par_ms, identical);
    }

    return 0;
}
