#include "doctest.h"

#include <cstring>
#include <vector>

#include "nlcirc/kernels.hpp"
#include "nlcirc/lamp.hpp"
#include "nlcirc/signals.hpp"

using namespace nlcirc;

namespace {

bool bitwise_equal(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) return false;
    if (a.empty()) return true;
    return std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

} // namespace

TEST_CASE("thread introspection is consistent") {
    CHECK(kernels::max_threads() >= 1);
    if (!kernels::openmp_enabled()) CHECK(kernels::max_threads() == 1);
}

TEST_CASE("parallel_for covers every index exactly once") {
    const std::ptrdiff_t n = 4097;
    std::vector<double> out(std::size_t(n), 0.0);
    kernels::parallel_for(n, [&](std::ptrdiff_t j) { out[std::size_t(j)] += double(j) + 1.0; });
    for (std::ptrdiff_t j = 0; j < n; ++j) CHECK(out[std::size_t(j)] == double(j) + 1.0);
}

TEST_CASE("square-wave sampling is bitwise equal to the serial reference") {
    const std::size_t N = 4097;
    std::vector<double> par(N, 0.0), ser(N, 0.0);
    kernels::square_wave_samples(0.2345, 1.5, 313, par);
    kernels::square_wave_samples_serial(0.2345, 1.5, 313, ser);
    CHECK(bitwise_equal(par, ser));
}

TEST_CASE("admittance scan is bitwise equal to the serial reference") {
    lamp::RationalAdmittance Y{{0.0, 0.3}, {1.0, 0.0, 0.21}};
    auto par = lamp::admittance_scan(Y, 2.0, 20001);
    auto ser = lamp::admittance_scan_serial(Y, 2.0, 20001);
    CHECK(par.size() == 10001);
    CHECK(bitwise_equal(par, ser));
}

TEST_CASE("steady-state sweep is bitwise equal to the serial reference") {
    lamp::SeriesBallast ballast(0.5, 0.2);
    lamp::LampModel model = lamp::HardlimiterLamp(1.0);
    auto xi = signals::Drive::sine(1.0, 1.0);
    std::vector<double> U{3.0, 5.0, 8.0};
    lamp::SolverOptions opts;
    opts.dt = 1.0 / 512;
    auto par = lamp::zerocrossing_sweep(ballast, model, xi, U, opts, true);
    auto ser = lamp::zerocrossing_sweep(ballast, model, xi, U, opts, false);
    REQUIRE(par.size() == ser.size());
    for (std::size_t k = 0; k < par.size(); ++k) {
        CHECK(par[k].ok == ser[k].ok);
        CHECK(std::memcmp(&par[k].t1, &ser[k].t1, sizeof(double)) == 0);
        CHECK(std::memcmp(&par[k].P, &ser[k].P, sizeof(double)) == 0);
        CHECK(std::memcmp(&par[k].P_over_U2, &ser[k].P_over_U2, sizeof(double)) == 0);
    }
}
