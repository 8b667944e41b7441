#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace nlcirc::poly {

// Coefficients are ascending in the variable: c[0] + c[1]*x + c[2]*x^2 + ...

inline double eval(std::span<const double> c, double x) {
    double acc = 0.0;
    for (std::size_t k = c.size(); k-- > 0;) acc = acc * x + c[k];
    return acc;
}

inline std::complex<double> eval(std::span<const double> c, std::complex<double> x) {
    std::complex<double> acc = 0.0;
    for (std::size_t k = c.size(); k-- > 0;) acc = acc * x + c[k];
    return acc;
}

/// Antiderivative with integration constant c0.
inline std::vector<double> antiderivative(std::span<const double> c, double c0 = 0.0) {
    std::vector<double> out(c.size() + 1);
    out[0] = c0;
    for (std::size_t k = 0; k < c.size(); ++k) out[k + 1] = c[k] / double(k + 1);
    return out;
}

/// Degree after trimming exactly-zero leading coefficients; -1 for the zero polynomial.
inline int degree(std::span<const double> c) {
    for (std::size_t k = c.size(); k-- > 0;)
        if (c[k] != 0.0) return int(k);
    return -1;
}

inline std::vector<double> add(std::span<const double> a, std::span<const double> b) {
    std::vector<double> out(std::max(a.size(), b.size()), 0.0);
    for (std::size_t k = 0; k < a.size(); ++k) out[k] += a[k];
    for (std::size_t k = 0; k < b.size(); ++k) out[k] += b[k];
    return out;
}

inline std::vector<double> mul(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty()) return {};
    std::vector<double> out(a.size() + b.size() - 1, 0.0);
    for (std::size_t j = 0; j < a.size(); ++j)
        for (std::size_t k = 0; k < b.size(); ++k) out[j + k] += a[j] * b[k];
    return out;
}

} // namespace nlcirc::poly
