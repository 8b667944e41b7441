#include "nlcirc/fields.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace nlcirc::fields {

CylindricalConductor::CylindricalConductor(double length_, double radius_, double v_, double i_)
    : length(length_), radius(radius_), v(v_), i(i_) {
    if (!(length > 0.0) || !std::isfinite(length))
        throw std::invalid_argument("CylindricalConductor: length must be finite and > 0");
    if (!(radius > 0.0) || !std::isfinite(radius))
        throw std::invalid_argument("CylindricalConductor: radius must be finite and > 0");
    if (!std::isfinite(v) || !std::isfinite(i))
        throw std::invalid_argument("CylindricalConductor: v and i must be finite");
}

SurfacePower poynting_inflow(const CylindricalConductor& c) {
    const double two_pi_r = 2.0 * std::numbers::pi * c.radius;
    SurfacePower p;
    p.E = c.v / c.length;
    p.H = c.i / two_pi_r;
    p.S = p.E * p.H;
    p.surface = two_pi_r * c.length;
    p.inflow = p.surface * p.S;
    return p;
}

} // namespace nlcirc::fields
