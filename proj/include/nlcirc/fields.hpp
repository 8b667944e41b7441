#pragma once

namespace nlcirc::fields {

/// Cylindrical wire segment carrying current i with voltage drop v along it.
struct CylindricalConductor {
    double length;  // meters, > 0
    double radius;  // meters, > 0
    double v;       // volts
    double i;       // amperes

    CylindricalConductor(double length, double radius, double v, double i);
};

/// Field quantities on the lateral surface and the resulting power inflow.
struct SurfacePower {
    double E;        // axial electric field, v / length
    double H;        // circumferential magnetic field, i / (2*pi*radius)
    double S;        // Poynting magnitude, E * H
    double surface;  // lateral area, 2*pi*radius*length
    double inflow;   // surface * S; equals v*i up to rounding
};

/// Evaluate E, H, S and the lateral-surface power inflow. The product
/// surface * S is computed through the field quantities, not collapsed to
/// v*i, so the algebraic identity stays observable.
SurfacePower poynting_inflow(const CylindricalConductor& c);

} // namespace nlcirc::fields
