#pragma once

#include <memory>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "nlcirc/signals.hpp"

namespace nlcirc::powerlaw {

/// Resistive element with v = D * |i|^alpha * sign(i). The odd extension
/// makes the characteristic well defined for currents of either sign.
class PowerLawElement {
  public:
    PowerLawElement(double alpha, double D);

    /// Element through a given point: D chosen so that v(i_ref) = v_ref.
    /// Requires i_ref > 0 and v_ref > 0.
    static PowerLawElement from_point(double alpha, double i_ref, double v_ref);

    double alpha() const { return alpha_; }
    double D() const { return D_; }

  private:
    double alpha_;
    double D_;
};

/// v(i) = D |i|^alpha sign(i).
double element_v(const PowerLawElement& e, double i);

/// Inverse characteristic: i(v) = (|v|/D)^(1/alpha) sign(v).
double element_i(const PowerLawElement& e, double v);

/// Two-branch hysteresis element: the rising branch (di/dt > 0) follows
/// (alpha1, D1), the falling branch (alpha2, D2), both odd-extended. The
/// branches cross at the return point where the loop closes.
struct EyeElement {
    double alpha1;
    double D1;
    double alpha2;
    double D2;

    EyeElement(double alpha1_, double D1_, double alpha2_, double D2_);

    double branch_v(double i, bool rising) const;
};

/// Crossing point (i_r, v_r) of the two branches for i > 0:
/// i_r = (D2/D1)^(1/(alpha1-alpha2)), v_r = D1 * i_r^alpha1.
/// Throws std::invalid_argument("...branches parallel...") when alpha1 == alpha2.
std::pair<double, double> return_point(const EyeElement& e);

/// Voltage response to a periodic current drive. Each sample uses the branch
/// selected by the sign of di/dt (central difference); where di/dt vanishes
/// the previously active branch is held.
signals::PeriodicWaveform eye_v(const EyeElement& e, const signals::PeriodicWaveform& i);

/// Signed area of the closed lobe between the branches over 0 <= i <= i_r,
/// traversed rising-then-falling: v_r * i_r * (1/(alpha1+1) - 1/(alpha2+1)).
/// Positive when alpha2 > alpha1 (inductive orientation), negative when
/// alpha1 > alpha2. Degenerate identical branches give 0.
double eye_loop_area(const EyeElement& e);

/// Two-terminal network of power-law elements. Branches connect node indices;
/// a branch may hold a nested network, itself seen as a two-terminal element.
/// Nodes `plus` and `minus` form the input pair.
class OnePortNetwork {
  public:
    struct Branch {
        int a;
        int b;
        std::optional<PowerLawElement> element;
        std::shared_ptr<const OnePortNetwork> sub;
    };

    OnePortNetwork(int node_count, int plus, int minus);

    void add_element(int a, int b, const PowerLawElement& e);
    void add_network(int a, int b, OnePortNetwork sub);

    int node_count() const { return node_count_; }
    int plus() const { return plus_; }
    int minus() const { return minus_; }
    const std::vector<Branch>& branches() const { return branches_; }

  private:
    int node_count_;
    int plus_;
    int minus_;
    std::vector<Branch> branches_;
};

struct CurrentDrive {
    double I;
};

struct VoltageDrive {
    double V;
};

using DcDrive = std::variant<CurrentDrive, VoltageDrive>;

struct DcSolution {
    std::vector<double> node_voltages;   // top-level nodes, minus at 0 V
    std::vector<double> branch_currents; // top-level branches, a -> b positive
    double I_in;
    double V_in;
    int iterations;
    double residual;
};

/// DC operating point by damped Newton iteration on nodal current balance.
/// Nested networks are flattened first. Throws std::invalid_argument for an
/// invalid network (input pair not connected, empty) and SimulationError when
/// Newton fails to converge.
DcSolution solve_dc(const OnePortNetwork& net, const DcDrive& drive);

/// Common exponent of every leaf element, or nullopt when exponents differ.
std::optional<double> uniform_alpha(const OnePortNetwork& net);

/// Input coefficient D_eff = V_in at I = 1 for a network whose leaves all
/// share one exponent; the input then obeys V(I) = D_eff * I^alpha. Throws
/// std::invalid_argument("degree preservation not applicable...") for mixed
/// exponents. The one-argument form reads alpha off the leaves.
double effective_coefficient(const OnePortNetwork& net, double alpha);
double effective_coefficient(const OnePortNetwork& net);

/// Self-similar expansion: depth 0 returns the network unchanged; each further
/// level replaces every leaf element by a copy of the original network whose
/// leaves all carry that element's coefficient. Requires uniform exponent.
OnePortNetwork fractal_expand(const OnePortNetwork& net, int depth);

struct SuperpositionReport {
    double i_combined;          // input current of the node-merged network
    double i_sum;               // i_A + i_B from separate solves
    double relative_deviation;  // |i_combined - i_sum| / |i_sum|
    double worst_intermediacy;  // worst relative excursion of a merged node
                                // voltage outside the two separate solutions
    bool intermediate;          // worst_intermediacy <= 1e-9
};

/// Compares the voltage-driven input current of two same-topology networks
/// merged node by node against the sum of their separate input currents.
/// Throws std::invalid_argument when the topologies differ.
SuperpositionReport approximate_superposition(const OnePortNetwork& a, const OnePortNetwork& b,
                                              double V_in);

} // namespace nlcirc::powerlaw
