#include "nlcirc/powerlaw.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>
#include <string>

#include "nlcirc/errors.hpp"

namespace nlcirc::powerlaw {

namespace {

inline double sgn(double x) { return (x > 0.0) - (x < 0.0); }

void check_exponent(double alpha, const char* who) {
    if (!(alpha > 0.0) || !std::isfinite(alpha))
        throw std::invalid_argument(std::string(who) + ": exponent alpha must be finite and > 0");
}

void check_coefficient(double D, const char* who) {
    if (!(D > 0.0) || !std::isfinite(D))
        throw std::invalid_argument(std::string(who) + ": coefficient D must be finite and > 0");
}

} // namespace

// ============================================================================
// Elements
// ============================================================================

PowerLawElement::PowerLawElement(double alpha, double D) : alpha_(alpha), D_(D) {
    check_exponent(alpha, "PowerLawElement");
    check_coefficient(D, "PowerLawElement");
}

PowerLawElement PowerLawElement::from_point(double alpha, double i_ref, double v_ref) {
    check_exponent(alpha, "PowerLawElement::from_point");
    if (!(i_ref > 0.0) || !std::isfinite(i_ref) || !(v_ref > 0.0) || !std::isfinite(v_ref))
        throw std::invalid_argument(
            "PowerLawElement::from_point: reference point must be finite and > 0");
    return PowerLawElement(alpha, v_ref / std::pow(i_ref, alpha));
}

double element_v(const PowerLawElement& e, double i) {
    return e.D() * std::pow(std::abs(i), e.alpha()) * sgn(i);
}

double element_i(const PowerLawElement& e, double v) {
    return std::pow(std::abs(v) / e.D(), 1.0 / e.alpha()) * sgn(v);
}

EyeElement::EyeElement(double alpha1_, double D1_, double alpha2_, double D2_)
    : alpha1(alpha1_), D1(D1_), alpha2(alpha2_), D2(D2_) {
    check_exponent(alpha1, "EyeElement");
    check_coefficient(D1, "EyeElement");
    check_exponent(alpha2, "EyeElement");
    check_coefficient(D2, "EyeElement");
}

double EyeElement::branch_v(double i, bool rising) const {
    const double a = rising ? alpha1 : alpha2;
    const double d = rising ? D1 : D2;
    return d * std::pow(std::abs(i), a) * sgn(i);
}

std::pair<double, double> return_point(const EyeElement& e) {
    if (e.alpha1 == e.alpha2)
        throw std::invalid_argument(
            "return_point: branches parallel (alpha1 == alpha2 has no finite crossing)");
    const double i_r = std::pow(e.D2 / e.D1, 1.0 / (e.alpha1 - e.alpha2));
    const double v_r = e.D1 * std::pow(i_r, e.alpha1);
    return {i_r, v_r};
}

signals::PeriodicWaveform eye_v(const EyeElement& e, const signals::PeriodicWaveform& i) {
    const std::size_t N = i.size();
    // branch selector: sign of d|i|/dt = sign(i * di/dt); on i > 0 this is the
    // plain sign of di/dt, and the odd extension keeps v(-i(t)) = -v(i(t))
    std::vector<double> d(N);
    for (std::size_t j = 0; j < N; ++j)
        d[j] = i[j] * (i[(j + 1) % N] - i[(j + N - 1) % N]);

    bool rising = true;
    for (std::size_t j = N; j-- > 0;) {
        if (d[j] != 0.0) {
            rising = d[j] > 0.0;
            break;
        }
    }
    std::vector<double> v(N);
    for (std::size_t j = 0; j < N; ++j) {
        if (d[j] != 0.0) rising = d[j] > 0.0;
        v[j] = e.branch_v(i[j], rising);
    }
    return signals::PeriodicWaveform(i.period(), std::move(v));
}

double eye_loop_area(const EyeElement& e) {
    if (e.alpha1 == e.alpha2 && e.D1 == e.D2) return 0.0;
    const auto [i_r, v_r] = return_point(e);
    return v_r * i_r * (1.0 / (e.alpha1 + 1.0) - 1.0 / (e.alpha2 + 1.0));
}

// ============================================================================
// Networks
// ============================================================================

OnePortNetwork::OnePortNetwork(int node_count, int plus, int minus)
    : node_count_(node_count), plus_(plus), minus_(minus) {
    if (node_count < 2) throw std::invalid_argument("OnePortNetwork: need at least 2 nodes");
    if (plus < 0 || plus >= node_count || minus < 0 || minus >= node_count)
        throw std::invalid_argument("OnePortNetwork: input pair out of node range");
    if (plus == minus)
        throw std::invalid_argument("OnePortNetwork: input pair must be two distinct nodes");
}

void OnePortNetwork::add_element(int a, int b, const PowerLawElement& e) {
    if (a < 0 || a >= node_count_ || b < 0 || b >= node_count_)
        throw std::invalid_argument("OnePortNetwork: branch node out of range");
    if (a == b) throw std::invalid_argument("OnePortNetwork: branch self-loops are not allowed");
    branches_.push_back(Branch{a, b, e, nullptr});
}

void OnePortNetwork::add_network(int a, int b, OnePortNetwork sub) {
    if (a < 0 || a >= node_count_ || b < 0 || b >= node_count_)
        throw std::invalid_argument("OnePortNetwork: branch node out of range");
    if (a == b) throw std::invalid_argument("OnePortNetwork: branch self-loops are not allowed");
    branches_.push_back(
        Branch{a, b, std::nullopt, std::make_shared<const OnePortNetwork>(std::move(sub))});
}

namespace {

struct FlatBranch {
    int a;
    int b;
    double alpha;
    double D;
    int top_index; // top-level branch this leaf descends from
};

struct FlatNetwork {
    int node_count = 0;
    int plus = 0;
    int minus = 0;
    std::vector<FlatBranch> branches;
};

void flatten_into(const OnePortNetwork& net, const std::vector<int>& node_map, int top_index,
                  bool at_top, FlatNetwork& out) {
    for (std::size_t k = 0; k < net.branches().size(); ++k) {
        const auto& br = net.branches()[k];
        const int ti = at_top ? int(k) : top_index;
        if (br.element) {
            out.branches.push_back(
                FlatBranch{node_map[std::size_t(br.a)], node_map[std::size_t(br.b)],
                           br.element->alpha(), br.element->D(), ti});
        } else {
            const auto& sub = *br.sub;
            std::vector<int> sub_map(std::size_t(sub.node_count()), -1);
            sub_map[std::size_t(sub.plus())] = node_map[std::size_t(br.a)];
            sub_map[std::size_t(sub.minus())] = node_map[std::size_t(br.b)];
            for (int n = 0; n < sub.node_count(); ++n) {
                if (sub_map[std::size_t(n)] < 0) sub_map[std::size_t(n)] = out.node_count++;
            }
            flatten_into(sub, sub_map, ti, false, out);
        }
    }
}

FlatNetwork flatten(const OnePortNetwork& net) {
    FlatNetwork flat;
    flat.node_count = net.node_count();
    flat.plus = net.plus();
    flat.minus = net.minus();
    std::vector<int> id(std::size_t(net.node_count()));
    for (int n = 0; n < net.node_count(); ++n) id[std::size_t(n)] = n;
    flatten_into(net, id, -1, true, flat);
    return flat;
}

void validate_connected(const FlatNetwork& flat) {
    if (flat.branches.empty())
        throw std::invalid_argument("solve_dc: network has no branches");
    std::vector<char> seen(std::size_t(flat.node_count), 0);
    std::queue<int> bfs;
    bfs.push(flat.plus);
    seen[std::size_t(flat.plus)] = 1;
    while (!bfs.empty()) {
        const int n = bfs.front();
        bfs.pop();
        for (const auto& br : flat.branches) {
            const int other = br.a == n ? br.b : (br.b == n ? br.a : -1);
            if (other >= 0 && !seen[std::size_t(other)]) {
                seen[std::size_t(other)] = 1;
                bfs.push(other);
            }
        }
    }
    if (!seen[std::size_t(flat.minus)])
        throw std::invalid_argument("solve_dc: input pair is not connected through the network");
    for (int n = 0; n < flat.node_count; ++n) {
        if (!seen[std::size_t(n)])
            throw std::invalid_argument("solve_dc: node " + std::to_string(n) +
                                        " is not connected to the input pair");
    }
}

double branch_current(const FlatBranch& br, double dv) {
    return std::pow(std::abs(dv) / br.D, 1.0 / br.alpha) * sgn(dv);
}

double branch_conductance(const FlatBranch& br, double dv, double v_scale) {
    const double m = std::max(std::abs(dv), 1e-12 * v_scale);
    return std::pow(m / br.D, (1.0 - br.alpha) / br.alpha) / (br.alpha * br.D);
}

struct Unknowns {
    std::vector<int> index; // node -> unknown slot, -1 when pinned
    int count = 0;
};

Unknowns make_unknowns(const FlatNetwork& flat, bool pin_plus) {
    Unknowns u;
    u.index.assign(std::size_t(flat.node_count), -1);
    for (int n = 0; n < flat.node_count; ++n) {
        if (n == flat.minus || (pin_plus && n == flat.plus)) continue;
        u.index[std::size_t(n)] = u.count++;
    }
    return u;
}

Eigen::VectorXd kcl_residual(const FlatNetwork& flat, const Unknowns& u,
                             const std::vector<double>& v, double inj_plus) {
    Eigen::VectorXd r = Eigen::VectorXd::Zero(u.count);
    for (const auto& br : flat.branches) {
        const double i = branch_current(br, v[std::size_t(br.a)] - v[std::size_t(br.b)]);
        const int ia = u.index[std::size_t(br.a)];
        const int ib = u.index[std::size_t(br.b)];
        if (ia >= 0) r[ia] += i;
        if (ib >= 0) r[ib] -= i;
    }
    const int ip = u.index[std::size_t(flat.plus)];
    if (ip >= 0) r[ip] -= inj_plus;
    return r;
}

Eigen::MatrixXd kcl_jacobian(const FlatNetwork& flat, const Unknowns& u,
                             const std::vector<double>& v) {
    double v_scale = 1e-6;
    for (double x : v) v_scale = std::max(v_scale, std::abs(x));
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(u.count, u.count);
    for (const auto& br : flat.branches) {
        const double g =
            branch_conductance(br, v[std::size_t(br.a)] - v[std::size_t(br.b)], v_scale);
        const int ia = u.index[std::size_t(br.a)];
        const int ib = u.index[std::size_t(br.b)];
        if (ia >= 0) J(ia, ia) += g;
        if (ib >= 0) J(ib, ib) += g;
        if (ia >= 0 && ib >= 0) {
            J(ia, ib) -= g;
            J(ib, ia) -= g;
        }
    }
    return J;
}

/// Linear (alpha = 1, conductance 1/D) solve used as the Newton start.
std::vector<double> linear_guess(const FlatNetwork& flat, const Unknowns& u, double v_plus,
                                 double inj_plus, bool pin_plus) {
    std::vector<double> v(std::size_t(flat.node_count), 0.0);
    if (pin_plus) v[std::size_t(flat.plus)] = v_plus;
    if (u.count == 0) return v;
    Eigen::MatrixXd G = Eigen::MatrixXd::Zero(u.count, u.count);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(u.count);
    for (const auto& br : flat.branches) {
        const double g = 1.0 / br.D;
        const int ia = u.index[std::size_t(br.a)];
        const int ib = u.index[std::size_t(br.b)];
        if (ia >= 0) G(ia, ia) += g;
        if (ib >= 0) G(ib, ib) += g;
        if (ia >= 0 && ib >= 0) {
            G(ia, ib) -= g;
            G(ib, ia) -= g;
        }
        // pinned-node contributions move to the right-hand side
        if (ia >= 0 && ib < 0) rhs[ia] += g * v[std::size_t(br.b)];
        if (ib >= 0 && ia < 0) rhs[ib] += g * v[std::size_t(br.a)];
    }
    const int ip = u.index[std::size_t(flat.plus)];
    if (ip >= 0) rhs[ip] += inj_plus;
    const Eigen::VectorXd x = G.partialPivLu().solve(rhs);
    for (int n = 0; n < flat.node_count; ++n) {
        if (u.index[std::size_t(n)] >= 0) v[std::size_t(n)] = x[u.index[std::size_t(n)]];
    }
    return v;
}

double input_current(const FlatNetwork& flat, const std::vector<double>& v) {
    double i_in = 0.0;
    for (const auto& br : flat.branches) {
        const double i = branch_current(br, v[std::size_t(br.a)] - v[std::size_t(br.b)]);
        if (br.a == flat.plus) i_in += i;
        if (br.b == flat.plus) i_in -= i;
    }
    return i_in;
}

} // namespace

DcSolution solve_dc(const OnePortNetwork& net, const DcDrive& drive) {
    const FlatNetwork flat = flatten(net);
    validate_connected(flat);

    const bool voltage_driven = std::holds_alternative<VoltageDrive>(drive);
    const double drive_value =
        voltage_driven ? std::get<VoltageDrive>(drive).V : std::get<CurrentDrive>(drive).I;
    if (!std::isfinite(drive_value))
        throw std::invalid_argument("solve_dc: drive value must be finite");

    const Unknowns u = make_unknowns(flat, voltage_driven);
    const double v_plus = voltage_driven ? drive_value : 0.0;
    const double inj = voltage_driven ? 0.0 : drive_value;

    std::vector<double> v = linear_guess(flat, u, v_plus, inj, voltage_driven);

    auto tolerance = [&](const std::vector<double>& vv) {
        double i_scale;
        if (voltage_driven) {
            i_scale = 1e-12;
            for (const auto& br : flat.branches)
                i_scale = std::max(i_scale, std::abs(branch_current(
                                                br, vv[std::size_t(br.a)] - vv[std::size_t(br.b)])));
        } else {
            i_scale = std::max(std::abs(drive_value), 1e-12);
        }
        return 1e-12 * i_scale;
    };

    Eigen::VectorXd r = kcl_residual(flat, u, v, inj);
    double rn = u.count == 0 ? 0.0 : r.cwiseAbs().maxCoeff();
    int iterations = 0;
    const int max_iter = 200;
    while (rn > tolerance(v)) {
        if (iterations >= max_iter)
            throw SimulationError("solve_dc: Newton did not converge after " +
                                  std::to_string(max_iter) +
                                  " iterations (residual=" + std::to_string(rn) + ")");
        ++iterations;
        const Eigen::MatrixXd J = kcl_jacobian(flat, u, v);
        const Eigen::VectorXd dx = J.partialPivLu().solve(-r);
        if (!dx.allFinite())
            throw SimulationError("solve_dc: singular Jacobian (check network connectivity)");

        double lambda = 1.0;
        bool accepted = false;
        for (int halvings = 0; halvings < 60; ++halvings) {
            std::vector<double> v_try = v;
            for (int n = 0; n < flat.node_count; ++n) {
                const int idx = u.index[std::size_t(n)];
                if (idx >= 0) v_try[std::size_t(n)] = v[std::size_t(n)] + lambda * dx[idx];
            }
            const Eigen::VectorXd r_try = kcl_residual(flat, u, v_try, inj);
            const double rn_try = r_try.cwiseAbs().maxCoeff();
            if (rn_try < rn || rn_try <= tolerance(v_try)) {
                v = std::move(v_try);
                r = r_try;
                rn = rn_try;
                accepted = true;
                break;
            }
            lambda *= 0.5;
        }
        if (!accepted)
            throw SimulationError("solve_dc: Newton stalled (residual=" + std::to_string(rn) +
                                  ")");
    }

    DcSolution sol;
    sol.node_voltages.assign(v.begin(), v.begin() + net.node_count());
    sol.I_in = voltage_driven ? input_current(flat, v) : drive_value;
    sol.V_in = v[std::size_t(flat.plus)];
    sol.iterations = iterations;
    sol.residual = rn;

    sol.branch_currents.assign(net.branches().size(), 0.0);
    for (std::size_t k = 0; k < net.branches().size(); ++k) {
        const auto& top = net.branches()[k];
        const int node_a = top.a;
        for (const auto& br : flat.branches) {
            if (br.top_index != int(k)) continue;
            const double i = branch_current(br, v[std::size_t(br.a)] - v[std::size_t(br.b)]);
            if (br.a == node_a) sol.branch_currents[k] += i;
            if (br.b == node_a) sol.branch_currents[k] -= i;
        }
    }
    return sol;
}

namespace {

void collect_alphas(const OnePortNetwork& net, std::optional<double>& alpha, bool& mixed) {
    for (const auto& br : net.branches()) {
        if (br.element) {
            if (!alpha) {
                alpha = br.element->alpha();
            } else if (*alpha != br.element->alpha()) {
                mixed = true;
            }
        } else {
            collect_alphas(*br.sub, alpha, mixed);
        }
    }
}

OnePortNetwork with_leaf_coefficient(const OnePortNetwork& net, double D) {
    OnePortNetwork out(net.node_count(), net.plus(), net.minus());
    for (const auto& br : net.branches()) {
        if (br.element) {
            out.add_element(br.a, br.b, PowerLawElement(br.element->alpha(), D));
        } else {
            out.add_network(br.a, br.b, with_leaf_coefficient(*br.sub, D));
        }
    }
    return out;
}

OnePortNetwork expand_once(const OnePortNetwork& net, const OnePortNetwork& base) {
    OnePortNetwork out(net.node_count(), net.plus(), net.minus());
    for (const auto& br : net.branches()) {
        if (br.element) {
            out.add_network(br.a, br.b, with_leaf_coefficient(base, br.element->D()));
        } else {
            out.add_network(br.a, br.b, expand_once(*br.sub, base));
        }
    }
    return out;
}

bool same_topology(const OnePortNetwork& a, const OnePortNetwork& b) {
    if (a.node_count() != b.node_count() || a.plus() != b.plus() || a.minus() != b.minus())
        return false;
    if (a.branches().size() != b.branches().size()) return false;
    for (std::size_t k = 0; k < a.branches().size(); ++k) {
        const auto& ba = a.branches()[k];
        const auto& bb = b.branches()[k];
        if (ba.a != bb.a || ba.b != bb.b) return false;
        if (ba.element.has_value() != bb.element.has_value()) return false;
        if (ba.sub && !same_topology(*ba.sub, *bb.sub)) return false;
    }
    return true;
}

} // namespace

std::optional<double> uniform_alpha(const OnePortNetwork& net) {
    std::optional<double> alpha;
    bool mixed = false;
    collect_alphas(net, alpha, mixed);
    if (mixed) return std::nullopt;
    return alpha;
}

double effective_coefficient(const OnePortNetwork& net) {
    const auto alpha = uniform_alpha(net);
    if (!alpha)
        throw std::invalid_argument(
            "effective_coefficient: degree preservation not applicable (leaf exponents differ)");
    return solve_dc(net, CurrentDrive{1.0}).V_in;
}

double effective_coefficient(const OnePortNetwork& net, double alpha) {
    const auto found = uniform_alpha(net);
    if (!found || *found != alpha)
        throw std::invalid_argument(
            "effective_coefficient: degree preservation not applicable (leaf exponents differ "
            "from the requested alpha)");
    return solve_dc(net, CurrentDrive{1.0}).V_in;
}

OnePortNetwork fractal_expand(const OnePortNetwork& net, int depth) {
    if (depth < 0) throw std::invalid_argument("fractal_expand: depth must be >= 0");
    if (!uniform_alpha(net))
        throw std::invalid_argument("fractal_expand: leaf exponents differ");
    OnePortNetwork out = net;
    for (int level = 0; level < depth; ++level) out = expand_once(out, net);
    return out;
}

SuperpositionReport approximate_superposition(const OnePortNetwork& a, const OnePortNetwork& b,
                                              double V_in) {
    if (!same_topology(a, b))
        throw std::invalid_argument(
            "approximate_superposition: networks must share node/branch topology");
    if (!std::isfinite(V_in))
        throw std::invalid_argument("approximate_superposition: V_in must be finite");

    const DcSolution sol_a = solve_dc(a, VoltageDrive{V_in});
    const DcSolution sol_b = solve_dc(b, VoltageDrive{V_in});

    OnePortNetwork merged(a.node_count(), a.plus(), a.minus());
    for (const auto& br : a.branches()) {
        if (br.element) {
            merged.add_element(br.a, br.b, *br.element);
        } else {
            merged.add_network(br.a, br.b, *br.sub);
        }
    }
    for (const auto& br : b.branches()) {
        if (br.element) {
            merged.add_element(br.a, br.b, *br.element);
        } else {
            merged.add_network(br.a, br.b, *br.sub);
        }
    }
    const DcSolution sol_m = solve_dc(merged, VoltageDrive{V_in});

    SuperpositionReport rep;
    rep.i_combined = sol_m.I_in;
    rep.i_sum = sol_a.I_in + sol_b.I_in;
    rep.relative_deviation =
        std::abs(rep.i_combined - rep.i_sum) / std::max(std::abs(rep.i_sum), 1e-300);

    double v_scale = std::abs(V_in);
    for (int n = 0; n < a.node_count(); ++n) {
        v_scale = std::max({v_scale, std::abs(sol_a.node_voltages[std::size_t(n)]),
                            std::abs(sol_b.node_voltages[std::size_t(n)])});
    }
    v_scale = std::max(v_scale, 1e-300);
    rep.worst_intermediacy = 0.0;
    for (int n = 0; n < a.node_count(); ++n) {
        const double va = sol_a.node_voltages[std::size_t(n)];
        const double vb = sol_b.node_voltages[std::size_t(n)];
        const double vm = sol_m.node_voltages[std::size_t(n)];
        const double lo = std::min(va, vb);
        const double hi = std::max(va, vb);
        const double gap = std::max({lo - vm, vm - hi, 0.0});
        rep.worst_intermediacy = std::max(rep.worst_intermediacy, gap / v_scale);
    }
    rep.intermediate = rep.worst_intermediacy <= 1e-9;
    return rep;
}

} // namespace nlcirc::powerlaw
