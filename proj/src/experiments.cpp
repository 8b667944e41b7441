#include "nlcirc/experiments.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>

#include "nlcirc/errors.hpp"
#include "nlcirc/fields.hpp"
#include "nlcirc/io.hpp"
#include "nlcirc/lamp.hpp"
#include "nlcirc/memristive.hpp"
#include "nlcirc/powerlaw.hpp"
#include "nlcirc/signals.hpp"
#include "nlcirc/switched.hpp"

namespace nlcirc::experiments {

namespace fs = std::filesystem;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

[[noreturn]] void missing(const std::string& ctx, const std::string& key) {
    throw std::invalid_argument(ctx + ": missing required key '" + key + "'");
}

const json& require(const json& obj, const std::string& key, const std::string& ctx) {
    if (!obj.is_object() || !obj.contains(key)) missing(ctx, key);
    return obj.at(key);
}

double get_double(const json& obj, const std::string& key, const std::string& ctx) {
    const json& v = require(obj, key, ctx);
    if (!v.is_number()) throw std::invalid_argument(ctx + ": key '" + key + "' must be a number");
    return v.get<double>();
}

double get_double_or(const json& obj, const std::string& key, double fallback) {
    if (!obj.is_object() || !obj.contains(key)) return fallback;
    return obj.at(key).get<double>();
}

int get_int(const json& obj, const std::string& key, const std::string& ctx) {
    const json& v = require(obj, key, ctx);
    if (!v.is_number_integer())
        throw std::invalid_argument(ctx + ": key '" + key + "' must be an integer");
    return v.get<int>();
}

int get_int_or(const json& obj, const std::string& key, int fallback) {
    if (!obj.is_object() || !obj.contains(key)) return fallback;
    return obj.at(key).get<int>();
}

std::string get_str(const json& obj, const std::string& key, const std::string& ctx) {
    const json& v = require(obj, key, ctx);
    if (!v.is_string()) throw std::invalid_argument(ctx + ": key '" + key + "' must be a string");
    return v.get<std::string>();
}

std::vector<double> get_vector(const json& v, const std::string& ctx) {
    if (!v.is_array()) throw std::invalid_argument(ctx + ": expected an array of numbers");
    std::vector<double> out;
    out.reserve(v.size());
    for (const auto& x : v) out.push_back(x.get<double>());
    return out;
}

signals::Drive parse_drive(const json& j, const std::string& ctx) {
    const std::string type = get_str(j, "type", ctx);
    const double T = get_double(j, "T", ctx);
    if (type == "sine") {
        return signals::Drive::sine(get_double(j, "amplitude", ctx), T,
                                    get_double_or(j, "phase", 0.0));
    }
    if (type == "harmonics") {
        const json& terms = require(j, "terms", ctx);
        std::vector<std::array<double, 3>> parsed;
        for (const auto& t : terms) {
            if (!t.is_array() || t.size() != 3)
                throw std::invalid_argument(ctx + ": each harmonics term must be [k, a, b]");
            parsed.push_back({t[0].get<double>(), t[1].get<double>(), t[2].get<double>()});
        }
        return signals::Drive::harmonics(T, parsed);
    }
    throw std::invalid_argument(ctx + ": unknown drive type '" + type + "'");
}

powerlaw::OnePortNetwork parse_network(const json& j, const std::string& ctx) {
    powerlaw::OnePortNetwork net(get_int(j, "nodes", ctx), get_int(j, "plus", ctx),
                                 get_int(j, "minus", ctx));
    const json& branches = require(j, "branches", ctx);
    if (!branches.is_array()) throw std::invalid_argument(ctx + ": 'branches' must be an array");
    for (const auto& br : branches) {
        if (!br.is_array() || br.size() != 3)
            throw std::invalid_argument(ctx + ": each branch must be [a, b, element]");
        const int a = br[0].get<int>();
        const int b = br[1].get<int>();
        const json& el = br[2];
        if (el.contains("net")) {
            net.add_network(a, b, parse_network(el.at("net"), ctx + ".net"));
        } else {
            net.add_element(a, b,
                            powerlaw::PowerLawElement(get_double(el, "alpha", ctx),
                                                      get_double(el, "D", ctx)));
        }
    }
    return net;
}

std::string fmt(double x) { return io::format_g15(x); }

void headline(RunResult& res, const std::string& name, double value) {
    res.headline.push_back(name + " = " + fmt(value));
}

void headline(RunResult& res, const std::string& name, const std::string& value) {
    res.headline.push_back(name + " = " + value);
}

void emit_csv(RunResult& res, const fs::path& out_dir, const std::string& name,
              std::span<const std::string> header,
              const std::vector<std::vector<double>>& columns) {
    io::write_csv(out_dir / name, header, columns);
    res.files.push_back(name);
}

const char* loop_class_name(signals::LoopClass c) {
    switch (c) {
        case signals::LoopClass::inductive: return "inductive";
        case signals::LoopClass::capacitive: return "capacitive";
        default: return "resistive";
    }
}

// ----------------------------------------------------------------------------
// kind handlers
// ----------------------------------------------------------------------------

void run_square(const json& cfg, const fs::path& out, RunResult& res) {
    const std::string ctx = "square config";
    const double t1 = get_double(cfg, "t1", ctx);
    const double T = get_double(cfg, "T", ctx);
    const int n_harmonics = get_int(cfg, "n_harmonics", ctx);
    const int N = get_int_or(cfg, "N", 4096);

    const auto w = signals::synth_square(t1, T, n_harmonics, std::size_t(N));
    const auto zc = signals::find_zerocrossings(w);

    std::vector<double> t(w.size());
    std::vector<double> value(w.size());
    for (std::size_t j = 0; j < w.size(); ++j) {
        t[j] = w.time_at(j);
        value[j] = w[j];
    }
    const std::array<std::string, 2> hdr{"t", "value"};
    emit_csv(res, out, "traces.csv", hdr, {t, value});

    const auto rise = zc.first_rising();
    const double first_rising = rise ? *rise : kNaN;
    const double quarter_value = w.interp(t1 + 0.25 * T);

    res.summary["t1"] = t1;
    res.summary["T"] = T;
    res.summary["n_harmonics"] = n_harmonics;
    res.summary["N"] = N;
    res.summary["first_rising"] = first_rising;
    res.summary["crossing_count"] = zc.crossings.size();
    res.summary["quarter_value"] = quarter_value;
    headline(res, "first_rising", first_rising);
    headline(res, "quarter_value", quarter_value);
}

void run_poynting(const json& cfg, const fs::path& out, RunResult& res) {
    (void)out;
    const std::string ctx = "CylindricalConductor";
    const fields::CylindricalConductor c(get_double(cfg, "l", ctx), get_double(cfg, "r", ctx),
                                         get_double(cfg, "v", ctx), get_double(cfg, "i", ctx));
    const auto p = fields::poynting_inflow(c);
    res.summary["E"] = p.E;
    res.summary["H"] = p.H;
    res.summary["S"] = p.S;
    res.summary["surface"] = p.surface;
    res.summary["inflow"] = p.inflow;
    res.summary["vi"] = c.v * c.i;
    headline(res, "E", p.E);
    headline(res, "H", p.H);
    headline(res, "S", p.S);
    headline(res, "surface_times_S", p.inflow);
    headline(res, "vi", c.v * c.i);
}

void run_memristor(const json& cfg, const fs::path& out, RunResult& res) {
    const std::string ctx = "memristor config";
    const std::string model = get_str(cfg, "model", ctx);
    const auto drive = parse_drive(require(cfg, "drive", ctx), ctx + ".drive");
    const int periods = get_int_or(cfg, "periods", 4);
    const double dt = get_double_or(cfg, "dt", drive.period() / 4096.0);

    memristive::MemristiveTraces tr = [&] {
        if (model == "charge") {
            memristive::ChargeControlledModel m{get_vector(require(cfg, "M", ctx), ctx + ".M"),
                                                get_double_or(cfg, "q0", 0.0),
                                                get_double_or(cfg, "psi0", 0.0)};
            return memristive::simulate_current_driven(m, drive, periods, dt);
        }
        if (model == "flux") {
            memristive::FluxControlledModel m{get_vector(require(cfg, "W", ctx), ctx + ".W"),
                                              get_double_or(cfg, "psi0", 0.0),
                                              get_double_or(cfg, "q0", 0.0)};
            return memristive::simulate_voltage_driven(m, drive, periods, dt);
        }
        throw std::invalid_argument(ctx + ": model must be 'charge' or 'flux'");
    }();

    const std::array<std::string, 6> hdr{"t", "i", "v", "q", "psi", "x1"};
    emit_csv(res, out, "traces.csv", hdr, {tr.t, tr.i, tr.v, tr.q, tr.psi, tr.x[0]});

    const auto pinch = memristive::pinched_loop_check(tr, 1e-5);
    double psi_q_max_dev = kNaN;
    if (model == "charge") {
        memristive::ChargeControlledModel m{get_vector(cfg.at("M"), ctx),
                                            get_double_or(cfg, "q0", 0.0),
                                            get_double_or(cfg, "psi0", 0.0)};
        psi_q_max_dev = memristive::flux_charge_deviation(tr, m);
    } else {
        memristive::FluxControlledModel m{get_vector(cfg.at("W"), ctx),
                                          get_double_or(cfg, "psi0", 0.0),
                                          get_double_or(cfg, "q0", 0.0)};
        psi_q_max_dev = memristive::charge_flux_deviation(tr, m);
    }
    const auto area = signals::loop_metrics(tr.last_period(tr.i), tr.last_period(tr.v));

    res.summary["model"] = model;
    res.summary["T"] = tr.T;
    res.summary["dt"] = tr.dt;
    res.summary["periods"] = periods;
    res.summary["pinched"] = pinch.pinched;
    res.summary["worst_violation"] = pinch.worst_violation;
    res.summary["max_v"] = pinch.max_v;
    res.summary["psi_q_max_dev"] = psi_q_max_dev;
    res.summary["signed_area"] = area.signed_area;
    res.summary["classification"] = loop_class_name(area.classification);
    res.summary["passivity_warning"] = tr.passivity_warning;
    headline(res, "pinched", pinch.pinched ? "true" : "false");
    headline(res, "worst_violation", pinch.worst_violation);
    headline(res, "psi_q_max_dev", psi_q_max_dev);
}

lamp::SeriesBallast parse_ballast(const json& cfg) {
    const json& b = require(cfg, "ballast", "lamp config");
    return lamp::SeriesBallast(get_double(b, "L", "SeriesBallast"),
                               get_double(b, "C", "SeriesBallast"));
}

lamp::LampModel parse_lamp_model(const json& cfg) {
    const json& l = require(cfg, "lamp", "lamp config");
    const std::string model = get_str(l, "model", "lamp config");
    const double A = get_double(l, "A", "lamp config");
    if (model == "hardlimiter") return lamp::HardlimiterLamp(A);
    if (model == "hysteresis") {
        if (l.contains("L1") || l.contains("L2")) {
            return lamp::HysteresisLamp(A, get_double(l, "L1", "HysteresisLamp"),
                                        get_double(l, "L2", "HysteresisLamp"));
        }
        return lamp::HysteresisLamp(A, get_double(l, "Lprime", "HysteresisLamp"));
    }
    throw std::invalid_argument("lamp config: model must be 'hardlimiter' or 'hysteresis'");
}

signals::Drive parse_source_shape(const json& src) {
    const std::string waveform =
        src.contains("waveform") ? src.at("waveform").get<std::string>() : "sine";
    const double T = get_double(src, "T", "source config");
    if (waveform == "sine") return signals::Drive::sine(1.0, T);
    if (waveform == "samples") {
        const auto values = get_vector(require(src, "values", "source config"), "source config");
        const signals::PeriodicWaveform w(T, values);
        const double m = w.max_abs();
        if (m == 0.0)
            throw std::invalid_argument("source config: sample waveform must not be all zero");
        std::vector<double> y(values);
        for (double& v : y) v /= m;
        return signals::Drive::from_waveform(signals::PeriodicWaveform(T, std::move(y)));
    }
    throw std::invalid_argument("source config: waveform must be 'sine' or 'samples'");
}

lamp::SolverOptions parse_solver(const json& cfg) {
    lamp::SolverOptions opts;
    if (cfg.contains("solver")) {
        const json& s = cfg.at("solver");
        opts.dt = get_double_or(s, "dt", 0.0);
        opts.tol = get_double_or(s, "tol", opts.tol);
        opts.max_periods = get_int_or(s, "max_periods", opts.max_periods);
    }
    return opts;
}

void run_lamp(const json& cfg, const fs::path& out, RunResult& res) {
    const auto ballast = parse_ballast(cfg);
    const auto model = parse_lamp_model(cfg);
    const json& src_cfg = require(cfg, "source", "lamp config");
    const double U = get_double(src_cfg, "U", "SourceSpec");
    const auto xi = parse_source_shape(src_cfg);
    const lamp::SourceSpec src(U, xi);
    const auto opts = parse_solver(cfg);

    const auto st = lamp::simulate_lamp_circuit(ballast, model, src, opts);

    const std::size_t N = st.i.size();
    std::vector<double> t(N), i(N), v_lamp(N), v_in(N);
    for (std::size_t j = 0; j < N; ++j) {
        t[j] = st.i.time_at(j);
        i[j] = st.i[j];
        v_lamp[j] = st.v_lamp[j];
        v_in[j] = U * xi(t[j]);
    }
    const std::array<std::string, 4> hdr{"t", "i", "v_lamp", "v_in"};
    emit_csv(res, out, "traces.csv", hdr, {t, i, v_lamp, v_in});

    res.summary["U"] = U;
    res.summary["T"] = xi.period();
    res.summary["converged"] = st.converged;
    res.summary["iterations"] = st.iterations;
    res.summary["has_crossings"] = st.has_crossings;
    res.summary["t1"] = st.t1;
    res.summary["P"] = st.P;
    res.summary["P_over_U2"] = U > 0.0 ? st.P / (U * U) : kNaN;
    res.summary["amplitude"] = st.amplitude;
    res.summary["energy_in"] = st.energy_in;
    res.summary["energy_lamp"] = st.energy_lamp;
    res.summary["energy_balance_rel"] = st.energy_balance_rel;
    res.summary["W_Lprime"] = st.W_Lprime;
    res.summary["n_events"] = st.events.size();
    headline(res, "converged", st.converged ? "true" : "false");
    headline(res, "t1", st.t1);
    headline(res, "P", st.P);
    headline(res, "amplitude", st.amplitude);
    headline(res, "energy_balance_rel", st.energy_balance_rel);
    if (!st.converged) res.exit_code = 2;
}

void run_lamp_sweep(const json& cfg, const fs::path& out, RunResult& res) {
    const auto ballast = parse_ballast(cfg);
    const auto model = parse_lamp_model(cfg);
    const json& src_cfg = require(cfg, "source", "lamp config");
    const auto xi = parse_source_shape(src_cfg);
    const auto opts = parse_solver(cfg);
    const json& sweep = require(cfg, "sweep", "lamp-sweep config");
    const auto U_values = get_vector(require(sweep, "U_values", "lamp-sweep config"),
                                     "lamp-sweep config");
    const bool parallel = !sweep.contains("parallel") || sweep.at("parallel").get<bool>();

    const auto rows = lamp::zerocrossing_sweep(ballast, model, xi, U_values, opts, parallel);

    std::vector<double> cu, ct1, cp, cpu2;
    json failures = json::array();
    int ok_rows = 0;
    for (const auto& row : rows) {
        cu.push_back(row.U);
        ct1.push_back(row.t1);
        cp.push_back(row.P);
        cpu2.push_back(row.P_over_U2);
        if (row.ok) {
            ++ok_rows;
        } else {
            failures.push_back({{"U", row.U}, {"message", row.message}});
        }
    }
    const std::array<std::string, 4> hdr{"U", "t1", "P", "P_over_U2"};
    emit_csv(res, out, "sweep.csv", hdr, {cu, ct1, cp, cpu2});

    res.summary["rows"] = rows.size();
    res.summary["ok_rows"] = ok_rows;
    res.summary["failures"] = failures;
    headline(res, "rows", double(rows.size()));
    headline(res, "ok_rows", double(ok_rows));
    if (ok_rows == 0) res.exit_code = 2;
}

void run_powerlaw(const json& cfg, const fs::path& out, RunResult& res) {
    (void)out;
    const std::string ctx = "powerlaw config";
    const auto net = parse_network(require(cfg, "network", ctx), "network config");
    const json& dj = require(cfg, "drive", ctx);
    const std::string type = get_str(dj, "type", ctx + ".drive");
    const double value = get_double(dj, "value", ctx + ".drive");
    powerlaw::DcDrive drive;
    if (type == "current") {
        drive = powerlaw::CurrentDrive{value};
    } else if (type == "voltage") {
        drive = powerlaw::VoltageDrive{value};
    } else {
        throw std::invalid_argument(ctx + ": drive type must be 'current' or 'voltage'");
    }

    const auto sol = powerlaw::solve_dc(net, drive);

    res.summary["nodes"] = net.node_count();
    res.summary["branches"] = net.branches().size();
    res.summary["drive"] = type;
    res.summary["value"] = value;
    res.summary["V_in"] = sol.V_in;
    res.summary["I_in"] = sol.I_in;
    if (const auto alpha = powerlaw::uniform_alpha(net)) {
        res.summary["alpha"] = *alpha;
        res.summary["D_eff"] = powerlaw::effective_coefficient(net);
    }
    res.summary["iterations"] = sol.iterations;
    res.summary["residual"] = sol.residual;
    res.summary["node_voltages"] = sol.node_voltages;
    res.summary["branch_currents"] = sol.branch_currents;
    headline(res, "V_in", sol.V_in);
    headline(res, "I_in", sol.I_in);
    if (res.summary.contains("D_eff")) headline(res, "D_eff", res.summary["D_eff"].get<double>());
}

void run_eye(const json& cfg, const fs::path& out, RunResult& res) {
    const std::string ctx = "eye config";
    const powerlaw::EyeElement e(get_double(cfg, "alpha1", ctx), get_double(cfg, "D1", ctx),
                                 get_double(cfg, "alpha2", ctx), get_double(cfg, "D2", ctx));
    const json& dj = require(cfg, "drive", ctx);
    const double amplitude = get_double(dj, "amplitude", ctx + ".drive");
    const double T = get_double(dj, "T", ctx + ".drive");
    int N = get_int_or(cfg, "N", 4096);
    if (N < 16 || N % 2 != 0)
        throw std::invalid_argument(ctx + ": N must be an even sample count >= 16");

    const auto i = signals::PeriodicWaveform::from_function(
        T, std::size_t(N),
        [&](double t) { return amplitude * std::sin(2.0 * std::numbers::pi * t / T); });
    const auto v = powerlaw::eye_v(e, i);

    std::vector<double> t(i.size()), ci(i.size()), cv(i.size());
    for (std::size_t j = 0; j < i.size(); ++j) {
        t[j] = i.time_at(j);
        ci[j] = i[j];
        cv[j] = v[j];
    }
    const std::array<std::string, 3> hdr{"t", "i", "v"};
    emit_csv(res, out, "loop.csv", hdr, {t, ci, cv});

    // positive lobe: the first half period of the sine drive, a closed loop
    const std::size_t half = i.size() / 2;
    const signals::PeriodicWaveform i_lobe(
        T / 2.0, std::vector<double>(ci.begin(), ci.begin() + std::ptrdiff_t(half)));
    const signals::PeriodicWaveform v_lobe(
        T / 2.0, std::vector<double>(cv.begin(), cv.begin() + std::ptrdiff_t(half)));
    const auto lobe = signals::loop_metrics(i_lobe, v_lobe);
    const auto net_loop = signals::loop_metrics(i, v);

    res.summary["alpha1"] = e.alpha1;
    res.summary["D1"] = e.D1;
    res.summary["alpha2"] = e.alpha2;
    res.summary["D2"] = e.D2;
    if (e.alpha1 != e.alpha2) {
        const auto [i_r, v_r] = powerlaw::return_point(e);
        res.summary["i_r"] = i_r;
        res.summary["v_r"] = v_r;
        headline(res, "i_r", i_r);
        headline(res, "v_r", v_r);
    }
    const double lobe_area = powerlaw::eye_loop_area(e);
    res.summary["lobe_area"] = lobe_area;
    res.summary["lobe_area_numeric"] = lobe.signed_area;
    res.summary["lobe_classification"] = loop_class_name(lobe.classification);
    res.summary["net_area"] = net_loop.signed_area;
    headline(res, "lobe_area", lobe_area);
    headline(res, "lobe_classification", loop_class_name(lobe.classification));
}

void run_superposition(const json& cfg, const fs::path& out, RunResult& res) {
    (void)out;
    const std::string ctx = "superposition config";
    const auto net_a = parse_network(require(cfg, "net_a", ctx), "network config");
    const auto net_b = parse_network(require(cfg, "net_b", ctx), "network config");
    const double V_in = get_double(cfg, "V_in", ctx);

    const auto rep = powerlaw::approximate_superposition(net_a, net_b, V_in);
    res.summary["V_in"] = V_in;
    res.summary["i_combined"] = rep.i_combined;
    res.summary["i_sum"] = rep.i_sum;
    res.summary["relative_deviation"] = rep.relative_deviation;
    res.summary["worst_intermediacy"] = rep.worst_intermediacy;
    res.summary["intermediate"] = rep.intermediate;
    headline(res, "i_combined", rep.i_combined);
    headline(res, "i_sum", rep.i_sum);
    headline(res, "relative_deviation", rep.relative_deviation);
}

void run_switched(const json& cfg, const fs::path& out, RunResult& res) {
    const std::string ctx = "switched config";
    const json& modes_j = require(cfg, "modes", ctx);
    if (!modes_j.is_array() || modes_j.empty())
        throw std::invalid_argument(ctx + ": 'modes' must be a non-empty array");
    std::vector<switched::Mode> modes;
    for (const auto& mj : modes_j) {
        const json& aj = require(mj, "A", ctx + ".modes");
        const std::size_t n = aj.size();
        Eigen::MatrixXd A(n, n);
        for (std::size_t r = 0; r < n; ++r) {
            const auto row = get_vector(aj.at(r), ctx + ".A");
            if (row.size() != n) throw std::invalid_argument(ctx + ": A must be square");
            for (std::size_t c = 0; c < n; ++c) A(Eigen::Index(r), Eigen::Index(c)) = row[c];
        }
        Eigen::MatrixXd B(n, 0);
        if (mj.contains("B") && !mj.at("B").empty()) {
            const json& bj = mj.at("B");
            const std::size_t m = bj.at(0).size();
            B.resize(Eigen::Index(n), Eigen::Index(m));
            for (std::size_t r = 0; r < bj.size(); ++r) {
                const auto row = get_vector(bj.at(r), ctx + ".B");
                if (bj.size() != n || row.size() != m)
                    throw std::invalid_argument(ctx + ": B rows must match A and share one width");
                for (std::size_t c = 0; c < m; ++c) B(Eigen::Index(r), Eigen::Index(c)) = row[c];
            }
        }
        modes.push_back({std::move(A), std::move(B)});
    }

    switched::SwitchingRule rule = switched::NoRule{};
    const json& rj = require(cfg, "rule", ctx);
    const std::string rtype = get_str(rj, "type", ctx + ".rule");
    if (rtype == "schedule") {
        rule = switched::ScheduleRule{get_vector(require(rj, "times", ctx), ctx + ".rule")};
    } else if (rtype == "level_crossing") {
        rule = switched::LevelCrossingRule{get_int(rj, "j", ctx + ".rule"),
                                           get_double(rj, "c", ctx + ".rule"),
                                           get_double_or(rj, "band", 0.0)};
    } else if (rtype != "none") {
        throw std::invalid_argument(ctx + ": rule type must be none|schedule|level_crossing");
    }

    const switched::SwitchedLinearSystem sys(std::move(modes), rule);

    const auto x0v = get_vector(require(cfg, "x0", ctx), ctx + ".x0");
    Eigen::VectorXd x0(x0v.size());
    for (std::size_t k = 0; k < x0v.size(); ++k) x0[Eigen::Index(k)] = x0v[k];

    switched::InputSignal u = switched::ZeroInput{};
    if (cfg.contains("input")) {
        const json& ij = cfg.at("input");
        const std::string itype = get_str(ij, "type", ctx + ".input");
        if (itype == "constant") {
            const auto vals = get_vector(require(ij, "value", ctx), ctx + ".input");
            Eigen::VectorXd c(vals.size());
            for (std::size_t k = 0; k < vals.size(); ++k) c[Eigen::Index(k)] = vals[k];
            u = std::move(c);
        } else if (itype == "waveform") {
            u = signals::PeriodicWaveform(get_double(ij, "T", ctx + ".input"),
                                          get_vector(require(ij, "values", ctx), ctx + ".input"));
        } else if (itype != "none") {
            throw std::invalid_argument(ctx + ": input type must be none|constant|waveform");
        }
    }

    const double t_span = get_double(cfg, "t_span", ctx);
    const double dt = get_double(cfg, "dt", ctx);
    const auto traj = switched::simulate_switched(sys, x0, u, t_span, dt);

    const std::size_t pts = traj.t.size();
    const int n = sys.state_dim();
    std::vector<std::vector<double>> cols(2 + std::size_t(n));
    std::vector<std::string> hdr{"t", "mode"};
    for (int k = 0; k < n; ++k) hdr.push_back("x" + std::to_string(k + 1));
    for (std::size_t j = 0; j < pts; ++j) {
        cols[0].push_back(traj.t[j]);
        cols[1].push_back(double(traj.mode[j]));
        for (int k = 0; k < n; ++k)
            cols[2 + std::size_t(k)].push_back(traj.x[j][Eigen::Index(k)]);
    }
    emit_csv(res, out, "traces.csv", hdr, cols);

    const auto cls = classify_system(sys);
    const char* cls_name = cls == switched::SystemClass::LTI   ? "LTI"
                           : cls == switched::SystemClass::LTV ? "LTV"
                                                               : "NL";
    json switch_times = json::array();
    json directions = json::array();
    for (const auto& ev : traj.switches) {
        switch_times.push_back(ev.t);
        directions.push_back(ev.direction);
    }
    std::vector<double> xf(static_cast<std::size_t>(n), 0.0);
    for (int k = 0; k < n; ++k) xf[std::size_t(k)] = traj.x.back()[Eigen::Index(k)];

    res.summary["class"] = cls_name;
    res.summary["n_switches"] = traj.switches.size();
    res.summary["switch_times"] = switch_times;
    res.summary["switch_directions"] = directions;
    res.summary["band_used"] = traj.band_used;
    res.summary["final_state"] = xf;
    headline(res, "class", cls_name);
    headline(res, "n_switches", double(traj.switches.size()));
}

const std::vector<std::string>& sweep_scalars(const std::string& kind) {
    static const std::map<std::string, std::vector<std::string>> table{
        {"square", {"first_rising", "quarter_value"}},
        {"poynting", {"inflow", "vi"}},
        {"memristor", {"worst_violation", "psi_q_max_dev", "signed_area"}},
        {"lamp", {"t1", "P", "P_over_U2"}},
        {"lamp-sweep", {"rows", "ok_rows"}},
        {"powerlaw", {"V_in", "I_in", "D_eff"}},
        {"eye", {"i_r", "v_r", "lobe_area", "net_area"}},
        {"superposition", {"relative_deviation", "worst_intermediacy"}},
        {"switched", {"n_switches"}},
    };
    const auto it = table.find(kind);
    if (it == table.end()) throw std::invalid_argument("unknown experiment kind '" + kind + "'");
    return it->second;
}

} // namespace

json load_config(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file " + path.string());
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw std::invalid_argument("config " + path.string() + " is not valid JSON: " + e.what());
    }
}

void apply_override(json& config, const std::string& key, const std::string& value) {
    if (key.empty()) throw std::invalid_argument("override key must not be empty");
    json* node = &config;
    std::size_t pos = 0;
    while (true) {
        const std::size_t dot = key.find('.', pos);
        const std::string part = key.substr(pos, dot == std::string::npos ? dot : dot - pos);
        if (part.empty()) throw std::invalid_argument("override key '" + key + "' is malformed");
        const bool last = dot == std::string::npos;
        const bool is_index = !part.empty() && part.find_first_not_of("0123456789") == std::string::npos;
        if (node->is_array() && is_index) {
            const std::size_t idx = std::stoul(part);
            if (idx >= node->size())
                throw std::invalid_argument("override key '" + key + "' indexes past array end");
            node = &(*node)[idx];
        } else {
            if (!node->is_object() && !node->is_null())
                throw std::invalid_argument("override key '" + key + "' walks into a scalar");
            node = &(*node)[part];
        }
        if (last) break;
        pos = dot + 1;
    }
    try {
        *node = json::parse(value);
    } catch (const json::exception&) {
        *node = value;
    }
}

RunResult run_experiment(const json& config, const fs::path& out_dir) {
    RunResult res;
    try {
        const std::string kind = get_str(config, "kind", "experiment config");
        std::filesystem::create_directories(out_dir);
        res.summary["kind"] = kind;
        res.summary["input_hash"] = io::hex64(io::fnv1a64(config.dump()));

        if (kind == "square") {
            run_square(config, out_dir, res);
        } else if (kind == "poynting") {
            run_poynting(config, out_dir, res);
        } else if (kind == "memristor") {
            run_memristor(config, out_dir, res);
        } else if (kind == "lamp") {
            run_lamp(config, out_dir, res);
        } else if (kind == "lamp-sweep") {
            run_lamp_sweep(config, out_dir, res);
        } else if (kind == "powerlaw") {
            run_powerlaw(config, out_dir, res);
        } else if (kind == "eye") {
            run_eye(config, out_dir, res);
        } else if (kind == "superposition") {
            run_superposition(config, out_dir, res);
        } else if (kind == "switched") {
            run_switched(config, out_dir, res);
        } else {
            throw std::invalid_argument("unknown experiment kind '" + kind + "'");
        }
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("invalid config: ") + e.what());
    }

    io::write_text_atomic(out_dir / "summary.json", res.summary.dump(2) + "\n");
    res.files.push_back("summary.json");
    return res;
}

RunResult run_sweep(const json& config, const fs::path& out_dir, const std::string& key,
                    const std::vector<std::string>& values) {
    if (values.empty()) throw std::invalid_argument("sweep needs at least one value");
    const std::string kind = get_str(config, "kind", "experiment config");
    const auto& scalars = sweep_scalars(kind);
    std::filesystem::create_directories(out_dir);

    RunResult res;
    res.summary["kind"] = kind;
    res.summary["sweep_key"] = key;
    res.summary["input_hash"] = io::hex64(io::fnv1a64(config.dump()));

    std::string csv = key + ",status";
    for (const auto& s : scalars) csv += "," + s;
    csv += '\n';

    int ok_rows = 0;
    json row_reports = json::array();
    for (std::size_t k = 0; k < values.size(); ++k) {
        json cfg = config;
        std::string status = "ok";
        std::string message;
        json row_summary;
        try {
            apply_override(cfg, key, values[k]);
            const RunResult row =
                run_experiment(cfg, out_dir / ("row_" + std::to_string(k)));
            row_summary = row.summary;
            if (row.exit_code == 0) {
                ++ok_rows;
            } else {
                status = "error";
                message = "solver flagged the run (exit " + std::to_string(row.exit_code) + ")";
            }
        } catch (const SimulationError& e) {
            status = "error";
            message = e.what();
        } catch (const std::invalid_argument& e) {
            status = "invalid";
            message = e.what();
        }

        csv += values[k] + "," + status;
        for (const auto& s : scalars) {
            double val = kNaN;
            if (row_summary.contains(s) && row_summary.at(s).is_number())
                val = row_summary.at(s).get<double>();
            csv += "," + io::format_g15(val);
        }
        csv += '\n';
        json report{{"value", values[k]}, {"status", status}};
        if (!message.empty()) report["message"] = message;
        row_reports.push_back(std::move(report));
    }

    io::write_text_atomic(out_dir / "sweep.csv", csv);
    res.files.push_back("sweep.csv");
    res.summary["rows"] = values.size();
    res.summary["ok_rows"] = ok_rows;
    res.summary["row_reports"] = row_reports;
    io::write_text_atomic(out_dir / "summary.json", res.summary.dump(2) + "\n");
    res.files.push_back("summary.json");
    res.headline.push_back("rows = " + std::to_string(values.size()));
    res.headline.push_back("ok_rows = " + std::to_string(ok_rows));
    if (ok_rows == 0) res.exit_code = 2;
    return res;
}

} // namespace nlcirc::experiments
