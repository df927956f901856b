#pragma once

// Mode runners behind the command-line tool. Each run renders a CSV document:
// a '# ' metadata block (tool version, optional timestamp, resolved config)
// followed by a header row and data rows.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "usc/calibrate.hpp"
#include "usc/config.hpp"
#include "usc/core.hpp"
#include "usc/fock.hpp"
#include "usc/groundstate.hpp"
#include "usc/quadrature.hpp"
#include "usc/spectra.hpp"

#ifndef USC_VERSION
#define USC_VERSION "0.0.0"
#endif

namespace usc {

inline constexpr int exit_ok = 0;
inline constexpr int exit_usage = 1;
inline constexpr int exit_flagged = 2;

inline constexpr const char* config_begin_marker = "# --- resolved config ---";
inline constexpr const char* config_end_marker = "# --- end config ---";

// ---------------------------------------------------------------- ellipses

struct Ellipse {
    std::string block;
    double semi_major = 0.0;
    double semi_minor = 0.0;
    double angle = 0.0;  // orientation of the major axis, [0, pi)
};

inline Ellipse ellipse_of(const std::string& name, const Mat2& c) {
    Eigen::SelfAdjointEigenSolver<Mat2> es(c);
    Ellipse e;
    e.block = name;
    e.semi_minor = std::sqrt(std::max(0.0, es.eigenvalues()(0)));
    e.semi_major = std::sqrt(std::max(0.0, es.eigenvalues()(1)));
    if (es.eigenvalues()(1) - es.eigenvalues()(0) > 1e-12 * std::abs(es.eigenvalues()(1))) {
        const auto v = es.eigenvectors().col(1);
        double a = std::atan2(v(1), v(0));
        if (a < 0.0) a += pi;
        if (a >= pi - 1e-15) a -= pi;
        e.angle = a;
    }
    return e;
}

/// 1-sigma ellipses of the (X_a, Y_a) and (X_b, Y_b) blocks and of the
/// normalized two-mode pairs ((X_a -+ X_b)/sqrt2, (Y_a +- Y_b)/sqrt2).
inline std::vector<Ellipse> ellipses(const CovarianceMatrix& v) {
    require_physical(v);
    const Mat4& m = v.matrix();
    const double s = 1.0 / std::sqrt(2.0);
    const auto pair = [&](double sx, double sy) {
        Eigen::Matrix<double, 2, 4> t;
        t << s, 0, sx * s, 0, 0, s, 0, sy * s;
        return Mat2(t * m * t.transpose());
    };
    return {ellipse_of("a", m.block<2, 2>(0, 0)), ellipse_of("b", m.block<2, 2>(2, 2)),
            ellipse_of("minus_plus", pair(-1.0, 1.0)), ellipse_of("plus_minus", pair(1.0, -1.0))};
}

namespace detail {

inline std::string num(double v) {
    if (std::isnan(v)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

inline void ellipse_rows(std::ostream& os, const std::string& label, const CovarianceMatrix& v) {
    for (const auto& e : ellipses(v)) {
        os << label << ',' << e.block << ',' << num(e.semi_major) << ',' << num(e.semi_minor) << ','
           << num(e.angle) << '\n';
    }
}

}  // namespace detail

/// Writes the ellipse table of a single covariance matrix.
inline void emit_ellipses(const CovarianceMatrix& v, const std::string& path) {
    std::ostringstream os;
    os << "label,block,semi_major,semi_minor,angle\n";
    detail::ellipse_rows(os, "state", v);
    std::ofstream f(path);
    if (!f) throw error("cannot open " + path + " for writing");
    f << os.str();
}

// ---------------------------------------------------------------- runs

struct RunOptions {
    bool timestamp = true;
};

struct RunResult {
    int status = exit_ok;
    std::string csv;
    std::string ellipses;  // empty unless requested
    std::vector<std::string> messages;
};

namespace detail {

class Table {
public:
    std::ostringstream head;  // extra metadata lines
    std::ostringstream body;
    int status = exit_ok;
    std::vector<std::string> messages;

    void note(const std::string& line) { head << "# " << line << '\n'; }

    void flag(const std::string& msg) {
        status = exit_flagged;
        messages.push_back(msg);
        note("flagged: " + msg);
    }

    template <typename... T>
    void row(const T&... cells) {
        bool first = true;
        ((body << (first ? "" : ",") << cells, first = false), ...);
        body << '\n';
    }
};

inline SimParams sim_params(const RunConfig& c, double g_over_delta) {
    SimParams p;
    p.delta = c.delta;
    p.G_B = c.G_B_over_delta.value_or(g_over_delta) * c.delta;
    p.G_R = c.G_R_over_delta.value_or(g_over_delta) * c.delta;
    p.gamma_a = c.gamma_a;
    p.gamma_b = c.gamma_b;
    p.gamma_L = c.gamma_L;
    p.thermal_occupancy = c.thermal_occupancy;
    p.omega_a = c.omega_a;
    p.omega_b = c.omega_b;
    return p;
}

inline const char* spectra_columns =
    "omega_over_delta,S_Xa_dB,S_Ya_dB,S_Xb_dB,S_Yb_dB,S_Xminus_dB,S_Yplus_dB,S_Xplus_dB,S_Yminus_dB,epr_min,"
    "epr_min_over_vacuum";

inline std::string spectra_cells(const SpectralSweep& s, std::size_t k) {
    const SqueezingReport& r = s.reports[k];
    const auto one = [](double v) { return num(db_floored(v, vacuum_variance)); };
    const auto two = [](double v) { return num(db_floored(v, two_mode_vacuum_variance)); };
    std::ostringstream os;
    os << num(s.omega[k] / s.params.delta) << ',' << one(r.var_Xa) << ',' << one(r.var_Ya) << ',' << one(r.var_Xb)
       << ',' << one(r.var_Yb) << ',' << two(r.var_Xminus) << ',' << two(r.var_Yplus) << ',' << two(r.var_Xplus)
       << ',' << two(r.var_Yminus) << ',' << num(s.epr_min(k)) << ',' << num(s.epr_min_over_vacuum(k));
    return os.str();
}

inline std::vector<double> scaled(const std::vector<double>& g, double factor) {
    std::vector<double> out(g.size());
    for (std::size_t k = 0; k < g.size(); ++k) out[k] = g[k] * factor;
    return out;
}

inline void run_ground_state(const RunConfig& c, Table& t, std::ostringstream* ell) {
    const std::vector<double> grid = c.grid.expand();
    GroundStateParams tmpl{c.omega_alpha, c.omega_beta, 0.0};
    const auto rows = ground_state_sweep(tmpl, scaled(grid, c.omega_alpha), c.workers);
    t.note("frequencies and couplings in units of omega_alpha");
    t.row("G_over_delta", "var_Xa", "var_Ya", "db_Xa", "db_Ya", "var_Xminus", "var_Xplus", "var_Yplus", "var_Yminus",
          "epr_minus_plus", "epr_plus_minus", "omega1", "omega2", "valid");
    for (std::size_t k = 0; k < rows.size(); ++k) {
        const GroundStateRow& r = rows[k];
        const double nan = std::numeric_limits<double>::quiet_NaN();
        if (!r.valid) {
            t.flag("G_over_delta=" + num(grid[k]) + ": " + r.diagnostic);
            t.row(num(grid[k]), num(nan), num(nan), num(nan), num(nan), num(nan), num(nan), num(nan), num(nan),
                  num(nan), num(nan), num(nan), num(nan), 0);
            continue;
        }
        const SqueezingReport& q = r.report;
        t.row(num(grid[k]), num(q.var_Xa), num(q.var_Ya), num(q.db_Xa()), num(q.db_Ya()), num(q.var_Xminus),
              num(q.var_Xplus), num(q.var_Yplus), num(q.var_Yminus), num(q.epr_minus_plus), num(q.epr_plus_minus),
              num(r.omega1 / c.omega_alpha), num(r.omega2 / c.omega_alpha), 1);
        if (ell) ellipse_rows(*ell, num(grid[k]), ground_state_covariance({c.omega_alpha, c.omega_beta, r.G}));
    }
}

inline void run_spectra(const RunConfig& c, Table& t, std::ostringstream* ell) {
    const SimParams p = sim_params(c, c.G_over_delta);
    const StabilityReport st = stability_check(p);
    t.note("G_B_over_delta = " + num(p.G_B / p.delta) + ", G_R_over_delta = " + num(p.G_R / p.delta));
    if (p.omega_a && p.omega_b) {
        t.note("lab frame: mode a at omega_a + delta + omega, mode b at omega_b + delta + omega");
    }
    t.row(spectra_columns);
    if (!st.stable) {
        t.flag("unstable: drift margin " + num(st.margin) + " >= 0");
        return;
    }
    const SpectralSweep s = spectra_sweep(p, scaled(c.grid.expand(), c.delta), c.workers);
    for (std::size_t k = 0; k < s.size(); ++k) t.row(spectra_cells(s, k));
    for (double d : dip_positions(s)) t.note("epr_dip_omega_over_delta = " + num(d / p.delta));
    if (ell && s.size() > 0) {
        std::size_t best = 0;
        for (std::size_t k = 1; k < s.size(); ++k) {
            if (s.epr_min(k) < s.epr_min(best)) best = k;
        }
        ellipse_rows(*ell, num(s.omega[best] / p.delta), s.sigma[best]);
    }
}

inline void run_sweep(const RunConfig& c, Table& t) {
    t.row(std::string("G_over_delta,") + spectra_columns);
    const std::vector<double> grid = scaled(c.grid.expand(), c.delta);
    for (double g : c.couplings) {
        const SimParams p = sim_params(c, g);
        const StabilityReport st = stability_check(p);
        if (!st.stable) {
            t.flag("G_over_delta=" + num(g) + " unstable: drift margin " + num(st.margin) + " >= 0");
            continue;
        }
        const SpectralSweep s = spectra_sweep(p, grid, c.workers);
        for (std::size_t k = 0; k < s.size(); ++k) t.row(num(g), spectra_cells(s, k));
        for (double d : dip_positions(s)) {
            t.note("G_over_delta=" + num(g) + " epr_dip_omega_over_delta = " + num(d / p.delta));
        }
    }
}

inline void run_stability(const RunConfig& c, Table& t) {
    const std::vector<double> grid = c.grid.expand();
    const auto margins = parallel_map(
        grid.size(), [&](std::size_t k) { return stability_check(sim_params(c, grid[k])).margin; }, c.workers);
    int crossings = 0;
    for (std::size_t k = 1; k < grid.size(); ++k) {
        if ((margins[k - 1] < 0.0) != (margins[k] < 0.0)) {
            ++crossings;
            SimParams tmpl = sim_params(c, 0.0);
            const double g = stability_threshold(tmpl, grid[k - 1] * c.delta, grid[k] * c.delta);
            if (margins[k - 1] < 0.0) t.note("threshold_G_over_delta = " + num(g / c.delta));
        }
    }
    t.note("zero_crossings = " + std::to_string(crossings));
    t.row("G_over_delta", "margin", "margin_over_delta", "stable");
    for (std::size_t k = 0; k < grid.size(); ++k) {
        t.row(num(grid[k]), num(margins[k]), num(margins[k] / c.delta), margins[k] < 0.0 ? 1 : 0);
    }
}

inline void run_calibrate(const RunConfig& c, Table& t) {
    PumpConfig pc;
    pc.chi = c.chi;
    pc.c_B = std::polar(c.c_B, c.c_B_phase);
    pc.c_R = std::polar(c.c_R, c.c_R_phase);
    pc.omega_a = c.pump_omega_a;
    pc.omega_b = c.pump_omega_b;
    pc.delta = c.pump_delta;
    const RwaThresholds th{c.rwa_frequency_ratio, c.rwa_detuning_ratio};

    t.row("quantity", "value");
    const RwaReport rwa = rwa_report(pc, th);
    for (const auto& r : rwa.ratios) t.row("rwa " + r.name, num(r.value));
    t.row("rwa_ok", rwa.ok() ? 1 : 0);
    if (!rwa.ok()) {
        if (c.force) {
            t.note("warning: rotating-wave regime violated:" + rwa.failures() + " (forced)");
        } else {
            t.flag("rotating-wave regime violated:" + rwa.failures());
            return;
        }
    }
    const EffectiveParams e = effective_params(pc, c.gamma_a, c.gamma_b, c.gamma_L, true, th);
    t.row("G_B", num(e.sim.G_B));
    t.row("G_R", num(e.sim.G_R));
    t.row("G_B_over_delta", num(e.sim.G_B / e.sim.delta));
    t.row("G_R_over_delta", num(e.sim.G_R / e.sim.delta));
    t.row("simulates_usc", e.sim.simulates_usc() ? 1 : 0);
    t.row("theta_a", num(e.theta_a));
    t.row("theta_b", num(e.theta_b));
    t.row("omega_blue", num(e.omega_blue));
    t.row("omega_red", num(e.omega_red));
    const StabilityReport st = stability_check(e.sim);
    t.row("stability_margin", num(st.margin));
    if (!st.stable) t.flag("effective system unstable: drift margin " + num(st.margin) + " >= 0");

    if (c.has_feasibility) {
        FeasibilityInput f{c.xi_a, c.xi_b, c.Q_a, c.Q_b, c.gamma_a, c.gamma_b, c.pump_delta};
        const FeasibilityReport r = feasibility_check(f, c.target_G_over_delta * c.pump_delta);
        t.row("feasibility_bound", num(r.bound));
        t.row("max_coupling", num(r.max_coupling));
        t.row("coupling_ratio", num(r.coupling_ratio));
        t.row("delta_over_gamma_a", num(r.delta_over_gamma_a));
        t.row("delta_over_gamma_b", num(r.delta_over_gamma_b));
        t.row("coupling_ok", r.coupling_ok ? 1 : 0);
        t.row("detuning_ok", r.detuning_ok ? 1 : 0);
        t.row("feasible", r.feasible ? 1 : 0);
    }
}

inline void run_oracle(const RunConfig& c, Table& t) {
    const std::vector<double> grid = c.grid.expand();
    const FockConfig cfg{c.n_max, c.convergence_pad};
    t.row("G_over_delta", "max_abs_diff", "var_Ya_gaussian", "var_Ya_fock", "var_Xplus_gaussian", "var_Xplus_fock",
          "energy_gaussian", "energy_fock", "tail_population", "converged");
    struct Row {
        bool valid = false;
        std::string diagnostic;
        CovarianceMatrix gauss, fock;
        double e_gauss = 0.0, e_fock = 0.0, tail = 0.0;
        bool converged = false;
    };
    const auto rows = parallel_map(
        grid.size(),
        [&](std::size_t k) {
            Row r;
            const GroundStateParams p{c.omega_alpha, c.omega_beta, grid[k] * c.omega_alpha};
            try {
                r.gauss = ground_state_covariance(p);
                const auto [w1, w2] = polariton_frequencies(p);
                r.e_gauss = 0.5 * (w1 + w2) - 0.5 * (p.omega_alpha + p.omega_beta);
                const FockGroundState f = fock_ground_state(p, cfg);
                r.fock = f.covariance;
                r.e_fock = f.energy;
                r.tail = f.tail_population;
                r.converged = f.converged;
                r.valid = true;
            } catch (const model_invalid& e) {
                r.diagnostic = e.what();
            }
            return r;
        },
        c.workers);
    const Vec4 plus(1.0, 0.0, 1.0, 0.0);
    for (std::size_t k = 0; k < rows.size(); ++k) {
        const Row& r = rows[k];
        if (!r.valid) {
            t.flag("G_over_delta=" + num(grid[k]) + ": " + r.diagnostic);
            continue;
        }
        if (!r.converged) t.flag("G_over_delta=" + num(grid[k]) + ": Fock truncation not converged");
        const double diff = (r.gauss.matrix() - r.fock.matrix()).cwiseAbs().maxCoeff();
        t.row(num(grid[k]), num(diff), num(r.gauss.matrix()(1, 1)), num(r.fock.matrix()(1, 1)),
              num(r.gauss.variance(plus)), num(r.fock.variance(plus)), num(r.e_gauss / c.omega_alpha),
              num(r.e_fock / c.omega_alpha), num(r.tail), r.converged ? 1 : 0);
    }
}

inline void run_validate_rwa(const RunConfig& c, Table& t) {
    TimeDependentSpec spec;
    spec.delta = c.fock_delta;
    spec.omega_a = c.omega_a_over_delta * c.fock_delta;
    spec.omega_b = c.omega_b_over_delta * c.fock_delta;
    spec.G_B = spec.G_R = c.fock_G_over_delta * c.fock_delta;
    spec.duration = c.duration_periods * two_pi / c.fock_delta;
    spec.tolerance = c.tolerance;
    spec.samples = c.samples;
    const FockConfig cfg{c.n_max, c.convergence_pad};
    const RwaComparison cmp = compare_rwa(spec, cfg, TwoModeSpace(c.n_max).vacuum());
    t.note("max_relative_deviation = " + num(cmp.max_relative_deviation));
    if (!cmp.full.converged || !cmp.effective.converged) t.flag("Fock truncation not converged");
    t.row("t_delta", "var_Xa_full", "var_Ya_full", "var_Xb_full", "var_Yb_full", "var_Xa_eff", "var_Ya_eff",
          "var_Xb_eff", "var_Yb_eff", "norm_full", "norm_eff");
    for (std::size_t k = 0; k < cmp.full.times.size(); ++k) {
        const Mat4& f = cmp.full.covariances[k].matrix();
        const Mat4& e = cmp.effective.covariances[k].matrix();
        t.row(num(cmp.full.times[k] * c.fock_delta), num(f(0, 0)), num(f(1, 1)), num(f(2, 2)), num(f(3, 3)),
              num(e(0, 0)), num(e(1, 1)), num(e(2, 2)), num(e(3, 3)), num(cmp.full.norms[k]),
              num(cmp.effective.norms[k]));
    }
}

inline std::string timestamp_line() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[64];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace detail

/// Executes a run and renders its CSV (and ellipse table) in memory.
/// Model-invalid or unstable regimes give status 2 with flagged output.
inline RunResult execute(const RunConfig& c, const RunOptions& opt = {}) {
    detail::Table t;
    std::ostringstream ell;
    const bool want_ellipses = !c.ellipses.empty();
    if (want_ellipses && c.mode != Mode::ground_state && c.mode != Mode::spectra) {
        throw config_error("key 'run.ellipses': only supported for ground-state and spectra runs", "run.ellipses", 0);
    }
    std::ostringstream* ell_ptr = want_ellipses ? &ell : nullptr;
    if (want_ellipses) {
        ell << (c.mode == Mode::ground_state ? "G_over_delta" : "omega_over_delta")
            << ",block,semi_major,semi_minor,angle\n";
    }

    switch (c.mode) {
        case Mode::ground_state: detail::run_ground_state(c, t, ell_ptr); break;
        case Mode::spectra: detail::run_spectra(c, t, ell_ptr); break;
        case Mode::sweep: detail::run_sweep(c, t); break;
        case Mode::stability: detail::run_stability(c, t); break;
        case Mode::calibrate: detail::run_calibrate(c, t); break;
        case Mode::oracle: detail::run_oracle(c, t); break;
        case Mode::validate_rwa: detail::run_validate_rwa(c, t); break;
    }

    std::ostringstream os;
    os << "# usc_sim " << USC_VERSION << '\n';
    if (opt.timestamp) os << "# timestamp: " << detail::timestamp_line() << '\n';
    os << config_begin_marker << '\n';
    std::istringstream cfg(resolved_config_text(c));
    for (std::string line; std::getline(cfg, line);) os << "# " << line << '\n';
    os << config_end_marker << '\n';
    os << t.head.str() << t.body.str();

    RunResult r;
    r.status = t.status;
    r.csv = os.str();
    r.messages = t.messages;
    if (want_ellipses) r.ellipses = ell.str();
    return r;
}

/// Recovers the resolved config document from a CSV produced by execute().
inline std::string extract_config(const std::string& csv) {
    std::istringstream is(csv);
    std::ostringstream out;
    bool inside = false;
    for (std::string line; std::getline(is, line);) {
        if (line == config_begin_marker) {
            inside = true;
        } else if (line == config_end_marker) {
            break;
        } else if (inside && line.rfind("# ", 0) == 0) {
            out << line.substr(2) << '\n';
        }
    }
    return out.str();
}

/// Runs and writes artifacts (CSV to c.output or stdout). Returns the exit code.
inline int run(const RunConfig& c, const RunOptions& opt = {}, std::ostream& log = std::cerr) {
    RunResult r;
    try {
        r = execute(c, opt);
    } catch (const config_error& e) {
        log << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const domain_error& e) {
        log << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const error& e) {
        log << "error: " << e.what() << '\n';
        return exit_flagged;
    }
    for (const auto& m : r.messages) log << "warning: " << m << '\n';

    if (c.output.empty() || c.output == "-") {
        std::cout << r.csv;
    } else {
        std::ofstream f(c.output);
        if (!f) {
            log << "error: cannot open " << c.output << " for writing\n";
            return exit_usage;
        }
        f << r.csv;
    }
    if (!c.ellipses.empty()) {
        std::ofstream f(c.ellipses);
        if (!f) {
            log << "error: cannot open " << c.ellipses << " for writing\n";
            return exit_usage;
        }
        f << r.ellipses;
    }
    return r.status;
}

}  // namespace usc
