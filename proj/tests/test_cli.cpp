#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include "usc/usc.hpp"

using namespace usc;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream f(path);
    std::ostringstream os;
    os << f.rdbuf();
    return os.str();
}

std::string bundled(const std::string& name) { return read_file(std::string(USC_CONFIG_DIR) + "/" + name); }

std::string data_rows(const std::string& csv) {
    std::istringstream is(csv);
    std::string out;
    for (std::string line; std::getline(is, line);) {
        if (line.rfind("#", 0) != 0) out += line + "\n";
    }
    return out;
}

config_error parse_error(const std::string& text, std::optional<Mode> mode = std::nullopt) {
    try {
        parse_config(text, mode);
    } catch (const config_error& e) {
        return e;
    }
    ADD_FAILURE() << "expected config_error for:\n" << text;
    return config_error("", "", 0);
}

const char* small_spectra = R"(
[run]
mode = spectra
[sim]
delta = 1
G_over_delta = 0.3
gamma_a = 0.5
gamma_b = 0.5
gamma_L = 0.01
[grid]
min = -2
max = 2
points = 41
)";

}  // namespace

TEST(Config, BundledDeviceConfig) {
    const RunConfig c = parse_config(bundled("fig3.conf"));
    EXPECT_EQ(c.mode, Mode::spectra);
    EXPECT_EQ(c.units, Units::cyclic);
    EXPECT_NEAR(c.delta, two_pi * 50e6, 1e-3);
    EXPECT_NEAR(c.gamma_L, two_pi * 0.5e6, 1e-6);
    EXPECT_NEAR(*c.omega_a, two_pi * 9e9, 1.0);
    EXPECT_EQ(c.G_over_delta, 0.47);
    EXPECT_EQ(c.grid.points, 2001u);
}

TEST(Config, BundledGroundStateConfig) {
    const RunConfig c = parse_config(bundled("fig1.conf"));
    EXPECT_EQ(c.mode, Mode::ground_state);
    const auto g = c.grid.expand();
    ASSERT_EQ(g.size(), 49u);
    EXPECT_EQ(g.front(), 0.01);
    EXPECT_EQ(g.back(), 0.49);
}

TEST(Config, EmptyDocumentListsRequiredKeys) {
    const auto e = parse_error("");
    EXPECT_NE(std::string(e.what()).find("run.mode"), std::string::npos);
    const auto s = parse_error("", Mode::spectra);
    const std::string msg = s.what();
    for (const char* k : {"sim.delta", "sim.gamma_a", "sim.gamma_b", "sim.gamma_L"}) {
        EXPECT_NE(msg.find(k), std::string::npos) << k;
    }
}

TEST(Config, NegativeRateNamesKeyAndLine) {
    const auto e = parse_error("mode = spectra\n[sim]\ndelta = 1\ngamma_a = 1\ngamma_b = 1\ngamma_L = -1\n");
    EXPECT_EQ(e.key, "sim.gamma_L");
    EXPECT_EQ(e.line, 6);
    EXPECT_NE(std::string(e.what()).find("gamma_L"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("line 6"), std::string::npos);
}

TEST(Config, UnknownKeysAndSectionsRejected) {
    EXPECT_EQ(parse_error("mode = spectra\n[sim]\ndelta = 1\ngama_a = 1\n").key, "sim.gama_a");
    EXPECT_EQ(parse_error("mode = spectra\n[simulation]\n").line, 2);
    EXPECT_EQ(parse_error("mode = spectra\nmode = sweep\n").line, 2);
    EXPECT_EQ(parse_error("mode = warp\n").key, "run.mode");
    EXPECT_EQ(parse_error("mode = spectra\n[sim]\ndelta = fast\ngamma_a = 1\ngamma_b = 1\ngamma_L = 1\n").key, "sim.delta");
    EXPECT_EQ(parse_error("mode = spectra\n[sim]\ndelta\n").line, 3);
}

TEST(Config, SubcommandConflict) {
    EXPECT_EQ(parse_error("mode = spectra\n", Mode::stability).key, "run.mode");
}

TEST(Config, CommentsAndDefaults) {
    const RunConfig c = parse_config(std::string(small_spectra) + "# trailing\n; also a comment\n");
    EXPECT_EQ(c.thermal_occupancy, 0.0);
    EXPECT_EQ(c.workers, 0u);
    EXPECT_FALSE(c.omega_a.has_value());
}

TEST(Config, GridFlag) {
    const GridSpec g = parse_grid_flag("-1:1:5");
    EXPECT_EQ(g.expand(), (std::vector<double>{-1, -0.5, 0, 0.5, 1}));
    EXPECT_THROW(parse_grid_flag("1:0:5"), config_error);
    EXPECT_THROW(parse_grid_flag("0:1"), config_error);
    EXPECT_THROW(parse_grid_flag("0:1:x"), config_error);
}

TEST(Config, ResolvedTextRoundTrips) {
    for (const char* name : {"fig1.conf", "fig3.conf"}) {
        const RunConfig c = parse_config(bundled(name));
        RunConfig back = parse_config(resolved_config_text(c));
        back.units = c.units;
        EXPECT_TRUE(back == c) << name;
    }
}

TEST(Run, GroundStateColumnsAndValues) {
    RunConfig c = parse_config(bundled("fig1.conf"));
    c.grid = {0, 0, 0, {0.0, 0.3, 0.6}};
    const RunResult r = execute(c, {false});
    EXPECT_EQ(r.status, exit_flagged);  // G = 0.6 is invalid
    const std::string rows = data_rows(r.csv);
    EXPECT_EQ(rows.substr(0, rows.find('\n')),
              "G_over_delta,var_Xa,var_Ya,db_Xa,db_Ya,var_Xminus,var_Xplus,var_Yplus,var_Yminus,epr_minus_plus,"
              "epr_plus_minus,omega1,omega2,valid");
    EXPECT_NE(rows.find("\n0.3,0.592927"), std::string::npos);
    EXPECT_NE(rows.find("0.474341649"), std::string::npos);
    EXPECT_NE(rows.find("\n0.6,nan"), std::string::npos);
    EXPECT_NE(r.csv.find("# flagged:"), std::string::npos);
}

TEST(Run, SpectraColumns) {
    const RunResult r = execute(parse_config(small_spectra), {false});
    EXPECT_EQ(r.status, exit_ok);
    const std::string rows = data_rows(r.csv);
    EXPECT_EQ(rows.substr(0, rows.find('\n')),
              "omega_over_delta,S_Xa_dB,S_Ya_dB,S_Xb_dB,S_Yb_dB,S_Xminus_dB,S_Yplus_dB,S_Xplus_dB,S_Yminus_dB,"
              "epr_min,epr_min_over_vacuum");
    EXPECT_EQ(std::count(rows.begin(), rows.end(), '\n'), 42);
    EXPECT_NE(r.csv.find("epr_dip_omega_over_delta"), std::string::npos);
}

TEST(Run, UnstableSpectraAreFlagged) {
    std::string text = small_spectra;
    text.replace(text.find("0.3"), 3, "0.8");
    const RunResult r = execute(parse_config(text), {false});
    EXPECT_EQ(r.status, exit_flagged);
    EXPECT_NE(r.csv.find("unstable"), std::string::npos);
}

TEST(Run, StabilityCrossesOnce) {
    std::string text = small_spectra;
    text.replace(text.find("mode = spectra"), 14, "mode = stability");
    text = text.substr(0, text.find("[grid]"));
    const RunResult r = execute(parse_config(text), {false});
    EXPECT_NE(r.csv.find("# zero_crossings = 1"), std::string::npos);
    EXPECT_NE(r.csv.find("# threshold_G_over_delta = 0.53251"), std::string::npos);
}

TEST(Run, CalibrateReport) {
    const char* text = R"(
mode = calibrate
units = cyclic
[sim]
gamma_a = 25e6
gamma_b = 25e6
gamma_L = 0.5e6
[pump]
chi = 1e6
c_B = 15
c_R = 15
omega_a = 9e9
omega_b = 6e9
delta = 50e6
[feasibility]
xi_a = 0.02
xi_b = 0.02
Q_a = 400
Q_b = 400
target_G_over_delta = 0.3
)";
    const RunResult r = execute(parse_config(text), {false});
    EXPECT_EQ(r.status, exit_ok);
    EXPECT_NE(r.csv.find("G_B_over_delta,0.3\n"), std::string::npos);
    EXPECT_NE(r.csv.find("feasibility_bound,2\n"), std::string::npos);
    EXPECT_NE(r.csv.find("delta_over_gamma_a,2\n"), std::string::npos);

    // a strict frequency-ratio threshold trips the regime check while the system stays stable
    RunConfig tight = parse_config(text);
    tight.rwa_frequency_ratio = 1e-4;
    const RunResult refused = execute(tight, {false});
    EXPECT_EQ(refused.status, exit_flagged);
    EXPECT_EQ(refused.csv.find("G_B_over_delta"), std::string::npos);
    tight.force = true;
    const RunResult forced = execute(tight, {false});
    EXPECT_EQ(forced.status, exit_ok);
    EXPECT_NE(forced.csv.find("(forced)"), std::string::npos);
}

TEST(Run, OracleAgreement) {
    const RunResult r = execute(parse_config("mode = oracle\n[ground_state]\nomega_alpha = 1\n[fock]\nn_max = 20\n"),
                                {false});
    EXPECT_EQ(r.status, exit_ok);
    std::istringstream rows(data_rows(r.csv));
    std::string line;
    std::getline(rows, line);
    int n = 0;
    while (std::getline(rows, line)) {
        const double diff = std::stod(line.substr(line.find(',') + 1));
        EXPECT_LT(diff, 1e-3) << line;
        ++n;
    }
    EXPECT_EQ(n, 3);
}

TEST(Run, DeterministicOutput) {
    RunConfig c = parse_config(small_spectra);
    const std::string one = execute(c, {false}).csv;
    c.workers = 3;
    const std::string three = execute(c, {false}).csv;
    EXPECT_EQ(data_rows(one), data_rows(three));
    c.workers = 0;
    EXPECT_EQ(execute(c, {false}).csv, one);
    EXPECT_NE(execute(c, {true}).csv.find("# timestamp: "), std::string::npos);
}

TEST(Run, HeaderReproducesRun) {
    const RunConfig c = parse_config(bundled("fig3.conf"));
    RunConfig small = c;
    small.grid = {-1.0, 1.0, 21, {}};
    const std::string csv = execute(small, {false}).csv;
    const RunConfig again = parse_config(extract_config(csv));
    EXPECT_EQ(execute(again, {false}).csv, csv);
}

TEST(Run, CyclicAndAngularUnitsAgree) {
    const char* cyclic = "mode = spectra\nunits = cyclic\n[sim]\ndelta = 50e6\nG_over_delta = 0.3\n"
                         "gamma_a = 25e6\ngamma_b = 25e6\ngamma_L = 0.5e6\n[grid]\nmin = -2\nmax = 2\npoints = 21\n";
    std::ostringstream angular;
    angular.precision(17);
    angular << "mode = spectra\n[sim]\ndelta = " << two_pi * 50e6 << "\nG_over_delta = 0.3\ngamma_a = "
            << two_pi * 25e6 << "\ngamma_b = " << two_pi * 25e6 << "\ngamma_L = " << two_pi * 0.5e6
            << "\n[grid]\nmin = -2\nmax = 2\npoints = 21\n";
    const RunConfig a = parse_config(cyclic), b = parse_config(angular.str());
    const auto sa = spectra_sweep(detail::sim_params(a, a.G_over_delta), {0.0, 0.5 * a.delta});
    const auto sb = spectra_sweep(detail::sim_params(b, b.G_over_delta), {0.0, 0.5 * b.delta});
    for (std::size_t k = 0; k < 2; ++k) {
        EXPECT_LT((sa.sigma[k].matrix() - sb.sigma[k].matrix()).cwiseAbs().maxCoeff(), 1e-12);
    }
}

TEST(Ellipses, Vacuum) {
    for (const auto& e : ellipses(CovarianceMatrix::vacuum())) {
        EXPECT_NEAR(e.semi_major, std::sqrt(0.5), 1e-12);
        EXPECT_NEAR(e.semi_minor, std::sqrt(0.5), 1e-12);
        EXPECT_EQ(e.angle, 0.0);
    }
}

TEST(Ellipses, GroundStateModeA) {
    const auto v = ground_state_covariance({1.0, 1.0, 0.3});
    const Ellipse a = ellipses(v)[0];
    EXPECT_EQ(a.block, "a");
    EXPECT_NEAR(a.semi_major, std::sqrt(0.59293), 1e-5);
    EXPECT_NEAR(a.semi_minor, std::sqrt(0.47434), 1e-5);
    EXPECT_NEAR(a.angle, 0.0, 1e-12);
    const Ellipse r = ellipses(rotate_quadrature(v, pi / 4, 0))[0];
    EXPECT_NEAR(r.semi_major, a.semi_major, 1e-12);
    EXPECT_NEAR(r.semi_minor, a.semi_minor, 1e-12);
    EXPECT_NEAR(r.angle, pi / 4, 1e-12);
}

TEST(Ellipses, TwoModePairsAreNormalized) {
    const auto v = ground_state_covariance({1.0, 1.0, 0.3});
    const auto es = ellipses(v);
    // (X_a + X_b)/sqrt2 has half of Var(X_a + X_b)
    EXPECT_NEAR(es[3].semi_minor, std::sqrt(0.5 * std::sqrt(0.4)), 1e-9);
}

TEST(Ellipses, RejectsUnphysical) {
    EXPECT_THROW(ellipses(CovarianceMatrix::scaled_identity(0.2)), unphysical_state);
}

TEST(Ellipses, WrittenFromRun) {
    const auto dir = std::filesystem::temp_directory_path() / "usc_cli_test";
    std::filesystem::create_directories(dir);
    RunConfig c = parse_config(bundled("fig1.conf"));
    c.output = (dir / "gs.csv").string();
    c.ellipses = (dir / "gs_ellipses.csv").string();
    c.grid = {0, 0, 0, {0.3}};
    std::ostringstream log;
    EXPECT_EQ(run(c, {false}, log), exit_ok);
    const std::string text = read_file(c.ellipses);
    EXPECT_EQ(text.substr(0, text.find('\n')), "G_over_delta,block,semi_major,semi_minor,angle");
    EXPECT_NE(text.find("0.3,a,0.770017"), std::string::npos);

    const std::string single = (dir / "single.csv").string();
    emit_ellipses(CovarianceMatrix::vacuum(), single);
    EXPECT_NE(read_file(single).find("state,a,0.707106781187,0.707106781187,0"), std::string::npos);
}

#ifdef USC_SIM_PATH
namespace {

int exit_code(const std::string& args) {
    const std::string cmd = std::string(USC_SIM_PATH) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST(Tool, ExitCodes) {
    const std::string cfg = std::string(USC_CONFIG_DIR) + "/fig3.conf";
    EXPECT_EQ(exit_code("spectra --config " + cfg + " --grid -1:1:11 --no-timestamp"), 0);
    EXPECT_EQ(exit_code("stability --config " + cfg), 1);  // mode conflict
    EXPECT_EQ(exit_code("spectra"), 1);                   // missing keys
    EXPECT_EQ(exit_code("spectra --config " + cfg + " --grid 1:0:3"), 1);
    EXPECT_EQ(exit_code("frobnicate"), 1);
    EXPECT_EQ(exit_code("ground-state --config " + std::string(USC_CONFIG_DIR) + "/fig1.conf --grid 0.4:0.6:3"), 2);
}

TEST(Tool, UnitFlagOverridesDocument) {
    const auto dir = std::filesystem::temp_directory_path() / "usc_cli_test";
    std::filesystem::create_directories(dir);
    const std::string cfg = std::string(USC_CONFIG_DIR) + "/fig3.conf";
    const std::string out = (dir / "angular.csv").string();
    EXPECT_EQ(exit_code("spectra --config " + cfg + " --units angular --grid -1:1:3 --no-timestamp -o " + out), 0);
    EXPECT_NE(read_file(out).find("# delta = 5e+07\n"), std::string::npos);
}
#endif
