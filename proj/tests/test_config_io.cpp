#include <cstdio>
#include <fstream>

#include "doctest.h"
#include "qst/cli.hpp"
#include "qst/output.hpp"

using namespace qst;

namespace {

std::string temp_path(const std::string& name) {
    return std::string("qst_test_") + name;
}

SweepResult synthetic_detuning_result() {
    SweepResult result;
    result.kind = SweepKind::detuning;
    result.columns = {"D",     "kappa_inv_us", "fidelity",    "lambda2_over_lambda1",
                      "t1_ns", "t2_ns",        "peak_photon", "min_eigenvalue",
                      "max_trace_error"};
    const double kappas[3] = {0.1, 1.0, 10.0};
    for (int ik = 0; ik < 3; ++ik)
        for (int id = 0; id < 17; ++id) {
            SweepRow row;
            row.x1 = 4.0 + id;
            row.x2 = kappas[ik];
            row.fidelity = 0.97 + 0.001 * id + 0.0001 * ik + 1.23456789e-9;
            row.lambda_ratio = 1.0;
            row.t1_ns = 25.0;
            row.t2_ns = 5.0;
            row.peak_photon = 0.025;
            row.min_eigenvalue = -1e-12;
            row.max_trace_error = 1e-13;
            result.rows.push_back(row);
        }
    result.provenance = default_config();
    result.finalize_summary();
    return result;
}

}  // namespace

TEST_CASE("empty config yields the reference defaults") {
    const RunConfig config = parse_config("");
    CHECK(config.nu_a_ghz == 2.5);
    CHECK(config.nu_b_ghz == 8.0);
    CHECK(config.delta_ghz == 1.0);
    CHECK(config.big_delta_ghz == 0.8);
    CHECK(config.detuning_ratio == 10.0);
    CHECK(config.omega_mhz == 100.0);
    CHECK(config.g_ab_ratio == 0.1);
    CHECK(config.kappa_inv_us == 0.1);
    CHECK(config.gamma_relax_inv_us == 5.0);
    CHECK(config.gamma_phi_inv_us == 2.0);
    CHECK(config.n_ph == 3);
    CHECK(config.dt_ps == 1.0);

    // derived qutrit frequencies match the quoted device values
    const DeviceParams p = device_from(config);
    CHECK(angular_to_ghz(p.w_eg[0]) == doctest::Approx(3.5));
    CHECK(angular_to_ghz(p.w_fg[0]) == doctest::Approx(8.8));
    CHECK(angular_to_mhz(p.g[0]) == doctest::Approx(100.0));
}

TEST_CASE("single-key override leaves everything else untouched") {
    const RunConfig config = parse_config("kappa_inv_us = 10\n");
    CHECK(config.kappa_inv_us == 10.0);
    CHECK(config.gamma_relax_inv_us == 5.0);
    CHECK(config.provided_keys.count("kappa_inv_us") == 1);
    CHECK(config.provided_keys.size() == 1);
}

TEST_CASE("config rejections name the offending key") {
    SUBCASE("negative detuning") {
        try {
            parse_config("delta_GHz = -1\n");
            FAIL("expected ConfigError");
        } catch (const ConfigError& e) {
            CHECK(e.key() == "delta_GHz");
        }
    }
    SUBCASE("unknown key") {
        try {
            parse_config("delta_ghz = 1\n");  // wrong case
            FAIL("expected ConfigError");
        } catch (const ConfigError& e) {
            CHECK(e.key() == "delta_ghz");
        }
    }
    SUBCASE("unparsable number") {
        CHECK_THROWS_AS(parse_config("dt_ps = fast\n"), ConfigError);
    }
    SUBCASE("negative lifetime") {
        CHECK_THROWS_AS(parse_config("gamma_phi_inv_us = -2\n"), ConfigError);
    }
    SUBCASE("bad constraint mode") {
        CHECK_THROWS_AS(parse_config("constraint_mode = exact\n"), ConfigError);
    }
    SUBCASE("unnormalized amplitude state") {
        CHECK_THROWS_AS(parse_config("state_amplitudes = true\nalpha_re = 1.0\nbeta_re = 1.0\n"),
                        ConfigError);
    }
}

TEST_CASE("comments, blank lines, and inf lifetimes parse") {
    const RunConfig config = parse_config(
        "# reference point\n"
        "\n"
        "kappa_inv_us = inf   # unitary limit\n"
        "D = 12\n");
    CHECK(config.detuning_ratio == 12.0);
    CHECK(rates_from(config).kappa_a == 0.0);
}

TEST_CASE("shipped default config text parses to the defaults") {
    const RunConfig parsed = parse_config(default_config_text());
    const RunConfig defaults = default_config();
    CHECK(parsed.nu_a_ghz == defaults.nu_a_ghz);
    CHECK(parsed.detuning_ratio == defaults.detuning_ratio);
    CHECK(parsed.dt_ps == defaults.dt_ps);
    CHECK(parsed.sweep_D_count == defaults.sweep_D_count);
    CHECK(parsed.state_gamma == defaults.state_gamma);
    CHECK(parsed.sweep_kappa_inv_us == defaults.sweep_kappa_inv_us);
}

TEST_CASE("config echo marks defaults and covers every key") {
    RunConfig config = parse_config("kappa_inv_us = 10\n");
    const auto echo = config_echo(config);
    bool saw_kappa = false, saw_delta = false;
    for (const auto& [key, value] : echo) {
        if (key == "kappa_inv_us") {
            saw_kappa = true;
            CHECK(value == "10");
        }
        if (key == "delta_GHz") {
            saw_delta = true;
            CHECK(value.find("(default)") != std::string::npos);
        }
    }
    CHECK(saw_kappa);
    CHECK(saw_delta);
}

TEST_CASE("csv emission and round trip") {
    const SweepResult result = synthetic_detuning_result();
    const ResultTable table = to_table(result);
    CHECK(table.rows.size() == 51);  // 3 kappa values x 17 D points

    const std::string path = temp_path("roundtrip.csv");
    emit_csv(table, path);
    const ResultTable parsed = parse_csv(path);
    REQUIRE(parsed.columns == table.columns);
    REQUIRE(parsed.rows.size() == table.rows.size());
    for (size_t r = 0; r < table.rows.size(); ++r)
        for (size_t c = 0; c < table.rows[r].size(); ++c)
            CHECK(parsed.rows[r][c] == table.rows[r][c]);  // exact: 17 digits emitted
    std::remove(path.c_str());
}

TEST_CASE("csv output is deterministic apart from the wall clock") {
    const SweepResult result = synthetic_detuning_result();
    const std::string path_a = temp_path("det_a.csv");
    const std::string path_b = temp_path("det_b.csv");
    emit_csv(to_table(result), path_a);
    emit_csv(to_table(result), path_b);
    std::ifstream a(path_a), b(path_b);
    std::string line_a, line_b;
    while (std::getline(a, line_a)) {
        REQUIRE(std::getline(b, line_b));
        if (line_a.find("written_utc") != std::string::npos) continue;
        CHECK(line_a == line_b);
    }
    CHECK_FALSE(std::getline(b, line_b));
    std::remove(path_a.c_str());
    std::remove(path_b.c_str());
}

TEST_CASE("line plot svg has one polyline per kappa") {
    const SweepResult result = synthetic_detuning_result();
    const std::string path = temp_path("plot.svg");
    emit_svg(result, path);
    std::ifstream in(path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    size_t count = 0, pos = 0;
    while ((pos = text.find("<polyline", pos)) != std::string::npos) {
        ++count;
        pos += 9;
    }
    CHECK(count == 3);
    CHECK(text.find(">D<") != std::string::npos);
    CHECK(text.find("fidelity") != std::string::npos);
    std::remove(path.c_str());
}

TEST_CASE("heatmap svg has one cell per grid point") {
    SweepResult result;
    result.kind = SweepKind::state_grid;
    result.columns = {"gamma", "theta_rad", "fidelity", "lambda2_over_lambda1", "t1_ns",
                      "t2_ns", "peak_photon", "min_eigenvalue", "max_trace_error"};
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 7; ++j) {
            SweepRow row;
            row.x1 = i / 4.0;
            row.x2 = j * 0.9;
            row.fidelity = 0.99 - 0.001 * i - 0.0005 * j;
            result.rows.push_back(row);
        }
    result.provenance = default_config();
    result.finalize_summary();

    const std::string path = temp_path("heat.svg");
    emit_svg(result, path);
    std::ifstream in(path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    size_t count = 0, pos = 0;
    while ((pos = text.find("<rect", pos)) != std::string::npos) {
        ++count;
        pos += 5;
    }
    CHECK(count == 5 * 7 + 1);  // one cell per point plus the background
    std::remove(path.c_str());
}

TEST_CASE("unwritable output paths are reported") {
    const SweepResult result = synthetic_detuning_result();
    CHECK_THROWS_AS(emit_csv(to_table(result), "/nonexistent_dir/out.csv"), std::runtime_error);
    CHECK_THROWS_AS(emit_svg(result, "/nonexistent_dir/out.svg"), std::runtime_error);
}

TEST_CASE("cli dispatch exit codes") {
    SUBCASE("unknown subcommand exits 2") { CHECK(cli_dispatch({"frobnicate"}) == 2); }
    SUBCASE("help exits 0") { CHECK(cli_dispatch({"--help"}) == 0); }
    SUBCASE("print-config exits 0") { CHECK(cli_dispatch({"print-config"}) == 0); }
    SUBCASE("bad config key exits 2") {
        CHECK(cli_dispatch({"transfer", "--set", "delta_GHz=-1"}) == 2);
    }
    SUBCASE("bad option exits 2") { CHECK(cli_dispatch({"transfer", "--frobnicate"}) == 2); }
    SUBCASE("missing config file exits 2") {
        CHECK(cli_dispatch({"transfer", "--config", "no_such_file.cfg"}) == 2);
    }
}
