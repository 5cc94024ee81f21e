#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "icmi/config.hpp"

using namespace icmi;

namespace {

ConfigFile from_text(const std::string& text)
{
    std::istringstream in(text);
    return ConfigFile::from_stream(in, "<test>");
}

// Temp file helper for the file: susceptibility source.
struct TempFile {
    std::string path;
    explicit TempFile(const std::string& contents)
    {
        static int counter = 0;
        path = std::string("icmi_test_") + std::to_string(counter++) + ".tmp";
        std::ofstream out(path);
        out << contents;
    }
    ~TempFile() { std::remove(path.c_str()); }
};

} // namespace

TEST_SUITE("config") {

TEST_CASE("sections, comments, and types parse")
{
    const ConfigFile cfg = from_text("# full-line comment\n"
                                     "[disease]\n"
                                     "p_max = 0.8   # trailing comment\n"
                                     "d_min = 60\n"
                                     "mode = count\n"
                                     "\n"
                                     "[scenario]\n"
                                     "run_out = yes\n"
                                     "iterations = 50\n"
                                     "[sweep]\n"
                                     "fractions = 0.1, 0.3, 0.5\n");
    CHECK(cfg.get_double("disease", "p_max", 0.0) == 0.8);
    CHECK(cfg.get_int("disease", "d_min", 0) == 60);
    CHECK(cfg.get("disease", "mode", "") == "count");
    CHECK(cfg.get_bool("scenario", "run_out", false));
    CHECK(cfg.get_int("scenario", "iterations", 0) == 50);
    CHECK(cfg.get_doubles("sweep", "fractions", {}) == std::vector<double>{0.1, 0.3, 0.5});

    // Fallbacks for everything absent.
    CHECK(cfg.get_double("disease", "p_epsilon", 0.123) == 0.123);
    CHECK(cfg.get_int("delays", "t1", 7) == 7);
    CHECK_FALSE(cfg.has("risk", "seed"));
}

TEST_CASE("typos fail loudly")
{
    CHECK_THROWS_AS(from_text("[diseases]\n"), ConfigError);
    CHECK_THROWS_AS(from_text("[disease]\np_maxx = 1\n"), ConfigError);
    CHECK_THROWS_AS(from_text("p_max = 1\n"), ConfigError);         // key before any section
    CHECK_THROWS_AS(from_text("[disease\np_max = 1\n"), ConfigError); // unterminated header
    CHECK_THROWS_AS(from_text("[disease]\np_max 1\n"), ConfigError); // missing '='
    CHECK_THROWS_AS(from_text("[disease]\nd_min = abc\n").get_int("disease", "d_min", 0),
                    ConfigError);
    CHECK_THROWS_AS(from_text("[disease]\np_max = 1..2\n").get_double("disease", "p_max", 0),
                    ConfigError);
    CHECK_THROWS_AS(from_text("[scenario]\nrun_out = maybe\n").get_bool("scenario", "run_out", false),
                    ConfigError);
}

TEST_CASE("environment variables override file values")
{
    setenv("ICMI_DISEASE_P_MAX", "0.25", 1);
    setenv("ICMI_SCENARIO_ITERATIONS", "9", 1);
    const ConfigFile cfg = from_text("[disease]\np_max = 0.8\n");
    unsetenv("ICMI_DISEASE_P_MAX");
    unsetenv("ICMI_SCENARIO_ITERATIONS");

    CHECK(cfg.get_double("disease", "p_max", 0.0) == 0.25);
    CHECK(cfg.get_int("scenario", "iterations", 200) == 9);
}

TEST_CASE("susceptibility grammar covers its three sources")
{
    const SusceptibilitySpec c = parse_susceptibility("constant:0.35");
    CHECK(c.kind == SusceptibilitySpec::Kind::constant);
    CHECK(c.constant_value == 0.35);

    const SusceptibilitySpec m = parse_susceptibility("mixture:0.1,0.9,0.8");
    CHECK(m.kind == SusceptibilitySpec::Kind::mixture);
    CHECK(m.young_value == 0.1);
    CHECK(m.old_value == 0.9);
    CHECK(m.young_fraction == 0.8);

    const TempFile file("0.25\n# comment\n0.75\n\n0.5\n");
    const SusceptibilitySpec f = parse_susceptibility("file:" + file.path);
    CHECK(f.kind == SusceptibilitySpec::Kind::per_node);
    CHECK(f.per_node == std::vector<double>{0.25, 0.75, 0.5});

    CHECK_THROWS_AS(parse_susceptibility("0.5"), ConfigError);
    CHECK_THROWS_AS(parse_susceptibility("gaussian:0.5"), ConfigError);
    CHECK_THROWS_AS(parse_susceptibility("mixture:0.1,0.9"), ConfigError);
    CHECK_THROWS_AS(parse_susceptibility("file:/no/such/file"), ConfigError);
}

TEST_CASE("builders apply defaults and validate")
{
    const ConfigFile empty = from_text("");

    const DiseaseParams params = disease_from_config(empty);
    CHECK(params.d_min == 0);
    CHECK(params.d_max == 3600);
    CHECK(params.p_max == 0.5);
    CHECK(params.p_epsilon == 0.001);
    CHECK(params.mode == ContagionMode::duration_based);

    const ProgressionDelays delays = delays_from_config(empty);
    CHECK(delays.t1 == 7);
    CHECK(delays.incubation_symptomatic == 5);

    const NetworkOptions net = network_from_config(empty);
    CHECK(net.rssi_threshold == -90);
    CHECK(net.scan_interval == 300);
    CHECK(net.window_length == 86400);

    const ScenarioConfig scenario = scenario_from_config(empty);
    CHECK(scenario.iterations == 200);
    CHECK(scenario.patient_zero_count == 1);
    CHECK(scenario.master_seed == 1);
    CHECK(scenario.run_out);
    CHECK(scenario.susceptibility.kind == SusceptibilitySpec::Kind::mixture);
    CHECK(scenario.susceptibility.young_fraction == 0.8);

    const RiskOptions risk = risk_from_config(empty);
    CHECK(risk.counts.ready());
    CHECK(risk.counts.max_count == 120);
    CHECK(risk.replicas == 200);
    CHECK(risk.d_min_values == std::vector<double>{0, 60, 300, 900});
    CHECK(risk.p_max_values == std::vector<double>{1.0, 0.75, 0.5, 0.25});
}

TEST_CASE("builders reject inconsistent values")
{
    // p_epsilon too big for the d_min/d_max joint: kernel would dip.
    CHECK_THROWS_AS(disease_from_config(from_text("[disease]\nd_min = 60\np_epsilon = 0.5\n")),
                    ConfigError);
    CHECK_THROWS_AS(disease_from_config(from_text("[disease]\nmode = magic\n")), ConfigError);
    CHECK_THROWS_AS(delays_from_config(from_text("[delays]\nt3 = -1\n")), ConfigError);
    CHECK_THROWS_AS(scenario_from_config(from_text("[scenario]\niterations = 0\n")), ConfigError);
    CHECK_THROWS_AS(network_from_config(from_text("[network]\nscan_interval = 0\n")), ConfigError);
    CHECK_THROWS_AS(network_from_config(from_text("[network]\nwindow_length = 100\n")),
                    ConfigError); // not a multiple of the scan interval
    CHECK_THROWS_AS(sweep_from_config(from_text("")), ConfigError); // fractions required
    CHECK_THROWS_AS(sweep_from_config(from_text("[sweep]\nfractions = 0.5\nsplit_k = 0\n")),
                    ConfigError);
    CHECK_THROWS_AS(risk_from_config(from_text("[risk]\nreplicas = 0\n")), ConfigError);

    const SweepOptions sweep = sweep_from_config(from_text("[sweep]\nfractions = 0.2,0.4\n"));
    CHECK(sweep.fractions.size() == 2);
    CHECK(sweep.split_ks == std::vector<int>{1});
}

TEST_CASE("missing config file raises a configuration error")
{
    CHECK_THROWS_AS(ConfigFile::load("/no/such/config.conf"), ConfigError);
}

} // TEST_SUITE
