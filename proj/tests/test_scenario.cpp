#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "lmcast/scenario.hpp"

using namespace lmcast;
using namespace lmcast::scenario;

TEST_CASE("parse key=value text with comments and blanks") {
    auto s = parse_scenario_text(
        "# loss sweep\n"
        "scenario_id = sweep1\n"
        "seed=42\n"
        "nodes = 8\n"
        "loss = 0.07\n"
        "mtu=1000\n"
        "delay_us = 250\n"
        "channels=3\n"
        "expansion = 1.5\n"
        "compress_level = 6\n"
        "payload = synthetic:30000\n"
        "strategy = multicast\n"
        "\n"
        "repetitions = 2\n");
    CHECK(s.scenario_id == "sweep1");
    CHECK(s.seed == 42);
    CHECK(s.n_nodes == 8);
    CHECK(s.loss_p == doctest::Approx(0.07));
    CHECK(s.mtu == 1000);
    CHECK(s.delay == 250);
    CHECK(s.session.channel_count == 3);
    CHECK(s.session.expansion.num == 3);
    CHECK(s.session.expansion.den == 2);
    CHECK(s.session.compression.enabled);
    CHECK(s.session.compression.level == 6);
    CHECK(s.payload == "synthetic:30000");
    CHECK(s.strategy == StrategySet::Multicast);
    CHECK(s.repetitions == 2);
}

TEST_CASE("compress_level 0 disables compression") {
    Scenario s;
    apply_override(s, "compress_level", "0");
    CHECK_FALSE(s.session.compression.enabled);
}

TEST_CASE("unknown keys and malformed lines fail loudly") {
    Scenario s;
    CHECK_THROWS_AS(apply_override(s, "bogus", "1"), std::invalid_argument);
    CHECK_THROWS_AS(apply_override(s, "strategy", "carrier-pigeon"),
                    std::invalid_argument);
    CHECK_THROWS_AS(parse_scenario_text("just words\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_scenario_file("/nonexistent.scenario"),
                    std::runtime_error);
}

TEST_CASE("payload sources") {
    Scenario s;
    s.payload = "zeros:100";
    CHECK(materialize_payload(s) == Bytes(100, 0));

    s.payload = "synthetic:1000";
    s.seed = 5;
    Bytes a = materialize_payload(s);
    Bytes b = materialize_payload(s);
    CHECK(a.size() == 1000);
    CHECK(a == b);
    s.seed = 6;
    CHECK(a != materialize_payload(s));

    s.payload = std::string(LMCAST_SOURCE_DIR) +
                "/fixtures/matrices/tridiag.mtx";
    Bytes mtx = materialize_payload(s);
    CHECK(mtx.size() ==
          std::filesystem::file_size(s.payload));
}

TEST_CASE("run emits a header plus one row per strategy per repetition") {
    Scenario s;
    s.scenario_id = "t";
    s.n_nodes = 2;
    s.payload = "synthetic:20000";
    s.repetitions = 2;
    s.session.compression.enabled = false;
    auto lines = run_scenario(s);
    REQUIRE(lines.size() == 1 + 2 * 2);
    CHECK(lines[0] == bcast::csv_header());
    CHECK(lines[1].rfind("t/0,tree,", 0) == 0);
    CHECK(lines[2].rfind("t/0,multicast,", 0) == 0);
    CHECK(lines[3].rfind("t/1,tree,", 0) == 0);
    CHECK(lines[4].rfind("t/1,multicast,", 0) == 0);
}

TEST_CASE("identical descriptors give byte-identical CSV") {
    Scenario s;
    s.n_nodes = 3;
    s.loss_p = 0.05;
    s.payload = "synthetic:40000";
    s.repetitions = 2;
    s.strategy = StrategySet::Multicast;
    CHECK(run_scenario(s) == run_scenario(s));
}

TEST_CASE("repetitions draw distinct seeds") {
    Scenario s;
    s.n_nodes = 2;
    s.loss_p = 0.10;
    s.payload = "synthetic:40000";
    s.repetitions = 2;
    s.strategy = StrategySet::Multicast;
    auto lines = run_scenario(s);
    REQUIRE(lines.size() == 3);
    // Same scenario, different rep seed: loss realizations differ, so the
    // rows should not be identical past the scenario_id column.
    CHECK(lines[1].substr(lines[1].find(',')) !=
          lines[2].substr(lines[2].find(',')));
}

TEST_CASE("invalid run parameters") {
    Scenario s;
    s.repetitions = 0;
    CHECK_THROWS_AS(run_scenario(s), std::invalid_argument);
    s = Scenario{};
    s.n_nodes = 0;
    CHECK_THROWS_AS(run_scenario(s), std::invalid_argument);
}

TEST_CASE("plot scripts are written next to the CSV") {
    namespace fs = std::filesystem;
    const auto dir = fs::temp_directory_path() / "lmcast_plot_test";
    fs::remove_all(dir);
    auto scripts = emit_plots("results.csv", dir.string());
    CHECK(scripts.size() == 4);
    for (const auto& p : scripts) {
        CHECK(fs::exists(p));
        std::ifstream f(p);
        std::string body((std::istreambuf_iterator<char>(f)),
                         std::istreambuf_iterator<char>());
        CHECK(body.find("plot") != std::string::npos);
        CHECK(body.find("results.csv") != std::string::npos);
    }
    fs::remove_all(dir);
}
