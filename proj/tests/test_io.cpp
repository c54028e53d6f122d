#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "scramble/io.hpp"

using namespace scramble;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

TimeSeries sample_series() {
    TimeSeries s;
    s.times = {0.0, 0.5, 1.0};
    Trace a;
    a.mean = {1.0, 0.123456789012345, 3.14159e-7};
    a.stderr = {0.0, 0.01, 0.002};
    a.n = 10;
    s.traces["otoc_avg"] = a;
    Trace b;
    b.mean = {0.0, 0.7, 1.2345678901234};
    b.stderr = {0.0, 0.0, 0.0};
    b.n = 10;
    s.traces["mutual_info"] = b;
    return s;
}

}  // namespace

TEST_CASE("minimal config gets documented defaults") {
    const ExperimentConfig cfg = parse_config(R"({"model": "syk"})");
    const SykSpec& spec = std::get<SykSpec>(cfg.model);
    CHECK(spec.n_majorana == 12);
    CHECK(spec.q == 4);
    CHECK(spec.j_scale == doctest::Approx(1.0));
    CHECK(cfg.initial_state == InitialState::all_up);
    CHECK_FALSE(cfg.decoherence.has_value());
    CHECK(cfg.grid.t_max == doctest::Approx(10.0));
    CHECK(cfg.grid.n_points == 101);
    CHECK(cfg.n_realizations == 100);
    CHECK(cfg.partition_a == std::vector<int>{0});
    CHECK(cfg.diagnostics == std::set<Diagnostic>{Diagnostic::otoc_avg});
}

TEST_CASE("config parsing errors") {
    SUBCASE("unknown keys are rejected by name") {
        CHECK_THROWS_WITH_AS(parse_config(R"({"model": "syk", "foo": 1})"),
                             doctest::Contains("foo"), std::invalid_argument);
    }
    SUBCASE("missing model") {
        CHECK_THROWS_AS(parse_config("{}"), std::invalid_argument);
    }
    SUBCASE("odd Majorana count") {
        CHECK_THROWS_AS(parse_config(R"({"model": "syk", "n_majorana": 7})"),
                        std::invalid_argument);
    }
    SUBCASE("bad enum value") {
        CHECK_THROWS_AS(parse_config(R"({"model": "syk", "initial_state": "sideways"})"),
                        std::invalid_argument);
    }
    SUBCASE("malformed JSON") {
        CHECK_THROWS_AS(parse_config("{"), std::invalid_argument);
    }
    SUBCASE("wrong field type") {
        CHECK_THROWS_AS(parse_config(R"({"model": "syk", "n_points": "many"})"),
                        std::invalid_argument);
    }
}

TEST_CASE("config round trip through canonical JSON") {
    const std::string text = R"({
        "model": "lmg", "n_spins": 4, "initial_state": "neel",
        "decoherence": "energy", "gamma_over_j": 0.05,
        "t_max": 5.0, "n_points": 11, "n_realizations": 7,
        "seed": 123, "diagnostics": ["mutual_info", "tmi"],
        "partition_a": [0], "partition_b": [1], "partition_c": [2]
    })";
    const ExperimentConfig cfg = parse_config(text);
    const std::string canon = config_to_json(cfg);
    const ExperimentConfig again = parse_config(canon);
    CHECK(config_to_json(again) == canon);
    CHECK(std::get<LmgSpec>(again.model).n_spins == 4);
    CHECK(again.initial_state == InitialState::neel);
    CHECK(again.decoherence == DecoherenceBasis::energy);
    CHECK(again.gamma_over_j == doctest::Approx(0.05));
    CHECK(again.master_seed == 123);
    CHECK(again.diagnostics == std::set<Diagnostic>{Diagnostic::mutual_info, Diagnostic::tmi});
}

TEST_CASE("csv serialization") {
    const TimeSeries s = sample_series();
    const std::string csv = series_to_csv(s);

    SUBCASE("header lists every trace with mean and stderr columns") {
        const std::string header = csv.substr(0, csv.find('\n'));
        CHECK(header ==
              "time,mutual_info_mean,mutual_info_stderr,otoc_avg_mean,otoc_avg_stderr");
    }
    SUBCASE("serialization is byte-stable") {
        CHECK(csv == series_to_csv(sample_series()));
    }
    SUBCASE("one row per time point") {
        int lines = 0;
        for (char c : csv)
            if (c == '\n') ++lines;
        CHECK(lines == 4);  // header + 3 rows
    }
}

TEST_CASE("csv file round trip") {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "scramble_io_test";
    fs::create_directories(dir);
    const std::string path = (dir / "series.csv").string();

    RunManifest manifest;
    manifest.config_json = config_to_json(parse_config(R"({"model": "syk"})"));
    manifest.timestamp = utc_timestamp_now();
    manifest.elapsed_seconds = 1.25;
    const TimeSeries s = sample_series();
    emit_csv(s, manifest, path);

    const TimeSeries back = load_csv(path);
    REQUIRE(back.times.size() == s.times.size());
    for (size_t j = 0; j < s.times.size(); ++j) {
        CHECK(back.times[j] == doctest::Approx(s.times[j]).epsilon(1e-10));
        for (const auto& [name, trace] : s.traces) {
            const Trace& other = back.traces.at(name);
            const double scale = std::max(1.0, std::abs(trace.mean[j]));
            CHECK(std::abs(other.mean[j] - trace.mean[j]) / scale < 1e-10);
            CHECK(std::abs(other.stderr[j] - trace.stderr[j]) < 1e-10);
        }
    }

    SUBCASE("manifest sits next to the csv and round-trips") {
        const std::string mpath = (dir / "series.manifest.json").string();
        REQUIRE(fs::exists(mpath));
        const RunManifest loaded = manifest_from_json(slurp(mpath));
        CHECK(loaded.config_json == manifest.config_json);
        CHECK(loaded.artifact_version == kArtifactVersion);
        CHECK(loaded.timestamp == manifest.timestamp);
        CHECK(loaded.elapsed_seconds == doctest::Approx(1.25));
    }
    fs::remove_all(dir);
}

TEST_CASE("timestamp format") {
    const std::string ts = utc_timestamp_now();
    REQUIRE(ts.size() == 20);  // e.g. 2026-01-02T03:04:05Z
    CHECK(ts[4] == '-');
    CHECK(ts[10] == 'T');
    CHECK(ts.back() == 'Z');
}
