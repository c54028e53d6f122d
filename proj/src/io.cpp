#include "scramble/io.hpp"

#include <cstdio>
#include <ctime>
#include <fstream>
#include <json.hpp>
#include <sstream>

namespace scramble {

using nlohmann::json;

namespace {

const std::map<std::string, Diagnostic> kDiagnosticNames = {
    {"otoc_avg", Diagnostic::otoc_avg},   {"mutual_info", Diagnostic::mutual_info},
    {"tmi", Diagnostic::tmi},             {"open_otoc", Diagnostic::open_otoc},
    {"bound", Diagnostic::bound},         {"decomposition", Diagnostic::decomposition},
};

std::string diagnostic_name(Diagnostic d) {
    for (const auto& [name, val] : kDiagnosticNames)
        if (val == d) return name;
    throw std::logic_error("unnamed diagnostic");
}

[[noreturn]] void fail_field(const std::string& field, const std::string& why) {
    throw std::invalid_argument("config field '" + field + "': " + why);
}

template <typename T>
T take(json& j, const std::string& key, const T& fallback) {
    if (!j.contains(key)) return fallback;
    T out;
    try {
        out = j.at(key).get<T>();
    } catch (const json::exception& e) {
        fail_field(key, e.what());
    }
    j.erase(key);
    return out;
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("config parse error: ") + e.what());
    }
    if (!j.is_object()) throw std::invalid_argument("config must be a JSON object");

    const int version = take<int>(j, "schema_version", kConfigSchemaVersion);
    if (version != kConfigSchemaVersion)
        fail_field("schema_version", "unsupported version " + std::to_string(version));

    ExperimentConfig c;
    const std::string model = take<std::string>(j, "model", "");
    if (model == "syk") {
        SykSpec spec;
        spec.n_majorana = take<int>(j, "n_majorana", spec.n_majorana);
        spec.q = take<int>(j, "q", spec.q);
        spec.j_scale = take<double>(j, "j_scale", spec.j_scale);
        c.model = spec;
    } else if (model == "lmg") {
        LmgSpec spec;
        spec.n_spins = take<int>(j, "n_spins", spec.n_spins);
        spec.j_scale = take<double>(j, "j_scale", spec.j_scale);
        c.model = spec;
    } else {
        fail_field("model", "must be \"syk\" or \"lmg\"");
    }

    c.master_seed = take<uint64_t>(j, "seed", 0);

    const std::string state = take<std::string>(j, "initial_state", "all_up");
    if (state == "all_up") c.initial_state = InitialState::all_up;
    else if (state == "neel") c.initial_state = InitialState::neel;
    else fail_field("initial_state", "must be \"all_up\" or \"neel\"");

    const std::string basis = take<std::string>(j, "decoherence", "none");
    if (basis == "none") c.decoherence.reset();
    else if (basis == "computational") c.decoherence = DecoherenceBasis::computational;
    else if (basis == "energy") c.decoherence = DecoherenceBasis::energy;
    else fail_field("decoherence", "must be \"none\", \"computational\" or \"energy\"");

    c.gamma_over_j = take<double>(j, "gamma_over_j", 0.0);
    c.grid.t_max = take<double>(j, "t_max", 10.0);
    c.grid.n_points = take<int>(j, "n_points", 101);
    c.n_realizations = take<int>(j, "n_realizations", 100);

    const std::vector<std::string> diag_names =
        take<std::vector<std::string>>(j, "diagnostics", {"otoc_avg"});
    c.diagnostics.clear();
    for (const std::string& name : diag_names) {
        auto it = kDiagnosticNames.find(name);
        if (it == kDiagnosticNames.end()) fail_field("diagnostics", "unknown entry '" + name + "'");
        c.diagnostics.insert(it->second);
    }

    c.partition_a = take<std::vector<int>>(j, "partition_a", {0});
    c.partition_b = take<std::vector<int>>(j, "partition_b", {});
    c.partition_c = take<std::vector<int>>(j, "partition_c", {});
    c.otoc_ob_samples = take<int>(j, "otoc_ob_samples", -1);
    c.include_identity = take<bool>(j, "include_identity", true);

    for (auto it = j.begin(); it != j.end(); ++it)
        throw std::invalid_argument("unknown config key '" + it.key() + "'");

    try {
        c.validate();
    } catch (const std::invalid_argument& e) {
        throw std::invalid_argument(std::string("config validation: ") + e.what());
    }
    return c;
}

std::string config_to_json(const ExperimentConfig& config) {
    json j;
    j["schema_version"] = kConfigSchemaVersion;
    if (const SykSpec* s = std::get_if<SykSpec>(&config.model)) {
        j["model"] = "syk";
        j["n_majorana"] = s->n_majorana;
        j["q"] = s->q;
        j["j_scale"] = s->j_scale;
    } else {
        const LmgSpec& lmg = std::get<LmgSpec>(config.model);
        j["model"] = "lmg";
        j["n_spins"] = lmg.n_spins;
        j["j_scale"] = lmg.j_scale;
    }
    j["seed"] = config.master_seed;
    j["initial_state"] = config.initial_state == InitialState::all_up ? "all_up" : "neel";
    j["decoherence"] = !config.decoherence ? "none"
                       : (*config.decoherence == DecoherenceBasis::computational
                              ? "computational"
                              : "energy");
    j["gamma_over_j"] = config.gamma_over_j;
    j["t_max"] = config.grid.t_max;
    j["n_points"] = config.grid.n_points;
    j["n_realizations"] = config.n_realizations;
    std::vector<std::string> diag_names;
    for (Diagnostic d : config.diagnostics) diag_names.push_back(diagnostic_name(d));
    j["diagnostics"] = diag_names;
    j["partition_a"] = config.partition_a;
    j["partition_b"] = config.partition_b;
    j["partition_c"] = config.partition_c;
    j["otoc_ob_samples"] = config.otoc_ob_samples;
    j["include_identity"] = config.include_identity;
    return j.dump(2);
}

std::string manifest_to_json(const RunManifest& manifest) {
    json j;
    j["config"] = json::parse(manifest.config_json);
    j["artifact_version"] = manifest.artifact_version;
    j["timestamp"] = manifest.timestamp;
    j["elapsed_seconds"] = manifest.elapsed_seconds;
    return j.dump(2);
}

RunManifest manifest_from_json(const std::string& text) {
    json j = json::parse(text);
    RunManifest m;
    m.config_json = j.at("config").dump(2);
    m.artifact_version = j.at("artifact_version").get<std::string>();
    m.timestamp = j.at("timestamp").get<std::string>();
    m.elapsed_seconds = j.at("elapsed_seconds").get<double>();
    return m;
}

std::string utc_timestamp_now() {
    const std::time_t now = std::time(nullptr);
    std::tm tm_utc{};
    gmtime_r(&now, &tm_utc);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    return buf;
}

namespace {

std::string format_value(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.11e", x);
    return buf;
}

std::string manifest_path_for(const std::string& csv_path) {
    const size_t dot = csv_path.find_last_of('.');
    const size_t slash = csv_path.find_last_of('/');
    const bool has_ext = dot != std::string::npos && (slash == std::string::npos || dot > slash);
    return (has_ext ? csv_path.substr(0, dot) : csv_path) + ".manifest.json";
}

}  // namespace

std::string series_to_csv(const TimeSeries& series) {
    std::ostringstream out;
    out << "time";
    for (const auto& [name, tr] : series.traces) out << ',' << name << "_mean," << name << "_stderr";
    out << '\n';
    for (size_t j = 0; j < series.times.size(); ++j) {
        out << format_value(series.times[j]);
        for (const auto& [name, tr] : series.traces)
            out << ',' << format_value(tr.mean[j]) << ',' << format_value(tr.stderr[j]);
        out << '\n';
    }
    return out.str();
}

void emit_csv(const TimeSeries& series, const RunManifest& manifest, const std::string& path) {
    {
        std::ofstream f(path, std::ios::binary);
        if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
        f << series_to_csv(series);
        if (!f) throw std::runtime_error("write failure on '" + path + "'");
    }
    const std::string mpath = manifest_path_for(path);
    std::ofstream f(mpath, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open '" + mpath + "' for writing");
    f << manifest_to_json(manifest) << '\n';
    if (!f) throw std::runtime_error("write failure on '" + mpath + "'");
}

TimeSeries load_csv(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open '" + path + "'");
    std::string header;
    if (!std::getline(f, header)) throw std::runtime_error("empty CSV file");

    std::vector<std::string> columns;
    {
        std::istringstream hs(header);
        std::string col;
        while (std::getline(hs, col, ',')) columns.push_back(col);
    }
    if (columns.empty() || columns[0] != "time" || (columns.size() - 1) % 2 != 0)
        throw std::runtime_error("malformed CSV header");

    TimeSeries ts;
    std::vector<std::string> names;
    for (size_t k = 1; k < columns.size(); k += 2) {
        const std::string suffix = "_mean";
        if (columns[k].size() <= suffix.size() ||
            columns[k].substr(columns[k].size() - suffix.size()) != suffix)
            throw std::runtime_error("malformed CSV header");
        names.push_back(columns[k].substr(0, columns[k].size() - suffix.size()));
        ts.traces.emplace(names.back(), Trace{});
    }

    std::string line;
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string cell;
        std::getline(ls, cell, ',');
        ts.times.push_back(std::stod(cell));
        for (const std::string& name : names) {
            Trace& tr = ts.traces.at(name);
            std::getline(ls, cell, ',');
            tr.mean.push_back(std::stod(cell));
            std::getline(ls, cell, ',');
            tr.stderr.push_back(std::stod(cell));
        }
    }
    return ts;
}

}  // namespace scramble
