#ifndef SCRAMBLE_IO_HPP
#define SCRAMBLE_IO_HPP

#include <string>

#include "scramble/ensemble.hpp"

namespace scramble {

inline constexpr const char* kArtifactVersion = "1.0.0";
inline constexpr int kConfigSchemaVersion = 1;

// JSON configuration document. Recognized keys (all optional unless
// noted): schema_version, model ("syk"|"lmg", required), n_majorana, q,
// j_scale, n_spins, seed, initial_state ("all_up"|"neel"), decoherence
// ("none"|"computational"|"energy"), gamma_over_j, t_max, n_points,
// n_realizations, diagnostics (list), partition_a, partition_b,
// partition_c, otoc_ob_samples, include_identity. Unknown keys are
// rejected by name.
ExperimentConfig parse_config(const std::string& text);

// Canonical serialized form; parse_config(config_to_json(c)) == c.
std::string config_to_json(const ExperimentConfig& config);

struct RunManifest {
    std::string config_json;  // canonical form
    std::string artifact_version = kArtifactVersion;
    std::string timestamp;  // ISO-8601 UTC
    double elapsed_seconds = 0.0;
};

std::string manifest_to_json(const RunManifest& manifest);
RunManifest manifest_from_json(const std::string& text);

std::string utc_timestamp_now();

// CSV with header `time,<trace>_mean,<trace>_stderr,...`, traces in
// name order, 12 significant digits. Writes a sibling <stem>.manifest.json.
void emit_csv(const TimeSeries& series, const RunManifest& manifest, const std::string& path);

// Serialize a series to the CSV text without touching the filesystem.
std::string series_to_csv(const TimeSeries& series);

// Re-reads an emitted CSV (mean/stderr columns; trace n is not stored).
TimeSeries load_csv(const std::string& path);

}  // namespace scramble

#endif
