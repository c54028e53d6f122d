#ifndef SCRAMBLE_ENSEMBLE_HPP
#define SCRAMBLE_ENSEMBLE_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "scramble/core.hpp"
#include "scramble/dynamics.hpp"
#include "scramble/models.hpp"

namespace scramble {

enum class InitialState { all_up, neel };

enum class Diagnostic { otoc_avg, mutual_info, tmi, open_otoc, bound, decomposition };

struct TimeGrid {
    double t_max = 10.0;
    int n_points = 101;

    std::vector<double> times() const;
    void validate() const;
};

struct ExperimentConfig {
    std::variant<SykSpec, LmgSpec> model;
    InitialState initial_state = InitialState::all_up;
    std::optional<DecoherenceBasis> decoherence;  // nullopt = closed dynamics
    double gamma_over_j = 0.0;
    TimeGrid grid;
    int n_realizations = 100;
    uint64_t master_seed = 0;
    std::set<Diagnostic> diagnostics = {Diagnostic::otoc_avg};
    std::vector<int> partition_a = {0};
    std::vector<int> partition_b;  // empty = complement of partition_a
    std::vector<int> partition_c;  // empty = complement of a+b (tmi only)
    // Number of O_B draws for the averaged OTOC; 0 = enumerate, -1 = auto
    // (enumerate up to 3 support qubits, 256 draws beyond).
    int otoc_ob_samples = -1;
    bool include_identity = true;

    int n_qubits() const;
    void validate() const;
};

struct Trace {
    std::vector<double> mean;
    std::vector<double> stderr;
    int n = 0;  // realizations aggregated
};

struct TimeSeries {
    std::vector<double> times;
    std::map<std::string, Trace> traces;
};

// Deterministic child seed for one disorder realization: SplitMix64
// applied to master_seed + (index+1) * golden-ratio increment. Injective
// in the index for any fixed master seed.
uint64_t realization_seed(uint64_t master_seed, uint64_t index);

// Single-realization traces (stderr fields hold the within-realization
// sampling error of sampled Pauli averages, 0 otherwise).
TimeSeries run_realization(const ExperimentConfig& config, int index);

struct EnsembleFailure {
    int realization_index;
    std::string message;
};

struct EnsembleResult {
    TimeSeries series;
    std::vector<EnsembleFailure> failures;
};

// Mean and standard error over realizations, pointwise in time. Failed
// realizations are excluded and reported. Aggregation runs in index
// order, so output is independent of thread count.
EnsembleResult run_ensemble(const ExperimentConfig& config, int n_threads = 0);

}  // namespace scramble

#endif
