#pragma once

#include "reducesim/reduction.hpp"
#include "reducesim/scenario.hpp"
#include "reducesim/state.hpp"

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace reducesim {

__extension__ typedef __int128 fixed128_t;

struct RunOptions {
    std::size_t stride = 1;           // record every k-th step
    std::optional<double> dt;         // overrides the scenario's dt
    TriggerLaw law = TriggerLaw::Current;
};

struct Sample {
    double t = 0.0;
    std::vector<double> weights;
    std::vector<Status> statuses;
    bool operator==(const Sample&) const = default;
};

struct Trajectory {
    std::vector<Sample> samples;
    SystemState final_state;
    double max_conservation_error = 0.0;  // |total - 1| over pre-collapse steps
    double max_step_drift = 0.0;          // |total change| of a single pre-collapse step
    std::size_t steps = 0;

    [[nodiscard]] const EventLog& events() const noexcept { return final_state.log; }
    bool operator==(const Trajectory&) const = default;
};

[[nodiscard]] Trajectory run_once(const ScenarioSpec& spec, std::uint64_t seed, const RunOptions& options = {});

struct RunStats {
    std::uint64_t n_trials = 0;
    std::map<ComponentId, std::uint64_t> branch_counts;
    std::vector<std::uint64_t> hit_time_histogram;  // equal bins over [0, t_max]
    double t_max = 0.0;
    std::uint64_t no_hit_count = 0;
    fixed128_t conservation_error_sum = 0;  // fixed point, units of 2^-100

    [[nodiscard]] double mean_conservation_error() const noexcept;
    /// Commutative, associative merge of two disjoint trial sets.
    RunStats& operator+=(const RunStats& other);
    bool operator==(const RunStats&) const = default;
};

struct MonteCarloOptions {
    std::size_t histogram_bins = 100;
    std::size_t threads = 0;  // 0: REDUCESIM_THREADS, else hardware concurrency
    std::optional<double> dt;
    TriggerLaw law = TriggerLaw::Current;
};

struct TrialOutcome {
    std::optional<HitEvent> hit;
    double conservation_error = 0.0;
    bool operator==(const TrialOutcome&) const = default;
};

/// Deterministic pre-collapse evolution of a scenario, shared by every seed.
/// Each trial reduces to locating its threshold on the recorded trigger clock.
class Ensemble {
public:
    Ensemble(const ScenarioSpec& spec, const MonteCarloOptions& options = {});

    [[nodiscard]] TrialOutcome trial(std::uint64_t seed) const;
    [[nodiscard]] RunStats run(std::uint64_t n, std::uint64_t base_seed) const;
    [[nodiscard]] std::size_t steps() const noexcept { return clock_after_.size(); }

private:
    TriggerLaw law_;
    double dt_;
    double t_max_;
    std::size_t bins_;
    std::size_t threads_;
    std::vector<double> step_start_;
    std::vector<double> clock_after_;
    std::vector<double> unreduced_;
    std::vector<InboundCurrents> inbound_;
    std::vector<double> running_error_;
};

/// Seeds base_seed .. base_seed + n - 1.
[[nodiscard]] RunStats run_monte_carlo(const ScenarioSpec& spec, std::uint64_t n, std::uint64_t base_seed,
                                       const MonteCarloOptions& options = {});

/// Worker count: REDUCESIM_THREADS if set and positive, else hardware concurrency.
[[nodiscard]] std::size_t default_thread_count() noexcept;

void emit_timeseries(const Trajectory& trajectory, std::ostream& out);
void emit_events(const Trajectory& trajectory, std::ostream& out);
void emit_stats(const RunStats& stats, std::ostream& out);
void emit_histogram(const RunStats& stats, std::ostream& out);

enum class EmitFormat { Timeseries, Events, Stats, Histogram };

/// Writes to `path`; throws Error(IoError) if the file cannot be written.
void emit(const Trajectory& trajectory, EmitFormat format, const std::string& path);
void emit(const RunStats& stats, EmitFormat format, const std::string& path);

/// Fixed 12-significant-digit formatting used by every CSV artifact.
[[nodiscard]] std::string format_real(double value);

}  // namespace reducesim
