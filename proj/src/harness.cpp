#include "reducesim/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <ostream>
#include <thread>

namespace reducesim {

namespace {

std::size_t step_count(double t_max, double dt) {
    return static_cast<std::size_t>(std::max(1.0, std::ceil(t_max / dt - 1e-9)));
}

Sample sample_of(const SystemState& state) {
    Sample s;
    s.t = state.time;
    for (const auto& c : state.components) {
        s.weights.push_back(c.weight);
        s.statuses.push_back(c.status);
    }
    return s;
}

// Pre-collapse evolution of a scenario. Deterministic: the trigger never feeds back
// into it, so every seed shares the same path up to its hit.
class Evolver {
public:
    struct StepRecord {
        InboundCurrents inbound;
        double unreduced = 1.0;
        double error = 0.0;  // |total - 1| after the step
        double drift = 0.0;  // |total change| across the step
    };

    Evolver(const ScenarioSpec& spec, double dt)
        : graph_(current_graph(spec)), state_(initial_state(spec)), dt_(dt) {
        for (const auto& c : spec.components) {
            if (c.relabel) relabels_.push_back({c.relabel->at, c.id, c.relabel->label});
        }
        std::stable_sort(relabels_.begin(), relabels_.end(),
                         [](const Relabel& a, const Relabel& b) { return a.at < b.at; });
    }

    [[nodiscard]] SystemState& state() noexcept { return state_; }
    [[nodiscard]] const CurrentGraph& graph() const noexcept { return graph_; }

    StepRecord step(std::size_t k) {
        const double t = static_cast<double>(k) * dt_;
        state_.time = t;
        apply_relabels(t);

        StepRecord rec;
        rec.unreduced = 0.0;
        for (const auto& c : state_.components) {
            if (c.status != Status::Ready) rec.unreduced += c.weight;
        }

        const double before = total_weight(state_);
        auto result = advance(state_, graph_, dt_);
        for (std::size_t i = 0; i < graph_.edges().size(); ++i) {
            const auto& e = graph_.edges()[i];
            if (result.transferred[i] <= 0.0 || state_.at(e.to).status != Status::Ready) continue;
            const double rate = result.transferred[i] / dt_;
            auto it = std::lower_bound(rec.inbound.begin(), rec.inbound.end(), e.to,
                                       [](const auto& entry, ComponentId id) { return entry.first < id; });
            if (it != rec.inbound.end() && it->first == e.to) {
                it->second += rate;
            } else {
                rec.inbound.emplace(it, e.to, rate);
            }
        }
        state_ = std::move(result.state);
        carry_consciousness(state_, graph_);

        const double after = total_weight(state_);
        rec.error = std::abs(after - SystemState::total_weight_reference);
        rec.drift = std::abs(after - before);
        return rec;
    }

private:
    struct Relabel {
        double at;
        ComponentId id;
        std::string label;
    };

    void apply_relabels(double t) {
        std::optional<ComponentId> heaviest;
        while (next_relabel_ < relabels_.size() && relabels_[next_relabel_].at <= t + 0.5 * dt_) {
            const auto& r = relabels_[next_relabel_++];
            auto& c = state_.at(r.id);
            c.pulse_label = r.label;
            if (!heaviest || c.weight > state_.at(*heaviest).weight + kConsciousTieTolerance) heaviest = r.id;
        }
        // The relabel is the observer's classical drift into awareness of the pulse.
        if (heaviest && !conscious_component(state_)) transfer_consciousness(state_, std::nullopt, *heaviest, t);
    }

    CurrentGraph graph_;
    SystemState state_;
    double dt_;
    std::vector<Relabel> relabels_;
    std::size_t next_relabel_ = 0;
};

fixed128_t to_fixed(double error) {
    const double clamped = std::min(std::abs(error), 0x1p20);
    return static_cast<fixed128_t>(std::ldexp(clamped, 100));
}

std::size_t hist_bin(double t, double t_max, std::size_t bins) {
    if (!(t > 0.0)) return 0;
    const auto b = static_cast<std::size_t>(t / t_max * static_cast<double>(bins));
    return std::min(b, bins - 1);
}

[[noreturn]] void rethrow_annotated(const Error& e, const std::string& where) {
    throw Error(e.code(), where + ": " + e.what());
}

}  // namespace

Trajectory run_once(const ScenarioSpec& spec, std::uint64_t seed, const RunOptions& options) {
    const double dt = options.dt.value_or(spec.schedule.dt);
    if (!(dt > 0.0)) throw Error(ErrorCode::InvalidArgument, "dt must be positive");
    const std::size_t stride = std::max<std::size_t>(1, options.stride);
    const std::size_t n_steps = step_count(spec.schedule.t_max, dt);
    const auto chain = spec.cascade_chain;
    const auto chain_profiles = cascade_profiles(spec);

    Evolver evolver(spec, dt);
    StochasticTrigger trigger(seed, options.law);
    Trajectory out;
    out.samples.push_back(sample_of(evolver.state()));
    out.max_conservation_error = std::abs(total_weight(evolver.state()) - SystemState::total_weight_reference);

    bool cascading = false;
    CurrentGraph chain_graph;
    double cascade_end = 0.0;
    constexpr std::size_t kMaxExtraSteps = 10'000'000;

    std::size_t k = 0;
    for (; k < n_steps || cascading; ++k) {
        if (k >= n_steps + kMaxExtraSteps) throw Error(ErrorCode::InvalidArgument, "cascade did not complete");
        const double t = static_cast<double>(k) * dt;
        auto& state = evolver.state();
        try {
            if (!state.collapsed()) {
                const auto rec = evolver.step(k);
                out.max_conservation_error = std::max(out.max_conservation_error, rec.error);
                out.max_step_drift = std::max(out.max_step_drift, rec.drift);
                if (const auto hit = trigger.accumulate_and_test(rec.inbound, dt, t, rec.unreduced)) {
                    state = collapse(state, *hit);
                    if (chain.size() > 1 && chain.front() == hit->target) {
                        chain_graph = cascade_graph(chain, chain_profiles, hit->t_sc);
                        cascade_end = hit->t_sc;
                        for (const auto& e : chain_graph.edges()) {
                            cascade_end = std::max(cascade_end, profile_end(e.profile));
                        }
                        cascading = true;
                    }
                }
            } else if (cascading) {
                state.time = t;
                state = cascade_step(state, chain_graph, dt);
                const bool done = std::isfinite(cascade_end)
                    ? state.time >= cascade_end - 0.5 * dt
                    : state.at(chain.back()).weight >= SystemState::total_weight_reference - 1e-12;
                if (done) cascading = false;
            }
        } catch (const Error& e) {
            rethrow_annotated(e, "t=" + format_real(t));
        }
        state.time = static_cast<double>(k + 1) * dt;
        const bool last = k + 1 >= n_steps && !cascading;
        if ((k + 1) % stride == 0 || last) out.samples.push_back(sample_of(state));
    }
    out.steps = k;
    out.final_state = evolver.state();
    return out;
}

double RunStats::mean_conservation_error() const noexcept {
    if (n_trials == 0) return 0.0;
    return std::ldexp(static_cast<double>(conservation_error_sum), -100) / static_cast<double>(n_trials);
}

RunStats& RunStats::operator+=(const RunStats& other) {
    if (hit_time_histogram.empty()) {
        hit_time_histogram.assign(other.hit_time_histogram.size(), 0);
        t_max = other.t_max;
    }
    if (!other.hit_time_histogram.empty() &&
        (other.hit_time_histogram.size() != hit_time_histogram.size() || other.t_max != t_max)) {
        throw Error(ErrorCode::InvalidArgument, "cannot merge stats with different histogram layouts");
    }
    n_trials += other.n_trials;
    no_hit_count += other.no_hit_count;
    conservation_error_sum += other.conservation_error_sum;
    for (const auto& [id, count] : other.branch_counts) branch_counts[id] += count;
    for (std::size_t i = 0; i < other.hit_time_histogram.size(); ++i) {
        hit_time_histogram[i] += other.hit_time_histogram[i];
    }
    return *this;
}

std::size_t default_thread_count() noexcept {
    if (const char* env = std::getenv("REDUCESIM_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && v > 0) return static_cast<std::size_t>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

Ensemble::Ensemble(const ScenarioSpec& spec, const MonteCarloOptions& options)
    : law_(options.law),
      dt_(options.dt.value_or(spec.schedule.dt)),
      t_max_(spec.schedule.t_max),
      bins_(std::max<std::size_t>(1, options.histogram_bins)),
      threads_(options.threads ? options.threads : default_thread_count()) {
    if (!(dt_ > 0.0)) throw Error(ErrorCode::InvalidArgument, "dt must be positive");
    const std::size_t n_steps = step_count(t_max_, dt_);
    Evolver evolver(spec, dt_);

    step_start_.reserve(n_steps);
    clock_after_.reserve(n_steps);
    double clock = 0.0;
    double worst = std::abs(total_weight(evolver.state()) - SystemState::total_weight_reference);
    for (std::size_t k = 0; k < n_steps; ++k) {
        const double t = static_cast<double>(k) * dt_;
        Evolver::StepRecord rec;
        try {
            rec = evolver.step(k);
        } catch (const Error& e) {
            rethrow_annotated(e, "t=" + format_real(t));
        }
        clock = StochasticTrigger::advance_clock(law_, clock, rec.inbound, dt_, rec.unreduced);
        worst = std::max(worst, rec.error);
        step_start_.push_back(t);
        clock_after_.push_back(clock);
        unreduced_.push_back(rec.unreduced);
        running_error_.push_back(worst);
        inbound_.push_back(std::move(rec.inbound));
    }
}

TrialOutcome Ensemble::trial(std::uint64_t seed) const {
    const double u = threshold_from_seed(seed);
    const double threshold = law_ == TriggerLaw::Current ? u : -std::log(u);
    const auto it = std::lower_bound(clock_after_.begin(), clock_after_.end(), threshold);
    if (it == clock_after_.end()) return TrialOutcome{std::nullopt, running_error_.back()};
    const auto k = static_cast<std::size_t>(it - clock_after_.begin());
    const double before = k == 0 ? 0.0 : clock_after_[k - 1];
    const auto target = StochasticTrigger::attribute(law_, before, threshold, inbound_[k], dt_, unreduced_[k]);
    return TrialOutcome{HitEvent{step_start_[k] + dt_, target}, running_error_[k]};
}

RunStats Ensemble::run(std::uint64_t n, std::uint64_t base_seed) const {
    auto chunk = [this](std::uint64_t first, std::uint64_t count) {
        RunStats stats;
        stats.t_max = t_max_;
        stats.hit_time_histogram.assign(bins_, 0);
        for (std::uint64_t i = 0; i < count; ++i) {
            const auto seed = first + i;
            const auto outcome = trial(seed);
            ++stats.n_trials;
            stats.conservation_error_sum += to_fixed(outcome.conservation_error);
            if (outcome.hit) {
                ++stats.branch_counts[outcome.hit->target];
                ++stats.hit_time_histogram[hist_bin(outcome.hit->t_sc, t_max_, bins_)];
            } else {
                ++stats.no_hit_count;
            }
        }
        return stats;
    };

    const auto workers = static_cast<std::uint64_t>(std::min<std::uint64_t>(threads_, std::max<std::uint64_t>(n, 1)));
    if (workers <= 1) return chunk(base_seed, n);

    std::vector<RunStats> partial(workers);
    {
        std::vector<std::jthread> pool;
        const std::uint64_t per = n / workers;
        const std::uint64_t extra = n % workers;
        std::uint64_t first = base_seed;
        for (std::uint64_t w = 0; w < workers; ++w) {
            const std::uint64_t count = per + (w < extra ? 1 : 0);
            pool.emplace_back([&, w, first, count] { partial[w] = chunk(first, count); });
            first += count;
        }
    }
    RunStats total;
    for (const auto& p : partial) total += p;
    return total;
}

RunStats run_monte_carlo(const ScenarioSpec& spec, std::uint64_t n, std::uint64_t base_seed,
                         const MonteCarloOptions& options) {
    if (n < 1) throw Error(ErrorCode::InvalidArgument, "need at least one trial");
    return Ensemble(spec, options).run(n, base_seed);
}

std::string format_real(double value) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", value == 0.0 ? 0.0 : value);
    return buf;
}

void emit_timeseries(const Trajectory& trajectory, std::ostream& out) {
    const std::size_t n = trajectory.final_state.size();
    out << 't';
    for (std::size_t i = 0; i < n; ++i) out << ",w_" << i;
    for (std::size_t i = 0; i < n; ++i) out << ",status_" << i;
    out << '\n';
    for (const auto& s : trajectory.samples) {
        out << format_real(s.t);
        for (double w : s.weights) out << ',' << format_real(w);
        for (auto st : s.statuses) out << ',' << to_string(st);
        out << '\n';
    }
}

void emit_events(const Trajectory& trajectory, std::ostream& out) {
    out << "t,event_kind,component,detail\n";
    for (const auto& event : trajectory.events().events()) {
        if (const auto* hit = std::get_if<HitEvent>(&event)) {
            out << format_real(hit->t_sc) << ",hit," << index_of(hit->target) << ",\n";
        } else if (const auto* change = std::get_if<StatusChange>(&event)) {
            out << format_real(change->t) << ",status_change," << index_of(change->component) << ','
                << to_string(change->from) << "->" << to_string(change->to) << '\n';
        } else {
            const auto& c = std::get<CascadeStep>(event);
            out << format_real(c.t) << ",cascade_step," << index_of(c.to) << ",from=" << index_of(c.from) << '\n';
        }
    }
}

void emit_stats(const RunStats& stats, std::ostream& out) {
    const double n = static_cast<double>(stats.n_trials);
    auto fraction = [n](std::uint64_t count) { return format_real(n > 0 ? static_cast<double>(count) / n : 0.0); };
    out << "component,count,fraction\n";
    for (const auto& [id, count] : stats.branch_counts) {
        out << index_of(id) << ',' << count << ',' << fraction(count) << '\n';
    }
    out << "none," << stats.no_hit_count << ',' << fraction(stats.no_hit_count) << '\n';
}

void emit_histogram(const RunStats& stats, std::ostream& out) {
    out << "bin_start,bin_end,count\n";
    const auto bins = stats.hit_time_histogram.size();
    for (std::size_t i = 0; i < bins; ++i) {
        const double width = stats.t_max / static_cast<double>(bins);
        out << format_real(static_cast<double>(i) * width) << ',' << format_real(static_cast<double>(i + 1) * width)
            << ',' << stats.hit_time_histogram[i] << '\n';
    }
}

namespace {

template <class Writer>
void write_file(const std::string& path, Writer&& writer) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::IoError, "cannot open " + path);
    writer(out);
    out.flush();
    if (!out) throw Error(ErrorCode::IoError, "write failed for " + path);
}

}  // namespace

void emit(const Trajectory& trajectory, EmitFormat format, const std::string& path) {
    switch (format) {
    case EmitFormat::Timeseries: return write_file(path, [&](std::ostream& o) { emit_timeseries(trajectory, o); });
    case EmitFormat::Events: return write_file(path, [&](std::ostream& o) { emit_events(trajectory, o); });
    default: throw Error(ErrorCode::InvalidArgument, "a trajectory emits timeseries or events");
    }
}

void emit(const RunStats& stats, EmitFormat format, const std::string& path) {
    switch (format) {
    case EmitFormat::Stats: return write_file(path, [&](std::ostream& o) { emit_stats(stats, o); });
    case EmitFormat::Histogram: return write_file(path, [&](std::ostream& o) { emit_histogram(stats, o); });
    default: throw Error(ErrorCode::InvalidArgument, "monte carlo emits stats or histogram");
    }
}

}  // namespace reducesim
