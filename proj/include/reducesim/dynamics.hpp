#pragma once

#include "reducesim/state.hpp"

#include <limits>
#include <variant>
#include <vector>

namespace reducesim {

/// Rate J from t = 0 onwards, until the source is exhausted.
struct ConstantFlow {
    double rate = 0.0;
    bool operator==(const ConstantFlow&) const = default;
};

/// Rate rising linearly from 0 at `t_start` to `peak` at `t_end`, then held at `peak`.
struct RampFlow {
    double peak = 0.0;
    double t_start = 0.0;
    double t_end = 0.0;
    bool operator==(const RampFlow&) const = default;
};

/// Raised-cosine pulse (2 total / duration) sin^2(pi (t - t_start) / duration) on
/// [t_start, t_start + duration]; integrates to exactly `total`.
struct RaisedCosineFlow {
    double t_start = 0.0;
    double duration = 1.0;
    double total = 1.0;
    bool operator==(const RaisedCosineFlow&) const = default;
};

using FlowProfile = std::variant<ConstantFlow, RampFlow, RaisedCosineFlow>;

/// Instantaneous profile rate, before any gating.
[[nodiscard]] double profile_rate(const FlowProfile& profile, double t) noexcept;
/// Closed-form integral of the profile rate over [a, b].
[[nodiscard]] double profile_integral(const FlowProfile& profile, double a, double b) noexcept;
/// Time after which the rate is identically zero (infinity for open-ended profiles).
[[nodiscard]] double profile_end(const FlowProfile& profile) noexcept;
/// Same profile with every time parameter delayed by `offset`.
[[nodiscard]] FlowProfile shifted(const FlowProfile& profile, double offset) noexcept;
/// Throws InvalidArgument for profiles that could produce a negative rate.
void validate_profile(const FlowProfile& profile);

enum class EdgeKind { Continuous, Branching };

struct CurrentEdge {
    ComponentId from{};
    ComponentId to{};
    FlowProfile profile;
    EdgeKind kind = EdgeKind::Continuous;
    bool nonready = false;  // branching into a component that is not a ready brain pulse

    bool operator==(const CurrentEdge&) const = default;
};

class CurrentGraph {
public:
    CurrentGraph() = default;
    explicit CurrentGraph(std::vector<CurrentEdge> edges);

    /// Rejects self-loops and duplicate (from, to) pairs.
    void add(CurrentEdge edge);

    [[nodiscard]] const std::vector<CurrentEdge>& edges() const noexcept { return edges_; }
    [[nodiscard]] bool empty() const noexcept { return edges_.empty(); }

private:
    std::vector<CurrentEdge> edges_;
};

/// Which edges may carry current.
enum class Gate {
    Standard,  // pre-collapse dynamics; nothing flows once collapsed
    Cascade,   // post-hit classical progression; requires a collapsed state
};

/// Gated instantaneous rate along `edge` at time t. Zero when the source is Ready
/// or when the phase does not match the gate. With dt > 0 the rate is additionally
/// clamped to source_weight / dt.
[[nodiscard]] double effective_current(const CurrentEdge& edge, const SystemState& state, double t,
                                       double dt = 0.0, Gate gate = Gate::Standard);

struct StepResult {
    SystemState state;
    std::vector<double> transferred;  // weight moved along each edge, in edge order
};

/// Advances by dt. Each edge transfer is the Simpson (RK4 for time-driven rates)
/// quadrature of its gated rate over [t, t + dt], truncated to what the source
/// still holds, subtracted from the source and added to the target.
[[nodiscard]] StepResult advance(const SystemState& state, const CurrentGraph& graph, double dt,
                                 Gate gate = Gate::Standard);

[[nodiscard]] SystemState step(const SystemState& state, const CurrentGraph& graph, double dt,
                               Gate gate = Gate::Standard);

[[nodiscard]] bool check_conservation(const SystemState& state, double tol) noexcept;

/// Tolerance under which two weights count as tied for carrying consciousness.
inline constexpr double kConsciousTieTolerance = 1e-12;

/// Re-seats the Conscious status on the heaviest component reachable from the
/// current conscious one through Continuous edges between non-Ready components
/// (ties to the lowest id). Returns the previous holder when it moved.
std::optional<ComponentId> carry_consciousness(SystemState& state, const CurrentGraph& graph);

}  // namespace reducesim
