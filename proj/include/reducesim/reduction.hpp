#pragma once

#include "reducesim/dynamics.hpp"
#include "reducesim/state.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace reducesim {

struct EmergenceContext {
    ComponentId new_component{};
    EdgeKind creating_edge_kind = EdgeKind::Continuous;
    bool has_brain_pulse = false;
};

/// A newly emerging component is Ready only when it appears discontinuously
/// (branching edge) and carries a brain pulse.
[[nodiscard]] Status classify_emergence(const EmergenceContext& ctx) noexcept;

/// Inbound current into Ready components, sorted by component id.
using InboundCurrents = std::vector<std::pair<ComponentId, double>>;

enum class TriggerLaw {
    /// Unconditional hit density on c equals the inbound current J_c(t).
    Current,
    /// Hazard J_c(t) / R(t), R the weight not yet delivered to ready components.
    ConditionalHazard,
};

/// Single-threshold inverse-CDF trigger. One uniform draw per run; a hit fires
/// on the first step whose increment carries the trigger clock past the
/// threshold. Within that step the increment is split into consecutive
/// sub-intervals, one per inbound component in id order, and the component whose
/// sub-interval holds the threshold is the target.
class StochasticTrigger {
public:
    /// Draws the threshold from std::mt19937_64 seeded with `seed`.
    explicit StochasticTrigger(std::uint64_t seed, TriggerLaw law = TriggerLaw::Current);
    /// Explicit threshold in (0, 1).
    StochasticTrigger(double threshold_u, TriggerLaw law);

    [[nodiscard]] double threshold_u() const noexcept { return threshold_u_; }
    [[nodiscard]] TriggerLaw law() const noexcept { return law_; }
    [[nodiscard]] const std::map<ComponentId, double>& cumulative_transfer() const noexcept {
        return cumulative_;
    }
    /// Sum of delivered weight across all Ready components.
    [[nodiscard]] double total_transfer() const noexcept { return total_; }
    /// Monotone quantity compared against the threshold (total transfer, or
    /// integrated hazard for ConditionalHazard).
    [[nodiscard]] double clock() const noexcept { return clock_; }
    [[nodiscard]] double clock_threshold() const noexcept;
    [[nodiscard]] bool fired() const noexcept { return fired_; }

    /// `unreduced_weight` is only consulted by the ConditionalHazard law.
    std::optional<HitEvent> accumulate_and_test(std::span<const std::pair<ComponentId, double>> inbound,
                                                double dt, double t, double unreduced_weight = 1.0);

    std::optional<HitEvent> accumulate_and_test(const std::map<ComponentId, double>& inbound, double dt,
                                                double t, double unreduced_weight = 1.0);

    /// Trigger clock after one step starting from `clock_before`, independent of
    /// the threshold. Bit-identical to what accumulate_and_test computes.
    [[nodiscard]] static double advance_clock(TriggerLaw law, double clock_before,
                                              std::span<const std::pair<ComponentId, double>> inbound,
                                              double dt, double unreduced_weight) noexcept;

    /// Target attribution inside a crossing step: walks the per-component clock
    /// increments from `clock_before` and returns the first whose running end
    /// reaches `threshold`.
    [[nodiscard]] static ComponentId attribute(TriggerLaw law, double clock_before, double threshold,
                                               std::span<const std::pair<ComponentId, double>> inbound,
                                               double dt, double unreduced_weight) noexcept;

private:
    double threshold_u_ = 0.5;
    TriggerLaw law_ = TriggerLaw::Current;
    std::map<ComponentId, double> cumulative_;
    double total_ = 0.0;
    double clock_ = 0.0;
    bool fired_ = false;
};

/// Uniform in (0, 1) from the top 53 bits of one mt19937_64 output.
[[nodiscard]] double threshold_from_seed(std::uint64_t seed) noexcept;

/// Zeroes every component but the target, which becomes Conscious with weight 1.
[[nodiscard]] SystemState collapse(const SystemState& state, const HitEvent& hit);

/// Continuous edges of a cascade: chain[i] -> chain[i + 1] carrying profiles[i],
/// with profile times relative to `origin`.
[[nodiscard]] CurrentGraph cascade_graph(std::span<const ComponentId> chain,
                                         std::span<const FlowProfile> profiles, double origin);

/// One cascade step: advance under the cascade gate, carry consciousness along
/// the chain and log a CascadeStep whenever it moves.
[[nodiscard]] SystemState cascade_step(const SystemState& state, const CurrentGraph& chain_graph, double dt);

/// Runs the post-hit classical progression to completion. Returns the state
/// after every step, starting with the input state.
[[nodiscard]] std::vector<SystemState> cascade(const SystemState& state, std::span<const ComponentId> chain,
                                               std::span<const FlowProfile> profiles, double dt);

}  // namespace reducesim
