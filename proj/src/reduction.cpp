#include "reducesim/reduction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

namespace reducesim {

Status classify_emergence(const EmergenceContext& ctx) noexcept {
    return ctx.creating_edge_kind == EdgeKind::Branching && ctx.has_brain_pulse ? Status::Ready : Status::Plain;
}

double threshold_from_seed(std::uint64_t seed) noexcept {
    std::mt19937_64 engine(seed);
    return (static_cast<double>(engine() >> 11) + 0.5) * 0x1p-53;
}

StochasticTrigger::StochasticTrigger(std::uint64_t seed, TriggerLaw law)
    : threshold_u_(threshold_from_seed(seed)), law_(law) {}

StochasticTrigger::StochasticTrigger(double threshold_u, TriggerLaw law) : threshold_u_(threshold_u), law_(law) {
    if (!(threshold_u > 0.0 && threshold_u < 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "threshold must lie in (0, 1)");
    }
}

double StochasticTrigger::clock_threshold() const noexcept {
    return law_ == TriggerLaw::Current ? threshold_u_ : -std::log(threshold_u_);
}

namespace {

double clock_part(TriggerLaw law, double rate, double dt, double unreduced_weight) noexcept {
    const double delivered = rate * dt;
    if (law == TriggerLaw::Current) return delivered;
    if (delivered <= 0.0) return 0.0;
    return unreduced_weight > 0.0 ? delivered / unreduced_weight : std::numeric_limits<double>::infinity();
}

}  // namespace

double StochasticTrigger::advance_clock(TriggerLaw law, double clock_before,
                                        std::span<const std::pair<ComponentId, double>> inbound, double dt,
                                        double unreduced_weight) noexcept {
    double running = clock_before;
    for (const auto& [id, rate] : inbound) running += clock_part(law, rate, dt, unreduced_weight);
    return running;
}

ComponentId StochasticTrigger::attribute(TriggerLaw law, double clock_before, double threshold,
                                         std::span<const std::pair<ComponentId, double>> inbound, double dt,
                                         double unreduced_weight) noexcept {
    double running = clock_before;
    for (const auto& [id, rate] : inbound) {
        const double part = clock_part(law, rate, dt, unreduced_weight);
        if (part <= 0.0) continue;
        running += part;
        if (threshold <= running) return id;
    }
    // Rounding can leave the threshold a hair above the last running sum.
    for (auto it = inbound.rbegin(); it != inbound.rend(); ++it) {
        if (clock_part(law, it->second, dt, unreduced_weight) > 0.0) return it->first;
    }
    return inbound.empty() ? ComponentId{} : inbound.back().first;
}

std::optional<HitEvent> StochasticTrigger::accumulate_and_test(
    std::span<const std::pair<ComponentId, double>> inbound, double dt, double t, double unreduced_weight) {
    if (fired_) return std::nullopt;

    const double before = clock_;
    for (const auto& [id, rate] : inbound) {
        cumulative_[id] += rate * dt;
        total_ += rate * dt;
    }
    clock_ = advance_clock(law_, before, inbound, dt, unreduced_weight);

    const double threshold = clock_threshold();
    if (clock_ < threshold) return std::nullopt;
    fired_ = true;
    return HitEvent{t + dt, attribute(law_, before, threshold, inbound, dt, unreduced_weight)};
}

std::optional<HitEvent> StochasticTrigger::accumulate_and_test(const std::map<ComponentId, double>& inbound,
                                                               double dt, double t, double unreduced_weight) {
    const InboundCurrents flat(inbound.begin(), inbound.end());
    return accumulate_and_test(std::span<const std::pair<ComponentId, double>>(flat), dt, t, unreduced_weight);
}

SystemState collapse(const SystemState& state, const HitEvent& hit) {
    if (state.collapsed()) throw Error(ErrorCode::InvalidArgument, "state already collapsed");
    const auto& target = state.at(hit.target);
    if (target.status != Status::Ready) {
        throw Error(ErrorCode::TargetNotReady, "component " + std::to_string(index_of(hit.target)) + " is " +
                                                   std::string(to_string(target.status)));
    }

    SystemState next = state;
    next.log.append(hit);
    for (auto& c : next.components) c.weight = 0.0;
    next.at(hit.target).weight = SystemState::total_weight_reference;
    transfer_consciousness(next, conscious_component(next), hit.target, hit.t_sc);
    next.collapsed_on = hit.target;
    return next;
}

CurrentGraph cascade_graph(std::span<const ComponentId> chain, std::span<const FlowProfile> profiles,
                           double origin) {
    if (chain.empty() || profiles.size() + 1 != chain.size()) {
        throw Error(ErrorCode::InvalidArgument, "cascade needs one profile per chain link");
    }
    CurrentGraph graph;
    for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
        graph.add(CurrentEdge{chain[i], chain[i + 1], shifted(profiles[i], origin), EdgeKind::Continuous});
    }
    return graph;
}

SystemState cascade_step(const SystemState& state, const CurrentGraph& chain_graph, double dt) {
    if (!state.collapsed()) throw Error(ErrorCode::NotCollapsed, "cascade before any hit");
    SystemState next = step(state, chain_graph, dt, Gate::Cascade);
    if (const auto previous = carry_consciousness(next, chain_graph)) {
        next.log.append(CascadeStep{next.time, *previous, *conscious_component(next)});
    }
    return next;
}

std::vector<SystemState> cascade(const SystemState& state, std::span<const ComponentId> chain,
                                 std::span<const FlowProfile> profiles, double dt) {
    if (!state.collapsed()) throw Error(ErrorCode::NotCollapsed, "cascade before any hit");
    if (chain.empty() || chain.front() != *state.collapsed_on) {
        throw Error(ErrorCode::InvalidArgument, "cascade must start at the hit component");
    }
    if (!(dt > 0.0)) throw Error(ErrorCode::InvalidArgument, "dt must be positive");

    std::vector<SystemState> trajectory{state};
    if (chain.size() == 1) return trajectory;

    const double origin = state.time;
    const auto graph = cascade_graph(chain, profiles, origin);
    double end = origin;
    for (const auto& e : graph.edges()) end = std::max(end, profile_end(e.profile));

    constexpr std::size_t kMaxSteps = 10'000'000;
    const auto last = chain.back();
    for (std::size_t k = 0;; ++k) {
        const auto& current = trajectory.back();
        const bool done = std::isfinite(end)
            ? current.time >= end - 0.5 * dt
            : current.at(last).weight >= SystemState::total_weight_reference - 1e-12;
        if (done) break;
        if (k >= kMaxSteps) throw Error(ErrorCode::InvalidArgument, "cascade did not complete");
        SystemState clocked = current;
        clocked.time = origin + static_cast<double>(k) * dt;
        trajectory.push_back(cascade_step(clocked, graph, dt));
    }
    return trajectory;
}

}  // namespace reducesim
