#include "reducesim/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <queue>
#include <string>

namespace reducesim {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// Cumulative transfer of a profile from -infinity (or 0) up to t.
double cumulative(const RampFlow& p, double t) noexcept {
    if (t <= p.t_start) return 0.0;
    const double span = p.t_end - p.t_start;
    if (t <= p.t_end) return p.peak * (t - p.t_start) * (t - p.t_start) / (2.0 * span);
    return 0.5 * p.peak * span + p.peak * (t - p.t_end);
}

double cumulative(const RaisedCosineFlow& p, double t) noexcept {
    if (t <= p.t_start) return 0.0;
    if (t >= p.t_start + p.duration) return p.total;
    const double phase = (t - p.t_start) / p.duration;
    return p.total * (phase - std::sin(2.0 * std::numbers::pi * phase) / (2.0 * std::numbers::pi));
}

bool gate_open(const CurrentEdge& edge, const SystemState& state, Gate gate) {
    const auto& source = state.at(edge.from);
    (void)state.at(edge.to);
    if (source.status == Status::Ready) return false;  // a ready pulse passes no current onward
    return gate == Gate::Standard ? !state.collapsed() : state.collapsed();
}

}  // namespace

double profile_rate(const FlowProfile& profile, double t) noexcept {
    return std::visit(
        overloaded{
            [](const ConstantFlow& p) { return p.rate; },
            [t](const RampFlow& p) {
                if (t < p.t_start) return 0.0;
                if (t >= p.t_end) return p.peak;
                return p.peak * (t - p.t_start) / (p.t_end - p.t_start);
            },
            [t](const RaisedCosineFlow& p) {
                if (t <= p.t_start || t >= p.t_start + p.duration) return 0.0;
                const double s = std::sin(std::numbers::pi * (t - p.t_start) / p.duration);
                return 2.0 * p.total / p.duration * s * s;
            },
        },
        profile);
}

double profile_integral(const FlowProfile& profile, double a, double b) noexcept {
    return std::visit(
        overloaded{
            [a, b](const ConstantFlow& p) { return p.rate * (b - a); },
            [a, b](const auto& p) { return cumulative(p, b) - cumulative(p, a); },
        },
        profile);
}

double profile_end(const FlowProfile& profile) noexcept {
    return std::visit(
        overloaded{
            [](const RaisedCosineFlow& p) { return p.t_start + p.duration; },
            [](const auto&) { return std::numeric_limits<double>::infinity(); },
        },
        profile);
}

FlowProfile shifted(const FlowProfile& profile, double offset) noexcept {
    return std::visit(
        overloaded{
            [](const ConstantFlow& p) -> FlowProfile { return p; },
            [offset](const RampFlow& p) -> FlowProfile {
                return RampFlow{p.peak, p.t_start + offset, p.t_end + offset};
            },
            [offset](const RaisedCosineFlow& p) -> FlowProfile {
                return RaisedCosineFlow{p.t_start + offset, p.duration, p.total};
            },
        },
        profile);
}

void validate_profile(const FlowProfile& profile) {
    auto fail = [](const std::string& what) { throw Error(ErrorCode::InvalidArgument, what); };
    std::visit(overloaded{
                   [&](const ConstantFlow& p) {
                       if (!(p.rate >= 0.0) || !std::isfinite(p.rate)) fail("constant rate must be >= 0");
                   },
                   [&](const RampFlow& p) {
                       if (!(p.peak >= 0.0) || !std::isfinite(p.peak)) fail("ramp peak must be >= 0");
                       if (!(p.t_end > p.t_start)) fail("ramp must end after it starts");
                   },
                   [&](const RaisedCosineFlow& p) {
                       if (!(p.duration > 0.0) || !std::isfinite(p.duration)) fail("rcos duration must be > 0");
                       if (!(p.total >= 0.0) || !std::isfinite(p.total)) fail("rcos total must be >= 0");
                       if (!std::isfinite(p.t_start)) fail("rcos start must be finite");
                   },
               },
               profile);
}

CurrentGraph::CurrentGraph(std::vector<CurrentEdge> edges) {
    for (auto& e : edges) add(std::move(e));
}

void CurrentGraph::add(CurrentEdge edge) {
    if (edge.from == edge.to) {
        throw Error(ErrorCode::InvalidArgument,
                    "edge " + std::to_string(index_of(edge.from)) + " -> itself");
    }
    const bool duplicate = std::any_of(edges_.begin(), edges_.end(), [&](const CurrentEdge& e) {
        return e.from == edge.from && e.to == edge.to;
    });
    if (duplicate) {
        throw Error(ErrorCode::InvalidArgument, "duplicate edge " + std::to_string(index_of(edge.from)) +
                                                    " -> " + std::to_string(index_of(edge.to)));
    }
    validate_profile(edge.profile);
    edges_.push_back(std::move(edge));
}

double effective_current(const CurrentEdge& edge, const SystemState& state, double t, double dt, Gate gate) {
    if (!gate_open(edge, state, gate)) return 0.0;
    double rate = profile_rate(edge.profile, t);
    if (dt > 0.0) rate = std::min(rate, state.at(edge.from).weight / dt);
    return rate;
}

StepResult advance(const SystemState& state, const CurrentGraph& graph, double dt, Gate gate) {
    if (!(dt > 0.0)) throw Error(ErrorCode::InvalidArgument, "dt must be positive");

    const double t = state.time;
    StepResult result{state, std::vector<double>(graph.edges().size(), 0.0)};
    auto& next = result.state;

    for (std::size_t i = 0; i < graph.edges().size(); ++i) {
        const auto& edge = graph.edges()[i];
        if (!gate_open(edge, state, gate)) continue;

        // Rates depend on time only, so the classical RK4 stages reduce to Simpson's rule.
        const auto& p = edge.profile;
        double amount =
            dt / 6.0 * (profile_rate(p, t) + 4.0 * profile_rate(p, t + 0.5 * dt) + profile_rate(p, t + dt));

        auto& source = next.components[index_of(edge.from)];
        auto& target = next.components[index_of(edge.to)];
        if (amount > source.weight) {
            if (source.weight > 0.0) ++next.clamp_count;
            amount = source.weight;
        }
        if (amount <= 0.0) continue;
        source.weight -= amount;
        target.weight += amount;
        result.transferred[i] = amount;
    }

    for (const auto& c : next.components) {
        if (c.weight < -1e-12) {
            throw Error(ErrorCode::NegativeWeight, "component " + std::to_string(index_of(c.id)) +
                                                       " weight " + std::to_string(c.weight));
        }
    }
    next.time = t + dt;
    return result;
}

SystemState step(const SystemState& state, const CurrentGraph& graph, double dt, Gate gate) {
    return advance(state, graph, dt, gate).state;
}

bool check_conservation(const SystemState& state, double tol) noexcept {
    return std::abs(total_weight(state) - SystemState::total_weight_reference) <= tol;
}

std::optional<ComponentId> carry_consciousness(SystemState& state, const CurrentGraph& graph) {
    const auto current = conscious_component(state);
    if (!current) return std::nullopt;

    std::vector<bool> seen(state.size(), false);
    std::queue<ComponentId> frontier;
    frontier.push(*current);
    seen[index_of(*current)] = true;
    while (!frontier.empty()) {
        const auto id = frontier.front();
        frontier.pop();
        for (const auto& e : graph.edges()) {
            if (e.kind != EdgeKind::Continuous) continue;
            std::optional<ComponentId> other;
            if (e.from == id) other = e.to;
            if (e.to == id) other = e.from;
            if (!other || seen[index_of(*other)]) continue;
            if (state.at(*other).status == Status::Ready) continue;
            seen[index_of(*other)] = true;
            frontier.push(*other);
        }
    }

    double heaviest = -1.0;
    for (std::size_t i = 0; i < seen.size(); ++i) {
        if (seen[i]) heaviest = std::max(heaviest, state.components[i].weight);
    }
    ComponentId holder = *current;
    for (std::size_t i = 0; i < seen.size(); ++i) {
        if (seen[i] && state.components[i].weight >= heaviest - kConsciousTieTolerance) {
            holder = component_id(i);
            break;
        }
    }
    if (holder == *current) return std::nullopt;
    transfer_consciousness(state, current, holder, state.time);
    return current;
}

}  // namespace reducesim
