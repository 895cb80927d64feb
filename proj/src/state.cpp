#include "reducesim/state.hpp"

#include <algorithm>
#include <numeric>

namespace reducesim {

const char* to_string(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::MultipleConscious: return "MultipleConscious";
    case ErrorCode::UnknownComponent: return "UnknownComponent";
    case ErrorCode::NegativeWeight: return "NegativeWeight";
    case ErrorCode::TargetNotReady: return "TargetNotReady";
    case ErrorCode::NotCollapsed: return "NotCollapsed";
    case ErrorCode::OutOfField: return "OutOfField";
    case ErrorCode::InvalidWeights: return "InvalidWeights";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::ValidationError: return "ValidationError";
    case ErrorCode::IoError: return "IoError";
    }
    return "Error";
}

int exit_code_for(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::SyntaxError:
    case ErrorCode::ValidationError:
    case ErrorCode::InvalidWeights:
    case ErrorCode::InvalidArgument:
    case ErrorCode::IoError:
        return 1;
    default:
        return 2;
    }
}

std::string_view to_string(Status status) noexcept {
    switch (status) {
    case Status::Plain: return "plain";
    case Status::Ready: return "ready";
    case Status::Conscious: return "conscious";
    }
    return "plain";
}

std::optional<Status> parse_status(std::string_view text) noexcept {
    if (text == "plain") return Status::Plain;
    if (text == "ready") return Status::Ready;
    if (text == "conscious") return Status::Conscious;
    return std::nullopt;
}

double event_time(const Event& event) noexcept {
    return std::visit(
        [](const auto& e) {
            if constexpr (std::is_same_v<std::decay_t<decltype(e)>, HitEvent>) {
                return e.t_sc;
            } else {
                return e.t;
            }
        },
        event);
}

void EventLog::append(Event event) {
    if (!events_.empty() && event_time(event) < event_time(events_.back())) {
        throw Error(ErrorCode::InvalidArgument, "event log must be ordered by time");
    }
    if (std::holds_alternative<HitEvent>(event) && hit_count() > 0) {
        throw Error(ErrorCode::InvalidArgument, "at most one hit per run");
    }
    events_.push_back(std::move(event));
}

std::size_t EventLog::hit_count() const noexcept {
    return static_cast<std::size_t>(std::count_if(events_.begin(), events_.end(),
        [](const Event& e) { return std::holds_alternative<HitEvent>(e); }));
}

std::optional<HitEvent> EventLog::hit() const noexcept {
    for (const auto& e : events_) {
        if (const auto* hit = std::get_if<HitEvent>(&e)) return *hit;
    }
    return std::nullopt;
}

const Component& SystemState::at(ComponentId id) const {
    if (!contains(id)) {
        throw Error(ErrorCode::UnknownComponent, "component " + std::to_string(index_of(id)));
    }
    return components[index_of(id)];
}

Component& SystemState::at(ComponentId id) {
    if (!contains(id)) {
        throw Error(ErrorCode::UnknownComponent, "component " + std::to_string(index_of(id)));
    }
    return components[index_of(id)];
}

double total_weight(const SystemState& state) noexcept {
    return std::accumulate(state.components.begin(), state.components.end(), 0.0,
                           [](double acc, const Component& c) { return acc + c.weight; });
}

std::optional<ComponentId> conscious_component(const SystemState& state) {
    std::optional<ComponentId> found;
    for (const auto& c : state.components) {
        if (c.status != Status::Conscious) continue;
        if (found) {
            throw Error(ErrorCode::MultipleConscious,
                        "components " + std::to_string(index_of(*found)) + " and " +
                            std::to_string(index_of(c.id)));
        }
        found = c.id;
    }
    return found;
}

void transfer_consciousness(SystemState& state, std::optional<ComponentId> from, ComponentId to, double t) {
    if (from == to) return;
    if (from) {
        auto& old = state.at(*from);
        state.log.append(StatusChange{t, old.id, old.status, Status::Plain});
        old.status = Status::Plain;
    }
    auto& next = state.at(to);
    state.log.append(StatusChange{t, next.id, next.status, Status::Conscious});
    next.status = Status::Conscious;
}

}  // namespace reducesim
