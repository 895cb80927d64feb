#pragma once

#include "reducesim/errors.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace reducesim {

/// Index of a superposition component; equals its position in SystemState::components.
enum class ComponentId : std::uint32_t {};

[[nodiscard]] constexpr std::size_t index_of(ComponentId id) noexcept {
    return static_cast<std::size_t>(id);
}
[[nodiscard]] constexpr ComponentId component_id(std::size_t index) noexcept {
    return static_cast<ComponentId>(index);
}

enum class Status { Plain, Ready, Conscious };

[[nodiscard]] std::string_view to_string(Status status) noexcept;
[[nodiscard]] std::optional<Status> parse_status(std::string_view text) noexcept;

struct Component {
    ComponentId id{};
    double weight = 0.0;  // square modulus
    std::vector<std::string> detector_config;
    std::optional<std::string> pulse_label;  // empty: no brain pulse
    Status status = Status::Plain;

    [[nodiscard]] bool has_brain_pulse() const noexcept { return pulse_label.has_value(); }

    bool operator==(const Component&) const = default;
};

struct HitEvent {
    double t_sc = 0.0;
    ComponentId target{};
    bool operator==(const HitEvent&) const = default;
};

struct StatusChange {
    double t = 0.0;
    ComponentId component{};
    Status from = Status::Plain;
    Status to = Status::Plain;
    bool operator==(const StatusChange&) const = default;
};

struct CascadeStep {
    double t = 0.0;
    ComponentId from{};
    ComponentId to{};
    bool operator==(const CascadeStep&) const = default;
};

using Event = std::variant<HitEvent, StatusChange, CascadeStep>;

[[nodiscard]] double event_time(const Event& event) noexcept;

/// Append-only record of a run. Enforces time ordering and a single hit.
class EventLog {
public:
    void append(Event event);

    [[nodiscard]] const std::vector<Event>& events() const noexcept { return events_; }
    [[nodiscard]] std::size_t size() const noexcept { return events_.size(); }
    [[nodiscard]] std::size_t hit_count() const noexcept;
    [[nodiscard]] std::optional<HitEvent> hit() const noexcept;

    bool operator==(const EventLog&) const = default;

private:
    std::vector<Event> events_;
};

struct SystemState {
    static constexpr double total_weight_reference = 1.0;

    std::vector<Component> components;
    double time = 0.0;
    std::optional<ComponentId> collapsed_on;  // empty while PreCollapse
    EventLog log;
    std::size_t clamp_count = 0;  // transfers truncated by source exhaustion

    [[nodiscard]] bool collapsed() const noexcept { return collapsed_on.has_value(); }
    [[nodiscard]] std::size_t size() const noexcept { return components.size(); }

    [[nodiscard]] const Component& at(ComponentId id) const;
    [[nodiscard]] Component& at(ComponentId id);
    [[nodiscard]] bool contains(ComponentId id) const noexcept { return index_of(id) < components.size(); }

    bool operator==(const SystemState&) const = default;
};

[[nodiscard]] double total_weight(const SystemState& state) noexcept;

/// Throws Error(MultipleConscious) if more than one component is conscious.
[[nodiscard]] std::optional<ComponentId> conscious_component(const SystemState& state);

/// Moves the Conscious status from one component to another and logs both changes.
void transfer_consciousness(SystemState& state, std::optional<ComponentId> from, ComponentId to, double t);

}  // namespace reducesim
