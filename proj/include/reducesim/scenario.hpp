#pragma once

#include "reducesim/dynamics.hpp"
#include "reducesim/pulse_field.hpp"
#include "reducesim/state.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace reducesim {

struct ScheduleMarks {
    double t_i = 0.0;                // observer/detector interaction starts
    std::optional<double> t_0;       // particle interaction
    std::optional<double> t_f;       // detector interaction complete
    std::optional<double> t_ob;      // observer resolves the superposition
    double t_max = 5.0;
    double dt = 1e-3;

    bool operator==(const ScheduleMarks&) const = default;
};

/// Classical pulse relabel ({X} -> {B}) applied at `at`.
struct PulseRelabel {
    std::string label;
    double at = 0.0;
    bool operator==(const PulseRelabel&) const = default;
};

struct ComponentDecl {
    ComponentId id{};
    double weight = 0.0;
    std::vector<std::string> detector_config;
    std::optional<std::string> pulse_label;
    Status status = Status::Plain;
    std::optional<PulseRelabel> relabel;

    bool operator==(const ComponentDecl&) const = default;
};

struct FieldDecl {
    int width = 32;
    int height = 8;
    double epsilon = 0.0625;
    double hue_from = 0.0;
    double hue_to = 1.0;

    bool operator==(const FieldDecl&) const = default;
};

struct ScenarioSpec {
    std::string name;
    std::vector<ComponentDecl> components;  // sorted by id, ids 0..n-1
    std::vector<CurrentEdge> edges;         // causal order
    std::vector<ComponentId> cascade_chain;  // cascade profile times are relative to the hit
    ScheduleMarks schedule;
    std::optional<FieldDecl> field;

    bool operator==(const ScenarioSpec&) const = default;
};

/// Throws ValidationError naming the first violated invariant.
void validate(const ScenarioSpec& spec);

[[nodiscard]] ScenarioSpec build_classical();
[[nodiscard]] ScenarioSpec build_quantum(double transfer_total = 1.0);
/// Quantum two-component scenario driven by a constant current from t = 0.
[[nodiscard]] ScenarioSpec build_quantum_constant(double rate = 0.5);
[[nodiscard]] ScenarioSpec build_quantum_ddd();
[[nodiscard]] ScenarioSpec build_terminal(double w0, double w1);

/// `classical`, `quantum[:total]`, `quantum_constant[:J]`, `quantum_ddd`, `terminal:w0,w1`.
[[nodiscard]] ScenarioSpec builtin_scenario(std::string_view name);

[[nodiscard]] ScenarioSpec parse_scenario(std::string_view text);
[[nodiscard]] std::string serialize_scenario(const ScenarioSpec& spec);

/// `builtin:NAME` or a path to a scenario file.
[[nodiscard]] ScenarioSpec load_scenario(const std::string& source);

[[nodiscard]] SystemState initial_state(const ScenarioSpec& spec);
[[nodiscard]] CurrentGraph current_graph(const ScenarioSpec& spec);
/// Profiles of the cascade chain links, in chain order.
[[nodiscard]] std::vector<FlowProfile> cascade_profiles(const ScenarioSpec& spec);
[[nodiscard]] PulseField make_field(const FieldDecl& decl);

}  // namespace reducesim
