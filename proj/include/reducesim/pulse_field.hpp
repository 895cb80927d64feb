#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace reducesim {

struct FieldPoint {
    int x = 0;  // column, time-like
    int y = 0;  // row, space of states
    std::vector<double> state;
    std::string label;

    bool operator==(const FieldPoint&) const = default;
};

/// Grid of states with a continuity bound on 4-neighbour differences (max norm).
class PulseField {
public:
    PulseField() = default;
    PulseField(int width, int height, std::size_t state_dim, double continuity_bound);

    [[nodiscard]] int width() const noexcept { return width_; }
    [[nodiscard]] int height() const noexcept { return height_; }
    [[nodiscard]] std::size_t state_dim() const noexcept { return state_dim_; }
    [[nodiscard]] double continuity_bound() const noexcept { return epsilon_; }
    [[nodiscard]] bool empty() const noexcept { return points_.empty(); }

    [[nodiscard]] const FieldPoint& at(int x, int y) const;
    [[nodiscard]] FieldPoint& at(int x, int y);
    [[nodiscard]] const std::vector<FieldPoint>& points() const noexcept { return points_; }

    /// Replaces the state at (x, y); the vector must match the field's dimension.
    void set_state(int x, int y, std::vector<double> state);

    [[nodiscard]] const std::string& branch_label() const noexcept { return branch_label_; }
    void set_branch_label(std::string label) { branch_label_ = std::move(label); }

    [[nodiscard]] bool contains(double x, double y) const noexcept;

private:
    int width_ = 0;
    int height_ = 0;
    std::size_t state_dim_ = 0;
    double epsilon_ = 0.0;
    std::vector<FieldPoint> points_;  // row-major
    std::string branch_label_;
};

/// Scalar hue ramp along x from `from` to `to`, constant down each column.
[[nodiscard]] PulseField hue_ramp_field(int width, int height, double continuity_bound,
                                        double from = 0.0, double to = 1.0);

struct PulseSample {
    double t = 0.0;
    double x = 0.0;
    double y = 0.0;
};

class ConsciousPulse {
public:
    ConsciousPulse(const PulseField& field, double x, double y, double width, double t = 0.0);

    [[nodiscard]] double x() const noexcept { return x_; }
    [[nodiscard]] double y() const noexcept { return y_; }
    [[nodiscard]] double width() const noexcept { return sigma_; }
    [[nodiscard]] double time() const noexcept { return t_; }
    [[nodiscard]] const std::vector<PulseSample>& trajectory() const noexcept { return trajectory_; }

private:
    friend ConsciousPulse drift(const PulseField&, const ConsciousPulse&, std::pair<double, double>, double);

    double x_ = 0.0;
    double y_ = 0.0;
    double sigma_ = 1.0;
    double t_ = 0.0;
    std::vector<PulseSample> trajectory_;
};

/// Moves the pulse centre by velocity * dt. Throws OutOfField if it would leave the grid.
[[nodiscard]] ConsciousPulse drift(const PulseField& field, const ConsciousPulse& pulse,
                                   std::pair<double, double> velocity, double dt);

struct WindowEntry {
    FieldPoint point;
    double weight = 0.0;
};

/// Grid points within 3 sigma of the centre with normalized Gaussian weights.
/// Falls back to the nearest point when none lie inside the radius.
[[nodiscard]] std::vector<WindowEntry> window(const PulseField& field, const ConsciousPulse& pulse);

struct GridPos {
    int x = 0;
    int y = 0;
    bool operator==(const GridPos&) const = default;
    auto operator<=>(const GridPos&) const = default;
};

using NeighborPair = std::pair<GridPos, GridPos>;

/// Every 4-neighbour pair whose states differ by more than the continuity bound.
[[nodiscard]] std::vector<NeighborPair> continuity_check(const PulseField& field);

/// Splits a field at `column` into the left (columns 0..column) and right
/// (columns column..W-1) successor regions. The branch column is shared and keeps
/// its labels; every other point takes the successor's label.
[[nodiscard]] std::pair<PulseField, PulseField> branch_field(const PulseField& field, int column,
                                                             const std::string& left_label,
                                                             const std::string& right_label);

/// Plain-text grid dump: one row per line, points separated by a space, state
/// components comma-separated, 12 significant digits.
void write_field_dump(const PulseField& field, std::ostream& out);

}  // namespace reducesim
