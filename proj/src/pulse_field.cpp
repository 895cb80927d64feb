#include "reducesim/pulse_field.hpp"

#include "reducesim/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

namespace reducesim {

PulseField::PulseField(int width, int height, std::size_t state_dim, double continuity_bound)
    : width_(width), height_(height), state_dim_(state_dim), epsilon_(continuity_bound) {
    if (width < 0 || height < 0) throw Error(ErrorCode::InvalidArgument, "field dimensions must be >= 0");
    if (!(continuity_bound >= 0.0)) throw Error(ErrorCode::InvalidArgument, "continuity bound must be >= 0");
    points_.reserve(static_cast<std::size_t>(width) * static_cast<std::size_t>(height));
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            points_.push_back(FieldPoint{x, y, std::vector<double>(state_dim, 0.0), {}});
        }
    }
}

const FieldPoint& PulseField::at(int x, int y) const {
    if (x < 0 || y < 0 || x >= width_ || y >= height_) {
        throw Error(ErrorCode::OutOfField, "(" + std::to_string(x) + ", " + std::to_string(y) + ")");
    }
    return points_[static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x)];
}

FieldPoint& PulseField::at(int x, int y) {
    return const_cast<FieldPoint&>(std::as_const(*this).at(x, y));
}

void PulseField::set_state(int x, int y, std::vector<double> state) {
    if (state.size() != state_dim_) throw Error(ErrorCode::InvalidArgument, "state dimension mismatch");
    at(x, y).state = std::move(state);
}

bool PulseField::contains(double x, double y) const noexcept {
    return x >= 0.0 && y >= 0.0 && x <= width_ - 1 && y <= height_ - 1;
}

PulseField hue_ramp_field(int width, int height, double continuity_bound, double from, double to) {
    PulseField field(width, height, 1, continuity_bound);
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            const double s = width > 1 ? static_cast<double>(x) / (width - 1) : 0.0;
            field.set_state(x, y, {from + (to - from) * s});
        }
    }
    return field;
}

ConsciousPulse::ConsciousPulse(const PulseField& field, double x, double y, double width, double t)
    : x_(x), y_(y), sigma_(width), t_(t) {
    if (!(width > 0.0)) throw Error(ErrorCode::InvalidArgument, "pulse width must be > 0");
    if (!field.contains(x, y)) throw Error(ErrorCode::OutOfField, "pulse centre outside the field");
    trajectory_.push_back(PulseSample{t, x, y});
}

ConsciousPulse drift(const PulseField& field, const ConsciousPulse& pulse, std::pair<double, double> velocity,
                     double dt) {
    const double x = pulse.x_ + velocity.first * dt;
    const double y = pulse.y_ + velocity.second * dt;
    if (!field.contains(x, y)) throw Error(ErrorCode::OutOfField, "drift leaves the field");
    ConsciousPulse next = pulse;
    next.x_ = x;
    next.y_ = y;
    next.t_ = pulse.t_ + dt;
    next.trajectory_.push_back(PulseSample{next.t_, x, y});
    return next;
}

std::vector<WindowEntry> window(const PulseField& field, const ConsciousPulse& pulse) {
    const double sigma = pulse.width();
    const double radius = 3.0 * sigma;
    const int x_lo = std::max(0, static_cast<int>(std::ceil(pulse.x() - radius)));
    const int x_hi = std::min(field.width() - 1, static_cast<int>(std::floor(pulse.x() + radius)));
    const int y_lo = std::max(0, static_cast<int>(std::ceil(pulse.y() - radius)));
    const int y_hi = std::min(field.height() - 1, static_cast<int>(std::floor(pulse.y() + radius)));

    std::vector<std::pair<const FieldPoint*, double>> inside;  // point, squared distance
    for (int y = y_lo; y <= y_hi; ++y) {
        for (int x = x_lo; x <= x_hi; ++x) {
            const double dx = x - pulse.x();
            const double dy = y - pulse.y();
            const double d2 = dx * dx + dy * dy;
            if (d2 <= radius * radius) inside.emplace_back(&field.at(x, y), d2);
        }
    }

    if (inside.empty()) {
        const int nx = std::clamp(static_cast<int>(std::lround(pulse.x())), 0, field.width() - 1);
        const int ny = std::clamp(static_cast<int>(std::lround(pulse.y())), 0, field.height() - 1);
        return {WindowEntry{field.at(nx, ny), 1.0}};
    }

    // Weights relative to the nearest point so tiny widths cannot underflow to 0/0.
    double d2_min = std::numeric_limits<double>::infinity();
    for (const auto& [p, d2] : inside) d2_min = std::min(d2_min, d2);
    std::vector<WindowEntry> entries;
    entries.reserve(inside.size());
    double sum = 0.0;
    for (const auto& [p, d2] : inside) {
        const double w = std::exp(-(d2 - d2_min) / (2.0 * sigma * sigma));
        entries.push_back(WindowEntry{*p, w});
        sum += w;
    }
    for (auto& e : entries) e.weight /= sum;
    return entries;
}

namespace {

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) noexcept {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

}  // namespace

std::vector<NeighborPair> continuity_check(const PulseField& field) {
    std::vector<NeighborPair> violations;
    const double eps = field.continuity_bound();
    for (int y = 0; y < field.height(); ++y) {
        for (int x = 0; x < field.width(); ++x) {
            const auto& p = field.at(x, y);
            if (x + 1 < field.width() && max_abs_diff(p.state, field.at(x + 1, y).state) > eps) {
                violations.emplace_back(GridPos{x, y}, GridPos{x + 1, y});
            }
            if (y + 1 < field.height() && max_abs_diff(p.state, field.at(x, y + 1).state) > eps) {
                violations.emplace_back(GridPos{x, y}, GridPos{x, y + 1});
            }
        }
    }
    return violations;
}

std::pair<PulseField, PulseField> branch_field(const PulseField& field, int column, const std::string& left_label,
                                               const std::string& right_label) {
    if (column < 0 || column >= field.width()) {
        throw Error(ErrorCode::OutOfField, "branch column " + std::to_string(column));
    }
    auto region = [&](int first, int last, const std::string& label) {
        PulseField out(last - first + 1, field.height(), field.state_dim(), field.continuity_bound());
        out.set_branch_label(label);
        for (int y = 0; y < field.height(); ++y) {
            for (int x = first; x <= last; ++x) {
                auto& p = out.at(x - first, y);
                p.state = field.at(x, y).state;
                p.label = x == column ? field.at(x, y).label : label;
            }
        }
        return out;
    };
    return {region(0, column, left_label), region(column, field.width() - 1, right_label)};
}

void write_field_dump(const PulseField& field, std::ostream& out) {
    char buf[32];
    for (int y = 0; y < field.height(); ++y) {
        for (int x = 0; x < field.width(); ++x) {
            if (x > 0) out << ' ';
            const auto& s = field.at(x, y).state;
            for (std::size_t i = 0; i < s.size(); ++i) {
                if (i > 0) out << ',';
                std::snprintf(buf, sizeof buf, "%.12g", s[i] == 0.0 ? 0.0 : s[i]);
                out << buf;
            }
        }
        out << '\n';
    }
}

}  // namespace reducesim
