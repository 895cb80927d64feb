#include "reducesim/pulse_field.hpp"

#include "reducesim/errors.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>
#include <sstream>

using namespace reducesim;

namespace {

double weighted_hue(const std::vector<WindowEntry>& w, bool leading, double cx) {
    double sum = 0.0;
    double mass = 0.0;
    for (const auto& e : w) {
        if (leading ? e.point.x > cx : e.point.x < cx) {
            sum += e.weight * e.point.state[0];
            mass += e.weight;
        }
    }
    return sum / mass;
}

double total_variation(const std::vector<WindowEntry>& a, const std::vector<WindowEntry>& b) {
    std::map<std::pair<int, int>, double> diff;
    for (const auto& e : a) diff[{e.point.x, e.point.y}] += e.weight;
    for (const auto& e : b) diff[{e.point.x, e.point.y}] -= e.weight;
    double tv = 0.0;
    for (const auto& [k, v] : diff) tv += std::abs(v);
    return 0.5 * tv;
}

}  // namespace

TEST_CASE("drift advances the centre linearly") {
    const auto field = hue_ramp_field(10, 10, 0.5);
    const ConsciousPulse pulse(field, 0.0, 5.0, 1.0);
    const auto moved = drift(field, pulse, {1.0, 0.0}, 0.5);
    CHECK(moved.x() == 0.5);
    CHECK(moved.y() == 5.0);
    CHECK(moved.trajectory().size() == 2);
    CHECK(moved.time() == 0.5);

    auto still = pulse;
    for (int i = 0; i < 5; ++i) still = drift(field, still, {0.0, 0.0}, 0.1);
    for (const auto& s : still.trajectory()) {
        CHECK(s.x == 0.0);
        CHECK(s.y == 5.0);
    }
}

TEST_CASE("drift off the grid is rejected") {
    const auto field = hue_ramp_field(4, 4, 1.0);
    const ConsciousPulse pulse(field, 3.0, 1.0, 1.0);
    try {
        (void)drift(field, pulse, {1.0, 0.0}, 0.5);
        FAIL("expected OutOfField");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::OutOfField);
    }
    CHECK_THROWS_AS(ConsciousPulse(field, -0.1, 0.0, 1.0), Error);
    CHECK_THROWS_AS(ConsciousPulse(field, 1.0, 1.0, 0.0), Error);
}

TEST_CASE("red to green drift: the leading edge is greener") {
    const int w = 40;
    const auto field = hue_ramp_field(w, 9, 2.0 / w);
    ConsciousPulse pulse(field, 1.0, 4.0, 1.5);
    while (pulse.x() + 0.25 <= w - 2) {
        const auto win = window(field, pulse);
        CHECK(weighted_hue(win, true, pulse.x()) > weighted_hue(win, false, pulse.x()));
        pulse = drift(field, pulse, {1.0, 0.0}, 0.25);
    }
}

TEST_CASE("window limits") {
    const auto field = hue_ramp_field(8, 8, 1.0);
    SUBCASE("vanishing width selects the nearest point") {
        const auto on = window(field, ConsciousPulse(field, 3.0, 4.0, 1e-6));
        REQUIRE(on.size() == 1);
        CHECK(on[0].point.x == 3);
        CHECK(on[0].weight == 1.0);
        const auto off = window(field, ConsciousPulse(field, 3.3, 4.2, 1e-6));
        REQUIRE(off.size() == 1);
        CHECK(off[0].point.x == 3);
        CHECK(off[0].point.y == 4);
        CHECK(off[0].weight == 1.0);
    }
    SUBCASE("centre between two points of a symmetric field") {
        PulseField line(2, 1, 1, 1.0);
        const auto win = window(line, ConsciousPulse(line, 0.5, 0.0, 1.0));
        REQUIRE(win.size() == 2);
        CHECK(win[0].weight == win[1].weight);
    }
    SUBCASE("uniform field normalization") {
        PulseField flat(12, 12, 1, 0.0);
        const auto win = window(flat, ConsciousPulse(flat, 6.0, 6.0, 2.0));
        double sum = 0.0;
        for (const auto& e : win) sum += e.weight;
        CHECK(std::abs(sum - 1.0) <= 1e-12);
        for (const auto& e : win) CHECK(std::hypot(e.point.x - 6.0, e.point.y - 6.0) <= 6.0);
    }
}

TEST_CASE("property: window weights always sum to one") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const auto field = hue_ramp_field(25, 15, 0.1);
    for (int i = 0; i < 500; ++i) {
        const ConsciousPulse p(field, 24.0 * unit(rng), 14.0 * unit(rng), 1e-3 + 6.0 * unit(rng));
        double sum = 0.0;
        for (const auto& e : window(field, p)) {
            CHECK(e.weight >= 0.0);
            sum += e.weight;
        }
        CHECK(std::abs(sum - 1.0) <= 1e-12);
    }
}

TEST_CASE("same-moment homogeneity on an x-only field") {
    const auto field = hue_ramp_field(20, 10, 0.2);
    const auto win = window(field, ConsciousPulse(field, 9.3, 4.6, 1.7));
    std::map<int, std::set<double>> by_column;
    for (const auto& e : win) by_column[e.point.x].insert(e.point.state[0]);
    for (const auto& [x, values] : by_column) CHECK(values.size() == 1);
}

TEST_CASE("drift refinement changes the window by O(dt)") {
    const auto field = hue_ramp_field(30, 9, 0.1);
    const ConsciousPulse start(field, 10.2, 4.0, 1.3);
    const auto win0 = window(field, start);
    const double tv1 = total_variation(win0, window(field, drift(field, start, {1.0, 0.3}, 0.02)));
    const double tv2 = total_variation(win0, window(field, drift(field, start, {1.0, 0.3}, 0.01)));
    CHECK(tv1 > 0.0);
    CHECK(tv1 / tv2 == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("continuity check") {
    const int w = 16;
    const int h = 6;
    const double eps = 2.0 / w;
    SUBCASE("smooth ramp") { CHECK(continuity_check(hue_ramp_field(w, h, eps)).empty()); }
    SUBCASE("single point") { CHECK(continuity_check(PulseField(1, 1, 1, 0.0)).empty()); }
    SUBCASE("injected step between columns 3 and 4") {
        auto field = hue_ramp_field(w, h, eps);
        for (int y = 0; y < h; ++y) {
            for (int x = 4; x < w; ++x) field.set_state(x, y, {field.at(x, y).state[0] + 10.0 * eps});
        }
        // Oracle: scan every unordered pair of grid points and keep unit-distance pairs over the bound.
        std::set<NeighborPair> expected;
        const auto& pts = field.points();
        for (std::size_t i = 0; i < pts.size(); ++i) {
            for (std::size_t j = i + 1; j < pts.size(); ++j) {
                if (std::abs(pts[i].x - pts[j].x) + std::abs(pts[i].y - pts[j].y) != 1) continue;
                if (std::abs(pts[i].state[0] - pts[j].state[0]) > eps) {
                    expected.emplace(GridPos{pts[i].x, pts[i].y}, GridPos{pts[j].x, pts[j].y});
                }
            }
        }
        const auto found = continuity_check(field);
        CHECK(found.size() == static_cast<std::size_t>(h));
        CHECK(std::set<NeighborPair>(found.begin(), found.end()) == expected);
        for (const auto& [a, b] : found) {
            CHECK(a.x == 3);
            CHECK(b.x == 4);
        }
    }
}

TEST_CASE("branching a field at the observation column") {
    const auto field = hue_ramp_field(9, 4, 0.2);
    SUBCASE("left carries D0 points, right carries D1 points, the column is shared") {
        const auto [left, right] = branch_field(field, 4, "D0", "D1");
        CHECK(left.width() == 5);
        CHECK(right.width() == 5);
        CHECK(left.branch_label() == "D0");
        CHECK(right.branch_label() == "D1");
        for (int y = 0; y < 4; ++y) {
            for (int x = 0; x < 4; ++x) CHECK(left.at(x, y).label == "D0");
            for (int x = 1; x < 5; ++x) CHECK(right.at(x, y).label == "D1");
            CHECK(left.at(4, y).state == right.at(0, y).state);
            CHECK(left.at(4, y).label.empty());
        }
        CHECK(continuity_check(left).empty());
        CHECK(continuity_check(right).empty());
    }
    SUBCASE("branch at column 0") {
        const auto [left, right] = branch_field(field, 0, "D0", "D1");
        CHECK(left.width() == 1);
        REQUIRE(right.width() == field.width());
        for (std::size_t i = 0; i < field.points().size(); ++i) {
            CHECK(right.points()[i].x == field.points()[i].x);
            CHECK(right.points()[i].y == field.points()[i].y);
            CHECK(right.points()[i].state == field.points()[i].state);
        }
    }
    CHECK_THROWS_AS((void)branch_field(field, 9, "a", "b"), Error);
}

TEST_CASE("field dump layout") {
    PulseField f(3, 2, 2, 1.0);
    f.set_state(0, 0, {0.0, 1.0});
    f.set_state(1, 0, {0.5, 0.25});
    f.set_state(2, 1, {1.0 / 3.0, -2.0});
    std::ostringstream out;
    write_field_dump(f, out);
    CHECK(out.str() == "0,1 0.5,0.25 0,0\n0,0 0,0 0.333333333333,-2\n");
}
