#include "reducesim/dynamics.hpp"
#include "reducesim/scenario.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace reducesim;

namespace {

SystemState chain_state(std::vector<double> weights, std::vector<Status> statuses = {}) {
    SystemState s;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        const auto st = i < statuses.size() ? statuses[i] : Status::Plain;
        s.components.push_back(Component{component_id(i), weights[i], {"D"}, "B", st});
    }
    return s;
}

CurrentEdge link(std::size_t a, std::size_t b, FlowProfile p, EdgeKind kind = EdgeKind::Continuous) {
    return CurrentEdge{component_id(a), component_id(b), p, kind, false};
}

// Runs `steps` steps with the clock pinned to k * dt.
SystemState integrate(SystemState s, const CurrentGraph& g, double dt, std::size_t steps) {
    for (std::size_t k = 0; k < steps; ++k) {
        s.time = static_cast<double>(k) * dt;
        s = step(s, g, dt);
    }
    s.time = static_cast<double>(steps) * dt;
    return s;
}

}  // namespace

TEST_CASE("raised-cosine peak rate matches the unit-integral density") {
    // Oracle: normalize sin^2(pi t / d) on [0, d] by composite Simpson quadrature.
    const double d = 2.0;
    const int n = 100000;
    const double h = d / n;
    double integral = 0.0;
    for (int i = 0; i < n; ++i) {
        const double a = i * h;
        auto f = [d](double t) { return std::pow(std::sin(std::numbers::pi * t / d), 2); };
        integral += h / 6.0 * (f(a) + 4.0 * f(a + h / 2) + f(a + h));
    }
    const double expected_peak = 1.0 / integral;  // density at t = d / 2
    CHECK(expected_peak == doctest::Approx(1.0).epsilon(1e-12));

    const auto s = chain_state({1.0, 0.0});
    const auto e = link(0, 1, RaisedCosineFlow{0.0, 2.0, 1.0});
    CHECK(effective_current(e, s, 1.0) == doctest::Approx(expected_peak).epsilon(1e-12));
    CHECK(profile_integral(e.profile, 0.0, 2.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(profile_integral(e.profile, 0.0, 1.0) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("profile closed-form integrals agree with fine quadrature") {
    const std::vector<FlowProfile> profiles = {
        ConstantFlow{0.7}, RampFlow{1.5, 0.5, 2.0}, RaisedCosineFlow{0.3, 1.7, 0.6}};
    for (const auto& p : profiles) {
        const double a = 0.1;
        const double b = 2.9;
        const int n = 200000;
        const double h = (b - a) / n;
        double sum = 0.0;
        for (int i = 0; i < n; ++i) sum += h * profile_rate(p, a + (i + 0.5) * h);
        CHECK(profile_integral(p, a, b) == doctest::Approx(sum).epsilon(1e-8));
    }
}

TEST_CASE("effective_current gating") {
    const auto constant = link(0, 1, ConstantFlow{0.5});
    SUBCASE("ungated constant profile") {
        CHECK(effective_current(constant, chain_state({1.0, 0.0}), 0.3) == 0.5);
    }
    SUBCASE("a ready source passes no current onward") {
        auto s = chain_state({0.0, 0.4, 0.0}, {Status::Conscious, Status::Ready, Status::Plain});
        CHECK(effective_current(link(1, 2, ConstantFlow{3.0}), s, 1.0) == 0.0);
    }
    SUBCASE("nothing flows once collapsed") {
        auto s = chain_state({1.0, 0.0});
        s.collapsed_on = component_id(0);
        CHECK(effective_current(constant, s, 0.3) == 0.0);
        CHECK(effective_current(constant, s, 0.3, 0.0, Gate::Cascade) == 0.5);
    }
    SUBCASE("clamped to what the source holds") {
        CHECK(effective_current(constant, chain_state({0.01, 0.99}), 0.3, 0.1) == doctest::Approx(0.1));
    }
    SUBCASE("unknown endpoint") {
        try {
            (void)effective_current(link(0, 7, ConstantFlow{1.0}), chain_state({1.0}), 0.0);
            FAIL("expected UnknownComponent");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::UnknownComponent);
        }
    }
}

TEST_CASE("constant transfer is exact") {
    const CurrentGraph g({link(0, 1, ConstantFlow{0.5})});
    const auto next = step(chain_state({1.0, 0.0}), g, 0.1);
    CHECK(next.components[0].weight == doctest::Approx(0.95).epsilon(1e-15));
    CHECK(next.components[1].weight == doctest::Approx(0.05).epsilon(1e-15));
    CHECK(next.time == doctest::Approx(0.1));
}

TEST_CASE("classical chain passes all weight to the last component") {
    const auto spec = build_classical();
    const auto g = current_graph(spec);
    const auto end = integrate(initial_state(spec), g, 1e-3, 3500);
    CHECK(end.components[0].weight == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(end.components[1].weight == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(end.components[2].weight == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(std::abs(end.components[3].weight - 1.0) < 1e-12);
}

TEST_CASE("DDD graph integrates to weight on the ready component only") {
    // Oracle: forward Euler at dt = 1e-6 with the rule-4 gates written out by hand.
    const double fine = 1e-6;
    double w0 = 1.0, w1 = 0.0, w2 = 0.0, w3 = 0.0;
    for (long k = 0; k < 3'500'000; ++k) {
        const double t = k * fine;
        double rate = 0.0;
        if (t > 1.0 && t < 3.0) rate = std::pow(std::sin(std::numbers::pi * (t - 1.0) / 2.0), 2);
        const double moved = std::min(rate * fine, w0);
        w0 -= moved;
        w1 += moved;
        // 1 -> 2 gated (ready source); 2 -> 3 has an empty source.
    }
    const auto spec = build_quantum_ddd();
    const auto end = integrate(initial_state(spec), current_graph(spec), 1e-3, 3500);
    CHECK(end.components[0].weight == doctest::Approx(w0).epsilon(1e-5));
    CHECK(end.components[1].weight == doctest::Approx(w1).epsilon(1e-5));
    CHECK(end.components[2].weight == w2);
    CHECK(end.components[3].weight == w3);
    CHECK(w1 == doctest::Approx(1.0).epsilon(1e-5));
}

TEST_CASE("source exhaustion truncates the transfer") {
    const CurrentGraph g({link(0, 1, ConstantFlow{10.0})});
    const auto next = step(chain_state({0.1, 0.9}), g, 0.1);
    CHECK(next.components[0].weight == 0.0);
    CHECK(next.components[1].weight == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(next.clamp_count == 1);
}

TEST_CASE("negative weights abort the step") {
    auto s = chain_state({1.5, -0.5});
    const CurrentGraph g({link(0, 1, ConstantFlow{0.0})});
    try {
        (void)step(s, g, 0.1);
        FAIL("expected NegativeWeight");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NegativeWeight);
    }
}

TEST_CASE("graph rejects self-loops, duplicates and negative profiles") {
    CurrentGraph g;
    g.add(link(0, 1, ConstantFlow{1.0}));
    CHECK_THROWS_AS(g.add(link(0, 1, ConstantFlow{2.0})), Error);
    CHECK_THROWS_AS(g.add(link(2, 2, ConstantFlow{1.0})), Error);
    CHECK_THROWS_AS(g.add(link(1, 2, ConstantFlow{-1.0})), Error);
    CHECK_THROWS_AS(g.add(link(1, 2, RaisedCosineFlow{0.0, 0.0, 1.0})), Error);
}

TEST_CASE("check_conservation") {
    CHECK(check_conservation(initial_state(build_quantum()), 1e-9));
    CHECK_FALSE(check_conservation(chain_state({0.5, 0.4}), 1e-9));

    for (const auto& spec : {build_classical(), build_quantum(), build_quantum_ddd(), build_terminal(0.3, 0.7)}) {
        const auto end = integrate(initial_state(spec), current_graph(spec), 1e-3, 10000);
        CHECK(check_conservation(end, 1e-9));
    }
}

TEST_CASE("property: random DAG transfers conserve weight and are monotone at the ends") {
    std::mt19937_64 rng(20261015);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t n = 2 + rng() % 5;
        std::vector<double> weights(n);
        double sum = 0.0;
        for (auto& w : weights) sum += (w = unit(rng));
        for (auto& w : weights) w /= sum;

        CurrentGraph g;
        for (std::size_t a = 0; a < n; ++a) {
            for (std::size_t b = a + 1; b < n; ++b) {
                if (unit(rng) < 0.5) continue;
                FlowProfile p;
                switch (rng() % 3) {
                case 0: p = ConstantFlow{unit(rng)}; break;
                case 1: p = RampFlow{2.0 * unit(rng), unit(rng), 1.0 + unit(rng)}; break;
                default: p = RaisedCosineFlow{unit(rng), 0.2 + unit(rng), unit(rng)}; break;
                }
                g.add(link(a, b, p));
            }
        }
        if (g.empty()) g.add(link(0, n - 1, ConstantFlow{0.3}));

        const double dt = 1e-2 * (0.1 + unit(rng));
        auto s = chain_state(weights);
        for (std::size_t k = 0; k < 400; ++k) {
            s.time = k * dt;
            const auto next = step(s, g, dt);
            CHECK(std::abs(total_weight(next) - total_weight(s)) <= 1e-12);
            // component 0 is a pure source, component n-1 a pure sink
            CHECK(next.components.front().weight <= s.components.front().weight);
            CHECK(next.components.back().weight >= s.components.back().weight);
            for (const auto& c : next.components) CHECK(c.weight >= 0.0);
            s = next;
        }
        CHECK(check_conservation(s, 1e-9));
    }
}

TEST_CASE("step refinement is fourth order for smooth profiles") {
    // Quantum scenario: component 1 weight at t = 1.5 against the closed-form integral.
    const auto spec = build_quantum();
    const auto g = current_graph(spec);
    const double exact = profile_integral(g.edges()[0].profile, 0.0, 1.5);
    auto error_at = [&](double dt) {
        const auto steps = static_cast<std::size_t>(std::llround(1.5 / dt));
        return std::abs(integrate(initial_state(spec), g, dt, steps).components[1].weight - exact);
    };
    const double coarse = error_at(0x1p-7);
    const double fine = error_at(0x1p-8);
    MESSAGE("error dt=2^-7: " << coarse << ", dt=2^-8: " << fine);
    CHECK(coarse / fine > 14.0);
    CHECK(coarse / fine < 18.0);
}

TEST_CASE("consciousness follows the heaviest chain member, ties to the lower id") {
    CurrentGraph g({link(0, 1, ConstantFlow{1.0}), link(1, 2, ConstantFlow{1.0})});
    auto s = chain_state({0.5, 0.5, 0.0}, {Status::Conscious, Status::Plain, Status::Plain});
    CHECK_FALSE(carry_consciousness(s, g).has_value());
    CHECK(conscious_component(s) == component_id(0));

    s.components[0].weight = 0.4;
    s.components[1].weight = 0.6;
    CHECK(carry_consciousness(s, g) == component_id(0));
    CHECK(conscious_component(s) == component_id(1));

    // Branching edges and ready components are outside the chain.
    CurrentGraph branch({link(0, 1, ConstantFlow{1.0}, EdgeKind::Branching)});
    auto q = chain_state({0.2, 0.8}, {Status::Conscious, Status::Ready});
    CHECK_FALSE(carry_consciousness(q, branch).has_value());
    CHECK(conscious_component(q) == component_id(0));
}
