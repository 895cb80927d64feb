#include "reducesim/state.hpp"

#include <doctest.h>

using namespace reducesim;

namespace {

SystemState make_state(std::initializer_list<std::pair<double, Status>> comps) {
    SystemState s;
    std::size_t i = 0;
    for (const auto& [w, st] : comps) {
        s.components.push_back(Component{component_id(i++), w, {"D"}, "B", st});
    }
    return s;
}

}  // namespace

TEST_CASE("total_weight sums component weights") {
    CHECK(total_weight(make_state({{1.0, Status::Conscious}})) == 1.0);
    CHECK(total_weight(SystemState{}) == 0.0);
    // Mid-run split of the 0.3 / 0.7 terminal observation.
    const auto split = make_state({{0.3, Status::Plain}, {0.7, Status::Conscious}, {0.0, Status::Ready},
                                   {0.0, Status::Ready}});
    CHECK(total_weight(split) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("conscious_component finds the unique conscious branch") {
    const auto before_hit = make_state({{0.6, Status::Conscious}, {0.4, Status::Ready}});
    CHECK(conscious_component(before_hit) == component_id(0));

    CHECK_FALSE(conscious_component(make_state({{0.5, Status::Plain}, {0.5, Status::Plain}})).has_value());

    const auto after_hit = make_state({{0.0, Status::Plain}, {1.0, Status::Conscious}});
    CHECK(conscious_component(after_hit) == component_id(1));
}

TEST_CASE("two conscious components is a corrupted state") {
    const auto bad = make_state({{0.5, Status::Conscious}, {0.5, Status::Conscious}});
    try {
        (void)conscious_component(bad);
        FAIL("expected MultipleConscious");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::MultipleConscious);
        CHECK(exit_code_for(e.code()) == 2);
    }
}

TEST_CASE("event log keeps time order and a single hit") {
    EventLog log;
    log.append(StatusChange{0.5, component_id(0), Status::Plain, Status::Conscious});
    log.append(HitEvent{1.0, component_id(1)});
    CHECK(log.hit_count() == 1);
    CHECK(log.hit()->target == component_id(1));
    CHECK_THROWS_AS(log.append(HitEvent{2.0, component_id(1)}), Error);
    CHECK_THROWS_AS(log.append(CascadeStep{0.1, component_id(0), component_id(1)}), Error);
    log.append(CascadeStep{1.0, component_id(1), component_id(2)});
    CHECK(log.size() == 3);
}

TEST_CASE("lookup of a missing component reports UnknownComponent") {
    const auto s = make_state({{1.0, Status::Plain}});
    CHECK(s.contains(component_id(0)));
    try {
        (void)s.at(component_id(3));
        FAIL("expected UnknownComponent");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::UnknownComponent);
    }
}

TEST_CASE("transfer_consciousness logs both status changes") {
    auto s = make_state({{0.4, Status::Conscious}, {0.6, Status::Plain}});
    transfer_consciousness(s, component_id(0), component_id(1), 0.25);
    CHECK(s.components[0].status == Status::Plain);
    CHECK(s.components[1].status == Status::Conscious);
    REQUIRE(s.log.size() == 2);
    const auto& second = std::get<StatusChange>(s.log.events()[1]);
    CHECK(second.from == Status::Plain);
    CHECK(second.to == Status::Conscious);
    CHECK(second.t == 0.25);
}

TEST_CASE("status names round-trip") {
    for (auto st : {Status::Plain, Status::Ready, Status::Conscious}) CHECK(parse_status(to_string(st)) == st);
    CHECK_FALSE(parse_status("asleep").has_value());
}

TEST_CASE("exit codes separate bad input from runtime violations") {
    for (auto c : {ErrorCode::SyntaxError, ErrorCode::ValidationError, ErrorCode::InvalidWeights,
                   ErrorCode::InvalidArgument, ErrorCode::IoError}) {
        CHECK(exit_code_for(c) == 1);
    }
    for (auto c : {ErrorCode::MultipleConscious, ErrorCode::UnknownComponent, ErrorCode::NegativeWeight,
                   ErrorCode::TargetNotReady, ErrorCode::NotCollapsed, ErrorCode::OutOfField}) {
        CHECK(exit_code_for(c) == 2);
    }
}
