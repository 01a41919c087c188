#include <catch2/catch_amalgamated.hpp>

#include "ccgym/event_queue.hpp"

using namespace ccgym;

namespace {
SimEvent at(SimTime t, EventKind k = EventKind::TimerFire, std::int32_t flow = 0) {
    SimEvent ev;
    ev.time = t;
    ev.kind = k;
    ev.flow = flow;
    return ev;
}
}  // namespace

TEST_CASE("pop order is by time regardless of push order") {
    EventQueue q;
    q.push(at(5));
    q.push(at(3));
    auto first = q.pop();
    REQUIRE(first);
    CHECK(first->time == 3);
    auto second = q.pop();
    REQUIRE(second);
    CHECK(second->time == 5);
}

TEST_CASE("equal timestamps break ties by insertion order") {
    EventQueue q;
    q.push(at(7, EventKind::TimerFire, 1));  // A
    q.push(at(7, EventKind::TimerFire, 2));  // B
    CHECK(q.pop()->flow == 1);
    CHECK(q.pop()->flow == 2);
}

TEST_CASE("pop on empty queue signals end of simulation") {
    EventQueue q;
    CHECK_FALSE(q.pop().has_value());
    q.push(at(1));
    q.pop();
    CHECK_FALSE(q.pop().has_value());
}

TEST_CASE("events cannot be scheduled in the past") {
    EventQueue q;
    q.push(at(10));
    q.pop();  // clock is now 10
    CHECK_THROWS_AS(q.push(at(9)), std::logic_error);
    CHECK_NOTHROW(q.push(at(10)));
}

TEST_CASE("pop sequence is strictly increasing in (time, seq)") {
    EventQueue q;
    std::mt19937_64 rng(7);
    for (int i = 0; i < 1000; ++i) q.push(at(rng() % 50));
    SimTime last_time = 0;
    std::uint64_t last_seq = 0;
    bool first = true;
    while (auto ev = q.pop()) {
        if (!first) {
            REQUIRE(ev->time >= last_time);
            if (ev->time == last_time) REQUIRE(ev->seq > last_seq);
        }
        last_time = ev->time;
        last_seq = ev->seq;
        first = false;
    }
}
