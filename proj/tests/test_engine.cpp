#include <doctest.h>

#include <numeric>
#include <random>

#include "helpers.hpp"
#include "msj/engine.hpp"
#include "msj/errors.hpp"

using namespace msj;
using test_helpers::make_trace;
using test_helpers::slot1_units;

TEST_CASE("initial_state injects only slot-1 arrivals") {
  Trace t = make_trace(8, {{1, 1, 2}, {3, 1, 4}, {1, 1, 1}});
  SystemState s = initial_state(t);
  CHECK(s.slot == 1);
  CHECK(s.count() == 2);
  CHECK(s.arrivals_seen == 2);
  CHECK(s.remaining.count(0) == 1);
  CHECK(s.remaining.count(2) == 1);
  CHECK(s.remaining.at(0).need == 2);
  CHECK(s.remaining.at(0).remaining == 1);
}

TEST_CASE("advance_slot serves, departs, and injects the next slot") {
  Trace t = make_trace(8, {{1, 2, 4}, {1, 1, 2}, {2, 1, 8}}, TraceMode::PowerOfTwo,
                       SizeMode::Weighted);
  SystemState s = initial_state(t);

  AdvanceResult r = advance_slot(s, {{0, 1}, {}}, t);
  CHECK(r.departed == std::vector<int>{1});  // unit job finishes, size-2 job does not
  CHECK(r.next.slot == 2);
  CHECK(r.next.remaining.at(0).remaining == 1);
  CHECK(r.next.remaining.count(2) == 1);  // slot-2 arrival injected
  CHECK(r.next.arrivals_seen == 3);

  AdvanceResult r2 = advance_slot(r.next, {{0}, {}}, t);
  CHECK(r2.departed == std::vector<int>{0});
  CHECK(r2.next.remaining.count(2) == 1);
}

TEST_CASE("advance_slot rejects malformed decisions") {
  Trace t = slot1_units(4, {1, 2, 4});
  SystemState s = initial_state(t);
  CHECK_THROWS_AS(advance_slot(s, {{7}, {}}, t), UnknownJob);
  CHECK_THROWS_AS(advance_slot(s, {{0, 0}, {}}, t), UnknownJob);
  CHECK_THROWS_AS(advance_slot(s, {{0, 1}, {0}}, t), UnknownJob);
  CHECK_THROWS_AS(advance_slot(s, {{0, 1, 2}, {}}, t), CapacityExceeded);
  CHECK_THROWS_AS(advance_slot(s, {{0}, {1, 2}}, t), CapacityExceeded);
  // each bank gets its own K servers
  CHECK_NOTHROW(advance_slot(s, {{0, 1}, {2}}, t));
}

TEST_CASE("ArrivalIndex matches the scanning overload") {
  std::mt19937_64 rng(11);
  for (int round = 0; round < 50; ++round) {
    std::vector<std::tuple<int, int, int>> rows;
    int n = 1 + static_cast<int>(rng() % 8);
    for (int i = 0; i < n; ++i)
      rows.emplace_back(1 + static_cast<int>(rng() % 5), 1, 1 << (rng() % 3));
    Trace t = make_trace(4, rows);
    ArrivalIndex index(t);

    int last = 0;
    for (const Job& j : t.jobs) last = std::max(last, j.arrival);
    CHECK(index.last_arrival() == last);

    SystemState a = initial_state(t);
    SystemState b = initial_state(t);
    for (int step = 0; step < 12; ++step) {
      SlotDecision d;
      if (!a.remaining.empty()) d.reserved.push_back(a.remaining.begin()->first);
      AdvanceResult ra = advance_slot(a, d, t);
      AdvanceResult rb = advance_slot(b, d, t, index);
      CHECK(ra.departed == rb.departed);
      CHECK(ra.next.remaining == rb.next.remaining);
      CHECK(ra.next.arrivals_seen == rb.next.arrivals_seen);
      a = ra.next;
      b = rb.next;
    }
  }
}

TEST_CASE("ArrivalIndex::at returns null for empty slots") {
  Trace t = make_trace(4, {{2, 1, 1}, {2, 1, 2}});
  ArrivalIndex index(t);
  CHECK(index.at(1) == nullptr);
  REQUIRE(index.at(2) != nullptr);
  CHECK(index.at(2)->size() == 2);
}

TEST_CASE("classify_slot is Full exactly when the reserved bank sums to K") {
  Trace t = slot1_units(4, {2, 2, 1});
  SystemState s = initial_state(t);
  CHECK(classify_slot({{0, 1}, {}}, s, 4) == SlotClass::Full);
  CHECK(classify_slot({{0, 2}, {}}, s, 4) == SlotClass::Relaxed);
  CHECK(classify_slot({{}, {}}, s, 4) == SlotClass::Relaxed);
  // the free bank never makes a slot full
  CHECK(classify_slot({{2}, {0, 1}}, s, 4) == SlotClass::Relaxed);
}

TEST_CASE("check_schedule accepts a hand schedule and reports both measures") {
  // two unit jobs at slot 1 on K=2, one need-2 at slot 2
  Trace t = make_trace(2, {{1, 1, 1}, {1, 1, 1}, {2, 1, 2}});
  std::vector<SlotDecision> sched = {{{0, 1}, {}}, {{2}, {}}};
  ScheduleCheck c = check_schedule(t, sched);
  REQUIRE(c.feasible);
  CHECK(c.flow_total == 1 + 1 + 1);
  CHECK(c.flow_waiting == 0);
  CHECK(c.departures.at(0) == 1);
  CHECK(c.departures.at(2) == 2);
  CHECK(c.per_slot_count == std::vector<int>{2, 1});
}

TEST_CASE("check_schedule flow_total equals the occupancy sum") {
  Trace t = make_trace(4, {{1, 2, 2}, {2, 1, 4}, {2, 1, 1}}, TraceMode::PowerOfTwo,
                       SizeMode::Weighted);
  std::vector<SlotDecision> sched = {{{0}, {}}, {{0, 2}, {}}, {{1}, {}}};
  ScheduleCheck c = check_schedule(t, sched);
  REQUIRE(c.feasible);
  long long occupancy = std::accumulate(c.per_slot_count.begin(), c.per_slot_count.end(), 0LL);
  CHECK(c.flow_total == occupancy);
  CHECK(c.flow_waiting == c.flow_total - static_cast<long long>(t.jobs.size()));
}

TEST_CASE("check_schedule reports each infeasibility") {
  Trace t = make_trace(4, {{1, 1, 2}, {2, 1, 2}, {1, 1, 4}});

  SUBCASE("served before arrival") {
    ScheduleCheck c = check_schedule(t, {{{1}, {}}});
    CHECK_FALSE(c.feasible);
    CHECK(c.first_offending_slot == 1);
    CHECK(c.reason.find("before arrival") != std::string::npos);
  }
  SUBCASE("served after completion") {
    ScheduleCheck c = check_schedule(t, {{{0}, {}}, {{0}, {}}});
    CHECK_FALSE(c.feasible);
    CHECK(c.first_offending_slot == 2);
    CHECK(c.reason.find("after completion") != std::string::npos);
  }
  SUBCASE("over capacity") {
    ScheduleCheck c = check_schedule(t, {{{0, 2}, {}}});
    CHECK_FALSE(c.feasible);
    CHECK(c.reason.find("> K=4") != std::string::npos);
  }
  SUBCASE("unknown id") {
    ScheduleCheck c = check_schedule(t, {{{9}, {}}});
    CHECK_FALSE(c.feasible);
  }
  SUBCASE("job listed twice in a slot") {
    ScheduleCheck c = check_schedule(t, {{{0}, {0}}});
    CHECK_FALSE(c.feasible);
  }
  SUBCASE("unfinished jobs") {
    ScheduleCheck c = check_schedule(t, {{{0}, {}}});
    CHECK_FALSE(c.feasible);
    CHECK(c.reason.find("never finish") != std::string::npos);
  }
}

TEST_CASE("check_schedule volume tracks served work and arrivals") {
  Trace t = make_trace(4, {{1, 2, 2}, {2, 1, 4}}, TraceMode::PowerOfTwo, SizeMode::Weighted);
  std::vector<SlotDecision> sched = {{{0}, {}}, {{1}, {}}, {{0}, {}}};
  ScheduleCheck c = check_schedule(t, sched, true);
  REQUIRE(c.feasible);
  REQUIRE(c.per_slot_volume.size() == 3);
  CHECK(c.per_slot_volume[0] == 4);            // job 0: 2 slots * need 2
  CHECK(c.per_slot_volume[1] == 2 + 4);        // job 0 half done, job 1 arrived
  CHECK(c.per_slot_volume[2] == 2);
  // V(t+1) = V(t) - served needs + arriving volume, across every step
  CHECK(c.per_slot_volume[1] == c.per_slot_volume[0] - 2 + 4);
  CHECK(c.per_slot_volume[2] == c.per_slot_volume[1] - 4);
  REQUIRE(c.states.size() == 3);
  CHECK(c.states[0].size() == 1);
  CHECK(c.states[1].size() == 2);
}

TEST_CASE("check_schedule trims trailing empty slots") {
  Trace t = slot1_units(4, {1});
  std::vector<SlotDecision> sched = {{{0}, {}}, {}, {}};
  ScheduleCheck c = check_schedule(t, sched);
  REQUIRE(c.feasible);
  CHECK(c.per_slot_count == std::vector<int>{1});
}
