#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "drs/dmc_protocol.hpp"
#include "drs/json_io.hpp"
#include "test_channels.hpp"

using drs::DecodingSchedule;
using drs::SwitchSystem;
using drs::UserRef;
using testutil::close;

TEST_CASE("switch system rates for the worked counts") {
    const auto ch = testutil::binary_adder();
    const auto sys = drs::build_switch_system(ch, {2, 3});
    REQUIRE(sys.rates.size() == 2);
    REQUIRE(sys.rates[0].size() == 2);
    REQUIRE(sys.rates[1].size() == 3);
    CHECK(close(sys.rates[0][0], 0.25, 1e-13));
    CHECK(close(sys.rates[0][1], 0.375, 1e-13));
    CHECK(close(sys.rates[1][0], 1.0 / 6.0, 1e-13));
    CHECK(close(sys.rates[1][1], 2.0 / 9.0, 1e-13));
    CHECK(close(sys.rates[1][2], 5.0 / 18.0, 1e-13));

    const auto ones = drs::build_switch_system(ch, {1, 1});
    CHECK(close(ones.rates[0][0], 0.5, 1e-13));
    CHECK(close(ones.rates[1][0], 0.5, 1e-13));

    CHECK_THROWS_AS(drs::build_switch_system(ch, {0, 2}), std::invalid_argument);
    CHECK_THROWS_AS(drs::build_switch_system(ch, {2}), std::invalid_argument);
    CHECK_THROWS_AS(drs::build_switch_system(testutil::skew_adder(), {2, 2}),
                    std::invalid_argument);
}

TEST_CASE("equal counts reproduce the common-switch rates") {
    for (const auto& ch : {testutil::binary_adder(), testutil::adder3()}) {
        for (int levels : {1, 2, 5}) {
            std::vector<int> counts(ch.num_users(), levels);
            const auto sys = drs::build_switch_system(ch, counts);
            const auto want =
                drs::switch_rates(ch, drs::uniform_switch(levels), 1);
            for (int i = 0; i < ch.num_users(); ++i)
                for (int k = 0; k < levels; ++k)
                    CHECK(close(sys.rates[i][k], want[k], 1e-12));
        }
    }
}

TEST_CASE("per-user totals stay below the limit and converge") {
    const auto ch = testutil::binary_adder();
    const double limit = drs::limit_rates(ch)[0];
    double prev = 0.0;
    for (int levels : {1, 2, 4, 16, 256, 2048}) {
        const auto sys = drs::build_switch_system(ch, {levels, levels});
        double total = 0.0;
        for (double r : sys.rates[0]) total += r;
        CHECK(total <= limit + 1e-12);
        CHECK(total > prev);
        prev = total;
    }
    CHECK(close(prev, limit, 1e-3));
}

TEST_CASE("min-progress schedule matches the worked order") {
    const auto ch = testutil::binary_adder();
    const auto sys = drs::build_switch_system(ch, {2, 3});
    const auto schedule = drs::min_progress_schedule(sys);
    const std::vector<UserRef> want{{1, 1}, {2, 1}, {2, 2}, {1, 2}, {2, 3}};
    CHECK(schedule.order == want);

    const auto ones = drs::build_switch_system(ch, {1, 1});
    const std::vector<UserRef> stage0{{1, 1}, {2, 1}};
    CHECK(drs::min_progress_schedule(ones).order == stage0);

    // equal counts: classes complete in owner order before the next begins
    const auto sys3 = drs::build_switch_system(testutil::adder3(), {3, 3, 3});
    const auto order3 = drs::min_progress_schedule(sys3).order;
    for (size_t pos = 0; pos < order3.size(); ++pos) {
        CHECK(order3[pos].index == static_cast<int>(pos / 3) + 1);
        CHECK(order3[pos].owner == static_cast<int>(pos % 3) + 1);
    }
}

TEST_CASE("verification of the worked schedule") {
    const auto ch = testutil::binary_adder();
    const auto sys = drs::build_switch_system(ch, {2, 3});
    const auto schedule = drs::min_progress_schedule(sys);
    const auto report = drs::verify_schedule(ch, sys, schedule);
    REQUIRE(report.ok);
    REQUIRE(report.steps.size() == 5);
    CHECK(report.min_slack >= -1e-12);

    // step decoding virtual user 22: supportable rate (1/3)(1/2 I1 + 1/2 I0)
    const auto& step22 = report.steps[2];
    CHECK(step22.who == UserRef{2, 2});
    CHECK(close(step22.mutual_info, 0.25, 1e-13));
    CHECK(close(step22.rate, 2.0 / 9.0, 1e-13));
    CHECK(close(step22.slack, 1.0 / 36.0, 1e-13));
}

TEST_CASE("equal counts verify with zero slack at round leaders") {
    const auto ch = testutil::binary_adder();
    for (int levels : {1, 2, 4, 8}) {
        const auto sys = drs::build_switch_system(ch, {levels, levels});
        const auto report =
            drs::verify_schedule(ch, sys, drs::min_progress_schedule(sys));
        REQUIRE(report.ok);
        CHECK(report.min_slack >= -1e-12);
        CHECK(close(report.min_slack, 0.0, 1e-12));
        for (size_t pos = 0; pos < report.steps.size(); pos += 2)
            CHECK(close(report.steps[pos].slack, 0.0, 1e-12));
    }
}

TEST_CASE("random count vectors always verify") {
    std::mt19937 rng(61);
    std::uniform_int_distribution<int> levels(1, 6);
    for (const auto& ch : {testutil::binary_adder(), testutil::xor_channel(),
                           testutil::adder3()}) {
        for (int trial = 0; trial < 50; ++trial) {
            std::vector<int> counts(ch.num_users());
            for (int& c : counts) c = levels(rng);
            const auto sys = drs::build_switch_system(ch, counts);
            const auto report =
                drs::verify_schedule(ch, sys, drs::min_progress_schedule(sys));
            CHECK(report.ok);
            CHECK(report.min_slack >= -1e-12);
        }
    }
}

TEST_CASE("adversarial order fails") {
    const auto ch = testutil::binary_adder();
    const auto sys = drs::build_switch_system(ch, {2, 3});
    DecodingSchedule bad;
    bad.order = {{1, 1}, {2, 1}, {1, 2}, {2, 2}, {2, 3}};
    const auto report = drs::verify_schedule(ch, sys, bad);
    CHECK(!report.ok);
    REQUIRE(report.first_violation == 2);
    // decoding 12 with user 2 only 1/3 done: (1/2)(1/3 I1 + 2/3 I0) < 0.375
    CHECK(close(report.steps[2].slack, 1.0 / 3.0 - 0.375, 1e-13));
}

TEST_CASE("structural defects are reported") {
    const auto ch = testutil::binary_adder();
    const auto sys = drs::build_switch_system(ch, {2, 2});

    DecodingSchedule incomplete;
    incomplete.order = {{1, 1}, {2, 1}, {1, 2}};
    CHECK(!drs::verify_schedule(ch, sys, incomplete).ok);

    DecodingSchedule unknown;
    unknown.order = {{1, 1}, {2, 1}, {1, 2}, {2, 3}};
    CHECK(!drs::verify_schedule(ch, sys, unknown).ok);

    DecodingSchedule reversed;
    reversed.order = {{1, 2}, {2, 1}, {1, 1}, {2, 2}};
    const auto report = drs::verify_schedule(ch, sys, reversed);
    CHECK(!report.ok);
    CHECK(!report.error.empty());
}

TEST_CASE("report JSON shape") {
    const auto ch = testutil::binary_adder();
    const auto sys = drs::build_switch_system(ch, {2, 3});
    const auto schedule = drs::min_progress_schedule(sys);
    const nlohmann::json j = drs::verify_schedule(ch, sys, schedule);
    CHECK(j.at("ok").get<bool>());
    CHECK(j.at("steps").size() == 5);
    CHECK(close(j.at("steps")[2].at("slack").get<double>(), 1.0 / 36.0, 1e-13));

    const nlohmann::json order_json = schedule;
    CHECK(order_json.at("order").size() == 5);
    CHECK(order_json.at("order")[2][0].get<int>() == 2);
}
