#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "drs/dmc.hpp"
#include "test_channels.hpp"

using drs::DmcChannel;
using drs::LogBase;
using drs::MutualInfoTable;
using drs::SwitchDistribution;
using testutil::close;

namespace {

double total_rate(const std::vector<double>& rates) {
    double sum = 0.0;
    for (double r : rates) sum += r;
    return sum;
}

SwitchDistribution weights(std::vector<double> w) {
    SwitchDistribution sw;
    sw.weights = std::move(w);
    return sw;
}

}  // namespace

TEST_CASE("channel validation") {
    auto bad_row = testutil::binary_adder();
    bad_row.transition[0][0] = 0.5;
    CHECK_THROWS_AS(DmcChannel(bad_row.alphabet_sizes, bad_row.output_size,
                               bad_row.transition, bad_row.inputs),
                    std::invalid_argument);

    auto bad_input = testutil::binary_adder();
    bad_input.inputs[0] = {0.6, 0.6};
    CHECK_THROWS_AS(DmcChannel(bad_input.alphabet_sizes, bad_input.output_size,
                               bad_input.transition, bad_input.inputs),
                    std::invalid_argument);

    CHECK_THROWS_AS(DmcChannel({2, 2}, 3, {{1.0, 0.0, 0.0}}, {{0.5, 0.5}, {0.5, 0.5}}),
                    std::invalid_argument);
}

TEST_CASE("mutual information on the binary adder") {
    const auto ch = testutil::binary_adder();
    CHECK(close(drs::mutual_information(ch, 0b01, 0), 0.5, 1e-13));
    CHECK(close(drs::mutual_information(ch, 0b01, 0b10), 1.0, 1e-13));
    CHECK(close(drs::mutual_information(ch, 0b11, 0), 1.5, 1e-13));
    CHECK(drs::mutual_information(ch, 0, 0b11) == 0.0);  // empty target
    CHECK_THROWS_AS(drs::mutual_information(ch, 0b01, 0b01), std::invalid_argument);
    CHECK_THROWS_AS(drs::mutual_information(ch, 0b100, 0), std::invalid_argument);
}

TEST_CASE("mutual information table") {
    const auto ch = testutil::binary_adder();
    const MutualInfoTable table(ch);
    CHECK(close(table.chain(0), 0.5, 1e-13));
    CHECK(close(table.chain(1), 1.0, 1e-13));
    CHECK(close(table.joint_total(), 1.5, 1e-13));
    CHECK(close(table.single_given(2, 0b01), 1.0, 1e-13));
    CHECK(close(table.conditional(0b01), 1.0, 1e-13));
    CHECK(close(table.conditional(0b11), 1.5, 1e-13));
    CHECK_THROWS_AS(table.single_given(1, 0b01), std::invalid_argument);

    // values are nondecreasing as the known set grows
    const auto big = testutil::adder3();
    const MutualInfoTable t3(big);
    CHECK(t3.chain(0) < t3.chain(1));
    CHECK(t3.chain(1) < t3.chain(2));
}

TEST_CASE("assumption checks") {
    const auto report = drs::check_assumptions(testutil::binary_adder(), 1e-9);
    CHECK(report.symmetric);
    CHECK(report.strict_gain);

    // conditioning on the ignored input adds nothing
    const auto degenerate = drs::check_assumptions(testutil::ignore_second(), 1e-9);
    CHECK(!degenerate.strict_gain);

    const auto xored = drs::check_assumptions(testutil::xor_channel(), 1e-9);
    CHECK(xored.symmetric);
    CHECK(xored.strict_gain);
    CHECK(close(drs::mutual_information(testutil::xor_channel(), 0b01, 0), 0.0,
                1e-13));
    CHECK(close(drs::mutual_information(testutil::xor_channel(), 0b01, 0b10),
                1.0, 1e-13));

    CHECK(!drs::check_assumptions(testutil::skew_adder(), 1e-9).symmetric);
}

TEST_CASE("switch rates on the binary adder") {
    const auto ch = testutil::binary_adder();

    const auto uniform2 = drs::switch_rates(ch, drs::uniform_switch(2), 1);
    REQUIRE(uniform2.size() == 2);
    CHECK(close(uniform2[0], 0.25, 1e-13));
    CHECK(close(uniform2[1], 0.375, 1e-13));
    CHECK(close(total_rate(uniform2), 0.625, 1e-13));

    const auto single = drs::switch_rates(ch, weights({1.0}), 1);
    REQUIRE(single.size() == 1);
    CHECK(close(single[0], 0.5, 1e-13));

    // general lambda: r1 = l I0, r2 = (1-l)(l I1 + (1-l) I0)
    const double l = 0.3;
    const auto skewed = drs::switch_rates(ch, weights({l, 1.0 - l}), 1);
    CHECK(close(skewed[0], l * 0.5, 1e-13));
    CHECK(close(skewed[1], (1.0 - l) * (l * 1.0 + (1.0 - l) * 0.5), 1e-13));

    CHECK_THROWS_AS(drs::switch_rates(ch, weights({0.5, 0.4}), 1),
                    std::invalid_argument);
    CHECK_THROWS_AS(drs::switch_rates(ch, weights({0.5, 0.5}), 3),
                    std::invalid_argument);
}

TEST_CASE("binomial and subset-weighted forms agree under symmetry") {
    std::mt19937 rng(51);
    std::uniform_real_distribution<double> uni(0.05, 1.0);
    for (const auto& ch : {testutil::binary_adder(), testutil::xor_channel(),
                           testutil::adder3()}) {
        for (int levels : {1, 2, 5}) {
            std::vector<double> w(levels);
            double sum = 0.0;
            for (double& x : w) sum += (x = uni(rng));
            for (double& x : w) x /= sum;
            for (int user = 1; user <= ch.num_users(); ++user) {
                const auto fast = drs::switch_rates(ch, weights(w), user);
                const auto general =
                    drs::switch_rates_subset_weighted(ch, weights(w), user);
                for (int k = 0; k < levels; ++k)
                    CHECK(close(fast[k], general[k], 1e-12));
            }
        }
    }
}

TEST_CASE("limit rates") {
    const auto ch = testutil::binary_adder();
    const auto limits = drs::limit_rates(ch);
    REQUIRE(limits.size() == 2);
    CHECK(close(limits[0], 0.75, 1e-13));
    CHECK(close(limits[1], 0.75, 1e-13));
    // equal, per the two-route identity (1/2)(I(X1;Y) + I(X1;Y,X2))
    CHECK(close(limits[0], 0.5 * (0.5 + 1.0), 1e-13));

    const auto solo = drs::limit_rates(testutil::deterministic_channel(
        {2}, 2, [](const std::vector<int>& x) { return x[0]; },
        testutil::uniform_inputs(1, 2)));
    CHECK(close(solo[0], 1.0, 1e-13));

    CHECK_THROWS_AS(drs::limit_rates(testutil::ignore_second()),
                    std::invalid_argument);
}

TEST_CASE("asymmetric limit rates match the subset-averaged form") {
    const auto ch = testutil::skew_adder();
    const MutualInfoTable table(ch);
    const auto limits = drs::limit_rates(ch);
    for (int i = 1; i <= 2; ++i) {
        const unsigned other = i == 1 ? 0b10 : 0b01;
        const double want =
            0.5 * (table.single_given(i, 0) + table.single_given(i, other));
        CHECK(close(limits[i - 1], want, 1e-13));
    }
    // finite-L totals converge to the limit
    for (int i = 1; i <= 2; ++i) {
        const auto rates = drs::switch_rates(ch, drs::uniform_switch(10000), i);
        CHECK(close(total_rate(rates), limits[i - 1], 1e-3));
    }
}

TEST_CASE("two-user error term is exact") {
    const auto ch = testutil::binary_adder();
    CHECK(close(drs::two_user_error_term(ch, 2), 0.125, 1e-15));
    CHECK(close(drs::two_user_error_term(ch, 1), 0.25, 1e-15));
    CHECK(drs::two_user_error_term(ch, 1 << 20) < 1e-6);
    CHECK_THROWS_AS(drs::two_user_error_term(testutil::adder3(), 2),
                    std::invalid_argument);

    const double limit = drs::limit_rates(ch)[0];
    for (int levels : {1, 2, 3, 7, 50, 400, 10000}) {
        const double achieved = drs::uniform_switch_total(ch, levels);
        CHECK(close(limit - achieved, drs::two_user_error_term(ch, levels), 1e-12));
    }
}

TEST_CASE("uniform switch bound") {
    const auto two = testutil::binary_adder();
    CHECK(close(drs::uniform_switch_bound(two, 2), 1.0, 1e-13));  // alpha = 1 bit
    const double limit2 = drs::limit_rates(two)[0];
    for (int levels : {2, 10, 100})
        CHECK(limit2 - drs::uniform_switch_total(two, levels) <=
              drs::uniform_switch_bound(two, levels));

    const auto three = testutil::adder3();
    const double limit3 = drs::limit_rates(three)[0];
    for (int levels : {2, 10, 100}) {
        const double measured = limit3 - drs::uniform_switch_total(three, levels);
        CHECK(measured >= 0.0);
        CHECK(measured <= drs::uniform_switch_bound(three, levels));
    }
    CHECK(drs::uniform_switch_bound(three, 1 << 20) < 1e-5);
}

TEST_CASE("mixture coefficients approach 1/M at the bounded speed") {
    for (int m : {2, 3, 4}) {
        for (int levels : {10, 100, 1000}) {
            const auto coeffs =
                drs::mixture_coefficients(drs::uniform_switch(levels), m);
            REQUIRE(static_cast<int>(coeffs.size()) == m);
            for (int i = 0; i < m; ++i) {
                const double x = m > 1 ? static_cast<double>(i) / (m - 1) : 0.0;
                double bound = std::pow(x, i) * std::pow(1.0 - x, m - 1 - i);
                for (int j = 1; j <= i; ++j) bound = bound * (m - i + j - 1) / j;
                CHECK(std::abs(coeffs[i] - 1.0 / m) <= bound / levels + 1e-15);
            }
        }
    }
}

TEST_CASE("vanishing switch families reach the limit") {
    const auto ch = testutil::binary_adder();
    const double limit = drs::limit_rates(ch)[0];

    CHECK(close(drs::uniform_switch_total(ch, 10000), limit, 1e-3));

    // geometric weights with ratio 1 - c/L keep the largest weight O(1/L)
    const int levels = 10000;
    std::vector<double> w(levels);
    const double q = 1.0 - 2.0 / levels;
    double sum = 0.0;
    for (int k = 0; k < levels; ++k) sum += (w[k] = std::pow(q, k));
    for (double& x : w) x /= sum;
    const auto rates = drs::switch_rates(ch, weights(w), 1);
    CHECK(close(total_rate(rates), limit, 1e-3));
}

TEST_CASE("splitting the last switch weight gains the closed-form amount") {
    const auto ch = testutil::binary_adder();
    const MutualInfoTable table(ch);
    const double gap = table.chain(1) - table.chain(0);

    std::mt19937 rng(53);
    std::uniform_real_distribution<double> uni(0.05, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> w(3);
        double sum = 0.0;
        for (double& x : w) sum += (x = uni(rng));
        for (double& x : w) x /= sum;
        const double alpha = uni(rng);
        std::vector<double> refined{w[0], w[1], alpha * w[2],
                                    (1.0 - alpha) * w[2]};

        const double before = total_rate(drs::switch_rates(ch, weights(w), 1));
        const double after =
            total_rate(drs::switch_rates(ch, weights(refined), 1));
        const double want = alpha * (1.0 - alpha) * w[2] * w[2] * gap;
        CHECK(close(after - before, want, 1e-12));
        CHECK(after > before);
    }
}
