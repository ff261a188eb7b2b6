// Command-line front end: closed-form split/rate tables, convergence sweeps
// in CSV, and schedule construction + verification for both channel models.
//
// Exit codes: 0 success, 1 precondition violation, 2 bad flags or unreadable
// input files, 3 schedule verification failure.

#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "drs/dmc.hpp"
#include "drs/dmc_protocol.hpp"
#include "drs/gaussian.hpp"
#include "drs/gaussian_protocol.hpp"
#include "drs/json_io.hpp"
#include "drs/oracles.hpp"

namespace {

using drs::LogBase;

LogBase parse_base(const std::string& name) {
    return name == "bit" ? LogBase::bit : LogBase::nat;
}

std::string num(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return buf;
}

struct SplitOptions {
    int users = 0;
    double power = 0.0;
    std::vector<double> powers;
    double noise = 1.0;
    int levels = 1;
    std::string base = "nat";
    bool as_json = false;
    bool symmetric = false;  // set after flag validation
};

int run_split(const SplitOptions& opt) {
    const LogBase base = parse_base(opt.base);
    if (opt.symmetric) {
        const auto ch =
            drs::GaussianChannel::symmetric(opt.users, opt.power, opt.noise, base);
        const drs::PowerSplit split = drs::optimal_split(ch, opt.levels);
        const drs::RateAllocation alloc = drs::rate_allocation(ch, split);
        const double r_star = drs::max_equal_rate(ch);
        const double error = r_star - alloc.total;

        if (opt.as_json) {
            nlohmann::json j{{"users", opt.users},       {"power", opt.power},
                             {"noise", opt.noise},       {"levels", opt.levels},
                             {"base", opt.base},         {"split", split.levels},
                             {"sirs", alloc.sirs},       {"rates", alloc.rates},
                             {"total", alloc.total},     {"max_equal_rate", r_star},
                             {"error", error}};
            std::printf("%s\n", j.dump(2).c_str());
            return 0;
        }
        std::printf("M=%d  P=%s W  N=%s W  L=%d  unit=%s\n", opt.users,
                    num(opt.power).c_str(), num(opt.noise).c_str(), opt.levels,
                    drs::unit_name(base));
        std::printf("%4s  %14s  %14s  %14s\n", "k", "p_k", "SIR_k", "r_k");
        for (int k = 0; k < split.size(); ++k)
            std::printf("%4d  %14.9f  %14.9f  %14.9f\n", k + 1,
                        split.levels[k], alloc.sirs[k], alloc.rates[k]);
        std::printf("total           %s\n", num(alloc.total).c_str());
        std::printf("max equal rate  %s\n", num(r_star).c_str());
        std::printf("error           %s\n", num(error).c_str());
        return 0;
    }

    const drs::GaussianChannel ch(opt.powers, opt.noise, base);
    const auto gamma = drs::asymmetric_fractions(ch, opt.levels);
    const auto splits = drs::asymmetric_split(ch, opt.levels);
    const auto limits = drs::asymmetric_limit_rates(ch);
    double limit_sum = 0.0;
    for (double r : limits) limit_sum += r;

    if (opt.as_json) {
        nlohmann::json per_user = nlohmann::json::array();
        for (const auto& split : splits) per_user.push_back(split.levels);
        nlohmann::json j{{"powers", opt.powers},   {"noise", opt.noise},
                         {"levels", opt.levels},   {"base", opt.base},
                         {"gamma", gamma},         {"levels_per_user", per_user},
                         {"limit_rates", limits},  {"limit_sum", limit_sum}};
        std::printf("%s\n", j.dump(2).c_str());
        return 0;
    }
    std::printf("M=%zu  N=%s W  L=%d  unit=%s\n", opt.powers.size(),
                num(opt.noise).c_str(), opt.levels, drs::unit_name(base));
    std::printf("gamma:");
    for (double g : gamma) std::printf(" %.9f", g);
    std::printf("\n");
    for (size_t i = 0; i < splits.size(); ++i) {
        std::printf("user %zu (P=%s):", i + 1, num(opt.powers[i]).c_str());
        for (double p : splits[i].levels) std::printf(" %.9f", p);
        std::printf("\n");
    }
    std::printf("limit rates:");
    for (double r : limits) std::printf(" %.9f", r);
    std::printf("  (sum %s)\n", num(limit_sum).c_str());
    return 0;
}

struct SweepOptions {
    int users = 0;
    double power = 0.0;
    double noise = 1.0;
    int l_max = 1;
    std::string family = "optimal";
    std::string base = "nat";
};

int run_sweep(const SweepOptions& opt) {
    const auto ch = drs::GaussianChannel::symmetric(opt.users, opt.power,
                                                    opt.noise, parse_base(opt.base));
    const double r_star = drs::max_equal_rate(ch);
    std::printf("L,total,Rstar,e,Le\n");
    if (opt.family == "optimal") {
        for (const auto& rec : drs::error_curve(ch, opt.l_max))
            std::printf("%d,%s,%s,%s,%s\n", rec.levels, num(rec.achieved).c_str(),
                        num(rec.target).c_str(), num(rec.error).c_str(),
                        num(rec.scaled_error).c_str());
        return 0;
    }
    const auto totals = drs::split_family_totals(
        ch, [&](int levels) { return drs::uniform_split(ch, levels); }, opt.l_max);
    for (int levels = 1; levels <= opt.l_max; ++levels) {
        const double total = totals[levels - 1];
        const double e = r_star - total;
        std::printf("%d,%s,%s,%s,%s\n", levels, num(total).c_str(),
                    num(r_star).c_str(), num(e).c_str(), num(levels * e).c_str());
    }
    return 0;
}

struct ScheduleOptions {
    std::vector<int> counts;
    double power = 0.0;
    double noise = 1.0;
    bool have_power = false;
    std::string channel_path;
    std::string base = "nat";
    bool as_json = false;
};

int run_schedule(const ScheduleOptions& opt) {
    for (int c : opt.counts)
        if (c < 1) {
            std::fprintf(stderr, "counts must be >= 1\n");
            return 1;
        }
    const LogBase base = parse_base(opt.base);

    nlohmann::json j;
    bool ok = false;
    if (opt.channel_path.empty()) {
        const auto ch = drs::GaussianChannel::symmetric(
            static_cast<int>(opt.counts.size()), opt.power, opt.noise, base);
        const auto users = drs::build_virtual_users(ch, opt.counts);
        const auto schedule = drs::min_power_schedule(users, ch);
        const auto report = drs::verify_schedule(users, schedule, ch);
        ok = report.ok;
        j = report;
        j["order"] = schedule.order;
        if (!opt.as_json) {
            std::printf("order:");
            for (const auto& ref : schedule.order)
                std::printf(" %d.%d", ref.owner, ref.index);
            std::printf("\n%6s  %14s  %14s  %14s\n", "step", "tolerance",
                        "actual", "slack");
            for (const auto& step : report.steps)
                std::printf("%3d.%-2d  %14.9f  %14.9f  %14.9f\n", step.who.owner,
                            step.who.index, step.tolerance, step.actual,
                            step.slack);
        }
    } else {
        const auto ch = drs::load_dmc_channel(opt.channel_path, base);
        const auto sys = drs::build_switch_system(ch, opt.counts);
        const auto schedule = drs::min_progress_schedule(sys);
        const auto report = drs::verify_schedule(ch, sys, schedule);
        ok = report.ok;
        j = report;
        j["order"] = schedule.order;
        if (!opt.as_json) {
            std::printf("order:");
            for (const auto& ref : schedule.order)
                std::printf(" %d.%d", ref.owner, ref.index);
            std::printf("\n%6s  %14s  %14s  %14s\n", "step", "mutual_info",
                        "rate", "slack");
            for (const auto& step : report.steps)
                std::printf("%3d.%-2d  %14.9f  %14.9f  %14.9f\n", step.who.owner,
                            step.who.index, step.mutual_info, step.rate,
                            step.slack);
        }
    }
    if (opt.as_json)
        std::printf("%s\n", j.dump(2).c_str());
    else
        std::printf("verdict: %s\n", ok ? "OK" : "FAIL");
    return ok ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Distributed rate-splitting allocations and successive-decoding "
                 "schedules for multiple-access channels"};
    app.require_subcommand(1);

    SplitOptions split_opt;
    CLI::App* split = app.add_subcommand(
        "split", "Power split, rates and SIRs for one operating point");
    auto* users_flag =
        split->add_option("--users,-m", split_opt.users, "number of users");
    auto* power_flag = split->add_option("--power,-p", split_opt.power,
                                         "per-user power (symmetric case)");
    auto* powers_flag = split->add_option("--powers", split_opt.powers,
                                          "per-user powers (asymmetric case)")
                            ->delimiter(',');
    split->add_option("--noise,-n", split_opt.noise, "noise variance")->required();
    split->add_option("--levels,-l", split_opt.levels, "virtual users per real user")
        ->required();
    split->add_option("--base", split_opt.base, "rate unit")
        ->check(CLI::IsMember({"nat", "bit"}));
    split->add_flag("--json", split_opt.as_json, "emit JSON instead of a table");
    power_flag->excludes(powers_flag);
    power_flag->needs(users_flag);

    SweepOptions sweep_opt;
    CLI::App* sweep = app.add_subcommand(
        "sweep", "CSV of total rate vs number of virtual users");
    sweep->add_option("--users,-m", sweep_opt.users, "number of users")->required();
    sweep->add_option("--power,-p", sweep_opt.power, "per-user power")->required();
    sweep->add_option("--noise,-n", sweep_opt.noise, "noise variance")->required();
    sweep->add_option("--l-max", sweep_opt.l_max, "largest virtual-user count")
        ->required();
    sweep->add_option("--family", sweep_opt.family, "split family")
        ->check(CLI::IsMember({"optimal", "uniform"}));
    sweep->add_option("--base", sweep_opt.base, "rate unit")
        ->check(CLI::IsMember({"nat", "bit"}));

    ScheduleOptions sched_opt;
    CLI::App* sched = app.add_subcommand(
        "schedule", "Build and verify a successive-decoding schedule");
    sched->add_option("--counts", sched_opt.counts,
                      "virtual users per real user, e.g. 1,2")
        ->required()
        ->delimiter(',');
    auto* sp = sched->add_option("--power,-p", sched_opt.power,
                                 "per-user power (Gaussian mode)");
    auto* sn = sched->add_option("--noise,-n", sched_opt.noise,
                                 "noise variance (Gaussian mode)");
    auto* sc = sched->add_option("--channel", sched_opt.channel_path,
                                 "channel description JSON (DMC mode)");
    sched->add_option("--base", sched_opt.base, "rate unit")
        ->check(CLI::IsMember({"nat", "bit"}));
    sched->add_flag("--json", sched_opt.as_json, "emit JSON instead of a table");
    sc->excludes(sp);
    sc->excludes(sn);
    sp->needs(sn);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (split->parsed()) {
            split_opt.symmetric = powers_flag->count() == 0;
            if (split_opt.symmetric && power_flag->count() == 0) {
                std::fprintf(stderr, "one of --power or --powers is required\n");
                return 2;
            }
            return run_split(split_opt);
        }
        if (sweep->parsed()) return run_sweep(sweep_opt);
        if (sched->parsed()) {
            sched_opt.have_power = sp->count() > 0;
            if (sched_opt.channel_path.empty() && !sched_opt.have_power) {
                std::fprintf(stderr,
                             "either --channel or --power/--noise is required\n");
                return 2;
            }
            return run_schedule(sched_opt);
        }
    } catch (const std::runtime_error& e) {  // unreadable or malformed files
        std::fprintf(stderr, "%s\n", e.what());
        return 2;
    } catch (const std::exception& e) {  // precondition violations
        std::fprintf(stderr, "%s\n", e.what());
        return 1;
    }
    return 0;
}
