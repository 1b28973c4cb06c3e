// Command-line front end: parameter tables, single differential runs,
// verification fleets, and construction-cost reports.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "opq/cost.hpp"
#include "opq/differential.hpp"
#include "opq/params.hpp"
#include "opq/system.hpp"
#include "opq/workload.hpp"

namespace {

struct EllRange {
    unsigned lo = 1;
    unsigned hi = 6;
};

EllRange parse_ell_range(const std::string& text) {
    const auto dots = text.find("..");
    if (dots == std::string::npos) {
        const unsigned v = static_cast<unsigned>(std::stoul(text));
        return {v, v};
    }
    EllRange r;
    r.lo = static_cast<unsigned>(std::stoul(text.substr(0, dots)));
    r.hi = static_cast<unsigned>(std::stoul(text.substr(dots + 2)));
    if (r.lo == 0 || r.lo > r.hi) {
        throw CLI::ValidationError("--ell-range", "expected LO..HI with LO >= 1");
    }
    return r;
}

int cmd_run(unsigned ell, std::uint64_t slots, const std::string& family,
            const std::string& arrival_prob, const std::string& request_prob,
            std::uint64_t seed, const std::string& trace_path, bool strict) {
    opq::WorkloadSpec spec;
    spec.family = opq::workload_family_from_name(family);
    spec.slots = slots;
    spec.arrival_prob = opq::Probability::parse(arrival_prob);
    spec.request_prob = opq::Probability::parse(request_prob);
    spec.seed = seed;

    opq::DiffOptions options;
    options.stop_at_divergence = strict;
    options.monitors =
        strict ? opq::MonitorMode::strict : opq::MonitorMode::record;

    std::ofstream trace_file;
    if (!trace_path.empty()) {
        trace_file.open(trace_path);
        if (!trace_file) {
            std::cerr << "cannot open trace file " << trace_path << "\n";
            return 2;
        }
        options.on_trace = [&trace_file](const opq::TraceRecord& record) {
            trace_file << opq::to_json_line(record) << "\n";
        };
    }

    const opq::DiffReport report = opq::run_differential(ell, spec, options);
    std::cout << report.to_json() << "\n";
    return report.clean() ? 0 : 1;
}

int cmd_verify(const std::string& ell_range, unsigned trials,
               std::uint64_t slots, std::uint64_t seed, unsigned jobs) {
    const EllRange range = parse_ell_range(ell_range);
    opq::FleetSpec fleet;
    fleet.ell_lo = range.lo;
    fleet.ell_hi = range.hi;
    fleet.trials = trials;
    fleet.slots = slots;
    fleet.base_seed = seed;
    fleet.jobs = jobs;

    const auto results = opq::run_fleet(fleet);

    struct Aggregate {
        std::uint64_t trials = 0;
        std::uint64_t mismatched = 0;
        std::uint64_t violations = 0;
        std::uint32_t max_entrants = 0;
    };
    std::map<std::pair<unsigned, std::string>, Aggregate> groups;
    bool ok = true;
    for (const opq::TrialResult& r : results) {
        Aggregate& agg =
            groups[{r.ell, std::string(opq::workload_family_name(r.family))}];
        ++agg.trials;
        if (!r.report.matched) {
            ++agg.mismatched;
            ok = false;
        }
        agg.violations += r.report.invariant_violations.size();
        if (!r.report.invariant_violations.empty()) {
            ok = false;
        }
        for (std::uint32_t m : r.report.stats.max_entrants) {
            agg.max_entrants = std::max(agg.max_entrants, m);
        }
        if (!r.report.clean() && r.report.first_divergence) {
            const auto& d = *r.report.first_divergence;
            std::cout << "divergence: ell=" << r.ell << " family="
                      << opq::workload_family_name(r.family)
                      << " seed=" << r.seed << " slot=" << d.slot << " field="
                      << d.field << " system=" << d.system_value
                      << " oracle=" << d.oracle_value << "\n";
        }
    }
    for (const auto& [key, agg] : groups) {
        std::cout << "ell=" << key.first << " family=" << key.second
                  << " trials=" << agg.trials << " mismatched="
                  << agg.mismatched << " violations=" << agg.violations
                  << " max_entrants=" << agg.max_entrants << "\n";
    }
    std::cout << (ok ? "VERIFY PASS" : "VERIFY FAIL") << "\n";
    return ok ? 0 : 1;
}

int cmd_table(unsigned ell) {
    std::cout << opq::render_parameter_table(opq::derive_params(ell));
    return 0;
}

void print_cost_row(unsigned ell, const opq::CostReport& cost, bool csv) {
    const opq::BigInt budget_cubed =
        opq::BigInt(cost.fdl_count) * cost.fdl_count * cost.fdl_count;
    const bool beyond_cubic = cost.buffer > budget_cubed;
    if (csv) {
        std::cout << ell << "," << cost.buffer << "," << cost.fdl_count << ","
                  << cost.switch_size << "," << (beyond_cubic ? 1 : 0) << "\n";
    } else {
        std::cout << "ell=" << ell << " buffer=" << cost.buffer
                  << " fdls=" << cost.fdl_count << " switch="
                  << cost.switch_size
                  << " buffer>M^3=" << (beyond_cubic ? "yes" : "no") << "\n";
    }
}

int cmd_cost(unsigned ell, std::uint64_t budget, bool csv) {
    if (csv) {
        std::cout << "ell,buffer,fdls,switch,buffer_exceeds_M3\n";
    }
    if (budget != 0) {
        const auto [best, cost] = opq::max_ell_for_budget(budget);
        print_cost_row(best, cost, csv);
    } else if (ell != 0) {
        print_cost_row(ell, opq::total_cost(ell), csv);
    } else {
        for (unsigned l = 2; l <= 16; ++l) {
            print_cost_row(l, opq::total_cost(l), csv);
        }
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Simulator and verifier for a multiplexer-based optical "
                 "priority queue"};
    app.require_subcommand(1);

    // run
    auto* run = app.add_subcommand("run", "Run one differential trial");
    unsigned run_ell = 5;
    std::uint64_t run_slots = 2000;
    std::string run_family = "uniform-random";
    std::string run_arrival = "0.5";
    std::string run_request = "0.5";
    std::uint64_t run_seed = 1;
    std::string run_trace;
    bool run_strict = false;
    run->add_option("--ell", run_ell, "Construction parameter ell")->required();
    run->add_option("--slots", run_slots, "Time slots to simulate");
    run->add_option("--workload", run_family,
                    "Workload family (uniform-random, burst, fifo-order, "
                    "lifo-order, full-pressure, adversarial-sweep)");
    run->add_option("--arrival-prob", run_arrival, "Arrival probability");
    run->add_option("--request-prob", run_request, "Request probability");
    run->add_option("--seed", run_seed, "Workload seed");
    run->add_option("--trace", run_trace, "Write a JSONL trace to this file");
    run->add_flag("--strict", run_strict,
                  "Throw on invariant breaches, stop at first divergence");

    // verify
    auto* verify = app.add_subcommand("verify", "Run a verification fleet");
    std::string verify_range = "1..6";
    unsigned verify_trials = 100;
    std::uint64_t verify_slots = 2000;
    std::uint64_t verify_seed = 1;
    unsigned verify_jobs = 0;
    verify->add_option("--ell-range", verify_range, "Range LO..HI of ell");
    verify->add_option("--trials", verify_trials, "Seeds per (ell, family)");
    verify->add_option("--slots", verify_slots, "Time slots per trial");
    verify->add_option("--seed", verify_seed, "Base seed");
    verify->add_option("--jobs", verify_jobs, "Worker threads (0 = all cores)");

    // table
    auto* table = app.add_subcommand("table", "Print the parameter table");
    unsigned table_ell = 5;
    table->add_option("--ell", table_ell, "Construction parameter ell")
        ->required();

    // cost
    auto* cost = app.add_subcommand("cost", "Print construction costs");
    unsigned cost_ell = 0;
    std::uint64_t cost_budget = 0;
    bool cost_csv = false;
    auto* opt_ell = cost->add_option("--ell", cost_ell, "Single ell row");
    auto* opt_budget =
        cost->add_option("--budget", cost_budget, "Largest ell within M FDLs");
    opt_ell->excludes(opt_budget);
    cost->add_flag("--csv", cost_csv, "CSV output");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            return cmd_run(run_ell, run_slots, run_family, run_arrival,
                           run_request, run_seed, run_trace, run_strict);
        }
        if (verify->parsed()) {
            return cmd_verify(verify_range, verify_trials, verify_slots,
                              verify_seed, verify_jobs);
        }
        if (table->parsed()) {
            return cmd_table(table_ell);
        }
        if (cost->parsed()) {
            return cmd_cost(cost_ell, cost_budget, cost_csv);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
