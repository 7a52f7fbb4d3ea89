// SPDX-License-Identifier: Apache-2.0
// Command-line front end: length, pipeline, verify, primitivity, search, report.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include "wordlen/wordlen.hpp"

using namespace wordlen;

namespace {

struct Common {
    std::string field = "2";
    std::size_t n = 3;
    std::size_t set_size = 2;
    std::size_t trials = 0;
    std::uint64_t seed = 1;
    std::string input;
    std::string json_out;
    std::string csv_out;
    std::size_t cap = 0;
    std::size_t jobs = 1;
    std::string family = "random";
};

std::pair<std::uint64_t, unsigned> parse_field(const std::string& s) {
    const auto comma = s.find(',');
    try {
        const auto p = std::stoull(s.substr(0, comma));
        const unsigned e = comma == std::string::npos ? 1u : static_cast<unsigned>(std::stoul(s.substr(comma + 1)));
        return {p, e};
    } catch (const std::exception&) {
        throw DomainError("--field expects p or p,e");
    }
}

void add_common(CLI::App* app, Common& c, bool generated = true) {
    app->add_option("--field", c.field, "Field as p or p,e (p = 0: rationals, --input only)");
    app->add_option("--n", c.n, "Matrix size");
    app->add_option("--set-size", c.set_size, "Number of generators");
    app->add_option("--trials", c.trials, "Trials (suites) or search budget");
    app->add_option("--seed", c.seed, "Seed");
    app->add_option("--json", c.json_out, "Write JSON here");
    app->add_option("--csv", c.csv_out, "Write CSV here");
    app->add_option("--cap", c.cap, "Iteration cap (length, primitivity) or extension degree cap (pipeline, verify, report)");
    app->add_option("--jobs", c.jobs, "Worker threads");
    if (generated) {
        app->add_option("--input", c.input, "Matrix literal (JSON) instead of a generated instance");
        app->add_option("--family", c.family, "Generated family: random, clifford, companion-plus-rank-one, block-triangular, derogatory");
    }
}

ExtensionCap ext_cap(const Common& c) {
    ExtensionCap cap;
    if (c.cap) cap.max_degree = static_cast<unsigned>(c.cap);
    return cap;
}

Instance load_instance(const Common& c) {
    InstanceSpec spec;
    if (!c.input.empty()) {
        spec.family = "explicit";
        spec.literal = read_json_file(c.input);
    } else {
        std::tie(spec.p, spec.e) = parse_field(c.field);
        spec.n = c.n;
        spec.set_size = c.set_size;
        spec.seed = c.seed;
        spec.family = c.family;
    }
    return gen_instances(spec);
}

void emit(const Common& c, const Json& j) {
    const std::string text = j.dump(2) + "\n";
    if (c.json_out.empty())
        std::cout << text;
    else
        write_text_file(c.json_out, text);
}

int finish_report(const Common& c, const ExperimentReport& rep) {
    const std::string text = to_json(rep).dump(2) + "\n";
    if (!c.json_out.empty()) write_text_file(c.json_out, text);
    if (!c.csv_out.empty()) write_text_file(c.csv_out, to_csv(rep));
    std::cout << rep.name << ": " << rep.records.size() << " instances, " << rep.fatal() << " proved-bound violations, "
              << rep.observed() << " observations\n";
    if (!rep.extras.empty()) std::cout << rep.extras.dump(2) << "\n";
    for (const auto& r : rep.records)
        for (const auto& ch : r.checks)
            if (ch.status == Status::fail || ch.status == Status::observed)
                std::cout << (ch.fatal() ? "VIOLATION " : "OBSERVED ") << ch.name << " at instance " << r.index << ": "
                          << ch.detail << "\n";
    return rep.fatal() ? 1 : 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Length of matrix generating sets over finite fields"};
    app.require_subcommand(1);

    Common c;
    std::string suite, strategy = "adaptive";
    std::size_t target = 0;

    auto* length_cmd = app.add_subcommand("length", "Length filtration of a generating set");
    add_common(length_cmd, c);

    auto* pipe_cmd = app.add_subcommand("pipeline", "Rank-one square-zero witness with its trace");
    add_common(pipe_cmd, c);
    pipe_cmd->add_option("--strategy", strategy, "adaptive, threshold, case1 or case2")
        ->check(CLI::IsMember({"adaptive", "threshold", "case1", "case2"}));

    auto* verify_cmd = app.add_subcommand("verify", "Run a bound-check suite");
    add_common(verify_cmd, c, false);
    verify_cmd->add_option("--suite", suite, "Suite")
        ->required()
        ->check(CLI::IsMember({"paz", "theorem", "claims", "ov", "cldeg2", "thr5"}));
    std::optional<std::size_t> n_override, k_override;
    std::optional<std::string> field_override;
    verify_cmd->get_option("--n")->each([&](const std::string& v) { n_override = std::stoul(v); });
    verify_cmd->get_option("--set-size")->each([&](const std::string& v) { k_override = std::stoul(v); });
    verify_cmd->get_option("--field")->each([&](const std::string& v) { field_override = v; });

    auto* prim_cmd = app.add_subcommand("primitivity", "Smallest t with span(S^t) = Mat_n");
    add_common(prim_cmd, c);

    auto* search_cmd = app.add_subcommand("search", "Search for a generating set of a given length");
    add_common(search_cmd, c, false);
    search_cmd->add_option("--target-length", target, "Length to reach")->required();

    auto* report_cmd = app.add_subcommand("report", "Run an experiment config");
    add_common(report_cmd, c, false);
    report_cmd->add_option("--input", c.input, "Config file (JSON)")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (*length_cmd) {
            const auto inst = load_instance(c);
            LengthReport r = inst.is_rational() ? span_filtration(inst.rational, c.cap).report : span_filtration(inst.s, c.cap).report;
            emit(c, to_json(r));
            return 0;
        }
        if (*pipe_cmd) {
            const auto inst = load_instance(c);
            if (inst.is_rational()) throw DomainError("the pipeline needs a finite field");
            PipelineOptions po;
            po.cap = ext_cap(c);
            po.strategy = strategy == "threshold" ? CaseStrategy::paper_threshold
                          : strategy == "case1"   ? CaseStrategy::force_case1
                          : strategy == "case2"   ? CaseStrategy::force_case2
                                                  : CaseStrategy::adaptive;
            const auto res = rank_one_pipeline(inst.s, po);
            const auto bad = check_trace(res.trace);
            Json j = to_json(res);
            j["n"] = inst.n();
            j["violations"] = bad;
            emit(c, j);
            return bad.empty() ? 0 : 1;
        }
        if (*verify_cmd) {
            SuiteOptions o;
            if (c.trials) o.trials = c.trials;
            o.seed = c.seed;
            o.jobs = c.jobs;
            o.n = n_override;
            o.set_size = k_override;
            if (field_override) std::tie(o.p, o.e) = parse_field(*field_override);
            o.cap = ext_cap(c);
            return finish_report(c, run_suite(suite, o));
        }
        if (*prim_cmd) {
            const auto inst = load_instance(c);
            PrimitivityResult r = inst.is_rational() ? homogeneous_index(inst.rational, c.cap) : homogeneous_index(inst.s, c.cap);
            Json j;
            j["index"] = r.index ? Json(*r.index) : Json(nullptr);
            j["examined"] = r.examined;
            j["certified_absent"] = r.certified_absent;
            j["dims"] = r.dims;
            emit(c, j);
            return 0;
        }
        if (*search_cmd) {
            const auto [p, e] = parse_field(c.field);
            const auto hit = search_length(make_field(p, e), c.n, target, c.trials ? c.trials : 20000, c.seed);
            Json j{{"n", c.n}, {"target", target}, {"found", hit.has_value()}};
            if (hit) {
                j["length"] = hit->length;
                j["tried"] = hit->tried;
                j["family"] = hit->family;
                j["set"] = literal_to_json(hit->s);
            }
            emit(c, j);
            return hit ? 0 : 2;
        }
        if (*report_cmd) {
            std::optional<std::size_t> jobs;
            if (report_cmd->get_option("--jobs")->count()) jobs = c.jobs;
            return finish_report(c, run_experiment(read_json_file(c.input), jobs));
        }
    } catch (const CapExceeded& e) {
        std::cerr << "cap exceeded: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
