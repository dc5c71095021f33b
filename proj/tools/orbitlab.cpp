#include <fstream>
#include <iostream>
#include <map>
#include <thread>

#include "CLI11.hpp"

#include "orbitlab/cli.hpp"
#include "orbitlab/error.hpp"

using namespace orbitlab;
using namespace orbitlab::cli;

namespace {

struct Common {
    std::uint64_t seed = 0;
    double tol = 0;
    bool canonical = false;
    std::string output;
};

void add_common(CLI::App* app, Common& c) {
    app->add_option("--seed", c.seed, "RNG seed");
    app->add_option("--tol", c.tol, "tolerance override for this run")->check(CLI::PositiveNumber);
    app->add_flag("--canonical", c.canonical, "omit wall-clock fields");
    app->add_option("--output,-o", c.output, "write the report here instead of stdout");
}

int emit(const json& doc, const std::string& path) {
    const std::string text = render(doc);
    if (path.empty()) {
        std::cout << text;
        return 0;
    }
    std::ofstream f(path);
    if (!f) {
        std::cerr << "orbitlab: cannot write " << path << "\n";
        return usage;
    }
    f << text;
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Numerical laboratory for Toeplitz orbits, weighted shifts and Fourier coefficients of measures"};
    app.require_subcommand(1);
    app.set_version_flag("--version", tool_version);

    Common common;
    std::map<std::string, std::map<std::string, std::string>> scalars;
    std::map<std::string, std::map<std::string, std::vector<std::string>>> lists;

    for (const auto& spec : commands()) {
        CLI::App* sub = app.add_subcommand(spec.name, spec.help);
        add_common(sub, common);
        for (const auto& p : spec.params) {
            std::string help = p.help;
            if (!p.fallback.is_null()) help += " (default " + p.fallback.dump() + ")";
            auto* opt = p.type == ParamType::list
                            ? sub->add_option("--" + p.key, lists[spec.name][p.key], help)
                            : sub->add_option("--" + p.key, scalars[spec.name][p.key], help);
            if (p.fallback.is_null()) opt->required();
        }
    }

    std::string job_file;
    unsigned workers = 1;
    CLI::App* run = app.add_subcommand("run", "run a JSON job file");
    run->add_option("--job-file", job_file, "JSON array of jobs, or {\"jobs\": [...]}")->required();
    run->add_option("--jobs,-j", workers, "worker threads")->check(CLI::Range(1u, 1024u));
    run->add_flag("--canonical", common.canonical, "omit wall-clock fields");
    run->add_option("--output,-o", common.output, "write the report here instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : usage;
    }

    if (run->parsed()) {
        std::vector<JobSpec> jobs;
        try {
            jobs = load_job_file(job_file);
        } catch (const Error& e) {
            std::cerr << "orbitlab: " << e.what() << "\n";
            return usage;
        }
        const auto results = run_jobs(jobs, workers, common.canonical);
        const int rc = emit(merge_reports(results), common.output);
        return rc ? rc : merged_exit_code(results);
    }

    for (const auto& spec : commands()) {
        CLI::App* sub = app.get_subcommand(spec.name);
        if (!sub->parsed()) continue;
        JobSpec job;
        job.name = job.command = spec.name;
        job.seed = common.seed;
        if (common.tol > 0) job.tol = common.tol;
        for (const auto& p : spec.params) {
            if (sub->count("--" + p.key) == 0) continue;
            if (p.type == ParamType::list)
                job.params[p.key] = lists[spec.name][p.key];
            else
                job.params[p.key] = scalars[spec.name][p.key];
        }
        const auto res = run_job(job, common.canonical);
        const int rc = emit(res.report, common.output);
        if (res.exit_code != ok)
            for (const auto& r : res.report.at("records"))
                if (r.at("verdict") == "error") std::cerr << "orbitlab: " << r.at("payload").at("message").get<std::string>() << "\n";
        return rc ? rc : res.exit_code;
    }
    return usage;
}
