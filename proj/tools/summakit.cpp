// summakit: run condition checks, transforms and proof-harness verification
// from a JSON experiment config.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "summakit/cli/commands.hpp"

namespace sk = summakit::cli;

int main(int argc, char** argv) {
    CLI::App app{"Absolute matrix summability toolkit"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(summakit::version));

    std::string config_path;
    std::string out;
    std::string format;
    bool strict = false;
    std::optional<std::size_t> tail_cutoff;
    std::optional<std::uint64_t> seed;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "experiment config (JSON)")->required();
        sub->add_option("--out", out, "output path (a directory for check)");
        sub->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
        sub->add_flag("--strict-paper-mode", strict, "evaluate the verbatim forms of ambiguous formulas");
        sub->add_option("--tail-cutoff", tail_cutoff, "cutoff for infinite tail sums");
        sub->add_option("--seed", seed, "seed for randomized verify series");
    };
    auto* check = app.add_subcommand("check", "evaluate factor conditions and write one report per condition");
    auto* transform = app.add_subcommand("transform", "tabulate A_n(s), its differences and the |A|_k profile");
    auto* verify = app.add_subcommand("verify", "replay the proof identities; exit 0 iff all are within tolerance");
    for (auto* sub : {check, transform, verify}) add_common(sub);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : sk::exit_config;
    }

    const auto log = sk::Logger::from_env();
    return sk::guarded(log, [&] {
        const auto cfg = sk::load_config(config_path);
        sk::RunOptions opts;
        if (!out.empty()) opts.out = out;
        if (!format.empty()) opts.format = sk::parse_format(format, "--format");
        opts.strict = strict;
        opts.tail_cutoff = tail_cutoff;
        opts.seed = seed;
        if (check->parsed()) return sk::cmd_check(cfg, opts, log);
        if (transform->parsed()) return sk::cmd_transform(cfg, opts, log);
        return sk::cmd_verify(cfg, opts, log);
    });
}
