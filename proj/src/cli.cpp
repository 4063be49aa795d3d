#include "routeseal/cli.hpp"

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "routeseal/bench.hpp"
#include "routeseal/config.hpp"
#include "routeseal/cryptobox.hpp"
#include "routeseal/depgraph.hpp"
#include "routeseal/errors.hpp"
#include "routeseal/interp.hpp"
#include "routeseal/manifest.hpp"
#include "routeseal/parser.hpp"
#include "routeseal/protector.hpp"
#include "routeseal/rewriter.hpp"
#include "routeseal/router.hpp"

namespace routeseal {

namespace {

namespace fs = std::filesystem;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitUsage = 2;
constexpr int kExitTamper = 13;

struct GlobalFlags {
    std::optional<std::uint64_t> seed;
    bool quiet = false;
};

std::unique_ptr<cryptobox::RandomSource> make_rng(const GlobalFlags& flags) {
    if (flags.seed) return std::make_unique<cryptobox::SeededRandom>(*flags.seed);
    return std::make_unique<cryptobox::SystemRandom>();
}

minilang::Program parse_project(const fs::path& manifest_path, manifest::ProjectManifest& m) {
    m = manifest::load_manifest(manifest_path);
    auto sources = manifest::load_sources(m, manifest_path.parent_path());
    return minilang::parse(std::move(sources), m.entry_file, m.entry_fn);
}

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + path.string());
    out << text;
    if (!out) throw Error("short write to " + path.string());
}

int cmd_protect(const fs::path& manifest_path, const fs::path& out_dir, bool dry_run,
                const GlobalFlags& flags) {
    manifest::ProjectManifest m;
    auto program = parse_project(manifest_path, m);
    auto rng = make_rng(flags);
    auto project = protector::protect(program, manifest::manifest_selection(m), *rng);

    if (dry_run) {
        std::cout << "descriptors: " << project.sealed_count << "\n";
        return kExitOk;
    }

    fs::create_directories(out_dir);
    for (const auto& file : project.files) {
        write_file(out_dir / (file.file_id + ".ml"), file.text);
    }
    std::string config_text = config::emit_config(project.config);
    write_file(out_dir / "router.cfg", config_text);

    if (!flags.quiet) std::cout << config_text;
    return kExitOk;
}

int cmd_run(const fs::path& dir) {
    std::ifstream cfg_in(dir / "router.cfg", std::ios::binary);
    if (!cfg_in) throw ConfigError("cannot open " + (dir / "router.cfg").string());
    std::ostringstream cfg_buf;
    cfg_buf << cfg_in.rdbuf();
    auto cfg = config::parse_config(cfg_buf.str());

    std::vector<canon::SourceFile> deployed;
    for (const auto& [file_id, _] : cfg.file_hashes) {
        fs::path p = dir / (file_id + ".ml");
        std::ifstream in(p, std::ios::binary);
        if (!in) continue;  // init reports the missing file as tampering
        std::ostringstream buf;
        buf << in.rdbuf();
        deployed.push_back(canon::SourceFile{file_id, file_id + ".ml", buf.str()});
    }

    // Integrity verification runs before the sources are even parsed, so a
    // mutation that breaks the grammar still terminates as tampering.
    auto outcome = router::RouterState::init(std::move(cfg), deployed);
    if (outcome.tamper) {
        auto directive = router::respond(router::ResponseStrategy::Terminate, *outcome.tamper);
        std::cerr << directive.message << "\n";
        return kExitTamper;
    }

    auto program = minilang::parse(std::move(deployed), outcome.state->config().entry_file,
                                   outcome.state->config().entry_fn);
    auto report = minilang::run(program, outcome.state.get());

    switch (report.status) {
        case minilang::ExitStatus::Normal:
            for (const auto& line : report.output) std::cout << line << "\n";
            return kExitOk;
        case minilang::ExitStatus::TamperDetected:
            // The tamper message is the final output line; it belongs on
            // standard error.
            for (std::size_t i = 0; i + 1 < report.output.size(); ++i)
                std::cout << report.output[i] << "\n";
            std::cerr << report.tamper_message << "\n";
            return kExitTamper;
        case minilang::ExitStatus::RuntimeError:
            for (const auto& line : report.output) std::cout << line << "\n";
            std::cerr << "runtime error: " << report.error << "\n";
            return kExitError;
    }
    return kExitError;
}

int cmd_inspect_graph(const fs::path& manifest_path, bool dot) {
    manifest::ProjectManifest m;
    auto program = parse_project(manifest_path, m);
    auto dag = depgraph::break_cycles(depgraph::build_graph(program));
    std::cout << (dot ? depgraph::format_dot(dag) : depgraph::format_adjacency(dag));
    return kExitOk;
}

int cmd_bench(std::uint64_t calls) {
    auto report = bench::run_bench(calls);
    std::cout << bench::format(report);
    return kExitOk;
}

int cmd_lint(const fs::path& manifest_path) {
    manifest::ProjectManifest m;
    auto program = parse_project(manifest_path, m);
    auto warnings = rewriter::lint_return_types(program, manifest::manifest_selection(m));
    for (const auto& w : warnings) std::cerr << w.format() << "\n";
    return kExitOk;
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
    CLI::App app{"Cross-file call routing and integrity protection for minilang projects"};
    app.require_subcommand(1);

    GlobalFlags flags;
    app.add_option("--seed", flags.seed, "Seed for deterministic randomness (testing)");
    app.add_flag("--quiet", flags.quiet, "Suppress informational output");

    std::string manifest_arg;
    std::string out_arg = "protected";
    bool dry_run = false;
    auto* protect =
        app.add_subcommand("protect", "Rewrite cross-file calls and seal their descriptors");
    protect->add_option("manifest", manifest_arg, "Project manifest path")->required();
    protect->add_option("-o,--out", out_arg, "Output directory");
    protect->add_flag("--dry-run", dry_run, "Validate and report without writing files");

    std::string run_dir;
    auto* run = app.add_subcommand("run", "Run a protected project directory");
    run->add_option("dir", run_dir, "Directory with router.cfg and sources")->required();

    std::string graph_manifest;
    bool dot = false;
    auto* inspect = app.add_subcommand("inspect-graph", "Print the file dependency graph");
    inspect->add_option("manifest", graph_manifest, "Project manifest path")->required();
    inspect->add_flag("--dot", dot, "Emit Graphviz digraph text");

    std::uint64_t calls = 1'000'000;
    auto* bench_cmd = app.add_subcommand("bench", "Time direct vs. routed dispatch");
    bench_cmd->add_option("--calls", calls, "Cross-file calls per timed pass");

    std::string lint_manifest;
    auto* lint = app.add_subcommand("lint", "Warn about callees with unique return types");
    lint->add_option("manifest", lint_manifest, "Project manifest path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (app.got_subcommand(protect)) return cmd_protect(manifest_arg, out_arg, dry_run, flags);
        if (app.got_subcommand(run)) return cmd_run(run_dir);
        if (app.got_subcommand(inspect)) return cmd_inspect_graph(graph_manifest, dot);
        if (app.got_subcommand(bench_cmd)) return cmd_bench(calls);
        if (app.got_subcommand(lint)) return cmd_lint(lint_manifest);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
    return kExitUsage;
}

}  // namespace routeseal
