// Command-line front end: runs the simulation and verification experiments
// described by a flat JSON config. Exit codes: 0 success, 2 config error,
// 3 numerical abort.

#include <cstdio>
#include <string>

#include "CLI11.hpp"
#include "iwsk/experiments.hpp"

namespace {

int run(const std::string& name, const iwsk::RunContext& ctx) {
    using iwsk::RunContext;
    nlohmann::json summary;
    if (name == "simulate")
        summary = iwsk::cmd_simulate(ctx);
    else if (name == "effective")
        summary = iwsk::cmd_effective(ctx);
    else if (name == "converge")
        summary = iwsk::cmd_converge(ctx);
    else if (name == "identity")
        summary = iwsk::cmd_identity(ctx);
    else if (name == "polarized")
        summary = iwsk::cmd_polarized(ctx);
    else if (name == "normequiv")
        summary = iwsk::cmd_normequiv(ctx);
    else
        throw iwsk::ConfigError("unknown subcommand " + name);
    std::printf("%s\n", summary.dump(2).c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spectral solver and experiment harness for the strongly "
                 "magnetized 2D NLS model and its averaged limit"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    bool snapshots = false;

    const char* names[] = {"simulate", "effective", "converge",
                           "identity", "polarized", "normequiv"};
    for (const char* name : names) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("--config", config_path, "JSON config path")->required();
        sub->add_option("--out", out_dir, "output directory");
        sub->add_option("--seed", seed, "ensemble seed");
        sub->add_flag("--snapshots", snapshots, "write binary field snapshots");
    }

    CLI11_PARSE(app, argc, argv);

    try {
        iwsk::RunContext ctx;
        ctx.cfg = iwsk::RunConfig::from_file(config_path);
        ctx.out_dir = out_dir;
        ctx.seed = seed;
        ctx.snapshots = snapshots;
        return run(app.get_subcommands().front()->get_name(), ctx);
    } catch (const iwsk::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const iwsk::NumericError& e) {
        std::fprintf(stderr, "numerical abort: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
