// qttc: check, compile, run and verify .qtt modules.

#include <iostream>
#include <map>

#include "CLI11.hpp"
#include "qtt/driver.hpp"

using namespace qtt;

int main(int argc, char** argv) {
    CLI::App app{"qttc: resource-bounded quantitative type theory"};
    app.require_subcommand(1);

    driver::Options opts;
    std::string regime, sigma;
    std::uint64_t fuel = 0;
    const std::map<std::string, kernel::Regime> regimes{{"consfree", kernel::Regime::ConsFree},
                                                        {"lfpl", kernel::Regime::Lfpl}};
    const std::map<std::string, kernel::Fragment> sigmas{{"0", kernel::Fragment::Zero}, {"1", kernel::Fragment::One}};

    auto common = [&](CLI::App* sub) {
        sub->add_option("--regime", regime, "override the module's #regime pragma")
            ->check(CLI::IsMember({"consfree", "lfpl"}));
        sub->add_option("--sigma", sigma, "check every declaration at this fragment")
            ->check(CLI::IsMember({"0", "1"}));
        sub->add_option("--fuel", fuel, "machine step budget (default: bound plus slack)");
        sub->add_flag("--emit-machine", opts.emitMachine, "print the compiled machine code");
        sub->add_flag("--trace", opts.trace, "print every machine rule to standard error");
        sub->add_option("--jobs", opts.jobs, "worker threads for sweeps (default: all cores)");
    };

    std::string file, decl, input, family, json;
    std::vector<std::string> paths;
    std::uint64_t maxN = 20;

    auto* check = app.add_subcommand("check", "type and usage check a module");
    check->add_option("file", file)->required();
    common(check);

    auto* compile = app.add_subcommand("compile", "print the machine code and potential of a declaration");
    compile->add_option("file", file)->required();
    compile->add_option("decl", decl)->required();
    common(compile);

    auto* run = app.add_subcommand("run", "run a declaration on one input");
    run->add_option("file", file)->required();
    run->add_option("decl", decl)->required();
    run->add_option("--input", input, "input term (a numeral for Nat inputs)");
    common(run);

    auto* bound = app.add_subcommand("bound", "print the derived step bound");
    bound->add_option("file", file)->required();
    bound->add_option("decl", decl)->required();
    bound->add_option("--json", json, "write the report as JSON (- for standard output)");
    common(bound);

    auto* verify = app.add_subcommand("verify", "sweep inputs 0..N against the bound");
    verify->add_option("file", file)->required();
    verify->add_option("decl", decl)->required();
    verify->add_option("--max-n", maxN, "largest input parameter");
    verify->add_option("--json", json, "write the report as JSON (- for standard output)");
    verify->add_option("--input-family", family, "sigma=0 generator Nat -> input used for non-Nat inputs");
    common(verify);

    auto* corpus = app.add_subcommand("corpus", "check and sweep every .qtt file under the given paths");
    corpus->add_option("paths", paths)->required();
    corpus->add_option("--max-n", maxN, "largest input parameter");
    corpus->add_option("--json", json, "write all reports as a JSON array (- for standard output)");
    common(corpus);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : driver::kInternalError;
    }

    if (!regime.empty()) opts.regime = regimes.at(regime);
    if (!sigma.empty()) opts.sigma = sigmas.at(sigma);
    if (fuel) opts.fuel = fuel;
    auto optJson = json.empty() ? std::nullopt : std::optional<std::string>(json);
    auto optFamily = family.empty() ? std::nullopt : std::optional<std::string>(family);

    if (*check) return driver::cmd_check(file, opts, std::cout, std::cerr);
    if (*compile) return driver::cmd_compile(file, decl, opts, std::cout, std::cerr);
    if (*run) return driver::cmd_run(file, decl, input, opts, std::cout, std::cerr);
    if (*bound) return driver::cmd_bound(file, decl, optJson, opts, std::cout, std::cerr);
    if (*verify) return driver::cmd_verify(file, decl, maxN, optJson, optFamily, opts, std::cout, std::cerr);
    return driver::cmd_corpus(paths, maxN, optJson, opts, std::cout, std::cerr);
}
