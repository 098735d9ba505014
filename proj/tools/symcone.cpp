#include "symcone/cli.hpp"

#include "CLI11.hpp"

#include <iostream>

int main(int argc, char** argv) {
    symcone::RunConfig cfg;
    std::string command;

    CLI::App app{"symcone: symmetric-cone functional equation checks"};
    app.add_option("command", command, "verify-core | verify-wlog | verify-fei | recover | sample")
        ->required();
    app.add_option("--algebra", cfg.algebra, "sym:<r> or lorentz:<n>");
    app.add_option("--walg", cfg.walg, "w1 | w2 | ktwist:<seed>[:<base>] | alpha:<a> | patchwork");
    app.add_option("--wtalg", cfg.wtalg, "algorithm for w~ (same syntax as --walg)");
    app.add_option("--family", cfg.family, "solution family spec");
    app.add_option("--fn", cfg.fn, "detlog:<k> | powerlog:<s1,...> | sum:[<fn>;...]");
    app.add_option("--constants", cfg.constants, "C1,C2,C3,C4");
    app.add_option("--seed", cfg.seed);
    app.add_option("--samples", cfg.samples);
    app.add_option("--margin", cfg.margin);
    app.add_option("--tol", cfg.tol);
    app.add_option("--output,-o", cfg.output, "report path (stdout when omitted)");
    app.add_option("--csv", cfg.csv, "residual table path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    const auto cmd = symcone::parse_command(command);
    if (!cmd) {
        std::cerr << "error: unknown command '" << command << "'\n";
        return 2;
    }
    cfg.command = *cmd;
    return symcone::run(cfg, std::cout, std::cerr);
}
