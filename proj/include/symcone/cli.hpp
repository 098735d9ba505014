#pragma once

// Option-string parsers and the run() entry point behind the symcone CLI.

#include "symcone/algebra.hpp"
#include "symcone/fei.hpp"
#include "symcone/log_cauchy.hpp"
#include "symcone/mult_algorithm.hpp"

#include "json.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace symcone {

enum class Command { VerifyCore, VerifyWlog, VerifyFei, Recover, Sample };

std::optional<Command> parse_command(const std::string& s);
const char* to_string(Command c) noexcept;

struct RunConfig {
    Command command = Command::VerifyCore;
    std::string algebra = "sym:2";
    // Empty means the family's default algorithm.
    std::string walg;
    std::string wtalg;
    std::string family;
    std::string fn;
    std::string constants = "0,0,0,0";
    std::uint64_t seed = 42;
    int samples = 1000;
    double margin = 0.05;
    double tol = 1e-8;
    std::string output;   // empty: stdout
    std::string csv;      // empty: no CSV
};

// "sym:<r>" | "lorentz:<n>"
AlgebraDescriptor parse_algebra(const std::string& spec);
// "w1" | "w2" | "ktwist:<seed>[:<base>]" | "alpha:<a>" | "patchwork"
MultAlgorithm parse_mult_algorithm(const std::string& spec, const AlgebraDescriptor& algebra);
// "detlog:<k>" | "powerlog:<s1,...,sr>" | "sum:[<fn>;<fn>;...]"
LogCauchyFn parse_log_fn(const std::string& spec, const AlgebraDescriptor& algebra);
std::vector<double> parse_reals(const std::string& csv);

enum class FamilyKind { Theorem, Cor1, Cor3, Mixed, Maksa };

struct FamilySpec {
    FamilyKind kind = FamilyKind::Cor1;
    // Theorem
    std::string h1, h2, h3;
    std::optional<Constants> C;
    // Cor1 / Maksa: kappa; Mixed: kappa1, kappa2
    std::vector<double> kappa;
    // Cor3: s1, s2, s3; Mixed: s3
    std::vector<std::vector<double>> s;
};

// "theorem:h1=<fn>,h2=<fn>,h3=<fn>,C=<c1,c2,c3,c4>" | "cor1:<k1,k2,k3>" |
// "cor3:<s1;s2;s3>" | "mixed:<k1,k2;s3>" | "maksa:<k1,k2,k3>"
FamilySpec parse_family(const std::string& spec);

// Builds the quadruple for a non-Maksa family. Empty algorithm specs select
// the family default (w1 for theorem/cor1, w2 for cor3, w2/w1 for mixed).
SolutionQuadruple build_family(const FamilySpec& fam, const AlgebraDescriptor& algebra,
                               const std::string& walg, const std::string& wtalg,
                               const Constants& constants);

struct CheckResult {
    std::string name;
    double max_abs = 0.0;
    double mean_abs = 0.0;
    bool pass = false;
    std::vector<double> residuals;
};

CheckResult summarize_check(std::string name, std::vector<double> residuals, double tol);

// Exit code: 0 when every check passes, 1 when a check fails, 2 on invalid
// configuration. The JSON report goes to cfg.output (stdout when empty).
int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

// Report without writing it anywhere; exit code in `exit_code`.
nlohmann::json build_report(const RunConfig& cfg, int& exit_code,
                            std::vector<CheckResult>* checks_out = nullptr);

} // namespace symcone
