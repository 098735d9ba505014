#include "symcone/cli.hpp"

#include "symcone/errors.hpp"
#include "symcone/recovery.hpp"
#include "symcone/sampler.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>

namespace symcone {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

bool starts_with(const std::string& s, const std::string& prefix) {
    return s.rfind(prefix, 0) == 0;
}

double parse_real(const std::string& raw) {
    const std::string s = trim(raw);
    double v = 0.0;
    const char* first = s.data();
    if (!s.empty() && s[0] == '+') ++first;
    const auto res = std::from_chars(first, s.data() + s.size(), v);
    if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size() || !std::isfinite(v)) {
        throw ParseError("not a real number: '" + raw + "'");
    }
    return v;
}

long long parse_integer(const std::string& raw) {
    const std::string s = trim(raw);
    long long v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size()) {
        throw ParseError("not an integer: '" + raw + "'");
    }
    return v;
}

// Splits on `sep` outside square brackets.
std::vector<std::string> split_top_level(const std::string& s, char sep) {
    std::vector<std::string> out;
    int depth = 0;
    std::string cur;
    for (char c : s) {
        if (c == '[') ++depth;
        if (c == ']') --depth;
        if (c == sep && depth == 0) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

Eigen::VectorXd to_vector(const std::vector<double>& v) {
    return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

Constants to_constants(const std::vector<double>& v, const char* what) {
    if (v.size() != 4) throw ParseError(std::string(what) + ": expected four constants");
    return {v[0], v[1], v[2], v[3]};
}

double relative(double num, double den) { return num / std::max(den, 1e-300); }

double param_error(const LogCauchyFn& expected, const LogCauchyFn& got) {
    if (expected.algebra().is_sym_real()) {
        return (expected.power_vector() - got.power_vector()).cwiseAbs().maxCoeff();
    }
    const double r = expected.algebra().rank();
    return std::abs(expected.scalar_slope() - got.scalar_slope()) / r;
}

nlohmann::json coords_json(const Element& x) {
    return std::vector<double>(x.coords().data(), x.coords().data() + x.coords().size());
}

} // namespace

std::optional<Command> parse_command(const std::string& s) {
    if (s == "verify-core") return Command::VerifyCore;
    if (s == "verify-wlog") return Command::VerifyWlog;
    if (s == "verify-fei") return Command::VerifyFei;
    if (s == "recover") return Command::Recover;
    if (s == "sample") return Command::Sample;
    return std::nullopt;
}

const char* to_string(Command c) noexcept {
    switch (c) {
    case Command::VerifyCore: return "verify-core";
    case Command::VerifyWlog: return "verify-wlog";
    case Command::VerifyFei: return "verify-fei";
    case Command::Recover: return "recover";
    case Command::Sample: return "sample";
    }
    return "?";
}

std::vector<double> parse_reals(const std::string& csv) {
    std::vector<double> out;
    for (const auto& part : split_top_level(csv, ',')) out.push_back(parse_real(part));
    return out;
}

AlgebraDescriptor parse_algebra(const std::string& spec) {
    try {
        if (starts_with(spec, "sym:")) {
            return AlgebraDescriptor::sym_real(static_cast<int>(parse_integer(spec.substr(4))));
        }
        if (starts_with(spec, "lorentz:")) {
            return AlgebraDescriptor::lorentz(static_cast<int>(parse_integer(spec.substr(8))));
        }
    } catch (const ConstructionError& err) {
        throw ParseError(err.what());
    }
    throw ParseError("unknown algebra spec '" + spec + "' (expected sym:<r> or lorentz:<n>)");
}

MultAlgorithm parse_mult_algorithm(const std::string& spec, const AlgebraDescriptor& algebra) {
    if (spec == "w1") return MultAlgorithm::sqrt_p(algebra);
    if (spec == "w2") return MultAlgorithm::cholesky(algebra);
    if (spec == "patchwork") return MultAlgorithm::patchwork(algebra);
    if (starts_with(spec, "alpha:")) {
        return MultAlgorithm::alpha_interp(algebra, parse_real(spec.substr(6)));
    }
    if (starts_with(spec, "ktwist:")) {
        const std::string rest = spec.substr(7);
        const auto colon = rest.find(':');
        const std::string seed_part = rest.substr(0, colon);
        const std::string base_part = colon == std::string::npos ? "w1" : rest.substr(colon + 1);
        const long long seed = parse_integer(seed_part);
        if (seed < 0) throw ParseError("ktwist seed must be non-negative");
        const MultAlgorithm base = parse_mult_algorithm(base_part, algebra);
        Sampler s(SamplerConfig{algebra, static_cast<std::uint64_t>(seed), 0.05, 1});
        return MultAlgorithm::k_twist(base, s.random_k());
    }
    throw ParseError("unknown multiplication algorithm '" + spec + "'");
}

LogCauchyFn parse_log_fn(const std::string& raw, const AlgebraDescriptor& algebra) {
    const std::string spec = trim(raw);
    if (starts_with(spec, "detlog:")) {
        return LogCauchyFn::det_log(algebra, parse_real(spec.substr(7)));
    }
    if (starts_with(spec, "powerlog:")) {
        return LogCauchyFn::power_log(algebra, to_vector(parse_reals(spec.substr(9))));
    }
    if (starts_with(spec, "sum:[") && spec.back() == ']') {
        const std::string body = spec.substr(5, spec.size() - 6);
        std::vector<LogCauchyFn> parts;
        if (!trim(body).empty()) {
            for (const auto& p : split_top_level(body, ';')) parts.push_back(parse_log_fn(p, algebra));
        }
        return LogCauchyFn::sum(algebra, std::move(parts));
    }
    throw ParseError("unknown function spec '" + raw + "'");
}

FamilySpec parse_family(const std::string& spec) {
    FamilySpec fam;
    if (starts_with(spec, "cor1:") || starts_with(spec, "maksa:")) {
        fam.kind = starts_with(spec, "cor1:") ? FamilyKind::Cor1 : FamilyKind::Maksa;
        fam.kappa = parse_reals(spec.substr(spec.find(':') + 1));
        if (fam.kappa.size() != 3) throw ParseError("family '" + spec + "' needs three kappas");
        return fam;
    }
    if (starts_with(spec, "cor3:")) {
        fam.kind = FamilyKind::Cor3;
        for (const auto& part : split_top_level(spec.substr(5), ';')) fam.s.push_back(parse_reals(part));
        if (fam.s.size() != 3) throw ParseError("cor3 family needs three power vectors s1;s2;s3");
        return fam;
    }
    if (starts_with(spec, "mixed:")) {
        fam.kind = FamilyKind::Mixed;
        const auto parts = split_top_level(spec.substr(6), ';');
        if (parts.size() != 2) throw ParseError("mixed family is mixed:<k1,k2;s3>");
        fam.kappa = parse_reals(parts[0]);
        if (fam.kappa.size() != 2) throw ParseError("mixed family needs two kappas");
        fam.s.push_back(parse_reals(parts[1]));
        return fam;
    }
    if (starts_with(spec, "theorem:")) {
        fam.kind = FamilyKind::Theorem;
        const std::string body = spec.substr(8);
        const auto p2 = body.find(",h2=");
        const auto p3 = body.find(",h3=");
        const auto pc = body.find(",C=");
        if (!starts_with(body, "h1=") || p2 == std::string::npos || p3 == std::string::npos ||
            pc == std::string::npos || !(p2 < p3 && p3 < pc)) {
            throw ParseError("theorem family is theorem:h1=<fn>,h2=<fn>,h3=<fn>,C=<c1,c2,c3,c4>");
        }
        fam.h1 = body.substr(3, p2 - 3);
        fam.h2 = body.substr(p2 + 4, p3 - p2 - 4);
        fam.h3 = body.substr(p3 + 4, pc - p3 - 4);
        fam.C = to_constants(parse_reals(body.substr(pc + 3)), "theorem family");
        return fam;
    }
    throw ParseError("unknown family spec '" + spec + "'");
}

SolutionQuadruple build_family(const FamilySpec& fam, const AlgebraDescriptor& algebra,
                               const std::string& walg, const std::string& wtalg,
                               const Constants& constants) {
    auto pick = [&](const std::string& given, const char* fallback) {
        return parse_mult_algorithm(given.empty() ? fallback : given, algebra);
    };
    switch (fam.kind) {
    case FamilyKind::Theorem:
        return build_quadruple(parse_log_fn(fam.h1, algebra), parse_log_fn(fam.h2, algebra),
                               parse_log_fn(fam.h3, algebra), fam.C.value_or(constants),
                               pick(walg, "w1"), pick(wtalg, "w1"));
    case FamilyKind::Cor1:
        return build_quadruple(LogCauchyFn::det_log(algebra, fam.kappa[0]),
                               LogCauchyFn::det_log(algebra, fam.kappa[1]),
                               LogCauchyFn::det_log(algebra, fam.kappa[2]), constants,
                               pick(walg, "w1"), pick(wtalg, "w1"), Provenance::SynthesizedCor1);
    case FamilyKind::Cor3:
        return build_quadruple(LogCauchyFn::power_log(algebra, to_vector(fam.s[0])),
                               LogCauchyFn::power_log(algebra, to_vector(fam.s[1])),
                               LogCauchyFn::power_log(algebra, to_vector(fam.s[2])), constants,
                               pick(walg, "w2"), pick(wtalg, "w2"), Provenance::SynthesizedCor3);
    case FamilyKind::Mixed:
        return build_quadruple(LogCauchyFn::det_log(algebra, fam.kappa[0]),
                               LogCauchyFn::det_log(algebra, fam.kappa[1]),
                               LogCauchyFn::power_log(algebra, to_vector(fam.s[0])), constants,
                               pick(walg, "w2"), pick(wtalg, "w1"), Provenance::SynthesizedMixed);
    case FamilyKind::Maksa:
        break;
    }
    throw UnsupportedError("maksa families live on (0, 1), not on a cone");
}

CheckResult summarize_check(std::string name, std::vector<double> residuals, double tol) {
    CheckResult c;
    c.name = std::move(name);
    double total = 0.0;
    bool finite = true;
    for (double r : residuals) {
        const double a = std::abs(r);
        finite = finite && std::isfinite(a);
        c.max_abs = std::max(c.max_abs, a);
        total += a;
    }
    c.mean_abs = residuals.empty() ? 0.0 : total / static_cast<double>(residuals.size());
    c.pass = finite && !residuals.empty() && c.max_abs <= tol;
    c.residuals = std::move(residuals);
    return c;
}

namespace {

struct RunContext {
    const RunConfig& cfg;
    AlgebraDescriptor algebra;
    SamplerConfig sampler_cfg;
    std::vector<CheckResult> checks;
    nlohmann::json extra = nlohmann::json::object();
};

void run_verify_core(RunContext& ctx) {
    const RunConfig& cfg = ctx.cfg;
    const AlgebraDescriptor& alg = ctx.algebra;
    const MultAlgorithm w = parse_mult_algorithm(cfg.walg.empty() ? "w1" : cfg.walg, alg);
    const Element e = Element::identity(alg);
    Sampler s(ctx.sampler_cfg);

    std::vector<double> comm, jordan, neutral, assoc, qinv, spectral, detw, axiom;
    for (int i = 0; i < cfg.samples; ++i) {
        const Element x = s.sample_general();
        const Element y = s.sample_general();
        const Element z = s.sample_general();
        const double nx = norm(x), ny = norm(y), nz = norm(z);
        const Element x2 = square(x);
        comm.push_back(relative(norm(jordan_product(x, y) - jordan_product(y, x)), nx * ny));
        jordan.push_back(relative(norm(jordan_product(x, jordan_product(x2, y)) -
                                       jordan_product(x2, jordan_product(x, y))),
                                  nx * nx * nx * ny));
        neutral.push_back(relative(norm(jordan_product(x, e) - x), nx));
        assoc.push_back(relative(std::abs(inner(x, jordan_product(y, z)) -
                                          inner(jordan_product(x, y), z)),
                                 nx * ny * nz));
        const SpectralDecomposition sd = spectral_decompose(x);
        Element rebuilt = Element::zero(alg);
        for (std::size_t k = 0; k < sd.idempotents.size(); ++k) {
            rebuilt += sd.eigenvalues(static_cast<Eigen::Index>(k)) * sd.idempotents[k];
        }
        spectral.push_back(relative(norm(rebuilt - x), nx));

        const Element v = s.sample_V(0.2, 3.0);
        const Element u = s.sample_V(0.2, 3.0);
        const Eigen::MatrixXd pinv = quad_rep(v).inverse().matrix();
        const Eigen::MatrixXd pv = quad_rep(inverse(v)).matrix();
        qinv.push_back(relative((pinv - pv).norm(), pv.norm()));
        const double expected = determinant(u) * determinant(v);
        detw.push_back(relative(std::abs(determinant(w.apply(u, v)) - expected), std::abs(expected)));
        axiom.push_back(relative(norm(w.apply(v, e) - v), norm(v)));
    }
    ctx.checks.push_back(summarize_check("jordan_commutative", std::move(comm), cfg.tol));
    ctx.checks.push_back(summarize_check("jordan_identity", std::move(jordan), cfg.tol));
    ctx.checks.push_back(summarize_check("neutral_element", std::move(neutral), cfg.tol));
    ctx.checks.push_back(summarize_check("inner_product_associative", std::move(assoc), cfg.tol));
    ctx.checks.push_back(summarize_check("spectral_roundtrip", std::move(spectral), cfg.tol));
    ctx.checks.push_back(summarize_check("quad_rep_inverse", std::move(qinv), cfg.tol));
    ctx.checks.push_back(summarize_check("det_multiplicative[" + w.name() + "]", std::move(detw), cfg.tol));
    ctx.checks.push_back(summarize_check("mult_axiom[" + w.name() + "]", std::move(axiom), cfg.tol));
}

void run_verify_wlog(RunContext& ctx) {
    const RunConfig& cfg = ctx.cfg;
    if (cfg.fn.empty()) throw ParseError("verify-wlog needs --fn");
    const LogCauchyFn fn = parse_log_fn(cfg.fn, ctx.algebra);
    const MultAlgorithm w = parse_mult_algorithm(cfg.walg.empty() ? "w1" : cfg.walg, ctx.algebra);
    Sampler s(ctx.sampler_cfg);
    std::vector<double> res;
    double worst = -1.0;
    nlohmann::json witness;
    for (int i = 0; i < cfg.samples; ++i) {
        const Element x = s.sample_V(0.2, 3.0);
        const Element y = s.sample_V(0.2, 3.0);
        const double r = wlog_residual(fn, w, x, y);
        res.push_back(r);
        if (std::abs(r) > worst) {
            worst = std::abs(r);
            witness = {{"x", coords_json(x)}, {"y", coords_json(y)}, {"residual", r}};
        }
    }
    CheckResult c = summarize_check("wlog_residual[" + w.name() + "]", std::move(res), cfg.tol);
    if (!c.pass) ctx.extra["counterexample"] = witness;
    ctx.checks.push_back(std::move(c));
}

void run_verify_fei(RunContext& ctx) {
    const RunConfig& cfg = ctx.cfg;
    if (cfg.family.empty()) throw ParseError("verify-fei needs --family");
    const FamilySpec fam = parse_family(cfg.family);
    const Constants constants = to_constants(parse_reals(cfg.constants), "--constants");
    if (fam.kind == FamilyKind::Maksa) {
        const ScalarQuadruple q =
            maksa_quadruple({fam.kappa[0], fam.kappa[1], fam.kappa[2]}, constants);
        // per-axis count giving at least cfg.samples grid points
        int per_axis = 1;
        while (per_axis * (per_axis + 1) / 2 < cfg.samples) ++per_axis;
        std::vector<double> res;
        for (const auto& [a, b] : scalar_grid(per_axis, std::min(cfg.margin, 0.3))) {
            res.push_back(maksa_residual(q, a, b));
        }
        ctx.checks.push_back(summarize_check("maksa_residual", std::move(res), cfg.tol));
        return;
    }
    const SolutionQuadruple q = build_family(fam, ctx.algebra, cfg.walg, cfg.wtalg, constants);
    ResidualReport rep = fei_residual_sweep(q, ctx.sampler_cfg);
    ctx.checks.push_back(summarize_check("fei_residual", std::move(rep.residuals), cfg.tol));
    ctx.extra["walg"] = q.w.name();
    ctx.extra["wtalg"] = q.wt.name();
    if (rep.worst_pair) {
        ctx.extra["worst_pair"] = {{"x", coords_json(rep.worst_pair->first)},
                                   {"y", coords_json(rep.worst_pair->second)}};
    }
}

void run_recover(RunContext& ctx) {
    const RunConfig& cfg = ctx.cfg;
    if (cfg.family.empty()) throw ParseError("recover needs --family");
    const FamilySpec fam = parse_family(cfg.family);
    if (fam.kind == FamilyKind::Maksa) throw ParseError("recover works on cone families");
    const Constants constants = to_constants(parse_reals(cfg.constants), "--constants");
    const SolutionQuadruple q = build_family(fam, ctx.algebra, cfg.walg, cfg.wtalg, constants);
    const RecoveredComponents rec = recover_components(opaque(q), ctx.sampler_cfg);
    ctx.extra["recovery"] = to_json(rec);

    const QuadrupleComponents& truth = *q.components;
    std::vector<double> params;
    if (rec.ok) {
        params = {param_error(truth.h1, rec.h1_fit), param_error(truth.h2, rec.h2_fit),
                  param_error(truth.h3, rec.h3_fit)};
        for (int i = 0; i < 4; ++i) {
            params.push_back(std::abs(truth.C[static_cast<std::size_t>(i)] -
                                      rec.C[static_cast<std::size_t>(i)]));
        }
    }
    ctx.checks.push_back(summarize_check("recovered_parameters", std::move(params), kReconstructionTol));
    ctx.checks.push_back(summarize_check(
        "reconstruction", rec.ok ? std::vector<double>{rec.reconstruction_residual} : std::vector<double>{},
        kReconstructionTol));
    ctx.checks.push_back(summarize_check("constant_sum", {rec.raw_constant_sum_defect}, kConstantSumTol));
}

void run_sample(RunContext& ctx) {
    Sampler s(ctx.sampler_cfg);
    nlohmann::json pairs = nlohmann::json::array();
    std::vector<double> misses;
    for (int i = 0; i < ctx.cfg.samples; ++i) {
        const auto [x, y] = s.sample_D0_pair();
        misses.push_back(in_D0(x, y) ? 0.0 : 1.0);
        pairs.push_back({{"x", coords_json(x)}, {"y", coords_json(y)}});
    }
    ctx.checks.push_back(summarize_check("D0_membership", std::move(misses), 0.0));
    ctx.extra["samples"] = std::move(pairs);
}

} // namespace

nlohmann::json build_report(const RunConfig& cfg, int& exit_code,
                            std::vector<CheckResult>* checks_out) {
    nlohmann::json config = {
        {"command", to_string(cfg.command)}, {"algebra", cfg.algebra}, {"walg", cfg.walg},
        {"wtalg", cfg.wtalg},                {"family", cfg.family},   {"fn", cfg.fn},
        {"constants", cfg.constants},        {"seed", cfg.seed},       {"samples", cfg.samples},
        {"margin", cfg.margin},              {"tol", cfg.tol},
    };
    if (cfg.samples < 1) throw ParseError("--samples must be >= 1");
    if (!(cfg.tol > 0.0)) throw ParseError("--tol must be > 0");
    if (!(cfg.margin > 0.0 && cfg.margin < 0.5)) throw ParseError("--margin must lie in (0, 1/2)");

    RunContext ctx{cfg, parse_algebra(cfg.algebra),
                   SamplerConfig{parse_algebra(cfg.algebra), cfg.seed, cfg.margin, cfg.samples}, {}};
    switch (cfg.command) {
    case Command::VerifyCore: run_verify_core(ctx); break;
    case Command::VerifyWlog: run_verify_wlog(ctx); break;
    case Command::VerifyFei: run_verify_fei(ctx); break;
    case Command::Recover: run_recover(ctx); break;
    case Command::Sample: run_sample(ctx); break;
    }

    nlohmann::json checks = nlohmann::json::array();
    bool all = true;
    for (const auto& c : ctx.checks) {
        checks.push_back({{"name", c.name}, {"max_abs", c.max_abs}, {"mean_abs", c.mean_abs}, {"pass", c.pass}});
        all = all && c.pass;
    }
    exit_code = all ? 0 : 1;

    nlohmann::json report = {
        {"schema_version", 1},
        {"config", config},
        {"checks", checks},
        {"seed", cfg.seed},
    };
    for (auto it = ctx.extra.begin(); it != ctx.extra.end(); ++it) report[it.key()] = it.value();
    if (checks_out) *checks_out = std::move(ctx.checks);
    return report;
}

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    int code = 0;
    nlohmann::json report;
    std::vector<CheckResult> checks;
    try {
        report = build_report(cfg, code, &checks);
    } catch (const ParseError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const ConstructionError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const UnsupportedError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }

    const std::string text = report.dump(2) + "\n";
    if (cfg.output.empty()) {
        out << text;
    } else {
        std::ofstream f(cfg.output, std::ios::binary);
        if (!f) {
            err << "error: cannot write " << cfg.output << '\n';
            return 2;
        }
        f << text;
    }
    if (!cfg.csv.empty()) {
        std::ofstream f(cfg.csv, std::ios::binary);
        if (!f) {
            err << "error: cannot write " << cfg.csv << '\n';
            return 2;
        }
        f << "check,sample_index,residual\n";
        for (const auto& c : checks) {
            for (std::size_t i = 0; i < c.residuals.size(); ++i) {
                f << c.name << ',' << i << ',' << nlohmann::json(c.residuals[i]).dump() << '\n';
            }
        }
    }
    for (const auto& c : checks) {
        if (!c.pass) err << "FAIL " << c.name << ": max_abs = " << c.max_abs << '\n';
    }
    return code;
}

} // namespace symcone
