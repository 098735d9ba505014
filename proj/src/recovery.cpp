#include "symcone/recovery.hpp"

#include "symcone/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace symcone {

namespace {

using AlphaFn = std::function<double(double)>;

LimitEstimate limit_of(const AlphaFn& v, const RecoveryOptions& opts) {
    return limit_extrapolate(v, opts.alpha_grid, opts.correction_order);
}

std::string describe_failure(const char* stage, const char* what, double value, double tol) {
    std::ostringstream msg;
    msg << stage << ": " << what << " " << value << " exceeds " << tol;
    return msg.str();
}

// Tabulates x -> lim_{alpha->0} outer(alpha x) - inner(alpha e), normalized
// to vanish at x = e, and fits it.
ComponentFit recover_via_limit(const RealFn& outer, const RealFn& inner, bool triangular,
                               const std::vector<Element>& xs, const RecoveryOptions& opts,
                               const char* stage) {
    if (xs.empty()) throw ConstructionError(std::string(stage) + ": no samples");
    const Element e = Element::identity(xs.front().algebra());

    const LimitEstimate at_e =
        limit_of([&](double a) { return outer(a * e) - inner(a * e); }, opts);
    double worst = at_e.fit_residual;

    std::vector<std::pair<Element, double>> table;
    table.reserve(xs.size());
    for (const Element& x : xs) {
        const LimitEstimate est =
            limit_of([&](double a) { return outer(a * x) - inner(a * e); }, opts);
        worst = std::max(worst, est.fit_residual);
        table.emplace_back(x, est.constant_part - at_e.constant_part);
    }
    if (worst > opts.limit_tol) {
        throw NumericalError(describe_failure(stage, "limit fit residual", worst, opts.limit_tol));
    }
    ComponentFit fit = fit_log_cauchy(table, triangular);
    fit.limit_residual = worst;
    if (fit.fit_residual > opts.fit_tol) {
        throw NumericalError(
            describe_failure(stage, "component fit residual", fit.fit_residual, opts.fit_tol));
    }
    return fit;
}

double scalar_limit(const AlphaFn& v, const RecoveryOptions& opts, double& worst) {
    const LimitEstimate est = limit_of(v, opts);
    worst = std::max(worst, est.fit_residual);
    return est.constant_part;
}

} // namespace

ComponentFit fit_log_cauchy(const std::vector<std::pair<Element, double>>& table, bool triangular) {
    if (table.empty()) throw RankError("fit_log_cauchy: empty table");
    const AlgebraDescriptor& alg = table.front().first.algebra();
    if (triangular && alg.is_sym_real()) {
        const PowerFit pf = fit_power_vector(table, alg.rank());
        return ComponentFit{LogCauchyFn::power_log(alg, pf.s), pf.residual, 0.0};
    }
    const DetLogFit df = fit_det_log(table);
    return ComponentFit{LogCauchyFn::det_log(alg, df.kappa), df.residual, 0.0};
}

ComponentFit recover_h2(const SolutionQuadruple& q, const std::vector<Element>& x_samples,
                        const RecoveryOptions& opts) {
    return recover_via_limit(q.f, q.k, q.wt.triangular(), x_samples, opts, "h2");
}

ComponentFit recover_h3(const SolutionQuadruple& q, const std::vector<Element>& x_samples,
                        const RecoveryOptions& opts) {
    return recover_via_limit(q.h, q.g, q.w.triangular(), x_samples, opts, "h3");
}

RecoveredComponents recover_components(const SolutionQuadruple& q, const SamplerConfig& sweep,
                                       const RecoveryOptions& opts) {
    const AlgebraDescriptor& alg = q.algebra();
    const Element e = Element::identity(alg);
    RecoveredComponents out{.h1_fit = LogCauchyFn::zero(alg),
                            .h2_fit = LogCauchyFn::zero(alg),
                            .h3_fit = LogCauchyFn::zero(alg)};
    out.alpha_grid = opts.alpha_grid;

    auto fail = [&](std::string msg) {
        out.ok = false;
        out.failures.push_back(std::move(msg));
    };

    Sampler base(sweep);
    std::vector<Element> xs;
    std::vector<Element> zs;
    std::vector<Element> fresh;
    {
        Sampler s = base.derive(11);
        Sampler t = base.derive(12);
        Sampler u = base.derive(13);
        for (int i = 0; i < sweep.count; ++i) {
            xs.push_back(s.sample_D());
            zs.push_back(t.sample_D());
            fresh.push_back(u.sample_D());
        }
    }

    bool have_h2 = false;
    bool have_h3 = false;
    for (const char* stage : {"h2", "h3"}) {
        const bool is_h2 = stage[1] == '2';
        StageDiagnostics diag{stage};
        try {
            const ComponentFit fit = is_h2 ? recover_h2(q, xs, opts) : recover_h3(q, xs, opts);
            (is_h2 ? out.h2_fit : out.h3_fit) = fit.fn;
            (is_h2 ? have_h2 : have_h3) = true;
            diag.limit_residual = fit.limit_residual;
            diag.fit_residual = fit.fit_residual;
        } catch (const Error& err) {
            diag.ok = false;
            fail(err.what());
        }
        out.stages.push_back(diag);
    }

    // Constants from the scalar restriction once h2 and h3 are known.
    if (have_h2 && have_h3) {
        const LogCauchyFn& h2 = out.h2_fit;
        const LogCauchyFn& h3 = out.h3_fit;
        const LinearOperator we = q.w.w_e();
        StageDiagnostics diag{"constants"};
        try {
            double worst = 0.0;
            out.C[0] = scalar_limit(
                [&](double a) { return q.f(a * e) - h2(a * e) - h3((1 - a) * e); }, opts, worst);
            out.C[1] = scalar_limit(
                [&](double a) { return q.g(a * e) - h3(we(a * e)); }, opts, worst);
            out.C[2] = scalar_limit(
                [&](double a) { return q.h(a * e) - h2((1 - a) * e) - h3(a * e); }, opts, worst);
            out.C[3] = scalar_limit(
                [&](double a) { return q.k(a * e) - h2(q.wt.w_e()(a * e)); }, opts, worst);
            diag.limit_residual = worst;
            out.raw_constant_sum_defect = constant_sum_defect(out.C);
            if (worst > opts.limit_tol) {
                diag.ok = false;
                fail(describe_failure("constants", "limit fit residual", worst, opts.limit_tol));
            }
            if (out.raw_constant_sum_defect > kConstantSumTol) {
                diag.ok = false;
                fail(describe_failure("constants", "C1 + C2 - C3 - C4 =",
                                      out.raw_constant_sum_defect, kConstantSumTol));
            }
            const double d = (out.C[0] + out.C[1] - out.C[2] - out.C[3]) / 4.0;
            out.C[0] -= d;
            out.C[1] -= d;
            out.C[2] += d;
            out.C[3] += d;
        } catch (const Error& err) {
            diag.ok = false;
            fail(err.what());
        }
        out.stages.push_back(diag);

        // h1 from g(x) - h3(w_e x) - C2 = h1(e - w_e x), tabulated at x = w_e^{-1}(e - z).
        StageDiagnostics h1diag{"h1"};
        try {
            const LinearOperator we_inv = we.inverse();
            std::vector<std::pair<Element, double>> table;
            table.reserve(zs.size());
            for (const Element& z : zs) {
                const Element x = we_inv(e - z);
                table.emplace_back(z, q.g(x) - h3(we(x)) - out.C[1]);
            }
            const bool triangular = q.w.triangular() && q.wt.triangular();
            const ComponentFit fit = fit_log_cauchy(table, triangular);
            out.h1_fit = fit.fn;
            h1diag.fit_residual = fit.fit_residual;
            if (fit.fit_residual > opts.fit_tol) {
                h1diag.ok = false;
                fail(describe_failure("h1", "component fit residual", fit.fit_residual,
                                      opts.fit_tol));
            }
        } catch (const Error& err) {
            h1diag.ok = false;
            fail(err.what());
        }
        out.stages.push_back(h1diag);
    } else {
        fail("constants and h1 skipped: h2 or h3 unavailable");
    }

    // Rebuild and compare on fresh samples.
    if (out.ok) {
        try {
            const SolutionQuadruple rebuilt =
                build_quadruple(out.h1_fit, out.h2_fit, out.h3_fit, out.C, q.w, q.wt);
            double worst = 0.0;
            for (const Element& x : fresh) {
                worst = std::max({worst, std::abs(q.f(x) - rebuilt.f(x)),
                                  std::abs(q.g(x) - rebuilt.g(x)), std::abs(q.h(x) - rebuilt.h(x)),
                                  std::abs(q.k(x) - rebuilt.k(x))});
            }
            out.reconstruction_residual = worst;
            if (worst > kReconstructionTol) {
                fail(describe_failure("reconstruction", "residual", worst, kReconstructionTol));
            }
        } catch (const Error& err) {
            fail(std::string("reconstruction: ") + err.what());
        }

        std::vector<double> alphas;
        for (int i = 1; i <= 19; ++i) alphas.push_back(0.05 * i);
        try {
            const ScalarFit sf = fit_scalar_restriction(scalar_restriction(q), alphas);
            out.scalar_cross_check = std::max({std::abs(sf.kappa[0] - out.h1_fit.scalar_slope()),
                                               std::abs(sf.kappa[1] - out.h2_fit.scalar_slope()),
                                               std::abs(sf.kappa[2] - out.h3_fit.scalar_slope())});
        } catch (const Error& err) {
            fail(std::string("scalar cross-check: ") + err.what());
        }
    }
    return out;
}

ScalarFit fit_scalar_restriction(const ScalarQuadruple& q, const std::vector<double>& alphas) {
    const auto n = static_cast<Eigen::Index>(alphas.size());
    if (n < 2) throw RankError("fit_scalar_restriction needs at least two points");
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(4 * n, 7);
    Eigen::VectorXd b(4 * n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double al = alphas[i];
        if (!(al > 0.0 && al < 1.0)) throw DomainError("fit_scalar_restriction: point outside (0, 1)");
        const double l1 = std::log(1.0 - al);
        const double la = std::log(al);
        // unknowns: k1 k2 k3 C1 C2 C3 C4
        a.row(4 * i) << l1, la, l1, 1, 0, 0, 0;
        a.row(4 * i + 1) << l1, 0, la, 0, 1, 0, 0;
        a.row(4 * i + 2) << l1, l1, la, 0, 0, 1, 0;
        a.row(4 * i + 3) << l1, la, 0, 0, 0, 0, 1;
        b(4 * i) = q.F(al);
        b(4 * i + 1) = q.G(al);
        b(4 * i + 2) = q.H(al);
        b(4 * i + 3) = q.K(al);
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
    if (qr.rank() < 7) throw RankError("fit_scalar_restriction: rank deficient design");
    const Eigen::VectorXd th = qr.solve(b);
    ScalarFit out;
    out.kappa = {th(0), th(1), th(2)};
    out.C = {th(3), th(4), th(5), th(6)};
    out.residual = (a * th - b).cwiseAbs().maxCoeff();
    return out;
}

nlohmann::json to_json(const LogCauchyFn& fn) {
    switch (fn.form()) {
    case LogForm::DetLog:
        return {{"form", "detlog"}, {"params", {fn.kappa()}}};
    case LogForm::PowerLog: {
        std::vector<double> s(fn.s().data(), fn.s().data() + fn.s().size());
        return {{"form", "powerlog"}, {"params", s}};
    }
    case LogForm::Sum: {
        nlohmann::json parts = nlohmann::json::array();
        for (const auto& p : fn.parts()) parts.push_back(to_json(p));
        return {{"form", "sum"}, {"parts", parts}};
    }
    }
    return {};
}

nlohmann::json to_json(const RecoveredComponents& rec) {
    nlohmann::json stages = nlohmann::json::array();
    for (const auto& s : rec.stages) {
        stages.push_back({{"name", s.name},
                          {"limit_residual", s.limit_residual},
                          {"fit_residual", s.fit_residual},
                          {"ok", s.ok}});
    }
    return {
        {"h1", to_json(rec.h1_fit)},
        {"h2", to_json(rec.h2_fit)},
        {"h3", to_json(rec.h3_fit)},
        {"C", rec.C},
        {"residuals",
         {{"reconstruction", rec.reconstruction_residual},
          {"constant_sum", rec.raw_constant_sum_defect},
          {"scalar_cross_check", rec.scalar_cross_check},
          {"stages", stages}}},
        {"grid", rec.alpha_grid},
        {"ok", rec.ok},
        {"failures", rec.failures},
    };
}

} // namespace symcone
