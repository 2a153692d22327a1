#include "mixhess/commands.hpp"

#include "mixhess/errors.hpp"
#include "mixhess/identities.hpp"
#include "mixhess/io.hpp"
#include "mixhess/problems.hpp"
#include "mixhess/verify.hpp"

#include <cmath>
#include <iostream>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace mixhess {

namespace {

std::ostream& logger(const CommandOptions& o) { return o.log ? *o.log : std::cerr; }

int positive_int(const Config& c, const std::string& s, const std::string& k, std::int64_t lo, std::int64_t hi) {
    const auto v = c.get_int(s, k);
    if (v < lo || v > hi)
        throw ConfigError("[" + s + "] " + k + ": must lie in " + std::to_string(lo) + ".." + std::to_string(hi));
    return static_cast<int>(v);
}

double positive_double(const Config& c, const std::string& s, const std::string& k) {
    const double v = c.get_double(s, k);
    if (!(v > 0.0)) throw ConfigError("[" + s + "] " + k + ": must be positive");
    return v;
}

std::vector<double> poly(const Config& c, const std::string& key) {
    auto v = c.get_doubles("coefficients", key);
    if (v.empty()) throw ConfigError("[coefficients] " + key + ": needs at least one coefficient");
    return v;
}

bool is_radial(const Config& c) {
    return c.get_string("problem", "kind") == "general" && c.get_string("domain", "kind") == "ball";
}

void prepare_out(const CommandOptions& o) {
    std::error_code ec;
    std::filesystem::create_directories(o.out, ec);
    if (ec) throw ConfigError("cannot create output directory '" + o.out.string() + "': " + ec.message());
}

Json problem_json(const Config& c, const ProblemData& p) {
    Json j;
    j["kind"] = c.get_string("problem", "kind");
    j["n"] = p.n;
    j["k"] = p.k;
    j["eps"] = p.eps;
    j["domain"] = {{"kind", to_string(p.domain.kind)}, {"radii", p.domain.radii}, {"center", p.domain.center}};
    return j;
}

struct FieldError {
    double max = 0.0;
    double mean = 0.0;
};

FieldError field_error(const ScalarField& a, const ScalarField& b) {
    FieldError e;
    const auto va = a.values(), vb = b.values();
    for (std::size_t i = 0; i < va.size(); ++i) {
        const double d = std::abs(va[i] - vb[i]);
        e.max = std::max(e.max, d);
        e.mean += d;
    }
    if (!va.empty()) e.mean /= static_cast<double>(va.size());
    return e;
}

}  // namespace

DomainSpec domain_from_config(const Config& c) {
    const int n = positive_int(c, "problem", "n", 1, 8);
    auto center = c.get_doubles("domain", "center");
    if (static_cast<int>(center.size()) != 2 * n) throw ConfigError("[domain] center: needs 2n entries");
    const auto kind = c.get_string("domain", "kind");
    try {
        DomainSpec d = kind == "ball" ? DomainSpec::ball(n, c.get_double("domain", "radius"), center)
                                      : DomainSpec::ellipsoid(n, c.get_doubles("domain", "radii"), center);
        d.validate();
        return d;
    } catch (const ArgumentError& e) {
        throw ConfigError(std::string("[domain] ") + e.what());
    }
}

SolverTolerances tolerances_from_config(const Config& c) {
    SolverTolerances t;
    t.residual_tol = positive_double(c, "solver", "residual_tol");
    t.cone_margin = c.get_double("solver", "cone_margin");
    if (!(t.cone_margin >= 0.0)) throw ConfigError("[solver] cone_margin: must be >= 0");
    t.max_iterations = positive_int(c, "solver", "max_iterations", 0, 10000);
    t.linear_tol = positive_double(c, "solver", "linear_tol");
    t.min_step = positive_double(c, "solver", "min_step");
    t.armijo = c.get_double("solver", "armijo");
    if (!(t.armijo > 0.0 && t.armijo < 0.5)) throw ConfigError("[solver] armijo: must lie in (0, 0.5)");
    return t;
}

ProblemData problem_from_config(const Config& c, double eps) {
    const int n = positive_int(c, "problem", "n", 1, 8);
    const int k = positive_int(c, "problem", "k", 2, n);
    const auto domain = domain_from_config(c);
    const auto tol = tolerances_from_config(c);
    const auto kind = c.get_string("problem", "kind");
    if (kind == "manufactured") {
        if (n != 2 || k != 2) throw ConfigError("[problem] manufactured solution needs n = k = 2");
        Manufactured m;
        m.alpha0 = positive_double(c, "manufactured", "alpha0");
        m.beta = c.get_double("manufactured", "beta");
        if (!(m.beta >= 0.0)) throw ConfigError("[manufactured] beta: must be >= 0");
        m.center = domain.center;
        return m.problem(domain, eps, tol);
    }
    ProblemData p;
    p.n = n;
    p.k = k;
    p.eps = eps;
    p.domain = domain;
    p.tol = tol;
    for (int l = 0; l < k; ++l) p.alpha.push_back(radial_polynomial(poly(c, "alpha_" + std::to_string(l)), domain.center));
    p.phi = radial_polynomial(poly(c, "phi"), domain.center);
    return p;
}

std::shared_ptr<const Grid> grid_from_config(const Config& c, int N) {
    GridOptions opt;
    opt.sample_spacing = c.get_double("grid", "sample_spacing");
    try {
        return std::make_shared<const Grid>(build_grid(domain_from_config(c), N, c.get_double("grid", "half_width"), opt));
    } catch (const ArgumentError& e) {
        throw ConfigError(std::string("[grid] ") + e.what());
    }
}

RadialProblem radial_from_config(const Config& c) {
    if (!is_radial(c)) throw ConfigError("radial oracle needs problem.kind = general on a ball");
    RadialProblem p;
    p.n = positive_int(c, "problem", "n", 2, 8);
    p.k = positive_int(c, "problem", "k", 2, p.n);
    p.R = c.get_double("domain", "radius");
    for (int l = 0; l < p.k; ++l) p.alpha.push_back(poly(c, "alpha_" + std::to_string(l)));
    if (c.has("oracle", "start_fraction")) p.start_fraction = c.get_double("oracle", "start_fraction");
    if (c.has("oracle", "profile_tol")) p.profile_tol = c.get_double("oracle", "profile_tol");
    try {
        p.validate();
    } catch (const ArgumentError& e) {
        throw ConfigError(e.what());
    }
    return p;
}

double radial_phi(const Config& c) {
    const double R = c.get_double("domain", "radius");
    return eval_polynomial(poly(c, "phi"), R * R);
}

// ---------------------------------------------------------------------------

int cmd_identities(const Config& c, const CommandOptions& o) {
    IdentityOptions opt;
    opt.n_min = positive_int(c, "identities", "n_min", 1, 8);
    opt.n_max = positive_int(c, "identities", "n_max", opt.n_min, 8);
    opt.samples = positive_int(c, "identities", "samples", 0, 100000000);
    opt.operator_n_max = positive_int(c, "identities", "operator_n_max", 1, 6);
    opt.operator_samples = positive_int(c, "identities", "operator_samples", 0, 10000000);
    opt.inject_fault = c.get_bool("identities", "inject_fault");
    opt.seed = o.seed ? *o.seed : c.get_uint("run", "seed");
    prepare_out(o);

    const auto rep = run_identities(opt);
    CsvWriter csv(o.out / "identities.csv", {"property", "samples", "worst_margin"});
    for (const auto& p : rep.results) csv.row({p.property, std::to_string(p.samples), CsvWriter::num(p.worst_margin)});
    Json j = to_json(rep);
    j["seed"] = opt.seed;
    write_json(o.out / "identities.json", j);

    auto& log = logger(o);
    for (const auto& p : rep.results)
        if (!p.ok()) log << "violation: " << p.property << " worst margin " << p.worst_margin << " at " << p.worst_case << '\n';
    log << "identities: " << rep.results.size() << " properties, " << (rep.ok() ? "all hold" : "violations found") << '\n';
    return rep.ok() ? exit_ok : exit_property_violation;
}

int cmd_solve(const Config& c, const CommandOptions& o) {
    const double eps = c.get_double("problem", "eps");
    if (!(eps > 0.0)) throw ConfigError("[problem] eps: solve needs eps > 0");
    const int N = positive_int(c, "grid", "N", 9, 1001);
    const auto grid = grid_from_config(c, N);
    const auto problem = problem_from_config(c, eps);
    prepare_out(o);
    auto& log = logger(o);

    Discretization disc(grid, problem);
    log << "solve: " << grid->num_unknowns() << " unknowns (" << grid->interior().size() << " interior)\n";
    const auto report = newton_solve(disc, barrier_field(disc));
    log << "solve: converged in " << report.iterations << " iterations\n";
    write_field(o.out / "field.txt", report.solution, problem.k);

    Json j;
    j["problem"] = problem_json(c, problem);
    j["grid"] = grid_json(*grid);
    j["solve"] = to_json(report);
    if (c.get_string("problem", "kind") == "manufactured") {
        Manufactured m;
        m.alpha0 = c.get_double("manufactured", "alpha0");
        m.beta = c.get_double("manufactured", "beta");
        m.center = problem.domain.center;
        const ScalarField exact(grid, [&](std::span<const double> t) { return m.value(t); });
        const auto err = field_error(report.solution, exact);
        const auto trunc = disc.residual(exact);
        j["manufactured"] = {{"max_error", err.max},
                             {"mean_error", err.mean},
                             {"truncation_interior", trunc.interior_max()},
                             {"truncation_boundary", trunc.boundary_max()}};
        CsvWriter csv(o.out / "error.csv", {"N", "h", "max_error", "mean_error"});
        csv.row({std::to_string(N), CsvWriter::num(grid->spacing()), CsvWriter::num(err.max), CsvWriter::num(err.mean)});
    } else if (is_radial(c)) {
        const auto prof = march(radial_from_config(c));
        const auto closure = radial_neumann(prof, eps, radial_phi(c));
        const auto err = field_error(report.solution, lift_to_grid(prof, closure.f0, grid));
        j["oracle"] = {{"max_error", err.max}, {"mean_error", err.mean}};
    }
    write_json(o.out / "solve_report.json", j);

    const auto est = check_solution(report, disc);
    write_json(o.out / "estimate_report.json", to_json(est));
    enforce(est);
    return exit_ok;
}

int cmd_continue(const Config& c, const CommandOptions& o) {
    const int N = positive_int(c, "grid", "N", 9, 1001);
    const auto schedule = c.get_doubles("continuation", "schedule");
    if (schedule.empty()) throw ConfigError("[continuation] schedule: empty");
    for (std::size_t i = 0; i < schedule.size(); ++i)
        if (!(schedule[i] > 0.0) || (i > 0 && !(schedule[i] < schedule[i - 1])))
            throw ConfigError("[continuation] schedule: must be positive and strictly decreasing");
    const auto grid = grid_from_config(c, N);
    const auto problem = problem_from_config(c, schedule.front());
    prepare_out(o);
    auto& log = logger(o);

    const auto result = continue_epsilon(problem, grid, schedule);
    CsvWriter csv(o.out / "continuation.csv", {"eps", "c_eps", "sup_eps_u", "iters"});
    Json steps = Json::array();
    bool verified = true;
    std::string first_failure;
    for (const auto& s : result.steps) {
        const double sup = s.eps * s.report.solution.max_abs();
        csv.row({CsvWriter::num(s.eps), CsvWriter::num(s.c_eps), CsvWriter::num(sup), std::to_string(s.report.iterations)});
        ProblemData p = problem;
        p.eps = s.eps;
        const Discretization disc(grid, p);
        const auto est = check_solution(s.report, disc);
        if (!est.all_ok() && verified) {
            verified = false;
            first_failure = "eps " + std::to_string(s.eps) + ": " + est.first_failure();
        }
        steps.push_back({{"eps", s.eps}, {"c_eps", s.c_eps}, {"solve", to_json(s.report)}, {"estimates", to_json(est)}});
        log << "continue: eps " << s.eps << " c_eps " << s.c_eps << " (" << s.report.iterations << " iterations)\n";
    }

    Json j;
    j["problem"] = problem_json(c, problem);
    j["grid"] = grid_json(*grid);
    j["schedule"] = schedule;
    j["complete"] = result.complete();
    if (result.failure) j["failure"] = *result.failure;
    if (!result.steps.empty()) j["c"] = result.c;
    if (is_radial(c) && !result.steps.empty()) {
        const auto prof = march(radial_from_config(c));
        const double c_oracle = radial_neumann(prof, 0.0, radial_phi(c)).c;
        j["c_oracle"] = c_oracle;
        j["abs_c_error"] = std::abs(result.c - c_oracle);
    }
    j["steps"] = steps;
    write_json(o.out / "continuation.json", j);
    if (!result.steps.empty()) write_field(o.out / "limit_field.txt", result.v, problem.k);

    if (result.failure) {
        log << *result.failure << '\n';
        return exit_solver_failure;
    }
    if (!verified) {
        log << "verification failure at " << first_failure << '\n';
        return exit_verification_failure;
    }
    return exit_ok;
}

int cmd_oracle(const Config& c, const CommandOptions& o) {
    const auto p = radial_from_config(c);
    const double eps = c.get_double("oracle", "eps");
    if (!(eps >= 0.0)) throw ConfigError("[oracle] eps: must be >= 0");
    const double phi = radial_phi(c);
    prepare_out(o);

    const auto prof = march(p);
    const auto closure = radial_neumann(prof, eps, phi);
    CsvWriter csv(o.out / "oracle.csv", {"s", "g", "f"});
    for (std::size_t i = 0; i < prof.s().size(); ++i)
        csv.row({CsvWriter::num(prof.s()[i]), CsvWriter::num(prof.g()[i]), CsvWriter::num(closure.f0 + prof.F()[i])});
    Json j;
    j["n"] = p.n;
    j["k"] = p.k;
    j["R"] = p.R;
    j["eps"] = eps;
    j["phi"] = phi;
    j["g0"] = prof.g0();
    j["g_R2"] = prof.g_end();
    j["flux"] = 2.0 * p.R * prof.g_end();
    j["F_R2"] = prof.F_end();
    j["steps"] = prof.steps();
    if (eps == 0.0) j["c"] = closure.c;
    else j["f0"] = closure.f0;
    write_json(o.out / "oracle.json", j);
    logger(o) << "oracle: g(0) = " << prof.g0() << ", g(R^2) = " << prof.g_end() << '\n';
    return exit_ok;
}

int cmd_compare(const Config& c, const CommandOptions& o) {
    const double eps = c.get_double("problem", "eps");
    if (!(eps > 0.0)) throw ConfigError("[problem] eps: compare needs eps > 0");
    const auto Ns = c.get_ints("compare", "N_values");
    if (Ns.empty()) throw ConfigError("[compare] N_values: empty");
    const auto prof = march(radial_from_config(c));
    const auto closure = radial_neumann(prof, eps, radial_phi(c));
    const auto problem = problem_from_config(c, eps);
    prepare_out(o);
    auto& log = logger(o);

    CsvWriter csv(o.out / "compare.csv", {"N", "h", "max_error", "mean_error"});
    Json rows = Json::array();
    std::optional<ScalarField> last_oracle;
    for (auto N64 : Ns) {
        if (N64 < 9 || N64 > 1001) throw ConfigError("[compare] N_values: entries must lie in 9..1001");
        const int N = static_cast<int>(N64);
        const auto grid = grid_from_config(c, N);
        Discretization disc(grid, problem);
        const auto report = newton_solve(disc, barrier_field(disc));
        const auto lifted = lift_to_grid(prof, closure.f0, grid);
        const auto err = field_error(report.solution, lifted);
        csv.row({std::to_string(N), CsvWriter::num(grid->spacing()), CsvWriter::num(err.max), CsvWriter::num(err.mean)});
        rows.push_back({{"N", N}, {"h", grid->spacing()}, {"max_error", err.max}, {"mean_error", err.mean},
                        {"iterations", report.iterations}});
        log << "compare: N " << N << " max error " << err.max << '\n';
        last_oracle = lifted;
    }
    Json j;
    j["problem"] = problem_json(c, problem);
    j["oracle"] = {{"g0", prof.g0()}, {"g_R2", prof.g_end()}, {"f0", closure.f0}, {"steps", prof.steps()}};
    j["rows"] = rows;
    write_json(o.out / "compare.json", j);
    write_field(o.out / "oracle_field.txt", *last_oracle, problem.k);
    return exit_ok;
}

int cmd_verify(const Config& c, const CommandOptions& o) {
    const double eps = c.get_double("problem", "eps");
    if (!(eps >= 0.0)) throw ConfigError("[problem] eps: must be >= 0");
    const auto dump = read_field_dump(c.get_string("verify", "field"));
    const auto grid = grid_from_config(c, dump.N);
    const auto problem = problem_from_config(c, eps);
    if (dump.k != problem.k) throw ConfigError("field dump: k does not match the config");
    const auto u = field_from_dump(dump, grid);
    prepare_out(o);

    const Discretization disc(grid, problem);
    const auto est = check_field(u, disc);
    write_json(o.out / "estimate_report.json", to_json(est));
    enforce(est);
    logger(o) << "verify: all bounds hold\n";
    return exit_ok;
}

int run_command(const std::string& command, const Config& c, const CommandOptions& o) {
    auto& log = logger(o);
    try {
        check_schema(command, c);
        int threads = o.threads ? *o.threads : static_cast<int>(c.get_int("run", "threads"));
        if (threads < 0) throw ConfigError("[run] threads: must be >= 0");
        c.get_uint("run", "seed");
#ifdef _OPENMP
        if (threads > 0) omp_set_num_threads(threads);
#endif
        if (command == "identities") return cmd_identities(c, o);
        if (command == "solve") return cmd_solve(c, o);
        if (command == "continue") return cmd_continue(c, o);
        if (command == "oracle") return cmd_oracle(c, o);
        if (command == "compare") return cmd_compare(c, o);
        if (command == "verify") return cmd_verify(c, o);
        throw ConfigError("unknown command '" + command + "'");
    } catch (const ConfigError& e) {
        log << "config error: " << e.what() << '\n';
        return exit_config_error;
    } catch (const ArgumentError& e) {
        log << "config error: " << e.what() << '\n';
        return exit_config_error;
    } catch (const VerificationError& e) {
        log << "verification failure: " << e.what() << '\n';
        return exit_verification_failure;
    } catch (const Error& e) {
        log << "solver failure: " << e.what() << '\n';
        return exit_solver_failure;
    }
}

}  // namespace mixhess
