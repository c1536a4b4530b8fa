// effstiff command-line front end. Exit codes: 0 success, 1 domain or
// quality failure, 2 usage or parse error.

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "effstiff/assembly.hpp"
#include "effstiff/cholesky.hpp"
#include "effstiff/errors.hpp"
#include "effstiff/generators.hpp"
#include "effstiff/io.hpp"
#include "effstiff/leverage.hpp"
#include "effstiff/rng.hpp"
#include "effstiff/sampler.hpp"
#include "effstiff/solver.hpp"

using namespace effstiff;

namespace {

constexpr std::uint64_t kDefaultSeed = 20240601;

// Raised for bad flag combinations detected after parsing.
struct UsageError : Error {
    using Error::Error;
};

// Domain or quality failure, reported with exit code 1.
struct QualityFailure {
    std::string message;
};

std::optional<std::uint64_t> env_unsigned(const char* name) {
    const char* v = std::getenv(name);
    if (v == nullptr || *v == '\0') {
        return std::nullopt;
    }
    char* end = nullptr;
    const unsigned long long x = std::strtoull(v, &end, 10);
    if (*end != '\0' || v[0] == '-') {
        throw UsageError(std::string(name) + " must be a nonnegative integer");
    }
    return x;
}

std::uint64_t default_seed() { return env_unsigned("EFFSTIFF_SEED").value_or(kDefaultSeed); }

std::size_t default_threads() {
    const std::uint64_t t = env_unsigned("EFFSTIFF_THREADS").value_or(1);
    return t == 0 ? 1 : static_cast<std::size_t>(t);
}

void say(const std::string& key, const std::string& value) {
    std::cout << key << ": " << value << "\n";
}

std::string yes_no(bool b) { return b ? "yes" : "no"; }

// Compact form for file comments.
std::string brief(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

// ---- gen --------------------------------------------------------------------

struct GenArgs {
    std::string out;
    std::string coords;
    std::vector<std::size_t> pin;

    std::string graph = "path";
    std::size_t n = 10;
    std::size_t rows = 4;
    std::size_t cols = 4;
    std::optional<std::size_t> extra;
    double weight = 1.0;
    double wmin = 0.1;
    double wmax = 10.0;
    std::optional<std::uint64_t> seed;

    ElasticitySpec elasticity;
    PoissonSpec poisson;
};

void write_model(const GenArgs& g, const GeneratedModel& model, std::vector<std::string> comments) {
    const Assembly a = g.pin.empty() ? model.assembly : pin_dofs(model.assembly, g.pin);
    if (!g.pin.empty()) {
        std::string list;
        for (std::size_t p : g.pin) {
            list += (list.empty() ? "" : ",") + std::to_string(p);
        }
        comments.push_back("pinned dofs " + list + " (rows and columns removed, d = 0)");
    }
    write_file_atomic(g.out, feas_string(a, comments));
    if (!g.coords.empty()) {
        write_file_atomic(g.coords, coordinates_csv(model.coords));
    }
    say("n", std::to_string(a.n()));
    say("m", std::to_string(a.m()));
    say("r", std::to_string(a.r()));
    say("d", std::to_string(a.d()));
}

void cmd_gen_laplacian(const GenArgs& g) {
    GraphSpec spec;
    std::string desc = "graph " + g.graph;
    if (g.graph == "path") {
        spec = path_graph(g.n, g.weight);
    } else if (g.graph == "cycle") {
        spec = cycle_graph(g.n, g.weight);
    } else if (g.graph == "star") {
        spec = star_graph(g.n, g.weight);
    } else if (g.graph == "complete") {
        spec = complete_graph(g.n, g.weight);
    } else if (g.graph == "grid") {
        spec = grid_graph(g.rows, g.cols, g.weight);
        desc += " " + std::to_string(g.rows) + "x" + std::to_string(g.cols);
    } else {
        const std::uint64_t seed = g.seed.value_or(default_seed());
        spec = random_connected_graph(g.n, g.extra.value_or(g.n), g.wmin, g.wmax, seed);
        desc += " seed " + std::to_string(seed) + " weights [" + brief(g.wmin) + ", " +
                brief(g.wmax) + "]";
    }
    if (g.graph != "grid") {
        desc += " n " + std::to_string(g.n);
    }
    write_model(g, laplacian_model(spec), {"laplacian " + desc});
}

void cmd_gen_elasticity(const GenArgs& g) {
    const ElasticitySpec& s = g.elasticity;
    write_model(g, elasticity2d_model(s),
                {"elasticity2d bars " + std::to_string(s.bars) + " nx " + std::to_string(s.nx) +
                     " ny " + std::to_string(s.ny) + " ratio " + brief(s.ratio),
                 "plane stress, constant-strain triangles, thickness 1, poisson ratio " +
                     brief(s.poisson) + ", youngs " + brief(s.youngs)});
}

void cmd_gen_poisson(const GenArgs& g) {
    const PoissonSpec& s = g.poisson;
    write_model(g, poisson3d_model(s),
                {"poisson3d box " + std::to_string(s.box) + " ball radius " +
                     brief(s.ball_r) + " ball conductivity " + brief(s.ball_k) +
                     " box conductivity " + brief(s.box_k),
                 "uniform grid, 6 tetrahedra per cube, material by centroid"});
}

// ---- check ------------------------------------------------------------------

int cmd_check(const std::string& file, std::size_t trials, std::uint64_t seed) {
    const Assembly a = load_feas(file);
    const WellFormedReport rep = check_well_formed(a, trials, seed);
    say("n", std::to_string(a.n()));
    say("m", std::to_string(a.m()));
    say("nullspace", rep.nullspace_ok ? "ok" : "FAIL");
    say("compatibility", rep.compatibility_ok ? "ok" : "FAIL");
    say("minimal_rank", rep.minimal_rank_ok ? "ok" : "FAIL");
    for (const auto& d : rep.diagnostics) {
        std::cout << "diagnostic: " << d << "\n";
    }
    say("well_formed", yes_no(rep.ok()));
    return rep.ok() ? 0 : 1;
}

// ---- leverage ---------------------------------------------------------------

struct LeverageArgs {
    std::string file;
    std::string method = "exact-qr";
    std::optional<std::size_t> radius;
    std::optional<std::size_t> min_shared;
    std::optional<std::size_t> threads;
    std::string out;
};

int cmd_leverage(const LeverageArgs& l) {
    LeverageOptions opts;
    opts.method = parse_leverage_method(l.method);
    opts.radius = l.radius;
    opts.min_shared = l.min_shared;
    opts.threads = l.threads.value_or(default_threads());
    if (opts.method == LeverageMethod::Local && !opts.radius) {
        throw UsageError("--method local needs --radius");
    }
    const Assembly a = load_feas(l.file);
    const LeverageTable t = leverage_table(a, opts);
    write_file_atomic(l.out, leverage_csv(t));
    say("elements", std::to_string(t.size()));
    say("total", format_real(t.total));
    if (!is_exact(opts.method)) {
        say("bracket", "not checked (local leverages are upper bounds)");
        return 0;
    }
    const double hi = static_cast<double>(a.n() - a.d());
    const double lo = hi / static_cast<double>(a.r());
    const bool ok = t.total >= lo - 1e-8 && t.total <= hi + 1e-8;
    say("bracket", format_real(lo) + " <= total <= " + format_real(hi) + " " +
                       (ok ? "PASS" : "FAIL"));
    return ok ? 0 : 1;
}

// ---- sparsify ---------------------------------------------------------------

struct SparsifyArgs {
    std::string file;
    std::string leverage;
    double kappa_max = 3.0;
    double delta = 0.5;
    std::optional<std::uint64_t> seed;
    std::string samples;
    std::optional<std::string> mode;
    std::optional<double> beta;
    std::size_t retries = 3;
    bool uniform = false;
    std::string audit;
    std::string out;
};

int cmd_sparsify(const SparsifyArgs& s) {
    const Assembly a = load_feas(s.file);
    std::optional<LeverageTable> table;
    if (!s.leverage.empty()) {
        table = parse_leverage_csv(read_file(s.leverage));
    }

    PlanOptions opts;
    opts.kappa_max = s.kappa_max;
    opts.delta = s.delta;
    opts.seed = s.seed.value_or(default_seed());
    opts.beta = s.beta;
    if (s.mode) {
        opts.mode = parse_sample_mode(*s.mode);
    } else if (table) {
        bool exact = true;
        for (const auto& r : table->records) {
            exact = exact && is_exact(r.method);
        }
        opts.mode = exact ? SampleMode::Exact : SampleMode::Upper;
    }

    if (s.samples == "heuristic") {
        if (!table) {
            throw UsageError("--samples heuristic needs --leverage");
        }
        opts.samples = heuristic_sample_size(table->total);
    } else if (!s.samples.empty()) {
        std::size_t pos = 0;
        unsigned long long v = 0;
        try {
            v = std::stoull(s.samples, &pos);
        } catch (const std::exception&) {
            pos = 0;
        }
        if (pos != s.samples.size() || v == 0 || s.samples[0] == '-') {
            throw UsageError("--samples must be a positive integer or 'heuristic'");
        }
        opts.samples = static_cast<std::size_t>(v);
    }

    SamplingPlan plan;
    if (s.uniform) {
        if (!opts.samples) {
            if (!table) {
                throw UsageError("--uniform needs --samples or --leverage to fix the count");
            }
            opts.samples = make_plan(a, *table, opts).samples;
        }
        plan = uniform_plan(a, opts);
    } else {
        if (!table) {
            throw UsageError("--leverage is required unless --uniform is given");
        }
        plan = make_plan(a, *table, opts);
    }

    const SparsifyResult res = sparsify(a, plan, s.retries);
    const SampledPreconditioner& p = res.preconditioner;
    write_file_atomic(s.out, matrix_market_string(p.matrix, "sampled preconditioner, M " +
                                                               std::to_string(p.samples) +
                                                               ", seed " + std::to_string(p.seed)));
    if (!s.audit.empty()) {
        write_file_atomic(s.audit, audit_csv(res.draws));
    }
    say("probabilities", s.uniform ? "uniform" : "leverage");
    say("mode", std::string(to_string(plan.mode)));
    say("M", std::to_string(p.samples));
    say("distinct_count", std::to_string(p.distinct_count));
    say("attempts", std::to_string(res.attempts));
    say("seed", std::to_string(p.seed));
    say("detected_rank", std::to_string(p.detected_rank));
    say("rank_ok", p.rank_ok ? "true" : "false");
    if (!p.rank_ok) {
        throw QualityFailure{"preconditioner lost rank after " + std::to_string(res.attempts) +
                             " attempts"};
    }
    if (a.n() <= kDenseConditionMaxOrder) {
        say("kappa", format_real(exact_generalized_condition(a.stiffness(), p.matrix,
                                                             a.null_basis())));
    } else {
        say("kappa", "not computed (n > " + std::to_string(kDenseConditionMaxOrder) + ")");
    }
    return 0;
}

// ---- solve ------------------------------------------------------------------

struct SolveArgs {
    std::string file;
    std::string precond;
    std::string rhs = "random";
    std::optional<std::uint64_t> seed;
    double tol = 1e-8;
    std::size_t maxit = 1000;
    std::string out;
    std::string solution;
};

int cmd_solve(const SolveArgs& s) {
    const Assembly a = load_feas(s.file);
    const NullProjector proj(a.null_basis());

    Vector b;
    if (s.rhs == "random") {
        Xoshiro256 rng(s.seed.value_or(default_seed()));
        b.resize(a.n());
        for (double& v : b) {
            v = rng.uniform() - 0.5;
        }
        proj.project(b);
    } else {
        b = parse_vector(read_file(s.rhs));
        if (b.size() != a.n()) {
            throw ParseError("rhs has " + std::to_string(b.size()) + " entries, model has " +
                             std::to_string(a.n()));
        }
        double norm = 0.0;
        for (double v : b) {
            norm += v * v;
        }
        if (proj.null_component(b) > kConsistencyTolerance * std::sqrt(norm)) {
            throw ConsistencyError("inconsistent rhs: component in the null space of K");
        }
    }

    SparseSymmetric p = a.stiffness();
    if (!s.precond.empty()) {
        p = parse_matrix_market(read_file(s.precond));
        if (p.order() != a.n()) {
            throw ParseError("preconditioner order " + std::to_string(p.order()) +
                             " does not match n = " + std::to_string(a.n()));
        }
    }
    const CholeskyFactor f = factor(p, a.d());
    if (!f.usable()) {
        throw QualityFailure{"unusable preconditioner factor: rank deficit " +
                             std::to_string(f.rank_deficit()) + " exceeds " +
                             std::to_string(a.d())};
    }

    const SolveReport rep = pcg(a.stiffness(), b, f, s.tol, s.maxit, proj);
    write_file_atomic(s.out, residual_csv(rep));
    if (!s.solution.empty()) {
        write_file_atomic(s.solution, vector_text(rep.x));
    }
    say("iterations", std::to_string(rep.iterations));
    say("relres", format_real(rep.residual_history.back()));
    say("kappa_estimate", rep.kappa_estimate ? format_real(*rep.kappa_estimate) : "n/a");
    say("converged", rep.converged ? "true" : "false");
    if (!rep.converged) {
        throw QualityFailure{"no convergence to " + format_real(s.tol) + " within " +
                             std::to_string(s.maxit) + " iterations"};
    }
    return 0;
}

// ---- export -----------------------------------------------------------------

struct ExportArgs {
    std::string what = "stiffness";
    std::string file;
    std::string leverage;
    std::string coords;
    std::string out;
};

// Node coordinates CSV back into a matrix.
DenseMatrix parse_coords(const std::string& text) {
    std::vector<std::vector<double>> rows;
    std::size_t line_no = 0;
    std::size_t width = 0;
    for (std::size_t start = 0; start < text.size();) {
        std::size_t end = text.find('\n', start);
        if (end == std::string::npos) {
            end = text.size();
        }
        const std::string line = text.substr(start, end - start);
        start = end + 1;
        if (line_no++ == 0) {
            if (line.rfind("node_id,", 0) != 0) {
                throw ParseError("coordinates CSV must start with 'node_id,'");
            }
            width = static_cast<std::size_t>(std::count(line.begin(), line.end(), ','));
            continue;
        }
        if (line.empty()) {
            continue;
        }
        std::vector<double> vals;
        std::size_t pos = line.find(',');
        while (pos != std::string::npos) {
            const std::size_t next = line.find(',', pos + 1);
            const std::string cell = line.substr(pos + 1, next == std::string::npos
                                                               ? std::string::npos
                                                               : next - pos - 1);
            try {
                vals.push_back(std::stod(cell));
            } catch (const std::exception&) {
                throw ParseError("bad coordinate '" + cell + "' on line " +
                                 std::to_string(line_no));
            }
            pos = next;
        }
        if (vals.size() != width) {
            throw ParseError("wrong field count on line " + std::to_string(line_no));
        }
        rows.push_back(std::move(vals));
    }
    DenseMatrix c(rows.size(), width);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < width; ++j) {
            c(i, j) = rows[i][j];
        }
    }
    return c;
}

void cmd_export(const ExportArgs& x) {
    const Assembly a = load_feas(x.file);
    if (x.what == "stiffness") {
        write_file_atomic(x.out, matrix_market_string(a.stiffness(), "stiffness matrix K"));
        return;
    }
    // leverage-map: one row per element with the centroid of its points.
    if (x.leverage.empty() || x.coords.empty()) {
        throw UsageError("export leverage-map needs --leverage and --coords");
    }
    const LeverageTable t = parse_leverage_csv(read_file(x.leverage));
    const DenseMatrix c = parse_coords(read_file(x.coords));
    if (c.rows() == 0 || a.n() % c.rows() != 0) {
        throw ParseError("coordinates do not match the model's index count");
    }
    const std::size_t per_point = a.n() / c.rows();
    std::string out = c.cols() >= 3 ? "element_id,tau,x,y,z\n" : "element_id,tau,x,y\n";
    for (const auto& r : t.records) {
        if (r.element_id >= a.m()) {
            throw ParseError("leverage row for unknown element " + std::to_string(r.element_id));
        }
        std::set<std::size_t> points;
        for (std::size_t v : a.element(r.element_id).nodes) {
            points.insert(v / per_point);
        }
        out += std::to_string(r.element_id) + "," + format_real(r.tau);
        for (std::size_t k = 0; k < c.cols(); ++k) {
            double s = 0.0;
            for (std::size_t p : points) {
                s += c(p, k);
            }
            out += "," + format_real(s / static_cast<double>(points.size()));
        }
        out += "\n";
    }
    write_file_atomic(x.out, out);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Element sampling by effective-stiffness leverage."};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "Show help for every subcommand");

    GenArgs g;
    auto* gen = app.add_subcommand("gen", "Generate a FEAS model");
    gen->require_subcommand(1);
    auto add_common = [&g](CLI::App* c) {
        c->add_option("--out", g.out, "FEAS output path")->required();
        c->add_option("--coords", g.coords, "Coordinates CSV output path");
        c->add_option("--pin", g.pin, "Indices to pin (Dirichlet variant)")->delimiter(',');
    };
    auto* lap = gen->add_subcommand("laplacian", "Graph Laplacian");
    add_common(lap);
    lap->add_option("--graph", g.graph, "Graph family")
        ->check(CLI::IsMember({"path", "cycle", "star", "complete", "grid", "random"}));
    lap->add_option("--n", g.n, "Vertex count")->check(CLI::PositiveNumber);
    lap->add_option("--rows", g.rows, "Grid rows")->check(CLI::PositiveNumber);
    lap->add_option("--cols", g.cols, "Grid columns")->check(CLI::PositiveNumber);
    lap->add_option("--extra", g.extra, "Random graph: chords beyond the spanning tree");
    lap->add_option("--weight", g.weight, "Edge weight for fixed families")
        ->check(CLI::PositiveNumber);
    lap->add_option("--wmin", g.wmin, "Random graph: smallest weight")->check(CLI::PositiveNumber);
    lap->add_option("--wmax", g.wmax, "Random graph: largest weight")->check(CLI::PositiveNumber);
    lap->add_option("--seed", g.seed, "Random graph seed");

    auto* ela = gen->add_subcommand("elasticity2d", "Stacked bars of plane-stress triangles");
    add_common(ela);
    ela->add_option("--bars", g.elasticity.bars, "Bar count")->check(CLI::PositiveNumber);
    ela->add_option("--nx", g.elasticity.nx, "Cells along each bar")->check(CLI::PositiveNumber);
    ela->add_option("--ny", g.elasticity.ny, "Cells across each bar")->check(CLI::PositiveNumber);
    ela->add_option("--length", g.elasticity.bar_length, "Bar length")->check(CLI::PositiveNumber);
    ela->add_option("--height", g.elasticity.bar_height, "Bar height")->check(CLI::PositiveNumber);
    ela->add_option("--youngs", g.elasticity.youngs, "Young's modulus of even bars")
        ->check(CLI::PositiveNumber);
    ela->add_option("--ratio", g.elasticity.ratio, "Stiffness ratio of odd to even bars")
        ->check(CLI::PositiveNumber);
    ela->add_option("--poisson", g.elasticity.poisson, "Poisson ratio")
        ->check(CLI::Range(0.0, 0.4999));
    ela->add_option("--rotation", g.elasticity.rotation, "Mesh rotation in radians");

    auto* poi = gen->add_subcommand("poisson3d", "Ball-in-box scalar diffusion");
    add_common(poi);
    poi->add_option("--box", g.poisson.box, "Cubes per side");
    poi->add_option("--ball-r", g.poisson.ball_r, "Ball radius (box side is 1)");
    poi->add_option("--ball-k", g.poisson.ball_k, "Ball conductivity")->check(CLI::PositiveNumber);
    poi->add_option("--box-k", g.poisson.box_k, "Box conductivity")->check(CLI::PositiveNumber);

    std::string check_file;
    std::size_t check_trials = 100;
    std::optional<std::uint64_t> check_seed;
    auto* chk = app.add_subcommand("check", "Check that a model is well-formed");
    chk->add_option("file", check_file, "FEAS file")->required();
    chk->add_option("--trials", check_trials, "Elements sampled for the elimination test");
    chk->add_option("--seed", check_seed, "Seed for the element sample");

    LeverageArgs l;
    auto* lev = app.add_subcommand("leverage", "Compute element leverages");
    lev->add_option("file", l.file, "FEAS file")->required();
    lev->add_option("--method", l.method, "exact-qr, exact-schur, removal or local")
        ->check(CLI::IsMember({"exact-qr", "exact-schur", "removal", "local"}));
    lev->add_option("--radius", l.radius, "Ball radius for local leverages")
        ->check(CLI::PositiveNumber);
    lev->add_option("--min-shared", l.min_shared, "Indices two elements share to be adjacent")
        ->check(CLI::PositiveNumber);
    lev->add_option("--threads", l.threads, "Worker threads (default EFFSTIFF_THREADS or 1)")
        ->check(CLI::PositiveNumber);
    lev->add_option("--out", l.out, "Leverage CSV output path")->required();

    SparsifyArgs s;
    auto* spa = app.add_subcommand("sparsify", "Sample a preconditioner");
    spa->add_option("file", s.file, "FEAS file")->required();
    spa->add_option("--leverage", s.leverage, "Leverage CSV");
    spa->add_option("--kappa-max", s.kappa_max, "Target condition number (> 1)");
    spa->add_option("--delta", s.delta, "Failure probability in (0, 1)");
    spa->add_option("--seed", s.seed, "Sampling seed (default EFFSTIFF_SEED or a constant)");
    spa->add_option("--samples", s.samples, "Sample count: a positive integer or 'heuristic'");
    spa->add_option("--mode", s.mode, "exact, approx or upper")
        ->check(CLI::IsMember({"exact", "approx", "upper"}));
    spa->add_option("--beta", s.beta, "Leverage approximation factor for approx mode");
    spa->add_option("--retries", s.retries, "Extra seeds tried after a rank failure");
    spa->add_flag("--uniform", s.uniform, "Sample elements uniformly at the same count");
    spa->add_option("--audit", s.audit, "Draw sequence CSV output path");
    spa->add_option("--out", s.out, "Matrix Market output path")->required();

    SolveArgs so;
    auto* sol = app.add_subcommand("solve", "Run preconditioned conjugate gradients");
    sol->add_option("file", so.file, "FEAS file")->required();
    sol->add_option("--precond", so.precond, "Matrix Market preconditioner (default: K itself)");
    sol->add_option("--rhs", so.rhs, "Right-hand side file, or 'random'");
    sol->add_option("--seed", so.seed, "Seed for the random right-hand side");
    sol->add_option("--tol", so.tol, "Relative residual target")->check(CLI::PositiveNumber);
    sol->add_option("--maxit", so.maxit, "Iteration limit");
    sol->add_option("--out", so.out, "Residual CSV output path")->required();
    sol->add_option("--solution", so.solution, "Solution output path");

    ExportArgs x;
    auto* exp = app.add_subcommand("export", "Export matrices and plotting tables");
    exp->add_option("what", x.what, "stiffness or leverage-map")
        ->required()
        ->check(CLI::IsMember({"stiffness", "leverage-map"}));
    exp->add_option("file", x.file, "FEAS file")->required();
    exp->add_option("--leverage", x.leverage, "Leverage CSV (leverage-map)");
    exp->add_option("--coords", x.coords, "Coordinates CSV (leverage-map)");
    exp->add_option("--out", x.out, "Output path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*lap) {
            cmd_gen_laplacian(g);
            return 0;
        }
        if (*ela) {
            cmd_gen_elasticity(g);
            return 0;
        }
        if (*poi) {
            cmd_gen_poisson(g);
            return 0;
        }
        if (*chk) {
            return cmd_check(check_file, check_trials, check_seed.value_or(default_seed()));
        }
        if (*lev) {
            return cmd_leverage(l);
        }
        if (*spa) {
            return cmd_sparsify(s);
        }
        if (*sol) {
            return cmd_solve(so);
        }
        if (*exp) {
            cmd_export(x);
            return 0;
        }
    } catch (const QualityFailure& q) {
        std::cerr << "error: " << q.message << "\n";
        return 1;
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const ModelError& e) {
        std::cerr << "invalid model: " << e.what() << "\n";
        return 2;
    } catch (const DomainError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
