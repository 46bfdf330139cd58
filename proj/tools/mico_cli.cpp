// mico: command-line harness for the mixed-integer convex toolkit.
//
// Subcommands: feas, opt, ellipsoid, intopt, bnc, adversary, centerpoint,
// bench. Instances come from files in the grammar documented in
// include/mico/instance_io.hpp or from generator specs. All experiment output
// is CSV; `bench` additionally writes gnuplot-style .dat files. MICO_OUT_DIR
// sets the default output directory when --out is absent.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mico/branchcut.hpp"
#include "mico/infolab.hpp"
#include "mico/instance_io.hpp"
#include "mico/solver.hpp"

namespace {

using namespace mico;

struct CliError : std::runtime_error {
    std::string code;
    CliError(std::string c, const std::string& msg) : std::runtime_error(msg), code(std::move(c)) {}
};

ParsedInstance load_instance(const std::string& path) {
    if (path.empty()) throw CliError("missing_instance", "no --instance given");
    std::ifstream in(path);
    if (!in) throw CliError("io_error", "cannot open instance file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_instance(buf.str());
}

// Resolves the output stream: --out path wins, else MICO_OUT_DIR/<name>,
// else stdout.
class Output {
  public:
    Output(const std::string& out_flag, const std::string& default_name) {
        std::string path = out_flag;
        if (path.empty()) {
            if (const char* dir = std::getenv("MICO_OUT_DIR"))
                path = (std::filesystem::path(dir) / default_name).string();
        }
        if (!path.empty()) {
            file_.open(path);
            if (!file_) throw CliError("io_error", "cannot open output file '" + path + "'");
        }
    }
    std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

  private:
    std::ofstream file_;
};

std::string join(const Vec& v) {
    std::ostringstream os;
    os.precision(12);
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? ";" : "") << v[i];
    return os.str();
}

void emit_result_csv(std::ostream& os, const char* found, const char* empty,
                     const std::optional<Point>& pt, double value, const SolveStats& s) {
    os << "verdict,value,point,separation_queries,first_order_queries,ellipsoid_updates,"
          "recursion_nodes,feasibility_calls,wall_ms\n";
    os.precision(12);
    os << (pt ? found : empty) << ',';
    if (pt) os << value;
    os << ',' << (pt ? join(pt->coords) : "") << ',' << s.separation_queries << ','
       << s.first_order_queries << ',' << s.ellipsoid_updates << ',' << s.recursion_nodes << ','
       << s.feasibility_calls << ',' << s.wall_ms << '\n';
}

MatchStrategy parse_strategy(const std::string& s) {
    if (s == "centerpoint") return MatchStrategy::Centerpoint;
    if (s == "bisection") return MatchStrategy::Bisection;
    if (s == "random") return MatchStrategy::Random;
    throw CliError("bad_strategy", "unknown strategy '" + s + "'");
}

struct BenchRow {
    std::string family;
    double size = 0.0;
    std::string strategy;
    long nodes = 0;
    long cuts = 0;
    int rounds = 0;
    double optimum = 0.0;
    double wall_ms = 0.0;
};

std::vector<BenchRow> run_bench() {
    std::vector<BenchRow> rows;
    for (int n = 4; n <= 12; n += 2) {
        PolyInstance inst = jeroslow_instance(n);
        BnCConfig branch;
        auto [rb, sb] = run_branch_and_cut(inst, branch);
        rows.push_back({"jeroslow", double(n), "branch", sb.nodes, sb.cuts, 0, rb.value,
                        rb.stats.wall_ms});
        BnCConfig cg;
        cg.use_branching = false;
        cg.use_cg_cuts = true;
        auto [rc, sc] = run_branch_and_cut(inst, cg);
        rows.push_back({"jeroslow", double(n), "cg", sc.nodes, sc.cuts, 0, rc.value,
                        rc.stats.wall_ms});
    }
    for (double h : {4.0, 8.0, 16.0, 32.0, 64.0}) {
        PolyInstance inst = hidden_triangle_instance(h);
        BnCConfig branch;
        auto [rb, sb] = run_branch_and_cut(inst, branch);
        rows.push_back({"triangle", h, "branch", sb.nodes, sb.cuts, 0, rb.value,
                        rb.stats.wall_ms});
        Vec cmax(inst.c.size());
        for (std::size_t i = 0; i < cmax.size(); ++i) cmax[i] = -inst.c[i];
        auto [closed, rounds] = cg_round_closure(inst.rows, cmax, inst.n, inst.d);
        rows.push_back({"triangle", h, "cg_closure", 0, long(closed.size() - inst.rows.size()),
                        rounds, rb.value, 0.0});
    }
    return rows;
}

void write_bench_artifacts(const std::vector<BenchRow>& rows, const std::string& out_flag) {
    Output csv(out_flag, "bench.csv");
    std::ostream& os = csv.stream();
    os << "family,size,strategy,nodes,cuts,rounds,optimum,wall_ms\n";
    os.precision(12);
    for (const auto& r : rows)
        os << r.family << ',' << r.size << ',' << r.strategy << ',' << r.nodes << ',' << r.cuts
           << ',' << r.rounds << ',' << r.optimum << ',' << r.wall_ms << '\n';

    // Plot data: x = size, one y column per series, NaN-free per family file.
    std::filesystem::path dir = ".";
    if (const char* env = std::getenv("MICO_OUT_DIR")) dir = env;
    if (!out_flag.empty()) dir = std::filesystem::path(out_flag).parent_path();
    for (const char* fam : {"jeroslow", "triangle"}) {
        std::ofstream dat(dir / (std::string("bench_") + fam + ".dat"));
        dat << "# size";
        std::vector<std::string> series;
        for (const auto& r : rows)
            if (r.family == fam &&
                std::find(series.begin(), series.end(), r.strategy) == series.end())
                series.push_back(r.strategy);
        for (const auto& s : series) dat << ' ' << s << "_nodes_or_rounds";
        dat << '\n';
        std::vector<double> sizes;
        for (const auto& r : rows)
            if (r.family == fam && std::find(sizes.begin(), sizes.end(), r.size) == sizes.end())
                sizes.push_back(r.size);
        for (double sz : sizes) {
            dat << sz;
            for (const auto& s : series)
                for (const auto& r : rows)
                    if (r.family == fam && r.size == sz && r.strategy == s)
                        dat << ' ' << (r.rounds > 0 ? double(r.rounds) : double(r.nodes));
            dat << '\n';
        }
    }
}

int run(int argc, char** argv) {
    CLI::App app{"mixed-integer convex optimization toolkit"};
    app.require_subcommand(1);

    std::string instance_path, strategy = "bisection", out_path;
    std::uint64_t seed = 1;
    double tol_feas = kTauFeas;
    long max_nodes = 1'000'000;
    int grid_res = 17;
    for (CLI::App* sub :
         {app.add_subcommand("feas", "delta-deep feasibility"),
          app.add_subcommand("opt", "eps-optimal mixed-integer minimization"),
          app.add_subcommand("ellipsoid", "continuous ellipsoid method (n = 0)"),
          app.add_subcommand("intopt", "exact pure-integer optimization (d = 0)"),
          app.add_subcommand("bnc", "branch and cut on a polyhedral instance"),
          app.add_subcommand("adversary", "resisting-oracle match, emits the query log"),
          app.add_subcommand("centerpoint", "approximate mixed-integer centerpoint"),
          app.add_subcommand("bench", "built-in experiment suites, CSV + plot data")}) {
        sub->add_option("--instance", instance_path, "instance file path");
        sub->add_option("--strategy", strategy, "centerpoint | bisection | random");
        sub->add_option("--seed", seed, "RNG seed");
        sub->add_option("--out", out_path, "output CSV path (default: MICO_OUT_DIR or stdout)");
        sub->add_option("--tol-feas", tol_feas, "membership tolerance override");
        sub->add_option("--max-nodes", max_nodes, "branch-and-cut node cap");
        sub->add_option("--grid-res", grid_res, "centerpoint grid resolution per axis");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }
    const std::string cmd = app.get_subcommands()[0]->get_name();

    if (cmd == "feas") {
        ParsedInstance inst = load_instance(instance_path);
        FeasibilityResult r = feasibility(inst.body, inst.params);
        Output out(out_path, "feas.csv");
        emit_result_csv(out.stream(), "FoundPoint", "NoDeepPoint", r.point, 0.0, r.stats);
    } else if (cmd == "opt") {
        ParsedInstance inst = load_instance(instance_path);
        OptimizeResult r = optimize(inst.body, inst.objective, inst.params);
        Output out(out_path, "opt.csv");
        emit_result_csv(out.stream(), "EpsOptimal", "NoDeepOptimum", r.point, r.value, r.stats);
    } else if (cmd == "ellipsoid") {
        ParsedInstance inst = load_instance(instance_path);
        OptimizeResult r = ellipsoid_continuous(inst.body, inst.objective, inst.params);
        Output out(out_path, "ellipsoid.csv");
        emit_result_csv(out.stream(), "EpsOptimal", "NoDeepOptimum", r.point, r.value, r.stats);
    } else if (cmd == "intopt") {
        ParsedInstance inst = load_instance(instance_path);
        OptimizeResult r = pure_integer_optimize(inst.body, inst.objective, inst.params);
        Output out(out_path, "intopt.csv");
        emit_result_csv(out.stream(), "Optimal", "Infeasible", r.point, r.value, r.stats);
    } else if (cmd == "bnc") {
        ParsedInstance inst = load_instance(instance_path);
        BnCConfig cfg;
        cfg.max_nodes = max_nodes;
        auto [r, s] = run_branch_and_cut(to_poly_instance(inst), cfg);
        Output out(out_path, "bnc.csv");
        std::ostream& os = out.stream();
        os << "verdict,value,point,nodes,cuts,lp_solves,proof_size,wall_ms\n";
        os.precision(12);
        os << (r.found() ? "Optimal" : "Infeasible") << ',';
        if (r.found()) os << r.value;
        os << ',' << (r.found() ? join(r.point->coords) : "") << ',' << s.nodes << ',' << s.cuts
           << ',' << s.lp_solves << ',' << s.proof_size << ',' << r.stats.wall_ms << '\n';
    } else if (cmd == "adversary") {
        ParsedInstance inst = load_instance(instance_path);
        const auto& p = inst.params;
        AdversaryState st = make_adversary(p.n, p.d, p.R, p.rho);
        run_adversary_match(st, parse_strategy(strategy), seed, st.budget() - 1);
        Output out(out_path, "adversary.csv");
        out.stream() << adversary_match_csv(st);
    } else if (cmd == "centerpoint") {
        ParsedInstance inst = load_instance(instance_path);
        CenterpointEstimate est =
            approx_centerpoint(inst.body, inst.params.n, inst.params.d, grid_res);
        Output out(out_path, "centerpoint.csv");
        std::ostream& os = out.stream();
        os << "point,h,nu,bound_times_nu,grid_res,directions\n";
        os.precision(12);
        os << join(est.point) << ',' << est.h << ',' << est.nu << ','
           << centerpoint_bound(inst.params.n, inst.params.d) * est.nu << ',' << est.grid_res
           << ',' << est.directions << '\n';
    } else {  // bench
        write_bench_artifacts(run_bench(), out_path);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    static const std::vector<std::string> kCommands = {
        "feas", "opt", "ellipsoid", "intopt", "bnc", "adversary", "centerpoint", "bench"};
    if (argc >= 2 && argv[1][0] != '-' &&
        std::find(kCommands.begin(), kCommands.end(), argv[1]) == kCommands.end()) {
        std::cerr << "unknown subcommand '" << argv[1] << "'\n"
                  << "usage: mico <feas|opt|ellipsoid|intopt|bnc|adversary|centerpoint|bench> "
                     "[--instance F] [--strategy S] [--seed N] [--out F] [--tol-feas T] "
                     "[--max-nodes N] [--grid-res G]\n";
        return 2;
    }
    try {
        return run(argc, argv);
    } catch (const CliError& e) {
        std::cerr << e.what() << '\n' << "error_code=" << e.code << '\n';
        return 1;
    } catch (const InstanceError& e) {
        std::cerr << e.what() << '\n' << "error_code=instance_error\n";
        return 1;
    } catch (const InputError& e) {
        std::cerr << e.what() << '\n' << "error_code=input_error\n";
        return 1;
    } catch (const CapabilityError& e) {
        std::cerr << e.what() << '\n' << "error_code=capability_error\n";
        return 1;
    } catch (const NumericError& e) {
        std::cerr << e.what() << '\n' << "error_code=numeric_error\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << e.what() << '\n' << "error_code=internal_error\n";
        return 1;
    }
}
