#include "tbmo/io.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <sstream>

using namespace tbmo;

namespace {

struct ModelFlag {
    const char* flag;
    double ModelParameters::*member;
    const char* help;
};

constexpr ModelFlag kModelFlags[] = {
    {"--beta", &ModelParameters::beta, "transmission coefficient"},
    {"--mu", &ModelParameters::mu, "birth and death rate"},
    {"--delta", &ModelParameters::delta, "rate of leaving early latency"},
    {"--phi", &ModelParameters::phi, "proportion of L1 progressing to I"},
    {"--omega", &ModelParameters::omega, "endogenous reactivation of L2"},
    {"--omega-r", &ModelParameters::omega_r, "endogenous reactivation of R"},
    {"--sigma", &ModelParameters::sigma, "reinfection factor for L2"},
    {"--sigma-r", &ModelParameters::sigma_r, "reinfection factor for R"},
    {"--tau0", &ModelParameters::tau0, "treatment recovery rate of I"},
    {"--tau1", &ModelParameters::tau1, "treatment recovery rate of L1"},
    {"--tau2", &ModelParameters::tau2, "treatment recovery rate of L2"},
    {"-N,--population", &ModelParameters::n, "total population"},
    {"--eps1", &ModelParameters::eps1, "efficacy of u1"},
    {"--eps2", &ModelParameters::eps2, "efficacy of u2"},
    {"--horizon", &ModelParameters::horizon, "time horizon T in years"},
};

/// Command-line values; unset ones leave the loaded config untouched.
struct Overrides {
    std::string config_path;
    std::vector<std::pair<double ModelParameters::*, double>> model;
    std::optional<std::size_t> budget;
    std::optional<std::size_t> substeps;
    std::optional<std::size_t> levels;
    std::optional<std::size_t> weights;
    std::optional<std::uint64_t> seed;
    std::optional<double> constraint_tol;
    std::optional<double> stationarity_tol;
    std::optional<double> chebyshev_augmentation;
    std::optional<std::string> output_dir;
};

void add_common(CLI::App* cmd, Overrides& o)
{
    cmd->add_option("--config", o.config_path, "JSON run configuration");
    for (const ModelFlag& f : kModelFlags) {
        cmd->add_option_function<double>(
            f.flag, [&o, member = f.member](double v) { o.model.emplace_back(member, v); }, f.help);
    }
    cmd->add_option("--budget", o.budget, "evaluation budget per solve");
    cmd->add_option("--substeps", o.substeps, "RK4 steps per control interval");
    cmd->add_option("--levels", o.levels, "eps levels of a ladder, or weight vectors of a weighted front");
    cmd->add_option("--weights", o.weights, "weight vectors of the weight-based methods in compare");
    cmd->add_option("--seed", o.seed, "recorded in every output file");
    cmd->add_option("--constraint-tol", o.constraint_tol, "constraint tolerance");
    cmd->add_option("--stationarity-tol", o.stationarity_tol, "projected-gradient tolerance");
    cmd->add_option("--chebyshev-augmentation", o.chebyshev_augmentation, "augmentation of the Chebyshev method");
    cmd->add_option("-o,--output-dir", o.output_dir, "output directory (default: $TBMO_OUTPUT_DIR, then .)");
}

RunConfig build_config(const Overrides& o)
{
    RunConfig cfg = o.config_path.empty() ? RunConfig{} : load_config(o.config_path);
    for (const auto& [member, value] : o.model) {
        cfg.model.*member = value;
    }
    if (o.budget) cfg.solver.budget = *o.budget;
    if (o.substeps) cfg.solver.substeps = *o.substeps;
    if (o.levels) cfg.levels = *o.levels;
    if (o.weights) cfg.weights = *o.weights;
    if (o.seed) cfg.seed = *o.seed;
    if (o.constraint_tol) cfg.solver.constraint_tol = *o.constraint_tol;
    if (o.stationarity_tol) cfg.solver.stationarity_tol = *o.stationarity_tol;
    if (o.chebyshev_augmentation) cfg.solver.chebyshev_augmentation = *o.chebyshev_augmentation;
    if (o.output_dir) cfg.output_dir = *o.output_dir;
    cfg.validate();
    return cfg;
}

std::string value_tag(double v)
{
    std::string s = format_number(v);
    for (char& ch : s) {
        if (ch == '.') {
            ch = 'p';
        }
    }
    return s;
}

std::filesystem::path output_file(const RunConfig& cfg, const std::string& name)
{
    return resolve_output_dir(cfg) / name;
}

void report_written(const std::filesystem::path& path) { std::cout << "wrote " << path.string() << '\n'; }

int run_simulate(const RunConfig& cfg, double u1, double u2, const std::string& name)
{
    const ControlSchedule schedule = ControlSchedule::constant(cfg.model.horizon, {u1, u2});
    const Trajectory traj = simulate(cfg.model, schedule, cfg.solver.substeps);
    Provenance prov = config_provenance("simulate", cfg);
    prov.emplace_back("controls", format_number(u1) + "," + format_number(u2));
    prov.emplace_back("f1", format_number(eval_f1(traj)));
    prov.emplace_back("f2", format_number(eval_f2(schedule)));
    const auto path = output_file(cfg, name);
    write_trajectory_csv(traj, path, prov);
    report_written(path);
    return 0;
}

int run_front(const RunConfig& cfg, const std::string& method_name, const std::string& name)
{
    const Method method = method_from_string(method_name);
    TradeoffFront front = method_front(cfg.model, method, cfg.levels, cfg.solver);
    front.provenance.seed = cfg.seed;
    const auto path = output_file(cfg, name.empty() ? "front_" + std::string(to_string(method)) + ".csv" : name);
    write_front_csv(front, path, config_provenance("front --method " + std::string(to_string(method)), cfg));
    report_written(path);
    std::size_t failed = 0;
    for (const FrontPoint& p : front.points) {
        failed += p.error.empty() ? 0 : 1;
    }
    if (failed != 0) {
        std::cerr << "tbmo: " << failed << " of " << front.points.size() << " solves failed\n";
    }
    return 0;
}

std::vector<double> default_axis_values(SweepAxis axis)
{
    switch (axis) {
    case SweepAxis::beta:
        return {75.0, 100.0, 150.0, 175.0};
    case SweepAxis::n:
        return {30000.0, 40000.0, 60000.0};
    case SweepAxis::eps1:
    case SweepAxis::eps2:
        return {0.25, 0.5, 0.75};
    case SweepAxis::method:
        break;
    }
    throw std::invalid_argument("sweep: the method axis is covered by 'compare'");
}

int run_sweep_command(const RunConfig& cfg, const std::string& axis_name, std::vector<double> values,
                      bool trajectories)
{
    SweepSpec spec;
    spec.axis = axis_from_string(axis_name);
    spec.values = values.empty() ? default_axis_values(spec.axis) : std::move(values);
    spec.base = cfg.model;
    spec.levels = cfg.levels;
    spec.solver = cfg.solver;
    spec.seed = cfg.seed;
    const std::string axis(to_string(spec.axis));
    const Provenance prov = config_provenance("sweep --axis " + axis, cfg);

    std::ostringstream reps;
    reps << "# command: sweep --axis " << axis << '\n'
         << "# config: " << serialize_config(cfg) << '\n'
         << "value,level,f1,f2,status\n";
    int status = 0;
    for (const SweepResult& r : run_sweep(spec)) {
        if (!r.error.empty()) {
            std::cerr << "tbmo: " << axis << " = " << format_number(r.value) << ": " << r.error << '\n';
            status = 1;
            continue;
        }
        const std::string tag = "sweep_" + axis + "_" + value_tag(r.value);
        Provenance value_prov = prov;
        value_prov.emplace_back(axis, format_number(r.value));
        const auto path = output_file(cfg, tag + ".csv");
        write_front_csv(r.front, path, value_prov);
        report_written(path);

        const std::vector<FrontPoint> picks = representative_solutions(r.front);
        for (std::size_t k = 0; k < picks.size(); ++k) {
            const FrontPoint& p = picks[k];
            reps << format_number(r.value) << ',' << format_number(kRepresentativeLevels[k]) << ','
                 << format_number(p.objectives.f1) << ',' << format_number(p.objectives.f2) << ','
                 << to_string(p.solve.status) << '\n';
            if (trajectories) {
                const Trajectory traj = simulate(r.front.provenance.params, p.schedule, cfg.solver.substeps);
                Provenance tp = value_prov;
                tp.emplace_back("representative_level", format_number(kRepresentativeLevels[k]));
                const auto tpath = output_file(cfg, tag + "_f2_" + value_tag(kRepresentativeLevels[k]) + ".csv");
                write_trajectory_csv(traj, tpath, tp);
                report_written(tpath);
            }
        }
    }
    const auto rpath = output_file(cfg, "sweep_" + axis + "_representatives.csv");
    std::filesystem::create_directories(rpath.parent_path());
    std::ofstream out(rpath);
    out << reps.str();
    if (!out) {
        throw std::runtime_error("write to '" + rpath.string() + "' failed");
    }
    report_written(rpath);
    return status;
}

int run_compare(const RunConfig& cfg)
{
    const ComparisonReport report = compare_methods(cfg.model, cfg.weights, cfg.levels, cfg.solver);
    const Provenance prov = config_provenance("compare", cfg);
    for (const MethodScore& s : report.methods) {
        TradeoffFront front = s.front;
        front.provenance.seed = cfg.seed;
        const auto path = output_file(cfg, "compare_" + std::string(to_string(s.method)) + ".csv");
        write_front_csv(front, path, prov);
    }
    const auto path = output_file(cfg, "compare_hypervolume.csv");
    std::ofstream out(path);
    write_comparison_csv(report, out, prov);
    if (!out) {
        throw std::runtime_error("write to '" + path.string() + "' failed");
    }
    std::cout << comparison_table(report);
    return 0;
}

int run_hv(const std::string& front_path, const std::vector<double>& ref)
{
    std::vector<ObjectivePoint> pts;
    for (const FrontRow& row : read_front_csv(front_path)) {
        if (row.status != SolveStatus::infeasible) {
            pts.push_back(row.objectives);
        }
    }
    const double hv = hypervolume_2d(pts, {ref.at(0), ref.at(1)});
    std::cout << format_number(hv) << '\n';
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Multiobjective optimal control of a tuberculosis model"};
    app.require_subcommand(1);

    Overrides o;

    auto* sim = app.add_subcommand("simulate", "integrate one constant-control trajectory");
    add_common(sim, o);
    double u1 = 0.0;
    double u2 = 0.0;
    std::string sim_name = "trajectory.csv";
    sim->add_option("--u1", u1, "constant u1 in [0,1]")->check(CLI::Range(0.0, 1.0));
    sim->add_option("--u2", u2, "constant u2 in [0,1]")->check(CLI::Range(0.0, 1.0));
    sim->add_option("--name", sim_name, "output file name");

    auto* front = app.add_subcommand("front", "trade-off front of one method (eps ladder by default)");
    add_common(front, o);
    std::string method = "epsilon-constraint";
    std::string front_name;
    front->add_option("--method", method, "epsilon-constraint, goal-attainment or chebyshev")
        ->check(CLI::IsMember({"epsilon-constraint", "goal-attainment", "chebyshev"}));
    front->add_option("--name", front_name, "output file name");

    auto* sweep = app.add_subcommand("sweep", "eps ladders across one parameter");
    add_common(sweep, o);
    std::string axis;
    std::vector<double> values;
    bool trajectories = false;
    sweep->add_option("--axis", axis, "beta, N, eps1 or eps2")
        ->required()
        ->check(CLI::IsMember({"beta", "N", "eps1", "eps2"}));
    sweep->add_option("--values", values, "axis values (default: the tabulated ones)")->delimiter(',');
    sweep->add_flag("--trajectories", trajectories, "also write the representative trajectories");

    auto* compare = app.add_subcommand("compare", "hypervolume comparison of the three methods");
    add_common(compare, o);

    auto* hv = app.add_subcommand("hv", "hypervolume of a front CSV");
    add_common(hv, o);
    std::string hv_front;
    std::vector<double> hv_ref;
    hv->add_option("front", hv_front, "front CSV")->required();
    hv->add_option("--ref", hv_ref, "reference point f1,f2")->required()->delimiter(',')->expected(2);

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
        const RunConfig cfg = build_config(o);
        if (*sim) {
            return run_simulate(cfg, u1, u2, sim_name);
        }
        if (*front) {
            return run_front(cfg, method, front_name);
        }
        if (*sweep) {
            return run_sweep_command(cfg, axis, values, trajectories);
        }
        if (*compare) {
            return run_compare(cfg);
        }
        return run_hv(hv_front, hv_ref);
    } catch (const std::exception& ex) {
        std::cerr << "tbmo: " << ex.what() << '\n';
        return 1;
    }
}
