#include "tbmo/io.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <sstream>

namespace tbmo {

namespace {

using json = nlohmann::json;

struct Field {
    std::string_view key;
    double ModelParameters::*member;
};

constexpr Field kModelFields[] = {
    {"beta", &ModelParameters::beta},       {"mu", &ModelParameters::mu},
    {"delta", &ModelParameters::delta},     {"phi", &ModelParameters::phi},
    {"omega", &ModelParameters::omega},     {"omega_r", &ModelParameters::omega_r},
    {"sigma", &ModelParameters::sigma},     {"sigma_r", &ModelParameters::sigma_r},
    {"tau0", &ModelParameters::tau0},       {"tau1", &ModelParameters::tau1},
    {"tau2", &ModelParameters::tau2},       {"N", &ModelParameters::n},
    {"eps1", &ModelParameters::eps1},       {"eps2", &ModelParameters::eps2},
    {"horizon", &ModelParameters::horizon},
};

double read_real(const json& v, const std::string& path)
{
    if (!v.is_number()) {
        throw ConfigError(path + ": expected a number");
    }
    const double d = v.get<double>();
    if (!std::isfinite(d)) {
        throw ConfigError(path + ": must be finite");
    }
    return d;
}

std::uint64_t read_count(const json& v, const std::string& path)
{
    if (!v.is_number_unsigned()) {
        throw ConfigError(path + ": expected a nonnegative integer");
    }
    return v.get<std::uint64_t>();
}

const json& require_object(const json& v, const std::string& path)
{
    if (!v.is_object()) {
        throw ConfigError(path + ": expected an object");
    }
    return v;
}

void parse_model(const json& node, ModelParameters& p)
{
    for (const auto& [key, value] : require_object(node, "model").items()) {
        const auto* f = std::find_if(std::begin(kModelFields), std::end(kModelFields),
                                     [&](const Field& field) { return field.key == key; });
        if (f == std::end(kModelFields)) {
            throw ConfigError("model." + key + ": unknown key");
        }
        p.*(f->member) = read_real(value, "model." + key);
    }
}

void parse_solver(const json& node, RunConfig& cfg)
{
    for (const auto& [key, value] : require_object(node, "solver").items()) {
        const std::string path = "solver." + key;
        if (key == "budget") {
            cfg.solver.budget = read_count(value, path);
        } else if (key == "substeps") {
            cfg.solver.substeps = read_count(value, path);
        } else if (key == "levels") {
            cfg.levels = read_count(value, path);
        } else if (key == "weights") {
            cfg.weights = read_count(value, path);
        } else if (key == "seed") {
            cfg.seed = read_count(value, path);
        } else if (key == "constraint_tol") {
            cfg.solver.constraint_tol = read_real(value, path);
        } else if (key == "stationarity_tol") {
            cfg.solver.stationarity_tol = read_real(value, path);
        } else if (key == "chebyshev_augmentation") {
            cfg.solver.chebyshev_augmentation = read_real(value, path);
        } else {
            throw ConfigError(path + ": unknown key");
        }
    }
}

std::string write_number(double v)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::ofstream open_output(const std::filesystem::path& path)
{
    if (path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
    }
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    }
    return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path)
{
    out.flush();
    if (!out) {
        throw std::runtime_error("write to '" + path.string() + "' failed");
    }
}

void write_provenance(std::ostream& out, const Provenance& prov)
{
    for (const auto& [key, value] : prov) {
        out << "# " << key << ": " << value << '\n';
    }
}

std::vector<std::string> split(const std::string& line)
{
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, ',')) {
        cells.push_back(cell);
    }
    if (!line.empty() && line.back() == ',') {
        cells.emplace_back();
    }
    return cells;
}

} // namespace

void RunConfig::validate() const
{
    try {
        model.validate();
    } catch (const std::invalid_argument& ex) {
        std::string what = ex.what();
        constexpr std::string_view prefix = "ModelParameters.";
        if (what.rfind(prefix, 0) == 0) {
            what = "model." + what.substr(prefix.size());
        }
        throw ConfigError(what);
    }
    if (solver.budget == 0) {
        throw ConfigError("solver.budget: must be at least 1");
    }
    if (solver.substeps == 0) {
        throw ConfigError("solver.substeps: must be at least 1");
    }
    if (levels < 2) {
        throw ConfigError("solver.levels: must be at least 2");
    }
    if (weights < 2) {
        throw ConfigError("solver.weights: must be at least 2");
    }
    if (!(solver.constraint_tol > 0.0)) {
        throw ConfigError("solver.constraint_tol: must be positive");
    }
    if (!(solver.stationarity_tol > 0.0)) {
        throw ConfigError("solver.stationarity_tol: must be positive");
    }
    if (!(solver.chebyshev_augmentation >= 0.0)) {
        throw ConfigError("solver.chebyshev_augmentation: must be nonnegative");
    }
}

RunConfig parse_config(std::string_view text)
{
    RunConfig cfg;
    if (std::all_of(text.begin(), text.end(), [](unsigned char ch) { return std::isspace(ch); })) {
        return cfg;
    }
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& ex) {
        throw ConfigError(std::string("<document>: malformed JSON: ") + ex.what());
    }
    for (const auto& [key, value] : require_object(doc, "<document>").items()) {
        if (key == "model") {
            parse_model(value, cfg.model);
        } else if (key == "solver") {
            parse_solver(value, cfg);
        } else if (key == "output_dir") {
            if (!value.is_string()) {
                throw ConfigError("output_dir: expected a string");
            }
            cfg.output_dir = value.get<std::string>();
        } else {
            throw ConfigError(key + ": unknown key");
        }
    }
    cfg.validate();
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot read config '" + path.string() + "'");
    }
    std::ostringstream text;
    text << in.rdbuf();
    try {
        return parse_config(text.str());
    } catch (const ConfigError& ex) {
        throw ConfigError(path.string() + ": " + ex.what());
    }
}

std::string serialize_config(const RunConfig& cfg)
{
    json model = json::object();
    for (const Field& f : kModelFields) {
        model[std::string(f.key)] = cfg.model.*(f.member);
    }
    json doc = {
        {"model", model},
        {"solver",
         {{"budget", cfg.solver.budget},
          {"substeps", cfg.solver.substeps},
          {"levels", cfg.levels},
          {"weights", cfg.weights},
          {"seed", cfg.seed},
          {"constraint_tol", cfg.solver.constraint_tol},
          {"stationarity_tol", cfg.solver.stationarity_tol},
          {"chebyshev_augmentation", cfg.solver.chebyshev_augmentation}}},
        {"output_dir", cfg.output_dir},
    };
    return doc.dump();
}

std::filesystem::path resolve_output_dir(const RunConfig& cfg)
{
    if (!cfg.output_dir.empty()) {
        return cfg.output_dir;
    }
    if (const char* env = std::getenv(std::string(kOutputDirEnv).c_str()); env && *env) {
        return env;
    }
    return ".";
}

std::string format_number(double v) { return write_number(v); }

Provenance config_provenance(std::string_view command, const RunConfig& cfg)
{
    return {{"command", std::string(command)}, {"config", serialize_config(cfg)}};
}

void write_trajectory_csv(const Trajectory& traj, std::ostream& out, const Provenance& prov)
{
    write_provenance(out, prov);
    out << "t,S,L1,I,L2,R,u1,u2\n";
    for (std::size_t k = 0; k < traj.states.size(); ++k) {
        const StateVector& x = traj.states[k];
        const ControlValue& u = traj.control_at_node(k);
        out << write_number(traj.times[k]) << ',' << write_number(x.s) << ',' << write_number(x.l1) << ','
            << write_number(x.i) << ',' << write_number(x.l2) << ',' << write_number(x.r) << ','
            << write_number(u.u1) << ',' << write_number(u.u2) << '\n';
    }
}

void write_trajectory_csv(const Trajectory& traj, const std::filesystem::path& path, const Provenance& prov)
{
    std::ofstream out = open_output(path);
    write_trajectory_csv(traj, out, prov);
    finish(out, path);
}

void write_front_csv(const TradeoffFront& front, std::ostream& out, const Provenance& prov)
{
    Provenance all = prov;
    const FrontProvenance& fp = front.provenance;
    all.emplace_back("method", fp.method);
    all.emplace_back("levels", std::to_string(fp.levels));
    if (fp.method != "epsilon-constraint") {
        all.emplace_back("reference", write_number(fp.reference.z1) + "," + write_number(fp.reference.z2));
    }
    all.emplace_back("seed", std::to_string(fp.seed));
    const bool has_config =
        std::any_of(prov.begin(), prov.end(), [](const auto& kv) { return kv.first == "config"; });
    if (!has_config) {
        RunConfig from_front;
        from_front.model = fp.params;
        from_front.solver = fp.settings;
        from_front.levels = std::max<std::size_t>(fp.levels, 2);
        from_front.seed = fp.seed;
        all.emplace_back("config", serialize_config(from_front));
    }
    write_provenance(out, all);

    std::vector<std::size_t> order(front.points.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return front.points[a].level < front.points[b].level; });

    out << "eps,f1,f2,status,evaluations\n";
    for (std::size_t k : order) {
        const FrontPoint& p = front.points[k];
        out << write_number(p.level) << ',' << write_number(p.objectives.f1) << ',' << write_number(p.objectives.f2)
            << ',' << to_string(p.solve.status) << ',' << p.solve.evaluations << '\n';
    }
}

void write_front_csv(const TradeoffFront& front, const std::filesystem::path& path, const Provenance& prov)
{
    std::ofstream out = open_output(path);
    write_front_csv(front, out, prov);
    finish(out, path);
}

void write_comparison_csv(const ComparisonReport& report, std::ostream& out, const Provenance& prov)
{
    Provenance all = prov;
    all.emplace_back("ideal", write_number(report.ideal.f1) + "," + write_number(report.ideal.f2));
    all.emplace_back("nadir", write_number(report.nadir.f1) + "," + write_number(report.nadir.f2));
    write_provenance(out, all);
    out << "method,hypervolume,successful_solves,points,flagged\n";
    for (const MethodScore& s : report.methods) {
        out << to_string(s.method) << ',' << write_number(s.hypervolume) << ',' << s.successful_solves << ','
            << s.front.points.size() << ',' << (s.flagged ? 1 : 0) << '\n';
    }
}

std::string comparison_table(const ComparisonReport& report)
{
    std::ostringstream out;
    out << std::left << std::setw(22) << "Method" << "Hypervolume\n";
    for (const MethodScore& s : report.methods) {
        std::string name;
        switch (s.method) {
        case Method::epsilon_constraint:
            name = "epsilon-constraint";
            break;
        case Method::goal_attainment:
            name = "Goal attainment";
            break;
        case Method::chebyshev:
            name = "Chebyshev";
            break;
        }
        out << std::left << std::setw(22) << name << std::fixed << std::setprecision(5) << s.hypervolume;
        if (s.flagged) {
            out << "  (no successful solve)";
        }
        out << '\n';
    }
    return out.str();
}

std::size_t CsvTable::column(std::string_view name) const
{
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) {
        throw std::runtime_error("csv: no column '" + std::string(name) + "'");
    }
    return static_cast<std::size_t>(it - header.begin());
}

double CsvTable::number(std::size_t row, std::string_view name) const
{
    const std::string& cell = rows.at(row).at(column(name));
    double v = 0.0;
    const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (res.ec != std::errc{} || res.ptr != cell.data() + cell.size()) {
        throw std::runtime_error("csv: row " + std::to_string(row + 1) + ", column '" + std::string(name) +
                                 "': not a number: '" + cell + "'");
    }
    return v;
}

CsvTable read_csv(std::istream& in)
{
    CsvTable table;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        if (line.front() == '#') {
            const std::size_t colon = line.find(": ");
            if (colon != std::string::npos && colon > 2) {
                table.provenance.emplace_back(line.substr(2, colon - 2), line.substr(colon + 2));
            }
            continue;
        }
        std::vector<std::string> cells = split(line);
        if (table.header.empty()) {
            table.header = std::move(cells);
            continue;
        }
        if (cells.size() != table.header.size()) {
            throw std::runtime_error("csv: row " + std::to_string(table.rows.size() + 1) + " has " +
                                     std::to_string(cells.size()) + " cells, header has " +
                                     std::to_string(table.header.size()));
        }
        table.rows.push_back(std::move(cells));
    }
    if (table.header.empty()) {
        throw std::runtime_error("csv: no header line");
    }
    return table;
}

CsvTable read_csv(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot read '" + path.string() + "'");
    }
    return read_csv(in);
}

std::vector<FrontRow> read_front_csv(const std::filesystem::path& path)
{
    const CsvTable t = read_csv(path);
    const std::size_t status_col = t.column("status");
    std::vector<FrontRow> rows;
    rows.reserve(t.rows.size());
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        FrontRow row;
        row.eps = t.number(r, "eps");
        row.objectives = {t.number(r, "f1"), t.number(r, "f2")};
        row.status = status_from_string(t.rows[r][status_col]);
        row.evaluations = static_cast<std::size_t>(t.number(r, "evaluations"));
        rows.push_back(row);
    }
    return rows;
}

} // namespace tbmo
