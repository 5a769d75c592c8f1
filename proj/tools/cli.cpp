#include "cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "randflight/analytic.hpp"
#include "randflight/cf.hpp"
#include "randflight/convolution.hpp"
#include "randflight/sampler.hpp"
#include "randflight/specfun.hpp"
#include "randflight/version.hpp"

namespace randflight::cli {

using nlohmann::json;

namespace {

const std::vector<std::string> commands = {"simulate", "layers", "density", "cf", "validate"};

std::string num(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

json config_json(const RunConfig& c)
{
    json law = {{"kind", c.law}};
    if (c.law == "circular_gaussian")
        law["k"] = c.k;
    return {{"schema", 1},      {"command", c.command}, {"m", c.m},
            {"law", law},       {"lambda", c.lambda},   {"c", c.c},
            {"t", c.t},         {"K", c.K},             {"nr", c.nr},
            {"ntheta", c.ntheta}, {"n", c.n_samples},   {"seed", c.seed},
            {"out", c.out},     {"format", c.format},   {"suite", c.suite},
            {"alpha", c.alpha}};
}

void apply_file(RunConfig& c, const std::string& path, const CLI::App& app)
{
    std::ifstream in(path);
    if (!in)
        throw UsageError("cannot open config file " + path);
    json j;
    try
    {
        in >> j;
    }
    catch (const json::exception& e)
    {
        throw UsageError("config file is not valid JSON: " + std::string(e.what()));
    }
    if (!j.is_object() || j.value("schema", 0) != 1)
        throw UsageError("config file must be an object with \"schema\": 1");
    auto take = [&](const char* key, const char* flag, auto& field) {
        if (j.contains(key) && app.count(flag) == 0)
            field = j.at(key).get<std::decay_t<decltype(field)>>();
    };
    try
    {
        if (j.contains("command") && c.command.empty())
            c.command = j.at("command").get<std::string>();
        take("m", "--m", c.m);
        take("lambda", "--lambda", c.lambda);
        take("c", "--c", c.c);
        take("t", "--t", c.t);
        take("K", "--K", c.K);
        take("nr", "--nr", c.nr);
        take("ntheta", "--ntheta", c.ntheta);
        take("n", "--n", c.n_samples);
        take("seed", "--seed", c.seed);
        take("out", "--out", c.out);
        take("format", "--format", c.format);
        take("threads", "--threads", c.threads);
        take("suite", "--suite", c.suite);
        take("alpha", "--alpha", c.alpha);
        if (j.contains("law") && app.count("--law") == 0)
        {
            const json& law = j.at("law");
            c.law = law.at("kind").get<std::string>();
            if (law.contains("k") && app.count("--k") == 0)
                c.k = law.at("k").get<double>();
        }
    }
    catch (const json::exception& e)
    {
        throw UsageError("bad config field: " + std::string(e.what()));
    }
}

FlightParams make_params(const RunConfig& c)
{
    return FlightParams(c.m, c.c, c.lambda);
}

DissipationLaw make_law(const RunConfig& c)
{
    if (c.law == "uniform")
        return DissipationLaw::uniform(c.m);
    return DissipationLaw::circular_gaussian(c.k);
}

LayerGrid make_grid(const RunConfig& c, const FlightParams& params)
{
    if (c.ntheta > 0)
        return PolarGrid::clustered(params, c.t, static_cast<std::size_t>(c.nr),
                                    static_cast<std::size_t>(c.ntheta));
    return RadialGrid::clustered(params, c.t, static_cast<std::size_t>(c.nr));
}

unsigned worker_count(const RunConfig& c)
{
    return c.threads > 0 ? c.threads : default_threads();
}

// Table of rows written as CSV or a JSON array of objects.
struct Table
{
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    void write(const std::string& path, const std::string& format) const
    {
        std::ofstream out(path, std::ios::binary);
        if (!out)
            throw UsageError("cannot write " + path);
        if (format == "json")
        {
            json arr = json::array();
            for (const auto& row : rows)
            {
                json obj;
                for (std::size_t k = 0; k < columns.size(); ++k)
                    obj[columns[k]] = row[k];
                arr.push_back(obj);
            }
            out << arr.dump(1) << '\n';
            return;
        }
        for (std::size_t k = 0; k < columns.size(); ++k)
            out << (k ? "," : "") << columns[k];
        out << "\r\n";
        for (const auto& row : rows)
        {
            for (std::size_t k = 0; k < row.size(); ++k)
                out << (k ? "," : "") << num(row[k]);
            out << "\r\n";
        }
    }
};

void write_sidecar(const RunConfig& c, json extra, double seconds)
{
    json meta = {{"schema", 1},
                 {"version", randflight::version},
                 {"config", config_json(c)},
                 {"seed", c.seed},
                 {"threads", worker_count(c)},
                 {"wall_time_s", seconds}};
    meta.update(extra);
    std::ofstream out(c.out + ".meta.json", std::ios::binary);
    if (!out)
        throw UsageError("cannot write " + c.out + ".meta.json");
    out << meta.dump(2) << '\n';
}

json mass_summary(const DensityField& field)
{
    json masses = json::array();
    for (const auto& layer : field.layers())
        masses.push_back(layer.mass());
    return {{"singular_weight", field.singular_weight()},
            {"layer_masses", masses},
            {"tail_mass", field.tail_mass()},
            {"total_mass", field.total_mass()}};
}

//---------------------------------------------------------------------------//

json run_simulate(const RunConfig& c, Table& table)
{
    const FlightParams params = make_params(c);
    const DissipationLaw law = make_law(c);
    const std::size_t sectors = c.ntheta > 0 ? static_cast<std::size_t>(c.ntheta) : 1;
    const BinLayout bins =
        BinLayout::equal_width(params.radius(c.t), static_cast<std::size_t>(c.nr), sectors);
    const DensityEstimate est = estimate_density(params, law, c.t, c.n_samples, bins,
                                                 Conditioning::all(), c.seed, worker_count(c));
    table.columns = {"r_lo", "r_hi"};
    if (sectors > 1)
        table.columns.push_back("theta");
    for (const char* col : {"density", "std_error", "count"})
        table.columns.push_back(col);
    for (std::size_t i = 0; i < bins.n_rings(); ++i)
        for (std::size_t j = 0; j < sectors; ++j)
        {
            std::vector<double> row = {bins.r_edges[i], bins.r_edges[i + 1]};
            if (sectors > 1)
                row.push_back(bins.sector_center(j));
            const std::size_t k = i * sectors + j;
            row.push_back(est.values[k]);
            row.push_back(est.standard_errors[k]);
            row.push_back(static_cast<double>(est.counts[k]));
            table.rows.push_back(std::move(row));
        }
    return {{"samples", est.n_samples},
            {"event_counts", est.event_histogram},
            {"mass",
             {{"singular_weight", poisson_weight(0, params, c.t)},
              {"zero_event_fraction", est.boundary_fraction()}}},
            {"mean_position", est.mean_position},
            {"max_radius_ratio", est.max_radius_ratio}};
}

json run_field(const RunConfig& c, Table& table, bool per_layer)
{
    const FlightParams params = make_params(c);
    const DissipationLaw law = make_law(c);
    const LayerGrid grid = make_grid(c, params);
    ConvolutionOptions options;
    options.threads = worker_count(c);
    const DensityField field = transition_density(params, law, c.t, c.K, grid, options);
    const RadialGrid& radial = radial_part(grid);
    const std::size_t n_theta = angular_size(grid);
    const bool polar = std::holds_alternative<PolarGrid>(grid);
    table.columns.clear();
    if (per_layer)
        table.columns.push_back("n");
    table.columns.push_back("r");
    if (polar)
        table.columns.push_back("theta");
    table.columns.push_back(per_layer ? "value" : "p_ac");
    const std::vector<double> total = field.ac_values();
    auto emit = [&](double n, std::size_t i, std::size_t j, double v) {
        std::vector<double> row;
        if (per_layer)
            row.push_back(n);
        row.push_back(radial[i]);
        if (polar)
            row.push_back(grid_theta(grid, j));
        row.push_back(v);
        table.rows.push_back(std::move(row));
    };
    for (std::size_t i = 0; i < radial.size(); ++i)
        for (std::size_t j = 0; j < n_theta; ++j)
        {
            if (!per_layer)
                emit(0, i, j, total[i * n_theta + j]);
            else
                for (const auto& layer : field.layers())
                    emit(layer.index(), i, j, layer.value(i, j));
        }
    return {{"mass", mass_summary(field)}};
}

json run_cf(const RunConfig& c, Table& table)
{
    const FlightParams params = make_params(c);
    const DissipationLaw law = make_law(c);
    std::vector<double> alpha = c.alpha;
    if (alpha.empty())
    {
        alpha.assign(static_cast<std::size_t>(c.m), 0.0);
        alpha[0] = 1;
    }
    if (alpha.size() != static_cast<std::size_t>(c.m))
        throw UsageError("--alpha needs exactly m components");
    constexpr std::size_t steps = 1024;
    const auto ladders = jn_ladders(params, law, alpha, c.t, steps, c.K);
    const CFLadder g = volterra_solve(params, law, alpha, c.t, steps);
    table.columns = {"quantity", "n", "re", "im"};
    // quantity codes: 0 psi, 1 series term, 2 series sum, 3 volterra
    const Complex p = psi(params, law, alpha, c.t);
    table.rows.push_back({0, 0, p.real(), p.imag()});
    double weight = std::exp(-params.rate() * c.t);
    for (std::size_t n = 0; n < ladders.size(); ++n)
    {
        const Complex term = weight * ladders[n].values[steps];
        table.rows.push_back({1, static_cast<double>(n), term.real(), term.imag()});
        weight *= params.rate();
    }
    const Complex series = cf_series(params, ladders, steps);
    table.rows.push_back({2, static_cast<double>(c.K), series.real(), series.imag()});
    table.rows.push_back({3, 0, g.values[steps].real(), g.values[steps].imag()});
    return {{"quantity_codes", {"psi", "series_term", "series_sum", "volterra"}},
            {"alpha", alpha},
            {"mass",
             {{"singular_weight", poisson_weight(0, params, c.t)},
              {"tail_mass", tail_mass(c.K, params, c.t)}}}};
}

//---------------------------------------------------------------------------//

struct Check
{
    std::string name;
    bool pass;
    std::string detail;
};

using Suite = std::function<void(const RunConfig&, std::vector<Check>&)>;

void suite_core(const RunConfig& c, std::vector<Check>& out)
{
    const FlightParams params(c.m, 1, 1);
    double worst = 0;
    for (int K = 0; K <= 50; ++K)
    {
        double sum = tail_mass(K, params, 1);
        for (int n = 0; n <= K; ++n)
            sum += poisson_weight(n, params, 1);
        worst = std::max(worst, std::abs(sum - 1));
    }
    out.push_back({"core.poisson_partition", worst < 1e-13, "max defect " + num(worst)});
}

void suite_specfun(const RunConfig&, std::vector<Check>& out)
{
    double worst = 0;
    for (int i = 0; i < 10; ++i)
    {
        const double z = 0.1 * i;
        worst = std::max(worst, std::abs(gauss_2f1(0.5, 1, 1, z) * std::sqrt(1 - z) - 1));
    }
    out.push_back({"specfun.2f1_identity", worst < 1e-10, "max defect " + num(worst)});
    double jw = 0;
    const GaussLegendre rule(32);
    for (double x = 0; x <= 20; x += 0.5)
    {
        auto f = [&](double p) { return std::cos(x * std::sin(p)); };
        const double q = rule.integrate_composite(f, 0, std::numbers::pi, 16) / std::numbers::pi;
        jw = std::max(jw, std::abs(q - bessel_j0(x)));
    }
    out.push_back({"specfun.j0_integral", jw < 1e-8, "max defect " + num(jw)});
}

void suite_analytic(const RunConfig& c, std::vector<Check>& out)
{
    const FlightParams params(c.m, 1, 1);
    const TanhSinh rule(6);
    auto f = [&](double r) {
        return f1_symmetric(params, r, 1) * unit_sphere_area(c.m) * std::pow(r, c.m - 1);
    };
    const double mass = rule.integrate(f, 0.0, 1.0);
    const double err = std::abs(mass - poisson_weight(1, params, 1));
    out.push_back({"analytic.f1_mass", err < 1e-6, "defect " + num(err)});
}

void suite_convolution(const RunConfig& c, std::vector<Check>& out)
{
    const FlightParams params(c.m, 1, 1);
    const DissipationLaw law = DissipationLaw::uniform(c.m);
    const LayerGrid grid = RadialGrid::clustered(params, 1, 48);
    ConvolutionOptions options;
    options.threads = worker_count(c);
    const DensityField field = transition_density(params, law, 1, 6, grid, options);
    double worst = 0;
    for (const auto& layer : field.layers())
        worst = std::max(worst, std::abs(layer.mass() - poisson_weight(layer.index(), params, 1)));
    out.push_back({"convolution.mass_cascade", worst < 1e-3, "max defect " + num(worst)});
    const double total = std::abs(field.total_mass() - 1);
    out.push_back({"convolution.total_mass", total < 2e-3, "defect " + num(total)});
}

void suite_sampler(const RunConfig& c, std::vector<Check>& out)
{
    const FlightParams params(c.m, 1, 1);
    const DissipationLaw law = DissipationLaw::uniform(c.m);
    const std::uint64_t n = 200000;
    const DensityEstimate est = estimate_density(params, law, 1, n, BinLayout::equal_width(1, 8),
                                                 Conditioning::all(), c.seed, worker_count(c));
    const double p = std::exp(-1.0);
    const double sigma = std::sqrt(p * (1 - p) / static_cast<double>(n));
    const double dev = std::abs(est.boundary_fraction() - p);
    out.push_back({"sampler.zero_event_fraction", dev < 4 * sigma,
                   num(dev / sigma) + " sigma"});
    out.push_back({"sampler.support", est.max_radius_ratio <= 1 + 1e-12,
                   "max |X|/ct " + num(est.max_radius_ratio)});
}

void suite_cf(const RunConfig& c, std::vector<Check>& out)
{
    const FlightParams params(c.m, 1, 1);
    const DissipationLaw law = DissipationLaw::uniform(c.m);
    std::vector<double> alpha(static_cast<std::size_t>(c.m), 0.0);
    alpha[0] = 1;
    const auto ladders = jn_ladders(params, law, alpha, 1, 1024, 12);
    const CFLadder g = volterra_solve(params, law, alpha, 1, 1024);
    const double diff = std::abs(cf_series(params, ladders, 1024) - g.values[1024]);
    const double bound = 1e-6 + tail_mass(12, params, 1);
    out.push_back({"cf.volterra_series", diff <= bound, "difference " + num(diff)});
    std::vector<double> zero(static_cast<std::size_t>(c.m), 0.0);
    const CFLadder g0 = volterra_solve(params, law, zero, 1, 256);
    double worst = 0;
    for (const Complex& v : g0.values)
        worst = std::max(worst, std::abs(v - 1.0));
    out.push_back({"cf.total_probability", worst < 1e-12, "max defect " + num(worst)});
}

std::vector<Check> run_suites(const RunConfig& c)
{
    const std::vector<std::pair<std::string, Suite>> suites = {
        {"core", suite_core},           {"specfun", suite_specfun},
        {"analytic", suite_analytic},   {"convolution", suite_convolution},
        {"sampler", suite_sampler},     {"cf", suite_cf}};
    std::vector<Check> checks;
    bool found = false;
    for (const auto& [name, suite] : suites)
        if (c.suite == "all" || c.suite == name)
        {
            found = true;
            suite(c, checks);
        }
    if (!found)
        throw UsageError("unknown suite " + c.suite);
    return checks;
}

} // namespace

//---------------------------------------------------------------------------//

RunConfig parse_args(int argc, const char* const* argv)
{
    RunConfig c;
    CLI::App app{"Transition densities of Markov random flights", "randflight"};
    std::string config_path;
    app.add_option("command", c.command, "simulate | layers | density | cf | validate")
        ->check(CLI::IsMember(commands));
    app.add_option("--config", config_path, "JSON run config (\"schema\": 1)");
    app.add_option("--m", c.m, "dimension");
    app.add_option("--law", c.law, "uniform | circular_gaussian")
        ->check(CLI::IsMember({"uniform", "circular_gaussian"}));
    app.add_option("--k", c.k, "circular Gaussian concentration");
    app.add_option("--lambda", c.lambda, "switching rate");
    app.add_option("--c", c.c, "speed");
    app.add_option("--t", c.t, "time");
    app.add_option("--K", c.K, "number of layers");
    app.add_option("--nr", c.nr, "radial nodes or bins");
    app.add_option("--ntheta", c.ntheta, "angular nodes or sectors (planar, 0 = radial)");
    app.add_option("--n", c.n_samples, "Monte Carlo samples");
    app.add_option("--seed", c.seed, "random seed");
    app.add_option("--out", c.out, "output file");
    app.add_option("--format", c.format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--threads", c.threads, "worker count (default: RANDFLIGHT_THREADS or all)");
    app.add_option("--suite", c.suite, "validation suite or all");
    app.add_option("--alpha", c.alpha, "CF argument components");
    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::CallForHelp&)
    {
        throw HelpRequested(app.help());
    }
    catch (const CLI::ParseError& e)
    {
        throw UsageError(e.what());
    }
    if (!config_path.empty())
        apply_file(c, config_path, app);
    validate_config(c);
    return c;
}

void validate_config(const RunConfig& c)
{
    if (std::find(commands.begin(), commands.end(), c.command) == commands.end())
        throw UsageError("missing or unknown command");
    if (c.m < 2)
        throw UsageError("--m must be at least 2");
    if (!(c.lambda > 0) || !(c.c > 0) || !(c.t > 0))
        throw UsageError("--lambda, --c and --t must be positive");
    if (c.law != "uniform" && c.law != "circular_gaussian")
        throw UsageError("unknown law " + c.law);
    if (c.law == "circular_gaussian" && c.m != 2)
        throw UsageError("the circular Gaussian law is planar (--m 2)");
    if (c.K < 1 || c.nr < 2 || c.ntheta < 0)
        throw UsageError("--K and --nr must be positive");
    if (c.ntheta > 0 && c.m != 2)
        throw UsageError("--ntheta needs --m 2");
    if (c.format != "csv" && c.format != "json")
        throw UsageError("--format must be csv or json");
    if (c.command != "validate" && c.out.empty())
        throw UsageError("--out is required");
    if (c.command == "simulate" && c.n_samples < 10000)
        throw UsageError("--n must be at least 10000");
}

int run(const RunConfig& config, std::ostream& log)
{
    RunConfig c = config;
    if (c.law == "circular_gaussian" && c.ntheta == 0 && c.command != "simulate")
        c.ntheta = 32;
    const auto start = std::chrono::steady_clock::now();
    auto elapsed = [&] {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    };
    if (c.command == "validate")
    {
        const auto checks = run_suites(c);
        bool all = true;
        json results = json::array();
        for (const auto& chk : checks)
        {
            log << (chk.pass ? "PASS  " : "FAIL  ") << chk.name << "  " << chk.detail << '\n';
            all = all && chk.pass;
            results.push_back({{"name", chk.name}, {"pass", chk.pass}, {"detail", chk.detail}});
        }
        if (!c.out.empty())
        {
            std::ofstream(c.out, std::ios::binary) << results.dump(2) << '\n';
            write_sidecar(c, {{"all_pass", all}}, elapsed());
        }
        return all ? exit_ok : exit_failed;
    }
    Table table;
    json extra;
    if (c.command == "simulate")
        extra = run_simulate(c, table);
    else if (c.command == "layers")
        extra = run_field(c, table, true);
    else if (c.command == "density")
        extra = run_field(c, table, false);
    else
        extra = run_cf(c, table);
    table.write(c.out, c.format);
    write_sidecar(c, extra, elapsed());
    log << "wrote " << c.out << " (" << table.rows.size() << " rows)\n";
    return exit_ok;
}

int main_entry(int argc, const char* const* argv, std::ostream& log, std::ostream& err)
{
    try
    {
        return run(parse_args(argc, argv), log);
    }
    catch (const HelpRequested& e)
    {
        log << e.what();
        return exit_ok;
    }
    catch (const UsageError& e)
    {
        err << e.what() << '\n';
        return exit_usage;
    }
    catch (const NumericError& e)
    {
        err << "numeric failure: " << e.what() << '\n';
        return exit_numeric;
    }
    catch (const std::domain_error& e)
    {
        err << "invalid input: " << e.what() << '\n';
        return exit_usage;
    }
    catch (const std::invalid_argument& e)
    {
        err << "invalid input: " << e.what() << '\n';
        return exit_usage;
    }
    catch (const std::exception& e)
    {
        err << "error: " << e.what() << '\n';
        return exit_numeric;
    }
}

} // namespace randflight::cli
