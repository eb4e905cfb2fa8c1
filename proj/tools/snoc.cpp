// snoc - modeling, design-space exploration and trace-driven simulation of
// hybrid electronic-photonic meshes with serpentine MWMR waveguides.

#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "snoc/dse.hpp"
#include "snoc/energy.hpp"
#include "snoc/error.hpp"
#include "snoc/experiment.hpp"
#include "snoc/selector.hpp"
#include "snoc/sim.hpp"
#include "snoc/traffic.hpp"

namespace fs = std::filesystem;
using namespace snoc;

namespace {

// Accepts "70mm", "0.07m" or a bare number (millimetres).
double parse_length_m(const std::string& text, const std::string& flag) {
    std::string t = text;
    double scale = 1e-3;
    if (t.size() > 2 && t.substr(t.size() - 2) == "mm") {
        t = t.substr(0, t.size() - 2);
        scale = 1e-3;
    } else if (t.size() > 1 && t.back() == 'm') {
        t = t.substr(0, t.size() - 1);
        scale = 1.0;
    }
    char* end = nullptr;
    double v = std::strtod(t.c_str(), &end);
    if (end == t.c_str() || *end != '\0' || v <= 0.0)
        throw ConfigError("flag " + flag + ": malformed length '" + text + "'");
    return v * scale;
}

struct CommonOptions {
    std::string config_path;
    std::string out_dir = "out";
    unsigned long long seed = 1;
};

struct LoadedConfig {
    KeyValueConfig raw;
    PhotonicTechParams tech;
    ElectricalCoefficients coef;
    MeshSpec mesh;
    SelectionConstraints constraints;
    CostModel cost;
    SimConfig sim;
};

LoadedConfig load_all(const CommonOptions& common) {
    LoadedConfig lc;
    if (!common.config_path.empty()) lc.raw = KeyValueConfig::from_file(common.config_path);
    lc.tech = PhotonicTechParams::from_config(lc.raw);
    lc.coef = ElectricalCoefficients::from_config(lc.raw);
    lc.mesh = MeshSpec::from_config(lc.raw);
    lc.constraints = SelectionConstraints::from_config(lc.raw);
    lc.cost = CostModel::from_config(lc.raw);
    lc.sim = SimConfig::from_config(lc.raw);
    return lc;
}

// All outputs stay inside the declared output directory; files are written
// to a temporary name and renamed into place.
void write_file(const fs::path& dir, const std::string& name, const std::string& body) {
    fs::create_directories(dir);
    fs::path tmp = dir / (name + ".tmp");
    fs::path final = dir / name;
    {
        std::ofstream os(tmp, std::ios::binary);
        if (!os) throw ConfigError("cannot write " + tmp.string());
        os << body;
    }
    fs::rename(tmp, final);
}

void add_common(CLI::App* cmd, CommonOptions& common) {
    cmd->add_option("--config", common.config_path, "configuration file (key = value sections)");
    cmd->add_option("--out", common.out_dir, "output directory");
    cmd->add_option("--seed", common.seed, "random seed for trace generation");
}

int cmd_dse(const CommonOptions& common, const std::string& length_text, int links, int stride,
            double injection, bool trend, bool compare) {
    LoadedConfig lc = load_all(common);
    DseGrid grid = DseGrid::from_config(lc.raw);
    grid.injection_rate = injection > 0 ? injection : grid.injection_rate;

    if (trend || compare) {
        std::vector<double> lengths;
        for (double l : grid.lengths_m) {
            double sites = l / (lc.tech.hop_length_m() * stride);
            if (std::abs(sites - std::round(sites)) < 1e-6 && sites >= 0.5) lengths.push_back(l);
        }
        if (trend) {
            auto rows = trend_table(lengths, links, stride, lc.tech, grid.injection_rate);
            std::ostringstream os;
            write_trend_csv(os, rows, links, stride);
            write_file(common.out_dir, "dse_trend.csv", os.str());
            std::cout << "wrote " << (fs::path(common.out_dir) / "dse_trend.csv").string() << "\n";
        }
        if (compare) {
            auto rows =
                compare_vs_electrical(lengths, links, stride, lc.tech, lc.coef, grid.injection_rate);
            std::ostringstream os;
            write_compare_csv(os, rows, links, stride);
            write_file(common.out_dir, "dse_compare.csv", os.str());
            std::cout << "wrote " << (fs::path(common.out_dir) / "dse_compare.csv").string()
                      << "\n";
        }
        return 0;
    }

    double length_m = parse_length_m(length_text, "--L");
    DseResult r = find_optimum(length_m, links, stride, lc.tech, grid.injection_rate,
                               grid.data_rates_bps);
    std::ostringstream os;
    write_dse_csv(os, {r});
    write_file(common.out_dir, "dse_point.csv", os.str());
    std::cout << "optimum at L=" << length_m * 1e3 << "mm E=" << links << " S=" << stride << ": D="
              << r.config.data_rate_per_wavelength_bps / 1e9 << " Gb/s, W=" << r.config.waveguides
              << ", " << r.breakdown.total_pj << " pJ/bit\n";
    return 0;
}

int cmd_router_sweep(const CommonOptions& common, double injection) {
    LoadedConfig lc = load_all(common);
    auto rows = sweep_router_configs(lc.coef, injection);
    std::ostringstream os;
    os << "clock_GHz,flit_bits,buffer_depth,dynamic_pJ_per_bit,leakage_pJ_per_bit,total_pJ_per_bit\n";
    for (const auto& r : rows)
        os << r.config.clock_hz / 1e9 << ',' << r.config.flit_size_bits << ','
           << r.config.buffer_depth_flits << ',' << r.dynamic_pj_per_bit << ','
           << r.leakage_pj_per_bit << ',' << r.energy_per_bit_pj << '\n';
    write_file(common.out_dir, "router_sweep.csv", os.str());
    std::cout << "wrote " << (fs::path(common.out_dir) / "router_sweep.csv").string() << "\n";
    return 0;
}

int cmd_topo(const CommonOptions& common, int snakes, int stride, int waveguides_per_snake,
             double wavelengths, double rate_gbps) {
    LoadedConfig lc = load_all(common);
    SnakeLayout layout = build_layout(lc.mesh, snakes, stride);
    nlohmann::json j = layout_to_json(layout);
    if (waveguides_per_snake > 0) {
        ResourceSummary rs = resource_summary(layout, waveguides_per_snake, wavelengths, rate_gbps);
        j["resources"] = {{"waveguides", rs.waveguides},
                          {"avg_wavelengths_per_waveguide", rs.avg_wavelengths_per_waveguide},
                          {"length_per_waveguide_m", rs.length_per_waveguide_m},
                          {"addon_routers", rs.addon_routers},
                          {"mrr_count", rs.mrr_count},
                          {"data_rate_gbps", rs.data_rate_gbps}};
    }
    write_file(common.out_dir, "layout.json", j.dump(2) + "\n");
    std::cout << "wrote " << (fs::path(common.out_dir) / "layout.json").string() << "\n";
    return 0;
}

std::vector<Packet> obtain_trace(const LoadedConfig& lc, const CommonOptions& common,
                                 const std::string& trace_path, const std::string& pattern_name,
                                 double rate, long long duration) {
    if (!trace_path.empty()) return load_trace_file(trace_path);
    if (pattern_name.empty()) throw ConfigError("either --trace or --pattern is required");
    PatternSpec spec;
    size_t dash = pattern_name.find('-');
    spec.kind = pattern_kind_from_string(
        dash == std::string::npos ? pattern_name : pattern_name.substr(0, dash));
    spec.placement = placement_from_string(
        dash == std::string::npos ? "" : pattern_name.substr(dash + 1));
    spec.injection_rate = rate;
    spec.duration_cycles = duration;
    spec.seed = common.seed;
    return generate_trace(spec, lc.mesh);
}

int cmd_select(const CommonOptions& common, int snakes, int stride, const std::string& traffic_csv,
               const std::string& trace_path, const std::string& pattern, double rate,
               long long duration) {
    LoadedConfig lc = load_all(common);
    SnakeLayout layout = build_layout(lc.mesh, snakes, stride);
    TrafficMatrix matrix;
    if (!traffic_csv.empty()) {
        std::ifstream in(traffic_csv);
        if (!in) throw ConfigError("cannot open traffic matrix: " + traffic_csv);
        matrix = TrafficMatrix::from_csv(in, lc.mesh.router_count());
    } else {
        auto trace = obtain_trace(lc, common, trace_path, pattern, rate, duration);
        matrix = trace_to_matrix(trace, lc.mesh.router_count());
    }
    LinkSelection sel = select_links(layout, matrix, lc.constraints, lc.cost);
    write_file(common.out_dir, "selection.json", sel.to_json().dump(2) + "\n");
    std::cout << "activated " << sel.links.size() << " links; wrote "
              << (fs::path(common.out_dir) / "selection.json").string() << "\n";
    return 0;
}

int cmd_sim(const CommonOptions& common, int snakes, int stride, bool baseline,
            const std::string& trace_path, const std::string& pattern, double rate,
            long long duration) {
    LoadedConfig lc = load_all(common);
    auto trace = obtain_trace(lc, common, trace_path, pattern, rate, duration);

    SnakeLayout layout = build_layout(lc.mesh, baseline ? 1 : snakes, baseline ? 1 : stride);
    LinkSelection selection;
    std::vector<PowerBreakdown> breakdowns;
    std::vector<DseResult> per_snake;
    if (!baseline) {
        int links_per_snake = lc.constraints.per_snake(layout.snake_count);
        DseResult point = find_optimum(layout.snakes.front().length_m, links_per_snake, stride,
                                       lc.tech, 0.1);
        per_snake.assign(layout.snake_count, point);
        breakdowns.assign(layout.snake_count, point.breakdown);
        TrafficMatrix matrix = trace_to_matrix(trace, lc.mesh.router_count());
        selection = select_links(layout, matrix, lc.constraints, lc.cost);
    }
    RoutingTables tables = build_routing_tables(layout, selection, lc.cost);
    SimReport report = run_simulation(layout, selection, tables, trace, lc.sim);

    RouterConfig rc = RouterConfig::for_clock(lc.sim.clock_hz, lc.coef.link_rate_bps);
    EnergyReport energy =
        account(report, layout, selection, breakdowns, lc.coef, rc, lc.sim);

    write_file(common.out_dir, "sim_report.json", report.to_json().dump(2) + "\n");
    std::ostringstream lat;
    report.latencies_to_csv(lat);
    write_file(common.out_dir, "packet_latencies.csv", lat.str());
    write_file(common.out_dir, "energy_report.json", energy.to_json().dump(2) + "\n");
    if (!selection.links.empty())
        write_file(common.out_dir, "selection.json", selection.to_json().dump(2) + "\n");
    std::cout << "simulated " << report.packets_ejected << " packets over " << report.cycles
              << " cycles; mean latency " << report.mean_latency << "\n";
    return 0;
}

int cmd_experiment(const CommonOptions& common, const std::string& variants_text,
                   const std::string& patterns_text, double rate, long long duration,
                   int workers) {
    LoadedConfig lc = load_all(common);
    ExperimentInputs inputs{lc.mesh, lc.tech, lc.coef, lc.constraints, lc.cost, lc.sim, 0.1};
    ExperimentPlan plan;
    plan.seed = common.seed;
    plan.workers = workers;
    if (!variants_text.empty() && variants_text != "all") {
        std::istringstream ss(variants_text);
        std::string item;
        while (std::getline(ss, item, ',')) {
            int k = 0, s = 0;
            if (std::sscanf(item.c_str(), "K%dS%d", &k, &s) != 2)
                throw ConfigError("bad variant '" + item + "' (expected e.g. K2S4)");
            plan.variants.push_back({k, s});
        }
    }
    if (!patterns_text.empty() && patterns_text != "all") {
        std::istringstream ss(patterns_text);
        std::string item;
        while (std::getline(ss, item, ',')) {
            PatternSpec spec;
            size_t dash = item.find('-');
            spec.kind = pattern_kind_from_string(
                dash == std::string::npos ? item : item.substr(0, dash));
            spec.placement =
                placement_from_string(dash == std::string::npos ? "" : item.substr(dash + 1));
            spec.injection_rate = rate;
            spec.duration_cycles = duration;
            spec.seed = common.seed;
            plan.patterns.push_back(spec);
        }
    } else {
        plan.patterns = standard_patterns(rate, duration, common.seed);
    }

    auto cells = run_experiment(plan, inputs);
    std::ostringstream os;
    write_experiment_csv(os, cells);
    write_file(common.out_dir, "experiment.csv", os.str());
    write_file(common.out_dir, "manifest.json",
               experiment_manifest(plan, inputs, lc.raw).dump(2) + "\n");
    int failed = 0;
    for (const auto& c : cells)
        if (!c.ok) ++failed;
    std::cout << "wrote " << (fs::path(common.out_dir) / "experiment.csv").string() << " ("
              << cells.size() << " rows, " << failed << " failed cells)\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"hybrid electronic-photonic NoC modeling and simulation toolkit"};
    app.require_subcommand(1);

    CommonOptions common;

    // dse
    auto* dse = app.add_subcommand("dse", "MWMR link design-space exploration");
    std::string dse_length = "70mm";
    int dse_links = 16, dse_stride = 1;
    double dse_injection = 0.0;
    bool dse_trend = false, dse_compare = false;
    add_common(dse, common);
    dse->add_option("--L", dse_length, "waveguide length (e.g. 70mm or 0.07m)");
    dse->add_option("--E", dse_links, "logical link count");
    dse->add_option("--S", dse_stride, "site stride");
    dse->add_option("--injection", dse_injection, "injection rate override");
    dse->add_flag("--trend", dse_trend, "optimal (D, W) per length over the grid");
    dse->add_flag("--compare-electrical", dse_compare, "photonic vs electrical chain per length");

    // router-sweep
    auto* sweep = app.add_subcommand("router-sweep", "electrical router configuration sweep");
    double sweep_injection = 0.1;
    add_common(sweep, common);
    sweep->add_option("--injection", sweep_injection, "injection rate");

    // topo
    auto* topo = app.add_subcommand("topo", "build a snake layout and export it as JSON");
    int topo_k = 1, topo_s = 1, topo_w = 0;
    double topo_wl = 0.0, topo_rate = 0.0;
    add_common(topo, common);
    topo->add_option("--K", topo_k, "snake count");
    topo->add_option("--S", topo_s, "site stride");
    topo->add_option("--waveguides", topo_w, "waveguides per snake (resource summary)");
    topo->add_option("--wavelengths", topo_wl, "wavelengths per waveguide (resource summary)");
    topo->add_option("--rate", topo_rate, "data rate per wavelength, Gb/s (resource summary)");

    // select
    auto* select = app.add_subcommand("select", "greedy logical-link selection");
    int sel_k = 1, sel_s = 1;
    std::string sel_matrix, sel_trace, sel_pattern;
    double sel_rate = 0.1;
    long long sel_duration = 2000;
    add_common(select, common);
    select->add_option("--K", sel_k, "snake count");
    select->add_option("--S", sel_s, "site stride");
    select->add_option("--traffic", sel_matrix, "traffic matrix CSV (src,dst,volume)");
    select->add_option("--trace", sel_trace, "trace file to derive the matrix from");
    select->add_option("--pattern", sel_pattern, "synthetic pattern (e.g. fcp-center)");
    select->add_option("--rate", sel_rate, "pattern injection rate");
    select->add_option("--duration", sel_duration, "pattern duration in cycles");

    // sim
    auto* sim = app.add_subcommand("sim", "trace-driven cycle simulation with energy accounting");
    int sim_k = 1, sim_s = 1;
    bool sim_baseline = false;
    std::string sim_trace, sim_pattern;
    double sim_rate = 0.1;
    long long sim_duration = 2000;
    add_common(sim, common);
    sim->add_option("--K", sim_k, "snake count");
    sim->add_option("--S", sim_s, "site stride");
    sim->add_flag("--baseline", sim_baseline, "plain electronic mesh, no photonic links");
    sim->add_option("--trace", sim_trace, "trace file");
    sim->add_option("--pattern", sim_pattern, "synthetic pattern (e.g. mfm-corner)");
    sim->add_option("--rate", sim_rate, "pattern injection rate");
    sim->add_option("--duration", sim_duration, "pattern duration in cycles");

    // experiment
    auto* exp = app.add_subcommand("experiment", "batch sweep over (K, S) variants and patterns");
    std::string exp_variants = "all", exp_patterns = "all";
    double exp_rate = 0.1;
    long long exp_duration = 2000;
    int exp_workers = 1;
    add_common(exp, common);
    exp->add_option("--variants", exp_variants, "comma list (K1S1,K2S4,...) or 'all'");
    exp->add_option("--patterns", exp_patterns, "comma list (fcp-center,...) or 'all'");
    exp->add_option("--rate", exp_rate, "pattern injection rate");
    exp->add_option("--duration", exp_duration, "pattern duration in cycles");
    exp->add_option("--workers", exp_workers, "parallel cells");

    CLI11_PARSE(app, argc, argv);

    try {
        if (dse->parsed())
            return cmd_dse(common, dse_length, dse_links, dse_stride, dse_injection, dse_trend,
                           dse_compare);
        if (sweep->parsed()) return cmd_router_sweep(common, sweep_injection);
        if (topo->parsed())
            return cmd_topo(common, topo_k, topo_s, topo_w, topo_wl, topo_rate);
        if (select->parsed())
            return cmd_select(common, sel_k, sel_s, sel_matrix, sel_trace, sel_pattern, sel_rate,
                              sel_duration);
        if (sim->parsed())
            return cmd_sim(common, sim_k, sim_s, sim_baseline, sim_trace, sim_pattern, sim_rate,
                           sim_duration);
        if (exp->parsed())
            return cmd_experiment(common, exp_variants, exp_patterns, exp_rate, exp_duration,
                                  exp_workers);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
