#include "snoc/experiment.hpp"

#include <future>
#include <iomanip>
#include <sstream>

#include "snoc/error.hpp"

namespace snoc {

std::vector<ExperimentVariant> standard_variants() {
    return {{1, 1}, {1, 2}, {1, 4}, {1, 8}, {2, 1}, {2, 2}, {2, 4},
            {2, 8}, {4, 1}, {4, 2}, {4, 4}, {8, 1}, {8, 2}, {8, 4}};
}

std::vector<PatternSpec> standard_patterns(double injection_rate, long long duration,
                                           unsigned long long seed) {
    std::vector<PatternSpec> out;
    auto make = [&](PatternKind kind, Placement placement) {
        PatternSpec s;
        s.kind = kind;
        s.placement = placement;
        s.injection_rate = injection_rate;
        s.duration_cycles = duration;
        s.seed = seed;
        return s;
    };
    out.push_back(make(PatternKind::Fcp, Placement::Side));
    out.push_back(make(PatternKind::Fcp, Placement::Center));
    out.push_back(make(PatternKind::Mfm, Placement::Side));
    out.push_back(make(PatternKind::Mfm, Placement::Center));
    out.push_back(make(PatternKind::Mfm, Placement::Corner));
    return out;
}

void ExperimentPlan::validate(const MeshSpec& mesh, const SelectionConstraints& constraints) const {
    for (const auto& v : variants) {
        build_layout(mesh, v.snakes, v.stride); // throws when infeasible
        constraints.validate(v.snakes);
    }
    for (const auto& p : patterns) p.validate(mesh);
    if (workers < 1) throw ConfigError("worker count must be >= 1");
}

namespace {

struct BaselineResult {
    SimReport report;
    EnergyReport energy;
};

BaselineResult run_baseline(const std::vector<Packet>& trace, const ExperimentInputs& in) {
    SnakeLayout layout = build_layout(in.mesh, 1, 1);
    LinkSelection empty;
    RoutingTables tables = build_routing_tables(layout, empty, in.cost);
    BaselineResult r;
    r.report = run_simulation(layout, empty, tables, trace, in.sim);
    RouterConfig rc = RouterConfig::for_clock(in.sim.clock_hz, in.coef.link_rate_bps);
    r.energy = account(r.report, layout, empty, {}, in.coef, rc, in.sim);
    return r;
}

ExperimentCell run_variant_cell(const ExperimentVariant& v, const PatternSpec& pattern,
                                const std::vector<Packet>& trace, const BaselineResult& baseline,
                                const ExperimentInputs& in) {
    ExperimentCell cell;
    cell.pattern = pattern.name();
    cell.snakes = v.snakes;
    cell.stride = v.stride;
    try {
        SnakeLayout layout = build_layout(in.mesh, v.snakes, v.stride);
        int links_per_snake = in.constraints.per_snake(v.snakes);
        DseResult snake_point = find_optimum(layout.snakes.front().length_m, links_per_snake,
                                             v.stride, in.tech, in.dse_injection_rate);
        std::vector<DseResult> per_snake(layout.snake_count, snake_point);
        std::vector<PowerBreakdown> breakdowns(layout.snake_count, snake_point.breakdown);

        TrafficMatrix matrix = trace_to_matrix(trace, in.mesh.router_count());
        LinkSelection selection = select_links(layout, matrix, in.constraints, in.cost);
        RoutingTables tables = build_routing_tables(layout, selection, in.cost);
        SimReport report = run_simulation(layout, selection, tables, trace, in.sim);

        RouterConfig rc = RouterConfig::for_clock(in.sim.clock_hz, in.coef.link_rate_bps);
        cell.energy = account(report, layout, selection, breakdowns, in.coef, rc, in.sim,
                              &baseline.energy);
        cell.photonic_static = static_power_summary(layout, per_snake);
        cell.mean_latency = report.mean_latency;
        cell.p95_latency = report.p95_latency;
        cell.latency_vs_baseline = baseline.report.mean_latency > 0
                                       ? report.mean_latency / baseline.report.mean_latency
                                       : 0.0;
        cell.packets = report.packets_ejected;
        cell.ok = true;
    } catch (const std::exception& e) {
        cell.ok = false;
        cell.error = e.what();
    }
    return cell;
}

} // namespace

std::vector<ExperimentCell> run_experiment(const ExperimentPlan& plan_in,
                                           const ExperimentInputs& inputs) {
    ExperimentPlan plan = plan_in;
    if (plan.variants.empty()) plan.variants = standard_variants();
    if (plan.patterns.empty())
        plan.patterns = standard_patterns(0.1, 2000, plan.seed);
    plan.validate(inputs.mesh, inputs.constraints);

    std::vector<ExperimentCell> cells;
    for (const auto& pattern : plan.patterns) {
        std::vector<Packet> trace = generate_trace(pattern, inputs.mesh);
        BaselineResult baseline = run_baseline(trace, inputs);
        if (plan.include_baseline) {
            ExperimentCell base_cell;
            base_cell.pattern = pattern.name();
            base_cell.snakes = 0;
            base_cell.stride = 0;
            base_cell.ok = true;
            base_cell.mean_latency = baseline.report.mean_latency;
            base_cell.p95_latency = baseline.report.p95_latency;
            base_cell.latency_vs_baseline = 1.0;
            base_cell.energy = baseline.energy;
            base_cell.packets = baseline.report.packets_ejected;
            cells.push_back(base_cell);
        }
        // Cells run in a worker pool; results land in plan order.
        std::vector<std::future<ExperimentCell>> futures(plan.variants.size());
        size_t next = 0;
        while (next < plan.variants.size()) {
            size_t batch = std::min<size_t>(plan.workers, plan.variants.size() - next);
            for (size_t i = 0; i < batch; ++i) {
                const auto& v = plan.variants[next + i];
                futures[next + i] = std::async(std::launch::async, run_variant_cell, v, pattern,
                                               std::cref(trace), std::cref(baseline),
                                               std::cref(inputs));
            }
            next += batch;
        }
        for (auto& f : futures) cells.push_back(f.get());
    }
    return cells;
}

void write_experiment_csv(std::ostream& os, const std::vector<ExperimentCell>& cells) {
    os << "pattern,K,S,ok,packets,mean_latency,p95_latency,latency_vs_baseline,"
          "dynamic_J,static_J,total_J,dynamic_pJ_per_bit,dyn_vs_baseline,"
          "photonic_laser_W,photonic_trim_W,photonic_leak_W,error\n";
    os << std::setprecision(10);
    for (const auto& c : cells) {
        os << c.pattern << ',' << c.snakes << ',' << c.stride << ',' << (c.ok ? 1 : 0) << ','
           << c.packets << ',' << c.mean_latency << ',' << c.p95_latency << ','
           << c.latency_vs_baseline << ',' << c.energy.dynamic_j << ',' << c.energy.static_j
           << ',' << c.energy.total_j << ',' << c.energy.dynamic_pj_per_bit << ','
           << (c.energy.vs_baseline ? c.energy.vs_baseline->dynamic_per_bit : 0.0) << ','
           << c.photonic_static.laser_w << ',' << c.photonic_static.trimming_w << ','
           << c.photonic_static.leakage_w << ',' << c.error << '\n';
    }
}

nlohmann::json experiment_manifest(const ExperimentPlan& plan, const ExperimentInputs& inputs,
                                   const KeyValueConfig& resolved_config) {
    nlohmann::json j;
    nlohmann::json variants = nlohmann::json::array();
    auto vs = plan.variants.empty() ? standard_variants() : plan.variants;
    for (const auto& v : vs) variants.push_back({{"K", v.snakes}, {"S", v.stride}});
    j["variants"] = variants;
    nlohmann::json patterns = nlohmann::json::array();
    auto ps = plan.patterns.empty() ? standard_patterns(0.1, 2000, plan.seed) : plan.patterns;
    for (const auto& p : ps)
        patterns.push_back({{"name", p.name()},
                            {"injection_rate", p.injection_rate},
                            {"duration_cycles", p.duration_cycles},
                            {"seed", p.seed}});
    j["patterns"] = patterns;
    j["seed"] = plan.seed;
    j["include_baseline"] = plan.include_baseline;
    j["mesh"] = {{"width", inputs.mesh.width}, {"height", inputs.mesh.height}};
    nlohmann::json cfg = nlohmann::json::object();
    for (const auto& [k, v] : resolved_config.entries()) cfg[k] = v;
    j["config"] = cfg;
    // FNV-1a over the canonical key=value listing.
    unsigned long long h = 1469598103934665603ULL;
    std::ostringstream canon;
    for (const auto& [k, v] : resolved_config.entries()) canon << k << '=' << v << '\n';
    for (char c : canon.str()) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ULL;
    }
    std::ostringstream hex;
    hex << std::hex << h;
    j["config_hash"] = hex.str();
    return j;
}

} // namespace snoc
