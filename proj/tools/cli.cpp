/*
 * Copyright 2026 The dcdp Authors.
 * Licensed under the terms of the Apache 2.0 License.
 * See LICENSE file in the project root for terms.
 */

#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include <dcdp/detector.hpp>
#include <dcdp/io.hpp>
#include <dcdp/tuning.hpp>

namespace dcdp::cli {

namespace {

using json = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start)
{
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string format_number(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

SimConfig sim_preset(ModelFamily family, Index n, Index p, double delta, double delta2 = 0.3)
{
    SimConfig s;
    s.family = family;
    s.n = n;
    s.p = p;
    s.k = 3;
    s.delta = delta;
    s.delta2 = delta2;
    return s;
}

std::vector<Preset> make_presets()
{
    std::vector<Preset> out;
    auto table = [&](const std::string& prefix, ModelFamily family, Index n, Index p, double delta,
                     double delta2 = 0.3) {
        Preset pr;
        pr.name = prefix + "-n" + std::to_string(n) + "-p" + std::to_string(p) + "-d" + format_number(delta);
        pr.sim = sim_preset(family, n, p, delta, delta2);
        pr.description = std::string(to_string(family)) + " model, n=" + std::to_string(n) + ", p=" + std::to_string(p) +
                         ", K=3, delta=" + format_number(delta) +
                         (family == ModelFamily::graphical ? ", delta2=" + format_number(delta2) : "");
        out.push_back(pr);
    };
    table("mean", ModelFamily::mean, 200, 20, 5);
    table("mean", ModelFamily::mean, 200, 20, 1);
    table("mean", ModelFamily::mean, 200, 20, 0.5);
    table("mean", ModelFamily::mean, 200, 100, 5);
    table("mean", ModelFamily::mean, 200, 100, 1);
    table("mean", ModelFamily::mean, 800, 100, 0.5);
    table("regression", ModelFamily::regression, 200, 20, 5);
    table("regression", ModelFamily::regression, 200, 20, 1);
    table("regression", ModelFamily::regression, 200, 100, 5);
    table("regression", ModelFamily::regression, 200, 100, 1);
    table("ggm", ModelFamily::graphical, 2000, 5, 2);
    table("ggm", ModelFamily::graphical, 2000, 10, 5);
    table("ggm", ModelFamily::graphical, 2000, 20, 5);
    table("ggm", ModelFamily::graphical, 400, 10, 5);
    table("ggm", ModelFamily::graphical, 400, 20, 5);

    auto scaling = [&](const std::string& name, const std::string& description,
                       std::vector<std::pair<Index, Index>> sizes) {
        Preset pr;
        pr.name = name;
        pr.description = description;
        pr.sim = sim_preset(ModelFamily::mean, 0, 1, 5);
        pr.sizes = std::move(sizes);
        pr.gamma = 2500.0;
        out.push_back(pr);
    };
    scaling("scaling-n", "univariate mean, delta=5, Q=100, n in {1000, 2000, 4000, 8000}",
            {{1000, 100}, {2000, 100}, {4000, 100}, {8000, 100}});
    scaling("scaling-q", "univariate mean, delta=5, n=8000, Q in {25, 50, 100, 200}",
            {{8000, 25}, {8000, 50}, {8000, 100}, {8000, 200}});
    std::vector<std::pair<Index, Index>> full_n;
    for (Index spacing = 1000; spacing <= 6000; spacing += 1000) full_n.emplace_back(4 * spacing, 100);
    scaling("scaling-n-full", "univariate mean, delta=5, Q=100, n = 4 * spacing for spacing 1000..6000", full_n);
    std::vector<std::pair<Index, Index>> full_q;
    for (Index q = 25; q <= 200; q += 25) full_q.emplace_back(20000, q);
    scaling("scaling-q-full", "univariate mean, delta=5, n=20000, Q = 25..200", full_q);
    return out;
}

// Detector flags shared by detect, bench and tune.
struct DetectorFlags {
    double gamma = 0.0;
    double zeta = 0.0;
    double lambda = 0.0;
    Index min_span = 0;
    Index grid_size = 0;
    Index delta_min_hint = 0;
    Index edge_margin = 0;
    std::string grid_kind = "uniform";
    std::uint64_t grid_seed = 0;
    Index expected_k = 3;
    bool no_refine = false;
    std::string covariance_loss = "likelihood";
    double lambda_scale = 1.0;
    double zeta_scale = 1.0;
    double span_scale = 0.1;
    double sparsity_hint = 5.0;
    std::string streaming = "auto";

    CLI::Option* gamma_opt = nullptr;
    CLI::Option* zeta_opt = nullptr;
    CLI::Option* lambda_opt = nullptr;
    CLI::Option* min_span_opt = nullptr;
    CLI::Option* grid_size_opt = nullptr;
    CLI::Option* hint_opt = nullptr;
    CLI::Option* margin_opt = nullptr;

    void attach(CLI::App* app)
    {
        gamma_opt = app->add_option("--gamma", gamma, "segment penalty; skips cross-validation");
        zeta_opt = app->add_option("--zeta", zeta, "refinement group penalty");
        lambda_opt = app->add_option("--lambda", lambda, "l1 penalty of the per-interval fits");
        min_span_opt = app->add_option("--min-span", min_span, "intervals shorter than this have zero cost");
        grid_size_opt = app->add_option("--grid-size", grid_size, "number of grid points Q");
        hint_opt = app->add_option("--delta-min-hint", delta_min_hint, "expected minimal spacing");
        margin_opt = app->add_option("--edge-margin", edge_margin, "refinement keeps this far from window ends");
        app->add_option("--grid-kind", grid_kind, "uniform or random")->check(CLI::IsMember({"uniform", "random"}));
        app->add_option("--grid-seed", grid_seed, "seed of the random grid");
        app->add_option("--expected-k", expected_k, "expected number of change points for the defaults");
        app->add_flag("--no-refine", no_refine, "skip the refinement step");
        app->add_option("--covariance-loss", covariance_loss, "graphical refinement loss")
            ->check(CLI::IsMember({"likelihood", "frobenius"}));
        app->add_option("--lambda-scale", lambda_scale, "constant in the default lambda");
        app->add_option("--zeta-scale", zeta_scale, "constant in the default zeta");
        app->add_option("--span-scale", span_scale, "constant in the default min span");
        app->add_option("--sparsity-hint", sparsity_hint, "sparsity used by the default min span");
        app->add_option("--streaming", streaming, "divide-step statistics: auto, on or off")
            ->check(CLI::IsMember({"auto", "on", "off"}));
    }

    DetectorConfig build() const
    {
        DetectorConfig c;
        if (gamma_opt->count()) c.gamma = gamma;
        if (zeta_opt->count()) c.zeta = zeta;
        if (lambda_opt->count()) c.lambda = lambda;
        if (min_span_opt->count()) c.min_span = min_span;
        if (grid_size_opt->count()) c.grid_size = grid_size;
        if (hint_opt->count()) c.delta_min_hint = delta_min_hint;
        if (margin_opt->count()) c.edge_margin = edge_margin;
        c.grid_kind = grid_kind == "random" ? GridKind::random : GridKind::uniform;
        c.grid_seed = grid_seed;
        c.expected_k = expected_k;
        c.refine = !no_refine;
        c.covariance_loss = covariance_loss == "frobenius" ? CovarianceLoss::frobenius : CovarianceLoss::likelihood;
        c.defaults.lambda_scale = lambda_scale;
        c.defaults.span_scale = span_scale;
        c.defaults.sparsity_hint = sparsity_hint;
        c.zeta_scale = zeta_scale;
        if (streaming == "on") c.cache.streaming = true;
        if (streaming == "off") c.cache.xx_budget = std::numeric_limits<double>::infinity();
        return c;
    }
};

struct SimFlags {
    std::string family = "mean";
    Index n = 0;
    Index p = 1;
    Index k = 0;
    Index spacing = 0;
    double delta = 5.0;
    double delta2 = 0.3;
    double sigma = 1.0;
    double jitter = 0.3;
    std::uint64_t seed = 1;

    std::vector<CLI::Option*> options;

    void attach(CLI::App* app)
    {
        options = {
            app->add_option("--family", family, "mean, regression or graphical"),
            app->add_option("--n", n, "series length"),
            app->add_option("--p", p, "dimension"),
            app->add_option("--k", k, "number of change points"),
            app->add_option("--spacing", spacing, "spacing between change points"),
            app->add_option("--delta", delta, "jump size (diagonal of the covariance for graphical)"),
            app->add_option("--delta2", delta2, "off-diagonal of the covariance for graphical"),
            app->add_option("--sigma", sigma, "noise standard deviation"),
            app->add_option("--jitter", jitter, "location jitter as a fraction of the spacing"),
        };
        app->add_option("--seed", seed, "random seed");
    }

    bool any_given() const
    {
        return std::any_of(options.begin(), options.end(), [](const CLI::Option* o) { return o->count() > 0; });
    }

    SimConfig build() const
    {
        SimConfig s;
        s.family = parse_family(family);
        s.n = n;
        s.p = p;
        s.k = k;
        s.spacing = spacing;
        s.delta = delta;
        s.delta2 = delta2;
        s.sigma_eps = sigma;
        s.jitter = jitter;
        s.seed = seed;
        return s;
    }

    // Overrides preset fields with the flags actually given.
    void apply(SimConfig& s) const
    {
        if (options[0]->count()) s.family = parse_family(family);
        if (options[1]->count()) s.n = n;
        if (options[2]->count()) s.p = p;
        if (options[3]->count()) s.k = k;
        if (options[4]->count()) s.spacing = spacing;
        if (options[5]->count()) s.delta = delta;
        if (options[6]->count()) s.delta2 = delta2;
        if (options[7]->count()) s.sigma_eps = sigma;
        if (options[8]->count()) s.jitter = jitter;
        s.seed = seed;
    }
};

json points_json(const ChangePointSet& cps)
{
    return json(cps.points());
}

json vector_json(const Eigen::VectorXd& v)
{
    return json(std::vector<double>(v.data(), v.data() + v.size()));
}

json matrix_json(const Eigen::MatrixXd& m)
{
    json rows = json::array();
    for (Index i = 0; i < m.rows(); ++i) rows.push_back(vector_json(m.row(i).transpose()));
    return rows;
}

const char* grid_kind_name(GridKind k)
{
    switch (k) {
    case GridKind::uniform: return "uniform";
    case GridKind::random: return "random";
    case GridKind::explicit_points: return "explicit";
    }
    return "uniform";
}

json model_json(const ModelSpec& m)
{
    return json{{"family", to_string(m.family)}, {"lambda", m.lambda},       {"lambda_scale", m.lambda_scale},
                {"min_span", m.min_span},        {"cd_tol", m.cd_tol},       {"cd_max_iter", m.cd_max_iter},
                {"ridge_eps", m.ridge_eps}};
}

json resolved_json(const ResolvedParameters& p)
{
    return json{{"model", model_json(p.model)},
                {"gamma", p.gamma},
                {"gamma_from_cv", p.gamma_from_cv},
                {"zeta", p.zeta},
                {"grid_kind", grid_kind_name(p.grid.kind)},
                {"grid_size", p.grid_size},
                {"grid_seed", p.grid.seed},
                {"delta_min_hint", p.delta_min_hint},
                {"edge_margin", p.edge_margin},
                {"noise_scale", p.noise_scale}};
}

json detector_json(const DetectorConfig& c)
{
    auto opt = [](const auto& o) { return o ? json(*o) : json(nullptr); };
    return json{{"gamma", opt(c.gamma)},
                {"zeta", opt(c.zeta)},
                {"lambda", opt(c.lambda)},
                {"min_span", opt(c.min_span)},
                {"grid_size", opt(c.grid_size)},
                {"delta_min_hint", opt(c.delta_min_hint)},
                {"edge_margin", opt(c.edge_margin)},
                {"grid_kind", grid_kind_name(c.grid_kind)},
                {"grid_seed", c.grid_seed},
                {"lambda_scale", c.defaults.lambda_scale},
                {"span_scale", c.defaults.span_scale},
                {"sparsity_hint", c.defaults.sparsity_hint},
                {"zeta_scale", c.zeta_scale},
                {"expected_k", c.expected_k},
                {"refine", c.refine},
                {"covariance_loss", c.covariance_loss == CovarianceLoss::frobenius ? "frobenius" : "likelihood"},
                {"streaming", c.cache.streaming},
                {"gamma_ladder", c.gamma_ladder},
                {"zeta_ladder", c.zeta_ladder},
                {"pairing", c.pairing == Pairing::zipped ? "zipped" : "cartesian"},
                {"ladder_points", c.ladder_points},
                {"ladder_low", c.ladder_low},
                {"ladder_high", c.ladder_high}};
}

json sim_json(const SimConfig& s)
{
    return json{{"family", to_string(s.family)},
                {"n", s.length()},
                {"p", s.p},
                {"k", s.k},
                {"spacing", s.resolved_spacing()},
                {"delta", s.delta},
                {"delta2", s.delta2},
                {"sigma_eps", s.sigma_eps},
                {"jitter", s.jitter},
                {"seed", s.seed}};
}

json cv_json(const CvReport& r)
{
    json cands = json::array();
    for (const auto& c : r.candidates) {
        cands.push_back(json{{"gamma", c.gamma}, {"zeta", c.zeta}, {"risk", c.risk},
                             {"train_points", points_json(c.train_points)}});
    }
    return json{{"candidates", cands},
                {"selected", r.selected},
                {"selected_gamma", r.selected_gamma},
                {"selected_zeta", r.selected_zeta},
                {"pivot", r.pivot}};
}

json manifest(const std::string& command, const std::vector<std::string>& args, json config,
              const std::string& digest, json timings, json outputs)
{
    json argv = json::array();
    argv.push_back("dcdp");
    for (const auto& a : args) argv.push_back(a);
    return json{{"command", command},       {"argv", argv},       {"config", std::move(config)},
                {"input_digest", digest.empty() ? json(nullptr) : json(digest)},
                {"version", DCDP_VERSION},  {"timings", std::move(timings)},
                {"outputs", std::move(outputs)}};
}

void emit(const json& report, const std::string& path, std::ostream& out)
{
    const std::string text = report.dump(2) + "\n";
    if (path.empty() || path == "-") {
        out << text;
        return;
    }
    std::ofstream f(path);
    if (!f) throw Error(ErrorKind::io_error, "cannot write " + path);
    f << text;
}

json outputs_json(const std::vector<std::string>& paths)
{
    json o = json::array();
    for (const auto& p : paths) {
        if (!p.empty() && p != "-") o.push_back(p);
    }
    return o;
}

ObservationSet load_input(const std::string& path, const std::string& family, const CLI::Option* response_opt,
                          Index response_col)
{
    const Eigen::MatrixXd table = read_csv(path);
    std::optional<Index> col;
    if (response_opt->count()) col = response_col;
    return to_observations(table, parse_family(family), col);
}

std::vector<double> parse_list(const std::string& text)
{
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.find_first_not_of(" \t") == std::string::npos) continue;
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || item.find_first_not_of(" \t", used) != std::string::npos) {
            throw Error(ErrorKind::parse_error, "not a number in list: '" + item + "'");
        }
        out.push_back(v);
    }
    return out;
}

// Ladder files: one "gamma" or "gamma,zeta" per line.
void read_ladder_file(const std::string& path, std::vector<double>& gammas, std::vector<double>& zetas)
{
    const Eigen::MatrixXd t = read_csv(path);
    if (t.cols() > 2) throw Error(ErrorKind::parse_error, path + ": expected one or two columns");
    for (Index i = 0; i < t.rows(); ++i) {
        gammas.push_back(t(i, 0));
        if (t.cols() == 2) zetas.push_back(t(i, 1));
    }
}

json segments_json(const DetectionResult& res)
{
    json segs = json::array();
    for (const auto& s : res.segments) {
        json j{{"start", s.segment.start()}, {"end", s.segment.end()}, {"gof", s.fit.gof}};
        if (s.fit.coefficients) j["coefficients"] = vector_json(*s.fit.coefficients);
        if (s.fit.precision) j["precision"] = matrix_json(*s.fit.precision);
        segs.push_back(std::move(j));
    }
    return segs;
}

void write_points_csv(const std::string& path, const DetectionResult& res)
{
    std::ofstream f(path);
    if (!f) throw Error(ErrorKind::io_error, "cannot write " + path);
    f << "stage,index\n";
    for (Index v : res.divide_points.points()) f << "divide," << v << '\n';
    for (Index v : res.refined_points.points()) f << "refined," << v << '\n';
}

struct DetectFlags {
    std::string input;
    std::string family = "mean";
    Index response_col = 0;
    CLI::Option* response_opt = nullptr;
    std::string output;
    std::string points_csv;
    DetectorFlags det;
};

int cmd_detect(const DetectFlags& f, const std::vector<std::string>& args, std::ostream& out)
{
    const auto start = Clock::now();
    const ObservationSet data = load_input(f.input, f.family, f.response_opt, f.response_col);
    const DetectorConfig cfg = f.det.build();
    const DetectionResult res = detect(data, cfg);
    if (!f.points_csv.empty()) write_points_csv(f.points_csv, res);

    json config{{"input", f.input},
                {"family", to_string(data.family())},
                {"response_col", data.has_response() ? json(f.response_opt->count() ? f.response_col : data.p())
                                                     : json(nullptr)},
                {"detector", detector_json(cfg)},
                {"resolved", resolved_json(res.params)}};
    json timings{{"tune_seconds", res.tune_seconds},
                 {"divide_seconds", res.divide_seconds},
                 {"refine_seconds", res.refine_seconds},
                 {"total_seconds", seconds_since(start)}};
    json report{{"manifest", manifest("detect", args, std::move(config), file_digest(f.input), std::move(timings),
                                      outputs_json({f.output, f.points_csv}))},
                {"n", data.n()},
                {"p", data.p()},
                {"divide_points", points_json(res.divide_points)},
                {"refined_points", points_json(res.refined_points)},
                {"parameters", json{{"gamma", res.params.gamma},
                                    {"zeta", res.params.zeta},
                                    {"lambda", res.params.model.lambda},
                                    {"grid_size", res.params.grid_size},
                                    {"min_span", res.params.model.min_span}}},
                {"segments", segments_json(res)},
                {"cv", res.cv ? cv_json(*res.cv) : json(nullptr)},
                {"warnings", res.warnings}};
    emit(report, f.output, out);
    return 0;
}

struct SimulateFlags {
    SimFlags sim;
    std::string output;
    std::string truth;
    std::string report;
};

int cmd_simulate(const SimulateFlags& f, const std::vector<std::string>& args, std::ostream& out)
{
    const auto start = Clock::now();
    const SimConfig cfg = f.sim.build();
    const SimData sim = generate(cfg);
    write_csv(f.output, to_table(sim.data));
    write_truth(f.truth, sim.truth);
    json report{{"manifest", manifest("simulate", args, sim_json(cfg), file_digest(f.output),
                                      json{{"total_seconds", seconds_since(start)}},
                                      outputs_json({f.output, f.truth, f.report}))},
                {"n", sim.data.n()},
                {"p", sim.data.p()},
                {"columns", to_table(sim.data).cols()},
                {"truth", points_json(sim.truth)}};
    emit(report, f.report, out);
    return 0;
}

struct BenchFlags {
    std::string preset;
    bool list = false;
    SimFlags sim;
    DetectorFlags det;
    int trials = 20;
    int jobs = 1;
    int repetitions = 5;
    std::string output;
    std::string trials_csv;
};

std::string preset_names()
{
    std::string names;
    for (const auto& p : presets()) names += (names.empty() ? "" : ", ") + p.name;
    return names;
}

std::string optional_cell(const std::optional<double>& v)
{
    if (!v) return "";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", *v);
    return buf;
}

int cmd_bench_scaling(const Preset& preset, const BenchFlags& f, const std::vector<std::string>& args,
                      std::ostream& out)
{
    const auto start = Clock::now();
    SimConfig base = preset.sim;
    f.sim.apply(base);
    const DetectorConfig det = f.det.build();
    const double gamma = det.gamma.value_or(preset.gamma);
    const auto points = run_scaling(base, preset.sizes, gamma, f.repetitions, det.cache);

    std::vector<double> ns, qs, tn, tq;
    json rows = json::array();
    for (const auto& pt : points) {
        rows.push_back(json{{"n", pt.n},
                            {"grid_size", pt.grid_size},
                            {"divide_seconds", pt.divide_seconds},
                            {"refine_seconds", pt.refine_seconds},
                            {"hausdorff_divide", pt.hausdorff_divide ? json(*pt.hausdorff_divide) : json(nullptr)},
                            {"hausdorff", pt.hausdorff ? json(*pt.hausdorff) : json(nullptr)}});
        ns.push_back(static_cast<double>(pt.n));
        qs.push_back(static_cast<double>(pt.grid_size));
        tn.push_back(pt.divide_seconds);
    }
    const bool vary_n = std::adjacent_find(ns.begin(), ns.end(), std::not_equal_to<>()) != ns.end();
    const double slope = log_log_slope(vary_n ? ns : qs, tn);
    if (!f.trials_csv.empty()) {
        std::ofstream csv(f.trials_csv);
        if (!csv) throw Error(ErrorKind::io_error, "cannot write " + f.trials_csv);
        csv << "n,grid_size,divide_seconds,refine_seconds,hausdorff_divide,hausdorff\n";
        for (const auto& pt : points) {
            csv << pt.n << ',' << pt.grid_size << ',' << optional_cell(pt.divide_seconds) << ','
                << optional_cell(pt.refine_seconds) << ',' << optional_cell(pt.hausdorff_divide) << ','
                << optional_cell(pt.hausdorff) << '\n';
        }
    }
    json config{{"preset", preset.name},
                {"sim", sim_json(base)},
                {"gamma", gamma},
                {"repetitions", f.repetitions},
                {"streaming", det.cache.streaming}};
    json report{{"manifest", manifest("bench", args, std::move(config), "", json{{"total_seconds", seconds_since(start)}},
                                      outputs_json({f.output, f.trials_csv}))},
                {"setting", preset.name},
                {"varies", vary_n ? "n" : "grid_size"},
                {"log_log_slope", slope},
                {"points", rows}};
    emit(report, f.output, out);
    return 0;
}

int cmd_bench(const BenchFlags& f, const std::vector<std::string>& args, std::ostream& out)
{
    if (f.list) {
        json list = json::array();
        for (const auto& p : presets()) list.push_back(json{{"name", p.name}, {"description", p.description}});
        out << json{{"presets", list}}.dump(2) << "\n";
        return 0;
    }
    SimConfig cfg;
    std::string setting;
    if (!f.preset.empty()) {
        const Preset* preset = find_preset(f.preset);
        if (!preset) {
            throw Error(ErrorKind::invalid_config,
                        "unknown preset '" + f.preset + "'; available presets: " + preset_names());
        }
        if (preset->scaling()) return cmd_bench_scaling(*preset, f, args, out);
        cfg = preset->sim;
        f.sim.apply(cfg);
        setting = preset->name;
    } else {
        if (!f.sim.any_given()) {
            throw Error(ErrorKind::invalid_config,
                        "bench needs --preset or simulation flags; available presets: " + preset_names());
        }
        cfg = f.sim.build();
        setting = std::string(to_string(cfg.family)) + "-n" + std::to_string(cfg.length()) + "-p" + std::to_string(cfg.p) +
                  "-d" + format_number(cfg.delta);
    }
    const auto start = Clock::now();
    const DetectorConfig det = f.det.build();
    const TrialReport report = run_trials(cfg, f.trials, det, f.jobs);

    json trials = json::array();
    for (std::size_t i = 0; i < report.trials.size(); ++i) {
        const auto& t = report.trials[i];
        trials.push_back(json{{"trial", i},
                              {"seed", t.seed},
                              {"hausdorff", t.hausdorff ? json(*t.hausdorff) : json(nullptr)},
                              {"hausdorff_divide", t.hausdorff_divide ? json(*t.hausdorff_divide) : json(nullptr)},
                              {"k_hat", t.estimated.size()},
                              {"k", t.truth.size()},
                              {"gamma", t.gamma},
                              {"divide_seconds", t.divide_seconds},
                              {"refine_seconds", t.refine_seconds},
                              {"tune_seconds", t.tune_seconds},
                              {"estimated", points_json(t.estimated)},
                              {"truth", points_json(t.truth)}});
    }
    if (!f.trials_csv.empty()) {
        std::ofstream csv(f.trials_csv);
        if (!csv) throw Error(ErrorKind::io_error, "cannot write " + f.trials_csv);
        csv << "trial,seed,hausdorff,hausdorff_divide,k_hat,k,gamma,divide_seconds,refine_seconds,tune_seconds\n";
        for (std::size_t i = 0; i < report.trials.size(); ++i) {
            const auto& t = report.trials[i];
            csv << i << ',' << t.seed << ',' << optional_cell(t.hausdorff) << ',' << optional_cell(t.hausdorff_divide)
                << ',' << t.estimated.size() << ',' << t.truth.size() << ',' << optional_cell(t.gamma) << ','
                << optional_cell(t.divide_seconds) << ',' << optional_cell(t.refine_seconds) << ','
                << optional_cell(t.tune_seconds) << '\n';
        }
    }
    auto mean_sd_json = [](const MeanSd& m) {
        return json{{"mean", m.count ? json(m.mean) : json(nullptr)},
                    {"sd", m.count ? json(m.sd) : json(nullptr)},
                    {"count", m.count}};
    };
    json config{{"setting", setting},
                {"sim", sim_json(cfg)},
                {"trials", f.trials},
                {"detector", detector_json(det)}};
    json out_report{{"manifest", manifest("bench", args, std::move(config), "",
                                          json{{"total_seconds", seconds_since(start)}, {"jobs", f.jobs}},
                                          outputs_json({f.output, f.trials_csv}))},
                    {"setting", setting},
                    {"table_row", format_table_row(setting, report)},
                    {"hausdorff", mean_sd_json(report.hausdorff)},
                    {"seconds", mean_sd_json(report.seconds)},
                    {"sd_kind", "sample standard deviation"},
                    {"k_less", report.k_less},
                    {"k_equal", report.k_equal},
                    {"k_greater", report.k_greater},
                    {"trials", trials}};
    emit(out_report, f.output, out);
    return 0;
}

struct TuneFlags {
    std::string input;
    std::string family = "mean";
    Index response_col = 0;
    CLI::Option* response_opt = nullptr;
    std::string gamma_ladder;
    std::string zeta_ladder;
    std::string ladder_file;
    std::string pairing = "zipped";
    int ladder_points = 8;
    std::string output;
    DetectorFlags det;
};

int cmd_tune(const TuneFlags& f, const std::vector<std::string>& args, std::ostream& out)
{
    const auto start = Clock::now();
    const ObservationSet data = load_input(f.input, f.family, f.response_opt, f.response_col);
    DetectorConfig cfg = f.det.build();
    cfg.gamma.reset();
    cfg.pairing = f.pairing == "cartesian" ? Pairing::cartesian : Pairing::zipped;
    cfg.ladder_points = f.ladder_points;
    if (!f.ladder_file.empty()) read_ladder_file(f.ladder_file, cfg.gamma_ladder, cfg.zeta_ladder);
    if (!f.gamma_ladder.empty()) cfg.gamma_ladder = parse_list(f.gamma_ladder);
    if (!f.zeta_ladder.empty()) cfg.zeta_ladder = parse_list(f.zeta_ladder);

    const ResolvedParameters params = resolve_parameters(data, cfg);
    const CvSetup setup = make_cv_setup(data, params, cfg);
    CvReport report = cv_select(data, setup.plan, setup.divide_template, setup.refine_template);
    report.pivot = setup.pivot;

    json config{{"input", f.input},
                {"family", to_string(data.family())},
                {"detector", detector_json(cfg)},
                {"resolved", resolved_json(params)},
                {"gamma_grid", setup.plan.gamma_grid},
                {"zeta_grid", setup.plan.zeta_grid},
                {"train_grid_size", setup.divide_template.grid.count}};
    json out_report{{"manifest", manifest("tune", args, std::move(config), file_digest(f.input),
                                          json{{"total_seconds", seconds_since(start)}}, outputs_json({f.output}))},
                    {"cv", cv_json(report)}};
    emit(out_report, f.output, out);
    return 0;
}

void write_error(std::ostream& err, const std::string& kind, const std::string& message)
{
    err << json{{"error", json{{"kind", kind}, {"message", message}}}}.dump() << "\n";
}

}  // namespace

const std::vector<Preset>& presets()
{
    static const std::vector<Preset> all = make_presets();
    return all;
}

const Preset* find_preset(const std::string& name)
{
    for (const auto& p : presets()) {
        if (p.name == name) return &p;
    }
    return nullptr;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Divide-and-conquer dynamic programming change point detection", "dcdp"};
    app.require_subcommand(1);
    app.set_version_flag("--version", DCDP_VERSION);

    DetectFlags detect_flags;
    CLI::App* detect_cmd = app.add_subcommand("detect", "detect change points in a CSV series");
    detect_cmd->add_option("input", detect_flags.input, "headerless CSV, one row per time index")->required();
    detect_cmd->add_option("--family", detect_flags.family, "mean, regression or graphical");
    detect_flags.response_opt = detect_cmd->add_option("--response-col", detect_flags.response_col,
                                                       "0-based response column (default: last)");
    detect_cmd->add_option("-o,--output", detect_flags.output, "report path (default: stdout)");
    detect_cmd->add_option("--points-csv", detect_flags.points_csv, "plot-ready CSV of the change points");
    detect_flags.det.attach(detect_cmd);

    SimulateFlags sim_flags;
    CLI::App* sim_cmd = app.add_subcommand("simulate", "generate a synthetic series");
    sim_flags.sim.attach(sim_cmd);
    sim_cmd->add_option("-o,--output", sim_flags.output, "data CSV path")->required();
    sim_cmd->add_option("--truth", sim_flags.truth, "true change points, one per line")->required();
    sim_cmd->add_option("--report", sim_flags.report, "report path (default: stdout)");

    BenchFlags bench_flags;
    CLI::App* bench_cmd = app.add_subcommand("bench", "run simulation trials or a scaling sweep");
    bench_cmd->add_option("--preset", bench_flags.preset, "named setting");
    bench_cmd->add_flag("--list-presets", bench_flags.list, "print the available presets");
    bench_flags.sim.attach(bench_cmd);
    bench_flags.det.attach(bench_cmd);
    bench_cmd->add_option("--trials", bench_flags.trials, "number of trials")->check(CLI::PositiveNumber);
    bench_cmd->add_option("--jobs", bench_flags.jobs, "worker threads")
        ->envname("DCDP_JOBS")
        ->check(CLI::PositiveNumber);
    bench_cmd->add_option("--repetitions", bench_flags.repetitions, "timing repetitions for scaling presets")
        ->check(CLI::PositiveNumber);
    bench_cmd->add_option("-o,--output", bench_flags.output, "report path (default: stdout)");
    bench_cmd->add_option("--csv", bench_flags.trials_csv, "per-trial (or per-point) CSV for plotting");

    TuneFlags tune_flags;
    CLI::App* tune_cmd = app.add_subcommand("tune", "cross-validate gamma and zeta");
    tune_cmd->add_option("input", tune_flags.input, "headerless CSV, one row per time index")->required();
    tune_cmd->add_option("--family", tune_flags.family, "mean, regression or graphical");
    tune_flags.response_opt = tune_cmd->add_option("--response-col", tune_flags.response_col,
                                                   "0-based response column (default: last)");
    tune_cmd->add_option("--gamma-ladder", tune_flags.gamma_ladder, "comma-separated gamma candidates");
    tune_cmd->add_option("--zeta-ladder", tune_flags.zeta_ladder, "comma-separated zeta candidates");
    tune_cmd->add_option("--ladder-file", tune_flags.ladder_file, "CSV of gamma[,zeta] candidates");
    tune_cmd->add_option("--pairing", tune_flags.pairing, "zipped or cartesian")
        ->check(CLI::IsMember({"zipped", "cartesian"}));
    tune_cmd->add_option("--ladder-points", tune_flags.ladder_points, "size of the default gamma ladder")
        ->check(CLI::PositiveNumber);
    tune_cmd->add_option("-o,--output", tune_flags.output, "report path (default: stdout)");
    tune_flags.det.attach(tune_cmd);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            app.exit(e, out, err);
            return 0;
        }
        write_error(err, "usage", e.what());
        return 2;
    }

    try {
        if (detect_cmd->parsed()) return cmd_detect(detect_flags, args, out);
        if (sim_cmd->parsed()) return cmd_simulate(sim_flags, args, out);
        if (bench_cmd->parsed()) return cmd_bench(bench_flags, args, out);
        if (tune_cmd->parsed()) return cmd_tune(tune_flags, args, out);
    } catch (const Error& e) {
        write_error(err, std::string(to_string(e.kind())), e.what());
        return 1;
    } catch (const std::exception& e) {
        write_error(err, "internal", e.what());
        return 1;
    }
    return 2;
}

}  // namespace dcdp::cli
