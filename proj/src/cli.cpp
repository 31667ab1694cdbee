#include "hetcycle/cli.hpp"

#include "hetcycle/report.hpp"
#include "hetcycle/scan.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace hetcycle {

namespace {

using nlohmann::json;

void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
    f << content;
    if (!f) throw std::runtime_error("write failed for '" + path + "'");
}

PolymatrixGame game_from_flags(const std::string& game_file, const std::string& family,
                               const std::string& mu_str, std::optional<Rat>* mu_out) {
    if (!game_file.empty()) {
        std::ifstream f(game_file);
        if (!f) throw std::invalid_argument("cannot read game file '" + game_file + "'");
        json j;
        try {
            f >> j;
        } catch (const std::exception& e) {
            throw std::invalid_argument("malformed game file: " + std::string(e.what()));
        }
        if (j.contains("family") && j.contains("mu"))
            *mu_out = j["mu"].is_string() ? parse_rational(j["mu"].get<std::string>())
                                          : parse_rational(j["mu"].dump());
        return load_game(j);
    }
    if (family != "paper-mu")
        throw std::invalid_argument("unknown family '" + family + "' (expected paper-mu)");
    Rat mu = parse_rational(mu_str);
    *mu_out = mu;
    return build_mu_family(mu);
}

void apply_thread_cap() {
#ifdef _OPENMP
    if (const char* env = std::getenv("HETCYCLE_THREADS")) {
        int n = std::atoi(env);
        if (n > 0) omp_set_num_threads(n);
    }
#endif
}

int cmd_analyze(const std::string& game_file, const std::string& family,
                const std::string& mu_str, const std::string& out, const std::string& format) {
    std::optional<Rat> mu;
    PolymatrixGame game = game_from_flags(game_file, family, mu_str, &mu);
    MuAnalysis an = analyze(game, mu);
    std::string payload;
    if (format == "json") {
        payload = report_to_string(analysis_report(an));
    } else if (format == "csv") {
        std::vector<EquilibriumRecord> recs = an.vertices;
        for (const auto& r : an.faces) recs.push_back(r);
        if (an.interior) recs.push_back(*an.interior);
        payload = equilibria_csv(mu ? *mu : Rat(0), recs);
    } else {
        throw std::invalid_argument("unknown format '" + format + "'");
    }
    if (out.empty())
        std::cout << payload;
    else
        write_file(out, payload);
    if (an.regime.indeterminate) {
        std::cerr << "regime indeterminate: " << an.regime.note << "\n";
        return 2;
    }
    return 0;
}

int cmd_scan(double mu_from, double mu_to, int steps, bool detect, const std::string& out,
             const std::string& events_out) {
    if (!(mu_from < mu_to)) throw std::invalid_argument("empty scan range");
    if (steps < 2) throw std::invalid_argument("need at least 2 steps");
    ScanResult res;
    if (detect) {
        res = scan_with_events(mu_from, mu_to, steps, true);
    } else {
        res.rows = scan_regimes(linspace(mu_from, mu_to, steps), true);
    }
    std::string csv = scan_csv(res.rows);
    if (out.empty())
        std::cout << csv;
    else
        write_file(out, csv);
    if (detect) {
        json evs = json::array();
        for (const auto& ev : res.events) {
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.12g", ev.mu_star);
            std::cerr << "event " << to_string(ev.kind) << " mu=" << buf
                      << " subject=" << ev.subject << "\n";
            evs.push_back(json{{"kind", to_string(ev.kind)},
                               {"mu", ev.mu_star},
                               {"subject", ev.subject},
                               {"bracket", json::array({ev.mu_lo, ev.mu_hi})},
                               {"residual", ev.residual}});
        }
        if (!events_out.empty()) write_file(events_out, evs.dump(2) + "\n");
    }
    return 0;
}

int cmd_simulate(const std::string& mu_str, const std::string& x0_str, int seeds, double t_end,
                 double eps, const std::string& out_dir) {
    Rat mu = parse_rational(mu_str);
    PolymatrixGame game = build_mu_family(mu);
    std::filesystem::path dir(out_dir.empty() ? "." : out_dir);
    std::filesystem::create_directories(dir);
    HeteroclinicGraph graph = build_graph(game);

    if (!x0_str.empty()) {
        CubePoint x0;
        {
            std::string tail = x0_str;
            for (int i = 0; i < 3; ++i) {
                auto comma = tail.find(',');
                std::string tok = tail.substr(0, comma);
                x0.coords.push_back(std::stod(tok));
                if (comma == std::string::npos) break;
                tail = tail.substr(comma + 1);
            }
        }
        if (x0.coords.size() != 3) throw std::invalid_argument("--x0 needs three coordinates");
        for (double c : x0.coords)
            if (c < 0.0 || c > 1.0) throw std::invalid_argument("--x0 outside the cube");
        Trajectory traj = integrate(game, x0, t_end);
        Itinerary itin = extract_itinerary(traj, eps, &graph);
        write_file((dir / "trajectory.csv").string(), trajectory_csv(traj));
        write_file((dir / "itinerary.csv").string(), itinerary_csv(itin));
        std::cout << "termination=" << to_string(traj.termination)
                  << " visits=" << itin.visits.size() << "\n";
        return 0;
    }
    auto pts = halton_seeds(seeds);
    CrossValidation cv = cross_validate(mu, pts, eps, t_end, true);
    std::string summary = "seed,observed,matched,termination,growth_ratio\n";
    for (size_t i = 0; i < cv.outcomes.size(); ++i) {
        const auto& oc = cv.outcomes[i];
        char buf[256];
        std::snprintf(buf, sizeof buf, "%zu,%s,%d,%s,%.17g\n", i, oc.observed.c_str(),
                      oc.matched ? 1 : 0, to_string(oc.termination).c_str(), oc.growth_ratio);
        summary += buf;
    }
    write_file((dir / "cross_validation.csv").string(), summary);
    char frac[64];
    std::snprintf(frac, sizeof frac, "%.4f", cv.match_fraction);
    std::string observed;
    for (const auto& s : cv.observed_set) observed += (observed.empty() ? "" : ",") + s;
    std::cout << "match_fraction=" << frac << " observed={" << observed << "} predicted=";
    std::string lik;
    for (const auto& s : cv.regime.likely) lik += (lik.empty() ? "" : ",") + s;
    std::cout << lik << "\n";
    return 0;
}

int cmd_plot(const std::string& mu_str, const std::string& what, const std::string& svg_path,
             double start) {
    Rat mu = parse_rational(mu_str);
    MuAnalysis an = analyze_family(mu);
    std::string title = what + " mu=" + to_string(mu);
    std::string svg;
    if (what == "projective") {
        svg = svg_projective(an.pmap, title);
    } else if (what == "cobweb") {
        if (!(start > 0 && start < an.pmap.slots()))
            throw std::invalid_argument("--start must lie in (0, #S)");
        svg = svg_cobweb(an.pmap, start, 100, title);
    } else if (what == "graph") {
        svg = svg_graph(an.graph, switching_nodes(an.graph), title);
    } else {
        throw std::invalid_argument("unknown plot kind '" + what + "'");
    }
    if (svg_path.empty())
        std::cout << svg;
    else
        write_file(svg_path, svg);
    return 0;
}

} // namespace

int run_cli(int argc, const char* const* argv) {
    apply_thread_cap();
    CLI::App app{"heteroclinic cycle stability analysis for polymatrix replicators"};
    app.require_subcommand(1);

    std::string game_file, family = "paper-mu", mu_str = "90", out, format = "json";
    auto* analyze_cmd = app.add_subcommand("analyze", "full per-mu analysis report");
    analyze_cmd->add_option("--game", game_file, "game definition JSON file");
    analyze_cmd->add_option("--family", family, "built-in family name");
    analyze_cmd->add_option("--mu", mu_str, "family parameter (rational p/q or decimal)");
    analyze_cmd->add_option("--out", out, "output path (stdout when omitted)");
    analyze_cmd->add_option("--format", format, "json|csv");

    double mu_from = 0, mu_to = 0;
    int steps = 100;
    bool detect = false;
    std::string events_out;
    auto* scan_cmd = app.add_subcommand("scan", "regime scan over a mu range");
    scan_cmd->add_option("--mu-from", mu_from, "range start")->required();
    scan_cmd->add_option("--mu-to", mu_to, "range end")->required();
    scan_cmd->add_option("--steps", steps, "grid size");
    scan_cmd->add_flag("--detect", detect, "refine bifurcation events");
    scan_cmd->add_option("--out", out, "rows CSV path (stdout when omitted)");
    scan_cmd->add_option("--events-out", events_out, "events JSON path");

    std::string x0_str;
    int seeds = 50;
    double t_end = 1e4, eps = 0.05;
    auto* sim_cmd = app.add_subcommand("simulate", "ODE trajectories and cross-validation");
    sim_cmd->add_option("--mu", mu_str, "family parameter");
    sim_cmd->add_option("--x0", x0_str, "single start point a,b,c");
    sim_cmd->add_option("--seeds", seeds, "Halton seed count");
    sim_cmd->add_option("--t", t_end, "time horizon");
    sim_cmd->add_option("--eps", eps, "vertex proximity radius");
    sim_cmd->add_option("--out", out, "output directory");

    std::string what = "projective", svg_path;
    double start = 0.5;
    auto* plot_cmd = app.add_subcommand("plot", "SVG figures");
    plot_cmd->add_option("--mu", mu_str, "family parameter");
    plot_cmd->add_option("--what", what, "projective|cobweb|graph");
    plot_cmd->add_option("--svg", svg_path, "output SVG path (stdout when omitted)");
    plot_cmd->add_option("--start", start, "cobweb start point");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (app.got_subcommand(analyze_cmd))
            return cmd_analyze(game_file, family, mu_str, out, format);
        if (app.got_subcommand(scan_cmd))
            return cmd_scan(mu_from, mu_to, steps, detect, out, events_out);
        if (app.got_subcommand(sim_cmd))
            return cmd_simulate(mu_str, x0_str, seeds, t_end, eps, out);
        if (app.got_subcommand(plot_cmd)) return cmd_plot(mu_str, what, svg_path, start);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::out_of_range& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    }
    return 1;
}

} // namespace hetcycle
