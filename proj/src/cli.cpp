#include "scelo/cli.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "scelo/asymmetric.hpp"
#include "scelo/batch_fit.hpp"
#include "scelo/betting.hpp"
#include "scelo/elo_update.hpp"
#include "scelo/io.hpp"
#include "scelo/lls_fit.hpp"
#include "scelo/probability.hpp"
#include "scelo/scoring.hpp"
#include "scelo/simulator.hpp"
#include "scelo/stats.hpp"

namespace scelo::cli {

namespace {

std::string fixed6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

struct Manifest {
    std::string command;
    std::vector<std::pair<std::string, std::string>> params;
    std::vector<std::pair<std::string, std::string>> inputs;  // name -> path

    std::vector<std::string> lines() const {
        std::vector<std::string> out;
        out.push_back(std::string("scelo ") + kVersion);
        out.push_back("command: " + command);
        for (const auto& [k, v] : params) out.push_back("param " + k + "=" + v);
        for (const auto& [name, path] : inputs)
            out.push_back("input " + name + ": path=" + path +
                          " fnv1a=" + fnv1a_hex(read_file_bytes(path)));
        return out;
    }
};

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);  // fixed newlines on every platform
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    return out;
}

double env_tol(double fallback) {
    if (const char* s = std::getenv("SCELO_TOL")) {
        char* end = nullptr;
        double v = std::strtod(s, &end);
        if (end && *end == '\0' && v > 0.0) return v;
    }
    return fallback;
}

std::uint64_t env_seed(std::uint64_t fallback) {
    if (const char* s = std::getenv("SCELO_SEED")) {
        char* end = nullptr;
        unsigned long long v = std::strtoull(s, &end, 10);
        if (end && *end == '\0') return v;
    }
    return fallback;
}

MarginPolicy parse_margin(const std::string& spec, bool& enabled) {
    enabled = false;
    MarginPolicy policy;
    if (spec == "off" || spec.empty()) return policy;
    auto colon = spec.find(':');
    if (colon == std::string::npos)
        throw std::invalid_argument("margin spec must be off, rms:FRAC, or fixed:DELTA");
    std::string mode = spec.substr(0, colon);
    double value = std::strtod(spec.c_str() + colon + 1, nullptr);
    if (!(value > 0.0)) throw std::invalid_argument("margin value must be > 0");
    if (mode == "rms") policy = {DeltaMode::RmsFraction, value};
    else if (mode == "fixed") policy = {DeltaMode::Fixed, value};
    else throw std::invalid_argument("margin spec must be off, rms:FRAC, or fixed:DELTA");
    enabled = true;
    return policy;
}

// ---- rate -----------------------------------------------------------------

struct RateOptions {
    std::string input;
    std::string priors;
    std::string out;
    std::string method = "sc";
    std::string margin = "off";
    double k = 0.0;  // 0 means "use the priors file"; 32 if neither given
    double tol = 0.05;
    double damping = 0.5;
    int max_iters = 10000;
};

int cmd_rate(const RateOptions& opt) {
    auto records = read_game_records_file(opt.input);
    bool margin_on = false;
    MarginPolicy policy = parse_margin(opt.margin, margin_on);

    TournamentGraph graph = build_graph(records);
    std::map<std::string, RatingEstimate> priors;
    if (!opt.priors.empty()) priors = read_priors_file(opt.priors);
    double default_k = opt.k > 0.0 ? opt.k : 32.0;
    for (const Identity& id : graph.players()) {
        auto it = priors.find(id.player);
        RatingEstimate prior = it != priors.end() ? it->second
                                                  : RatingEstimate::from_k(kDefaultMean, default_k);
        if (opt.k > 0.0) prior = RatingEstimate::from_k(prior.mu, opt.k);
        graph.set_prior(id, prior);
    }

    // Per-player actual scores; margin mode replaces the w tallies with
    // rematch probabilities wherever both scores are present.
    std::map<std::string, double> actual;
    std::map<std::string, std::map<std::string, double>> opposition;  // player -> opp -> games
    for (const GameRecord& r : records) {
        double w_a;
        if (margin_on && r.score_a && r.score_b) {
            if (r.a.role != r.b.role)
                throw std::invalid_argument(
                    "margin scoring compares like-to-like only; record " + r.game_id +
                    " pairs roles '" + r.a.role + "' and '" + r.b.role + "'");
            ScoredGame g{*r.score_a, *r.score_b};
            w_a = weighted_actual_score(std::span<const ScoredGame>(&g, 1), policy);
        } else {
            w_a = r.outcome == Outcome::AWins ? 1.0 : r.outcome == Outcome::BWins ? 0.0 : 0.5;
        }
        actual[r.a.player] += w_a;
        actual[r.b.player] += 1.0 - w_a;
        opposition[r.a.player][r.b.player] += 1.0;
        opposition[r.b.player][r.a.player] += 1.0;
    }

    Manifest manifest;
    manifest.command = "rate";
    manifest.params = {{"method", opt.method},
                       {"margin", opt.margin},
                       {"k", opt.k > 0.0 ? fixed6(opt.k) : std::string("from-priors")},
                       {"tol", fixed6(opt.tol)},
                       {"damping", fixed6(opt.damping)}};
    manifest.inputs.push_back({"records", opt.input});
    if (!opt.priors.empty()) manifest.inputs.push_back({"priors", opt.priors});

    auto out = open_out(opt.out);
    for (const auto& line : manifest.lines()) out << "# " << line << "\n";
    out << "player,rating,sigma,iterations,expected_score,actual_score,games\n";
    for (const auto& [player, score] : actual) {
        UpdateContext ctx;
        ctx.prior = graph.prior({player, ""});
        double games = 0.0;
        for (const auto& [opp, n] : opposition.at(player)) {
            ctx.opponents.push_back({graph.prior({opp, ""}).mu, n});
            games += n;
        }
        ctx.actual_score = score;
        if (opt.method != "classic" && opt.method != "sc" && opt.method != "sc-flat")
            throw std::invalid_argument("unknown method '" + opt.method + "'");
        UpdateResult res{};
        if (opt.method == "classic" || (opt.method != "sc-flat" && ctx.prior.frozen())) {
            // Provisional anchoring: a frozen player's rating never moves,
            // which the classic step with K = 0 expresses exactly.
            res = classic_update(ctx);
        } else if (opt.method == "sc") {
            res = sc_update(ctx, opt.tol, opt.damping, opt.max_iters);
        } else {
            res = sc_update_uninformative(ctx, opt.tol, opt.max_iters);
        }
        out << player << ',' << fixed6(res.rating) << ',' << fixed6(res.sigma) << ','
            << res.iterations << ',' << fixed6(res.expected_score) << ',' << fixed6(score) << ','
            << fixed6(games) << "\n";
    }
    return kOk;
}

// ---- fit ------------------------------------------------------------------

struct FitOptions {
    std::string input;
    std::string priors;
    std::string out;
    std::string fitter = "pml";
    bool roles = false;
    std::optional<double> target_mean;
    double prior_weight = 0.1;
    double tol = 0.05;
    double damping = 0.5;
    int max_iters = 100000;
};

int cmd_fit(const FitOptions& opt) {
    auto records = read_game_records_file(opt.input);
    TournamentGraph graph = build_graph(records, {.role_split = opt.roles});
    if (!opt.priors.empty()) {
        // The priors file may cover more players than this record set.
        auto priors = read_priors_file(opt.priors);
        for (const Identity& id : graph.players()) {
            auto it = priors.find(id.player);
            if (it != priors.end()) graph.set_prior(id, it->second);
        }
    }

    std::map<Identity, double> ratings;
    std::map<Identity, UncertaintyParts> uncertainty;
    int iterations = 0;
    double max_residual = 0.0;
    std::vector<std::vector<Identity>> components;

    auto advantage_edges = build_advantage_graph(graph, opt.prior_weight, MomentMethod::Approx);
    if (opt.fitter == "pml") {
        BatchConfig cfg;
        cfg.tol = opt.tol;
        cfg.damping = opt.damping;
        cfg.max_iters = opt.max_iters;
        cfg.target_mean = opt.target_mean;
        BatchResult res = fit_pml(graph, cfg);
        ratings = std::move(res.ratings);
        iterations = res.iterations;
        max_residual = res.max_residual;
        uncertainty = uncertainty_decomposition(ratings, advantage_edges);
    } else if (opt.fitter == "lls") {
        LlsConfig cfg;
        cfg.tol = opt.tol;
        cfg.damping = opt.damping;
        cfg.max_iters = opt.max_iters;
        if (opt.target_mean) cfg.target_mean = *opt.target_mean;
        LlsResult res = fit_lls(advantage_edges, cfg);
        ratings = std::move(res.ratings);
        uncertainty = std::move(res.uncertainty);
        iterations = res.iterations;
        max_residual = res.max_residual;
        components = std::move(res.components);
    } else if (opt.fitter == "lls-weighted") {
        LlsConfig cfg;
        cfg.tol = opt.tol;
        cfg.damping = opt.damping;
        cfg.max_iters = opt.max_iters;
        std::map<Identity, RatingEstimate> priors;
        for (const Identity& id : graph.players()) priors[id] = graph.prior(id);
        LlsResult res = fit_lls_weighted(advantage_edges, priors, cfg);
        ratings = std::move(res.ratings);
        uncertainty = std::move(res.uncertainty);
        iterations = res.iterations;
        max_residual = res.max_residual;
    } else {
        throw std::invalid_argument("unknown fitter '" + opt.fitter + "'");
    }

    std::map<Identity, double> games;
    for (const ComparisonEdge& e : graph.edges()) {
        games[e.i] += e.games();
        games[e.j] += e.games();
    }

    Manifest manifest;
    manifest.command = "fit";
    manifest.params = {{"fitter", opt.fitter},
                       {"roles", opt.roles ? "on" : "off"},
                       {"prior_weight", fixed6(opt.prior_weight)},
                       {"tol", fixed6(opt.tol)},
                       {"damping", fixed6(opt.damping)}};
    if (opt.target_mean) manifest.params.push_back({"target_mean", fixed6(*opt.target_mean)});
    manifest.inputs.push_back({"records", opt.input});
    if (!opt.priors.empty()) manifest.inputs.push_back({"priors", opt.priors});

    auto out = open_out(opt.out);
    for (const auto& line : manifest.lines()) out << "# " << line << "\n";
    out << "# iterations: " << iterations << "\n";
    out << "# max_residual: " << fixed6(max_residual) << "\n";
    if (components.size() > 1) {
        out << "# warning: disconnected graph, " << components.size()
            << " components fitted and shifted independently\n";
        for (std::size_t c = 0; c < components.size(); ++c) {
            out << "# component " << c << ":";
            for (const Identity& id : components[c]) out << ' ' << id.display();
            out << "\n";
        }
    }
    out << "player,role,rating,sigma_total,sigma_statistical,sigma_structural,games\n";
    for (const auto& [id, rating] : ratings) {
        out << id.player << ',' << id.role << ',' << fixed6(rating) << ',';
        auto u = uncertainty.find(id);
        if (u != uncertainty.end())
            out << fixed6(u->second.total) << ',' << fixed6(u->second.statistical) << ','
                << fixed6(u->second.structural);
        else
            out << ",,";
        out << ',' << fixed6(games.count(id) ? games.at(id) : 0.0) << "\n";
    }

    if (opt.roles) {
        RoleFitConfig rcfg;
        rcfg.fitter = opt.fitter == "pml" ? Fitter::PML : Fitter::LLS;
        rcfg.pml.tol = opt.tol;
        rcfg.pml.damping = opt.damping;
        rcfg.pml.max_iters = opt.max_iters;
        rcfg.lls.tol = opt.tol;
        rcfg.lls.damping = opt.damping;
        rcfg.lls.max_iters = opt.max_iters;
        rcfg.prior_weight = opt.prior_weight;
        RoleRatings rr = fit_role_ratings(graph, rcfg);
        AnovaResult an = anova(rr);
        out << "# anova roles: " << rr.role_p << " vs " << rr.role_g << "\n";
        out << "# rho: " << fixed6(an.rho) << "\n";
        for (const auto& d : rr.diagnostics) out << "# " << d << "\n";
        out << "player,overall,residual\n";
        for (const auto& [player, overall] : an.overall)
            out << player << ',' << fixed6(overall) << ',' << fixed6(an.residual.at(player))
                << "\n";
    }
    return kOk;
}

// ---- simulate ---------------------------------------------------------------

SimConfig read_sim_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    SimConfig cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        auto eq = line.find('=');
        if (eq == std::string::npos) throw ParseError("expected key=value", lineno);
        std::string key = line.substr(0, eq);
        std::string value = line.substr(eq + 1);
        auto as_int = [&] { return std::stoi(value); };
        auto as_double = [&] { return std::stod(value); };
        auto as_bool = [&] { return value == "1" || value == "true" || value == "on"; };
        if (key == "eras") cfg.eras = as_int();
        else if (key == "agents_per_era") cfg.agents_per_era = as_int();
        else if (key == "carryover") cfg.carryover = as_int();
        else if (key == "games_per_block") cfg.games_per_pairing_block = as_int();
        else if (key == "era_step") cfg.era_step = as_double();
        else if (key == "base_spread") cfg.base_spread = as_double();
        else if (key == "role_spread") cfg.role_spread = as_double();
        else if (key == "seed") cfg.seed = std::stoull(value);
        else if (key == "normal_perturbation") cfg.normal_perturbation = as_bool();
        else if (key == "coin_flip_roles") cfg.coin_flip_roles = as_bool();
        else throw std::invalid_argument("unknown simulator config field '" + key + "'");
    }
    return cfg;
}

struct SimulateOptions {
    std::string config;
    std::string records_out;
    std::string truth_out;
    std::optional<std::uint64_t> seed;
};

int cmd_simulate(const SimulateOptions& opt) {
    SimConfig cfg;
    if (!opt.config.empty()) cfg = read_sim_config(opt.config);
    cfg.seed = opt.seed ? *opt.seed : env_seed(cfg.seed);

    auto agents = generate_population(cfg);
    auto records = play_schedule(agents, cfg);

    std::vector<std::string> header;
    header.push_back(std::string("scelo ") + kVersion);
    header.push_back("command: simulate");
    header.push_back("rng: mt19937-64");
    header.push_back("seed: " + std::to_string(cfg.seed));
    header.push_back("param eras=" + std::to_string(cfg.eras) +
                     " agents_per_era=" + std::to_string(cfg.agents_per_era) +
                     " carryover=" + std::to_string(cfg.carryover) +
                     " games_per_block=" + std::to_string(cfg.games_per_pairing_block));
    header.push_back("param era_step=" + format_double(cfg.era_step) +
                     " base_spread=" + format_double(cfg.base_spread) +
                     " role_spread=" + format_double(cfg.role_spread));

    {
        auto out = open_out(opt.records_out);
        write_game_records(out, records, header);
    }
    {
        std::vector<TruthRow> rows;
        rows.reserve(agents.size());
        for (const SimAgent& a : agents)
            rows.push_back({a.id, a.red_cap, a.blue_cap, a.true_combined});
        auto out = open_out(opt.truth_out);
        write_truth(out, rows, header);
    }
    std::cout << "records=" << records.size() << " agents=" << agents.size() << "\n";
    return kOk;
}

// ---- eval -------------------------------------------------------------------

int cmd_eval(const std::string& report_path, const std::string& truth_path) {
    std::ifstream in(report_path);
    if (!in) throw std::runtime_error("cannot open " + report_path);
    std::map<std::string, double> fitted;
    std::string line;
    int lineno = 0;
    int player_col = -1, rating_col = -1, columns = 0;
    while (std::getline(in, line)) {
        ++lineno;
        while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> fields;
        std::string cur;
        for (char c : line) {
            if (c == ',') {
                fields.push_back(cur);
                cur.clear();
            } else cur.push_back(c);
        }
        fields.push_back(cur);
        if (rating_col < 0 || static_cast<int>(fields.size()) != columns) {
            player_col = rating_col = -1;
            for (std::size_t n = 0; n < fields.size(); ++n) {
                if (fields[n] == "player") player_col = static_cast<int>(n);
                if (fields[n] == "rating") rating_col = static_cast<int>(n);
            }
            columns = static_cast<int>(fields.size());
            if (player_col < 0 || rating_col < 0) rating_col = -1;  // not a ratings section
            continue;
        }
        fitted[fields[player_col]] = std::strtod(fields[rating_col].c_str(), nullptr);
    }
    if (fitted.empty()) throw ParseError("no ratings found in report", lineno);

    auto truth = read_truth_file(truth_path);
    std::vector<double> xs, ys;
    for (const TruthRow& row : truth) {
        auto it = fitted.find(row.agent);
        if (it == fitted.end()) continue;
        xs.push_back(it->second);
        ys.push_back(row.true_combined);
    }
    if (xs.size() < 2) throw std::invalid_argument("report and truth share fewer than 2 agents");
    std::cout << "correlation=" << fixed6(pearson_correlation(xs, ys)) << "\n";
    std::cout << "rms=" << fixed6(rms_after_alignment(xs, ys)) << "\n";
    return kOk;
}

}  // namespace

int run(int argc, const char* const* argv) {
    CLI::App app{"scelo: rating engine for large tournaments of software agents"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);
    double default_tol = env_tol(0.05);

    RateOptions rate;
    rate.tol = default_tol;
    auto* rate_cmd = app.add_subcommand("rate", "incremental per-player updates");
    rate_cmd->add_option("--input", rate.input, "game-record file")->required();
    rate_cmd->add_option("--priors", rate.priors, "priors file (player,mu,sigma)");
    rate_cmd->add_option("--out", rate.out, "report file")->required();
    rate_cmd->add_option("--method", rate.method, "classic | sc | sc-flat");
    rate_cmd->add_option("--k", rate.k, "adjustment factor override for every player");
    rate_cmd->add_option("--tol", rate.tol, "convergence tolerance, Elo points");
    rate_cmd->add_option("--damping", rate.damping, "weight on the new estimate");
    rate_cmd->add_option("--max-iters", rate.max_iters, "iteration cap");
    rate_cmd->add_option("--margin", rate.margin, "off | rms:FRAC | fixed:DELTA");

    FitOptions fit;
    fit.tol = default_tol;
    auto* fit_cmd = app.add_subcommand("fit", "simultaneous batch fit");
    fit_cmd->add_option("--input", fit.input, "game-record file")->required();
    fit_cmd->add_option("--priors", fit.priors, "priors file (player,mu,sigma)");
    fit_cmd->add_option("--out", fit.out, "report file")->required();
    fit_cmd->add_option("--fitter", fit.fitter, "pml | lls | lls-weighted");
    fit_cmd->add_flag("--roles", fit.roles, "role-split identities plus ANOVA block");
    double fit_target_mean = 0.0;
    auto* tm = fit_cmd->add_option("--target-mean", fit_target_mean, "shift fitted mean here");
    fit_cmd->add_option("--prior-weight", fit.prior_weight, "beta prior weight for advantages");
    fit_cmd->add_option("--tol", fit.tol, "convergence tolerance, Elo points");
    fit_cmd->add_option("--damping", fit.damping, "weight on the new estimate");
    fit_cmd->add_option("--max-iters", fit.max_iters, "iteration cap");

    SimulateOptions sim;
    auto* sim_cmd = app.add_subcommand("simulate", "era-structured synthetic tournament");
    sim_cmd->add_option("--config", sim.config, "key=value config file");
    std::uint64_t sim_seed = 0;
    auto* seed_opt = sim_cmd->add_option("--seed", sim_seed, "rng seed");
    sim_cmd->add_option("--records", sim.records_out, "output game-record file")->required();
    sim_cmd->add_option("--truth", sim.truth_out, "output truth file")->required();

    std::string eval_report, eval_truth;
    auto* eval_cmd = app.add_subcommand("eval", "score a fit report against a truth file");
    eval_cmd->add_option("--report", eval_report, "fit report")->required();
    eval_cmd->add_option("--truth", eval_truth, "truth file")->required();

    auto* tools_cmd = app.add_subcommand("tools", "one-shot numeric helpers");
    tools_cmd->require_subcommand(1);

    double ecf_b = 0.0;
    bool ecf_inverse = false;
    auto* conv = tools_cmd->add_subcommand("convert-ecf", "ECF advantage -> Elo advantage");
    conv->add_option("value", ecf_b, "advantage")->required();
    conv->add_flag("--inverse", ecf_inverse, "convert Elo -> ECF instead");

    double ss_adv = 0.0, ss_k = 0.0;
    auto* ss = tools_cmd->add_subcommand("sample-size", "games needed to detect an advantage");
    ss->add_option("advantage", ss_adv)->required();
    ss->add_option("k_sigma", ss_k)->required();

    BetParams bet{0.5, 2.0, 100.0};
    auto* bet_cmd = tools_cmd->add_subcommand("bet", "risk-averse optimal stake");
    bet_cmd->add_option("p", bet.p, "win probability")->required();
    bet_cmd->add_option("r", bet.r, "payout ratio")->required();
    bet_cmd->add_option("d", bet.d_pain, "pain threshold")->required();

    double ea_opponent = 0.0;
    std::vector<double> ea_components;
    auto* ea = tools_cmd->add_subcommand("elo-average", "rating equivalent of mixed capabilities");
    ea->add_option("opponent", ea_opponent)->required();
    ea->add_option("components", ea_components)->required()->expected(-1);

    double ps_p1 = 0.0, ps_p2 = 0.0;
    auto* ps = tools_cmd->add_subcommand("population-shift", "Elo improvement from win rates");
    ps->add_option("p1", ps_p1)->required();
    ps->add_option("p2", ps_p2)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*rate_cmd) return cmd_rate(rate);
        if (*fit_cmd) {
            if (*tm) fit.target_mean = fit_target_mean;
            return cmd_fit(fit);
        }
        if (*sim_cmd) {
            if (*seed_opt) sim.seed = sim_seed;
            return cmd_simulate(sim);
        }
        if (*eval_cmd) return cmd_eval(eval_report, eval_truth);
        if (*conv) {
            std::cout << fixed6(ecf_inverse ? elo_to_ecf(ecf_b) : ecf_to_elo(ecf_b)) << "\n";
            return kOk;
        }
        if (*ss) {
            std::cout << required_sample_size(ss_adv, ss_k) << "\n";
            return kOk;
        }
        if (*bet_cmd) {
            std::cout << fixed6(optimal_bet(bet)) << "\n";
            return kOk;
        }
        if (*ea) {
            std::cout << fixed6(elo_average(ea_opponent, ea_components)) << "\n";
            return kOk;
        }
        if (*ps) {
            std::cout << fixed6(population_improvement(ps_p1, ps_p2)) << "\n";
            return kOk;
        }
        return kUsage;
    } catch (const ParseError& e) {
        std::cerr << "parse error at line " << e.line << ": " << e.what() << "\n";
        return kParseFailure;
    } catch (const BatchNonConvergence& e) {
        std::cerr << "non-convergence: " << e.what() << "\n";
        return kNonConvergence;
    } catch (const NonConvergenceError& e) {
        std::cerr << "non-convergence after " << e.iterations
                  << " iterations (last iterate " << e.last_rating << "): " << e.what() << "\n";
        return kNonConvergence;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return kRangeViolation;
    } catch (const std::domain_error& e) {
        std::cerr << "out of range: " << e.what() << "\n";
        return kRangeViolation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kParseFailure;
    }
}

}  // namespace scelo::cli
