#include "polylab/cli.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "polylab/derivative.hpp"
#include "polylab/errors.hpp"
#include "polylab/io.hpp"
#include "polylab/reductions.hpp"
#include "polylab/spectral.hpp"
#include "polylab/tester.hpp"

namespace polylab {

namespace {

using json = nlohmann::ordered_json;

constexpr const char* kVersion = "0.1.0";

struct CommandContext {
    RunConfig cfg;
    json result;
    std::string status = "ok";
    int exit_code = kExitOk;
    std::string aux_output;  // csv/transcript artifacts, written separately
    std::string aux_path;
};

json input_entry(const std::string& path) {
    const std::string content = read_file(path);
    return json{{"path", path}, {"fnv1a64", fnv1a64_hex(content)}};
}

json config_echo(const RunConfig& c) {
    return json{{"seed", c.seed},          {"table_budget", default_table_budget()},
                {"threads", c.threads},    {"c_max", c.c_max},
                {"r_max", c.r_max},        {"growth_budget", c.growth_budget},
                {"iteration_cap", c.iteration_cap}, {"pool_cap", c.pool_cap},
                {"format", c.format}};
}

void emit_report(const CommandContext& ctx) {
    json rep;
    rep["tool"] = "polylab";
    rep["version"] = kVersion;
    rep["command"] = ctx.cfg.command;
    rep["seed"] = ctx.cfg.seed;
    rep["config"] = config_echo(ctx.cfg);
    rep["inputs"] = json::array();
    for (const auto& path : ctx.cfg.inputs) rep["inputs"].push_back(input_entry(path));
    rep["status"] = ctx.status;
    rep["result"] = ctx.result;
    const std::string text = rep.dump(2) + "\n";
    if (ctx.cfg.output.empty()) {
        std::cout << text;
    } else {
        write_file(ctx.cfg.output, text);
    }
    if (!ctx.aux_path.empty()) write_file(ctx.aux_path, ctx.aux_output);
}

const Polynomial& pick_poly(const PolyFile& f, std::string& name) {
    if (f.polys.empty()) throw precondition_error("input file declares no polynomials");
    if (name.empty()) name = f.polys.front().first;
    const Polynomial* q = f.find(name);
    if (!q) throw precondition_error("no polynomial named '" + name + "' in input");
    return *q;
}

json bias_json(const BiasReport& r) {
    json dist = json::array();
    for (auto d : r.value_distribution) dist.push_back(d);
    json counts = json::array();
    for (auto c : r.value_counts) counts.push_back(c);
    return json{{"re", r.bias_value.real()},
                {"im", r.bias_value.imag()},
                {"magnitude", r.magnitude},
                {"distribution", dist},
                {"counts", counts},
                {"plurality", int(r.plurality_value.value)}};
}

json point_json(const Point& x) {
    json a = json::array();
    for (auto v : x) a.push_back(int(v));
    return a;
}

Matrix parse_matrix(const std::string& content, FieldSpec field) {
    std::vector<std::vector<int>> rows;
    std::istringstream in(content);
    std::string line;
    while (std::getline(in, line)) {
        for (auto& ch : line)
            if (ch == ',') ch = ' ';
        std::istringstream ls(line);
        std::vector<int> row;
        int v;
        while (ls >> v) row.push_back(v);
        if (!row.empty()) rows.push_back(std::move(row));
    }
    if (rows.empty()) throw precondition_error("matrix file is empty");
    const std::size_t cols = rows[0].size();
    for (const auto& r : rows)
        if (r.size() != cols) throw precondition_error("ragged matrix rows");
    Matrix m(field, rows.size(), cols);
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < cols; ++c) m.set(r, c, rows[r][c]);
    return m;
}

}  // namespace

int run_command(const std::vector<std::string>& args) {
    CLI::App app{"polylab: exact bias, spectra, derivative and rank analysis over F_p^n"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::string file, name, target;
    std::vector<std::string> g_names;
    std::string lookup_values, cert_path, transcript_path, csv_path;
    int degree = 1, trials = 64, gowers_d = 1, prime = 2;
    double theta = 0.1;
    std::size_t samples = 10000, estimate_n = 0;

    app.add_option("--seed", cfg.seed, "seed for all randomized paths");
    app.add_option("--threads", cfg.threads, "worker threads (default 1)");
    app.add_option("--budget", cfg.table_budget, "table budget in entries");
    app.add_option("-o,--output", cfg.output, "report path (default stdout)");
    app.add_option("--format", cfg.format, "report format: json or csv (spectrum/regions)");

    auto add_file = [&](CLI::App* sub, bool required = true) {
        sub->fallthrough();  // global options may follow the subcommand
        auto* opt = sub->add_option("-f,--file", file, "input file");
        if (required) opt->required();
    };

    auto* c_bias = app.add_subcommand("bias", "exact bias report (optionally sampled estimate)");
    add_file(c_bias);
    c_bias->add_option("--name", name, "polynomial name (default: first)");
    c_bias->add_option("--estimate", estimate_n, "additionally estimate from N samples");

    auto* c_spec = app.add_subcommand("spectrum", "character spectrum over F_p^n");
    add_file(c_spec);
    c_spec->add_option("--name", name);
    c_spec->add_option("--csv", csv_path, "write full spectrum CSV here");

    auto* c_gowers = app.add_subcommand("gowers", "iterated derivative bias");
    add_file(c_gowers);
    c_gowers->add_option("--name", name);
    c_gowers->add_option("--d", gowers_d, "derivative order")->required();

    auto* c_regions = app.add_subcommand("regions", "factor region decomposition");
    add_file(c_regions);
    c_regions->add_option("--csv", csv_path, "write region counts CSV here");

    auto* c_isfunc = app.add_subcommand("isfunc", "is the target a function of the other polys");
    add_file(c_isfunc);
    c_isfunc->add_option("--target", target, "target polynomial name")->required();

    auto* c_reg = app.add_subcommand("regularize", "budgeted strong-regularity refinement");
    add_file(c_reg);
    c_reg->add_option("--rmax", cfg.r_max);
    c_reg->add_option("--growth", cfg.growth_budget);
    c_reg->add_option("--itercap", cfg.iteration_cap);
    c_reg->add_option("--pool", cfg.pool_cap);

    auto* c_rank = app.add_subcommand("rank", "derivative-restricted rank certificate search");
    add_file(c_rank);
    c_rank->add_option("--name", name);
    c_rank->add_option("--cmax", cfg.c_max)->required();
    c_rank->add_option("--pool", cfg.pool_cap);
    c_rank->add_option("--cert", cert_path, "write the certificate JSON here");

    auto* c_reduce = app.add_subcommand("reduce", "approximation-to-computation pipeline");
    add_file(c_reduce);
    c_reduce->add_option("--target", target)->required();
    c_reduce->add_option("--g", g_names, "approximating polynomial names")->required();
    c_reduce->add_option("--lookup", lookup_values,
                         "combiner values over F^c, little-endian, comma separated")
        ->required();
    c_reduce->add_option("--cmax", cfg.c_max);
    c_reduce->add_option("--pool", cfg.pool_cap);
    c_reduce->add_option("--cert", cert_path);

    auto* c_dixon = app.add_subcommand("dixon", "bilinear/quadratic bias-rank laws");
    add_file(c_dixon);
    c_dixon->add_option("--p", prime, "prime modulus")->required();

    auto* c_test = app.add_subcommand("test", "low-degree + bias concise-representation tester");
    add_file(c_test);
    c_test->add_option("--name", name);
    c_test->add_option("--degree", degree)->required();
    c_test->add_option("--theta", theta)->required();
    c_test->add_option("--trials", trials);
    c_test->add_option("--samples", samples);
    c_test->add_option("--transcript", transcript_path, "write transcript JSONL here");

    try {
        std::vector<const char*> argv;
        argv.push_back("polylab");
        for (const auto& a : args) argv.push_back(a.c_str());
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {  // --help
            std::cout << app.help();
            return kExitOk;
        }
        std::cerr << "polylab: " << e.what() << "\n";
        return kExitInputError;
    }

    const auto t0 = std::chrono::steady_clock::now();
    CommandContext ctx;
    ctx.cfg = cfg;

    try {
        std::size_t budget = cfg.table_budget;
        if (budget == 0) {
            if (const char* mb = std::getenv("POLYLAB_BUDGET_MB"))
                budget = static_cast<std::size_t>(std::stoull(mb)) << 20;
            else
                budget = kDefaultTableBudget;
        }
        set_default_table_budget(budget);
        set_thread_count(cfg.threads);
        Rng rng(cfg.seed);

        if (!file.empty()) ctx.cfg.inputs.push_back(file);

        if (*c_bias) {
            ctx.cfg.command = "bias";
            const PolyFile pf = load_poly_file(file);
            const Polynomial& q = pick_poly(pf, name);
            const BiasReport rep = bias_exact(tabulate(q));
            ctx.result = json{{"poly", name}, {"n", pf.n}, {"p", int(pf.field.p)},
                              {"bias", bias_json(rep)}};
            if (estimate_n > 0) {
                const auto est = bias_estimate(
                    [&](const Point& x) { return q.evaluate_raw(x); }, pf.field.p, pf.n,
                    estimate_n, rng);
                ctx.result["estimate"] = json{{"re", est.estimate.real()},
                                              {"im", est.estimate.imag()},
                                              {"radius", est.radius},
                                              {"samples", est.samples}};
            }
        } else if (*c_spec) {
            ctx.cfg.command = "spectrum";
            const PolyFile pf = load_poly_file(file);
            const Polynomial& q = pick_poly(pf, name);
            const Spectrum s = character_spectrum(tabulate(q));
            double l2 = 0;
            std::size_t top = 0;
            for (std::size_t i = 0; i < s.size(); ++i) {
                l2 += std::norm(s.coefficients[i]);
                if (std::abs(s.coefficients[i]) > std::abs(s.coefficients[top])) top = i;
            }
            ctx.result = json{{"poly", name},
                              {"size", s.size()},
                              {"parseval_l2", l2},
                              {"top", json{{"alpha_index", top},
                                           {"re", s.coefficients[top].real()},
                                           {"im", s.coefficients[top].imag()},
                                           {"magnitude", std::abs(s.coefficients[top])}}}};
            std::ostringstream csv;
            write_spectrum_csv(csv, s);
            if (!csv_path.empty()) {
                ctx.aux_path = csv_path;
                ctx.aux_output = csv.str();
            } else if (cfg.format == "csv") {
                ctx.aux_path = cfg.output.empty() ? "" : cfg.output;
                if (ctx.aux_path.empty()) {
                    std::cout << csv.str();
                    return kExitOk;
                }
                write_file(ctx.aux_path, csv.str());
                return kExitOk;
            }
        } else if (*c_gowers) {
            ctx.cfg.command = "gowers";
            const PolyFile pf = load_poly_file(file);
            const Polynomial& q = pick_poly(pf, name);
            const double v = gowers_derivative_bias(q, gowers_d);
            ctx.result = json{{"poly", name}, {"d", gowers_d}, {"value", v}};
        } else if (*c_regions) {
            ctx.cfg.command = "regions";
            const PolyFile pf = load_poly_file(file);
            const Factor g = pf.to_factor();
            const RegionMap rm = region_decompose(g);
            const UniformityReport ur = uniformity_report(g);
            ctx.result = json{{"dimension", rm.dimension},
                              {"regions", rm.regions()},
                              {"nonempty", rm.nonempty()},
                              {"max_rel_dev", ur.max_rel_dev},
                              {"empty_regions", ur.empty_regions}};
            std::ostringstream csv;
            write_region_csv(csv, rm);
            if (!csv_path.empty()) {
                ctx.aux_path = csv_path;
                ctx.aux_output = csv.str();
            } else if (cfg.format == "csv") {
                if (cfg.output.empty()) {
                    std::cout << csv.str();
                    return kExitOk;
                }
                write_file(cfg.output, csv.str());
                return kExitOk;
            }
        } else if (*c_isfunc) {
            ctx.cfg.command = "isfunc";
            const PolyFile pf = load_poly_file(file);
            const Polynomial* q = pf.find(target);
            if (!q) throw precondition_error("no polynomial named '" + target + "'");
            const Factor g = pf.to_factor({target});
            const FunctionOfResult r = is_function_of(*q, g);
            ctx.result = json{{"target", target}, {"dimension", g.dimension()},
                              {"function_of", r.ok()}};
            if (r.ok()) {
                ctx.result["lookup_cells"] = r.lookup->values.size();
                ctx.result["empty_cells_flagged"] = r.lookup->has_empty_cells;
            } else {
                ctx.result["witness"] = json{{"region", r.witness->region},
                                             {"a", point_json(r.witness->a)},
                                             {"b", point_json(r.witness->b)}};
            }
        } else if (*c_reg) {
            ctx.cfg.command = "regularize";
            const PolyFile pf = load_poly_file(file);
            std::vector<Polynomial> inputs;
            for (const auto& [nm, q] : pf.polys) inputs.push_back(q);
            RegularizeConfig rc;
            rc.search.r_max = cfg.r_max;
            rc.search.growth_budget = cfg.growth_budget;
            rc.search.direction_pool_cap = cfg.pool_cap;
            rc.search.budget = default_table_budget();
            rc.iteration_cap = cfg.iteration_cap;
            const RegularizeResult r = regularize(inputs, rc, rng);
            json polys = json::array();
            for (std::size_t i = 0; i < r.factor.polys.size(); ++i)
                polys.push_back(json{{"poly", r.factor.polys[i].to_string()},
                                     {"delta", r.factor.delta[i]},
                                     {"input_index", r.provenance[i].input_index},
                                     {"chain_length", r.provenance[i].chain.size()}});
            ctx.result = json{{"refined", r.refined},
                              {"truncated_search", r.truncated_search},
                              {"iterations", r.iterations},
                              {"dimension", r.factor.dimension()},
                              {"factor", polys}};
        } else if (*c_rank) {
            ctx.cfg.command = "rank";
            const PolyFile pf = load_poly_file(file);
            const Polynomial& q = pick_poly(pf, name);
            const auto pool = make_direction_pool(pf.field, pf.n, cfg.pool_cap, rng);
            const RankSearchResult r = rank_via_derivatives(q, cfg.c_max, pool);
            ctx.result = json{{"poly", name},
                              {"found", r.certificate.has_value()},
                              {"c", r.c},
                              {"subsets_tried", r.subsets_tried},
                              {"pool_size", r.pool_size},
                              {"pool_exhaustive", r.pool_exhaustive}};
            if (r.certificate) {
                const std::string cert = certificate_to_json(*r.certificate);
                ctx.result["certificate_fnv1a64"] = fnv1a64_hex(cert);
                if (!cert_path.empty()) {
                    ctx.aux_path = cert_path;
                    ctx.aux_output = cert;
                }
            } else {
                ctx.status = "budget-exceeded";
                ctx.exit_code = kExitBudget;
            }
        } else if (*c_reduce) {
            ctx.cfg.command = "reduce";
            const PolyFile pf = load_poly_file(file);
            const Polynomial* q = pf.find(target);
            if (!q) throw precondition_error("no polynomial named '" + target + "'");
            std::vector<Polynomial> gs;
            for (const auto& nm : g_names) {
                const Polynomial* g = pf.find(nm);
                if (!g) throw precondition_error("no polynomial named '" + nm + "'");
                gs.push_back(*g);
            }
            ValueLookup F;
            F.p = pf.field.p;
            F.arity = gs.size();
            {
                std::istringstream ls(lookup_values);
                std::string tok;
                while (std::getline(ls, tok, ','))
                    F.values.push_back(static_cast<std::uint8_t>(std::stoi(tok) % pf.field.p));
            }
            const auto pool = make_direction_pool(pf.field, pf.n, cfg.pool_cap, rng);
            const ReduceResult r = avg_to_worst(*q, gs, F, cfg.c_max, pool);
            json alpha = json::array();
            for (auto a : r.peel.alpha) alpha.push_back(int(a));
            ctx.result = json{{"target", target},
                              {"alpha", alpha},
                              {"peeled_bias", r.peel.peeled_bias},
                              {"approximation_bias", r.approximation_bias},
                              {"epsilon_d", r.epsilon_d},
                              {"meets_epsilon_d", r.meets_epsilon_d},
                              {"residual", r.peel.residual.to_string()},
                              {"rank_c", r.rank.c},
                              {"found", r.certificate.has_value()}};
            if (r.certificate) {
                ctx.result["components"] = r.certificate->components.size();
                const std::string cert = certificate_to_json(*r.certificate);
                ctx.result["certificate_fnv1a64"] = fnv1a64_hex(cert);
                if (!cert_path.empty()) {
                    ctx.aux_path = cert_path;
                    ctx.aux_output = cert;
                }
            } else {
                ctx.status = "budget-exceeded";
                ctx.exit_code = kExitBudget;
            }
        } else if (*c_dixon) {
            ctx.cfg.command = "dixon";
            const Matrix m = parse_matrix(read_file(file), FieldSpec(prime));
            const DixonReport r = bilinear_dixon_check(m);
            ctx.result = json{{"rows", m.rows()},
                              {"cols", m.cols()},
                              {"p", prime},
                              {"bias_mag", r.bias_mag},
                              {"rank_a", r.rank_a},
                              {"rank_sym", r.rank_sym},
                              {"bilinear_law_holds", r.bilinear_law_holds},
                              {"has_quadratic", r.has_quadratic},
                              {"quad_bias_mag", r.quad_bias_mag},
                              {"quad_law_holds", r.quad_law_holds}};
        } else if (*c_test) {
            ctx.cfg.command = "test";
            const PolyFile pf = load_poly_file(file);
            const Polynomial& q = pick_poly(pf, name);
            TesterConfig tc;
            tc.degree = degree;
            tc.trials = trials;
            tc.theta = theta;
            tc.samples = samples;
            const TesterVerdict v = concise_test(
                [&](const Point& x) { return q.evaluate_raw(x); }, pf.field.p, pf.n, tc, rng);
            ctx.result = json{{"poly", name},
                              {"decision", v.decision == TesterDecision::accept ? "accept" : "reject"},
                              {"phase", v.phase == TesterPhase::degree ? "degree" : "bias"},
                              {"queries_used", v.queries_used},
                              {"vacuous", v.vacuous}};
            if (v.estimate)
                ctx.result["estimate"] = json{{"re", v.estimate->estimate.real()},
                                              {"im", v.estimate->estimate.imag()},
                                              {"radius", v.estimate->radius},
                                              {"samples", v.estimate->samples}};
            if (!transcript_path.empty()) {
                std::ostringstream ts;
                write_transcript_jsonl(ts, v);
                ctx.aux_path = transcript_path;
                ctx.aux_output = ts.str();
            }
            if (v.decision == TesterDecision::reject) {
                ctx.status = "reject";
                ctx.exit_code = kExitReject;
            }
        }
    } catch (const budget_error& e) {
        std::cerr << "polylab: budget exceeded: " << e.what() << "\n";
        return kExitBudget;
    } catch (const std::exception& e) {
        std::cerr << "polylab: " << e.what() << "\n";
        return kExitInputError;
    }

    try {
        emit_report(ctx);
    } catch (const std::exception& e) {
        std::cerr << "polylab: " << e.what() << "\n";
        return kExitInputError;
    }
    const auto t1 = std::chrono::steady_clock::now();
    std::cerr << "polylab: " << ctx.cfg.command << " finished in "
              << std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count()
              << " ms\n";
    return ctx.exit_code;
}

}  // namespace polylab
