// dtlab: numerical laboratory for DT(mu,c) upper triangular random-matrix
// models; classifies atomic measures against the NZA/UNZA criteria and
// verifies the closed-form angle bounds on sampled models.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "dtlab/bounds.hpp"
#include "dtlab/hypothesis.hpp"
#include "dtlab/measure_io.hpp"
#include "dtlab/report_io.hpp"
#include "dtlab/subspaces.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr std::uint64_t kDefaultSeed = 1000003; // documented fixed default
constexpr const char* kVersion = "0.1.0";

// DTLAB_SEED takes precedence over --seed (batch schedulers pin seeds that way)
std::uint64_t resolve_seed(const CLI::App* /*cmd*/, std::uint64_t cli_seed) {
    if (const char* env = std::getenv("DTLAB_SEED")) {
        try {
            return std::stoull(env);
        } catch (...) {
            throw std::invalid_argument("DTLAB_SEED is not an unsigned integer");
        }
    }
    return cli_seed;
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << content;
}

void write_manifest(const fs::path& dir, const std::string& command, const json& config,
                    std::uint64_t seed) {
    json j;
    j["command"] = command;
    j["config"] = config;
    j["seed"] = seed;
    j["versions"] = {{"dtlab", kVersion}};
    write_file(dir / "manifest.json", j.dump(2));
}

dtlab::AtomicMeasure measure_from_flags(const std::string& measure_arg, const std::string& family,
                                        double p, int n_max) {
    if (!measure_arg.empty()) {
        const auto first = measure_arg.find_first_not_of(" \t\r\n");
        if (first != std::string::npos && measure_arg[first] == '{')
            return dtlab::parse_measure_spec(measure_arg);
        return dtlab::load_measure_spec(measure_arg);
    }
    if (family.empty())
        throw std::invalid_argument("no measure given: pass --measure or --family");
    if (family == "example1") return dtlab::make_family(dtlab::FamilyTag::example1, n_max, p);
    if (family == "example2") return dtlab::make_family(dtlab::FamilyTag::example2, n_max);
    if (family == "example3") return dtlab::make_family(dtlab::FamilyTag::example3, n_max);
    throw std::invalid_argument("unknown family '" + family + "'");
}

dtlab::StrategySpec strategy_from_name(const std::string& name) {
    if (name == "min_gap") return {dtlab::DStrategy::min_gap, {}};
    if (name == "tail_radius") return {dtlab::DStrategy::tail_radius, {}};
    throw std::invalid_argument("unknown d-strategy '" + name + "' (min_gap|tail_radius)");
}

int write_analysis_bundle(const dtlab::AtomicMeasure& mu, double c,
                          const dtlab::ClassifyOptions& opt, const fs::path& out_dir,
                          const json& config, std::uint64_t seed, const std::string& command) {
    const dtlab::HypothesisReport rep = dtlab::classify(mu, c, opt);
    fs::create_directories(out_dir);
    write_file(out_dir / "report.json", dtlab::report_to_json(rep));
    write_file(out_dir / "traces.csv", dtlab::traces_to_csv(rep.nza_traces));
    write_file(out_dir / "traces_unza.csv", dtlab::traces_to_csv(rep.unza_traces));
    write_manifest(out_dir, command, config, seed);
    std::cout << "verdict: " << dtlab::to_string(rep.verdict) << "\n";
    for (const auto& w : rep.warnings)
        std::cout << "warning [" << w.kind << "]: " << w.detail << "\n";
    std::cout << "wrote " << (out_dir / "report.json").string() << "\n";
    return rep.warnings.empty() ? 0 : 2;
}

void print_bound_line(const char* name, const dtlab::AngleBound& b, bool csv) {
    if (csv) {
        std::cout << name << "," << dtlab::format_double(b.cos_lower) << ","
                  << dtlab::format_double(b.angle_upper) << "\n";
    } else {
        std::printf("%-14s cos >= %.6f   angle <= %.6f rad\n", name, b.cos_lower, b.angle_upper);
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"dtlab: DT(mu,c) random-matrix laboratory and measure classifier"};
    app.require_subcommand(1);

    // ---- analyze ----
    std::string an_measure, an_family;
    double an_p = 0.0, an_c = 1.0;
    int an_nmax = 1000, an_nlo = 1, an_nhi = 0;
    std::string an_unza = "tail_radius", an_nza = "min_gap", an_out = "dtlab_out/analyze";
    std::uint64_t an_seed = kDefaultSeed;
    auto* analyze = app.add_subcommand("analyze", "classify a measure against the NZA/UNZA criteria");
    analyze->add_option("--measure", an_measure, "measure spec: path or inline JSON");
    analyze->add_option("--family", an_family, "example1|example2|example3");
    analyze->add_option("--p", an_p, "exponent for example1 (p > 1)");
    analyze->add_option("--n-max", an_nmax, "family truncation length")->capture_default_str();
    analyze->add_option("--c", an_c, "model constant c > 0")->capture_default_str();
    analyze->add_option("--n-lo", an_nlo, "first trace index")->capture_default_str();
    analyze->add_option("--n-hi", an_nhi, "last trace index (0 = auto)")->capture_default_str();
    analyze->add_option("--unza-strategy", an_unza, "min_gap|tail_radius")->capture_default_str();
    analyze->add_option("--nza-strategy", an_nza, "min_gap|tail_radius")->capture_default_str();
    analyze->add_option("--seed", an_seed, "rng seed (env DTLAB_SEED overrides default)");
    analyze->add_option("--out", an_out, "output directory")->capture_default_str();

    // ---- bounds ----
    double b_s = 0, b_c = 0, b_t = 0, b_d = 0, b_m = 0;
    bool b_csv = false;
    auto* boundscmd = app.add_subcommand("bounds", "evaluate the closed-form angle lower bounds");
    boundscmd->add_option("--s", b_s, "outer annulus radius");
    boundscmd->add_option("--c", b_c, "model constant c > 0")->required();
    boundscmd->add_option("--t", b_t, "atom mass t");
    boundscmd->add_option("--d", b_d, "ball radius d_n");
    boundscmd->add_option("--m", b_m, "punctured-ball mass m_n");
    boundscmd->add_flag("--csv", b_csv, "CSV output (name,cos_lower,angle_upper)");

    // ---- simulate ----
    auto* simulate = app.add_subcommand("simulate", "sample models and measure subspace angles");
    simulate->require_subcommand(1);

    double l_t = 0.5, l_sp = 0.9, l_s = 1.0, l_c = 1.0;
    int l_n = 256, l_trials = 50;
    std::uint64_t l_seed = kDefaultSeed;
    bool l_single = false;
    std::string l_out = "dtlab_out/lemma1", l_policy = "quantile";
    auto* lemma1 = simulate->add_subcommand("lemma1", "angle vs bound for t*delta_0 + annulus");
    lemma1->add_option("--t", l_t, "atom mass at 0")->capture_default_str();
    lemma1->add_option("--s-prime", l_sp, "inner annulus radius")->capture_default_str();
    lemma1->add_option("--s", l_s, "outer annulus radius")->capture_default_str();
    lemma1->add_option("--c", l_c, "model constant")->capture_default_str();
    lemma1->add_option("--N", l_n, "matrix size")->capture_default_str();
    lemma1->add_option("--trials", l_trials, "trials per orientation")->capture_default_str();
    lemma1->add_option("--seed", l_seed, "rng seed");
    lemma1->add_flag("--single-orientation", l_single, "zero_first only");
    lemma1->add_option("--policy", l_policy, "quantile|iid diagonal policy")->capture_default_str();
    lemma1->add_option("--out", l_out, "output directory")->capture_default_str();

    std::string t2_schedule, t2_measure, t2_family;
    double t2_p = 2.0, t2_c = 1.0, t2_atom0 = 0.0, t2_ratio = 0.25;
    int t2_n = 256, t2_trials = 20, t2_nmax = 1000;
    std::uint64_t t2_seed = kDefaultSeed;
    std::string t2_out = "dtlab_out/theorem2";
    auto* theorem2 = simulate->add_subcommand("theorem2", "shrinking-annulus scheme around 0");
    theorem2->add_option("--schedule", t2_schedule, "comma-separated outer radii s_n")->required();
    theorem2->add_option("--s-prime-ratio", t2_ratio, "s'_n = ratio * s_n")->capture_default_str();
    theorem2->add_option("--measure", t2_measure, "measure spec: path or inline JSON");
    theorem2->add_option("--family", t2_family, "family mixed with the atom at 0");
    theorem2->add_option("--p", t2_p, "family exponent (example1)")->capture_default_str();
    theorem2->add_option("--n-max", t2_nmax, "family truncation length")->capture_default_str();
    theorem2->add_option("--atom-at-zero", t2_atom0, "mass of the added atom at 0 (with --family)");
    theorem2->add_option("--c", t2_c, "model constant")->capture_default_str();
    theorem2->add_option("--N", t2_n, "matrix size")->capture_default_str();
    theorem2->add_option("--trials", t2_trials, "trials per step")->capture_default_str();
    theorem2->add_option("--seed", t2_seed, "rng seed");
    theorem2->add_option("--out", t2_out, "output directory")->capture_default_str();

    // ---- example ----
    int ex_which = 0;
    double ex_p = 2.0, ex_c = 1.0;
    int ex_nmax = 1000;
    std::uint64_t ex_seed = kDefaultSeed;
    std::string ex_out;
    auto* example = app.add_subcommand("example", "reproduce one of the worked examples end to end");
    example->add_option("which", ex_which, "1|2|3")->required();
    example->add_option("--p", ex_p, "exponent for example 1")->capture_default_str();
    example->add_option("--n-max", ex_nmax, "truncation length")->capture_default_str();
    example->add_option("--c", ex_c, "model constant")->capture_default_str();
    example->add_option("--seed", ex_seed, "rng seed");
    example->add_option("--out", ex_out, "output directory (default dtlab_out/exampleN)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    try {
        if (analyze->parsed()) {
            const std::uint64_t seed = resolve_seed(analyze, an_seed);
            const auto mu = measure_from_flags(an_measure, an_family, an_p, an_nmax);
            dtlab::ClassifyOptions opt;
            opt.n_lo = an_nlo;
            opt.n_hi = an_nhi;
            opt.unza_strategy = strategy_from_name(an_unza);
            opt.nza_strategy = strategy_from_name(an_nza);
            json config{{"measure", json::parse(dtlab::measure_to_json(mu))},
                        {"c", an_c},
                        {"n_lo", an_nlo},
                        {"n_hi", an_nhi},
                        {"unza_strategy", an_unza},
                        {"nza_strategy", an_nza}};
            return write_analysis_bundle(mu, an_c, opt, an_out, config, seed, "analyze");
        }

        if (boundscmd->parsed()) {
            if (!(b_c > 0.0)) throw std::invalid_argument("bounds: c must be positive");
            bool any = false;
            if (b_csv) std::cout << "bound,cos_lower,angle_upper\n";
            if (boundscmd->count("--s") && boundscmd->count("--t")) {
                print_bound_line("lemma1_sharp", dtlab::lemma1_cos_lower(b_s, b_c, b_t), b_csv);
                any = true;
            }
            if (boundscmd->count("--s")) {
                print_bound_line("lemma1_weak", dtlab::lemma1_cos_weak(b_s, b_c), b_csv);
                any = true;
            }
            if (boundscmd->count("--d") && boundscmd->count("--m") && boundscmd->count("--t")) {
                print_bound_line("unza_chain", dtlab::unza_chain_cos(b_d, b_c, b_m, b_t), b_csv);
                any = true;
            }
            if (boundscmd->count("--d") && boundscmd->count("--t")) {
                print_bound_line("nza_chain", dtlab::nza_chain_cos(b_d, b_c, b_t), b_csv);
                any = true;
            }
            if (!any) throw std::invalid_argument("bounds: pass --s/--t for the lemma bounds "
                                                  "and/or --d/--m/--t for the chain bounds");
            return 0;
        }

        if (lemma1->parsed()) {
            dtlab::Lemma1Config cfg;
            cfg.t = l_t;
            cfg.s_prime = l_sp;
            cfg.s = l_s;
            cfg.c = l_c;
            cfg.N = l_n;
            cfg.trials = l_trials;
            cfg.seed = resolve_seed(lemma1, l_seed);
            cfg.both_orientations = !l_single;
            cfg.policy = l_policy == "iid" ? dtlab::DiagonalPolicy::iid
                                           : dtlab::DiagonalPolicy::quantile;
            const dtlab::Lemma1Report rep = dtlab::lemma1_experiment(cfg);
            const fs::path out_dir(l_out);
            fs::create_directories(out_dir);
            write_file(out_dir / "experiment.csv", dtlab::lemma1_rows_to_csv(rep));
            write_file(out_dir / "trials.csv", dtlab::lemma1_trials_to_csv(rep));
            write_file(out_dir / "summary.json", dtlab::lemma1_summary_to_json(rep));
            json config{{"t", l_t},      {"s_prime", l_sp},     {"s", l_s},
                        {"c", l_c},      {"N", l_n},            {"trials", l_trials},
                        {"policy", l_policy}, {"both_orientations", !l_single}};
            write_manifest(out_dir, "simulate lemma1", config, cfg.seed);
            std::cout << "mean cos_alpha " << rep.summary.mean_cos << " (bound sharp "
                      << rep.summary.bound_sharp << "), satisfied_fraction "
                      << rep.summary.satisfied_fraction << "\n";
            std::cout << "wrote " << (out_dir / "summary.json").string() << "\n";
            return rep.summary.warnings.empty() ? 0 : 2;
        }

        if (theorem2->parsed()) {
            dtlab::Theorem2Config cfg;
            if (!t2_measure.empty()) {
                cfg.measure = measure_from_flags(t2_measure, "", 0.0, 0);
            } else {
                if (t2_family.empty() || !(t2_atom0 > 0.0 && t2_atom0 < 1.0))
                    throw std::invalid_argument(
                        "theorem2: pass --measure, or --family with --atom-at-zero in (0,1)");
                const auto fam = measure_from_flags("", t2_family, t2_p, t2_nmax);
                cfg.measure = dtlab::with_extra_atom(fam, dtlab::Complex(0.0, 0.0), t2_atom0);
            }
            std::stringstream ss(t2_schedule);
            std::string tok;
            while (std::getline(ss, tok, ','))
                if (!tok.empty()) cfg.schedule.push_back(std::stod(tok));
            cfg.s_prime_ratio = t2_ratio;
            cfg.c = t2_c;
            cfg.N = t2_n;
            cfg.trials = t2_trials;
            cfg.seed = resolve_seed(theorem2, t2_seed);
            const dtlab::Theorem2Report rep = dtlab::theorem2_experiment(cfg);
            const fs::path out_dir(t2_out);
            fs::create_directories(out_dir);
            write_file(out_dir / "experiment.csv", dtlab::theorem2_rows_to_csv(rep));
            write_file(out_dir / "summary.json", dtlab::theorem2_summary_to_json(rep));
            json config{{"schedule", cfg.schedule}, {"s_prime_ratio", t2_ratio},
                        {"c", t2_c},                {"N", t2_n},
                        {"trials", t2_trials},
                        {"measure", json::parse(dtlab::measure_to_json(cfg.measure))}};
            write_manifest(out_dir, "simulate theorem2", config, cfg.seed);
            std::cout << "mean cos_alpha nondecreasing: "
                      << (rep.summary.mean_cos_nondecreasing ? "true" : "false") << "\n";
            std::cout << "wrote " << (out_dir / "summary.json").string() << "\n";
            return rep.summary.warnings.empty() ? 0 : 2;
        }

        if (example->parsed()) {
            if (ex_which < 1 || ex_which > 3)
                throw std::invalid_argument("example: which must be 1, 2 or 3");
            const std::uint64_t seed = resolve_seed(example, ex_seed);
            const fs::path out_dir(ex_out.empty() ? "dtlab_out/example" + std::to_string(ex_which)
                                                  : ex_out);
            dtlab::AtomicMeasure mu;
            json config{{"which", ex_which}, {"n_max", ex_nmax}, {"c", ex_c}};
            if (ex_which == 1) {
                mu = dtlab::make_family(dtlab::FamilyTag::example1, ex_nmax, ex_p);
                config["p"] = ex_p;
            } else if (ex_which == 2) {
                mu = dtlab::make_family(dtlab::FamilyTag::example2, ex_nmax);
            } else {
                mu = dtlab::make_family(dtlab::FamilyTag::example3, std::min(ex_nmax, 1000));
            }
            dtlab::ClassifyOptions opt;
            const int rc = write_analysis_bundle(mu, ex_c, opt, out_dir, config, seed,
                                                 "example " + std::to_string(ex_which));
            if (ex_which == 3) {
                std::vector<dtlab::Example3Analysis> table;
                table.reserve(static_cast<std::size_t>(ex_nmax));
                for (int n = 2; n <= ex_nmax; ++n) table.push_back(dtlab::example3_min_bound(n));
                write_file(out_dir / "fn_analysis.csv", dtlab::example3_table_to_csv(table));
                const auto& last = table.back();
                std::cout << "f_n analysis at n=" << last.n;
                if (last.r_n) std::cout << ": r_n=" << *last.r_n;
                if (last.value_at_rn) std::cout << ", (1/(2n^2)) f(r_n)^2=" << *last.value_at_rn;
                std::cout << "\nwrote " << (out_dir / "fn_analysis.csv").string() << "\n";
            }
            return rc;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
