// Acceptance suite: runs every criterion at its stated tolerance and prints
// one pass/fail line per criterion. Exit code = number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "dtlab/bounds.hpp"
#include "dtlab/hypothesis.hpp"
#include "dtlab/matmodel.hpp"
#include "dtlab/measure.hpp"
#include "dtlab/numkernel.hpp"
#include "dtlab/report_io.hpp"
#include "dtlab/rng.hpp"
#include "dtlab/subspaces.hpp"

using namespace dtlab;

namespace {

struct Harness {
    std::vector<std::string> failures;
    int checks = 0;

    void require(bool ok, const std::string& what) {
        ++checks;
        if (!ok) failures.push_back(what);
    }
    void require_close(double got, double want, double tol, const std::string& what) {
        std::ostringstream os;
        os << what << ": got " << got << ", want " << want << " +- " << tol;
        require(std::abs(got - want) <= tol, os.str());
    }
};

int g_failed = 0;

void criterion(int id, const std::string& name, const std::function<void(Harness&)>& body) {
    Harness h;
    const auto start = std::chrono::steady_clock::now();
    try {
        body(h);
    } catch (const std::exception& e) {
        h.failures.push_back(std::string("exception: ") + e.what());
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (h.failures.empty()) {
        std::printf("[PASS] criterion %2d: %s (%d checks, %.1fs)\n", id, name.c_str(), h.checks,
                    secs);
    } else {
        ++g_failed;
        std::printf("[FAIL] criterion %2d: %s (%zu of %d checks failed, %.1fs)\n", id,
                    name.c_str(), h.failures.size(), h.checks, secs);
        std::size_t shown = 0;
        for (const auto& f : h.failures) {
            if (shown++ == 6) {
                std::printf("         ... %zu more\n", h.failures.size() - 6);
                break;
            }
            std::printf("         - %s\n", f.c_str());
        }
    }
    std::fflush(stdout);
}

AtomicMeasure uniform_annulus(double r_in, double r_out) {
    AtomicMeasure m;
    m.continuous.push_back({Complex(0, 0), r_in, r_out, 1.0, RadialProfile::annulus_uniform});
    m.validate();
    return m;
}

// Exact nonnegative rational arithmetic for the criterion-1 rational path.
struct Frac {
    long long num, den;
    Frac reduce() const {
        const long long g = std::gcd(num, den);
        return {num / g, den / g};
    }
};

// Shared ensemble for criteria 2-4: one hundred block models.
struct InstanceResult {
    double y_route_gap;
    double series_residual, sylvester_residual;
    double conjugation_residual, inverse_pair_gap;
    double angle_vs_formula_gap;
};

std::vector<InstanceResult> run_shared_ensemble() {
    const int sizes[3] = {16, 64, 256};
    const double ts[3] = {0.2, 0.5, 0.8};
    const auto annulus = uniform_annulus(0.9, 1.0);
    std::vector<InstanceResult> out;
    Philox pick(20240, 0);
    for (int i = 0; i < 100; ++i) {
        const int n = sizes[pick.next_u64() % 3];
        const double t = ts[pick.next_u64() % 3];
        const Orientation o =
            (pick.next_u64() & 1) ? Orientation::annulus_first : Orientation::zero_first;
        const BlockModel b =
            sample_block_model(t, annulus, 1.0, n, 424242, static_cast<std::uint64_t>(i), o);

        InstanceResult r{};
        const Matrix y = compute_y_series(b);
        const Matrix y_ref = y_via_sylvester(b);
        r.y_route_gap = (y - y_ref).norm() / y_ref.norm();
        r.series_residual = sylvester_residual(b, y);
        r.sylvester_residual = sylvester_residual(b, y_ref);

        const Matrix ye = embed_corner_block(y, b.top_rows(), n);
        const auto [s, s_inv] = build_similarity(ye, b.top_rows());
        r.conjugation_residual = verify_conjugation(b, s, s_inv);
        r.inverse_pair_gap = (s * s_inv - Matrix::Identity(n, n)).norm();

        const double rin = 0.5 * b.s_prime;
        const auto sub0 = spectral_subspace(b.Z, RegionSpec::closed_annulus(Complex(0, 0), 0, rin));
        const auto sub1 =
            spectral_subspace(b.Z, RegionSpec::closed_annulus(Complex(0, 0), rin, 2.0 * b.s));
        const double cos_svd =
            principal_cos(sub0, sub1, lemma1_cos_weak(b.s, 1.0)).cos_alpha;
        const double sig = operator_norm(y);
        r.angle_vs_formula_gap = std::abs(cos_svd - sig / std::sqrt(1.0 + sig * sig));
        out.push_back(r);
    }
    return out;
}

const std::vector<InstanceResult>& shared_ensemble() {
    static const std::vector<InstanceResult> cached = run_shared_ensemble();
    return cached;
}

Lemma1Report& criterion5_report() {
    static Lemma1Report rep = [] {
        Lemma1Config cfg;
        cfg.t = 0.5;
        cfg.s_prime = 0.9;
        cfg.s = 1.0;
        cfg.c = 1.0;
        cfg.N = 256;
        cfg.trials = 50;
        cfg.seed = 20250810;
        cfg.both_orientations = true;
        return lemma1_experiment(cfg);
    }();
    return rep;
}

} // namespace

int main() {
    std::printf("dtlab acceptance suite\n");

    criterion(1, "closed-form bound values (rational and float paths)", [](Harness& h) {
        // rational path: 1 + s^2/(c^2 max(t,1-t)) with s=2, c=1, t=9/10
        // = (9 + 4*10)/9 = 49/9
        const Frac max_mass{9, 10};
        const Frac x = Frac{max_mass.num + 4 * max_mass.den, max_mass.num}.reduce();
        h.require(x.num == 49 && x.den == 9, "1 + 4/(9/10) reduces to 49/9");
        const long long sn = 7, sd = 3; // sqrt(49) and sqrt(9)
        h.require(sn * sn == x.num && sd * sd == x.den, "49/9 is a perfect rational square");
        const double rational_cos = static_cast<double>(sd) / static_cast<double>(sn);
        h.require(rational_cos == 3.0 / 7.0, "rational path gives exactly 3/7");

        const double sharp = lemma1_cos_lower(2, 1, 0.9).cos_lower;
        h.require_close(sharp, 3.0 / 7.0, 1e-9, "lemma1_cos_lower(2,1,0.9) float path");
        h.require_close(lemma1_cos_weak(2, 1).cos_lower, 1.0 / 3.0, 1e-15, "lemma1_cos_weak(2,1)");
        const double at_half =
            std::abs(lemma1_cos_lower(1, 1, 0.5).cos_lower - lemma1_cos_weak(1, 1).cos_lower);
        h.require(at_half <= 1e-15, "sharp and weak coincide at t = 1/2 to 1e-15");
    });

    criterion(2, "Y series vs Sylvester oracle on 100 block models", [](Harness& h) {
        for (const auto& r : shared_ensemble()) {
            h.require(r.y_route_gap <= 1e-9, "route gap " + format_double(r.y_route_gap));
            h.require(r.series_residual <= 1e-10,
                      "series residual " + format_double(r.series_residual));
            h.require(r.sylvester_residual <= 1e-10,
                      "sylvester residual " + format_double(r.sylvester_residual));
        }
    });

    criterion(3, "conjugation identity S diag(Z1,Z2) S^-1 = Z", [](Harness& h) {
        for (const auto& r : shared_ensemble()) {
            h.require(r.conjugation_residual <= 1e-10,
                      "conjugation residual " + format_double(r.conjugation_residual));
            h.require(r.inverse_pair_gap <= 1e-13,
                      "(I+Y)(I-Y) gap " + format_double(r.inverse_pair_gap));
        }
    });

    criterion(4, "principal angle equals sigma_max(Y)/sqrt(1+sigma_max^2)", [](Harness& h) {
        for (const auto& r : shared_ensemble()) {
            h.require(r.angle_vs_formula_gap <= 1e-10,
                      "angle gap " + format_double(r.angle_vs_formula_gap));
        }
    });

    criterion(5, "statistical angle bound at t=1/2, A(0.9,1), N=256, 50 trials", [](Harness& h) {
        const auto& rep = criterion5_report();
        h.require(rep.rows.size() == 100, "both orientations produce 100 rows");
        h.require(rep.summary.mean_cos >= 0.9 * 0.57735,
                  "mean cos_alpha " + format_double(rep.summary.mean_cos) + " >= 0.9*0.57735");
        h.require(rep.summary.min_cos >= 0.57735 - 0.1,
                  "min cos_alpha " + format_double(rep.summary.min_cos) + " >= 0.47735");
        h.require(rep.summary.satisfied_fraction >= 0.9,
                  "satisfied_fraction " + format_double(rep.summary.satisfied_fraction));
    });

    criterion(6, "tau-norm lower bounds on the criterion-5 ensemble", [](Harness& h) {
        const auto& rep = criterion5_report();
        // c^2 t (1-t) / s^2 = 0.25 at these parameters
        h.require(rep.summary.mean_tau_frob_y >= 0.9 * 0.25,
                  "mean tau_frob(Y) " + format_double(rep.summary.mean_tau_frob_y) +
                      " >= 0.9 * 0.25");
        h.require(rep.summary.mean_tau_frob_z2inv >= 0.9 * 1.0,
                  "mean tau_frob(Z2^-1) " + format_double(rep.summary.mean_tau_frob_z2inv) +
                      " >= 0.9");
    });

    criterion(7, "example 1: exact ratio, rate bound, verdicts across p", [](Harness& h) {
        const auto mu = make_family(FamilyTag::example1, 1000, 2.0);
        const auto tr = nza_sequence(mu, 1.0, {DStrategy::min_gap, {}}, 10, 10);
        const double pi2 = M_PI * M_PI;
        h.require_close(tr[0].ratio_nza, pi2 / 726.0, 1e-10, "d_10^2/t_10 = pi^2/726");
        h.require(tr[0].ratio_nza <= pi2 / 600.0 + 1e-15, "ratio <= pi^2/600 (= n^(p-4)/C_p)");
        for (double p : {1.5, 2.0, 3.9}) {
            const auto rep = classify(make_family(FamilyTag::example1, 1000, p), 1.0);
            h.require(rep.verdict == Verdict::fails_NZA,
                      "verdict fails_NZA at p = " + format_double(p) + ", got " +
                          to_string(rep.verdict));
        }
        const auto rep41 = classify(make_family(FamilyTag::example1, 1000, 4.1), 1.0);
        h.require(rep41.verdict == Verdict::inconclusive,
                  "verdict inconclusive at p = 4.1, got " + to_string(rep41.verdict));
    });

    criterion(8, "example 2: rate domination, UNZA verdict, gap warning", [](Harness& h) {
        const auto mu = make_family(FamilyTag::example2, 1000);
        const auto rep = classify(mu, 1.0);
        const double c = 6.0 / (M_PI * M_PI);
        for (const auto& t : rep.unza_traces) {
            const double rate =
                (1.0 + std::log(static_cast<double>(t.n))) *
                (1.0 + std::log(static_cast<double>(t.n))) / (c * t.n);
            h.require(t.ratio_unza_hi <= rate * (1 + 1e-12),
                      "ratio_unza(" + std::to_string(t.n) + ") <= (1+ln n)^2/(C n)");
        }
        h.require(rep.unza.trend == Trend::tends_to_zero,
                  "tends_to_zero fired by n = 10^3, got " + to_string(rep.unza.trend));
        h.require(rep.verdict == Verdict::fails_UNZA,
                  "verdict fails_UNZA, got " + to_string(rep.verdict));
        bool has_gap = false;
        for (const auto& w : rep.warnings) has_gap |= w.kind == "gap_discrepancy";
        h.require(has_gap, "gap-discrepancy warning present in the report");
    });

    criterion(9, "example 3: verdict, f_n critical values, discrete-min floor", [](Harness& h) {
        const auto rep = classify(make_family(FamilyTag::example3, 1000), 1.0);
        h.require(rep.verdict == Verdict::inconclusive,
                  "verdict inconclusive, got " + to_string(rep.verdict));

        const auto big = example3_min_bound(10000);
        h.require(big.r_n.has_value(), "r_n real at n = 10^4");
        h.require_close(*big.r_n, 2.0 / std::log(2.0), 1e-3, "r_n vs the limit 2/ln 2");
        const double limit_val = std::log(2.0) * std::log(2.0) * std::exp(2.0) / 8.0;
        h.require_close(*big.value_at_rn, limit_val, 1e-3,
                        "(1/(2n^2)) f(r_n)^2 vs the limit (ln 2)^2 e^2/8");

        // full brute-force scan agreement for n <= 500
        const double ln2 = std::log(2.0);
        for (int n = 2; n <= 500; ++n) {
            double best = (n + 1.0) * ln2 - std::log(3.0) -
                          2.0 * std::log(static_cast<double>(n)) - 2.0 * std::log(n + 1.0);
            for (int k = 1; k <= n - 1; ++k)
                best = std::min(best, -ln2 - 2.0 * std::log(static_cast<double>(n)) +
                                          2.0 * (std::log(static_cast<double>(n - k)) -
                                                 std::log(static_cast<double>(k)) +
                                                 0.5 * k * ln2));
            const auto a = example3_min_bound(n);
            if (std::abs(a.log_min_bound - best) > 1e-12 * std::abs(best))
                h.require(false, "brute-force scan mismatch at n = " + std::to_string(n));
            ++h.checks;
        }

        // stated floor: discrete min over k >= 0.03 for every n in [2, 10^4]
        double worst = 1e300;
        int worst_n = 0;
        for (int n = 2; n <= 10000; ++n) {
            const auto a = example3_min_bound(n);
            if (a.min_bound < worst) {
                worst = a.min_bound;
                worst_n = n;
            }
            ++h.checks;
        }
        std::ostringstream os;
        os << "discrete min over k >= 0.03 for all n in [2, 10^4]; smallest is " << worst
           << " at n = " << worst_n << " (k_star = " << example3_min_bound(worst_n).k_star
           << "), which sits below the stated floor";
        h.require(worst >= 0.03, os.str());
    });

    criterion(10, "subsequence selector on example1(p=2) atoms", [](Harness& h) {
        const auto mu = make_family(FamilyTag::example1, 300, 2.0);
        std::vector<AtomWithGap> atoms;
        for (int n = 1; n <= 300; ++n)
            atoms.push_back({mu.atoms[static_cast<std::size_t>(n - 1)].location,
                             mu.atoms[static_cast<std::size_t>(n - 1)].mass,
                             nearest_support_gap(mu, n)});
        const auto sel = select_nza_subsequence(atoms, Complex(0, 0));
        h.require(sel.selected.size() >= 50, "at least 50 selections available");
        const std::size_t k = std::min<std::size_t>(sel.selected.size(), 50);
        for (std::size_t i = 0; i < k; ++i) {
            for (std::size_t j = i + 1; j < k; ++j) {
                const double dist = std::abs(sel.set_a[i] - sel.set_a[j]);
                const double drop = std::abs(sel.set_a[i]) - std::abs(sel.set_a[j]);
                const bool ok = dist >= drop && drop > sel.d_selected[i] &&
                                sel.d_selected[i] > sel.d_selected[j];
                if (!ok)
                    h.require(false, "pairwise chain inequality fails at (" + std::to_string(i) +
                                         "," + std::to_string(j) + ")");
                ++h.checks;
            }
        }
        // A and B disjoint on the whole truncation
        for (const auto& a : sel.set_a)
            for (const auto& ball : sel.set_b) {
                const double dist = std::abs(a - ball.center);
                if (dist > 0.0 && dist < ball.radius)
                    h.require(false, "selected atom inside a selected ball");
                ++h.checks;
            }
    });

    criterion(11, "determinism: reruns are bit-identical", [](Harness& h) {
        Lemma1Config cfg;
        cfg.N = 64;
        cfg.trials = 5;
        cfg.seed = 7;
        const std::string a = lemma1_rows_to_csv(lemma1_experiment(cfg));
        const std::string b = lemma1_rows_to_csv(lemma1_experiment(cfg));
        h.require(!a.empty() && a == b, "library rerun produces identical CSV bytes");

#ifdef DTLAB_CLI_BIN
        namespace fs = std::filesystem;
        const fs::path base = fs::temp_directory_path() / "dtlab_acceptance_det";
        fs::remove_all(base);
        fs::create_directories(base);
        const std::string args = " simulate lemma1 --t 0.5 --s-prime 0.9 --s 1 --c 1 --N 32 "
                                 "--trials 2 --seed 11 --out ";
        const std::string run1 = std::string(DTLAB_CLI_BIN) + args + (base / "r1").string() +
                                 " > /dev/null 2>&1";
        const std::string run2 = std::string(DTLAB_CLI_BIN) + args + (base / "r2").string() +
                                 " > /dev/null 2>&1";
        h.require(std::system(run1.c_str()) == 0, "first CLI run succeeds");
        h.require(std::system(run2.c_str()) == 0, "second CLI run succeeds");
        auto slurp = [](const fs::path& p) {
            std::ifstream in(p, std::ios::binary);
            std::ostringstream ss;
            ss << in.rdbuf();
            return ss.str();
        };
        const std::string csv1 = slurp(base / "r1" / "experiment.csv");
        h.require(!csv1.empty() && csv1 == slurp(base / "r2" / "experiment.csv"),
                  "CLI rerun produces identical experiment.csv bytes");
#endif
    });

    std::printf("%s: %d criterion(s) failed\n", g_failed == 0 ? "OK" : "RESULT", g_failed);
    return g_failed;
}
