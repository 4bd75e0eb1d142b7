#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "dtlab/subspaces.hpp"

using namespace dtlab;

namespace {

AtomicMeasure uniform_annulus(double r_in, double r_out) {
    AtomicMeasure m;
    m.continuous.push_back({Complex(0, 0), r_in, r_out, 1.0, RadialProfile::annulus_uniform});
    m.validate();
    return m;
}

} // namespace

TEST_CASE("spectral subspace of the block model: zero region is the leading block") {
    const BlockModel b = sample_block_model(0.5, uniform_annulus(0.9, 1.0), 1.0, 32, 5);
    const auto sub = spectral_subspace(b.Z, RegionSpec::closed_annulus(Complex(0, 0), 0.0, 0.45));
    REQUIRE(sub.dim == b.m);
    // exactly the coordinate span: no reordering was needed
    Matrix expected = Matrix::Zero(32, b.m);
    expected.topRows(b.m) = Matrix::Identity(b.m, b.m);
    CHECK((sub.basis - expected).norm() <= 1e-13);
}

TEST_CASE("annulus subspace equals colspan [Y; I]") {
    const BlockModel b = sample_block_model(0.5, uniform_annulus(0.9, 1.0), 1.0, 32, 6);
    const Matrix y = compute_y_series(b);
    const auto sub = spectral_subspace(b.Z, RegionSpec::closed_annulus(Complex(0, 0), 0.45, 2.0));
    REQUIRE(sub.dim == 32 - b.m);
    Philox g(8, 0);
    for (int rep = 0; rep < 5; ++rep) {
        Vector v(32 - b.m);
        for (int i = 0; i < 32 - b.m; ++i) v(i) = g.complex_gaussian();
        Vector w(32);
        w.head(b.m) = y * v;
        w.tail(32 - b.m) = v;
        w.normalize();
        const Vector proj = sub.basis * (sub.basis.adjoint() * w);
        CHECK((proj - w).norm() <= 1e-9);
    }
}

TEST_CASE("normal diagonal matrix gives coordinate spans") {
    Matrix d = Matrix::Zero(4, 4);
    d(3, 3) = 2.0;
    const auto sub = spectral_subspace(d, RegionSpec::closed_annulus(Complex(0, 0), 1.0, 3.0));
    REQUIRE(sub.dim == 1);
    CHECK(std::abs(std::abs(sub.basis(3, 0)) - 1.0) <= 1e-14);
}

TEST_CASE("boundary eigenvalue is classified inside with a warning") {
    Matrix d = Matrix::Zero(2, 2);
    d(0, 0) = 1.0; // exactly on the annulus boundary
    d(1, 1) = 5.0;
    std::vector<std::string> warnings;
    const auto sub =
        spectral_subspace(d, RegionSpec::closed_annulus(Complex(0, 0), 1.0, 2.0), &warnings);
    CHECK(sub.dim == 1);
    CHECK(warnings.size() == 1);
}

TEST_CASE("principal_cos on coordinate planes") {
    const AngleBound bound = lemma1_cos_weak(1, 1);
    SubspaceBasis u{Matrix::Zero(3, 1), RegionSpec::singleton(Complex(0, 0)), 1};
    SubspaceBasis v{Matrix::Zero(3, 1), RegionSpec::singleton(Complex(0, 0)), 1};
    u.basis(0, 0) = 1.0;
    v.basis(1, 0) = 1.0;
    CHECK(principal_cos(u, v, bound).cos_alpha == doctest::Approx(0.0));

    v.basis(0, 0) = 1.0 / std::sqrt(2.0);
    v.basis(1, 0) = 1.0 / std::sqrt(2.0);
    const auto m = principal_cos(u, v, bound);
    CHECK(m.cos_alpha == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));

    // symmetric in the arguments
    CHECK(principal_cos(v, u, bound).cos_alpha == doctest::Approx(m.cos_alpha).epsilon(1e-12));
}

TEST_CASE("block-model angle equals sigma_max(Y)/sqrt(1+sigma_max^2)") {
    for (int n : {16, 64}) {
        for (auto o : {Orientation::zero_first, Orientation::annulus_first}) {
            const BlockModel b = sample_block_model(0.4, uniform_annulus(0.9, 1.0), 1.0, n, 71,
                                                    static_cast<std::uint64_t>(n), o);
            const Matrix y = compute_y_series(b);
            const double sig = operator_norm(y);
            const double expected = sig / std::sqrt(1.0 + sig * sig);

            const double rin = 0.5 * b.s_prime;
            const auto sub0 =
                spectral_subspace(b.Z, RegionSpec::closed_annulus(Complex(0, 0), 0.0, rin));
            const auto sub1 =
                spectral_subspace(b.Z, RegionSpec::closed_annulus(Complex(0, 0), rin, 2.0 * b.s));
            const auto m = principal_cos(sub0, sub1, lemma1_cos_weak(1, 1));
            CHECK(std::abs(m.cos_alpha - expected) <= 1e-10);

            // complementary dims and a genuinely direct sum
            CHECK(sub0.dim + sub1.dim == n);
            Matrix stacked(n, n);
            stacked.leftCols(sub0.dim) = sub0.basis;
            stacked.rightCols(sub1.dim) = sub1.basis;
            const auto sv = svd_values(stacked);
            CHECK(sv.back() > 1e-3);
        }
    }
}

TEST_CASE("region and complement subspace dims sum to N, stacked full rank") {
    const BlockModel b = sample_block_model(0.4, uniform_annulus(0.9, 1.0), 1.0, 24, 13);
    const RegionSpec ball = RegionSpec::closed_annulus(Complex(0, 0), 0.0, 0.45);
    const auto inside = spectral_subspace(b.Z, ball);
    const auto outside = spectral_subspace(b.Z, RegionSpec::complement(ball));
    CHECK(inside.dim + outside.dim == 24);
    Matrix stacked(24, 24);
    stacked.leftCols(inside.dim) = inside.basis;
    stacked.rightCols(outside.dim) = outside.basis;
    CHECK(svd_values(stacked).back() > 1e-3);
}

TEST_CASE("empirical angle grows with c, tracking the bound") {
    double prev = 0.0;
    for (double c : {0.5, 1.0, 2.0, 10.0}) {
        Lemma1Config cfg;
        cfg.c = c;
        cfg.N = 48;
        cfg.trials = 6;
        cfg.seed = 17;
        const auto rep = lemma1_experiment(cfg);
        CHECK(rep.summary.mean_cos > prev);
        CHECK(rep.summary.mean_cos >= 0.9 * rep.summary.bound_sharp);
        prev = rep.summary.mean_cos;
    }
    // the sharp bound itself approaches 1 as c grows with s fixed
    CHECK(lemma1_cos_lower(1.0, 10.0, 0.5).cos_lower > 0.99);
}

TEST_CASE("lemma1_experiment summary at modest size") {
    Lemma1Config cfg;
    cfg.N = 64;
    cfg.trials = 8;
    cfg.seed = 2025;
    const Lemma1Report rep = lemma1_experiment(cfg);
    REQUIRE(rep.rows.size() == 16); // both orientations
    CHECK(rep.summary.bound_sharp == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-12));
    CHECK(rep.summary.mean_cos >= 0.9 * rep.summary.bound_sharp);
    CHECK(rep.summary.min_cos >= rep.summary.bound_weak - 0.1);
    CHECK(rep.summary.satisfied_fraction == 1.0);
    CHECK(rep.summary.max_y_route_gap <= 1e-9);
    CHECK(rep.summary.max_residual_conjugation <= 1e-10);
    CHECK(rep.summary.mean_tau_frob_y >= 0.9 * 0.25);
    CHECK(rep.summary.mean_tau_frob_z2inv >= 0.9);
    for (const auto& r : rep.rows) {
        CHECK(r.dim_zero + r.dim_annulus == cfg.N);
        CHECK(r.cos_alpha > 0.0);
        CHECK(r.cos_alpha <= 1.0);
    }
}

TEST_CASE("orientation swap at mirrored t gives statistically equal angles") {
    Lemma1Config a;
    a.t = 0.2;
    a.N = 64;
    a.trials = 12;
    a.seed = 5;
    a.both_orientations = false; // zero_first only
    Lemma1Config b = a;
    b.t = 0.8; // same block sizes with the roles swapped
    const double mean_a = lemma1_experiment(a).summary.mean_cos;
    const double mean_b = lemma1_experiment(b).summary.mean_cos;
    CHECK(std::abs(mean_a - mean_b) <= 0.1);
}

TEST_CASE("theorem2 with a full-mass step reduces to lemma1") {
    AtomicMeasure mix;
    mix.atoms.push_back({Complex(0, 0), 0.5});
    mix.continuous.push_back({Complex(0, 0), 0.9, 1.0, 0.5, RadialProfile::annulus_uniform});
    mix.validate();

    Theorem2Config cfg;
    cfg.measure = mix;
    cfg.N = 48;
    cfg.trials = 4;
    cfg.seed = 99;
    cfg.schedule = {1.0};
    cfg.s_prime_ratio = 0.9;
    const Theorem2Report t2 = theorem2_experiment(cfg);
    REQUIRE(t2.rows.size() == 4);
    CHECK(t2.summary.steps[0].mass_bn == doctest::Approx(1.0).epsilon(1e-12));

    Lemma1Config l1;
    l1.N = 48;
    l1.trials = 4;
    l1.seed = 99;
    l1.both_orientations = false;
    const Lemma1Report l1rep = lemma1_experiment(l1);
    for (int i = 0; i < 4; ++i)
        CHECK(std::abs(t2.rows[static_cast<std::size_t>(i)].cos_alpha -
                       l1rep.rows[static_cast<std::size_t>(i)].cos_alpha) <= 1e-12);
}

TEST_CASE("theorem2 schedule: trend, bound and skip notices") {
    const auto fam = make_family(FamilyTag::example1, 400, 2.0);
    Theorem2Config cfg;
    cfg.measure = with_extra_atom(fam, Complex(0, 0), 0.5);
    cfg.N = 64;
    cfg.trials = 4;
    cfg.seed = 31;
    cfg.schedule = {0.5, 0.25, 0.125, 1e-7}; // the last captures no atoms
    const Theorem2Report rep = theorem2_experiment(cfg);
    REQUIRE(rep.summary.steps.size() == 4);
    CHECK(rep.summary.steps[3].skipped);
    CHECK(!rep.summary.steps[3].notice.empty());
    for (std::size_t j = 0; j + 1 < rep.summary.steps.size(); ++j) {
        if (rep.summary.steps[j].skipped) continue;
        CHECK(rep.summary.steps[j].mean_cos >= rep.summary.steps[j].bound_weak * 0.9);
        if (!rep.summary.steps[j + 1].skipped)
            CHECK(rep.summary.steps[j].bound_weak <= rep.summary.steps[j + 1].bound_weak + 1e-12);
    }
    CHECK(rep.summary.mean_cos_nondecreasing);

    Theorem2Config bad = cfg;
    bad.measure = fam; // no atom at zero
    CHECK_THROWS(theorem2_experiment(bad));
}
