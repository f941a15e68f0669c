#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "optodistill/entanglement.hpp"
#include "optodistill/errors.hpp"
#include "optodistill/measurement.hpp"
#include "optodistill/params.hpp"

using namespace optodistill;

namespace {

ProtocolParams fig2_params() {
    ProtocolParams p;
    p.lambda = 0.3;
    p.g = 0.2;
    p.kappa = 0.01;
    p.set_reflectivity(0.1);
    p.t = M_PI;
    p.delta_q = 0.11;
    p.alpha = 0.0;
    p.n_max = 12;
    return p;
}

ComplexMatrix random_density(int d, std::mt19937& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    ComplexMatrix m(d);
    for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c) m.at(r, c) = cplx(gauss(rng), gauss(rng));
    ComplexMatrix rho(d);
    for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c) {
            cplx s = 0.0;
            for (int k = 0; k < d; ++k) s += m.at(r, k) * std::conj(m.at(c, k));
            rho.at(r, c) = s;
        }
    rho.scale(1.0 / rho.trace());
    return rho;
}

void add_product_term(TwoModeDensityMatrix& out, double weight, const ComplexMatrix& a,
                      const ComplexMatrix& b) {
    const int d = out.mode_dim();
    for (int n1 = 0; n1 < d; ++n1)
        for (int n2 = 0; n2 < d; ++n2)
            for (int m1 = 0; m1 < d; ++m1)
                for (int m2 = 0; m2 < d; ++m2)
                    out.at(n1, n2, m1, m2) += weight * a.at(n1, m1) * b.at(n2, m2);
}

TwoModeDensityMatrix bell_pair() {
    TwoModeDensityMatrix rho(1);
    rho.at(0, 0, 0, 0) = 0.5;
    rho.at(0, 0, 1, 1) = 0.5;
    rho.at(1, 1, 0, 0) = 0.5;
    rho.at(1, 1, 1, 1) = 0.5;
    return rho;
}

}  // namespace

TEST_CASE("product states carry no negativity") {
    std::mt19937 rng(777u);
    for (int trial = 0; trial < 3; ++trial) {
        const ComplexMatrix a = random_density(4, rng);
        const ComplexMatrix b = random_density(4, rng);
        TwoModeDensityMatrix rho(3);
        add_product_term(rho, 1.0, a, b);
        const NegativityResult res = negativity(rho);
        CHECK(res.value < 1e-12);
        CHECK(res.negative_eigenvalues.empty());
        CHECK(res.n_max_used == 3);
    }
}

TEST_CASE("random separable mixtures stay positive under partial transpose") {
    std::mt19937 rng(4242u);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    for (int trial = 0; trial < 3; ++trial) {
        TwoModeDensityMatrix rho(3);
        std::vector<double> w(5);
        double tot = 0.0;
        for (double& x : w) {
            x = 0.05 + u01(rng);
            tot += x;
        }
        for (double x : w)
            add_product_term(rho, x / tot, random_density(4, rng), random_density(4, rng));
        CHECK(negativity(rho).value < 1e-10);
    }
}

TEST_CASE("maximally entangled two-level pair has negativity one half") {
    const NegativityResult res = negativity(bell_pair());
    CHECK(res.value == doctest::Approx(0.5).epsilon(1e-12));
    REQUIRE(res.negative_eigenvalues.size() == 1);
    CHECK(res.negative_eigenvalues[0] == doctest::Approx(-0.5).epsilon(1e-12));
}

TEST_CASE("squeezed-vacuum negativity: eigensolver vs Schmidt closed form") {
    const NegativityResult res = negativity(tmsv_state(0.3, 12));
    const double closed = tmsv_negativity_closed_form(0.3, 12);
    CHECK(std::abs(res.value - closed) < 1e-10);
    CHECK(std::abs(res.value - 3.0 / 7.0) < 1e-6);
}

TEST_CASE("baseline negativity approaches the geometric-series value") {
    for (double lambda : {0.1, 0.2, 0.3, 0.4}) {
        const double eig = negativity(tmsv_state(lambda, 14)).value;
        const double closed = tmsv_negativity_closed_form(lambda, 14);
        CHECK(std::abs(eig - closed) < 1e-6);
        // the truncated value sits below lambda/(1-lambda) by O(lambda^{n_max+1})
        const double tol = std::max(1e-6, 4.0 * std::pow(lambda, 15));
        CHECK(std::abs(eig - lambda / (1.0 - lambda)) < tol);
    }
}

TEST_CASE("negativity is invariant under a local phase rotation of mode 2") {
    ProtocolParams p = fig2_params();
    const TwoModeDensityMatrix rho = conditional_state(p, 1.5).conditional_state;
    const double base = negativity(rho).value;
    const double theta = 0.73;
    TwoModeDensityMatrix rotated = rho;
    const int d = rho.mode_dim();
    for (int n1 = 0; n1 < d; ++n1)
        for (int n2 = 0; n2 < d; ++n2)
            for (int m1 = 0; m1 < d; ++m1)
                for (int m2 = 0; m2 < d; ++m2)
                    rotated.at(n1, n2, m1, m2) =
                        rho.at(n1, n2, m1, m2) * std::exp(cplx(0.0, theta * (n2 - m2)));
    CHECK(std::abs(negativity(rotated).value - base) < 1e-9);
}

TEST_CASE("conditional negativity is stable under cutoff growth") {
    ProtocolParams p = fig2_params();
    const double at12 = negativity(conditional_state(p, 1.5).conditional_state).value;
    ProtocolParams p14 = p;
    p14.n_max = 14;
    const double at14 = negativity(conditional_state(p14, 1.5).conditional_state).value;
    CHECK(std::abs(at14 - at12) / at12 < 1e-4);
}

TEST_CASE("distillation ratio at the headline operating point") {
    ProtocolParams p = fig2_params();
    const DistillationRatio r = distillation_ratio(p, 1.5);
    CHECK(r.n_0 == doctest::Approx(tmsv_negativity_closed_form(0.3, 12)).epsilon(1e-9));
    CHECK(r.ratio == doctest::Approx(r.n_d / r.n_0).epsilon(1e-14));
    CHECK(r.ratio > 1.5);
    CHECK(r.ratio < 2.5);
}

TEST_CASE("distillation ratio is undefined without squeezing") {
    ProtocolParams p = fig2_params();
    p.lambda = 0.0;
    CHECK_THROWS_AS(distillation_ratio(p, 1.5), ZeroBaseline);
    CHECK_THROWS_AS(success_probability(p), ZeroBaseline);
}

TEST_CASE("ratios converge when the cutoff doubles") {
    ProtocolParams p8 = fig2_params();
    p8.n_max = 8;
    ProtocolParams p16 = fig2_params();
    p16.n_max = 16;
    for (double q : {0.5, 1.0, 1.5, 2.0}) {
        const double r8 = distillation_ratio(p8, q).ratio;
        const double r16 = distillation_ratio(p16, q).ratio;
        CHECK(std::abs(r16 - r8) < 1e-3);
    }
}

TEST_CASE("success probability is insensitive to halving the outcome grid step") {
    ProtocolParams p = fig2_params();
    const double coarse = success_probability(p, p.delta_q / 10.0);
    const double fine = success_probability(p, p.delta_q / 20.0);
    CHECK(coarse >= 0.0);
    CHECK(coarse <= 1.0);
    CHECK(std::abs(fine - coarse) < 1e-3);
}

TEST_CASE("no interaction means no distillable outcomes") {
    ProtocolParams p = fig2_params();
    p.g = 0.0;
    p.alpha = 0.0;
    CHECK(success_probability(p) == 0.0);
}

TEST_CASE("scan rejects a non-positive step") {
    ProtocolParams p = fig2_params();
    const JointStateCoefficients jc = joint_coefficients(p);
    CHECK_THROWS_AS(scan_conditional_negativity(jc, 0.0), ConfigError);
}

TEST_CASE("one-cell sweep reproduces the direct calls") {
    ProtocolParams fixed = fig2_params();
    const std::vector<SweepResultRow> rows = sweep({0.2}, {0.3}, fixed, 1.5);
    REQUIRE(rows.size() == 1);
    const SweepResultRow& row = rows[0];
    CHECK(row.status == 0);
    CHECK(row.g == 0.2);
    CHECK(row.lambda == 0.3);
    ProtocolParams p = fixed;
    p.g = 0.2;
    p.lambda = 0.3;
    const DistillationRatio r = distillation_ratio(p, 1.5);
    CHECK(row.ratio_at_q == doctest::Approx(r.ratio).epsilon(1e-12));
    CHECK(row.n0 == doctest::Approx(r.n_0).epsilon(1e-12));
    CHECK(row.success_prob == doctest::Approx(success_probability(p)).epsilon(1e-12));
    CHECK(std::abs(row.n0 - 0.3 / 0.7) < 1e-6);
    CHECK(row.max_ratio >= row.ratio_at_q - 1e-12);
    CHECK(row.success_prob >= 0.0);
    CHECK(row.success_prob <= 1.0);
}

TEST_CASE("sweep rows record per-cell failures instead of aborting") {
    ProtocolParams fixed = fig2_params();
    const std::vector<SweepResultRow> rows = sweep({0.2}, {0.0, 0.3}, fixed, 1.5);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].status == 6);
    CHECK(std::isnan(rows[0].success_prob));
    CHECK(std::isnan(rows[0].ratio_at_q));
    CHECK(rows[1].status == 0);
    CHECK(rows[1].success_prob > 0.0);
}

TEST_CASE("sweep refuses empty grids") {
    ProtocolParams fixed = fig2_params();
    CHECK_THROWS_AS(sweep({}, {0.3}, fixed, 1.5), ConfigError);
    CHECK_THROWS_AS(sweep({0.2}, {}, fixed, 1.5), ConfigError);
}
