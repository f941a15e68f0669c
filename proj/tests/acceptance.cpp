// Acceptance gate: one pass/fail line per criterion, nonzero exit on any
// failure.  Tolerances and runtime budgets are pinned here, next to each
// check.  Criterion 8's distilled-over-baseline fidelity region is reported
// with the measured numbers either way; see notes in the repository README
// about the teleportation gain convention.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

#include "optodistill/config.hpp"
#include "optodistill/dynamics.hpp"
#include "optodistill/entanglement.hpp"
#include "optodistill/errors.hpp"
#include "optodistill/measurement.hpp"
#include "optodistill/quadrature.hpp"
#include "optodistill/runner.hpp"
#include "optodistill/teleportation.hpp"

using namespace optodistill;
namespace fs = std::filesystem;
using clk = std::chrono::steady_clock;

namespace {

int failures = 0;

void report(int idx, char sub, bool ok, const std::string& detail) {
    std::string label = "criterion " + std::to_string(idx);
    if (sub) label += std::string(1, sub);
    std::printf("[%s] %s: %s\n", ok ? "PASS" : "FAIL", label.c_str(), detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

double elapsed(clk::time_point t0) {
    return std::chrono::duration<double>(clk::now() - t0).count();
}

std::string num(double v) {
    std::ostringstream os;
    os.precision(9);
    os << v;
    return os.str();
}

ProtocolParams fig2(double g) {
    ProtocolParams p;
    p.lambda = 0.3;
    p.g = g;
    p.kappa = 0.01;
    p.set_reflectivity(0.1);
    p.t = M_PI;
    p.delta_q = 0.11;
    p.alpha = cplx(0.0, 0.0);
    p.n_max = 12;
    return p;
}

double outcome_sigma(const ProtocolParams& p) {
    return std::sqrt((1.0 + 2.0 * p.delta_q * p.delta_q) / 2.0);
}

void center_span(const JointStateCoefficients& jc, double& lo, double& hi) {
    lo = 1e300;
    hi = -1e300;
    for (const cplx& phi : jc.phi) {
        const double c = std::sqrt(2.0) * phi.real();
        lo = std::min(lo, c);
        hi = std::max(hi, c);
    }
}

std::string read_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    std::ostringstream buf;
    buf << is.rdbuf();
    return buf.str();
}

// --- criterion 1: baseline negativity ---------------------------------------
void criterion_1() {
    const clk::time_point t0 = clk::now();
    const double measured = negativity(tmsv_state(0.3, 12)).value;
    const double dt = elapsed(t0);
    const double target = 3.0 / 7.0;
    const bool ok = std::abs(measured - target) < 1e-6 && dt < 1.0;
    report(1, 0, ok,
           "baseline negativity at weight 0.3: eigensolver " + num(measured) + " vs 3/7 (|diff| " +
               num(std::abs(measured - target)) + " < 1e-6), " + num(dt) + " s (< 1 s)");
}

// --- criterion 2: outcome-density normalization and trace consistency -------
void criterion_2() {
    double worst_mass = 0.0;
    double worst_trace = 0.0;
    for (const double g : {0.01, 0.2, 1.0}) {
        const JointStateCoefficients jc = joint_coefficients(fig2(g));
        double lo, hi;
        center_span(jc, lo, hi);
        const double sigma = outcome_sigma(jc.params);
        const double mass = adaptive_quadrature([&](double q) { return outcome_pdf(jc, q); },
                                                lo - 12.0 * sigma, hi + 12.0 * sigma, 1e-11, 1e-13,
                                                20000);
        worst_mass = std::max(worst_mass, std::abs(mass - 1.0));
        for (int i = 0; i < 50; ++i) {
            const double q = lo - 3.0 * sigma + (hi - lo + 6.0 * sigma) * i / 49.0;
            const MeasurementRecord rec = conditional_state(jc, q);
            worst_trace = std::max(worst_trace, std::abs(rec.raw_trace - rec.pdf) / rec.pdf);
        }
    }
    const bool ok = worst_mass < 1e-8 && worst_trace < 1e-8;
    report(2, 0, ok,
           "outcome density: max |integral - 1| = " + num(worst_mass) +
               " (< 1e-8), max relative trace mismatch on 50-point grids = " + num(worst_trace) +
               " (< 1e-8)");
}

// --- criterion 3: three-coupling ratio curves --------------------------------
// The maximum is taken over populated outcomes (density > 1e-3): the ratio
// keeps rising along the empty outcome tail, so an unrestricted maximum is
// dominated by outcomes that essentially never occur, and the populated-
// support reading is the only one consistent with the argmax-inside-4-sigma
// clause for g = 0.2.  The g = 0.01 and g = 1 bounds still fail under this
// reading; the deviations are stable under cutoff changes and are analyzed in
// the README (posterior tilt at weak coupling; balanced two-branch coherence
// between resolved branches at strong coupling).
void criterion_3() {
    const clk::time_point t0 = clk::now();
    const double n0 = tmsv_negativity_closed_form(0.3, 12);
    struct Curve {
        double max_ratio = 0.0, argmax_q = 0.0, pdf_at_max = 0.0, mean = 0.0, sd = 0.0;
    };
    std::vector<Curve> curves;
    for (const double g : {0.01, 0.2, 1.0}) {
        const ProtocolParams p = fig2(g);
        const JointStateCoefficients jc = joint_coefficients(p);
        const std::vector<QScanPoint> scan =
            scan_conditional_negativity(jc, p.delta_q / 10.0, 6.0);
        Curve c;
        double w = 0.0, wq = 0.0, wqq = 0.0;
        for (const QScanPoint& pt : scan) {
            const double ratio = pt.n_d / n0;
            if (pt.pdf > 1e-3 && ratio > c.max_ratio) {
                c.max_ratio = ratio;
                c.argmax_q = pt.q;
                c.pdf_at_max = pt.pdf;
            }
            w += pt.pdf;
            wq += pt.pdf * pt.q;
            wqq += pt.pdf * pt.q * pt.q;
        }
        c.mean = wq / w;
        c.sd = std::sqrt(std::max(wqq / w - c.mean * c.mean, 0.0));
        curves.push_back(c);
    }
    const double dt = elapsed(t0);
    const bool in_time = dt < 60.0;
    const bool weak_ok = curves[0].max_ratio > 1.0 && curves[0].max_ratio < 1.05 && in_time;
    report(3, 'a', weak_ok,
           "g=0.01 max ratio over populated outcomes " + num(curves[0].max_ratio) +
               " at q=" + num(curves[0].argmax_q) + " (bound (1,1.05)); " + num(dt) +
               " s (< 60 s)" +
               (weak_ok ? "" : " — weak-coupling posterior tilt exceeds the bound at the "
                               "support edge; cutoff-stable, see README"));
    const bool mid_support = std::abs(curves[1].argmax_q - curves[1].mean) <= 4.0 * curves[1].sd;
    report(3, 'b', curves[1].max_ratio > 1.1 && mid_support && in_time,
           "g=0.2 max ratio " + num(curves[1].max_ratio) + " (> 1.1) at q=" +
               num(curves[1].argmax_q) + ", inside the 4-sigma window " + num(curves[1].mean) +
               " +- " + num(4.0 * curves[1].sd));
    const bool strong_ok = curves[2].max_ratio <= 1.02 && in_time;
    report(3, 'c', strong_ok,
           "g=1 max ratio over populated outcomes " + num(curves[2].max_ratio) +
               " (bound <= 1.02) at q=" + num(curves[2].argmax_q) + ", density there " +
               num(curves[2].pdf_at_max) +
               (strong_ok ? "" : " — balanced two-branch coherence midway between resolved "
                                 "branches exceeds the bound; cutoff-stable, see README"));
}

// --- criterion 4: favorable-region grid --------------------------------------
void criterion_4() {
    const clk::time_point t0 = clk::now();
    const std::vector<double> vals = {0.25, 0.3, 0.35};
    const std::vector<SweepResultRow> rows = sweep(vals, vals, fig2(0.2), 1.5);
    double min_prob = 1e300, min_ratio = 1e300;
    bool all_clean = true;
    for (const SweepResultRow& r : rows) {
        all_clean = all_clean && r.status == 0;
        min_prob = std::min(min_prob, r.success_prob);
        min_ratio = std::min(min_ratio, r.max_ratio);
    }
    const double dt = elapsed(t0);
    const bool ok = all_clean && min_prob > 0.15 && min_ratio > 1.0 && dt < 600.0;
    report(4, 0, ok,
           "3x3 grid over couplings/weights {0.25,0.3,0.35}: min success probability " +
               num(min_prob) + " (> 0.15), min best ratio " + num(min_ratio) + " (> 1), " +
               num(dt) + " s (< 600 s)");
}

// --- criterion 5: success-probability ordering --------------------------------
void criterion_5() {
    const double pr_mid = success_probability(fig2(0.2));
    const double pr_strong = success_probability(fig2(1.0));
    const bool ok = pr_mid > pr_strong;
    report(5, 0, ok,
           "success probability ordering at weight 0.3: Pr(g=0.2) = " + num(pr_mid) +
               " > Pr(g=1) = " + num(pr_strong));
}

// --- criterion 6: independent-oracle equivalences ----------------------------
void criterion_6() {
    // (a) closed-form joint coefficients against the pure-branch reference
    ProtocolParams pa = fig2(0.2);
    pa.kappa = 0.0;
    pa.theta = M_PI;
    pa.alpha = cplx(0.9, 0.4);
    const JointStateCoefficients jc = joint_coefficients(pa);
    const std::vector<IdealBranch> branches =
        ideal_evolution_oracle(pa.lambda, pa.g, pa.alpha, pa.t, pa.n_max);
    double dev_a = 0.0;
    for (int n = 0; n <= pa.n_max; ++n) {
        dev_a = std::max(dev_a, std::abs(jc.phi[n] - branches[n].label));
        for (int m = 0; m <= pa.n_max; ++m) {
            const cplx lhs = jc.global_weight * jc.c(n, m) * std::exp(-jc.d(n, m));
            const cplx rhs = branches[n].amplitude * std::conj(branches[m].amplitude);
            dev_a = std::max(dev_a, std::abs(lhs - rhs));
        }
    }
    report(6, 'a', dev_a < 1e-12,
           "lossless evolution vs pure-branch reference: max deviation " + num(dev_a) +
               " (< 1e-12)");

    // (b) dephasing exponent closed form against adaptive quadrature
    ProtocolParams pb = fig2(0.6);
    pb.kappa = 0.35;
    pb.alpha = cplx(1.1, -0.7);
    double dev_b = 0.0;
    for (const auto& nm : {std::pair<int, int>{1, 0}, {3, 2}, {5, 1}, {4, 4}, {2, 0}})
        dev_b = std::max(dev_b, std::abs(decoherence_exponent(pb, nm.first, nm.second) -
                                         decoherence_exponent_quadrature(pb, nm.first, nm.second)));
    report(6, 'b', dev_b < 1e-8,
           "dephasing exponent closed form vs quadrature: max deviation " + num(dev_b) +
               " (< 1e-8)");

    // (c) measurement overlap closed form against quadrature
    ProtocolParams pc = fig2(0.45);
    pc.kappa = 0.08;
    pc.alpha = cplx(0.6, -0.35);
    double dev_c = 0.0;
    for (const double q : {-0.5, 0.8, 2.0})
        for (const auto& nm : {std::pair<int, int>{0, 0}, {2, 1}, {5, 3}, {7, 7}})
            dev_c = std::max(dev_c, std::abs(povm_overlap(pc, q, nm.first, nm.second) -
                                             povm_overlap_quadrature(pc, q, nm.first, nm.second)));
    report(6, 'c', dev_c < 1e-10,
           "measurement overlap closed form vs quadrature: max deviation " + num(dev_c) +
               " (< 1e-10)");

    // (d) eq6 expansion against the dense projection oracle, with the
    //     discrepancy report escape hatch
    ProtocolParams pd = fig2(0.2);
    pd.theta = M_PI;
    const Eq6Diagnosis diag = diagnose_eq6(pd, 0.0, cplx(0.5, 0.0), 5, 2.0);
    const bool agrees = diag.max_dev_verbatim < 1e-6;
    const bool report_ok = !agrees && diag.max_dev_production < 1e-6;
    if (agrees) {
        report(6, 'd', true,
               "eq6 expansion vs projection oracle: max relative deviation " +
                   num(diag.max_dev_verbatim) + " (< 1e-6)");
    } else {
        report(6, 'd', report_ok,
               "eq6 expansion vs projection oracle: discrepancy report — max relative "
               "deviation " +
                   num(diag.max_dev_verbatim) + " at entry (" + std::to_string(diag.first_diff_n) +
                   "," + std::to_string(diag.first_diff_m) +
                   ") on a 5x5 outcome grid; corrected production path agrees to " +
                   num(diag.max_dev_production) + " (< 1e-6); full table via the diagnose-eq6 "
                   "experiment");
    }
}

// --- criterion 7: displacement shift identity ---------------------------------
void criterion_7() {
    ProtocolParams shifted = fig2(0.2);
    shifted.alpha = 0.5 * std::exp(cplx(0.0, M_PI / 3.0));
    const ProtocolParams base = fig2(0.2);
    const cplx z(shifted.kappa / 2.0, 1.0);
    const double delta = std::sqrt(2.0) * (shifted.alpha * std::exp(-z * shifted.t)).real();
    const JointStateCoefficients jc_s = joint_coefficients(shifted);
    const JointStateCoefficients jc_0 = joint_coefficients(base);
    double dev_pdf = 0.0;
    for (int i = 0; i < 25; ++i) {
        const double q = -2.0 + 8.0 * i / 24.0;
        const double a = outcome_pdf(jc_s, q);
        const double b = outcome_pdf(jc_0, q - delta);
        dev_pdf = std::max(dev_pdf, std::abs(a - b) / b);
    }
    double dev_neg = 0.0;
    for (const double q : {0.0, 0.75, 1.5, 2.25, 3.0}) {
        const double nd_s = negativity(conditional_state(jc_s, q).conditional_state).value;
        const double nd_0 =
            negativity(conditional_state(jc_0, q - delta).conditional_state).value;
        dev_neg = std::max(dev_neg, std::abs(nd_s - nd_0));
    }
    const bool ok = dev_pdf < 1e-12 && dev_neg < 1e-3;
    report(7, 0, ok,
           "displacement shift by " + num(delta) + ": max relative density deviation " +
               num(dev_pdf) + " (< 1e-12), max conditional-negativity deviation " + num(dev_neg) +
               " (< 1e-3)");
}

// --- criterion 8: teleportation benchmark and ratio region --------------------
void criterion_8() {
    const clk::time_point t0 = clk::now();
    const double f_classical =
        average_fidelity_oracle(tmsv_state(0.0, 12), cplx(0.5, 0.3), 40, 6.0);
    const bool base_ok = std::abs(f_classical - 0.5) < 0.01;
    report(8, 'a', base_ok,
           "unentangled-resource average fidelity via dense oracle: " + num(f_classical) +
               " (0.5 +- 0.01)");

    ProtocolParams p3 = fig2(0.2);
    p3.alpha = 2.0 * std::exp(cplx(0.0, M_PI / 4.0));
    const std::vector<double> mags = linspace(0.0, 2.0, 12);
    const std::vector<double> phases = linspace(0.0, 2.0 * M_PI, 12);
    const std::vector<FidelityMapRow> rows = fidelity_ratio_map(p3, 0.0, mags, phases, 1e-4);
    int above = 0, clean = 0;
    double max_ratio = 0.0, f_d_at_max = 0.0, f_0_at_max = 0.0;
    for (const FidelityMapRow& r : rows) {
        if (r.status != 0) continue;
        ++clean;
        if (r.ratio > 1.0) ++above;
        if (r.ratio > max_ratio) {
            max_ratio = r.ratio;
            f_d_at_max = r.f_d;
            f_0_at_max = r.f_0;
        }
    }
    const double dt = elapsed(t0);
    const bool region_ok = above > 0;
    const bool ok = region_ok && clean == static_cast<int>(rows.size()) && dt < 900.0;
    report(8, 'b', ok,
           "12x12 distilled-vs-baseline fidelity map: " + std::to_string(above) + "/" +
               std::to_string(clean) + " cells above ratio 1; best ratio " + num(max_ratio) +
               " (f_d " + num(f_d_at_max) + ", f_0 " + num(f_0_at_max) + "); " + num(dt) +
               " s (< 900 s)" +
               (region_ok ? ""
                          : " — no favorable region exists under the unit-gain convention; "
                            "measured numbers recorded, see README"));
}

// --- criterion 9: cutoff convergence ------------------------------------------
void criterion_9() {
    double worst = 0.0;
    for (const double lambda : {0.3, 0.4}) {
        ProtocolParams p12 = fig2(0.2);
        p12.lambda = lambda;
        ProtocolParams p14 = p12;
        p14.n_max = 14;
        worst = std::max(worst, std::abs(negativity(tmsv_state(lambda, 12)).value -
                                         negativity(tmsv_state(lambda, 14)).value));
        worst = std::max(worst, std::abs(distillation_ratio(p12, 1.5).n_d -
                                         distillation_ratio(p14, 1.5).n_d));
    }
    ProtocolParams f12 = fig2(0.2);
    f12.alpha = 2.0 * std::exp(cplx(0.0, M_PI / 4.0));
    ProtocolParams f14 = f12;
    f14.n_max = 14;
    const cplx beta(0.5, 0.0);
    worst = std::max(worst,
                     std::abs(average_fidelity(f12, 0.0, beta) - average_fidelity(f14, 0.0, beta)));
    worst = std::max(worst, std::abs(average_fidelity_resource(tmsv_state(0.3, 12), beta) -
                                     average_fidelity_resource(tmsv_state(0.3, 14), beta)));
    report(9, 0, worst < 1e-3,
           "cutoff 12 -> 14: max change over reported negativities and fidelities " + num(worst) +
               " (< 1e-3)");
}

// --- criterion 10: deterministic output ----------------------------------------
void criterion_10() {
    const fs::path dir =
        fs::temp_directory_path() / ("optodistill_acceptance_" + std::to_string(::getpid()));
    RunConfig cfg = preset_config("fig2a");
    cfg.out_dir = dir.string();
    const RunOutputs first = run_experiment(cfg, "masked");
    const std::string bytes_first = read_file(first.csv_path);
    const RunOutputs second = run_experiment(cfg, "masked");
    const std::string bytes_second = read_file(second.csv_path);
    const bool ok = !bytes_first.empty() && bytes_first == bytes_second;
    report(10, 0, ok,
           "fig2a preset run twice (timestamp masked): " +
               std::string(ok ? "byte-identical CSV, " : "CSV bytes differ, ") +
               std::to_string(bytes_first.size()) + " bytes");
    fs::remove_all(dir);
}

}  // namespace

int main() {
    try {
        criterion_1();
        criterion_2();
        criterion_3();
        criterion_4();
        criterion_5();
        criterion_6();
        criterion_7();
        criterion_8();
        criterion_9();
        criterion_10();
    } catch (const std::exception& e) {
        std::printf("[FAIL] unexpected exception: %s\n", e.what());
        ++failures;
    }
    std::printf("%d check(s) failed\n", failures);
    return failures == 0 ? 0 : 1;
}
