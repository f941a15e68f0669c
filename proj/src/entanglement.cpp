#include "optodistill/entanglement.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "optodistill/eigen_hermitian.hpp"
#include "optodistill/errors.hpp"
#include "optodistill/measurement.hpp"

namespace optodistill {

NegativityResult negativity(const TwoModeDensityMatrix& rho) {
    const TwoModeDensityMatrix pt = partial_transpose(rho);
    const ComplexMatrix& m = pt.mat;
    const int d = m.dim();
    if (m.hermiticity_defect() > 1e-12 * std::max(m.max_abs(), 1e-300))
        throw NotHermitian("negativity: partial transpose is not Hermitian");
    // Structural zeros survive the index permutation exactly, so connected
    // components of the nonzero pattern are independent eigenblocks; the
    // conditional states here split into total-photon-number blocks, which
    // cuts the eigensolve cost by orders of magnitude.
    std::vector<int> comp(d, -1);
    std::vector<std::vector<int>> blocks;
    for (int s = 0; s < d; ++s) {
        if (comp[s] >= 0) continue;
        const int id = static_cast<int>(blocks.size());
        blocks.emplace_back();
        std::vector<int> stack{s};
        comp[s] = id;
        while (!stack.empty()) {
            const int i = stack.back();
            stack.pop_back();
            blocks[id].push_back(i);
            for (int j = 0; j < d; ++j) {
                if (comp[j] < 0 && (m.at(i, j) != 0.0 || m.at(j, i) != 0.0)) {
                    comp[j] = id;
                    stack.push_back(j);
                }
            }
        }
    }
    NegativityResult out;
    out.n_max_used = rho.n_max;
    for (std::vector<int>& idx : blocks) {
        std::sort(idx.begin(), idx.end());
        const int b = static_cast<int>(idx.size());
        ComplexMatrix sub(b);
        for (int r = 0; r < b; ++r)
            for (int c = 0; c < b; ++c) sub.at(r, c) = m.at(idx[r], idx[c]);
        for (double e : hermitian_eigenvalues(sub)) {
            if (e < 0.0) {
                out.negative_eigenvalues.push_back(e);
                out.value -= e;
            }
        }
    }
    std::sort(out.negative_eigenvalues.begin(), out.negative_eigenvalues.end());
    return out;
}

TwoModeDensityMatrix tmsv_state(double lambda, int n_max) {
    TwoModeDensityMatrix rho(n_max);
    double norm = 0.0;
    for (int n = 0; n <= n_max; ++n) norm += std::pow(lambda, 2 * n);
    for (int n = 0; n <= n_max; ++n)
        for (int m = 0; m <= n_max; ++m)
            rho.at(n, n, m, m) = std::pow(lambda, n + m) / norm;
    return rho;
}

double tmsv_negativity_closed_form(double lambda, int n_max) {
    double sum = 0.0, norm = 0.0;
    for (int n = 0; n <= n_max; ++n) {
        const double c = std::pow(lambda, n);
        sum += c;
        norm += c * c;
    }
    sum /= std::sqrt(norm);
    return 0.5 * (sum * sum - 1.0);
}

DistillationRatio distillation_ratio(const ProtocolParams& p, double q) {
    if (p.lambda == 0.0)
        throw ZeroBaseline("distillation_ratio: lambda = 0 has zero baseline negativity");
    const JointStateCoefficients jc = joint_coefficients(p);
    DistillationRatio out;
    out.n_d = negativity(conditional_state(jc, q).conditional_state).value;
    out.n_0 = negativity(tmsv_state(p.lambda, p.n_max)).value;
    out.ratio = out.n_d / out.n_0;
    return out;
}

namespace {

void scan_bounds(const JointStateCoefficients& jc, double span_sigma, double& lo, double& hi) {
    const double dq2 = jc.params.delta_q * jc.params.delta_q;
    const double sigma = std::sqrt(0.5 * (1.0 + 2.0 * dq2));
    double cmin = std::numeric_limits<double>::infinity();
    double cmax = -cmin;
    for (const cplx& phi : jc.phi) {
        const double c = std::sqrt(2.0) * phi.real();
        cmin = std::min(cmin, c);
        cmax = std::max(cmax, c);
    }
    lo = cmin - span_sigma * sigma;
    hi = cmax + span_sigma * sigma;
}

}  // namespace

std::vector<QScanPoint> scan_conditional_negativity(const JointStateCoefficients& jc,
                                                    double q_step, double span_sigma) {
    if (!(q_step > 0.0)) throw ConfigError("scan_conditional_negativity: step must be > 0");
    double lo, hi;
    scan_bounds(jc, span_sigma, lo, hi);
    const int cells = std::max(1, static_cast<int>(std::ceil((hi - lo) / q_step)));
    std::vector<QScanPoint> out(cells + 1);
    for (int i = 0; i <= cells; ++i) {
        const double q = lo + (hi - lo) * i / cells;
        QScanPoint& pt = out[i];
        pt.q = q;
        const MeasurementRecord rec = conditional_state(jc, q);
        pt.pdf = rec.pdf;
        pt.n_d = negativity(rec.conditional_state).value;
    }
    return out;
}

namespace {

double success_mass_from_scan(const JointStateCoefficients& jc,
                              const std::vector<QScanPoint>& scan, double n0) {
    auto excess = [&](double q) {
        return negativity(conditional_state(jc, q).conditional_state).value - n0;
    };
    double mass = 0.0;
    for (size_t i = 0; i + 1 < scan.size(); ++i) {
        const QScanPoint& a = scan[i];
        const QScanPoint& b = scan[i + 1];
        const bool ina = a.n_d > n0;
        const bool inb = b.n_d > n0;
        if (ina && inb) {
            mass += 0.5 * (a.pdf + b.pdf) * (b.q - a.q);
        } else if (ina || inb) {
            // refine the acceptance boundary inside this cell
            double qlo = a.q, qhi = b.q;
            bool lo_in = ina;
            int budget = 100;
            while (qhi - qlo > 1e-6) {
                if (--budget < 0)
                    throw GridTooCoarse("success_probability: bisection budget exhausted");
                const double mid = 0.5 * (qlo + qhi);
                if ((excess(mid) > 0.0) == lo_in)
                    qlo = mid;
                else
                    qhi = mid;
            }
            const double root = 0.5 * (qlo + qhi);
            const double pdf_root = outcome_pdf(jc, root);
            if (ina)
                mass += 0.5 * (a.pdf + pdf_root) * (root - a.q);
            else
                mass += 0.5 * (pdf_root + b.pdf) * (b.q - root);
        }
    }
    return std::clamp(mass, 0.0, 1.0);
}

}  // namespace

double success_probability(const ProtocolParams& p, double q_step) {
    if (p.lambda == 0.0)
        throw ZeroBaseline("success_probability: lambda = 0 has zero baseline negativity");
    const JointStateCoefficients jc = joint_coefficients(p);
    const double n0 = negativity(tmsv_state(p.lambda, p.n_max)).value;
    const double step = q_step > 0.0 ? q_step : p.delta_q / 10.0;
    const std::vector<QScanPoint> scan = scan_conditional_negativity(jc, step, 6.0);
    return success_mass_from_scan(jc, scan, n0);
}

std::vector<SweepResultRow> sweep(const std::vector<double>& g_values,
                                  const std::vector<double>& lambda_values,
                                  const ProtocolParams& fixed, double designated_q) {
    if (g_values.empty() || lambda_values.empty())
        throw ConfigError("sweep: empty parameter grid");
    std::vector<SweepResultRow> rows;
    rows.reserve(g_values.size() * lambda_values.size());
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (double g : g_values) {
        for (double lambda : lambda_values) {
            SweepResultRow row;
            row.g = g;
            row.lambda = lambda;
            try {
                ProtocolParams p = fixed;
                p.g = g;
                p.lambda = lambda;
                p.validate();
                if (lambda == 0.0)
                    throw ZeroBaseline("sweep: lambda = 0 has zero baseline negativity");
                const JointStateCoefficients jc = joint_coefficients(p);
                row.n0 = negativity(tmsv_state(lambda, p.n_max)).value;
                const std::vector<QScanPoint> scan =
                    scan_conditional_negativity(jc, p.delta_q / 10.0, 6.0);
                row.max_ratio = -std::numeric_limits<double>::infinity();
                for (const QScanPoint& pt : scan) {
                    const double r = pt.n_d / row.n0;
                    if (r > row.max_ratio) {
                        row.max_ratio = r;
                        row.argmax_q = pt.q;
                    }
                }
                row.ratio_at_q =
                    negativity(conditional_state(jc, designated_q).conditional_state).value /
                    row.n0;
                row.success_prob = success_mass_from_scan(jc, scan, row.n0);
            } catch (...) {
                row.status = current_exception_status();
                row.success_prob = row.ratio_at_q = row.n0 = row.max_ratio = row.argmax_q = nan;
            }
            rows.push_back(row);
        }
    }
    return rows;
}

}  // namespace optodistill
