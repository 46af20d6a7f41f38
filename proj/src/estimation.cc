#include "wvsim/estimation.h"

#include <cmath>
#include <string>

#include "wvsim/error.h"

namespace wvsim {

ConditionalPair ConditionalPair::make(double p_d, double p_a, std::optional<double> n_events) {
    if (!(p_d >= 0 && p_d <= 1 && p_a >= 0 && p_a <= 1) || std::abs(p_d + p_a - 1) > 1e-9) {
        throw Error(ErrorCode::InvalidArgument, "conditional probabilities must lie in [0, 1] and sum to 1");
    }
    if (n_events && !(*n_events > 0 && std::isfinite(*n_events))) {
        throw Error(ErrorCode::InvalidArgument, "event count must be positive");
    }
    return ConditionalPair{p_d, p_a, n_events};
}

ConditionalPair ConditionalPair::from_distribution(const JointDistribution &dist, PostSelectOutcome f,
                                                   std::optional<double> n_events) {
    return make(dist.conditional(MeterOutcome::D, f), dist.conditional(MeterOutcome::A, f), n_events);
}

ConditionalPair ConditionalPair::from_counts(std::int64_t count_d, std::int64_t count_a) {
    if (count_d < 0 || count_a < 0) {
        throw Error(ErrorCode::InvalidArgument, "counts must be nonnegative");
    }
    std::int64_t n = count_d + count_a;
    if (n == 0) {
        throw Error(ErrorCode::ZeroProbability, "no post-selected events");
    }
    double nd = static_cast<double>(n);
    return ConditionalPair{static_cast<double>(count_d) / nd, static_cast<double>(count_a) / nd, nd};
}

EstimateResult estimate_epsilon(const ConditionalPair &cond, double wv_reference, PostSelectOutcome f) {
    if (!(std::abs(wv_reference) >= kSingularityThreshold)) {
        throw Error(ErrorCode::WeakValueReferenceZero, "reference weak value is (numerically) zero");
    }
    EstimateResult r;
    r.epsilon_hat = (cond.p_d - cond.p_a) / (2 * wv_reference);
    r.f_used = f;
    r.wv_reference = wv_reference;
    if (cond.n_events) {
        r.sigma_epsilon = std::sqrt(cond.p_d * cond.p_a / *cond.n_events) / std::abs(wv_reference);
    }
    return r;
}

double extract_weak_value(const JointDistribution &p_at_eps, const JointDistribution &p_at_zero, PostSelectOutcome f,
                          double eps_probe) {
    if (eps_probe == 0 || !std::isfinite(eps_probe)) {
        throw Error(ErrorCode::ZeroProbeCoupling, "probe coupling must be nonzero");
    }
    double sum = 0;
    for (auto m : kMeterOutcomes) {
        double with = p_at_eps.conditional(m, f);
        double without = p_at_zero.conditional(m, f);
        if (!(with > 0 && without > 0)) {
            throw Error(ErrorCode::ZeroProbability, std::string("p(") + outcome_name(m) + "|" + outcome_name(f) +
                                                        ") is zero; the log derivative is undefined");
        }
        double sign = m == MeterOutcome::D ? 1.0 : -1.0;
        sum += sign * (std::log(with) - std::log(without)) / eps_probe;
    }
    return 0.5 * (sum / 2);
}

FisherReport fisher_information(const QubitState &psi, const PostSelectBasis &basis, const MeterModel &meter,
                                const Observable &obs) {
    // Only the normalization sum_m w_m kappa_m^2 = 1 enters, and MeterModel enforces it.
    (void)meter;
    FisherReport report;
    for (auto f : kPostSelectOutcomes) {
        const QubitState &final_state = basis.state(f);
        Complex overlap = inner_product(final_state, psi);
        Complex element = matrix_element(final_state, obs, psi);
        double magnitude = std::abs(overlap);
        // p(f) (Re wv)^2 = (Re[<f|A|psi> conj(<f|psi>)])^2 / |<f|psi>|^2, which stays bounded as the overlap vanishes.
        double projected =
            magnitude >= kSingularityThreshold ? (element * std::conj(overlap)).real() / magnitude : element.real();
        report.per_f[static_cast<int>(f)] = 4 * projected * projected;
    }
    report.total = report.per_f[0] + report.per_f[1];
    return report;
}

FisherReport apparent_fisher_information(const JointDistribution &p_at_eps, const JointDistribution &p_at_zero,
                                         double eps_probe) {
    FisherReport report;
    for (auto f : kPostSelectOutcomes) {
        double wv = extract_weak_value(p_at_eps, p_at_zero, f, eps_probe);
        report.per_f[static_cast<int>(f)] = 4 * p_at_zero.p_postselect(f) * wv * wv;
    }
    report.total = report.per_f[0] + report.per_f[1];
    return report;
}

double cramer_rao_bound(double information, double n_trials) {
    if (!(information > 0) || !(n_trials > 0)) {
        throw Error(ErrorCode::ZeroInformation, "Cramer-Rao bound needs positive information and trial count");
    }
    return 1.0 / (n_trials * information);
}

double cramer_rao_bound(const FisherReport &report, double n_trials) {
    return cramer_rao_bound(report.total, n_trials);
}

}  // namespace wvsim
