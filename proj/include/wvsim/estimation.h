#ifndef WVSIM_ESTIMATION_H
#define WVSIM_ESTIMATION_H

#include <array>
#include <cstdint>
#include <optional>

#include "wvsim/qstate.h"
#include "wvsim/weakmodel.h"

namespace wvsim {

/// Meter statistics conditioned on one post-selection outcome.
struct ConditionalPair {
    double p_d = 0.5;
    double p_a = 0.5;
    /// Number of post-selected events behind the pair. May be an expected
    /// (non-integer) count. Absent for analytic inputs.
    std::optional<double> n_events;

    /// Throws InvalidArgument unless p_d + p_a = 1 within 1e-9 and both are in [0, 1].
    static ConditionalPair make(double p_d, double p_a, std::optional<double> n_events = std::nullopt);
    static ConditionalPair from_distribution(const JointDistribution &dist, PostSelectOutcome f,
                                             std::optional<double> n_events = std::nullopt);
    /// Throws ZeroProbability when both counts are zero.
    static ConditionalPair from_counts(std::int64_t count_d, std::int64_t count_a);
};

struct EstimateResult {
    double epsilon_hat = 0.0;
    std::optional<double> sigma_epsilon;
    PostSelectOutcome f_used = PostSelectOutcome::A;
    double wv_reference = 0.0;
};

struct FisherReport {
    std::array<double, 2> per_f{};
    double total = 0.0;

    double contribution(PostSelectOutcome f) const noexcept { return per_f[static_cast<int>(f)]; }
};

/// Moment estimator eps_hat = (p(D|f) - p(A|f)) / (2 wv). With n_events the
/// binomial error sigma = sqrt(p_D p_A / n) / |wv| is attached.
/// Throws WeakValueReferenceZero when |wv| < 1e-8.
EstimateResult estimate_epsilon(const ConditionalPair &cond, double wv_reference,
                                PostSelectOutcome f = PostSelectOutcome::A);

/// Weak value from the change of the conditional meter probabilities between
/// coupling eps_probe and zero coupling:
///   1/2 * mean over m of sign_m [ln p(m|f; eps) - ln p(m|f; 0)] / eps,
/// with sign +1 for D and -1 for A.
/// Throws ZeroProbability if a referenced probability is zero and
/// ZeroProbeCoupling if eps_probe is zero.
double extract_weak_value(const JointDistribution &p_at_eps, const JointDistribution &p_at_zero, PostSelectOutcome f,
                          double eps_probe);

/// Per-outcome Fisher information 4 p(f) (Re wv_f)^2 and its sum.
/// Near-orthogonal post-selection uses the continuous extension 4 (Re <f|A|psi>)^2.
FisherReport fisher_information(const QubitState &psi, const PostSelectBasis &basis, const MeterModel &meter,
                                const Observable &obs);

/// Fisher information as inferred from model probabilities with the ideal
/// formula: per_f = 4 p(f; 0) wv_f^2 with wv_f taken from extract_weak_value.
/// This is the quantity an experiment reports; gate imperfections show up as
/// departures from the exact value.
FisherReport apparent_fisher_information(const JointDistribution &p_at_eps, const JointDistribution &p_at_zero,
                                         double eps_probe);

/// Minimal variance 1 / (n_trials * information). Throws ZeroInformation when
/// either factor is not positive.
double cramer_rao_bound(double information, double n_trials);
double cramer_rao_bound(const FisherReport &report, double n_trials);

}  // namespace wvsim

#endif
