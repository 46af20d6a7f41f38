#ifndef WVSIM_MONTECARLO_H
#define WVSIM_MONTECARLO_H

#include <array>
#include <cstdint>

#include "wvsim/estimation.h"
#include "wvsim/gatesim.h"
#include "wvsim/weakmodel.h"

namespace wvsim {

enum class ModelTag { Linear, ExactIdeal, ExactPpbs };
enum class SamplingMode { Multinomial, Poisson };

const char *model_name(ModelTag tag);

/// Which probability model generates p(m, f).
struct ModelSpec {
    ModelTag tag = ModelTag::Linear;
    GateParams gate{};
};

/// Joint distribution of the default experiment (S_HV observable, diagonal
/// probe meter) for system state `theta` under the chosen model.
JointDistribution model_distribution(const ModelSpec &model, PolarAngle theta, double epsilon,
                                     const PostSelectBasis &basis);

struct CountRecord {
    /// counts[m][f]
    std::array<std::array<std::int64_t, 2>, 2> counts{};
    std::int64_t n_total = 0;
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;
    ModelTag model_tag = ModelTag::Linear;
    SamplingMode mode = SamplingMode::Multinomial;

    std::int64_t count(MeterOutcome m, PostSelectOutcome f) const noexcept {
        return counts[static_cast<int>(m)][static_cast<int>(f)];
    }
};

/// Draws coincidence counts from `dist`. Multinomial mode draws exactly n
/// events; Poisson mode draws every cell independently with mean n p.
/// Randomness comes only from Philox4x32(seed, stream).
CountRecord sample_counts(const JointDistribution &dist, std::int64_t n, std::uint64_t seed,
                          SamplingMode mode = SamplingMode::Multinomial, std::uint64_t stream = 0);

struct EnsembleConfig {
    double theta_deg = 0.0;
    double epsilon = 0.0;
    ModelSpec model{};
    std::int64_t n_per_replica = 100000;
    int n_replicas = 200;
    std::uint64_t base_seed = 0;
    PostSelectOutcome f = PostSelectOutcome::A;
    double postselect_deg = 270.0;
    SamplingMode mode = SamplingMode::Multinomial;
    /// 0 picks std::thread::hardware_concurrency().
    unsigned threads = 0;
};

struct EnsembleStats {
    double mean_eps_hat = 0.0;
    double var_eps_hat = 0.0;
    /// Replicas that entered the statistics.
    int n_replicas = 0;
    int n_discarded = 0;
    /// 1 / (n_per_replica * F_f) with F_f the per-outcome Fisher contribution.
    double crb = 0.0;
    double wv_reference = 0.0;
    /// eps_hat of the noiseless model conditionals, i.e. the deterministic part of the estimator.
    double eps_hat_model = 0.0;

    double standard_error() const;
    double var_over_crb() const { return var_eps_hat / crb; }
};

/// Replica r is sampled from Philox4x32(base_seed, r), so results do not depend
/// on how replicas are scheduled across threads. Replicas with a zero count in
/// (D, f) or (A, f) are discarded; more than 1% discarded raises
/// TooManyDiscardedReplicas.
EnsembleStats run_ensemble(const EnsembleConfig &config);

}  // namespace wvsim

#endif
