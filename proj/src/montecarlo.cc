#include "wvsim/montecarlo.h"

#include <algorithm>
#include <boost/random/binomial_distribution.hpp>
#include <boost/random/poisson_distribution.hpp>
#include <cmath>
#include <exception>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "wvsim/error.h"
#include "wvsim/philox.h"

namespace wvsim {

const char *model_name(ModelTag tag) {
    switch (tag) {
        case ModelTag::Linear:
            return "linear";
        case ModelTag::ExactIdeal:
            return "exact-ideal";
        case ModelTag::ExactPpbs:
            return "exact-ppbs";
    }
    return "unknown";
}

JointDistribution model_distribution(const ModelSpec &model, PolarAngle theta, double epsilon,
                                     const PostSelectBasis &basis) {
    QubitState psi = linear_pol_state(theta);
    switch (model.tag) {
        case ModelTag::Linear:
            return joint_probabilities_linear(psi, basis, MeterModel::diagonal_probe(), stokes_hv(),
                                              CouplingStrength{epsilon});
        case ModelTag::ExactIdeal:
            return exact_joint_probabilities_ideal(psi, epsilon, basis);
        case ModelTag::ExactPpbs:
            return exact_joint_probabilities(psi, epsilon, model.gate, basis);
    }
    throw Error(ErrorCode::InvalidArgument, "unknown model");
}

namespace {

// Cells are drawn in the fixed order (D,D), (D,A), (A,D), (A,A).
constexpr std::array<std::pair<MeterOutcome, PostSelectOutcome>, 4> kCellOrder{{
    {MeterOutcome::D, PostSelectOutcome::D},
    {MeterOutcome::D, PostSelectOutcome::A},
    {MeterOutcome::A, PostSelectOutcome::D},
    {MeterOutcome::A, PostSelectOutcome::A},
}};

std::int64_t draw_binomial(Philox4x32 &rng, std::int64_t trials, double p) {
    if (trials == 0 || p <= 0) {
        return 0;
    }
    if (p >= 1) {
        return trials;
    }
    return boost::random::binomial_distribution<std::int64_t, double>(trials, p)(rng);
}

std::int64_t draw_poisson(Philox4x32 &rng, double mean) {
    if (mean <= 0) {
        return 0;
    }
    return boost::random::poisson_distribution<std::int64_t, double>(mean)(rng);
}

}  // namespace

CountRecord sample_counts(const JointDistribution &dist, std::int64_t n, std::uint64_t seed, SamplingMode mode,
                          std::uint64_t stream) {
    if (n <= 0) {
        throw Error(ErrorCode::InvalidArgument, "number of events must be positive");
    }
    Philox4x32 rng(seed, stream);
    CountRecord record;
    record.seed = seed;
    record.stream = stream;
    record.mode = mode;

    if (mode == SamplingMode::Multinomial) {
        std::int64_t remaining = n;
        double mass_left = 1.0;
        for (size_t k = 0; k < kCellOrder.size(); k++) {
            auto [m, f] = kCellOrder[k];
            std::int64_t drawn;
            if (k + 1 == kCellOrder.size()) {
                drawn = remaining;
            } else {
                double p = dist.p(m, f);
                double conditional = mass_left > 0 ? std::clamp(p / mass_left, 0.0, 1.0) : 0.0;
                drawn = draw_binomial(rng, remaining, conditional);
                mass_left -= p;
            }
            record.counts[static_cast<int>(m)][static_cast<int>(f)] = drawn;
            remaining -= drawn;
        }
        record.n_total = n;
    } else {
        std::int64_t total = 0;
        for (auto [m, f] : kCellOrder) {
            std::int64_t drawn = draw_poisson(rng, static_cast<double>(n) * dist.p(m, f));
            record.counts[static_cast<int>(m)][static_cast<int>(f)] = drawn;
            total += drawn;
        }
        record.n_total = total;
    }
    return record;
}

double EnsembleStats::standard_error() const { return n_replicas > 0 ? std::sqrt(var_eps_hat / n_replicas) : 0.0; }

EnsembleStats run_ensemble(const EnsembleConfig &config) {
    if (config.n_replicas < 2) {
        throw Error(ErrorCode::InvalidArgument, "an ensemble needs at least 2 replicas");
    }
    if (config.n_per_replica <= 0) {
        throw Error(ErrorCode::InvalidArgument, "events per replica must be positive");
    }
    const PolarAngle theta(config.theta_deg);
    const PostSelectBasis basis = PostSelectBasis::from_angle(PolarAngle(config.postselect_deg));
    const QubitState psi = linear_pol_state(theta);
    const Observable obs = stokes_hv();
    const PostSelectOutcome f = config.f;

    const JointDistribution dist = model_distribution(config.model, theta, config.epsilon, basis);
    const double wv = weak_value(psi, basis.state(f), obs).real();
    const FisherReport fisher = fisher_information(psi, basis, MeterModel::diagonal_probe(), obs);

    EnsembleStats stats;
    stats.wv_reference = wv;
    stats.crb = cramer_rao_bound(fisher.contribution(f), static_cast<double>(config.n_per_replica));
    stats.eps_hat_model = estimate_epsilon(ConditionalPair::from_distribution(dist, f), wv, f).epsilon_hat;

    std::vector<std::optional<double>> estimates(static_cast<size_t>(config.n_replicas));
    auto run_replica = [&](int r) {
        CountRecord counts =
            sample_counts(dist, config.n_per_replica, config.base_seed, config.mode, static_cast<std::uint64_t>(r));
        counts.model_tag = config.model.tag;
        std::int64_t count_d = counts.count(MeterOutcome::D, f);
        std::int64_t count_a = counts.count(MeterOutcome::A, f);
        if (count_d == 0 || count_a == 0) {
            return;
        }
        estimates[static_cast<size_t>(r)] =
            estimate_epsilon(ConditionalPair::from_counts(count_d, count_a), wv, f).epsilon_hat;
    };

    unsigned threads = config.threads ? config.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = std::min<unsigned>(threads, static_cast<unsigned>(config.n_replicas));
    if (threads <= 1) {
        for (int r = 0; r < config.n_replicas; r++) {
            run_replica(r);
        }
    } else {
        std::vector<std::exception_ptr> failures(threads);
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; t++) {
            pool.emplace_back([&, t] {
                try {
                    for (int r = static_cast<int>(t); r < config.n_replicas; r += static_cast<int>(threads)) {
                        run_replica(r);
                    }
                } catch (...) {
                    failures[t] = std::current_exception();
                }
            });
        }
        for (auto &th : pool) {
            th.join();
        }
        for (auto &e : failures) {
            if (e) {
                std::rethrow_exception(e);
            }
        }
    }

    // Aggregation always runs in replica order so the result is schedule independent.
    double sum = 0;
    int used = 0;
    for (const auto &e : estimates) {
        if (e) {
            sum += *e;
            used++;
        }
    }
    stats.n_replicas = used;
    stats.n_discarded = config.n_replicas - used;
    if (stats.n_discarded * 100 > config.n_replicas || used < 2) {
        throw Error(ErrorCode::TooManyDiscardedReplicas, std::to_string(stats.n_discarded) + " of " +
                                                             std::to_string(config.n_replicas) +
                                                             " replicas had a zero count in the post-selected column");
    }
    stats.mean_eps_hat = sum / used;
    double sq = 0;
    for (const auto &e : estimates) {
        if (e) {
            sq += (*e - stats.mean_eps_hat) * (*e - stats.mean_eps_hat);
        }
    }
    stats.var_eps_hat = sq / (used - 1);
    return stats;
}

}  // namespace wvsim
