// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "wvsim/error.h"
#include "wvsim/estimation.h"
#include "wvsim/gatesim.h"
#include "wvsim/montecarlo.h"
#include "wvsim/sweep.h"
#include "wvsim/weakmodel.h"

using namespace wvsim;

namespace {

constexpr auto kA = PostSelectOutcome::A;
constexpr auto kD = PostSelectOutcome::D;
const MeterModel kMeter = MeterModel::diagonal_probe();
const PostSelectBasis kBasis = PostSelectBasis::diagonal();

struct Outcome {
    bool pass = true;
    std::string detail;
};

double deg2rad(double deg) { return deg * std::numbers::pi / 180; }

QubitState state_at(double deg) { return linear_pol_state(PolarAngle(deg)); }

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string fmt(const char *pattern, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof(buf), pattern, args...);
    return buf;
}

JointDistribution linear(double deg, double eps) {
    return joint_probabilities_linear(state_at(deg), kBasis, kMeter, stokes_hv(), {eps});
}

double wv_a(double deg) { return weak_value(state_at(deg), kBasis.state(kA), stokes_hv()).real(); }

// 1. Fisher information is 4 for every linear input polarization.
Outcome fisher_constancy() {
    auto start = std::chrono::steady_clock::now();
    double worst_total = 0, worst_sum = 0;
    for (int deg = 0; deg < 360; deg++) {
        auto r = fisher_information(state_at(deg), kBasis, kMeter, stokes_hv());
        worst_total = std::max(worst_total, std::abs(r.total - 4));
        worst_sum = std::max(worst_sum, std::abs(r.contribution(kA) + r.contribution(kD) - r.total));
    }
    double elapsed = seconds_since(start);
    Outcome o;
    o.pass = worst_total <= 1e-9 && worst_sum <= 1e-9 && elapsed < 1.0;
    o.detail = fmt("max|F-4|=%.2e max|F_A+F_D-F|=%.2e runtime=%.3fs", worst_total, worst_sum, elapsed);
    return o;
}

// 2. Weak value for post-selection on A equals tan(theta/2 + 45 deg) and diverges toward 90.
Outcome closed_form_weak_value() {
    double worst = 0;
    for (int k = 0; k < 3600; k++) {
        double deg = k * 0.1;
        if (deg > 85 && deg < 95) {
            continue;
        }
        double expected = std::tan(deg2rad(deg / 2 + 45));
        worst = std::max(worst, std::abs(wv_a(deg) - expected));
    }
    bool monotone = true;
    double previous = 0;
    for (int k = 800; k < 900; k++) {  // 80.0 .. 89.9 from below
        double mag = std::abs(wv_a(k * 0.1));
        monotone = monotone && mag > previous;
        previous = mag;
    }
    previous = 0;
    for (int k = 1000; k > 900; k--) {  // 100.0 .. 90.1 from above
        double mag = std::abs(wv_a(k * 0.1));
        monotone = monotone && mag > previous;
        previous = mag;
    }
    Outcome o;
    o.pass = worst <= 1e-10 && monotone;
    o.detail = fmt("max|wv-tan|=%.2e on [0,85]u[95,360) step 0.1; |wv| monotone toward 90 from both sides: %s", worst,
                   monotone ? "yes" : "no");
    return o;
}

// 3. Finite-difference weak value at eps = 0.08 within 2%, and within 1e-6 at eps = 1e-6.
Outcome finite_difference_weak_value() {
    double worst_op = 0, worst_limit = 0, first_fail = -1;
    for (int deg = 0; deg <= 60; deg++) {
        double truth = wv_a(deg);
        double at_op = extract_weak_value(linear(deg, 0.08), linear(deg, 0), kA, 0.08);
        double at_limit = extract_weak_value(linear(deg, 1e-6), linear(deg, 0), kA, 1e-6);
        double rel_op = std::abs(at_op / truth - 1);
        worst_op = std::max(worst_op, rel_op);
        worst_limit = std::max(worst_limit, std::abs(at_limit / truth - 1));
        if (rel_op > 0.02 && first_fail < 0) {
            first_fail = deg;
        }
    }
    Outcome o;
    o.pass = worst_op <= 0.02 && worst_limit <= 1e-6;
    o.detail = fmt("eps=0.08: max rel err=%.4f (tol 0.02%s); eps=1e-6: max rel err=%.2e (tol 1e-6)", worst_op,
                   first_fail >= 0 ? fmt(", first exceeded at theta=%g", first_fail).c_str() : "", worst_limit);
    return o;
}

// 4. Estimator round trip on linear data, accuracy and monotone bias on exact ideal-gate data.
Outcome estimator_round_trip() {
    double worst_linear = 0;
    int checked = 0;
    for (int deg = 0; deg < 360; deg++) {
        for (double eps : {0.01, 0.04, 0.08}) {
            JointDistribution d;
            try {
                d = linear(deg, eps);
            } catch (const Error &e) {
                if (e.code() == ErrorCode::LinearizationInvalid) {
                    continue;
                }
                throw;
            }
            auto wv = try_weak_value(state_at(deg), kBasis.state(kA), stokes_hv());
            if (!wv || std::abs(wv->real()) < kSingularityThreshold || d.p_postselect(kA) <= 0) {
                continue;
            }
            double eps_hat = estimate_epsilon(ConditionalPair::from_distribution(d, kA), wv->real()).epsilon_hat;
            worst_linear = std::max(worst_linear, std::abs(eps_hat - eps));
            checked++;
        }
    }
    auto exact_eps_hat = [](double deg) {
        auto d = exact_joint_probabilities_ideal(PolarAngle(deg), 0.08, kBasis);
        return estimate_epsilon(ConditionalPair::from_distribution(d, kA), wv_a(deg)).epsilon_hat;
    };
    double worst_exact = 0, first_fail = -1;
    for (int deg = 0; deg <= 45; deg++) {
        double rel = std::abs(exact_eps_hat(deg) / 0.08 - 1);
        worst_exact = std::max(worst_exact, rel);
        if (rel > 0.01 && first_fail < 0) {
            first_fail = deg;
        }
    }
    bool monotone = true;
    double previous = -1;
    std::string biases;
    for (double deg : {0.0, 30.0, 60.0, 80.0, 85.0}) {
        double bias = std::abs(exact_eps_hat(deg) - 0.08);
        monotone = monotone && bias >= previous;
        previous = bias;
        biases += fmt("%s%.5f", biases.empty() ? "" : ",", bias);
    }
    Outcome o;
    o.pass = worst_linear <= 1e-12 && worst_exact <= 0.01 && monotone;
    o.detail = fmt(
        "linear: max|eps_hat-eps|=%.2e over %d points; exact ideal theta<=45: max rel err=%.4f (tol 0.01%s); |bias| "
        "at 0,30,60,80,85 = %s nondecreasing: %s",
        worst_linear, checked, worst_exact,
        first_fail >= 0 ? fmt(", first exceeded at theta=%g", first_fail).c_str() : "", biases.c_str(),
        monotone ? "yes" : "no");
    return o;
}

// 5. Inverse binomial variance equals n times the per-outcome Fisher contribution.
Outcome error_information_duality() {
    const double n = 1e6;
    double worst = 0;
    for (double deg : {0.0, 30.0, 60.0}) {
        auto d = linear(deg, 0.0);
        auto fisher = fisher_information(state_at(deg), kBasis, kMeter, stokes_hv());
        for (auto f : kPostSelectOutcomes) {
            double wv = weak_value(state_at(deg), kBasis.state(f), stokes_hv()).real();
            auto r = estimate_epsilon(ConditionalPair::from_distribution(d, f, n * d.p_postselect(f)), wv, f);
            double inv_var = 1 / (*r.sigma_epsilon * *r.sigma_epsilon);
            worst = std::max(worst, std::abs(inv_var / (n * fisher.contribution(f)) - 1));
        }
    }
    Outcome o;
    o.pass = worst <= 1e-9;
    o.detail = fmt("max relative mismatch=%.2e (tol 1e-9) at theta=0,30,60 for f=A,D", worst);
    return o;
}

// 6. Monte Carlo variance saturates the Cramer-Rao bound; runs are reproducible.
Outcome monte_carlo_crb() {
    auto start = std::chrono::steady_clock::now();
    bool pass = true, identical = true;
    std::string detail;
    for (double deg : {0.0, 45.0}) {
        EnsembleConfig cfg;
        cfg.theta_deg = deg;
        cfg.epsilon = 0;
        cfg.n_per_replica = 1000000;
        cfg.n_replicas = 200;
        cfg.base_seed = 7;
        auto render = [](const EnsembleStats &s) {
            return format_number(s.mean_eps_hat) + "," + format_number(s.var_eps_hat) + "," +
                   std::to_string(s.n_replicas) + "," + format_number(s.crb);
        };
        auto first = run_ensemble(cfg);
        auto second = run_ensemble(cfg);
        identical = identical && render(first) == render(second) && first.var_eps_hat == second.var_eps_hat;
        double ratio = first.var_over_crb();  // var * n * F_A
        pass = pass && ratio >= 0.9 && ratio <= 1.1;
        detail += fmt("theta=%g: var*n*F=%.4f; ", deg, ratio);
    }
    double elapsed = seconds_since(start);
    Outcome o;
    o.pass = pass && identical && elapsed < 30;
    o.detail = detail + fmt("seed 7 reruns byte-identical: %s; runtime=%.2fs", identical ? "yes" : "no", elapsed);
    return o;
}

// 7. Linearization error shrinks quadratically with eps.
Outcome linear_vs_exact_order() {
    auto max_gap = [](double eps) {
        double gap = 0;
        for (int deg = 0; deg <= 75; deg += 15) {
            auto exact = exact_joint_probabilities_ideal(PolarAngle(deg), eps, kBasis);
            // The raw first-order formula: at theta = 75, eps = 0.08 one entry is negative.
            auto lin = linear_formula_table(state_at(deg), kBasis, kMeter, stokes_hv(), eps);
            for (auto m : kMeterOutcomes) {
                for (auto f : kPostSelectOutcomes) {
                    gap = std::max(gap, std::abs(exact.p(m, f) - lin[static_cast<int>(m)][static_cast<int>(f)]));
                }
            }
        }
        return gap;
    };
    double g8 = max_gap(0.08), g4 = max_gap(0.04);
    Outcome o;
    o.pass = g8 / g4 >= 3 && g8 / g4 <= 5;
    o.detail = fmt("max gap eps=0.08: %.3e, eps=0.04: %.3e, ratio=%.3f (want [3,5])", g8, g4, g8 / g4);
    return o;
}

// 8. Compensated PPBS equals the ideal gate; imperfect PPBS shows the Fisher artifacts.
Outcome gate_model_identity() {
    double worst = 0;
    const double thetas[] = {0, 37, 74, 111, 148, 185, 222, 259, 296, 333};
    const double epsilons[] = {0.0, 0.01, 0.02, 0.04, 0.08, 0.1, -0.05, 0.3, 0.06, 0.03};
    for (int k = 0; k < 10; k++) {
        auto ppbs = exact_joint_probabilities(PolarAngle(thetas[k]), epsilons[k], GateParams::compensated(), kBasis);
        auto ideal = exact_joint_probabilities_ideal(PolarAngle(thetas[k]), epsilons[k], kBasis);
        for (auto m : kMeterOutcomes) {
            for (auto f : kPostSelectOutcomes) {
                worst = std::max(worst, std::abs(ppbs.p(m, f) - ideal.p(m, f)));
            }
        }
    }

    const double probe = 1e-4;
    auto apparent = [&](const GateParams &params, double deg) {
        auto with = exact_joint_probabilities(PolarAngle(deg), probe, params, kBasis);
        auto without = exact_joint_probabilities(PolarAngle(deg), 0.0, params, kBasis);
        return apparent_fisher_information(with, without, probe);
    };
    // Mirror symmetry of the ideal gate: F_A(theta) = F_D(theta + 180).
    double ideal_asym = 0, uncomp_asym = 0, uncomp_dev = INFINITY, imperfect_max = 0;
    const GateParams uncompensated = GateParams::uncompensated();
    const GateParams imperfect{1.0, 0.55, 0.55};
    for (int deg = 0; deg < 180; deg += 5) {
        if (deg == 90) {
            continue;
        }
        auto c1 = apparent(GateParams::compensated(), deg), c2 = apparent(GateParams::compensated(), deg + 180);
        auto u1 = apparent(uncompensated, deg), u2 = apparent(uncompensated, deg + 180);
        ideal_asym = std::max(ideal_asym, std::abs(c1.contribution(kA) - c2.contribution(kD)));
        uncomp_asym = std::max(uncomp_asym, std::abs(u1.contribution(kA) - u2.contribution(kD)));
        for (double total : {u1.total, u2.total}) {
            if (std::isfinite(total)) {
                uncomp_dev = std::min(uncomp_dev, std::abs(total - 4));
            }
        }
        imperfect_max = std::max({imperfect_max, apparent(imperfect, deg).total, apparent(imperfect, deg + 180).total});
    }
    Outcome o;
    o.pass = worst <= 1e-12 && ideal_asym < 1e-3 && uncomp_asym > 1e-2 && uncomp_dev > 1e-2 && imperfect_max > 4;
    o.detail =
        fmt("compensated vs ideal max diff=%.2e (tol 1e-12); F_A/F_D mirror asymmetry ideal=%.2e uncompensated=%.3f; "
            "uncompensated min|F_total-4|=%.3f; imperfect PPBS (t_v=a_h=0.55) max F_total=%.3f (>4)",
            worst, ideal_asym, uncomp_asym, uncomp_dev, imperfect_max);
    return o;
}

std::vector<std::string> split_csv(const std::string &line) {
    std::vector<std::string> out(1);
    for (char c : line) {
        if (c == ',') {
            out.emplace_back();
        } else {
            out.back() += c;
        }
    }
    return out;
}

// 9. Sweep output reproduces the theory curves.
Outcome sweep_reproduction() {
    SweepSpec spec;
    spec.theta_start = 0;
    spec.theta_stop = 359;
    spec.theta_step = 1;
    spec.epsilon = 0.08;
    std::ostringstream csv;
    write_sweep_csv(csv, compute_sweep(spec));

    std::istringstream in(csv.str());
    std::string line;
    std::getline(in, line);
    auto header = split_csv(line);
    auto column = [&](const std::string &name) {
        for (size_t k = 0; k < header.size(); k++) {
            if (header[k] == name) {
                return k;
            }
        }
        throw std::runtime_error("missing column " + name);
    };
    size_t c_theta = column("theta_deg"), c_fa = column("F_A"), c_eps = column("eps_hat_A"),
           c_sigma = column("sigma_rel_A");
    double worst_fa = 0, worst_eps = 0, best_sigma = INFINITY, best_theta = -1;
    int eps_rows = 0, rows = 0;
    while (std::getline(in, line)) {
        auto cells = split_csv(line);
        double theta = std::stod(cells[c_theta]);
        worst_fa = std::max(worst_fa, std::abs(std::stod(cells[c_fa]) - 2 * (1 + std::sin(deg2rad(theta)))));
        if (!cells[c_eps].empty()) {
            worst_eps = std::max(worst_eps, std::abs(std::stod(cells[c_eps]) - 0.08));
            eps_rows++;
        }
        if (!cells[c_sigma].empty() && std::stod(cells[c_sigma]) < best_sigma) {
            best_sigma = std::stod(cells[c_sigma]);
            best_theta = theta;
        }
        rows++;
    }
    Outcome o;
    o.pass = rows == 360 && worst_fa <= 1e-9 && worst_eps <= 1e-9 && std::abs(best_theta - 90) <= 1;
    o.detail = fmt(
        "%d rows; max|F_A-2(1+sin)|=%.2e; eps_hat_A within %.2e of 0.08 on %d valid rows; sigma_rel_A minimum %.4f at "
        "theta=%g",
        rows, worst_fa, worst_eps, eps_rows, best_sigma, best_theta);
    return o;
}

}  // namespace

int main() {
    struct Criterion {
        const char *name;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria{
        {"1 Fisher constancy", fisher_constancy},
        {"2 Closed-form weak value", closed_form_weak_value},
        {"3 Finite-difference weak value extraction", finite_difference_weak_value},
        {"4 Estimator round trip", estimator_round_trip},
        {"5 Error/information duality", error_information_duality},
        {"6 Monte Carlo CRB saturation", monte_carlo_crb},
        {"7 Linear-vs-exact order check", linear_vs_exact_order},
        {"8 Gate-model identity", gate_model_identity},
        {"9 Sweep reproduction of theory curves", sweep_reproduction},
    };
    int failures = 0;
    for (const auto &c : criteria) {
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception &e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        std::printf("[%s] %s: %s\n", o.pass ? "PASS" : "FAIL", c.name, o.detail.c_str());
        failures += o.pass ? 0 : 1;
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
