#include "wvsim/weakmodel.h"

#include <cmath>
#include <string>

#include "wvsim/error.h"

namespace wvsim {

const char *outcome_name(MeterOutcome m) { return m == MeterOutcome::D ? "D" : "A"; }

const char *outcome_name(PostSelectOutcome f) { return f == PostSelectOutcome::D ? "D" : "A"; }

MeterModel MeterModel::make(double w_d, double w_a, double kappa_d, double kappa_a) {
    for (double x : {w_d, w_a, kappa_d, kappa_a}) {
        if (!std::isfinite(x)) {
            throw Error(ErrorCode::InvalidArgument, "meter parameters must be finite");
        }
    }
    if (!(w_d > 0 && w_d < 1 && w_a > 0 && w_a < 1)) {
        throw Error(ErrorCode::InvalidArgument, "meter baseline probabilities must lie in (0, 1)");
    }
    if (std::abs(w_d + w_a - 1) > 1e-12) {
        throw Error(ErrorCode::InvalidArgument, "meter baseline probabilities must sum to 1");
    }
    if (std::abs(w_d * kappa_d * kappa_d + w_a * kappa_a * kappa_a - 1) > 1e-12) {
        throw Error(ErrorCode::InvalidArgument, "meter must satisfy sum_m w_m kappa_m^2 = 1");
    }
    if (std::abs(w_d * kappa_d + w_a * kappa_a) > 1e-12) {
        throw Error(ErrorCode::InvalidArgument, "meter must satisfy sum_m w_m kappa_m = 0");
    }
    return MeterModel({w_d, w_a}, {kappa_d, kappa_a});
}

MeterModel MeterModel::diagonal_probe() { return make(0.5, 0.5, 1.0, -1.0); }

double MeterModel::max_abs_kappa() const noexcept { return std::max(std::abs(kappa_[0]), std::abs(kappa_[1])); }

PostSelectBasis::PostSelectBasis(QubitState d, QubitState a) : d_(d), a_(a) {
    if (std::abs(inner_product(d_, a_)) > 1e-9) {
        throw Error(ErrorCode::NonOrthonormalBasis, "post-selection states are not orthogonal");
    }
}

PostSelectBasis PostSelectBasis::from_angle(PolarAngle postselect) {
    return PostSelectBasis(linear_pol_state(PolarAngle(postselect.degrees() + 180.0)), linear_pol_state(postselect));
}

PostSelectBasis PostSelectBasis::diagonal() { return from_angle(PolarAngle(270.0)); }

JointDistribution JointDistribution::from_table(const std::array<std::array<double, 2>, 2> &p_mf, double sum_tol) {
    double total = 0;
    for (const auto &row : p_mf) {
        for (double p : row) {
            if (!std::isfinite(p) || p < 0) {
                throw Error(ErrorCode::InvalidArgument, "joint probabilities must be finite and nonnegative");
            }
            total += p;
        }
    }
    if (std::abs(total - 1) > sum_tol) {
        throw Error(ErrorCode::InvalidArgument, "joint probabilities sum to " + std::to_string(total));
    }
    return JointDistribution(p_mf);
}

double JointDistribution::conditional(MeterOutcome m, PostSelectOutcome f) const {
    double pf = p_postselect(f);
    if (pf <= 0) {
        throw Error(ErrorCode::ZeroProbability,
                    std::string("post-selection outcome ") + outcome_name(f) + " has zero probability");
    }
    return p(m, f) / pf;
}

double JointDistribution::total() const noexcept { return p_[0][0] + p_[0][1] + p_[1][0] + p_[1][1]; }

void check_weakness(const MeterModel &meter, const Observable &obs, CouplingStrength eps, double guard) {
    if (!std::isfinite(eps.epsilon)) {
        throw Error(ErrorCode::InvalidArgument, "coupling must be finite");
    }
    double strength = std::abs(eps.epsilon) * meter.max_abs_kappa() * obs.spectral_radius();
    if (!(strength < guard)) {
        throw Error(ErrorCode::CouplingTooStrong, "|eps| kappa_max |A| = " + std::to_string(strength) +
                                                      " is not below the weakness guard " + std::to_string(guard));
    }
}

Matrix2 measurement_operator(const MeterModel &meter, MeterOutcome m, const Observable &obs, CouplingStrength eps,
                             double guard) {
    check_weakness(meter, obs, eps, guard);
    Matrix2 shifted = Matrix2::identity() + obs.matrix() * Complex(eps.epsilon * meter.kappa(m));
    return shifted * Complex(std::sqrt(meter.w(m)));
}

std::optional<Complex> try_weak_value(const QubitState &psi, const QubitState &f, const Observable &obs) {
    Complex overlap = inner_product(f, psi);
    if (std::abs(overlap) < kSingularityThreshold) {
        return std::nullopt;
    }
    return matrix_element(f, obs, psi) / overlap;
}

Complex weak_value(const QubitState &psi, const QubitState &f, const Observable &obs) {
    auto wv = try_weak_value(psi, f, obs);
    if (!wv) {
        throw Error(ErrorCode::PostselectionSingular, "|<f|psi>| is below the singularity threshold");
    }
    return *wv;
}

std::array<std::array<double, 2>, 2> linear_formula_table(const QubitState &psi, const PostSelectBasis &basis,
                                                          const MeterModel &meter, const Observable &obs,
                                                          double epsilon) {
    std::array<std::array<double, 2>, 2> table{};
    for (auto f : kPostSelectOutcomes) {
        const QubitState &final_state = basis.state(f);
        double pf = std::norm(inner_product(final_state, psi));
        auto wv = try_weak_value(psi, final_state, obs);
        for (auto m : kMeterOutcomes) {
            double response = wv ? 1 + 2 * epsilon * meter.kappa(m) * wv->real() : 1.0;
            table[static_cast<int>(m)][static_cast<int>(f)] = meter.w(m) * pf * response;
        }
    }
    return table;
}

JointDistribution joint_probabilities_linear(const QubitState &psi, const PostSelectBasis &basis,
                                             const MeterModel &meter, const Observable &obs, CouplingStrength eps,
                                             double guard) {
    check_weakness(meter, obs, eps, guard);
    auto table = linear_formula_table(psi, basis, meter, obs, eps.epsilon);
    for (auto m : kMeterOutcomes) {
        for (auto f : kPostSelectOutcomes) {
            double p = table[static_cast<int>(m)][static_cast<int>(f)];
            if (p < 0) {
                throw Error(ErrorCode::LinearizationInvalid, std::string("first-order p(") + outcome_name(m) + "," +
                                                                 outcome_name(f) + ") = " + std::to_string(p) +
                                                                 " is negative");
            }
        }
    }
    return JointDistribution::from_table(table);
}

double log_derivative(const QubitState &psi, const QubitState &f, const MeterModel &meter, MeterOutcome m,
                      const Observable &obs) {
    return 2 * meter.kappa(m) * weak_value(psi, f, obs).real();
}

}  // namespace wvsim
