#include "wvsim/gatesim.h"

#include <cmath>

#include "wvsim/error.h"

namespace wvsim {

namespace {

constexpr double kInvSqrt3 = 0.57735026918962576;

// Smallest coincidence norm treated as an observable signal.
constexpr double kMinCoincidenceNorm = 1e-300;

}  // namespace

void GateParams::validate() const {
    for (double x : {t_h, t_v, a_h}) {
        if (!(x > 0 && x <= 1)) {
            throw Error(ErrorCode::InvalidArgument, "gate parameters must lie in (0, 1]");
        }
    }
}

double GateParams::r_h() const { return std::sqrt(1 - t_h * t_h); }

double GateParams::r_v() const { return std::sqrt(1 - t_v * t_v); }

GateParams GateParams::compensated() { return GateParams{1.0, kInvSqrt3, kInvSqrt3}; }

GateParams GateParams::uncompensated() { return GateParams{1.0, kInvSqrt3, 1.0}; }

TwoPhotonState TwoPhotonState::product(const QubitState &system, const QubitState &probe) {
    TwoPhotonState s;
    s.amp[0] = system.amp_h() * probe.amp_h();
    s.amp[1] = system.amp_h() * probe.amp_v();
    s.amp[2] = system.amp_v() * probe.amp_h();
    s.amp[3] = system.amp_v() * probe.amp_v();
    return s;
}

double TwoPhotonState::coincidence_norm() const {
    double n = 0;
    for (const auto &a : amp) {
        n += std::norm(a);
    }
    return n;
}

TwoPhotonState ideal_csign(const TwoPhotonState &state) {
    TwoPhotonState out = state;
    out.amp[3] = -out.amp[3];
    return out;
}

std::array<double, 4> ppbs_coincidence_operator(const GateParams &params) {
    params.validate();
    double th = params.t_h, tv = params.t_v, rh = params.r_h(), rv = params.r_v(), ah = params.a_h;
    double mixed = ah * (th * tv - rh * rv);
    return {ah * ah * (th * th - rh * rh), mixed, mixed, tv * tv - rv * rv};
}

TwoPhotonState apply_coincidence_operator(const TwoPhotonState &state, const std::array<double, 4> &op) {
    TwoPhotonState out;
    double before = state.coincidence_norm();
    for (size_t k = 0; k < 4; k++) {
        out.amp[k] = state.amp[k] * op[k];
    }
    out.norm_deficit = state.norm_deficit + (before - out.coincidence_norm());
    return out;
}

QubitState probe_state(double epsilon) {
    if (!std::isfinite(epsilon)) {
        throw Error(ErrorCode::InvalidArgument, "probe coupling must be finite");
    }
    return QubitState::from_amplitudes(1.0, epsilon);
}

JointDistribution project_coincidences(const TwoPhotonState &state, const PostSelectBasis &basis) {
    const std::array<QubitState, 2> meter_states{linear_pol_state(PolarAngle(90.0)),
                                                 linear_pol_state(PolarAngle(270.0))};
    std::array<std::array<double, 2>, 2> raw{};
    double total = 0;
    for (auto m : kMeterOutcomes) {
        const QubitState &probe = meter_states[static_cast<int>(m)];
        for (auto f : kPostSelectOutcomes) {
            const QubitState &sys = basis.state(f);
            Complex a = std::conj(sys.amp_h()) * std::conj(probe.amp_h()) * state.amp[0] +
                        std::conj(sys.amp_h()) * std::conj(probe.amp_v()) * state.amp[1] +
                        std::conj(sys.amp_v()) * std::conj(probe.amp_h()) * state.amp[2] +
                        std::conj(sys.amp_v()) * std::conj(probe.amp_v()) * state.amp[3];
            double p = std::norm(a);
            raw[static_cast<int>(m)][static_cast<int>(f)] = p;
            total += p;
        }
    }
    if (!(total > kMinCoincidenceNorm)) {
        throw Error(ErrorCode::ZeroCoincidenceNorm, "no amplitude survives coincidence post-selection");
    }
    for (auto &row : raw) {
        for (auto &p : row) {
            p /= total;
        }
    }
    return JointDistribution::from_table(raw, 1e-12);
}

JointDistribution exact_joint_probabilities(const QubitState &system, double epsilon, const GateParams &params,
                                            const PostSelectBasis &basis) {
    auto input = TwoPhotonState::product(system, probe_state(epsilon));
    return project_coincidences(apply_coincidence_operator(input, ppbs_coincidence_operator(params)), basis);
}

JointDistribution exact_joint_probabilities(PolarAngle theta, double epsilon, const GateParams &params,
                                            const PostSelectBasis &basis) {
    return exact_joint_probabilities(linear_pol_state(theta), epsilon, params, basis);
}

JointDistribution exact_joint_probabilities_ideal(const QubitState &system, double epsilon,
                                                  const PostSelectBasis &basis) {
    return project_coincidences(ideal_csign(TwoPhotonState::product(system, probe_state(epsilon))), basis);
}

JointDistribution exact_joint_probabilities_ideal(PolarAngle theta, double epsilon, const PostSelectBasis &basis) {
    return exact_joint_probabilities_ideal(linear_pol_state(theta), epsilon, basis);
}

}  // namespace wvsim
