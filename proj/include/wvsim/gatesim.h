#ifndef WVSIM_GATESIM_H
#define WVSIM_GATESIM_H

#include <array>

#include "wvsim/qstate.h"
#include "wvsim/weakmodel.h"

namespace wvsim {

/// Two-photon PPBS controlled-sign gate model.
///
/// t_h, t_v are amplitude transmittivities of the partially polarizing beam
/// splitter, r_x = sqrt(1 - t_x^2). a_h is the amplitude of the post-gate H
/// attenuation applied to each photon (loss compensation); a_h = 1 means no
/// compensation. The default values describe the ideal gate: t_v = 1/sqrt(3)
/// (intensity 1/3), t_h = 1, a_h = 1/sqrt(3).
struct GateParams {
    double t_h = 1.0;
    double t_v = 0.57735026918962576;
    double a_h = 0.57735026918962576;

    /// Throws InvalidArgument unless every parameter is in (0, 1].
    void validate() const;
    double r_h() const;
    double r_v() const;

    static GateParams compensated();
    /// Same beam splitter without the H compensation elements.
    static GateParams uncompensated();
};

/// Index of the two-photon basis {HH, HV, VH, VV}, system photon first.
enum class TwoPhotonBasis { HH = 0, HV = 1, VH = 2, VV = 3 };

/// Two-photon amplitudes in the coincidence subspace plus the probability
/// weight lost to non-coincidence events.
struct TwoPhotonState {
    std::array<Complex, 4> amp{};
    double norm_deficit = 0.0;

    static TwoPhotonState product(const QubitState &system, const QubitState &probe);
    double coincidence_norm() const;
};

/// Negates the VV amplitude.
TwoPhotonState ideal_csign(const TwoPhotonState &state);

/// Diagonal coincidence amplitudes over {HH, HV, VH, VV}:
///   a_h^2 (t_h^2 - r_h^2), a_h (t_h t_v - r_h r_v), a_h (t_h t_v - r_h r_v), t_v^2 - r_v^2.
/// Both-reflected paths carry a minus sign (real t, real r convention).
std::array<double, 4> ppbs_coincidence_operator(const GateParams &params);

/// Applies a diagonal coincidence operator; the lost weight is added to norm_deficit.
TwoPhotonState apply_coincidence_operator(const TwoPhotonState &state, const std::array<double, 4> &op);

/// Probe prepared as (|H> + eps|V>) / sqrt(1 + eps^2).
QubitState probe_state(double epsilon);

/// Projects a post-gate state onto (meter m on the probe) x (f on the system)
/// in the diagonal probe basis and renormalizes over the four coincidence
/// outcomes. Throws ZeroCoincidenceNorm if nothing survives.
JointDistribution project_coincidences(const TwoPhotonState &state, const PostSelectBasis &basis);

/// Exact joint probabilities through the PPBS gate model; nothing is linearized.
JointDistribution exact_joint_probabilities(const QubitState &system, double epsilon, const GateParams &params,
                                            const PostSelectBasis &basis);
JointDistribution exact_joint_probabilities(PolarAngle theta, double epsilon, const GateParams &params,
                                            const PostSelectBasis &basis);

/// Exact joint probabilities through the ideal controlled-sign gate.
JointDistribution exact_joint_probabilities_ideal(const QubitState &system, double epsilon,
                                                  const PostSelectBasis &basis);
JointDistribution exact_joint_probabilities_ideal(PolarAngle theta, double epsilon, const PostSelectBasis &basis);

}  // namespace wvsim

#endif
