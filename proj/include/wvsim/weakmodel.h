#ifndef WVSIM_WEAKMODEL_H
#define WVSIM_WEAKMODEL_H

#include <array>
#include <optional>

#include "wvsim/qstate.h"

namespace wvsim {

/// Outcome of the two-outcome meter (probe measured in the diagonal basis).
enum class MeterOutcome { D = 0, A = 1 };

/// Outcome of the final projective measurement on the system. `A` is the
/// post-selected state (the state at the post-selection angle) and `D` its
/// orthogonal complement; for the default 270 degree post-selection these are
/// literally |A> and |D>.
enum class PostSelectOutcome { D = 0, A = 1 };

constexpr std::array<MeterOutcome, 2> kMeterOutcomes{MeterOutcome::D, MeterOutcome::A};
constexpr std::array<PostSelectOutcome, 2> kPostSelectOutcomes{PostSelectOutcome::D, PostSelectOutcome::A};

const char *outcome_name(MeterOutcome m);
const char *outcome_name(PostSelectOutcome f);

/// Below this overlap |<f|psi>| a weak value is reported as unavailable.
inline constexpr double kSingularityThreshold = 1e-8;

/// Default bound on |eps| * max|kappa| * spectral_radius(A) for the linearized model.
inline constexpr double kDefaultWeaknessGuard = 0.5;

/// Baseline probabilities w_m and response coefficients kappa_m of a
/// two-outcome linearized meter E_m = sqrt(w_m) (I + eps kappa_m A).
///
/// Invariants: w_m in (0, 1) summing to 1, sum_m w_m kappa_m^2 = 1 and
/// sum_m w_m kappa_m = 0. The last one is what makes sum_m E_m^dag E_m = I
/// to first order; with two outcomes it fixes kappa up to an overall sign.
class MeterModel {
   public:
    static MeterModel make(double w_d, double w_a, double kappa_d, double kappa_a);
    /// kappa_D = -kappa_A = 1, w_D = w_A = 1/2.
    static MeterModel diagonal_probe();

    double w(MeterOutcome m) const noexcept { return w_[static_cast<int>(m)]; }
    double kappa(MeterOutcome m) const noexcept { return kappa_[static_cast<int>(m)]; }
    double max_abs_kappa() const noexcept;

   private:
    MeterModel(std::array<double, 2> w, std::array<double, 2> kappa) : w_(w), kappa_(kappa) {}
    std::array<double, 2> w_;
    std::array<double, 2> kappa_;
};

/// Dimensionless interaction parameter eps.
struct CouplingStrength {
    double epsilon = 0.0;
};

/// Ordered orthonormal pair of final states, indexed by PostSelectOutcome.
class PostSelectBasis {
   public:
    /// Throws NonOrthonormalBasis if |<d|a>| exceeds 1e-9.
    PostSelectBasis(QubitState d, QubitState a);

    /// {state(angle + 180), state(angle)}: outcome A is the post-selected state.
    static PostSelectBasis from_angle(PolarAngle postselect);
    /// {|D>, |A>}, the 270 degree post-selection.
    static PostSelectBasis diagonal();

    const QubitState &state(PostSelectOutcome f) const noexcept { return f == PostSelectOutcome::D ? d_ : a_; }

   private:
    QubitState d_;
    QubitState a_;
};

/// 2x2 table p(m, f).
class JointDistribution {
   public:
    JointDistribution() = default;
    /// Validates nonnegative finite entries summing to 1 within `sum_tol`.
    static JointDistribution from_table(const std::array<std::array<double, 2>, 2> &p_mf, double sum_tol = 1e-9);

    double p(MeterOutcome m, PostSelectOutcome f) const noexcept {
        return p_[static_cast<int>(m)][static_cast<int>(f)];
    }
    double p_postselect(PostSelectOutcome f) const noexcept { return p(MeterOutcome::D, f) + p(MeterOutcome::A, f); }
    double p_meter(MeterOutcome m) const noexcept { return p(m, PostSelectOutcome::D) + p(m, PostSelectOutcome::A); }
    /// p(m | f). Throws ZeroProbability when p(f) = 0.
    double conditional(MeterOutcome m, PostSelectOutcome f) const;
    double total() const noexcept;

   private:
    explicit JointDistribution(const std::array<std::array<double, 2>, 2> &p) : p_(p) {}
    std::array<std::array<double, 2>, 2> p_{};
};

/// Throws CouplingTooStrong unless |eps| * max|kappa| * spectral_radius(obs) < guard.
void check_weakness(const MeterModel &meter, const Observable &obs, CouplingStrength eps,
                    double guard = kDefaultWeaknessGuard);

/// sqrt(w_m) (I + eps kappa_m A).
Matrix2 measurement_operator(const MeterModel &meter, MeterOutcome m, const Observable &obs, CouplingStrength eps,
                             double guard = kDefaultWeaknessGuard);

/// <f|A|psi> / <f|psi>. Throws PostselectionSingular when |<f|psi>| < kSingularityThreshold.
Complex weak_value(const QubitState &psi, const QubitState &f, const Observable &obs);

/// Same as weak_value but returns nullopt in the singular case.
std::optional<Complex> try_weak_value(const QubitState &psi, const QubitState &f, const Observable &obs);

/// First-order joint probabilities p(m,f) = w_m |<f|psi>|^2 (1 + 2 eps kappa_m Re wv_f).
/// A row whose weak value is singular falls back to w_m |<f|psi>|^2.
/// Throws CouplingTooStrong, or LinearizationInvalid if any entry comes out negative.
JointDistribution joint_probabilities_linear(const QubitState &psi, const PostSelectBasis &basis,
                                             const MeterModel &meter, const Observable &obs, CouplingStrength eps,
                                             double guard = kDefaultWeaknessGuard);

/// The first-order formula evaluated without the weakness guard or the sign
/// check; entries may be negative. Used for error-order studies of the
/// linearization itself.
std::array<std::array<double, 2>, 2> linear_formula_table(const QubitState &psi, const PostSelectBasis &basis,
                                                          const MeterModel &meter, const Observable &obs,
                                                          double epsilon);

/// d/d eps ln p(m,f) at eps = 0, i.e. 2 kappa_m Re wv.
double log_derivative(const QubitState &psi, const QubitState &f, const MeterModel &meter, MeterOutcome m,
                      const Observable &obs);

}  // namespace wvsim

#endif
