#ifndef WVSIM_SWEEP_H
#define WVSIM_SWEEP_H

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "wvsim/montecarlo.h"

namespace wvsim {

inline constexpr int kSweepFormatVersion = 1;

struct SweepSpec {
    double theta_start = 0.0;
    double theta_stop = 360.0;
    double theta_step = 1.0;
    double epsilon = 0.08;
    ModelSpec model{};
    double postselect_deg = 270.0;

    /// Throws InvalidArgument unless step > 0, start <= stop and all values are finite.
    void validate() const;
    /// start, start + step, ... up to stop inclusive (with a 1e-9 step slack).
    std::vector<double> grid() const;
};

/// One sweep grid point. Outcome labels follow PostSelectOutcome: A is the
/// post-selected state, D its complement. Empty optionals mark quantities that
/// are undefined at this point (singular post-selection, invalid linearization).
struct SweepRow {
    double theta_deg = 0.0;
    std::optional<double> p_da, p_aa, p_dd, p_ad;
    std::optional<double> wv_a, wv_d;
    std::optional<double> eps_hat_a;
    /// sigma_eps * sqrt(N) in the zero-coupling limit, 1 / sqrt(F_A): the
    /// single-trial standard error of eps_hat from post-selection on A.
    std::optional<double> sigma_rel_a;
    std::optional<double> f_a, f_d, f_total;
    /// Fisher information inferred from the model probabilities at epsilon.
    std::optional<double> f_a_app, f_d_app, f_total_app;
    /// sigma_eps * sqrt(N) from the binomial error of the model conditionals at epsilon.
    std::optional<double> sigma_model_a;
};

SweepRow compute_sweep_row(const SweepSpec &spec, double theta_deg);
std::vector<SweepRow> compute_sweep(const SweepSpec &spec);

/// The column names, in output order.
const std::vector<std::string> &sweep_columns();

/// Fixed 12 significant digit formatting shared by every CLI output.
std::string format_number(double value);
/// Rounds to 12 significant digits so JSON output is byte-stable.
double round_to_output_precision(double value);

void write_sweep_csv(std::ostream &out, const std::vector<SweepRow> &rows);
void write_sweep_json(std::ostream &out, const SweepSpec &spec, const std::vector<SweepRow> &rows);

}  // namespace wvsim

#endif
