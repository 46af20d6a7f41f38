#include "wvsim/sweep.h"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ostream>

#include "json.hpp"
#include "wvsim/error.h"

namespace wvsim {

void SweepSpec::validate() const {
    for (double x : {theta_start, theta_stop, theta_step, epsilon, postselect_deg}) {
        if (!std::isfinite(x)) {
            throw Error(ErrorCode::InvalidArgument, "sweep parameters must be finite");
        }
    }
    if (!(theta_step > 0)) {
        throw Error(ErrorCode::InvalidArgument, "sweep step must be positive");
    }
    if (theta_start > theta_stop) {
        throw Error(ErrorCode::InvalidArgument, "sweep start must not exceed stop");
    }
    if (model.tag == ModelTag::ExactPpbs) {
        model.gate.validate();
    }
}

std::vector<double> SweepSpec::grid() const {
    validate();
    std::vector<double> out;
    // Points are start + k*step rather than accumulated sums, so the grid is exact in k.
    for (long k = 0;; k++) {
        double theta = theta_start + static_cast<double>(k) * theta_step;
        if (theta > theta_stop + 1e-9 * theta_step) {
            break;
        }
        out.push_back(theta);
    }
    return out;
}

namespace {

std::optional<JointDistribution> try_model(const SweepSpec &spec, PolarAngle theta, double epsilon,
                                           const PostSelectBasis &basis) {
    try {
        return model_distribution(spec.model, theta, epsilon, basis);
    } catch (const Error &e) {
        if (e.code() == ErrorCode::LinearizationInvalid || e.code() == ErrorCode::ZeroCoincidenceNorm) {
            return std::nullopt;
        }
        throw;
    }
}

}  // namespace

SweepRow compute_sweep_row(const SweepSpec &spec, double theta_deg) {
    const PolarAngle theta(theta_deg);
    const PostSelectBasis basis = PostSelectBasis::from_angle(PolarAngle(spec.postselect_deg));
    const QubitState psi = linear_pol_state(theta);
    const Observable obs = stokes_hv();
    const auto f_a = PostSelectOutcome::A;

    SweepRow row;
    row.theta_deg = theta_deg;

    if (auto wv = try_weak_value(psi, basis.state(f_a), obs)) {
        row.wv_a = wv->real();
    }
    if (auto wv = try_weak_value(psi, basis.state(PostSelectOutcome::D), obs)) {
        row.wv_d = wv->real();
    }

    FisherReport fisher = fisher_information(psi, basis, MeterModel::diagonal_probe(), obs);
    row.f_a = fisher.contribution(f_a);
    row.f_d = fisher.contribution(PostSelectOutcome::D);
    row.f_total = fisher.total;
    if (*row.f_a > 0) {
        row.sigma_rel_a = 1 / std::sqrt(*row.f_a);
    }

    auto dist = try_model(spec, theta, spec.epsilon, basis);
    if (!dist) {
        return row;
    }
    row.p_da = dist->p(MeterOutcome::D, f_a);
    row.p_aa = dist->p(MeterOutcome::A, f_a);
    row.p_dd = dist->p(MeterOutcome::D, PostSelectOutcome::D);
    row.p_ad = dist->p(MeterOutcome::A, PostSelectOutcome::D);

    double p_post = dist->p_postselect(f_a);
    if (row.wv_a && std::abs(*row.wv_a) >= kSingularityThreshold && p_post > 0) {
        auto cond = ConditionalPair::from_distribution(*dist, f_a);
        row.eps_hat_a = estimate_epsilon(cond, *row.wv_a, f_a).epsilon_hat;
        row.sigma_model_a = std::sqrt(cond.p_d * cond.p_a / p_post) / std::abs(*row.wv_a);
    }

    if (spec.epsilon != 0) {
        if (auto baseline = try_model(spec, theta, 0.0, basis)) {
            try {
                FisherReport apparent = apparent_fisher_information(*dist, *baseline, spec.epsilon);
                row.f_a_app = apparent.contribution(f_a);
                row.f_d_app = apparent.contribution(PostSelectOutcome::D);
                row.f_total_app = apparent.total;
            } catch (const Error &e) {
                if (e.code() != ErrorCode::ZeroProbability) {
                    throw;
                }
            }
        }
    }
    return row;
}

std::vector<SweepRow> compute_sweep(const SweepSpec &spec) {
    std::vector<SweepRow> rows;
    for (double theta : spec.grid()) {
        rows.push_back(compute_sweep_row(spec, theta));
    }
    return rows;
}

const std::vector<std::string> &sweep_columns() {
    static const std::vector<std::string> columns{
        "version", "theta_deg", "p_DA",      "p_AA",        "p_DD",          "p_AD",
        "wv_A",    "wv_D",      "eps_hat_A", "sigma_rel_A", "F_A",           "F_D",
        "F_total", "F_A_app",   "F_D_app",   "F_total_app", "sigma_model_A",
    };
    return columns;
}

std::string format_number(double value) {
    if (value == 0) {
        value = 0;  // drops the sign of -0
    }
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", value);
    return buf;
}

double round_to_output_precision(double value) { return std::strtod(format_number(value).c_str(), nullptr); }

namespace {

std::vector<std::optional<double>> row_values(const SweepRow &r) {
    return {r.theta_deg,   r.p_da, r.p_aa, r.p_dd,    r.p_ad,    r.wv_a,    r.wv_d,        r.eps_hat_a,
            r.sigma_rel_a, r.f_a,  r.f_d,  r.f_total, r.f_a_app, r.f_d_app, r.f_total_app, r.sigma_model_a};
}

}  // namespace

void write_sweep_csv(std::ostream &out, const std::vector<SweepRow> &rows) {
    const auto &columns = sweep_columns();
    for (size_t k = 0; k < columns.size(); k++) {
        out << (k ? "," : "") << columns[k];
    }
    out << '\n';
    for (const auto &row : rows) {
        out << kSweepFormatVersion;
        for (const auto &v : row_values(row)) {
            out << ',';
            if (v) {
                out << format_number(*v);
            }
        }
        out << '\n';
    }
}

void write_sweep_json(std::ostream &out, const SweepSpec &spec, const std::vector<SweepRow> &rows) {
    using nlohmann::ordered_json;
    ordered_json doc;
    doc["format"] = "wvsim-sweep";
    doc["version"] = kSweepFormatVersion;
    ordered_json params;
    params["theta_start"] = round_to_output_precision(spec.theta_start);
    params["theta_stop"] = round_to_output_precision(spec.theta_stop);
    params["theta_step"] = round_to_output_precision(spec.theta_step);
    params["epsilon"] = round_to_output_precision(spec.epsilon);
    params["model"] = model_name(spec.model.tag);
    params["postselect"] = round_to_output_precision(spec.postselect_deg);
    if (spec.model.tag == ModelTag::ExactPpbs) {
        params["th"] = round_to_output_precision(spec.model.gate.t_h);
        params["tv"] = round_to_output_precision(spec.model.gate.t_v);
        params["ah"] = round_to_output_precision(spec.model.gate.a_h);
    }
    doc["params"] = params;

    const auto &columns = sweep_columns();
    ordered_json json_rows = ordered_json::array();
    for (const auto &row : rows) {
        ordered_json obj;
        auto values = row_values(row);
        for (size_t k = 0; k < values.size(); k++) {
            const auto &name = columns[k + 1];
            obj[name] = values[k] ? ordered_json(round_to_output_precision(*values[k])) : ordered_json(nullptr);
        }
        json_rows.push_back(std::move(obj));
    }
    doc["rows"] = std::move(json_rows);
    out << doc.dump(2) << '\n';
}

}  // namespace wvsim
