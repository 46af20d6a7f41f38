// Command-line front end for the weak-measurement simulator.

#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "wvsim/error.h"
#include "wvsim/estimation.h"
#include "wvsim/gatesim.h"
#include "wvsim/montecarlo.h"
#include "wvsim/sweep.h"
#include "wvsim/weakmodel.h"

using namespace wvsim;
using nlohmann::ordered_json;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitIo = 14;
constexpr int kExitInternal = 1;

int exit_code_for(ErrorCode code) { return 3 + static_cast<int>(code); }

const char *kExitCodeHelp =
    "Exit codes:\n"
    "  0   success\n"
    "  1   internal error\n"
    "  2   invalid command line\n"
    "  3   InvalidArgument (bad parameter value or invalid sweep spec)\n"
    "  4   CouplingTooStrong (epsilon outside the weak-coupling guard)\n"
    "  5   PostselectionSingular (|<f|psi>| below 1e-8)\n"
    "  6   LinearizationInvalid (first-order probability negative)\n"
    "  7   NonOrthonormalBasis\n"
    "  8   ZeroCoincidenceNorm (nothing survives the gate)\n"
    "  9   WeakValueReferenceZero\n"
    "  10  ZeroProbability\n"
    "  11  ZeroProbeCoupling\n"
    "  12  ZeroInformation\n"
    "  13  TooManyDiscardedReplicas\n"
    "  14  I/O error\n";

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Format { Json, Csv };

struct ModelOptions {
    ModelTag tag = ModelTag::Linear;
    GateParams gate = GateParams::compensated();

    ModelSpec spec() const { return ModelSpec{tag, gate}; }
};

const std::map<std::string, ModelTag> kModelNames{
    {"linear", ModelTag::Linear},
    {"exact-ideal", ModelTag::ExactIdeal},
    {"exact-ppbs", ModelTag::ExactPpbs},
};

const std::map<std::string, Format> kFormatNames{{"json", Format::Json}, {"csv", Format::Csv}};

void add_model_options(CLI::App *cmd, ModelOptions &opts) {
    cmd->add_option("--model", opts.tag, "Probability model: linear, exact-ideal or exact-ppbs")
        ->transform(CLI::CheckedTransformer(kModelNames, CLI::ignore_case));
    cmd->add_option("--tv", opts.gate.t_v, "PPBS amplitude transmittivity for V (exact-ppbs)");
    cmd->add_option("--th", opts.gate.t_h, "PPBS amplitude transmittivity for H (exact-ppbs)");
    cmd->add_option("--ah", opts.gate.a_h, "H compensation amplitude per photon (exact-ppbs)");
}

void add_format_options(CLI::App *cmd, Format &format, std::string &out_path) {
    cmd->add_option("--format", format, "Output format: json or csv")
        ->transform(CLI::CheckedTransformer(kFormatNames, CLI::ignore_case));
    cmd->add_option("--out", out_path, "Write output to PATH instead of stdout");
}

void emit(const std::string &text, const std::string &out_path) {
    if (out_path.empty()) {
        std::cout << text;
        std::cout.flush();
        return;
    }
    std::ofstream file(out_path, std::ios::binary);
    if (!file) {
        throw IoError("cannot open " + out_path + " for writing");
    }
    file << text;
    if (!file) {
        throw IoError("failed writing " + out_path);
    }
}

ordered_json num(double v) { return ordered_json(round_to_output_precision(v)); }

ordered_json num(const std::optional<double> &v) { return v ? num(*v) : ordered_json(nullptr); }

/// Renders a flat record as a JSON object or a two-line CSV.
std::string render(const ordered_json &record, Format format) {
    if (format == Format::Json) {
        return record.dump(2) + "\n";
    }
    std::ostringstream header, values;
    bool first = true;
    for (const auto &[key, value] : record.items()) {
        header << (first ? "" : ",") << key;
        values << (first ? "" : ",");
        if (value.is_number()) {
            values << format_number(value.get<double>());
        } else if (value.is_string()) {
            values << value.get<std::string>();
        } else if (!value.is_null()) {
            values << value.dump();
        }
        first = false;
    }
    return header.str() + "\n" + values.str() + "\n";
}

void add_model_fields(ordered_json &j, const ModelOptions &model) {
    j["model"] = model_name(model.tag);
    if (model.tag == ModelTag::ExactPpbs) {
        j["th"] = num(model.gate.t_h);
        j["tv"] = num(model.gate.t_v);
        j["ah"] = num(model.gate.a_h);
    }
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"wvsim: weak measurement of a polarization qubit through a PPBS controlled-sign gate"};
    app.footer(kExitCodeHelp);
    app.require_subcommand(1);

    Format format = Format::Json;
    std::string out_path;
    double theta = 0, epsilon = 0, postselect = 270, eps_probe = 0.08;
    ModelOptions model;

    // probs
    auto *probs = app.add_subcommand("probs", "Print the joint probabilities p(m,f)");
    probs->add_option("--theta", theta, "System polarization angle in degrees")->required();
    probs->add_option("--epsilon", epsilon, "Interaction parameter");
    probs->add_option("--postselect", postselect, "Post-selection angle in degrees (default 270 = A)");
    add_model_options(probs, model);
    add_format_options(probs, format, out_path);

    // sweep
    SweepSpec sweep_spec;
    auto *sweep =
        app.add_subcommand("sweep", "Tabulate probabilities, weak values, estimates and Fisher information over theta");
    sweep->add_option("--start", sweep_spec.theta_start, "First theta in degrees");
    sweep->add_option("--stop", sweep_spec.theta_stop, "Last theta in degrees (inclusive)");
    sweep->add_option("--step", sweep_spec.theta_step, "Theta step in degrees");
    sweep->add_option("--epsilon", sweep_spec.epsilon, "Interaction parameter");
    sweep->add_option("--postselect", sweep_spec.postselect_deg, "Post-selection angle in degrees");
    add_model_options(sweep, model);
    Format sweep_format = Format::Csv;
    add_format_options(sweep, sweep_format, out_path);

    // weakvalue
    auto *weakvalue = app.add_subcommand("weakvalue", "Analytic weak value and its finite-difference estimate");
    weakvalue->add_option("--theta", theta, "System polarization angle in degrees")->required();
    weakvalue->add_option("--postselect", postselect, "Post-selection angle in degrees");
    weakvalue->add_option("--eps-probe", eps_probe, "Coupling used for the finite difference");
    add_model_options(weakvalue, model);
    add_format_options(weakvalue, format, out_path);

    // fisher
    double shots = 0;
    auto *fisher = app.add_subcommand("fisher", "Fisher information per post-selection outcome and Cramer-Rao bound");
    fisher->add_option("--theta", theta, "System polarization angle in degrees")->required();
    fisher->add_option("--postselect", postselect, "Post-selection angle in degrees");
    fisher->add_option("--shots", shots, "Number of trials for the Cramer-Rao bound");
    add_format_options(fisher, format, out_path);

    // estimate
    std::optional<std::int64_t> count_d, count_a;
    std::uint64_t seed = 0;
    std::string outcome = "A";
    auto *estimate = app.add_subcommand(
        "estimate", "Moment estimate of epsilon from counts (--count-d/--count-a) or from a model (--epsilon)");
    estimate->add_option("--theta", theta, "System polarization angle in degrees")->required();
    estimate->add_option("--postselect", postselect, "Post-selection angle in degrees");
    estimate->add_option("--outcome", outcome, "Post-selection outcome used: A (post-selected state) or D")
        ->check(CLI::IsMember({"A", "D"}));
    estimate->add_option("--count-d", count_d, "Observed (D, f) coincidences");
    estimate->add_option("--count-a", count_a, "Observed (A, f) coincidences");
    estimate->add_option("--epsilon", epsilon, "Set interaction parameter for model-based estimates");
    estimate->add_option("--shots", shots, "Sample this many events from the model before estimating");
    estimate->add_option("--seed", seed, "RNG seed for --shots");
    add_model_options(estimate, model);
    add_format_options(estimate, format, out_path);

    // montecarlo
    EnsembleConfig mc;
    std::string mode = "multinomial";
    auto *montecarlo = app.add_subcommand("montecarlo", "Estimator ensemble compared with the Cramer-Rao bound");
    montecarlo->add_option("--theta", mc.theta_deg, "System polarization angle in degrees")->required();
    montecarlo->add_option("--epsilon", mc.epsilon, "Interaction parameter");
    montecarlo->add_option("--postselect", mc.postselect_deg, "Post-selection angle in degrees");
    montecarlo->add_option("--outcome", outcome, "Post-selection outcome used: A or D")
        ->check(CLI::IsMember({"A", "D"}));
    montecarlo->add_option("--shots", mc.n_per_replica, "Events per replica");
    montecarlo->add_option("--replicas", mc.n_replicas, "Number of replicas");
    montecarlo->add_option("--seed", mc.base_seed, "Base seed");
    montecarlo->add_option("--mode", mode, "multinomial or poisson")->check(CLI::IsMember({"multinomial", "poisson"}));
    montecarlo->add_option("--threads", mc.threads, "Worker threads (0 = hardware concurrency)");
    add_model_options(montecarlo, model);
    add_format_options(montecarlo, format, out_path);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return kExitUsage;
    }

    const PostSelectOutcome f = outcome == "D" ? PostSelectOutcome::D : PostSelectOutcome::A;

    try {
        if (model.tag == ModelTag::ExactPpbs) {
            model.gate.validate();
        }
        if (*probs) {
            auto basis = PostSelectBasis::from_angle(PolarAngle(postselect));
            auto dist = model_distribution(model.spec(), PolarAngle(theta), epsilon, basis);
            ordered_json j;
            j["theta"] = num(theta);
            j["epsilon"] = num(epsilon);
            j["postselect"] = num(postselect);
            add_model_fields(j, model);
            j["p_DA"] = num(dist.p(MeterOutcome::D, PostSelectOutcome::A));
            j["p_AA"] = num(dist.p(MeterOutcome::A, PostSelectOutcome::A));
            j["p_DD"] = num(dist.p(MeterOutcome::D, PostSelectOutcome::D));
            j["p_AD"] = num(dist.p(MeterOutcome::A, PostSelectOutcome::D));
            emit(render(j, format), out_path);
        } else if (*sweep) {
            sweep_spec.model = model.spec();
            auto rows = compute_sweep(sweep_spec);
            std::ostringstream text;
            if (sweep_format == Format::Csv) {
                write_sweep_csv(text, rows);
            } else {
                write_sweep_json(text, sweep_spec, rows);
            }
            emit(text.str(), out_path);
        } else if (*weakvalue) {
            auto basis = PostSelectBasis::from_angle(PolarAngle(postselect));
            auto psi = linear_pol_state(PolarAngle(theta));
            double analytic = weak_value(psi, basis.state(PostSelectOutcome::A), stokes_hv()).real();
            auto with = model_distribution(model.spec(), PolarAngle(theta), eps_probe, basis);
            auto without = model_distribution(model.spec(), PolarAngle(theta), 0.0, basis);
            double extracted = extract_weak_value(with, without, PostSelectOutcome::A, eps_probe);
            ordered_json j;
            j["theta"] = num(theta);
            j["postselect"] = num(postselect);
            j["eps_probe"] = num(eps_probe);
            add_model_fields(j, model);
            j["wv_analytic"] = num(analytic);
            j["wv_finite_difference"] = num(extracted);
            emit(render(j, format), out_path);
        } else if (*fisher) {
            auto basis = PostSelectBasis::from_angle(PolarAngle(postselect));
            auto psi = linear_pol_state(PolarAngle(theta));
            auto report = fisher_information(psi, basis, MeterModel::diagonal_probe(), stokes_hv());
            ordered_json j;
            j["theta"] = num(theta);
            j["postselect"] = num(postselect);
            j["F_A"] = num(report.contribution(PostSelectOutcome::A));
            j["F_D"] = num(report.contribution(PostSelectOutcome::D));
            j["F_total"] = num(report.total);
            if (shots > 0) {
                j["shots"] = num(shots);
                j["crb_total"] = num(cramer_rao_bound(report, shots));
                double fa = report.contribution(PostSelectOutcome::A);
                j["crb_A"] = fa > 0 ? num(cramer_rao_bound(fa, shots)) : ordered_json(nullptr);
            }
            emit(render(j, format), out_path);
        } else if (*estimate) {
            auto basis = PostSelectBasis::from_angle(PolarAngle(postselect));
            auto psi = linear_pol_state(PolarAngle(theta));
            double wv = weak_value(psi, basis.state(f), stokes_hv()).real();
            ConditionalPair cond;
            ordered_json j;
            j["theta"] = num(theta);
            j["postselect"] = num(postselect);
            j["outcome"] = outcome_name(f);
            if (count_d || count_a) {
                if (!count_d || !count_a) {
                    throw Error(ErrorCode::InvalidArgument, "--count-d and --count-a must be given together");
                }
                cond = ConditionalPair::from_counts(*count_d, *count_a);
                j["source"] = "counts";
            } else {
                auto dist = model_distribution(model.spec(), PolarAngle(theta), epsilon, basis);
                j["source"] = "model";
                add_model_fields(j, model);
                j["epsilon"] = num(epsilon);
                if (shots > 0) {
                    auto counts = sample_counts(dist, static_cast<std::int64_t>(shots), seed);
                    cond = ConditionalPair::from_counts(counts.count(MeterOutcome::D, f),
                                                        counts.count(MeterOutcome::A, f));
                    j["shots"] = num(shots);
                    j["seed"] = seed;
                } else {
                    cond = ConditionalPair::from_distribution(dist, f);
                }
            }
            auto result = estimate_epsilon(cond, wv, f);
            j["p_D_given_f"] = num(cond.p_d);
            j["p_A_given_f"] = num(cond.p_a);
            j["n_events"] = num(cond.n_events);
            j["wv_reference"] = num(result.wv_reference);
            j["eps_hat"] = num(result.epsilon_hat);
            j["sigma_eps"] = num(result.sigma_epsilon);
            emit(render(j, format), out_path);
        } else if (*montecarlo) {
            mc.model = model.spec();
            mc.f = f;
            mc.mode = mode == "poisson" ? SamplingMode::Poisson : SamplingMode::Multinomial;
            auto stats = run_ensemble(mc);
            ordered_json j;
            j["theta"] = num(mc.theta_deg);
            j["epsilon"] = num(mc.epsilon);
            j["postselect"] = num(mc.postselect_deg);
            j["outcome"] = outcome_name(f);
            add_model_fields(j, model);
            j["mode"] = mode;
            j["shots"] = mc.n_per_replica;
            j["replicas"] = mc.n_replicas;
            j["seed"] = mc.base_seed;
            j["wv_reference"] = num(stats.wv_reference);
            j["eps_hat_model"] = num(stats.eps_hat_model);
            j["mean_eps_hat"] = num(stats.mean_eps_hat);
            j["var_eps_hat"] = num(stats.var_eps_hat);
            j["standard_error"] = num(stats.standard_error());
            j["crb"] = num(stats.crb);
            j["var_over_crb"] = num(stats.var_over_crb());
            j["n_replicas"] = stats.n_replicas;
            j["n_discarded"] = stats.n_discarded;
            emit(render(j, format), out_path);
        }
    } catch (const Error &e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e.code());
    } catch (const IoError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::exception &e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
    return 0;
}
