#include <cstdint>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qestkit/json_io.hpp"
#include "qestkit/random.hpp"

namespace {

using namespace qestkit;
using io::json;

RVector parse_theta(const std::string& csv) {
  std::vector<double> values;
  std::stringstream stream(csv);
  std::string item;
  while (std::getline(stream, item, ',')) {
    try {
      std::size_t used = 0;
      values.push_back(std::stod(item, &used));
      while (used < item.size() && std::isspace(item[used])) ++used;
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ParseError("--theta expects comma-separated numbers, got \"" +
                       csv + "\"");
    }
  }
  if (values.empty()) throw ParseError("--theta must not be empty");
  RVector theta(static_cast<Eigen::Index>(values.size()));
  for (Eigen::Index i = 0; i < theta.size(); ++i) theta[i] = values[i];
  return theta;
}

bool is_builtin_model(const std::string& name) {
  return name == "qubit-xz" || name == "qubit-xz-2copy";
}

StateModel resolve_model(const std::string& arg) {
  if (arg == "qubit-xz") return qubit_xz();
  if (arg == "qubit-xz-2copy") return tensor_power(qubit_xz(), 2);
  return io::point_model_from(io::load_file(arg));
}

// Accepts a builtin name, inline JSON (leading '{'), or a file path.
SubalgebraSpec resolve_subalgebra(const std::string& arg) {
  if (arg == "qubit-xz") return qubit_xz_subalgebra();
  if (arg == "qubit-xz-2copy") return qubit_xz_two_copy_subalgebra();
  if (!arg.empty() && arg.front() == '{') {
    return io::subalgebra_from(io::parse_text(arg));
  }
  return io::subalgebra_from(io::load_file(arg));
}

void emit(const json& payload, const std::string& output_path) {
  if (output_path.empty()) {
    std::cout << payload.dump(2) << "\n";
  } else {
    io::save_file(output_path, payload);
  }
}

struct Options {
  std::string model;
  std::string theta;
  std::string povm;
  std::string weight;
  std::string subalgebra;
  std::string prior;
  std::string mode;
  std::string output;
  int support = 0;
  int restarts = 32;
  int max_iters = 2000;
  double grad_tol = 1e-9;
  std::uint64_t seed = 0;
  int samples = 200;
};

int run_fisher(const Options& opt) {
  const StateModel model = resolve_model(opt.model);
  const RVector theta = parse_theta(opt.theta);
  const Povm povm = io::povm_from(io::load_file(opt.povm));
  const Tangent tangent = tangent_at(model, theta);
  const RMatrix fisher = classical_fisher(povm, tangent);
  const SldSet quantum = sld(model, theta);
  json out{{"F", io::real_rows(fisher)}, {"J", io::real_rows(quantum.fisher)}};
  if (!opt.weight.empty()) {
    const RMatrix weight = io::real_from(io::load_file(opt.weight));
    out["cost"] = weighted_cost(weight, fisher);
  }
  emit(out, opt.output);
  return 0;
}

int run_sld(const Options& opt) {
  const StateModel model = resolve_model(opt.model);
  const RVector theta = parse_theta(opt.theta);
  const SldSet quantum = sld(model, theta);
  json operators = json::array();
  for (const CMatrix& l : quantum.sld) operators.push_back(io::matrix_json(l));
  emit(json{{"sld", std::move(operators)},
            {"J", io::real_rows(quantum.fisher)}},
       opt.output);
  return 0;
}

int run_dim(const Options& opt) {
  const SubalgebraSpec spec = resolve_subalgebra(opt.subalgebra);
  emit(json{{"dim_h", dim_h(spec)}}, opt.output);
  return 0;
}

int run_reduce(const Options& opt) {
  const SubalgebraSpec spec = resolve_subalgebra(opt.subalgebra);
  const Povm povm = io::povm_from(io::load_file(opt.povm));
  ReducedPovm reduced;
  if (opt.mode == "bayes") {
    if (opt.prior.empty()) {
      throw ValidationError("reduce --mode bayes requires --prior");
    }
    const DiscretePrior prior = io::prior_from(io::load_file(opt.prior));
    reduced = reduce_bayes(povm, spec, prior);
  } else {
    if (opt.model.empty() || opt.theta.empty()) {
      throw ValidationError("reduce --mode " + opt.mode +
                            " requires --model and --theta");
    }
    const StateModel model = resolve_model(opt.model);
    const Tangent tangent = tangent_at(model, parse_theta(opt.theta));
    reduced = opt.mode == "preserve" ? reduce_preserving(povm, spec, tangent)
                                     : reduce_improving(povm, spec, tangent);
  }
  if (reduced.sufficiency_residual > sufficiency_warn) {
    std::cerr << "warning: sufficiency residual "
              << reduced.sufficiency_residual
              << " exceeds " << sufficiency_warn
              << "; the subspace may not be sufficient for this model\n";
  }
  emit(io::reduced_json(reduced), opt.output);
  return 0;
}

int run_bayes_cost(const Options& opt) {
  const Povm povm = io::povm_from(io::load_file(opt.povm));
  const DiscretePrior prior = io::prior_from(io::load_file(opt.prior));
  emit(json{{"cost", bayes_cost(povm, prior)}}, opt.output);
  return 0;
}

int run_optimize_local(const Options& opt) {
  const StateModel model = resolve_model(opt.model);
  const RVector theta = parse_theta(opt.theta);
  const SubalgebraSpec spec = resolve_subalgebra(opt.subalgebra);
  const RMatrix weight =
      opt.weight.empty()
          ? RMatrix(RMatrix::Identity(model.param_dim(), model.param_dim()))
          : io::real_from(io::load_file(opt.weight));
  OptimizerConfig config;
  config.support_size = opt.support;
  config.restarts = opt.restarts;
  config.max_iters = opt.max_iters;
  config.grad_tol = opt.grad_tol;
  config.seed = opt.seed;
  const OptimizationReport report =
      minimize_local(model, theta, weight, spec, config);
  emit(io::report_json(report), opt.output);
  return 0;
}

int run_optimize_bayes(const Options& opt) {
  const DiscretePrior prior = io::prior_from(io::load_file(opt.prior));
  const SubalgebraSpec spec = resolve_subalgebra(opt.subalgebra);
  OptimizerConfig config;
  config.support_size = opt.support;
  config.restarts = opt.restarts;
  config.max_iters = opt.max_iters;
  config.grad_tol = opt.grad_tol;
  config.seed = opt.seed;
  const OptimizationReport report = minimize_bayes(prior, spec, config);
  emit(io::report_json(report), opt.output);
  return 0;
}

// Max deviation of the real-trace identities over random test operators and
// parameter points: |Re tr(sigma (Gamma(B) - B))| for sigma in {rho, drho_i}.
int run_check_sufficiency(const Options& opt) {
  const StateModel model = resolve_model(opt.model);
  const SubalgebraSpec spec = resolve_subalgebra(opt.subalgebra);
  if (model.hilbert_dim() != spec.ambient_dim()) {
    throw DimensionMismatch("model dimension does not match the subalgebra");
  }
  if (opt.samples < 1) throw ValidationError("--samples must be >= 1");
  std::mt19937_64 rng(opt.seed);
  const bool sample_theta = opt.theta.empty();
  RVector theta;
  if (!sample_theta) theta = parse_theta(opt.theta);
  double max_residual = 0.0;
  for (int s = 0; s < opt.samples; ++s) {
    if (sample_theta) {
      if (!is_builtin_model(opt.model)) {
        theta = RVector::Zero(model.param_dim());
      } else {
        theta = random_disk_theta(rng);
      }
    }
    const Tangent tangent = tangent_at(model, theta);
    CMatrix b = random_hermitian(spec.ambient_dim(), rng);
    b /= b.norm();
    const CMatrix shift = project(spec, b) - b;
    max_residual = std::max(
        max_residual, std::abs((tangent.rho * shift).trace().real()));
    for (const CMatrix& drho : tangent.drho) {
      max_residual =
          std::max(max_residual, std::abs((drho * shift).trace().real()));
    }
  }
  emit(json{{"max_residual", max_residual}, {"samples", opt.samples}},
       opt.output);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "qestkit: measurement support-size reduction and Fisher-information "
      "tooling for finite-outcome quantum estimation"};
  app.require_subcommand(1);
  Options opt;
  std::function<int(const Options&)> action;

  const std::string model_help =
      "builtin model name (qubit-xz, qubit-xz-2copy) or point-model JSON file";
  const std::string sub_help =
      "builtin name, inline JSON ({\"blocks\": ...}), or JSON file";

  auto* fisher = app.add_subcommand(
      "fisher", "Classical and quantum Fisher matrices of a POVM at a point");
  fisher->add_option("--model", opt.model, model_help)->required();
  fisher->add_option("--theta", opt.theta, "comma-separated parameter point")
      ->required();
  fisher->add_option("--povm", opt.povm, "POVM JSON file")->required();
  fisher->add_option("--weight", opt.weight,
                     "weight matrix JSON file; adds the weighted-trace cost");
  fisher->add_option("--output", opt.output, "write JSON here instead of stdout");
  fisher->callback([&] { action = run_fisher; });

  auto* sld_cmd = app.add_subcommand(
      "sld", "Symmetric logarithmic derivatives and the quantum Fisher matrix");
  sld_cmd->add_option("--model", opt.model, model_help)->required();
  sld_cmd->add_option("--theta", opt.theta, "comma-separated parameter point")
      ->required();
  sld_cmd->add_option("--output", opt.output, "write JSON here instead of stdout");
  sld_cmd->callback([&] { action = run_sld; });

  auto* dim = app.add_subcommand(
      "dim", "Hermitian-part dimension of a block subalgebra");
  dim->add_option("--subalgebra", opt.subalgebra, sub_help)->required();
  dim->add_option("--output", opt.output, "write JSON here instead of stdout");
  dim->callback([&] { action = run_dim; });

  auto* reduce = app.add_subcommand(
      "reduce", "Shrink a POVM's support against a sufficient subalgebra");
  reduce->add_option("--mode", opt.mode, "preserve, improve, or bayes")
      ->required()
      ->check(CLI::IsMember({"preserve", "improve", "bayes"}));
  reduce->add_option("--povm", opt.povm, "POVM JSON file")->required();
  reduce->add_option("--subalgebra", opt.subalgebra, sub_help)->required();
  reduce->add_option("--model", opt.model, model_help);
  reduce->add_option("--theta", opt.theta, "comma-separated parameter point");
  reduce->add_option("--prior", opt.prior, "discrete prior JSON file");
  reduce->add_option("--output", opt.output, "write JSON here instead of stdout");
  reduce->callback([&] { action = run_reduce; });

  auto* bayes = app.add_subcommand(
      "bayes-cost", "Average Bayes cost of a POVM under a discrete prior");
  bayes->add_option("--povm", opt.povm, "POVM JSON file")->required();
  bayes->add_option("--prior", opt.prior, "discrete prior JSON file")->required();
  bayes->add_option("--output", opt.output, "write JSON here instead of stdout");
  bayes->callback([&] { action = run_bayes_cost; });

  auto* opt_local = app.add_subcommand(
      "optimize-local", "Multi-restart search for a low-cost local measurement");
  opt_local->add_option("--model", opt.model, model_help)->required();
  opt_local->add_option("--theta", opt.theta, "comma-separated parameter point")
      ->required();
  opt_local->add_option("--subalgebra", opt.subalgebra, sub_help)->required();
  opt_local->add_option("--support", opt.support, "number of outcomes")
      ->required();
  opt_local->add_option("--weight", opt.weight,
                        "weight matrix JSON file (default identity)");
  opt_local->add_option("--restarts", opt.restarts, "random restarts");
  opt_local->add_option("--max-iters", opt.max_iters, "descent iteration cap");
  opt_local->add_option("--grad-tol", opt.grad_tol, "stall threshold");
  opt_local->add_option("--seed", opt.seed, "seed for all randomness");
  opt_local->add_option("--output", opt.output, "write JSON here instead of stdout");
  opt_local->callback([&] { action = run_optimize_local; });

  auto* opt_bayes = app.add_subcommand(
      "optimize-bayes", "See-saw search for a low-cost Bayes measurement");
  opt_bayes->add_option("--prior", opt.prior, "discrete prior JSON file")
      ->required();
  opt_bayes->add_option("--subalgebra", opt.subalgebra, sub_help)->required();
  opt_bayes->add_option("--support", opt.support, "number of outcomes")
      ->required();
  opt_bayes->add_option("--restarts", opt.restarts, "random restarts");
  opt_bayes->add_option("--max-iters", opt.max_iters, "see-saw cycle cap");
  opt_bayes->add_option("--grad-tol", opt.grad_tol, "stall threshold");
  opt_bayes->add_option("--seed", opt.seed, "seed for all randomness");
  opt_bayes->add_option("--output", opt.output, "write JSON here instead of stdout");
  opt_bayes->callback([&] { action = run_optimize_bayes; });

  auto* check = app.add_subcommand(
      "check-sufficiency",
      "Sampled residual of the real-trace identities for a subalgebra");
  check->add_option("--model", opt.model, model_help)->required();
  check->add_option("--subalgebra", opt.subalgebra, sub_help)->required();
  check->add_option("--theta", opt.theta,
                    "fixed parameter point (default: sampled)");
  check->add_option("--samples", opt.samples, "number of (B, theta) samples");
  check->add_option("--seed", opt.seed, "seed for all randomness");
  check->add_option("--output", opt.output, "write JSON here instead of stdout");
  check->callback([&] { action = run_check_sufficiency; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    return action(opt);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.kind() == ErrorKind::validation ? 2 : 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
