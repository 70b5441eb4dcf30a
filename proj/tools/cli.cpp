//------------------------------------------------------------------------------
//
//   Copyright 2026 The randcert Authors
//
//   Licensed under the Apache License, Version 2.0 (the "License");
//   you may not use this file except in compliance with the License.
//   You may obtain a copy of the License at
//
//       http://www.apache.org/licenses/LICENSE-2.0
//
//   Unless required by applicable law or agreed to in writing, software
//   distributed under the License is distributed on an "AS IS" BASIS,
//   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//   See the License for the specific language governing permissions and
//   limitations under the License.
//
//------------------------------------------------------------------------------

#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "randcert/bounds.hpp"
#include "randcert/classifiers.hpp"
#include "randcert/distributions.hpp"
#include "randcert/errors.hpp"
#include "randcert/generalization.hpp"
#include "randcert/harness.hpp"
#include "randcert/model_io.hpp"
#include "randcert/parallel.hpp"
#include "randcert/smoothing.hpp"

namespace randcert::cli {

namespace {

using Json = nlohmann::ordered_json;

std::vector<double> ParseList(std::string const &text, std::string const &what)
{
  std::vector<double> values;
  std::stringstream   fields(text);
  std::string         field;
  while (std::getline(fields, field, ','))
  {
    std::size_t used = 0;
    double      v    = 0.0;
    try
    {
      v = std::stod(field, &used);
    }
    catch (std::exception const &)
    {
      used = 0;
    }
    if (used == 0 || field.find_first_not_of(" \t", used) != std::string::npos)
    {
      throw ValidationError(fmt::format("--{}: cannot parse '{}' as a number", what, field));
    }
    values.push_back(v);
  }
  if (values.empty())
  {
    throw ValidationError(fmt::format("--{} is empty", what));
  }
  return values;
}

Json OptionalNumber(std::optional<double> const &v)
{
  return v ? Json(*v) : Json(nullptr);
}

Json ReportToJson(RiskGapReport const &r)
{
  return Json{{"clean_risk", r.clean_risk},
              {"tv_gap", OptionalNumber(r.tv_gap)},
              {"renyi_mult_bound", OptionalNumber(r.renyi_mult_bound)},
              {"renyi_add_gap", OptionalNumber(r.renyi_add_gap)},
              {"exp_neg_entropy", OptionalNumber(r.exp_neg_entropy)},
              {"best_adv_risk_bound", r.best_adv_risk_bound},
              {"radius", r.radius},
              {"renyi_beta", OptionalNumber(r.renyi_beta)},
              {"entropy_source", r.entropy_source}};
}

// Flat config keys become "--key value" tokens unless the flag is already on
// the command line. Arrays are joined with commas; true booleans become bare flags.
std::vector<std::string> ConfigTokens(Json const &config, std::vector<std::string> const &args)
{
  auto given = [&](std::string const &flag) {
    return std::any_of(args.begin(), args.end(), [&](std::string const &a) {
      return a == flag || a.rfind(flag + "=", 0) == 0;
    });
  };
  auto scalar = [](Json const &v) -> std::string {
    if (v.is_string())
    {
      return v.get<std::string>();
    }
    if (v.is_number_integer() || v.is_number_unsigned())
    {
      return v.dump();
    }
    if (v.is_number_float())
    {
      return fmt::format("{}", v.get<double>());
    }
    throw ValidationError("config values must be strings, numbers, booleans or arrays of numbers");
  };

  std::vector<std::string> tokens;
  for (auto const &[key, value] : config.items())
  {
    if (key == "command" || key == "config")
    {
      continue;
    }
    std::string const flag = "--" + key;
    if (given(flag))
    {
      continue;
    }
    if (value.is_boolean())
    {
      if (value.get<bool>())
      {
        tokens.push_back(flag);
      }
      continue;
    }
    if (value.is_null())
    {
      continue;
    }
    std::string text;
    if (value.is_array())
    {
      for (auto const &item : value)
      {
        text += (text.empty() ? "" : ",") + scalar(item);
      }
    }
    else
    {
      text = scalar(value);
    }
    tokens.push_back(flag);
    tokens.push_back(text);
  }
  return tokens;
}

std::vector<std::string> ExpandConfig(std::vector<std::string> args,
                                      std::vector<std::string> const &subcommands)
{
  std::optional<std::string> path;
  for (std::size_t i = 0; i < args.size(); ++i)
  {
    if (args[i] == "--config" && i + 1 < args.size())
    {
      path = args[i + 1];
    }
    else if (args[i].rfind("--config=", 0) == 0)
    {
      path = args[i].substr(9);
    }
  }
  if (!path)
  {
    return args;
  }
  std::ifstream in(*path);
  if (!in)
  {
    throw ValidationError("cannot open config " + *path);
  }
  Json config;
  try
  {
    config = Json::parse(in);
  }
  catch (nlohmann::json::exception const &e)
  {
    throw ValidationError(fmt::format("config {}: {}", *path, e.what()));
  }
  if (!config.is_object())
  {
    throw ValidationError("config must be a JSON object");
  }

  bool const has_subcommand = std::any_of(args.begin(), args.end(), [&](std::string const &a) {
    return std::find(subcommands.begin(), subcommands.end(), a) != subcommands.end();
  });
  if (!has_subcommand)
  {
    if (!config.contains("command") || !config["command"].is_string())
    {
      throw ValidationError("no subcommand given on the command line or as \"command\" in the config");
    }
    args.insert(args.begin(), config["command"].get<std::string>());
  }
  auto tokens = ConfigTokens(config, args);
  args.insert(args.end(), tokens.begin(), tokens.end());
  return args;
}

struct GlobalOptions
{
  std::uint64_t seed{0};
  std::size_t   samples{10000};
  std::string   out;
  std::string   config;
  std::size_t   threads{0};
};

struct DataOptions
{
  std::string           data;
  std::size_t           num_classes{2};
  std::string           model;
  std::optional<double> sigma;

  void Register(CLI::App &cmd)
  {
    cmd.add_option("--data", data, "Headerless CSV of points with the label in the last column "
                                   "(default: the built-in two-blob benchmark)");
    cmd.add_option("--num-classes", num_classes, "Number of classes in --data")
        ->check(CLI::PositiveNumber);
    cmd.add_option("--model", model, "Model JSON (default: least-squares fit on the data)");
    cmd.add_option("--sigma", sigma, "Isotropic noise level, overriding the model file");
  }

  LabeledDataset Dataset(std::uint64_t seed) const
  {
    return data.empty() ? BenchmarkDataset(seed) : ReadDatasetCsv(data, num_classes);
  }

  ModelFile Model(LabeledDataset const &dataset) const
  {
    ModelFile file = model.empty()
                         ? ModelFile{DeterministicClassifier(FitLeastSquaresLinear(dataset)),
                                     std::nullopt}
                         : LoadModelFile(model);
    if (sigma)
    {
      if (*sigma < 0.0)
      {
        throw ValidationError("--sigma must be >= 0");
      }
      file.noise = *sigma > 0.0 ? std::optional(GaussianNoiseSpec::Isotropic(*sigma))
                                : std::nullopt;
    }
    if (file.base.dim() != dataset.dim())
    {
      throw DimensionError("model and data dimensions differ");
    }
    return file;
  }
};

struct AttackOptions
{
  std::size_t restarts{4};
  std::size_t steps{4};
  std::string norm{"2"};

  void Register(CLI::App &cmd)
  {
    cmd.add_option("--restarts", restarts, "Random restarts per attacked point");
    cmd.add_option("--steps", steps, "Local refinement steps per restart");
    cmd.add_option("--norm", norm, "Attack norm: 1, 2 or inf");
  }

  AttackBudget Budget(GlobalOptions const &g) const
  {
    AttackBudget b{restarts, steps, g.samples, g.seed};
    b.Validate();
    return b;
  }
};

class Output
{
public:
  Output(GlobalOptions const &g, std::ostream &out)
    : path_{g.out}
    , out_{out}
  {}

  void Write(std::string const &text) const
  {
    if (path_.empty())
    {
      out_ << text;
      return;
    }
    std::ofstream file(path_, std::ios::binary);
    if (!file)
    {
      throw ValidationError("cannot write " + path_);
    }
    file << text;
  }

private:
  std::string   path_;
  std::ostream &out_;
};

DivergenceKind ParseKind(std::string const &kind, double beta, std::string const &ground)
{
  if (kind == "tv")
  {
    return DivergenceKind::TotalVariation();
  }
  if (kind == "renyi")
  {
    return DivergenceKind::Renyi(beta);
  }
  if (kind == "kl")
  {
    return DivergenceKind::Renyi(1.0);
  }
  if (kind == "max")
  {
    return DivergenceKind::Renyi(kInfinity);
  }
  if (kind == "hellinger")
  {
    return DivergenceKind::Hellinger();
  }
  if (kind == "separation")
  {
    return DivergenceKind::Separation();
  }
  return DivergenceKind::Wasserstein(ground == "line" ? GroundDistance::kOrderedLine
                                                      : GroundDistance::kTrivial);
}

}  // namespace

int Run(std::vector<std::string> const &raw_args, std::ostream &out, std::ostream &err)
{
  CLI::App app{"Certified robustness toolkit for randomized classifiers"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions g;
  app.add_option("--seed", g.seed, "Master seed for data, Monte-Carlo draws and attacks");
  app.add_option("--samples", g.samples, "Monte-Carlo samples per point")
      ->check(CLI::PositiveNumber);
  app.add_option("--out", g.out, "Write the result to this file instead of stdout");
  app.add_option("--config", g.config, "JSON file whose keys mirror the command-line flags");
  app.add_option("--threads", g.threads, "Worker threads (0 = all cores)");

  // divergence
  auto       *div = app.add_subcommand("divergence", "Divergence between two categorical distributions");
  std::string div_kind;
  double      div_beta{2.0};
  std::string div_p, div_q, div_ground{"trivial"};
  div->add_option("--kind", div_kind)
      ->required()
      ->check(CLI::IsMember({"tv", "renyi", "kl", "max", "hellinger", "separation", "wasserstein"}));
  div->add_option("--beta", div_beta, "Renyi order (>= 1)");
  div->add_option("--p", div_p)->required();
  div->add_option("--q", div_q)->required();
  div->add_option("--ground", div_ground, "Wasserstein ground distance")
      ->check(CLI::IsMember({"trivial", "line"}));

  // certify
  auto  *cert = app.add_subcommand("certify", "Certificates for Gaussian noise injection");
  double cert_sigma{0}, cert_alpha{0}, cert_beta{1.0};
  cert->add_option("--sigma", cert_sigma)->required();
  cert->add_option("--alpha", cert_alpha, "l2 radius")->required();
  cert->add_option("--beta", cert_beta, "Renyi order");

  // bound
  auto                 *bound = app.add_subcommand("bound", "Adversarial risk bounds from a clean risk");
  double                bound_risk{0}, bound_sigma{0}, bound_alpha{0}, bound_beta{1.0};
  std::optional<double> bound_entropy;
  bound->add_option("--risk", bound_risk)->required();
  bound->add_option("--sigma", bound_sigma)->required();
  bound->add_option("--alpha", bound_alpha)->required();
  bound->add_option("--beta", bound_beta);
  bound->add_option("--entropy-term", bound_entropy, "Mean of exp(-H(p(x))) over the data");

  // cover
  auto       *cover = app.add_subcommand("cover", "Cover a point set with l_p balls");
  std::string cover_input, cover_norm{"2"};
  double      cover_alpha{0};
  bool        cover_exact{false};
  cover->add_option("--input", cover_input, "Headerless CSV, one point per row")->required();
  cover->add_option("--alpha", cover_alpha, "Ball radius")->required();
  cover->add_option("--norm", cover_norm);
  cover->add_flag("--exact", cover_exact, "Minimum cover by exhaustive search (n <= 12)");

  // evaluate
  auto         *eval = app.add_subcommand("evaluate", "Clean risk, certified bounds and optional attack");
  DataOptions   eval_data;
  AttackOptions eval_attack;
  double        eval_alpha{0.5}, eval_beta{1.0};
  bool          eval_exact{false}, eval_run_attack{false};
  eval_data.Register(*eval);
  eval_attack.Register(*eval);
  eval->add_option("--alpha", eval_alpha, "l2 radius to certify");
  eval->add_option("--beta", eval_beta, "Renyi order");
  eval->add_flag("--exact", eval_exact, "Use exact evaluation where available");
  eval->add_flag("--attack", eval_run_attack, "Also run the empirical attack");

  // curve
  auto         *curve = app.add_subcommand("curve", "Guaranteed-accuracy curve as CSV");
  DataOptions   curve_data;
  AttackOptions curve_attack;
  double        curve_beta{1.0};
  std::string   curve_alphas{"0,0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9,1.0"};
  bool          curve_run_attack{false};
  curve_data.Register(*curve);
  curve_attack.Register(*curve);
  curve->add_option("--beta", curve_beta, "Renyi order");
  curve->add_option("--alphas", curve_alphas, "Comma-separated ascending l2 radii");
  curve->add_flag("--attack", curve_run_attack, "Fill the attacked_acc column");

  // sweep
  auto       *sweep = app.add_subcommand("sweep", "Clean accuracy against the noise level as CSV");
  DataOptions sweep_data;
  std::string sweep_sigmas{"0,0.1,0.25,0.5,1,2,5"};
  sweep_data.Register(*sweep);
  sweep->add_option("--sigmas", sweep_sigmas, "Comma-separated ascending noise levels");

  // attack
  auto         *atk = app.add_subcommand("attack", "Attack a single point");
  DataOptions   atk_data;
  AttackOptions atk_opts;
  std::string   atk_point;
  std::size_t   atk_label{0};
  double        atk_alpha{0};
  atk_data.Register(*atk);
  atk_opts.Register(*atk);
  atk->add_option("--point", atk_point, "Comma-separated coordinates")->required();
  atk->add_option("--label", atk_label)->required();
  atk->add_option("--alpha", atk_alpha)->required();

  try
  {
    auto args = ExpandConfig(raw_args, {"divergence", "certify", "bound", "cover", "evaluate",
                                        "curve", "sweep", "attack"});
    std::reverse(args.begin(), args.end());
    app.parse(args);
    SetThreadCount(g.threads);
    Output const output(g, out);

    if (*div)
    {
      CategoricalDistribution const p(ParseList(div_p, "p"));
      CategoricalDistribution const q(ParseList(div_q, "q"));
      double const v = Divergence(ParseKind(div_kind, div_beta, div_ground), p, q);
      output.Write(fmt::format("{:#.15g}\n", v));
    }
    else if (*cert)
    {
      auto const c = CertifyGaussianPreprocessing(cert_sigma, cert_alpha, cert_beta);
      Json const doc{{"radius", cert_alpha},
                     {"renyi_eps", c.renyi.epsilon},
                     {"tv_eps", c.total_variation.epsilon},
                     {"beta", cert_beta}};
      output.Write(doc.dump(2) + "\n");
    }
    else if (*bound)
    {
      auto const c = CertifyGaussianPreprocessing(bound_sigma, bound_alpha, bound_beta);
      auto const report =
          BuildRiskGapReport(bound_risk, c.total_variation, c.renyi, bound_entropy);
      output.Write(ReportToJson(report).dump(2) + "\n");
    }
    else if (*cover)
    {
      auto const points = ReadPointsCsv(cover_input);
      auto const norm   = NormOrder::Parse(cover_norm);
      auto const result = cover_exact ? CoveringExact(points, cover_alpha, norm)
                                      : CoveringGreedy(points, cover_alpha, norm);
      Json const doc{{"n_balls", result.n_balls},
                     {"centers", result.centers},
                     {"center_indices", result.center_indices},
                     {"radius", result.radius},
                     {"norm", norm.name()},
                     {"exact", result.exact}};
      output.Write(doc.dump(2) + "\n");
    }
    else if (*eval)
    {
      auto const     data  = eval_data.Dataset(g.seed);
      auto const     model = eval_data.Model(data);
      EvaluationMode mode  = MonteCarloEvaluation{g.samples, g.seed};
      if (eval_exact)
      {
        mode = ExactEvaluation{};
      }
      RandomizedClassifier const clf(model.base, model.noise, mode);
      auto const                 risk = EmpiricalRisk(clf, data);

      Json doc{{"provenance", data.provenance()},
               {"n", data.size()},
               {"clean_risk", risk.value},
               {"clean_standard_error", risk.standard_error}};
      if (model.noise && model.noise->is_isotropic())
      {
        double const entropy = EstimateExpNegEntropy(clf, data.points(), g.samples);
        auto const   c = CertifyGaussianPreprocessing(model.noise->sigma(), eval_alpha, eval_beta);
        auto const   report = BuildRiskGapReport(risk.value, c.total_variation, c.renyi, entropy);
        doc["report"]       = ReportToJson(report);
      }
      else
      {
        doc["report"] = nullptr;
      }
      if (eval_run_attack)
      {
        auto const adv = EmpiricalAdversarialRisk(clf, data, eval_alpha,
                                                  NormOrder::Parse(eval_attack.norm),
                                                  eval_attack.Budget(g));
        doc["attacked_risk_lower_bound"] = adv.value;
        doc["attacked_standard_error"]   = adv.standard_error;
      }
      output.Write(doc.dump(2) + "\n");
    }
    else if (*curve)
    {
      if (!curve_data.sigma)
      {
        throw ValidationError("curve needs --sigma");
      }
      auto const data  = curve_data.Dataset(g.seed);
      auto const model = curve_data.Model(data);
      CurveConfig cfg{*curve_data.sigma, curve_beta, ParseList(curve_alphas, "alphas"), g.samples,
                      g.seed, std::nullopt};
      if (curve_run_attack)
      {
        if (NormOrder::Parse(curve_attack.norm) != NormOrder::L2())
        {
          throw CapabilityError("curves certify l2 radii, so the attack norm must be 2");
        }
        cfg.attack = curve_attack.Budget(g);
      }
      auto const rows = GuaranteedAccuracyCurve(model.base, data, cfg);
      output.Write(CurveToCsv(rows));
    }
    else if (*sweep)
    {
      auto const data   = sweep_data.Dataset(g.seed);
      auto const model  = sweep_data.Model(data);
      auto const sigmas = ParseList(sweep_sigmas, "sigmas");
      auto const rows   = NoiseAccuracySweep(model.base, data, sigmas, g.samples, g.seed);
      output.Write(SweepToCsv(rows));
    }
    else if (*atk)
    {
      auto const data  = atk_data.Dataset(g.seed);
      auto const model = atk_data.Model(data);
      auto const point = ParseList(atk_point, "point");
      RandomizedClassifier const clf(model.base, model.noise,
                                     MonteCarloEvaluation{g.samples, g.seed});
      auto const norm   = NormOrder::Parse(atk_opts.norm);
      auto const result = AttackPoint(clf, point, atk_label, atk_alpha, norm, atk_opts.Budget(g));
      Json const doc{{"tau", std::vector<double>(result.tau.values().begin(), result.tau.values().end())},
                     {"tau_norm", result.tau.norm(norm)},
                     {"norm", norm.name()},
                     {"alpha", atk_alpha},
                     {"attacked_loss", result.attacked_loss},
                     {"clean_loss", result.clean_loss}};
      output.Write(doc.dump(2) + "\n");
    }
    return kExitOk;
  }
  catch (CLI::ParseError const &e)
  {
    int const code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitValidation;
  }
  catch (CapabilityError const &e)
  {
    err << "error: " << e.what() << "\n";
    return kExitCapability;
  }
  catch (std::invalid_argument const &e)
  {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  catch (std::domain_error const &e)
  {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  catch (std::exception const &e)
  {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}

}  // namespace randcert::cli
