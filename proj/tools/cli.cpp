#include "cli.hpp"

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <set>

#include <CLI11.hpp>
#include <json.hpp>

#include "sdenet/baseline.hpp"
#include "sdenet/dual_solver.hpp"
#include "sdenet/errors.hpp"
#include "sdenet/eval_report.hpp"
#include "sdenet/fitter.hpp"
#include "sdenet/io.hpp"
#include "sdenet/monte_carlo.hpp"
#include "sdenet/sde_model.hpp"
#include "sdenet/taylor_net.hpp"
#include "sdenet/version.hpp"

namespace sdenet::cli {
namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::uint64_t default_seed() {
  if (const char* env = std::getenv("SDENET_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw UsageError(std::string("SDENET_SEED is not an integer: ") + env);
    }
  }
  return 0;
}

// Files read by a command, with content hashes for the manifest.
struct Inputs {
  json entries = json::array();

  std::string read(const std::string& path) {
    if (!fs::is_regular_file(path)) throw ParseError(path, "no such file");
    std::string text = read_file(path);
    entries.push_back({{"path", path}, {"fnv1a", hex64(fnv1a(text))}});
    return text;
  }
};

struct ModelRef {
  std::string ref;
  double gamma = 1.0;
  double sigma = 1.0;
  double eps = 1.0;
  double nu11 = 1.0;
  double nu22 = 1.0;

  void add_options(CLI::App* cmd, bool positional_required) {
    auto* opt = cmd->add_option("model", ref, "builtin model (ou, vdp) or model JSON file");
    if (positional_required) opt->required();
    cmd->add_option("--gamma", gamma, "OU mean reversion rate");
    cmd->add_option("--sigma", sigma, "OU noise amplitude");
    cmd->add_option("--eps", eps, "van der Pol damping");
    cmd->add_option("--nu11", nu11, "van der Pol noise on x1");
    cmd->add_option("--nu22", nu22, "van der Pol noise on x2");
  }
};

SdeModel resolve_model(const ModelRef& m, Inputs& inputs) {
  static const std::set<std::string> ou{"ou", "ornstein-uhlenbeck"};
  static const std::set<std::string> vdp{"vdp", "van-der-pol"};
  if (ou.count(m.ref)) return builtin_model(m.ref, {{"gamma", m.gamma}, {"sigma", m.sigma}});
  if (vdp.count(m.ref)) {
    return builtin_model(m.ref, {{"eps", m.eps}, {"nu11", m.nu11}, {"nu22", m.nu22}});
  }
  return parse_model(inputs.read(m.ref));
}

std::size_t axis_index(int axis, std::size_t dim) {
  if (axis < 1 || static_cast<std::size_t>(axis) > dim) {
    throw InvalidArgument("--axis " + std::to_string(axis) + " is outside 1.." + std::to_string(dim));
  }
  return static_cast<std::size_t>(axis - 1);
}

// Every option of `cmd` with its resolved value.
json resolved_config(const CLI::App* cmd) {
  json cfg = json::object();
  for (const CLI::Option* opt : cmd->get_options()) {
    const std::string name = opt->get_single_name();
    if (name == "help") continue;
    if (opt->count() > 0) {
      const auto& res = opt->results();
      cfg[name] = res.size() == 1 ? json(res.front()) : json(res);
    } else {
      cfg[name] = opt->get_default_str();
    }
  }
  return cfg;
}

struct Run {
  std::string command;
  const std::vector<std::string>* args = nullptr;
  const CLI::App* app = nullptr;
  std::ostream* out = nullptr;
  std::ostream* err = nullptr;
  Inputs inputs;
  json seeds = json::object();
  std::vector<std::string> outputs;
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

  void write(const std::string& path, const std::string& contents) {
    write_file_atomic(path, contents);
    outputs.push_back(path);
  }

  void finish(const std::string& primary) {
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    json doc;
    doc["command"] = command;
    doc["arguments"] = *args;
    doc["config"] = resolved_config(app);
    doc["seeds"] = seeds;
    doc["version"] = kVersion;
    doc["inputs"] = inputs.entries;
    doc["outputs"] = outputs;
    doc["duration_seconds"] = seconds;
    write_file_atomic(primary + ".manifest.json", doc.dump(2) + "\n");
  }
};

// Evaluation operands -------------------------------------------------------

struct Operand {
  Predictor fn;
  std::size_t dim = 0;
};

std::map<std::string, std::string> key_values(const std::string& body, const std::string& operand_text) {
  std::map<std::string, std::string> kv;
  if (body.empty()) return kv;
  for (const auto& item : split_csv_line(body)) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw UsageError("expected key=value in '" + operand_text + "'");
    kv[item.substr(0, eq)] = item.substr(eq + 1);
  }
  return kv;
}

class OperandReader {
 public:
  OperandReader(std::map<std::string, std::string> kv, std::string operand_text)
      : kv_(std::move(kv)), operand_text_(std::move(operand_text)) {}

  double number(const std::string& key, double fallback) {
    auto it = kv_.find(key);
    if (it == kv_.end()) return fallback;
    used_.insert(key);
    return parse_double(it->second);
  }
  std::string text(const std::string& key) {
    auto it = kv_.find(key);
    if (it == kv_.end()) throw UsageError("'" + operand_text_ + "' needs " + key + "=...");
    used_.insert(key);
    return it->second;
  }
  void done() const {
    for (const auto& [k, v] : kv_) {
      if (!used_.count(k)) throw UsageError("unknown key '" + k + "' in '" + operand_text_ + "'");
    }
  }

 private:
  std::map<std::string, std::string> kv_;
  std::string operand_text_;
  std::set<std::string> used_;
};

SigmoidNet read_network(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError("byte " + std::to_string(e.byte), "invalid JSON");
  }
  if (doc.is_object() && doc.contains("network")) return parse_net(doc["network"].dump());
  return parse_net(text);
}

int integer_of(double v, const std::string& what) {
  if (v != std::floor(v)) throw UsageError(what + " must be an integer");
  return static_cast<int>(v);
}

// ou:gamma=..,sigma=..,t=..,m=..   mc:model=..,axis=..,m=..,t=..,dt=..,paths=..,seed=..
// Anything else is a file: .csv dual coefficients, .json network.
Operand load_operand(const std::string& operand_text, Inputs& inputs) {
  if (operand_text.rfind("ou:", 0) == 0) {
    OperandReader r(key_values(operand_text.substr(3), operand_text), operand_text);
    const double gamma = r.number("gamma", 1.0), sigma = r.number("sigma", 1.0);
    const double t = r.number("t", 1.0);
    const int m = integer_of(r.number("m", 1.0), "m");
    r.done();
    analytic_ou_moment(gamma, sigma, 0.0, t, m);  // validates
    return {[=](std::span<const double> x) { return analytic_ou_moment(gamma, sigma, x[0], t, m); },
            1};
  }
  if (operand_text.rfind("mc:", 0) == 0) {
    OperandReader r(key_values(operand_text.substr(3), operand_text), operand_text);
    ModelRef ref;
    ref.ref = r.text("model");
    ref.gamma = r.number("gamma", 1.0);
    ref.sigma = r.number("sigma", 1.0);
    ref.eps = r.number("eps", 1.0);
    ref.nu11 = r.number("nu11", 1.0);
    ref.nu22 = r.number("nu22", 1.0);
    SimConfig sim;
    sim.t = r.number("t", 1.0);
    sim.dt = r.number("dt", 1e-3);
    sim.paths = static_cast<std::size_t>(integer_of(r.number("paths", 10000), "paths"));
    sim.seed = static_cast<std::uint64_t>(integer_of(r.number("seed", 0), "seed"));
    const int axis = integer_of(r.number("axis", 1), "axis");
    const int m = integer_of(r.number("m", 1), "m");
    r.done();
    auto model = std::make_shared<SdeModel>(resolve_model(ref, inputs));
    const std::size_t a = axis_index(axis, model->dim());
    sim.steps();
    return {[=](std::span<const double> x) { return mc_moment(simulate(*model, x, sim), a, m).estimate; },
            model->dim()};
  }
  const std::string ext = fs::path(operand_text).extension().string();
  if (ext == ".csv") {
    auto coeffs = std::make_shared<DualCoefficients>(dual_from_csv(inputs.read(operand_text)));
    return {[coeffs](std::span<const double> x) { return eval_moment(*coeffs, x); }, coeffs->dim()};
  }
  if (ext == ".json") {
    auto net = std::make_shared<SigmoidNet>(read_network(inputs.read(operand_text)));
    return {[net](std::span<const double> x) { return forward(*net, x); }, net->dim()};
  }
  throw UsageError("cannot interpret '" + operand_text + "': expected ou:..., mc:..., a .csv or a .json file");
}

std::string gnuplot_script(const std::string& kind, const std::string& csv, bool with_reference) {
  std::string s = "set datafile separator ','\nset key autotitle columnhead\n";
  if (kind == "grid") {
    s += "set view map\nset xlabel 'x1'\nset ylabel 'x2'\n";
    s += "splot '" + csv + "' using 1:2:3 with image\n";
  } else if (kind == "polar") {
    s += "set xlabel 'distance from origin'\nset ylabel 'mean squared error'\nset logscale y\n";
    s += "plot '" + csv + "' using (($1+$2)/2):3 with linespoints title 'mse'\n";
  } else {
    s += "set xlabel 'x0'\n";
    s += "plot '" + csv + "' using 1:2 with lines";
    if (with_reference) s += ", '' using 1:3 with lines";
    s += "\n";
  }
  return s;
}

// Commands ------------------------------------------------------------------

struct DualOptions {
  ModelRef model;
  int axis = 1;
  int order = 1;
  int truncation = 12;
  double t = 1.0;
  double rtol = 1e-10;
  double atol = 1e-12;
  std::string out;
};

void add_solve_options(CLI::App* cmd, int& axis, int& order, int& truncation, double& t) {
  cmd->add_option("--axis", axis, "state component i (1-based)");
  cmd->add_option("--order", order, "moment order m");
  cmd->add_option("--N", truncation, "truncation order N");
  cmd->add_option("--t", t, "time horizon");
}

void run_dual(Run& run, const DualOptions& o) {
  const SdeModel model = resolve_model(o.model, run.inputs);
  IntegratorConfig icfg;
  icfg.rtol = o.rtol;
  icfg.atol = o.atol;
  SolveStats stats;
  const auto coeffs =
      solve_moment(model, o.truncation, axis_index(o.axis, model.dim()), o.order, o.t, icfg, &stats);
  run.write(o.out, dual_to_csv(coeffs));
  *run.err << "spill " << format_double(stats.spill) << " steps " << stats.integrator.accepted
           << "\n";
  *run.out << "wrote " << o.out << " (" << coeffs.values.size() << " coefficients)\n";
  run.finish(o.out);
}

struct FitOptions {
  ModelRef model;
  std::string dual;
  int axis = 1;
  int order = 1;
  int truncation = 12;
  double t = 1.0;
  FitConfig fit;
  std::string out;
};

// Coefficients either from --dual or solved from the model reference.
DualCoefficients target_coefficients(Run& run, const ModelRef& model, const std::string& dual,
                                     int axis, int order, int truncation, double t) {
  if (model.ref.empty() == dual.empty()) {
    throw UsageError("give either a model or --dual, not both or neither");
  }
  if (!dual.empty()) return dual_from_csv(run.inputs.read(dual));
  const SdeModel m = resolve_model(model, run.inputs);
  SolveStats stats;
  auto coeffs = solve_moment(m, truncation, axis_index(axis, m.dim()), order, t, {}, &stats);
  *run.err << "spill " << format_double(stats.spill) << "\n";
  return coeffs;
}

void run_fit(Run& run, FitOptions o, bool truncation_given) {
  const auto target =
      target_coefficients(run, o.model, o.dual, o.axis, o.order, o.truncation, o.t);
  o.fit.order = truncation_given || o.dual.empty() ? o.truncation : target.order();
  run.seeds["seed"] = o.fit.seed;
  const auto result = fit_network(target, o.fit);

  json doc;
  doc["network"] = json::parse(serialize_net(result.net));
  doc["cost"] = result.cost;
  doc["gradient_norm"] = result.gradient_norm;
  doc["converged"] = result.converged;
  doc["iterations"] = result.iterations;
  doc["best_restart"] = result.best_restart;
  json costs = json::array();
  for (const auto& r : result.restarts) costs.push_back(r.cost);
  doc["restart_costs"] = costs;
  doc["seed"] = result.seed;
  doc["order"] = o.fit.order;
  run.write(o.out, doc.dump(2) + "\n");
  *run.out << "cost " << format_double(result.cost) << "\n";
  run.finish(o.out);
}

struct McOptions {
  ModelRef model;
  std::vector<double> x0;
  int axis = 1;
  int m = 1;
  SimConfig sim;
  std::string out;
  std::string ensemble;
};

void run_mc(Run& run, const McOptions& o) {
  const SdeModel model = resolve_model(o.model, run.inputs);
  const std::size_t axis = axis_index(o.axis, model.dim());
  run.seeds["seed"] = o.sim.seed;
  const auto ens = simulate(model, o.x0, o.sim);
  const auto est = mc_moment(ens, axis, o.m);
  std::string csv = "axis,order,estimate,std_error,used,excluded\n";
  csv += std::to_string(o.axis) + "," + std::to_string(o.m) + "," + format_double(est.estimate) +
         "," + format_double(est.std_error) + "," + std::to_string(est.used) + "," +
         std::to_string(est.excluded) + "\n";
  run.write(o.out, csv);
  if (!o.ensemble.empty()) run.write(o.ensemble, ensemble_to_csv(ens));
  if (est.excluded > 0) *run.err << "excluded " << est.excluded << " diverged paths\n";
  *run.out << "estimate " << format_double(est.estimate) << " std_error "
           << format_double(est.std_error) << "\n";
  run.finish(o.out);
}

struct TrainOptions {
  ModelRef model;
  std::string dual;
  int axis = 2;
  int order = 2;
  int truncation = 17;
  double t = 0.1;
  std::size_t size = 250'000;
  std::vector<double> box{-4.0, 4.0};
  std::size_t hidden = 8;
  std::string optimizer = "adam";
  TrainConfig train;
  std::optional<std::uint64_t> data_seed;
  unsigned threads = 0;
  std::string out;
  std::string dataset;
  std::string loss;
};

void run_train(Run& run, TrainOptions o) {
  if (o.model.ref.empty() && o.dual.empty()) o.model.ref = "vdp";
  const auto coeffs =
      target_coefficients(run, o.model, o.dual, o.axis, o.order, o.truncation, o.t);
  if (o.box[0] > o.box[1]) throw InvalidArgument("--box: lower bound exceeds upper bound");
  o.train.optimizer = o.optimizer == "adadelta" ? TrainOptimizer::AdaDelta : TrainOptimizer::Adam;
  const std::uint64_t data_seed = o.data_seed.value_or(o.train.seed);
  run.seeds["seed"] = o.train.seed;
  run.seeds["data_seed"] = data_seed;

  const auto data =
      generate_dataset(coeffs, Box::cube(coeffs.dim(), o.box[0], o.box[1]), o.size, data_seed, o.threads);
  if (!o.dataset.empty()) run.write(o.dataset, dataset_to_csv(data));
  const auto result = train_backprop(data, o.hidden, o.train);

  json doc;
  doc["network"] = json::parse(serialize_net(result.net));
  doc["final_mse"] = result.epoch_loss.back();
  doc["epoch_loss"] = result.epoch_loss;
  doc["seed"] = o.train.seed;
  doc["data_seed"] = data_seed;
  run.write(o.out, doc.dump(2) + "\n");
  if (!o.loss.empty()) {
    std::string csv = "epoch,mse\n";
    for (std::size_t e = 0; e < result.epoch_loss.size(); ++e) {
      csv += std::to_string(e + 1) + "," + format_double(result.epoch_loss[e]) + "\n";
    }
    run.write(o.loss, csv);
  }
  *run.out << "final mse " << format_double(result.epoch_loss.back()) << "\n";
  run.finish(o.out);
}

struct EvalOptions {
  std::string pred;
  std::string ref;
  std::vector<double> grid;
  std::vector<double> polar;
  std::vector<double> line;
  int bands = 0;
  std::string out;
  std::string gnuplot;
};

void run_eval(Run& run, const EvalOptions& o) {
  const int modes = !o.grid.empty() + !o.polar.empty() + !o.line.empty();
  if (modes != 1) throw UsageError("give exactly one of --grid, --polar, --line");
  const Operand pred = load_operand(o.pred, run.inputs);
  std::optional<Operand> ref;
  if (!o.ref.empty()) {
    ref = load_operand(o.ref, run.inputs);
    if (ref->dim != pred.dim) {
      throw InvalidArgument("predictor has dimension " + std::to_string(pred.dim) +
                            " but reference has dimension " + std::to_string(ref->dim));
    }
  }
  std::string kind;
  if (!o.grid.empty()) {
    kind = "grid";
    if (ref) throw UsageError("--grid evaluates a single predictor; drop --ref");
    if (pred.dim != 2) throw InvalidArgument("--grid needs a two-dimensional predictor");
    std::vector<double> g = o.grid;
    if (g.size() == 3) g = {g[0], g[1], g[0], g[1], g[2], g[2]};
    if (g.size() != 6) throw UsageError("--grid takes LO HI N or LO1 HI1 LO2 HI2 N1 N2");
    const auto points = grid_eval(pred.fn, g[0], g[1], g[2], g[3], integer_of(g[4], "N1"),
                                  integer_of(g[5], "N2"));
    run.write(o.out, grid_to_csv(points));
    *run.out << "wrote " << o.out << " (" << points.size() << " points)\n";
  } else if (!o.polar.empty()) {
    kind = "polar";
    if (!ref) throw UsageError("--polar needs --ref");
    if (pred.dim != 2) throw InvalidArgument("--polar needs two-dimensional operands");
    if (o.polar.size() != 3) throw UsageError("--polar takes R_MAX N_R N_THETA");
    auto profile = radial_error_profile(pred.fn, ref->fn, o.polar[0], integer_of(o.polar[1], "N_R"),
                                        integer_of(o.polar[2], "N_THETA"), o.bands);
    run.write(o.out, profile_to_csv(profile));
    const double r_max = o.polar[0];
    *run.out << "mean mse near (r <= " << format_double(r_max / 4)
             << ") " << format_double(profile.mean_mse(0, r_max / 4)) << " far (r >= "
             << format_double(3 * r_max / 4) << ") "
             << format_double(profile.mean_mse(3 * r_max / 4, r_max)) << "\n";
  } else {
    kind = "line";
    if (pred.dim != 1) throw InvalidArgument("--line needs a one-dimensional predictor");
    if (o.line.size() != 3) throw UsageError("--line takes LO HI N");
    const auto points = line_eval(pred.fn, ref ? ref->fn : Predictor{}, o.line[0], o.line[1],
                                  integer_of(o.line[2], "N"));
    run.write(o.out, line_to_csv(points, ref.has_value()));
    *run.out << "wrote " << o.out << " (" << points.size() << " points)\n";
  }
  if (!o.gnuplot.empty()) run.write(o.gnuplot, gnuplot_script(kind, o.out, ref.has_value()));
  run.finish(o.out);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Moment estimation for polynomial SDEs via dual processes and sigmoid networks",
               "sdenet"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);
  app.option_defaults()->always_capture_default();

  const std::uint64_t seed0 = [&] {
    try {
      return default_seed();
    } catch (const UsageError&) {
      return std::uint64_t{0};
    }
  }();

  DualOptions dual;
  auto* dual_cmd = app.add_subcommand("dual", "solve the dual coefficient ODEs");
  dual_cmd->option_defaults()->always_capture_default();
  dual.model.add_options(dual_cmd, true);
  add_solve_options(dual_cmd, dual.axis, dual.order, dual.truncation, dual.t);
  dual_cmd->add_option("--rtol", dual.rtol, "integrator relative tolerance");
  dual_cmd->add_option("--atol", dual.atol, "integrator absolute tolerance");
  dual_cmd->add_option("--out", dual.out, "coefficient CSV")->required();

  FitOptions fit;
  fit.fit.seed = seed0;
  fit.fit.threads = 0;
  auto* fit_cmd = app.add_subcommand("fit", "embed dual coefficients into a sigmoid network");
  fit_cmd->option_defaults()->always_capture_default();
  fit.model.add_options(fit_cmd, false);
  fit_cmd->add_option("--dual", fit.dual, "coefficient CSV from `dual`");
  add_solve_options(fit_cmd, fit.axis, fit.order, fit.truncation, fit.t);
  auto* fit_n = fit_cmd->get_option("--N");
  fit_cmd->add_option("--hidden", fit.fit.hidden, "hidden nodes n");
  fit_cmd->add_option("--restarts", fit.fit.restarts, "random restarts");
  fit_cmd->add_option("--seed", fit.fit.seed, "restart seed ($SDENET_SEED)");
  fit_cmd->add_option("--max-iterations", fit.fit.max_iterations, "iterations per restart");
  fit_cmd->add_option("--gtol", fit.fit.gradient_tolerance, "gradient tolerance");
  fit_cmd->add_option("--ftol", fit.fit.cost_tolerance, "relative cost reduction tolerance");
  fit_cmd->add_option("--damping", fit.fit.initial_damping, "initial damping");
  fit_cmd->add_option("--damping-up", fit.fit.damping_increase, "damping factor on rejection");
  fit_cmd->add_option("--damping-down", fit.fit.damping_decrease, "damping divisor on acceptance");
  fit_cmd->add_option("--init-lo", fit.fit.init_lo, "initial weight lower bound");
  fit_cmd->add_option("--init-hi", fit.fit.init_hi, "initial weight upper bound");
  fit_cmd->add_option("--bias-bound", fit.fit.bias_bound, "bound on hidden biases, 0 disables");
  fit_cmd->add_option("--threads", fit.fit.threads, "worker threads, 0 = $SDENET_THREADS");
  fit_cmd->add_option("--out", fit.out, "network JSON")->required();

  McOptions mc;
  mc.sim.seed = seed0;
  auto* mc_cmd = app.add_subcommand("mc", "Euler-Maruyama moment estimate");
  mc_cmd->option_defaults()->always_capture_default();
  mc.model.add_options(mc_cmd, true);
  mc_cmd->add_option("--x0", mc.x0, "initial state")->required()->expected(1, -1);
  mc_cmd->add_option("--axis", mc.axis, "state component i (1-based)");
  mc_cmd->add_option("--m", mc.m, "moment order");
  mc_cmd->add_option("--t", mc.sim.t, "time horizon");
  mc_cmd->add_option("--dt", mc.sim.dt, "step size");
  mc_cmd->add_option("--paths", mc.sim.paths, "number of paths");
  mc_cmd->add_option("--seed", mc.sim.seed, "path seed ($SDENET_SEED)");
  mc_cmd->add_option("--threads", mc.sim.threads, "worker threads, 0 = $SDENET_THREADS");
  mc_cmd->add_option("--out", mc.out, "estimate CSV")->required();
  mc_cmd->add_option("--ensemble", mc.ensemble, "final states CSV");

  TrainOptions train;
  train.train.seed = seed0;
  auto* train_cmd =
      app.add_subcommand("train-baseline", "train a network on dual-solver samples by backprop");
  train_cmd->option_defaults()->always_capture_default();
  train.model.add_options(train_cmd, false);
  train_cmd->add_option("--dual", train.dual, "coefficient CSV from `dual`");
  add_solve_options(train_cmd, train.axis, train.order, train.truncation, train.t);
  train_cmd->add_option("--size", train.size, "dataset size");
  train_cmd->add_option("--box", train.box, "sampling interval on every axis")->expected(2);
  train_cmd->add_option("--hidden", train.hidden, "hidden nodes n");
  train_cmd->add_option("--epochs", train.train.epochs, "epochs");
  train_cmd->add_option("--batch", train.train.batch_size, "mini-batch size");
  train_cmd->add_option("--optimizer", train.optimizer, "adam or adadelta")
      ->check(CLI::IsMember({"adam", "adadelta"}));
  train_cmd->add_option("--lr", train.train.learning_rate, "learning rate");
  train_cmd->add_option("--lr-decay", train.train.lr_decay, "per-epoch learning rate factor");
  train_cmd->add_option("--beta1", train.train.beta1, "Adam first-moment decay");
  train_cmd->add_option("--beta2", train.train.beta2, "Adam second-moment decay");
  train_cmd->add_option("--rho", train.train.rho, "AdaDelta decay");
  train_cmd->add_option("--epsilon", train.train.epsilon, "optimizer epsilon");
  train_cmd->add_option("--seed", train.train.seed, "initialization and shuffle seed");
  train_cmd->add_option("--data-seed", train.data_seed, "dataset seed, defaults to --seed");
  train_cmd->add_option("--threads", train.threads, "dataset threads, 0 = $SDENET_THREADS");
  train_cmd->add_option("--out", train.out, "network JSON")->required();
  train_cmd->add_option("--dataset", train.dataset, "dataset CSV");
  train_cmd->add_option("--loss", train.loss, "per-epoch loss CSV");

  EvalOptions ev;
  auto* eval_cmd = app.add_subcommand("eval", "evaluate predictors on grids, lines and polar meshes");
  eval_cmd->option_defaults()->always_capture_default();
  eval_cmd->add_option("--pred", ev.pred, "network .json, dual .csv, ou:... or mc:...")->required();
  eval_cmd->add_option("--ref", ev.ref, "reference operand, same forms as --pred");
  eval_cmd->add_option("--grid", ev.grid, "LO HI N or LO1 HI1 LO2 HI2 N1 N2")->expected(3, 6);
  eval_cmd->add_option("--polar", ev.polar, "R_MAX N_R N_THETA")->expected(3);
  eval_cmd->add_option("--line", ev.line, "LO HI N")->expected(3);
  eval_cmd->add_option("--bands", ev.bands, "radial bands, 0 = one per ring");
  eval_cmd->add_option("--out", ev.out, "output CSV")->required();
  eval_cmd->add_option("--gnuplot", ev.gnuplot, "gnuplot script");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  Run run;
  run.args = &args;
  run.out = &out;
  run.err = &err;
  try {
    default_seed();
    if (dual_cmd->parsed()) {
      run.command = "dual";
      run.app = dual_cmd;
      run_dual(run, dual);
    } else if (fit_cmd->parsed()) {
      run.command = "fit";
      run.app = fit_cmd;
      run_fit(run, fit, fit_n->count() > 0);
    } else if (mc_cmd->parsed()) {
      run.command = "mc";
      run.app = mc_cmd;
      run_mc(run, mc);
    } else if (train_cmd->parsed()) {
      run.command = "train-baseline";
      run.app = train_cmd;
      run_train(run, train);
    } else {
      run.command = "eval";
      run.app = eval_cmd;
      run_eval(run, ev);
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const InvalidArgument& e) {
    err << "invalid argument: " << e.what() << "\n";
    return 2;
  } catch (const OutOfRange& e) {
    err << "invalid argument: " << e.what() << "\n";
    return 2;
  } catch (const SolverError& e) {
    err << "solver error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace sdenet::cli
