#include "linreg/cli_app.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "linreg/coins.hpp"
#include "linreg/errors.hpp"
#include "linreg/experiments.hpp"
#include "linreg/learn_lin_reg.hpp"
#include "linreg/logreg.hpp"
#include "linreg/records_io.hpp"
#include "linreg/rng.hpp"
#include "linreg/tune_reg.hpp"

namespace linreg::cli {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

// Seed streams: every run derives from the one root seed.
constexpr std::uint64_t kProblemStream = 1000;
constexpr std::uint64_t kRunStreamBase = 2000;

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return buf;
}

// Inline JSON if the argument starts with '{', else a file path.
json load_json_arg(const std::string& arg, const std::string& what) {
  std::string text = arg;
  if (arg.find_first_not_of(" \t\r\n") != std::string::npos &&
      arg[arg.find_first_not_of(" \t\r\n")] != '{') {
    std::ifstream in(arg);
    if (!in) throw InputError("cannot open " + what + " file: " + arg);
    std::ostringstream buf;
    buf << in.rdbuf();
    text = buf.str();
  }
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(what + ": " + e.what());
  }
}

SamplerSpec parse_sampler(const json& obj) {
  if (!obj.is_object() || !obj.contains("dims") || !obj["dims"].is_array()) {
    throw InputError("sampler spec must be {\"dims\": [...]}");
  }
  SamplerSpec spec;
  for (const json& d : obj["dims"]) {
    SamplerDim dim;
    if (!d.contains("low") || !d.contains("high")) {
      throw InputError("sampler dimension needs \"low\" and \"high\"");
    }
    dim.low = d["low"].get<double>();
    dim.high = d["high"].get<double>();
    const std::string scale = d.value("scale", "uniform");
    if (scale == "uniform") {
      dim.scale = Scale::kUniform;
    } else if (scale == "log_uniform") {
      dim.scale = Scale::kLogUniform;
    } else {
      throw InputError("unknown scale: " + scale);
    }
    spec.dims.push_back(dim);
  }
  return spec;
}

BoxConstraint parse_box(const json& obj) {
  if (!obj.is_object() || !obj.contains("dims") || !obj["dims"].is_array()) {
    throw InputError("box must be {\"dims\": [...]}");
  }
  BoxConstraint box;
  for (const json& d : obj["dims"]) {
    const bool has_low = d.contains("low") && !d["low"].is_null();
    const bool has_high = d.contains("high") && !d["high"].is_null();
    box.lambda_min.push_back(has_low ? d["low"].get<double>() : -lp::kInf);
    box.lambda_max.push_back(has_high ? d["high"].get<double>() : lp::kInf);
  }
  return box;
}

// Owns the output target; "-" means stdout.
class Output {
 public:
  explicit Output(const std::string& path) {
    if (path != "-") {
      file_.open(path);
      if (!file_) throw InputError("cannot open output file: " + path);
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }
  void flush() { stream().flush(); }

 private:
  std::ofstream file_;
};

struct TuneOptions {
  std::string problem;
  std::string problem_config;
  std::string method = "tunereg";
  std::size_t budget = 0;
  std::size_t runs = 1;
  std::string spec_arg;
  bool informed = false;
  bool enforce_box = false;
  std::size_t initial = 0;  // 0 = feature count + 1
};

struct SlackTableOptions {
  std::string problem;
  std::string problem_config;
  std::string grid_arg;
  std::vector<std::string> regularizers;
};

int cmd_learn(const std::string& records_path, const std::string& box_arg,
              Output& out) {
  const std::vector<ModelRecord> records = read_records_file(records_path);
  std::optional<BoxConstraint> box;
  if (!box_arg.empty()) box = parse_box(load_json_arg(box_arg, "box"));

  const LearnResult res = learn_lin_reg(records, box);
  ordered_json obj;
  obj["alpha"] = res.weights.alpha;
  obj["lambda"] = res.weights.lambda;
  obj["i_star_id"] = res.i_star_id;
  obj["total_slack"] = res.total_slack;
  obj["alpha_degenerate"] = res.alpha_degenerate;
  out.stream() << obj.dump() << '\n';
  return 0;
}

int cmd_tune(const TuneOptions& opt, std::uint64_t seed, const std::string& format,
             Output& out) {
  std::shared_ptr<const CoinProblem> coins;
  std::shared_ptr<const LogRegProblem> logreg;
  std::vector<LogRegFeature> trainable = {LogRegFeature::kL1, LogRegFeature::kL2,
                                          LogRegFeature::kLabelSmoothing};
  SamplerSpec spec;
  if (opt.problem == "coins") {
    CoinConfig cfg;
    if (!opt.problem_config.empty()) {
      cfg = coins_config_from_json(load_json_arg(opt.problem_config, "problem config").dump());
    }
    coins = std::make_shared<const CoinProblem>(
        coins_generate(cfg, derive_seed(seed, kProblemStream)));
    spec = coins_sampler(opt.informed);
  } else if (opt.problem == "logreg") {
    LogRegConfig cfg;
    if (!opt.problem_config.empty()) {
      cfg = logreg_config_from_json(load_json_arg(opt.problem_config, "problem config").dump());
    }
    cfg.seed = derive_seed(seed, kProblemStream);
    logreg = std::make_shared<const LogRegProblem>(logreg_generate(cfg));
    spec = logreg_sampler(trainable, opt.informed);
  } else {
    throw InputError("unknown problem: " + opt.problem);
  }
  if (!opt.spec_arg.empty()) spec = parse_sampler(load_json_arg(opt.spec_arg, "sampler spec"));
  if (opt.method != "tunereg" && opt.method != "random") {
    throw InputError("unknown method: " + opt.method);
  }

  const std::size_t k = spec.dim();
  const std::size_t n_initial = opt.initial > 0 ? opt.initial : k + 1;
  const std::optional<BoxConstraint> box =
      opt.enforce_box ? std::optional<BoxConstraint>(spec.as_box()) : std::nullopt;

  json json_rows = json::array();
  bool wrote_header = false;
  auto emit = [&](const TuneHistory& history, std::size_t run) {
    if (format == "json") {
      for (const TuneEntry& e : history.entries) {
        json row;
        row["run_id"] = run;
        row["step"] = e.step;
        row["source"] = to_string(e.source);
        row["lambda"] = e.lambda;
        row["v"] = e.record.v;
        row["l_hat"] = e.record.l_hat;
        if (e.record.test_loss) {
          row["test_loss"] = *e.record.test_loss;
        } else {
          row["test_loss"] = nullptr;
        }
        row["best_v"] = e.best_v;
        json_rows.push_back(std::move(row));
      }
    } else {
      write_history_csv(history, run, k, !wrote_header, out.stream());
      wrote_header = true;
    }
  };

  for (std::size_t run = 0; run < opt.runs; ++run) {
    std::unique_ptr<TrainingOracle> oracle;
    if (coins) {
      oracle = std::make_unique<CoinsOracle>(coins);
    } else {
      oracle = std::make_unique<LogRegOracle>(logreg, trainable);
    }
    const RngStream stream(derive_seed(seed, kRunStreamBase + run));
    try {
      TuneHistory history;
      if (opt.method == "tunereg") {
        std::vector<std::vector<double>> initial;
        for (std::size_t s = 1; s <= n_initial; ++s) {
          SplitMix64 rng = stream.at(s);
          initial.push_back(random_sample(spec, rng));
        }
        history = tune(*oracle, initial, spec, opt.budget, box, stream);
      } else {
        history = random_search(*oracle, spec, opt.budget, stream);
      }
      emit(history, run);
    } catch (const OracleFailure& e) {
      emit(e.partial_history, run);
      if (format == "json") out.stream() << json_rows.dump(2) << '\n';
      out.flush();
      std::cerr << "error: " << e.what() << '\n';
      return 3;
    }
  }
  if (format == "json") out.stream() << json_rows.dump(2) << '\n';
  return 0;
}

int cmd_slack_table(const SlackTableOptions& opt, std::uint64_t seed,
                    const std::string& format, Output& out) {
  int points = 50;
  if (!opt.grid_arg.empty()) {
    const json grid = load_json_arg(opt.grid_arg, "grid");
    if (!grid.is_object() || !grid.contains("points")) {
      throw InputError("grid must be {\"points\": N}");
    }
    points = grid["points"].get<int>();
    if (points < 1) throw InputError("grid needs at least one point");
  }

  std::vector<SlackTableRow> rows;
  if (opt.problem == "coins") {
    for (const std::string& name : opt.regularizers) {
      if (name != "logitbeta") throw InputError("unknown coins regularizer: " + name);
    }
    CoinConfig cfg;
    if (!opt.problem_config.empty()) {
      cfg = coins_config_from_json(load_json_arg(opt.problem_config, "problem config").dump());
    }
    auto prob = std::make_shared<const CoinProblem>(
        coins_generate(cfg, derive_seed(seed, kProblemStream)));
    rows.push_back(coins_slack_row(prob, geomspace(0.1, 100.0, points)));
  } else if (opt.problem == "logreg") {
    std::vector<LogRegFeature> regs;
    std::vector<std::string> names = opt.regularizers;
    if (names.empty()) names = {"l1", "l2", "label_smoothing"};
    for (const std::string& name : names) {
      if (name == "l1") {
        regs.push_back(LogRegFeature::kL1);
      } else if (name == "l2") {
        regs.push_back(LogRegFeature::kL2);
      } else if (name == "label_smoothing") {
        regs.push_back(LogRegFeature::kLabelSmoothing);
      } else {
        throw InputError("unknown logreg regularizer: " + name);
      }
    }
    LogRegConfig cfg;
    if (!opt.problem_config.empty()) {
      cfg = logreg_config_from_json(load_json_arg(opt.problem_config, "problem config").dump());
    }
    cfg.seed = derive_seed(seed, kProblemStream);
    auto prob = std::make_shared<const LogRegProblem>(logreg_generate(cfg));
    std::vector<std::vector<double>> grids;
    for (LogRegFeature reg : regs) grids.push_back(default_grid(reg, points));
    rows = logreg_slack_table(prob, regs, grids);
  } else {
    throw InputError("unknown problem: " + opt.problem);
  }

  if (format == "json") {
    json arr = json::array();
    for (const SlackTableRow& row : rows) {
      json obj;
      obj["regularizer"] = row.regularizer;
      obj["max_slack"] = row.max_slack;
      obj["max_adj_slack"] = row.max_adjusted_slack;
      obj["min_test_loss"] = row.min_test_loss;
      if (row.max_accuracy) {
        obj["max_accuracy"] = *row.max_accuracy;
      } else {
        obj["max_accuracy"] = nullptr;
      }
      arr.push_back(std::move(obj));
    }
    out.stream() << arr.dump(2) << '\n';
  } else {
    out.stream() << "regularizer,max_slack,max_adj_slack,min_test_loss,max_accuracy\n";
    for (const SlackTableRow& row : rows) {
      out.stream() << row.regularizer << ',' << format_double(row.max_slack) << ','
                   << format_double(row.max_adjusted_slack) << ','
                   << format_double(row.min_test_loss) << ',';
      if (row.max_accuracy) out.stream() << format_double(*row.max_accuracy);
      out.stream() << '\n';
    }
  }
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args) {
  CLI::App app{"Linear regularization bounds: fit them from records, tune against "
               "training oracles, and tabulate slack comparisons"};
  app.require_subcommand(1);

  std::uint64_t seed = 42;
  std::string out_path = "-";
  std::string format = "csv";
  app.add_option("--seed", seed, "Root seed; all randomness derives from it")
      ->capture_default_str();
  app.add_option("--out", out_path, "Output path, or - for stdout")->capture_default_str();
  app.add_option("--format", format, "Output format for tune/slack-table")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();

  // Let global flags (--seed/--out/--format) appear after the subcommand too.
  app.fallthrough();

  std::string records_path;
  std::string box_arg;
  CLI::App* learn = app.add_subcommand("learn", "Fit bound weights from a JSONL record file");
  learn->add_option("--records", records_path, "JSONL records path")->required();
  learn->add_option("--box", box_arg, "Per-dimension lambda box (inline JSON or path)");

  TuneOptions tune_opt;
  CLI::App* tune_cmd = app.add_subcommand("tune", "Run tuning against a built-in problem");
  tune_cmd->add_option("--problem", tune_opt.problem, "coins or logreg")->required();
  tune_cmd->add_option("--method", tune_opt.method, "tunereg or random")->capture_default_str();
  tune_cmd->add_option("--budget", tune_opt.budget, "Total models trained per run")->required();
  tune_cmd->add_option("--runs", tune_opt.runs, "Independent repetitions")->capture_default_str();
  tune_cmd->add_option("--spec", tune_opt.spec_arg, "Sampler spec (inline JSON or path)");
  tune_cmd->add_option("--problem-config", tune_opt.problem_config,
                       "Problem config (inline JSON or path)");
  tune_cmd->add_flag("--informed", tune_opt.informed,
                     "Log scaling and restricted ranges for the sampler");
  tune_cmd->add_flag("--enforce-box", tune_opt.enforce_box,
                     "Constrain proposals to the sampler hypercube");
  tune_cmd->add_option("--initial", tune_opt.initial,
                       "Initial random points (default: feature count + 1)");

  SlackTableOptions table_opt;
  CLI::App* table_cmd =
      app.add_subcommand("slack-table", "Train penalty grids and tabulate bound slack");
  table_cmd->add_option("--problem", table_opt.problem, "coins or logreg")->required();
  table_cmd->add_option("--grid", table_opt.grid_arg, "Grid config (inline JSON or path)");
  table_cmd->add_option("--problem-config", table_opt.problem_config,
                        "Problem config (inline JSON or path)");
  table_cmd->add_option("--regularizers", table_opt.regularizers,
                        "Subset of regularizers to tabulate")
      ->delimiter(',');

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      std::cout << app.help() << '\n';
      return 0;
    }
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }

  try {
    Output out(out_path);
    if (learn->parsed()) return cmd_learn(records_path, box_arg, out);
    if (tune_cmd->parsed()) return cmd_tune(tune_opt, seed, format, out);
    return cmd_slack_table(table_opt, seed, format, out);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const NoFeasibleRegularizer& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const OracleFailure& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const TrainingFailure& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace linreg::cli
