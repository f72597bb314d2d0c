#include "puckpar/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <set>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "puckpar/csv.hpp"
#include "puckpar/evaluate.hpp"
#include "puckpar/ingest.hpp"
#include "puckpar/models.hpp"
#include "puckpar/par.hpp"
#include "puckpar/persist.hpp"

namespace puckpar::cli {

namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t kDefaultSeed = 42;

void configure_logging() {
  auto logger = spdlog::get("puckpar");
  if (!logger) {
    logger = spdlog::stderr_color_mt("puckpar");
    spdlog::set_default_logger(logger);
  }
  auto level = spdlog::level::warn;
  if (const char* env = std::getenv("PUCKPAR_LOG")) {
    const std::string v = env;
    if (v == "error") level = spdlog::level::err;
    else if (v == "warn") level = spdlog::level::warn;
    else if (v == "info") level = spdlog::level::info;
    else if (v == "debug") level = spdlog::level::debug;
  }
  spdlog::set_level(level);
}

std::string real(double v) { return fmt::format("{}", v); }

std::ofstream open_output(const fs::path& dir, const std::string& name) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw InputError(fmt::format("cannot create output directory '{}': {}", dir.string(), ec.message()));
  const fs::path path = dir / name;
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError(fmt::format("cannot write '{}'", path.string()));
  return out;
}

void finish(std::ofstream& file, const std::string& what) {
  file.flush();
  if (!file) throw InputError(fmt::format("failed writing {}", what));
}

std::vector<SkaterRecord> load_records(const std::string& path) {
  return load_skaters(path).records;
}

std::map<std::string, double> predictions_by_player(const FittedModel& model,
                                                    const std::vector<SkaterRecord>& records) {
  const auto predicted = predict_raw(model, feature_matrix(records));
  std::map<std::string, double> out;
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (!out.emplace(records[i].player_id, predicted[i]).second) {
      throw ValidationError(
          fmt::format("player '{}' appears more than once; evaluation needs one row per player", records[i].player_id));
    }
  }
  return out;
}

struct Options {
  std::string skaters;
  std::string teams;
  std::string baselines;
  std::string model;
  std::string out = ".";
  std::optional<std::uint64_t> seed;
  double wo = 2.0;
  std::size_t top = 0;
};

int cmd_train(const Options& opt, std::ostream& out, std::ostream& err) {
  const std::uint64_t seed = opt.seed.value_or(kDefaultSeed);
  err << "seed: " << seed << (opt.seed ? "" : " (default)") << "\n";

  const auto records = load_records(opt.skaters);
  const Dataset dataset = build_dataset(records, seed);
  const GridSearchReport report = search_all(dataset);
  const FittedModel& winner = select_model(report.kinds);

  auto file = open_output(opt.out, "grid_report.csv");
  csv::write_row(file, {"kind", "hyperparams", "validation_mae", "test_mae"});
  for (const auto& search : report.kinds) {
    for (const auto& c : search.candidates) {
      csv::write_row(file, {std::string(to_string(search.kind)), c.spec.hyper.to_string(), real(c.validation_mae),
                            real(c.test_mae)});
    }
  }
  finish(file, "grid report");

  const fs::path model_path = opt.model.empty() ? fs::path(opt.out) / "model.json" : fs::path(opt.model);
  save(winner, model_path);

  out << "selected " << to_string(winner.kind()) << " [" << winner.spec.hyper.to_string() << "]\n";
  for (const auto& search : report.kinds) {
    out << fmt::format("  {:<7} validation MAE {:.4f}  test MAE {:.4f}\n", to_string(search.kind),
                       search.best().validation_mae, search.best().test_mae);
  }
  out << "model written to " << model_path.string() << "\n";
  return kExitOk;
}

int cmd_evaluate(const Options& opt, std::ostream& out) {
  const FittedModel model = load(opt.model);
  const auto records = load_records(opt.skaters);
  const BaselineMap baselines = opt.baselines.empty() ? BaselineMap{} : load_baselines(opt.baselines);
  const std::size_t top = opt.top == 0 ? 100 : opt.top;

  ModelPredictions predictions{std::string(to_string(model.kind())), predictions_by_player(model, records)};
  std::vector<ActualPpg> actuals;
  for (const auto& r : records) actuals.push_back({r.player_id, ppg(r).value()});

  const auto summaries = actuals.empty() ? std::vector<ErrorSummary>{}
                                         : compare_all(predictions, baselines, actuals, top);
  auto file = open_output(opt.out, "error_summary.csv");
  csv::write_row(file, {"source", "mean_abs_error", "median_abs_error", "n"});
  for (const auto& s : summaries) {
    csv::write_row(file, {s.source, real(s.mean_abs_error), real(s.median_abs_error), std::to_string(s.n)});
    out << fmt::format("{:<7} mean {:.3f}  median {:.3f}  n {}\n", s.source, s.mean_abs_error, s.median_abs_error,
                       s.n);
  }
  finish(file, "error summary");

  const auto curves = actuals.empty() ? std::vector<CurveSeries>{} : emit_curves(predictions, baselines, actuals, top);
  for (const auto& series : curves) {
    auto curve = open_output(opt.out, fmt::format("curve_{}.csv", series.source));
    csv::write_row(curve, {"source", "rank", "player_id", "actual_ppg", "predicted_ppg"});
    for (const auto& p : series.points) {
      csv::write_row(curve, {series.source, std::to_string(p.rank), p.player_id, real(p.actual_ppg),
                             p.predicted_ppg ? real(*p.predicted_ppg) : std::string()});
    }
    finish(curve, "curve data");
  }
  return kExitOk;
}

int cmd_predict(const Options& opt) {
  const FittedModel model = load(opt.model);
  const auto records = load_records(opt.skaters);
  const auto predicted = predict_raw(model, feature_matrix(records));

  auto file = open_output(opt.out, "predictions.csv");
  csv::write_row(file, {"player_id", "name", "predicted_ppg"});
  for (std::size_t i = 0; i < records.size(); ++i) {
    csv::write_row(file, {records[i].player_id, records[i].name, real(predicted[i])});
  }
  finish(file, "predictions");
  return kExitOk;
}

int cmd_par(const Options& opt, std::ostream& out) {
  ParConfig config;
  config.w_o = opt.wo;
  config.validate();

  const FittedModel model = load(opt.model);
  const auto records = load_records(opt.skaters);
  const auto forms = load_team_forms(opt.teams);
  const auto predicted = predict_raw(model, feature_matrix(records));

  std::vector<ParInput> players;
  std::set<std::string> seen;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    if (!seen.insert(r.player_id).second) {
      throw ValidationError(fmt::format("player '{}' appears more than once", r.player_id));
    }
    players.push_back({r.player_id, r.name, r.team_id, predicted[i], ppg(r).value()});
  }
  const auto board = par_leaderboard(players, forms, config, opt.top == 0 ? 10 : opt.top);

  auto file = open_output(opt.out, "leaderboard.csv");
  csv::write_row(file,
                 {"rank", "player_id", "name", "ppg_predicted", "ppg_actual", "ppcg_season", "ppcg_recent", "par"});
  for (std::size_t i = 0; i < board.size(); ++i) {
    const auto& e = board[i];
    csv::write_row(file, {std::to_string(i + 1), e.player_id, e.name, real(e.ppg_predicted), real(e.ppg_actual),
                          real(e.ppcg_season), real(e.ppcg_recent), real(e.par)});
    out << fmt::format("{:>3}  {:<24} PAR {:.2f}\n", i + 1, e.name, e.par);
  }
  finish(file, "leaderboard");
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  configure_logging();

  CLI::App app{"Points-per-game projection and Player Availability Rating"};
  app.require_subcommand(1);
  Options opt;

  auto* train = app.add_subcommand("train", "Grid-search all five model kinds and save the best");
  train->add_option("--skaters", opt.skaters, "Skaters CSV")->required();
  train->add_option("--out", opt.out, "Output directory")->capture_default_str();
  train->add_option("--model", opt.model, "Model archive path (default <out>/model.json)");
  train->add_option("--seed", opt.seed, "Random seed (default 42)");

  auto* evaluate = app.add_subcommand("evaluate", "Score a model against actual PPG and baselines");
  evaluate->add_option("--model", opt.model, "Model archive")->required();
  evaluate->add_option("--skaters", opt.skaters, "Skaters CSV with current tallies")->required();
  evaluate->add_option("--baselines", opt.baselines, "Baselines CSV");
  evaluate->add_option("--out", opt.out, "Output directory")->capture_default_str();
  evaluate->add_option("--top", opt.top, "Number of top scorers (default 100)")->check(CLI::PositiveNumber);

  auto* predict_cmd = app.add_subcommand("predict", "Predict points per game");
  predict_cmd->add_option("--model", opt.model, "Model archive")->required();
  predict_cmd->add_option("--skaters", opt.skaters, "Skaters CSV")->required();
  predict_cmd->add_option("--out", opt.out, "Output directory")->capture_default_str();

  auto* par = app.add_subcommand("par", "Rank players by Player Availability Rating");
  par->add_option("--model", opt.model, "Model archive")->required();
  par->add_option("--skaters", opt.skaters, "Skaters CSV with current tallies")->required();
  par->add_option("--teams", opt.teams, "Team form CSV")->required();
  par->add_option("--wo", opt.wo, "Weight of the recent-form term")->capture_default_str();
  par->add_option("--top", opt.top, "Leaderboard length (default 10)")->check(CLI::PositiveNumber);
  par->add_option("--out", opt.out, "Output directory")->capture_default_str();

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (*train) return cmd_train(opt, out, err);
    if (*evaluate) return cmd_evaluate(opt, out);
    if (*predict_cmd) return cmd_predict(opt);
    if (*par) return cmd_par(opt, out);
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitInternal;
}

}  // namespace puckpar::cli
