#include "mofn/cli.hpp"

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "mofn/dataset.hpp"
#include "mofn/dop.hpp"
#include "mofn/engine.hpp"
#include "mofn/learner.hpp"
#include "mofn/report.hpp"
#include "mofn/search.hpp"
#include "mofn/theory.hpp"

namespace mofn {
namespace {

constexpr const char* kConformation = "conformation";

struct RunConfig {
  std::string theory_path;
  std::string data_path;
  std::vector<std::string> drops;
  bool keep_conformation = false;
  int decrement = 0;
  int i_max = kDefaultMaxDecrement;
  std::size_t trials = 100;
  std::size_t train_size = 85;
  std::size_t test_size = 21;
  std::optional<std::uint64_t> seed;
  unsigned jobs = std::max(1u, std::thread::hardware_concurrency());
  std::string format = "csv";
  std::string out_path;
  std::string summary_path;
  std::string semantics = "min-max";
  std::optional<double> positive_fraction;
  std::uint64_t space_cap = 10'000'000;
  bool stratified = false;
  std::string profile_path;
};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path, const char* what) {
  if (path.empty()) throw UsageError(std::string("--") + what + " is required");
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError(std::string("cannot read ") + what + " file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::optional<std::filesystem::path> out_path(const RunConfig& cfg) {
  if (cfg.out_path.empty()) return std::nullopt;
  return std::filesystem::path(cfg.out_path);
}

class Session {
 public:
  Session(const RunConfig& cfg, std::ostream& out, std::ostream& err)
      : cfg_(cfg), out_(out), err_(err) {}

  Theory load_theory() {
    Theory theory;
    try {
      theory = parse_theory_unchecked(read_file(cfg_.theory_path, "theory"));
    } catch (const ParseError& e) {
      throw DomainError(cfg_.theory_path + ": " + e.what());
    }
    Diagnostics diag = validate(theory);
    for (const auto& w : diag.warnings)
      err_ << cfg_.theory_path << ":" << w.line << ": warning: " << w.message << '\n';
    if (!diag.ok()) {
      for (const auto& e : diag.errors)
        err_ << cfg_.theory_path << ":" << e.line << ": error: " << e.message << '\n';
      throw DomainError("theory has " + std::to_string(diag.errors.size()) + " error(s)");
    }
    return theory;
  }

  ExampleSet load_data() {
    try {
      auto parsed = parse_dataset_with_warnings(read_file(cfg_.data_path, "data"));
      for (const auto& w : parsed.warnings)
        err_ << cfg_.data_path << ":" << w.line << ": warning: " << w.message << '\n';
      return std::move(parsed.set);
    } catch (const DataError& e) {
      throw DomainError(cfg_.data_path + ": " + e.what());
    }
  }

  Theory apply_drops(Theory theory, std::vector<std::string> drops) {
    for (const auto& d : drops) {
      auto res = drop_symbol(theory, d);
      for (const auto& w : res.warnings)
        err_ << "drop " << d << ": warning: " << w.message << '\n';
      theory = std::move(res.theory);
    }
    return theory;
  }

  /// --drop symbols, plus conformation unless kept or absent.
  std::vector<std::string> default_drops(const Theory& theory) const {
    std::vector<std::string> drops = cfg_.drops;
    if (!cfg_.keep_conformation && theory.defines(kConformation) &&
        std::find(drops.begin(), drops.end(), kConformation) == drops.end())
      drops.insert(drops.begin(), kConformation);
    return drops;
  }

  OutputFormat format() const { return parse_format(cfg_.format); }

  template <class Report>
  void emit(const Report& report) {
    write_report(report, format(), out_path(cfg_), out_);
  }

  void emit_summary(const Json& summary, const std::string& line) {
    if (!cfg_.summary_path.empty())
      write_text(summary.dump(2) + "\n", std::filesystem::path(cfg_.summary_path), out_);
    err_ << line << '\n';
  }

  int validate_cmd() {
    if (cfg_.theory_path.empty() && cfg_.data_path.empty())
      throw UsageError("validate needs --theory and/or --data");
    std::vector<std::string> parts;
    bool failed = false;
    if (!cfg_.theory_path.empty()) {
      try {
        Theory theory = apply_drops(load_theory(), cfg_.drops);
        Diagnostics diag = validate(theory);
        if (!diag.ok()) {
          err_ << diag.str();
          throw DomainError("theory invalid after drops");
        }
        if (theory.defines("contact"))
          parts.push_back("theory OK, " + std::to_string(leaves_under(theory, "contact").size()) +
                          " contact leaves");
        else
          parts.push_back("theory OK, " + std::to_string(leaves(theory).size()) + " leaves");
      } catch (const DomainError& e) {
        err_ << "error: " << e.what() << '\n';
        parts.push_back("theory INVALID");
        failed = true;
      } catch (const TheoryError& e) {
        err_ << "error: " << e.what();
        parts.push_back("theory INVALID");
        failed = true;
      }
    }
    if (!cfg_.data_path.empty()) {
      try {
        ExampleSet set = load_data();
        parts.push_back("data OK, " + std::to_string(set.positives()) + "+/" +
                        std::to_string(set.negatives()) + "-");
      } catch (const DomainError& e) {
        err_ << "error: " << e.what() << '\n';
        parts.push_back("data INVALID");
        failed = true;
      }
    }
    std::string line;
    for (const auto& p : parts) line += (line.empty() ? "" : "; ") + p;
    out_ << line << '\n';
    return failed ? kExitDomain : kExitOk;
  }

  int sweep_cmd() {
    if (cfg_.drops.size() > 1) throw UsageError("sweep takes at most one --drop symbol");
    Theory theory = load_theory();
    ExampleSet set = load_data();
    std::string dropped = cfg_.drops.empty() ? kConformation : cfg_.drops.front();
    auto rows = sweep_decrements(theory, set, cfg_.i_max, dropped);
    emit(rows);
    return kExitOk;
  }

  int search_cmd() {
    Theory full = load_theory();
    ExampleSet set = load_data();
    Theory theory = apply_drops(full, default_drops(full));
    std::uint64_t space = 0;
    try {
      space = profile_space_size(theory);
    } catch (const std::overflow_error&) {
      throw DomainError("profile space exceeds 2^64; refusing to search");
    }
    if (space > cfg_.space_cap)
      throw DomainError("profile space " + std::to_string(space) + " exceeds --space-cap " +
                        std::to_string(cfg_.space_cap));
    SearchReport report = exhaustive_search(theory, set, {cfg_.jobs, {99, 103}});
    emit(report);
    std::ostringstream line;
    line << "profiles " << report.distribution.total_profiles << ", best " << report.best_correct
         << " correct x" << report.best_profiles.size() << ", mean "
         << format_percent(report.mean_accuracy) << "%, std "
         << format_percent(report.std_accuracy) << "%";
    emit_summary(to_json(report), line.str());
    return kExitOk;
  }

  int learn_cmd() {
    if (!cfg_.seed) throw UsageError("learn requires --seed");
    Theory full = load_theory();
    ExampleSet set = load_data();
    if (cfg_.train_size + cfg_.test_size > set.size())
      throw UsageError("--train-size + --test-size exceeds the " + std::to_string(set.size()) +
                       " available examples");
    if (cfg_.test_size == 0) throw UsageError("--test-size must be at least 1");
    if (cfg_.train_size == 0) throw UsageError("--train-size must be at least 1");
    Theory theory = apply_drops(full, default_drops(full));
    TrialOptions opts{cfg_.i_max, cfg_.stratified ? SplitMode::stratified : SplitMode::uniform,
                      cfg_.jobs};
    TrialReport report =
        run_trials(theory, set, cfg_.train_size, cfg_.test_size, cfg_.trials, *cfg_.seed, opts);
    emit(report);
    emit_summary(to_json(report), "mean test accuracy " + format_percent(report.mean_accuracy) +
                                      "% (std " + format_percent(report.std_accuracy) +
                                      "%) over " + std::to_string(report.trials) + " trials");
    return kExitOk;
  }

  int dop_cmd() {
    if (cfg_.positive_fraction &&
        !(*cfg_.positive_fraction > 0.0 && *cfg_.positive_fraction < 1.0))
      throw UsageError("--positive-fraction must lie strictly between 0 and 1");
    DopSemantics sem;
    try {
      sem = DopSemantics::parse(cfg_.semantics);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    Theory theory = apply_drops(load_theory(), cfg_.drops);
    ExampleSet set = load_data();
    DopReport report = dop_classify_all(theory, set, sem, cfg_.positive_fraction);
    emit(report);
    emit_summary(to_json(report),
                 sem.name() + ": threshold " + format_fraction(report.threshold) + ", k " +
                     std::to_string(report.k) + ", accuracy " +
                     format_percent(accuracy(report.counts)) + "%");
    return kExitOk;
  }

  int classify_cmd() {
    Theory theory = apply_drops(load_theory(), cfg_.drops);
    ExampleSet set = load_data();
    MProfile profile;
    if (!cfg_.profile_path.empty()) {
      std::string text = read_file(cfg_.profile_path, "profile");
      try {
        profile = profile_from_json(Json::parse(text));
      } catch (const Json::exception& e) {
        throw DomainError(cfg_.profile_path + ": " + e.what());
      }
    } else {
      profile = decrement_profile(theory, cfg_.decrement);
    }
    PredictionReport report = predict_all(theory, profile, set);
    emit(report);
    err_ << "correct " << report.counts.correct() << ", false positives " << report.counts.fp
         << ", false negatives " << report.counts.fn << ", accuracy "
         << format_percent(accuracy(report.counts)) << "%\n";
    return kExitOk;
  }

 private:
  const RunConfig& cfg_;
  std::ostream& out_;
  std::ostream& err_;
};

void add_inputs(CLI::App* cmd, RunConfig& cfg, bool data = true) {
  cmd->add_option("--theory", cfg.theory_path, "Rule file")->type_name("PATH");
  if (data) cmd->add_option("--data", cfg.data_path, "Example file")->type_name("PATH");
  cmd->add_option("--drop", cfg.drops, "Remove SYMBOL from the theory (repeatable)")
      ->type_name("SYMBOL");
}

void add_output(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--format", cfg.format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  cmd->add_option("--out", cfg.out_path, "Output file (standard output when absent)")
      ->type_name("PATH");
}

void add_summary(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--summary", cfg.summary_path, "Also write the JSON summary to PATH")
      ->type_name("PATH");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"M-of-N interpretations of propositional domain theories", "mofn"};
  app.require_subcommand(1);
  app.get_formatter()->column_width(40);

  auto* validate_cmd = app.add_subcommand("validate", "Check a theory and/or example file");
  add_inputs(validate_cmd, cfg);

  auto* sweep = app.add_subcommand("sweep", "Accuracy under constant decrements (N-i)-of-N");
  add_inputs(sweep, cfg);
  sweep->add_option("--i-max", cfg.i_max, "Largest decrement")->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  add_output(sweep, cfg);

  auto* search = app.add_subcommand("search", "Exhaustive search over per-leaf M values");
  add_inputs(search, cfg);
  search->add_flag("--keep-conformation", cfg.keep_conformation,
                   "Do not drop the conformation symbol");
  search->add_option("--jobs", cfg.jobs, "Worker threads")->capture_default_str()
      ->check(CLI::PositiveNumber);
  search->add_option("--space-cap", cfg.space_cap, "Refuse spaces larger than N profiles")
      ->capture_default_str();
  add_output(search, cfg);
  add_summary(search, cfg);

  auto* learn = app.add_subcommand("learn", "Repeated train/test trials of decrement learning");
  add_inputs(learn, cfg);
  learn->add_flag("--keep-conformation", cfg.keep_conformation,
                  "Do not drop the conformation symbol");
  learn->add_option("--trials", cfg.trials, "Number of trials")->capture_default_str()
      ->check(CLI::PositiveNumber);
  learn->add_option("--train-size", cfg.train_size, "Training examples per trial")
      ->capture_default_str();
  learn->add_option("--test-size", cfg.test_size, "Test examples per trial")
      ->capture_default_str();
  learn->add_option("--seed", cfg.seed, "Base seed (required)")->type_name("U64");
  learn->add_option("--i-max", cfg.i_max, "Largest decrement")->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  learn->add_option("--jobs", cfg.jobs, "Worker threads")->capture_default_str()
      ->check(CLI::PositiveNumber);
  learn->add_flag("--stratified", cfg.stratified, "Stratify splits by class");
  add_output(learn, cfg);
  add_summary(learn, cfg);

  auto* dop = app.add_subcommand("dop", "Degree-of-provedness scoring with rank threshold");
  add_inputs(dop, cfg);
  dop->add_option("--semantics", cfg.semantics, "min-max or product-max")
      ->check(CLI::IsMember({"min-max", "product-max"}))
      ->capture_default_str();
  dop->add_option("--positive-fraction", cfg.positive_fraction,
                  "Share classified positive (default: the data's positive share)")
      ->type_name("F");
  add_output(dop, cfg);
  add_summary(dop, cfg);

  auto* classify = app.add_subcommand("classify", "Predict under an explicit M profile");
  add_inputs(classify, cfg);
  classify->add_option("--profile", cfg.profile_path,
                       "JSON object {\"<symbol>#<ordinal>\": M}; overrides --i")
      ->type_name("PATH");
  classify->add_option("--i", cfg.decrement, "Constant decrement when no profile is given")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  add_output(classify, cfg);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  Session session(cfg, out, err);
  try {
    if (*validate_cmd) return session.validate_cmd();
    if (*sweep) return session.sweep_cmd();
    if (*search) return session.search_cmd();
    if (*learn) return session.learn_cmd();
    if (*dop) return session.dop_cmd();
    if (*classify) return session.classify_cmd();
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitDomain;
  }
  return kExitUsage;
}

}  // namespace mofn
