#include "mofn/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

namespace mofn {

OutputFormat parse_format(std::string_view name) {
  if (name == "csv") return OutputFormat::csv;
  if (name == "json") return OutputFormat::json;
  throw std::invalid_argument("unknown format '" + std::string(name) + "' (expected csv or json)");
}

std::string format_percent(double fraction) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", fraction * 100.0);
  return buf;
}

std::string format_fraction(double fraction) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", fraction);
  return buf;
}

double round6(double x) { return std::round(x * 1e6) / 1e6; }

namespace {

double round2(double x) { return std::round(x * 1e2) / 1e2; }

std::string label_string(Label l) { return std::string(1, label_char(l)); }

Label label_from(const std::string& s) {
  if (s == "+") return Label::positive;
  if (s == "-") return Label::negative;
  throw std::invalid_argument("bad label '" + s + "'");
}

std::vector<std::vector<std::string>> csv_rows(std::string_view text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in{std::string(text)};
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (header) {
      header = false;
      continue;
    }
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::istringstream ls(line);
    std::string f;
    while (std::getline(ls, f, ',')) fields.push_back(f);
    rows.push_back(std::move(fields));
  }
  return rows;
}

}  // namespace

PredictionReport predict_all(const Theory& theory, const MProfile& profile,
                             const ExampleSet& set) {
  CompiledTheory compiled(theory);
  auto th = compiled.thresholds(profile);
  PredictionReport report;
  for (const auto& ex : set.examples()) {
    Label p = compiled.classify(th, ex.sequence) ? Label::positive : Label::negative;
    tally(report.counts, ex.label, p);
    report.entries.push_back({ex.name, ex.label, p});
  }
  return report;
}

// -- sweep ------------------------------------------------------------------

std::string to_csv(const std::vector<SweepRow>& rows) {
  std::string out = "interpretation,i,correct,false_positives,false_negatives,accuracy_percent\n";
  for (const auto& r : rows) {
    out += r.interpretation + "," + std::to_string(r.decrement) + "," +
           std::to_string(r.correct) + "," + std::to_string(r.false_positives) + "," +
           std::to_string(r.false_negatives) + "," + format_percent(r.accuracy) + "\n";
  }
  return out;
}

Json to_json(const std::vector<SweepRow>& rows) {
  Json arr = Json::array();
  for (const auto& r : rows) {
    Json j;
    j["interpretation"] = r.interpretation;
    j["i"] = r.decrement;
    j["correct"] = r.correct;
    j["false_positives"] = r.false_positives;
    j["false_negatives"] = r.false_negatives;
    j["accuracy"] = round6(r.accuracy);
    j["accuracy_percent"] = round2(r.accuracy * 100.0);
    arr.push_back(std::move(j));
  }
  return arr;
}

std::vector<SweepRow> sweep_from_json(const Json& j) {
  std::vector<SweepRow> rows;
  for (const auto& r : j) {
    rows.push_back({r.at("interpretation").get<std::string>(), r.at("i").get<int>(),
                    r.at("correct").get<std::size_t>(),
                    r.at("false_positives").get<std::size_t>(),
                    r.at("false_negatives").get<std::size_t>(),
                    r.at("accuracy").get<double>()});
  }
  return rows;
}

std::vector<SweepRow> sweep_from_csv(std::string_view text) {
  std::vector<SweepRow> rows;
  for (const auto& f : csv_rows(text)) {
    if (f.size() != 6) throw std::invalid_argument("sweep CSV row needs 6 fields");
    rows.push_back({f[0], std::stoi(f[1]), std::stoul(f[2]), std::stoul(f[3]),
                    std::stoul(f[4]), std::stod(f[5]) / 100.0});
  }
  return rows;
}

// -- distribution / search ----------------------------------------------------

std::string to_csv(const AccuracyDistribution& dist) {
  std::string out = "correct,count,probability\n";
  for (std::size_t k = 0; k < dist.counts.size(); ++k) {
    if (dist.counts[k] == 0) continue;
    double p = static_cast<double>(dist.counts[k]) / static_cast<double>(dist.total_profiles);
    out += std::to_string(k) + "," + std::to_string(dist.counts[k]) + "," +
           format_fraction(p) + "\n";
  }
  return out;
}

AccuracyDistribution distribution_from_csv(std::string_view text, std::size_t examples) {
  AccuracyDistribution dist(examples);
  for (const auto& f : csv_rows(text)) {
    if (f.size() != 3) throw std::invalid_argument("distribution CSV row needs 3 fields");
    std::size_t k = std::stoul(f[0]);
    if (k > examples) throw std::invalid_argument("correct count beyond example count");
    dist.add(k, std::stoull(f[1]));
  }
  return dist;
}

std::string to_csv(const SearchReport& report) { return to_csv(report.distribution); }

Json profile_to_json(const MProfile& profile) {
  Json j = Json::object();
  for (const auto& [id, m] : profile.entries()) j[id.str()] = m;
  return j;
}

MProfile profile_from_json(const Json& j) {
  if (!j.is_object()) throw ProfileError("profile JSON must be an object");
  std::vector<std::pair<LeafId, int>> entries;
  for (const auto& [key, value] : j.items()) {
    if (!value.is_number_integer())
      throw ProfileError("M for leaf " + key + " must be an integer");
    try {
      entries.emplace_back(LeafId::parse(key), value.get<int>());
    } catch (const std::invalid_argument& e) {
      throw ProfileError(e.what());
    }
  }
  return MProfile(std::move(entries));
}

Json to_json(const SearchReport& report) {
  Json j;
  j["total_profiles"] = report.distribution.total_profiles;
  j["best_correct"] = report.best_correct;
  Json best = Json::array();
  for (const auto& p : report.best_profiles) best.push_back(profile_to_json(p));
  j["best_profiles"] = std::move(best);
  j["mean_accuracy"] = round6(report.mean_accuracy);
  j["std_accuracy"] = round6(report.std_accuracy);
  Json at = Json::object();
  for (const auto& [k, n] : report.at_least) at[std::to_string(k)] = n;
  j["at_least"] = std::move(at);
  j["examples"] = report.distribution.examples();
  Json dist = Json::array();
  for (std::size_t k = 0; k < report.distribution.counts.size(); ++k)
    if (report.distribution.counts[k] != 0)
      dist.push_back(Json{{"correct", k}, {"count", report.distribution.counts[k]}});
  j["distribution"] = std::move(dist);
  return j;
}

SearchReport search_report_from_json(const Json& j) {
  SearchReport r;
  r.distribution = AccuracyDistribution(j.at("examples").get<std::size_t>());
  for (const auto& bin : j.at("distribution"))
    r.distribution.add(bin.at("correct").get<std::size_t>(),
                       bin.at("count").get<std::uint64_t>());
  if (r.distribution.total_profiles != j.at("total_profiles").get<std::uint64_t>())
    throw std::invalid_argument("distribution does not sum to total_profiles");
  r.best_correct = j.at("best_correct").get<std::size_t>();
  for (const auto& p : j.at("best_profiles")) r.best_profiles.push_back(profile_from_json(p));
  r.mean_accuracy = j.at("mean_accuracy").get<double>();
  r.std_accuracy = j.at("std_accuracy").get<double>();
  for (const auto& [k, n] : j.at("at_least").items())
    r.at_least[std::stoul(k)] = n.get<std::uint64_t>();
  return r;
}

// -- trials -----------------------------------------------------------------

std::string to_csv(const TrialReport& report) {
  std::string out = "trial,seed,chosen_i,test_accuracy\n";
  for (std::size_t t = 0; t < report.per_trial.size(); ++t) {
    const auto& r = report.per_trial[t];
    out += std::to_string(t) + "," + std::to_string(r.seed) + "," +
           std::to_string(r.chosen_i) + "," + format_fraction(r.test_accuracy) + "\n";
  }
  return out;
}

Json to_json(const TrialReport& report) {
  Json j;
  j["train_size"] = report.train_size;
  j["test_size"] = report.test_size;
  j["trials"] = report.trials;
  j["mean_accuracy"] = round6(report.mean_accuracy);
  j["std_accuracy"] = round6(report.std_accuracy);
  Json per = Json::array();
  for (std::size_t t = 0; t < report.per_trial.size(); ++t) {
    const auto& r = report.per_trial[t];
    per.push_back(Json{{"trial", t},
                       {"seed", r.seed},
                       {"chosen_i", r.chosen_i},
                       {"test_accuracy", round6(r.test_accuracy)}});
  }
  j["per_trial"] = std::move(per);
  return j;
}

TrialReport trial_report_from_json(const Json& j) {
  TrialReport r;
  r.train_size = j.at("train_size").get<std::size_t>();
  r.test_size = j.at("test_size").get<std::size_t>();
  r.trials = j.at("trials").get<std::size_t>();
  r.mean_accuracy = j.at("mean_accuracy").get<double>();
  r.std_accuracy = j.at("std_accuracy").get<double>();
  for (const auto& t : j.at("per_trial"))
    r.per_trial.push_back({t.at("seed").get<std::uint64_t>(), t.at("chosen_i").get<int>(),
                           t.at("test_accuracy").get<double>()});
  return r;
}

// -- DOP --------------------------------------------------------------------

std::string to_csv(const DopReport& report) {
  std::string out = "name,label,score,predicted\n";
  for (const auto& e : report.entries)
    out += e.name + "," + label_string(e.label) + "," + format_fraction(e.score) + "," +
           label_string(e.predicted) + "\n";
  return out;
}

Json confusion_to_json(const ConfusionCounts& c) {
  return Json{{"tp", c.tp}, {"fp", c.fp}, {"tn", c.tn}, {"fn", c.fn}};
}

ConfusionCounts confusion_from_json(const Json& j) {
  return {j.at("tp").get<std::size_t>(), j.at("fp").get<std::size_t>(),
          j.at("tn").get<std::size_t>(), j.at("fn").get<std::size_t>()};
}

Json to_json(const DopReport& report) {
  Json j;
  j["semantics"] = report.semantics.name();
  j["threshold"] = round6(report.threshold);
  j["k"] = report.k;
  j["positive_fraction"] = round6(report.positive_fraction_used);
  j["confusion"] = confusion_to_json(report.counts);
  j["accuracy"] = report.counts.total() ? round6(accuracy(report.counts)) : 0.0;
  Json entries = Json::array();
  for (const auto& e : report.entries)
    entries.push_back(Json{{"name", e.name},
                           {"label", label_string(e.label)},
                           {"score", round6(e.score)},
                           {"predicted", label_string(e.predicted)}});
  j["examples"] = std::move(entries);
  return j;
}

DopReport dop_report_from_json(const Json& j) {
  DopReport r;
  r.semantics = DopSemantics::parse(j.at("semantics").get<std::string>());
  r.threshold = j.at("threshold").get<double>();
  r.k = j.at("k").get<std::size_t>();
  r.positive_fraction_used = j.at("positive_fraction").get<double>();
  r.counts = confusion_from_json(j.at("confusion"));
  for (const auto& e : j.at("examples"))
    r.entries.push_back({e.at("name").get<std::string>(),
                         label_from(e.at("label").get<std::string>()),
                         e.at("score").get<double>(),
                         label_from(e.at("predicted").get<std::string>())});
  return r;
}

// -- predictions ------------------------------------------------------------

std::string to_csv(const PredictionReport& report) {
  std::string out = "name,label,predicted\n";
  for (const auto& e : report.entries)
    out += e.name + "," + label_string(e.label) + "," + label_string(e.predicted) + "\n";
  return out;
}

Json to_json(const PredictionReport& report) {
  Json j;
  j["confusion"] = confusion_to_json(report.counts);
  j["correct"] = report.counts.correct();
  j["accuracy"] = report.counts.total() ? round6(accuracy(report.counts)) : 0.0;
  Json entries = Json::array();
  for (const auto& e : report.entries)
    entries.push_back(Json{{"name", e.name},
                           {"label", label_string(e.label)},
                           {"predicted", label_string(e.predicted)}});
  j["examples"] = std::move(entries);
  return j;
}

void write_text(std::string_view text, const std::optional<std::filesystem::path>& destination,
                std::ostream& standard_output) {
  if (!destination) {
    standard_output << text;
    standard_output.flush();
    return;
  }
  std::ofstream out(*destination, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + destination->string() + "' for writing");
  out << text;
  out.flush();
  if (!out) throw IoError("failed writing '" + destination->string() + "'");
}

}  // namespace mofn
