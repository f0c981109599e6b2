#pragma once

// CSV and JSON layouts for every report the tools emit. Output is
// byte-deterministic: '\n' newlines, unquoted CSV fields, percentages with
// two decimals, fractions with six. JSON keeps a fixed key order and rounds
// fractions to six decimals; integers are written as integers.

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "mofn/dop.hpp"
#include "mofn/engine.hpp"
#include "mofn/learner.hpp"
#include "mofn/search.hpp"

namespace mofn {

using Json = nlohmann::ordered_json;

enum class OutputFormat { csv, json };

OutputFormat parse_format(std::string_view name);

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string format_percent(double fraction);   // 0.93396 -> "93.40"
std::string format_fraction(double fraction);  // 0.765 -> "0.765000"
double round6(double x);

/// Per-example predictions under an explicit profile.
struct PredictionReport {
  struct Entry {
    std::string name;
    Label label = Label::negative;
    Label predicted = Label::negative;
    friend bool operator==(const Entry&, const Entry&) = default;
  };
  std::vector<Entry> entries;
  ConfusionCounts counts;

  friend bool operator==(const PredictionReport&, const PredictionReport&) = default;
};

PredictionReport predict_all(const Theory& theory, const MProfile& profile,
                             const ExampleSet& set);

// Sweep table.
std::string to_csv(const std::vector<SweepRow>& rows);
Json to_json(const std::vector<SweepRow>& rows);
std::vector<SweepRow> sweep_from_json(const Json& j);
std::vector<SweepRow> sweep_from_csv(std::string_view text);

// Accuracy distribution and search report. The CSV form of a search report is
// its distribution.
std::string to_csv(const AccuracyDistribution& dist);
AccuracyDistribution distribution_from_csv(std::string_view text, std::size_t examples);
std::string to_csv(const SearchReport& report);
Json to_json(const SearchReport& report);
SearchReport search_report_from_json(const Json& j);

Json profile_to_json(const MProfile& profile);
MProfile profile_from_json(const Json& j);

// Learning trials.
std::string to_csv(const TrialReport& report);
Json to_json(const TrialReport& report);
TrialReport trial_report_from_json(const Json& j);

// DOP scoring.
std::string to_csv(const DopReport& report);
Json to_json(const DopReport& report);
DopReport dop_report_from_json(const Json& j);

// Explicit-profile predictions.
std::string to_csv(const PredictionReport& report);
Json to_json(const PredictionReport& report);

Json confusion_to_json(const ConfusionCounts& c);
ConfusionCounts confusion_from_json(const Json& j);

/// Serialized text of `report` in the given format (JSON gets a trailing
/// newline and two-space indentation).
template <class Report>
std::string render(const Report& report, OutputFormat format) {
  if (format == OutputFormat::csv) return to_csv(report);
  return to_json(report).dump(2) + "\n";
}

/// Writes to `destination`, or to `standard_output` when there is none.
/// Throws IoError when the file cannot be written.
void write_text(std::string_view text, const std::optional<std::filesystem::path>& destination,
                std::ostream& standard_output);

template <class Report>
void write_report(const Report& report, OutputFormat format,
                  const std::optional<std::filesystem::path>& destination,
                  std::ostream& standard_output) {
  write_text(render(report, format), destination, standard_output);
}

}  // namespace mofn
