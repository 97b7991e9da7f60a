#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <variant>
#include <vector>

namespace cbrgda {

// A feature value is one of: real number, quoted text, bare symbol, boolean.
// Symbols and text both carry a string payload; they compare unequal to each
// other so that `red` and `"red"` stay distinct through a round trip.
struct Symbol {
    std::string name;
    auto operator<=>(const Symbol&) const = default;
};

struct Text {
    std::string value;
    auto operator<=>(const Text&) const = default;
};

using FeatureValue = std::variant<double, Text, Symbol, bool>;

// Ordered map keyed by feature name. std::map gives the lexicographic
// iteration order the serializer depends on.
using FeatureMap = std::map<std::string, FeatureValue>;

struct SolutionStep {
    std::string action;
    std::vector<FeatureValue> args;
    auto operator<=>(const SolutionStep&) const = default;
};

struct SolutionPlan {
    std::vector<SolutionStep> steps;

    bool empty() const { return steps.empty(); }
    std::size_t size() const { return steps.size(); }
    auto operator<=>(const SolutionPlan&) const = default;
};

struct OutcomeRecord {
    double success = 1.0;  // in [0,1]
    std::map<std::string, double> metrics;
    auto operator<=>(const OutcomeRecord&) const = default;
};

struct CaseMetadata {
    std::string id;           // content hash, hex
    std::int64_t created_at = 0;
    std::string provenance;
    std::set<std::string> tags;
    auto operator<=>(const CaseMetadata&) const = default;
};

struct Case {
    FeatureMap problem;
    SolutionPlan solution;
    OutcomeRecord outcome;
    CaseMetadata meta;
    auto operator<=>(const Case&) const = default;

    const std::string& id() const { return meta.id; }
};

// Unparsed record: section name -> section body. Populated by the record
// reader; must contain `problem` and `solution` sections.
using RawCaseRecord = std::map<std::string, std::string>;

// --- value formatting ------------------------------------------------------

// Shortest decimal rendering that re-parses to the same double. Integral
// values print without a fractional part.
std::string canonical_real(double v);

std::string format_value(const FeatureValue& v);
FeatureValue parse_value(const std::string& token);

std::string format_feature_map(const FeatureMap& m);
std::string format_step(const SolutionStep& s);
std::string format_plan(const SolutionPlan& p);

// --- record grammar --------------------------------------------------------

// One record per line, sections separated by `|`:
//   problem: a=1; b=x | solution: move(a) | outcome: success=0.8
RawCaseRecord parse_raw_record(const std::string& line);

FeatureMap extract_problem(const RawCaseRecord& raw);
SolutionPlan extract_solution(const RawCaseRecord& raw);
OutcomeRecord extract_outcome(const RawCaseRecord& raw);
CaseMetadata generate_metadata(const RawCaseRecord& raw, std::int64_t tick);

Case build_case(const RawCaseRecord& raw, std::int64_t tick);

// Parses a `name=value; ...` feature list (the query grammar).
FeatureMap parse_feature_list(const std::string& body);

// Parses an `action(args); ...` step list.
SolutionPlan parse_plan(const std::string& body);

// Canonical single-line rendering. serialize_case output reparses (via
// parse_serialized_case) to an equal Case, byte-identically for equal cases.
std::string serialize_case(const Case& c);
Case parse_serialized_case(const std::string& line);

// Stable 64-bit content hash (FNV-1a over the canonical section rendering),
// independent of machine and insertion order.
std::uint64_t content_hash(const RawCaseRecord& raw);

}  // namespace cbrgda
