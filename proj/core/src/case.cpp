#include "cbrgda/case.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>

#include "cbrgda/errors.hpp"

namespace cbrgda {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

// Splits on `sep`, ignoring separators inside double quotes and, when
// `respect_parens` is set, inside parentheses.
std::vector<std::string> split_outside(const std::string& s, char sep, bool respect_parens) {
    std::vector<std::string> out;
    std::string cur;
    bool in_quotes = false;
    int depth = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        char c = s[i];
        if (in_quotes) {
            cur += c;
            if (c == '\\' && i + 1 < s.size()) {
                cur += s[++i];
            } else if (c == '"') {
                in_quotes = false;
            }
            continue;
        }
        if (c == '"') {
            in_quotes = true;
            cur += c;
        } else if (respect_parens && c == '(') {
            ++depth;
            cur += c;
        } else if (respect_parens && c == ')') {
            --depth;
            cur += c;
        } else if (c == sep && depth == 0) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

bool parse_double(const std::string& s, double& out) {
    const char* b = s.data();
    const char* e = b + s.size();
    auto [p, ec] = std::from_chars(b, e, out);
    return ec == std::errc() && p == e && std::isfinite(out);
}

std::string quote_text(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    out += '"';
    return out;
}

std::string unquote_text(const std::string& s) {
    // expects surrounding quotes
    std::string out;
    for (std::size_t i = 1; i + 1 < s.size(); ++i) {
        if (s[i] == '\\' && i + 2 < s.size()) ++i;
        out += s[i];
    }
    return out;
}

constexpr std::uint64_t kFnvOffset = 1469598103934665603ULL;
constexpr std::uint64_t kFnvPrime = 1099511628211ULL;

void fnv_mix(std::uint64_t& h, const std::string& s) {
    for (unsigned char c : s) {
        h ^= c;
        h *= kFnvPrime;
    }
}

}  // namespace

std::string canonical_real(double v) {
    if (v == 0.0) return "0";  // collapses -0.0
    if (v == std::floor(v) && std::fabs(v) < 1e15) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.0f", v);
        return buf;
    }
    char buf[64];
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
        double back = 0.0;
        std::from_chars(buf, buf + std::strlen(buf), back);
        if (back == v) break;
    }
    return buf;
}

std::string format_value(const FeatureValue& v) {
    switch (v.index()) {
        case 0: return canonical_real(std::get<double>(v));
        case 1: return quote_text(std::get<Text>(v).value);
        case 2: return std::get<Symbol>(v).name;
        default: return std::get<bool>(v) ? "true" : "false";
    }
}

FeatureValue parse_value(const std::string& token) {
    std::string t = trim(token);
    if (t.size() >= 2 && t.front() == '"' && t.back() == '"') return Text{unquote_text(t)};
    if (t == "true") return true;
    if (t == "false") return false;
    double d = 0.0;
    if (parse_double(t, d)) return d == 0.0 ? 0.0 : d;
    return Symbol{t};
}

std::string format_feature_map(const FeatureMap& m) {
    std::string out;
    for (const auto& [name, value] : m) {
        if (!out.empty()) out += "; ";
        out += name + "=" + format_value(value);
    }
    return out;
}

std::string format_step(const SolutionStep& s) {
    std::string out = s.action + "(";
    for (std::size_t i = 0; i < s.args.size(); ++i) {
        if (i) out += ",";
        out += format_value(s.args[i]);
    }
    out += ")";
    return out;
}

std::string format_plan(const SolutionPlan& p) {
    std::string out;
    for (const auto& step : p.steps) {
        if (!out.empty()) out += "; ";
        out += format_step(step);
    }
    return out;
}

FeatureMap parse_feature_list(const std::string& body) {
    FeatureMap out;
    if (trim(body).empty()) return out;
    for (const std::string& piece : split_outside(body, ';', false)) {
        std::string pair = trim(piece);
        if (pair.empty()) continue;
        auto eq = pair.find('=');
        require(eq != std::string::npos, Errc::malformed_record,
                "feature pair without '=': '" + pair + "'");
        std::string name = trim(pair.substr(0, eq));
        require(!name.empty(), Errc::malformed_record, "feature pair with empty name");
        FeatureValue value = parse_value(pair.substr(eq + 1));
        auto [it, inserted] = out.emplace(name, std::move(value));
        require(inserted, Errc::duplicate_feature, "feature '" + name + "' repeats");
    }
    return out;
}

SolutionPlan parse_plan(const std::string& body) {
    SolutionPlan plan;
    if (trim(body).empty()) return plan;
    for (const std::string& piece : split_outside(body, ';', true)) {
        std::string step_text = trim(piece);
        if (step_text.empty()) continue;
        auto open = step_text.find('(');
        require(open != std::string::npos && step_text.back() == ')', Errc::malformed_record,
                "step not of form action(args): '" + step_text + "'");
        int depth = 0;
        for (char c : step_text) {
            if (c == '(') ++depth;
            if (c == ')') --depth;
            require(depth >= 0, Errc::malformed_record, "unbalanced parentheses in '" + step_text + "'");
        }
        require(depth == 0, Errc::malformed_record, "unbalanced parentheses in '" + step_text + "'");
        SolutionStep step;
        step.action = trim(step_text.substr(0, open));
        require(!step.action.empty(), Errc::malformed_record, "step with empty action symbol");
        std::string args = step_text.substr(open + 1, step_text.size() - open - 2);
        if (!trim(args).empty()) {
            for (const std::string& a : split_outside(args, ',', true))
                step.args.push_back(parse_value(a));
        }
        plan.steps.push_back(std::move(step));
    }
    return plan;
}

RawCaseRecord parse_raw_record(const std::string& line) {
    RawCaseRecord raw;
    for (const std::string& piece : split_outside(line, '|', false)) {
        std::string section = trim(piece);
        if (section.empty()) continue;
        auto colon = section.find(':');
        require(colon != std::string::npos, Errc::malformed_record,
                "section without ':' label: '" + section + "'");
        std::string name = trim(section.substr(0, colon));
        require(!name.empty(), Errc::malformed_record, "section with empty label");
        std::string body = trim(section.substr(colon + 1));
        auto [it, inserted] = raw.emplace(name, std::move(body));
        require(inserted, Errc::malformed_record, "section '" + name + "' repeats");
    }
    require(raw.count("problem"), Errc::malformed_record, "record lacks problem section");
    require(raw.count("solution"), Errc::malformed_record, "record lacks solution section");
    return raw;
}

FeatureMap extract_problem(const RawCaseRecord& raw) {
    auto it = raw.find("problem");
    require(it != raw.end(), Errc::malformed_record, "record lacks problem section");
    return parse_feature_list(it->second);
}

SolutionPlan extract_solution(const RawCaseRecord& raw) {
    auto it = raw.find("solution");
    require(it != raw.end(), Errc::malformed_record, "record lacks solution section");
    SolutionPlan plan = parse_plan(it->second);
    require(!plan.empty(), Errc::empty_solution, "solution section has no steps");
    return plan;
}

OutcomeRecord extract_outcome(const RawCaseRecord& raw) {
    OutcomeRecord out;
    auto it = raw.find("outcome");
    if (it == raw.end()) return out;  // success=1.0, no metrics
    for (const auto& [name, value] : parse_feature_list(it->second)) {
        const double* num = std::get_if<double>(&value);
        require(num != nullptr, Errc::malformed_record,
                "outcome entry '" + name + "' is not a number");
        if (name == "success") {
            require(*num >= 0.0 && *num <= 1.0, Errc::out_of_range,
                    "success=" + canonical_real(*num) + " outside [0,1]");
            out.success = *num;
        } else {
            out.metrics[name] = *num;
        }
    }
    return out;
}

std::uint64_t content_hash(const RawCaseRecord& raw) {
    std::uint64_t h = kFnvOffset;
    for (const auto& [name, body] : raw) {
        fnv_mix(h, name);
        h ^= 0x1F;
        h *= kFnvPrime;
        fnv_mix(h, body);
        h ^= 0x1E;
        h *= kFnvPrime;
    }
    return h;
}

CaseMetadata generate_metadata(const RawCaseRecord& raw, std::int64_t tick) {
    require(tick >= 0, Errc::out_of_range, "tick must be nonnegative");
    CaseMetadata meta;
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(content_hash(raw)));
    meta.id = buf;
    meta.created_at = tick;
    if (auto it = raw.find("provenance"); it != raw.end()) meta.provenance = it->second;
    if (auto it = raw.find("tags"); it != raw.end()) {
        for (const std::string& piece : split_outside(it->second, ';', false)) {
            std::string tag = trim(piece);
            if (!tag.empty()) meta.tags.insert(tag);
        }
    }
    return meta;
}

Case build_case(const RawCaseRecord& raw, std::int64_t tick) {
    Case c;
    c.problem = extract_problem(raw);
    c.solution = extract_solution(raw);
    c.outcome = extract_outcome(raw);
    c.meta = generate_metadata(raw, tick);
    return c;
}

std::string serialize_case(const Case& c) {
    std::string out = "problem: " + format_feature_map(c.problem);
    out += " | solution: " + format_plan(c.solution);
    out += " | outcome: success=" + canonical_real(c.outcome.success);
    for (const auto& [name, value] : c.outcome.metrics)
        out += "; " + name + "=" + canonical_real(value);
    out += " | id: " + c.meta.id;
    out += " | tick: " + std::to_string(c.meta.created_at);
    if (!c.meta.provenance.empty()) out += " | provenance: " + c.meta.provenance;
    if (!c.meta.tags.empty()) {
        out += " | tags: ";
        bool first = true;
        for (const auto& t : c.meta.tags) {
            if (!first) out += "; ";
            out += t;
            first = false;
        }
    }
    return out;
}

Case parse_serialized_case(const std::string& line) {
    RawCaseRecord raw = parse_raw_record(line);
    Case c;
    c.problem = extract_problem(raw);
    c.solution = extract_solution(raw);
    c.outcome = extract_outcome(raw);
    auto id = raw.find("id");
    require(id != raw.end() && !id->second.empty(), Errc::malformed_record,
            "serialized case lacks id section");
    c.meta.id = id->second;
    auto tick = raw.find("tick");
    require(tick != raw.end(), Errc::malformed_record, "serialized case lacks tick section");
    double t = 0.0;
    require(parse_double(tick->second, t) && t >= 0 && t == std::floor(t),
            Errc::malformed_record, "bad tick value '" + tick->second + "'");
    c.meta.created_at = static_cast<std::int64_t>(t);
    if (auto it = raw.find("provenance"); it != raw.end()) c.meta.provenance = it->second;
    if (auto it = raw.find("tags"); it != raw.end()) {
        for (const std::string& piece : split_outside(it->second, ';', false)) {
            std::string tag = trim(piece);
            if (!tag.empty()) c.meta.tags.insert(tag);
        }
    }
    return c;
}

const char* errc_name(Errc c) {
    switch (c) {
        case Errc::malformed_record: return "MalformedRecord";
        case Errc::duplicate_feature: return "DuplicateFeature";
        case Errc::empty_solution: return "EmptySolution";
        case Errc::out_of_range: return "OutOfRange";
        case Errc::duplicate_id: return "DuplicateId";
        case Errc::dim_mismatch: return "DimMismatch";
        case Errc::no_weighted_features: return "NoWeightedFeatures";
        case Errc::nothing_retrieved: return "NothingRetrieved";
        case Errc::empty_after_transform: return "EmptyAfterTransform";
        case Errc::arity_mismatch: return "ArityMismatch";
        case Errc::no_applicable_template: return "NoApplicableTemplate";
        case Errc::empty_case_base: return "EmptyCaseBase";
        case Errc::stack_overflow: return "StackOverflow";
        case Errc::precondition_violated: return "PreconditionViolated";
        case Errc::environment_halted: return "EnvironmentHalted";
        case Errc::too_few_points: return "TooFewPoints";
        case Errc::empty_input: return "EmptyInput";
        case Errc::invalid_config: return "InvalidConfig";
        case Errc::io_error: return "IoError";
    }
    return "Error";
}

}  // namespace cbrgda
