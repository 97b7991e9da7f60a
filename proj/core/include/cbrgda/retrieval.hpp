#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cbrgda/case.hpp"
#include "cbrgda/library.hpp"

namespace cbrgda {

// A retrieval query: problem features plus an optional plan sketch feeding
// the structural channel. Without the sketch that channel scores 0.
struct Query {
    FeatureMap problem;
    std::optional<SolutionPlan> plan_hint;
};

struct RetrievalConfig {
    double tau = 0.6;                                  // threshold on the fused score
    std::map<std::string, double> weights;             // per-feature weights, absent = 0
    std::array<double, 3> lambda = {0.4, 0.3, 0.3};    // semantic, feature, structural
    std::size_t top_k = 5;

    void validate() const;
    // lambda scaled to sum 1; raw values only encode proportions.
    std::array<double, 3> lambda_normalized() const;
};

struct ScoredCase {
    std::string case_id;
    double semantic = 0.0;
    double feature = 0.0;
    double structural = 0.0;
    double combined = 0.0;

    bool operator==(const ScoredCase&) const = default;
};

// Weighted per-feature similarity. Weights are renormalized over the
// features present in q; exact match scores 1 for symbols/text/bools,
// numbers score 1/(1+|d|), features missing from p contribute 0.
// Throws NoWeightedFeatures when no feature of q carries weight.
double feature_sim(const FeatureMap& q, const FeatureMap& p,
                   const std::map<std::string, double>& weights);

// Normalized longest-common-subsequence over action symbols:
// LCS(a,b) / max(|a|,|b|). No hint -> 0.
double structural_sim(const std::optional<SolutionPlan>& plan_hint, const Case& c);

// Scores one case on all three channels and fuses them.
ScoredCase score_case(const Query& q, const Vector& q_embedding, const Case& c,
                      const Vector& c_embedding, const RetrievalConfig& cfg);

// Full scored ranking: every case scored, ordered by (combined desc, id asc),
// truncated to top_k. No threshold applied.
std::vector<ScoredCase> hybrid_retrieve(const Query& q, const CaseLibrary& lib,
                                        const RetrievalConfig& cfg);

// Threshold retrieval: hybrid scoring gated at tau, then top_k. The gate
// applies to the fused score, not per channel.
std::vector<ScoredCase> retrieve(const Query& q, const CaseLibrary& lib,
                                 const RetrievalConfig& cfg);

Query parse_query(const std::string& problem_text,
                  const std::string& plan_hint_text = "");

}  // namespace cbrgda
