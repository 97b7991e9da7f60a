#pragma once

#include <array>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "cbrgda/case.hpp"
#include "cbrgda/library.hpp"
#include "cbrgda/retrieval.hpp"

namespace cbrgda {

struct ConstraintSet {
    std::map<std::string, std::string> substitutions;   // applied once, not to fixpoint
    std::set<std::string> forbidden_actions;
    std::vector<std::string> required_actions;          // appended in listed order

    bool empty() const {
        return substitutions.empty() && forbidden_actions.empty() && required_actions.empty();
    }
};

// One `pattern -> plan` rule. Pattern conditions match query features
// (`name=*` accepts any value). Skeleton args naming a query feature are
// replaced with that feature's value; a `$exemplar` step expands to the
// highest-ranked exemplar's steps.
struct TemplateRule {
    std::vector<std::pair<std::string, std::optional<FeatureValue>>> conditions;
    SolutionPlan skeleton;
};

TemplateRule parse_template_rule(const std::string& line);

enum class GeneratorMode { template_rules, external };

struct GeneratorConfig {
    GeneratorMode mode = GeneratorMode::template_rules;
    std::vector<TemplateRule> rules;
    std::uint64_t seed = 1;
    // external mode delegate; not exercised by the shipped tests
    std::function<SolutionPlan(const Query&, const std::vector<SolutionPlan>&)> external;

    void validate() const;
};

enum class Pathway { cbr, cot, parametric };

const char* pathway_name(Pathway p);

// Replayable record of how a candidate was produced: which cases fed it,
// the constraints applied, the compose weights, whether the generator had
// to step in, and the operation sequence itself.
struct AdaptationTrace {
    std::vector<std::string> source_ids;
    std::vector<double> source_scores;
    ConstraintSet constraints;
    std::vector<double> compose_weights;
    bool generator_fallback = false;
    std::vector<std::string> operations;

    bool empty() const { return source_ids.empty() && operations.empty(); }
};

struct CandidateSolution {
    SolutionPlan plan;
    Pathway pathway = Pathway::cbr;
    double confidence = 0.0;
    AdaptationTrace provenance;
};

struct PathwayWeights {
    // cbr, cot, parametric. When absent, weights are derived from the
    // candidates' confidences by proportional normalization.
    std::optional<std::array<double, 3>> omega;
};

// Selected plans in score order with their source bookkeeping.
struct Selection {
    std::vector<SolutionPlan> plans;
    std::vector<std::string> ids;
    std::vector<double> scores;
};

// Solutions of the retrieved cases, ordered by (score desc, id asc).
// Throws NothingRetrieved on an empty set.
Selection select(const Query& q, const std::vector<ScoredCase>& retrieved,
                 const CaseLibrary& lib);

// Insertion of missing required actions, then deletion of forbidden steps,
// then one-pass symbol substitution on step arguments.
// Throws EmptyAfterTransform when nothing survives.
SolutionPlan transform(const SolutionPlan& plan, const ConstraintSet& cs);

// Weighted round-robin interleave. Credit_i starts at the normalized weight
// and drops by weight_i/|plan_i| per step taken, so plans release steps in
// proportion to their weight; ties go to the earlier plan. Identical
// consecutive steps are emitted once.
SolutionPlan compose(const std::vector<SolutionPlan>& plans, const std::vector<double>& weights);

// Template-rule generation seeded with the top exemplar's vocabulary.
// Throws NoApplicableTemplate when no rule pattern matches the query.
SolutionPlan generate(const Query& q, const std::vector<SolutionPlan>& exemplars,
                      const GeneratorConfig& gcfg);

// Full pipeline: select, per-plan transform, compose; generator fallback
// when every transformed plan comes out empty. Confidence is the mean
// retrieval score of the selected sources.
CandidateSolution adapt(const Query& q, const std::vector<ScoredCase>& retrieved,
                        const CaseLibrary& lib, const ConstraintSet& cs,
                        const GeneratorConfig& gcfg);

// Re-executes a candidate's recorded operations against the library.
// Byte-equal output to the recorded plan is the provenance completeness
// guarantee.
SolutionPlan replay(const AdaptationTrace& trace, const Query& q, const CaseLibrary& lib,
                    const GeneratorConfig& gcfg);

// Argmax of omega_p * confidence over candidates (ties: cbr > cot >
// parametric). Omega is renormalized to sum 1.
CandidateSolution combine_pathways(const std::vector<CandidateSolution>& cands,
                                   const PathwayWeights& pw);

// Deliberation stubs so the pathway combiner has peers to weigh; their
// output quality is not a goal.
CandidateSolution cot_pathway(const Query& q);
std::optional<CandidateSolution> parametric_pathway(const Query& q, const GeneratorConfig& gcfg);

}  // namespace cbrgda
