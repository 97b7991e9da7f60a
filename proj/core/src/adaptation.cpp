#include "cbrgda/adaptation.hpp"

#include <algorithm>
#include <cmath>

#include "cbrgda/errors.hpp"

namespace cbrgda {

namespace {

std::string trim_copy(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

bool rule_matches(const TemplateRule& rule, const FeatureMap& problem) {
    for (const auto& [name, expected] : rule.conditions) {
        auto it = problem.find(name);
        if (it == problem.end()) return false;
        if (expected.has_value() && !(it->second == *expected)) return false;
    }
    return true;
}

// Fills a skeleton: args naming a query feature take its value; a step with
// action `$exemplar` expands to the exemplar's steps.
SolutionPlan instantiate_skeleton(const SolutionPlan& skeleton, const FeatureMap& problem,
                                  const SolutionPlan* exemplar) {
    SolutionPlan out;
    for (const SolutionStep& s : skeleton.steps) {
        if (s.action == "$exemplar") {
            if (exemplar != nullptr)
                out.steps.insert(out.steps.end(), exemplar->steps.begin(), exemplar->steps.end());
            continue;
        }
        SolutionStep step;
        step.action = s.action;
        for (const FeatureValue& arg : s.args) {
            const Symbol* sym = std::get_if<Symbol>(&arg);
            if (sym != nullptr) {
                auto it = problem.find(sym->name);
                if (it != problem.end()) {
                    step.args.push_back(it->second);
                    continue;
                }
            }
            step.args.push_back(arg);
        }
        out.steps.push_back(std::move(step));
    }
    return out;
}

double pathway_omega(const std::array<double, 3>& omega, Pathway p) {
    return omega[static_cast<std::size_t>(p)];
}

}  // namespace

const char* pathway_name(Pathway p) {
    switch (p) {
        case Pathway::cbr: return "cbr";
        case Pathway::cot: return "cot";
        default: return "parametric";
    }
}

TemplateRule parse_template_rule(const std::string& line) {
    auto arrow = line.find("->");
    require(arrow != std::string::npos, Errc::malformed_record,
            "template rule without '->': '" + line + "'");
    TemplateRule rule;
    std::string pattern = trim_copy(line.substr(0, arrow));
    require(!pattern.empty(), Errc::malformed_record, "template rule with empty pattern");
    // pattern: `name=value; name=*` — `*` is the wildcard
    std::string cur;
    std::vector<std::string> pieces;
    for (char c : pattern + ";") {
        if (c == ';') {
            pieces.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    for (const std::string& piece : pieces) {
        std::string cond = trim_copy(piece);
        if (cond.empty()) continue;
        auto eq = cond.find('=');
        require(eq != std::string::npos, Errc::malformed_record,
                "rule condition without '=': '" + cond + "'");
        std::string name = trim_copy(cond.substr(0, eq));
        std::string value = trim_copy(cond.substr(eq + 1));
        require(!name.empty(), Errc::malformed_record, "rule condition with empty name");
        if (value == "*")
            rule.conditions.emplace_back(name, std::nullopt);
        else
            rule.conditions.emplace_back(name, parse_value(value));
    }
    require(!rule.conditions.empty(), Errc::malformed_record, "template rule with no conditions");
    rule.skeleton = parse_plan(line.substr(arrow + 2));
    require(!rule.skeleton.empty(), Errc::malformed_record, "template rule with empty plan");
    return rule;
}

void GeneratorConfig::validate() const {
    if (mode == GeneratorMode::template_rules)
        require(!rules.empty(), Errc::invalid_config, "template generator needs at least one rule");
    else
        require(static_cast<bool>(external), Errc::invalid_config,
                "external generator mode without a delegate");
}

Selection select(const Query& q, const std::vector<ScoredCase>& retrieved,
                 const CaseLibrary& lib) {
    (void)q;
    require(!retrieved.empty(), Errc::nothing_retrieved, "selection over empty retrieval set");
    std::vector<ScoredCase> ordered = retrieved;
    std::sort(ordered.begin(), ordered.end(), [](const ScoredCase& a, const ScoredCase& b) {
        if (a.combined != b.combined) return a.combined > b.combined;
        return a.case_id < b.case_id;
    });
    Selection sel;
    for (const ScoredCase& s : ordered) {
        sel.plans.push_back(lib.case_by_id(s.case_id).solution);
        sel.ids.push_back(s.case_id);
        sel.scores.push_back(s.combined);
    }
    return sel;
}

SolutionPlan transform(const SolutionPlan& plan, const ConstraintSet& cs) {
    // T_ins: append required actions the plan does not mention
    SolutionPlan work = plan;
    for (const std::string& action : cs.required_actions) {
        bool present = std::any_of(work.steps.begin(), work.steps.end(),
                                   [&](const SolutionStep& s) { return s.action == action; });
        if (!present) work.steps.push_back({action, {}});
    }
    // T_del: drop forbidden steps
    std::erase_if(work.steps, [&](const SolutionStep& s) {
        return cs.forbidden_actions.count(s.action) > 0;
    });
    require(!work.empty(), Errc::empty_after_transform,
            "every step deleted and nothing inserted");
    // T_sub: single-pass substitution on symbol arguments
    for (SolutionStep& step : work.steps) {
        for (FeatureValue& arg : step.args) {
            Symbol* sym = std::get_if<Symbol>(&arg);
            if (sym == nullptr) continue;
            auto it = cs.substitutions.find(sym->name);
            if (it != cs.substitutions.end()) sym->name = it->second;
        }
    }
    return work;
}

SolutionPlan compose(const std::vector<SolutionPlan>& plans, const std::vector<double>& weights) {
    require(!plans.empty() && plans.size() == weights.size(), Errc::arity_mismatch,
            "compose needs matching non-empty plan and weight lists");
    double wsum = 0.0;
    for (double w : weights) {
        require(w >= 0.0, Errc::arity_mismatch, "compose weights must be nonnegative");
        wsum += w;
    }
    require(wsum > 0.0, Errc::arity_mismatch, "compose weights must not all be zero");

    std::vector<double> credit(plans.size());
    std::vector<double> decrement(plans.size());
    std::vector<std::size_t> next(plans.size(), 0);
    for (std::size_t i = 0; i < plans.size(); ++i) {
        credit[i] = weights[i] / wsum;
        decrement[i] = plans[i].empty() ? 0.0 : credit[i] / static_cast<double>(plans[i].size());
    }

    SolutionPlan out;
    for (;;) {
        std::size_t pick = plans.size();
        for (std::size_t i = 0; i < plans.size(); ++i) {
            if (next[i] >= plans[i].size()) continue;
            if (pick == plans.size() || credit[i] > credit[pick]) pick = i;
        }
        if (pick == plans.size()) break;
        const SolutionStep& step = plans[pick].steps[next[pick]++];
        credit[pick] -= decrement[pick];
        if (out.steps.empty() || !(out.steps.back() == step)) out.steps.push_back(step);
    }
    return out;
}

SolutionPlan generate(const Query& q, const std::vector<SolutionPlan>& exemplars,
                      const GeneratorConfig& gcfg) {
    gcfg.validate();
    if (gcfg.mode == GeneratorMode::external) return gcfg.external(q, exemplars);
    const SolutionPlan* exemplar = exemplars.empty() ? nullptr : &exemplars.front();
    for (const TemplateRule& rule : gcfg.rules) {
        if (!rule_matches(rule, q.problem)) continue;
        SolutionPlan plan = instantiate_skeleton(rule.skeleton, q.problem, exemplar);
        require(!plan.empty(), Errc::no_applicable_template,
                "matched rule instantiated to an empty plan");
        return plan;
    }
    raise(Errc::no_applicable_template, "no template rule matches the query");
}

CandidateSolution adapt(const Query& q, const std::vector<ScoredCase>& retrieved,
                        const CaseLibrary& lib, const ConstraintSet& cs,
                        const GeneratorConfig& gcfg) {
    Selection sel = select(q, retrieved, lib);

    CandidateSolution cand;
    cand.pathway = Pathway::cbr;
    cand.provenance.source_ids = sel.ids;
    cand.provenance.source_scores = sel.scores;
    cand.provenance.constraints = cs;
    cand.provenance.operations = {"select"};

    std::vector<SolutionPlan> transformed;
    std::vector<double> weights;
    for (std::size_t i = 0; i < sel.plans.size(); ++i) {
        try {
            transformed.push_back(transform(sel.plans[i], cs));
            weights.push_back(sel.scores[i]);
        } catch (const Error& e) {
            if (e.code() != Errc::empty_after_transform) throw;
        }
    }
    cand.provenance.operations.push_back("transform");

    if (transformed.empty()) {
        cand.plan = generate(q, sel.plans, gcfg);
        cand.provenance.generator_fallback = true;
        cand.provenance.operations.push_back("generate");
    } else {
        // scores can legitimately all be 0 (tau=0 scans); weight uniformly then
        double wsum = 0.0;
        for (double w : weights) wsum += w;
        if (wsum == 0.0) std::fill(weights.begin(), weights.end(), 1.0);
        cand.plan = compose(transformed, weights);
        cand.provenance.compose_weights = weights;
        cand.provenance.operations.push_back("compose");
    }

    double score_sum = 0.0;
    for (double s : sel.scores) score_sum += s;
    cand.confidence = score_sum / static_cast<double>(sel.scores.size());
    return cand;
}

SolutionPlan replay(const AdaptationTrace& trace, const Query& q, const CaseLibrary& lib,
                    const GeneratorConfig& gcfg) {
    std::vector<SolutionPlan> plans;
    for (const std::string& id : trace.source_ids)
        plans.push_back(lib.case_by_id(id).solution);
    if (trace.generator_fallback) return generate(q, plans, gcfg);
    std::vector<SolutionPlan> transformed;
    for (const SolutionPlan& p : plans) {
        try {
            transformed.push_back(transform(p, trace.constraints));
        } catch (const Error& e) {
            if (e.code() != Errc::empty_after_transform) throw;
        }
    }
    return compose(transformed, trace.compose_weights);
}

CandidateSolution combine_pathways(const std::vector<CandidateSolution>& cands,
                                   const PathwayWeights& pw) {
    require(!cands.empty(), Errc::empty_input, "no candidates to combine");

    std::array<double, 3> omega{};
    if (pw.omega.has_value()) {
        double sum = (*pw.omega)[0] + (*pw.omega)[1] + (*pw.omega)[2];
        require(sum > 0.0, Errc::invalid_config, "pathway weights must sum to > 0");
        for (std::size_t i = 0; i < 3; ++i) omega[i] = (*pw.omega)[i] / sum;
    } else {
        double sum = 0.0;
        for (const CandidateSolution& c : cands) sum += c.confidence;
        if (sum == 0.0) {
            omega = {1.0 / 3, 1.0 / 3, 1.0 / 3};
        } else {
            for (const CandidateSolution& c : cands)
                omega[static_cast<std::size_t>(c.pathway)] += c.confidence / sum;
        }
    }

    const CandidateSolution* best = nullptr;
    double best_score = -1.0;
    for (const CandidateSolution& c : cands) {
        double score = pathway_omega(omega, c.pathway) * c.confidence;
        // strict > keeps the earlier (higher-priority) pathway on ties;
        // callers pass candidates in cbr, cot, parametric order
        if (score > best_score) {
            best = &c;
            best_score = score;
        }
    }
    return *best;
}

CandidateSolution cot_pathway(const Query& q) {
    // Fixed-rule sketch: one consider() per feature, then conclude().
    CandidateSolution cand;
    cand.pathway = Pathway::cot;
    for (const auto& [name, value] : q.problem)
        cand.plan.steps.push_back({"consider", {Symbol{name}, value}});
    cand.plan.steps.push_back({"conclude", {}});
    cand.confidence = 0.5;
    return cand;
}

std::optional<CandidateSolution> parametric_pathway(const Query& q, const GeneratorConfig& gcfg) {
    try {
        CandidateSolution cand;
        cand.pathway = Pathway::parametric;
        cand.plan = generate(q, {}, gcfg);  // library-free template fire
        cand.confidence = 0.5;
        return cand;
    } catch (const Error& e) {
        if (e.code() != Errc::no_applicable_template) throw;
        return std::nullopt;
    }
}

}  // namespace cbrgda
