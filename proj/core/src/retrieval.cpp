#include "cbrgda/retrieval.hpp"

#include <algorithm>
#include <cmath>

#include "cbrgda/errors.hpp"

namespace cbrgda {

namespace {

double value_sim(const FeatureValue& a, const FeatureValue& b) {
    if (a.index() != b.index()) return 0.0;
    if (const double* x = std::get_if<double>(&a))
        return 1.0 / (1.0 + std::fabs(*x - std::get<double>(b)));
    return a == b ? 1.0 : 0.0;
}

std::size_t lcs_length(const std::vector<std::string>& a, const std::vector<std::string>& b) {
    if (a.empty() || b.empty()) return 0;
    std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
    for (std::size_t i = 1; i <= a.size(); ++i) {
        for (std::size_t j = 1; j <= b.size(); ++j) {
            cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
        }
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

std::vector<std::string> action_symbols(const SolutionPlan& p) {
    std::vector<std::string> out;
    out.reserve(p.steps.size());
    for (const auto& s : p.steps) out.push_back(s.action);
    return out;
}

}  // namespace

void RetrievalConfig::validate() const {
    require(tau >= 0.0 && tau <= 1.0, Errc::invalid_config, "tau must be in [0,1]");
    double wsum = 0.0;
    for (const auto& [name, w] : weights) {
        require(w >= 0.0, Errc::invalid_config, "weight for '" + name + "' is negative");
        wsum += w;
    }
    require(wsum > 0.0, Errc::invalid_config, "feature weights must sum to > 0");
    double lsum = 0.0;
    for (double l : lambda) {
        require(l >= 0.0, Errc::invalid_config, "lambda components must be nonnegative");
        lsum += l;
    }
    require(lsum > 0.0, Errc::invalid_config, "lambda must sum to > 0");
    require(top_k >= 1, Errc::invalid_config, "top_k must be >= 1");
}

std::array<double, 3> RetrievalConfig::lambda_normalized() const {
    double sum = lambda[0] + lambda[1] + lambda[2];
    return {lambda[0] / sum, lambda[1] / sum, lambda[2] / sum};
}

double feature_sim(const FeatureMap& q, const FeatureMap& p,
                   const std::map<std::string, double>& weights) {
    double wsum = 0.0;
    for (const auto& [name, value] : q) {
        auto w = weights.find(name);
        if (w != weights.end()) wsum += w->second;
    }
    require(wsum > 0.0, Errc::no_weighted_features, "no weighted feature present in query");

    double score = 0.0;
    for (const auto& [name, value] : q) {
        auto w = weights.find(name);
        if (w == weights.end() || w->second == 0.0) continue;
        auto pv = p.find(name);
        if (pv == p.end()) continue;  // missing in p contributes 0
        score += (w->second / wsum) * value_sim(value, pv->second);
    }
    return score;
}

double structural_sim(const std::optional<SolutionPlan>& plan_hint, const Case& c) {
    if (!plan_hint.has_value()) return 0.0;
    auto a = action_symbols(*plan_hint);
    auto b = action_symbols(c.solution);
    std::size_t longest = std::max(a.size(), b.size());
    if (longest == 0) return 1.0;  // two empty sequences are identical
    return static_cast<double>(lcs_length(a, b)) / static_cast<double>(longest);
}

ScoredCase score_case(const Query& q, const Vector& q_embedding, const Case& c,
                      const Vector& c_embedding, const RetrievalConfig& cfg) {
    ScoredCase s;
    s.case_id = c.id();
    // Negative cosine means unrelated content; channel scores live in [0,1].
    s.semantic = std::max(0.0, cosine(q_embedding, c_embedding));
    try {
        s.feature = feature_sim(q.problem, c.problem, cfg.weights);
    } catch (const Error& e) {
        if (e.code() != Errc::no_weighted_features) throw;
        s.feature = 0.0;  // queries with no weighted features match nothing on this channel
    }
    s.structural = structural_sim(q.plan_hint, c);
    auto l = cfg.lambda_normalized();
    s.combined = l[0] * s.semantic + l[1] * s.feature + l[2] * s.structural;
    return s;
}

std::vector<ScoredCase> hybrid_retrieve(const Query& q, const CaseLibrary& lib,
                                        const RetrievalConfig& cfg) {
    cfg.validate();
    Vector qe = embed_problem(q.problem, lib.embedder());
    std::vector<ScoredCase> scored;
    scored.reserve(lib.size());
    for (std::size_t i = 0; i < lib.size(); ++i)
        scored.push_back(score_case(q, qe, lib.case_at(i), lib.embedding_at(i), cfg));
    std::sort(scored.begin(), scored.end(), [](const ScoredCase& a, const ScoredCase& b) {
        if (a.combined != b.combined) return a.combined > b.combined;
        return a.case_id < b.case_id;
    });
    if (scored.size() > cfg.top_k) scored.resize(cfg.top_k);
    return scored;
}

std::vector<ScoredCase> retrieve(const Query& q, const CaseLibrary& lib,
                                 const RetrievalConfig& cfg) {
    cfg.validate();
    Vector qe = embed_problem(q.problem, lib.embedder());
    std::vector<ScoredCase> kept;
    for (std::size_t i = 0; i < lib.size(); ++i) {
        ScoredCase s = score_case(q, qe, lib.case_at(i), lib.embedding_at(i), cfg);
        if (s.combined >= cfg.tau) kept.push_back(std::move(s));
    }
    std::sort(kept.begin(), kept.end(), [](const ScoredCase& a, const ScoredCase& b) {
        if (a.combined != b.combined) return a.combined > b.combined;
        return a.case_id < b.case_id;
    });
    if (kept.size() > cfg.top_k) kept.resize(cfg.top_k);
    return kept;
}

Query parse_query(const std::string& problem_text, const std::string& plan_hint_text) {
    Query q;
    q.problem = parse_feature_list(problem_text);
    if (!plan_hint_text.empty()) q.plan_hint = parse_plan(plan_hint_text);
    return q;
}

}  // namespace cbrgda
