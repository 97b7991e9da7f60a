#include "cbrgda/library.hpp"

#include <algorithm>

#include "cbrgda/errors.hpp"

namespace cbrgda {

CaseLibrary::CaseLibrary(EmbedderConfig embedder, double cluster_threshold)
    : embedder_(embedder), cluster_threshold_(cluster_threshold) {
    embedder_.validate();
    require(cluster_threshold_ > 0.0 && cluster_threshold_ <= 1.0, Errc::invalid_config,
            "cluster threshold must be in (0,1]");
}

void CaseLibrary::index_case(const Case& c) {
    require(!c.id().empty(), Errc::malformed_record, "case without id");
    require(!by_id_.count(c.id()), Errc::duplicate_id, "case id '" + c.id() + "' already indexed");

    std::size_t idx = cases_.size();
    cases_.push_back(c);
    embeddings_.push_back(embed_case(c, embedder_));
    by_id_[c.id()] = idx;

    for (const auto& [name, value] : c.problem) {
        auto& postings = index_[{name, format_value(value)}];
        postings.insert(std::lower_bound(postings.begin(), postings.end(), c.id()), c.id());
    }
    assign_to_cluster(idx);
}

void CaseLibrary::assign_to_cluster(std::size_t case_index) {
    const Vector& e = embeddings_[case_index];
    for (auto& cluster : hierarchy_.clusters) {
        if (cosine(cluster.leader, e) >= cluster_threshold_) {
            cluster.member_ids.push_back(cases_[case_index].id());
            return;
        }
    }
    hierarchy_.clusters.push_back({e, {cases_[case_index].id()}});
}

const ClusterHierarchy& CaseLibrary::organize(double threshold) {
    require(threshold > 0.0 && threshold <= 1.0, Errc::invalid_config,
            "cluster threshold must be in (0,1]");
    cluster_threshold_ = threshold;
    hierarchy_.clusters.clear();
    for (std::size_t i = 0; i < cases_.size(); ++i) assign_to_cluster(i);
    return hierarchy_;
}

const Case& CaseLibrary::case_by_id(const std::string& id) const {
    auto it = by_id_.find(id);
    require(it != by_id_.end(), Errc::malformed_record, "unknown case id '" + id + "'");
    return cases_[it->second];
}

std::vector<std::string> CaseLibrary::lookup_feature(const std::string& name,
                                                     const FeatureValue& value) const {
    auto it = index_.find({name, format_value(value)});
    if (it == index_.end()) return {};
    return it->second;
}

}  // namespace cbrgda
