#include "perfgate/pipeline.hpp"

#include "perfgate/error.hpp"
#include "perfgate/feature_matrix.hpp"

namespace perfgate {

ClusterModel fit_model(const CommitSnapshot& snapshot, const ClusterRequest& req) {
    const auto m = standardize(snapshot, req.features);
    ClusterModel model;
    switch (req.algorithm) {
        case Algorithm::KMeans: model = kmeans_fit(m, req.k, req.seed, req.max_iter, req.tol); break;
        case Algorithm::Gmm: model = gmm_fit(m, req.k, req.seed, req.max_iter, req.tol); break;
        case Algorithm::Agglomerative: model = agglomerative_fit(m, req.k, req.linkage); break;
        case Algorithm::Dbscan:
            if (!req.eps) throw Error(ErrorCode::InvalidArgument, "dbscan requires an explicit eps");
            model = dbscan_fit(m, *req.eps, req.min_pts);
            break;
    }
    model.seed = req.seed;
    model.commit = snapshot.commit_id;
    return model;
}

DecisionReport decide(const ClusterModel& model, const SamplePlan& plan,
                      const CommitSnapshot& baseline, const CommitSnapshot& updated,
                      double acceptable_limit, double vote_threshold) {
    return evaluate_batch(model, baseline, updated_points(plan, updated), acceptable_limit,
                          vote_threshold);
}

}  // namespace perfgate
