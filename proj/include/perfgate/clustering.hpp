#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "perfgate/feature_matrix.hpp"
#include "perfgate/profile.hpp"

namespace perfgate {

enum class Algorithm { KMeans, Gmm, Agglomerative, Dbscan };
enum class Linkage { Average, Complete, Single };

std::string_view algorithm_name(Algorithm a);
Algorithm parse_algorithm(std::string_view name);
std::string_view linkage_name(Linkage l);
Linkage parse_linkage(std::string_view name);

inline constexpr int kNoise = -1;

struct ClusterParams {
    int k = 0;
    double eps = 0.0;
    int min_pts = 0;
    Linkage linkage = Linkage::Average;
    int max_iter = 0;
    double tol = 0.0;
};

struct ClusterModel {
    Algorithm algorithm = Algorithm::KMeans;
    ClusterParams params;
    std::vector<Attribute> features;
    std::uint64_t seed = 0;
    /// Baseline commit the model was fitted on (empty for ad-hoc matrices).
    std::string commit;

    std::vector<std::string> input_ids;
    std::vector<int> labels;  // 0..c-1 or kNoise
    std::vector<std::vector<double>> centroids;  // kmeans / gmm only
    std::map<int, std::string> medoids;

    double wcss = 0.0;          // kmeans
    double log_likelihood = 0;  // gmm
    /// kmeans: WCSS after each Lloyd iteration; gmm: log-likelihood per EM step.
    std::vector<double> trace;
    int iterations = 0;

    int cluster_count() const;
    std::size_t noise_count() const;
    std::vector<std::size_t> cluster_sizes() const;
    std::vector<std::size_t> members(int label) const;
    std::optional<int> label_of(std::string_view input_id) const;
};

struct KMeansOptions {
    std::uint64_t seed = 0;
    int max_iter = 300;
    double tol = 1e-8;
    /// Replaces k-means++ seeding when set (must have k rows).
    std::vector<std::vector<double>> initial_centroids;
    bool compute_medoids = true;
};

/// k-means++ seeding, then Lloyd iterations until the largest centroid
/// shift is below tol. Empty clusters take the point farthest from its
/// centroid. Throws TooFewRecords if rows < k.
ClusterModel kmeans_fit(const FeatureMatrix& m, int k, const KMeansOptions& opts = {});
ClusterModel kmeans_fit(const FeatureMatrix& m, int k, std::uint64_t seed, int max_iter, double tol);

/// Core/border/noise labeling; region expansion in ascending row order.
ClusterModel dbscan_fit(const FeatureMatrix& m, double eps, int min_pts);

/// Diagonal-covariance EM seeded from kmeans_fit with the same seed.
ClusterModel gmm_fit(const FeatureMatrix& m, int k, std::uint64_t seed, int max_iter = 200,
                     double tol = 1e-9);

/// Bottom-up merging cut at k clusters. Equal distances merge the pair with
/// the smallest (min member index, min member index).
ClusterModel agglomerative_fit(const FeatureMatrix& m, int k, Linkage linkage);

/// Per cluster: the member with the least summed distance to the others,
/// lowest row index on ties. Throws NoClusters if everything is noise.
std::map<int, std::string> medoids(const ClusterModel& model, const FeatureMatrix& m);

/// Sorted k-th nearest neighbour distances, the usual aid for picking eps.
std::vector<double> k_distances(const FeatureMatrix& m, int k);

/// Within-cluster sum of squared distances to the cluster means.
double within_cluster_ss(const FeatureMatrix& m, const std::vector<int>& labels);

}  // namespace perfgate
