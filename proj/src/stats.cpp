#include "perfgate/stats.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>

#include "perfgate/clustering.hpp"
#include "perfgate/error.hpp"
#include "perfgate/special_functions.hpp"

namespace perfgate {

namespace {

constexpr double kLowConfidenceRatio = 0.1;
// Splitting a single Gaussian keeps at least ~36% of its WCSS, while a
// real cluster boundary removes most of it.
constexpr double kKneeDropRatio = 0.3;

}  // namespace

double pearson_p_value(double r, std::size_t n) {
    if (n < 3) throw Error(ErrorCode::TooFewRecords, "p-value needs n >= 3");
    const double ar = std::abs(r);
    if (ar >= 1.0) return 0.0;
    const double df = static_cast<double>(n) - 2.0;
    const double t = r * std::sqrt(df / (1.0 - r * r));
    return std::clamp(student_t_two_tailed(t, df), 0.0, 1.0);
}

PearsonResult pearson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw Error(ErrorCode::InvalidArgument, "length mismatch");
    const std::size_t n = x.size();
    if (n < 3) {
        throw Error(ErrorCode::TooFewRecords, "correlation needs >= 3 records, got " + std::to_string(n));
    }
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    PearsonResult out;
    if (sxx <= 0.0 || syy <= 0.0) {
        out.defined = false;
        out.r = std::numeric_limits<double>::quiet_NaN();
        out.p = 1.0;
        return out;
    }
    double r = sxy / std::sqrt(sxx * syy);
    if (1.0 - std::abs(r) < 4.0 * std::numeric_limits<double>::epsilon()) r = r > 0 ? 1.0 : -1.0;
    out.r = std::clamp(r, -1.0, 1.0);
    out.p = pearson_p_value(out.r, n);
    return out;
}

std::size_t CorrelationMatrix::index_of(Attribute a) const {
    auto it = std::find(attributes.begin(), attributes.end(), a);
    if (it == attributes.end()) throw Error(ErrorCode::InvalidArgument, "attribute not in matrix");
    return static_cast<std::size_t>(it - attributes.begin());
}

CorrelationMatrix pearson_matrix(const CommitSnapshot& snapshot) {
    const std::vector<Attribute> attrs(kAllAttributes.begin(), kAllAttributes.end());
    const auto raw = raw_features(snapshot, attrs);
    if (raw.rows < 3) {
        throw Error(ErrorCode::TooFewRecords,
                    "correlation needs >= 3 records, got " + std::to_string(raw.rows));
    }
    const std::size_t k = attrs.size();
    std::vector<std::vector<double>> columns(k, std::vector<double>(raw.rows));
    for (std::size_t i = 0; i < raw.rows; ++i) {
        for (std::size_t j = 0; j < k; ++j) columns[j][i] = raw.at(i, j);
    }

    CorrelationMatrix cm;
    cm.attributes = attrs;
    cm.n = raw.rows;
    cm.r.assign(k, std::vector<double>(k, 1.0));
    cm.p.assign(k, std::vector<double>(k, 0.0));
    cm.defined.assign(k, std::vector<bool>(k, true));
    for (std::size_t a = 0; a < k; ++a) {
        for (std::size_t b = a + 1; b < k; ++b) {
            auto res = pearson(columns[a], columns[b]);
            cm.r[a][b] = cm.r[b][a] = res.r;
            cm.p[a][b] = cm.p[b][a] = res.p;
            cm.defined[a][b] = cm.defined[b][a] = res.defined;
        }
    }
    return cm;
}

void select_knee(ElbowCurve& curve) {
    const auto& d = curve.distortion;
    curve.knee = curve.k_values.empty() ? 1 : curve.k_values.front();
    curve.low_confidence = true;
    if (d.size() < 3) return;
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i + 1 < d.size(); ++i) {
        const double second = d[i - 1] - 2.0 * d[i] + d[i + 1];
        if (second > best) {
            best = second;
            curve.knee = curve.k_values[i];
        }
    }
    const double total = d.front();
    const auto at = static_cast<std::size_t>(curve.knee - curve.k_values.front());
    curve.low_confidence = !(total > 0.0) || best < kLowConfidenceRatio * total ||
                           d[at] > kKneeDropRatio * d[at - 1];
}

ElbowCurve elbow_curve(const FeatureMatrix& m, int k_max, std::uint64_t seed) {
    if (k_max < 2) throw Error(ErrorCode::InvalidArgument, "k_max must be >= 2");
    if (m.rows < static_cast<std::size_t>(k_max)) {
        throw Error(ErrorCode::TooFewRecords, "elbow needs >= k_max records");
    }
    ElbowCurve curve;
    std::vector<std::future<ClusterModel>> jobs;
    for (int k = 1; k <= k_max; ++k) {
        curve.k_values.push_back(k);
        jobs.push_back(std::async(std::launch::async, [&m, k, seed] {
            KMeansOptions opts;
            opts.seed = seed + static_cast<std::uint64_t>(k);
            opts.compute_medoids = false;
            return kmeans_fit(m, k, opts);
        }));
    }
    std::vector<ClusterModel> fits;
    for (auto& j : jobs) fits.push_back(j.get());

    // A k-means++ run can land in a worse local optimum than the k - 1 fit.
    // Restarting from the k - 1 centroids plus the worst-served point can only
    // lower WCSS, so the better of the two keeps the curve non-increasing.
    for (std::size_t i = 1; i < fits.size(); ++i) {
        if (fits[i].wcss <= fits[i - 1].wcss) continue;
        const auto& prev = fits[i - 1];
        std::size_t far = 0;
        double far_d = -1.0;
        for (std::size_t r = 0; r < m.rows; ++r) {
            const double d = squared_distance(m.row(r), prev.centroids[static_cast<std::size_t>(prev.labels[r])]);
            if (d > far_d) {
                far_d = d;
                far = r;
            }
        }
        KMeansOptions opts;
        opts.seed = seed + static_cast<std::uint64_t>(i + 1);
        opts.compute_medoids = false;
        opts.initial_centroids = prev.centroids;
        opts.initial_centroids.emplace_back(m.row(far).begin(), m.row(far).end());
        auto warm = kmeans_fit(m, static_cast<int>(i + 1), opts);
        if (warm.wcss < fits[i].wcss) fits[i] = std::move(warm);
    }
    for (const auto& f : fits) curve.distortion.push_back(f.wcss);
    select_knee(curve);
    return curve;
}

ElbowCurve elbow_curve(const CommitSnapshot& snapshot, const std::vector<Attribute>& features,
                       int k_max, std::uint64_t seed) {
    return elbow_curve(standardize(snapshot, features), k_max, seed);
}

}  // namespace perfgate
