#include "perfgate/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numbers>

#include "perfgate/error.hpp"
#include "perfgate/random.hpp"

namespace perfgate {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kVarianceFloor = 1e-6;

void require_rows(const FeatureMatrix& m, int k) {
    if (k < 1) throw Error(ErrorCode::InvalidArgument, "k must be >= 1");
    if (m.rows < static_cast<std::size_t>(k)) {
        throw Error(ErrorCode::TooFewRecords, "need at least k = " + std::to_string(k) +
                                                  " records, got " + std::to_string(m.rows));
    }
}

// Renumbers labels by first appearance so they are contiguous 0..c-1.
// Returns old -> new mapping (indexed by old label, -1 if unused).
std::vector<int> canonicalize(std::vector<int>& labels, int old_count) {
    std::vector<int> mapping(static_cast<std::size_t>(old_count), -1);
    int next = 0;
    for (auto& l : labels) {
        if (l == kNoise) continue;
        auto& slot = mapping[static_cast<std::size_t>(l)];
        if (slot < 0) slot = next++;
        l = slot;
    }
    return mapping;
}

std::vector<std::vector<double>> remap_centroids(const std::vector<std::vector<double>>& centroids,
                                                 const std::vector<int>& mapping) {
    int used = 0;
    for (int v : mapping) used = std::max(used, v + 1);
    std::vector<std::vector<double>> out(static_cast<std::size_t>(used));
    for (std::size_t old = 0; old < mapping.size(); ++old) {
        if (mapping[old] >= 0) out[static_cast<std::size_t>(mapping[old])] = centroids[old];
    }
    return out;
}

ClusterModel base_model(const FeatureMatrix& m, Algorithm algo) {
    ClusterModel model;
    model.algorithm = algo;
    model.features = m.features;
    model.input_ids = m.ids;
    return model;
}

void finish(ClusterModel& model, const FeatureMatrix& m) {
    if (model.cluster_count() > 0) model.medoids = medoids(model, m);
}

std::vector<std::vector<double>> kmeanspp_seeds(const FeatureMatrix& m, int k, Rng& rng) {
    const std::size_t n = m.rows;
    std::vector<std::vector<double>> centers;
    auto first = rng.below(n);
    centers.emplace_back(m.row(first).begin(), m.row(first).end());
    std::vector<double> d2(n, kInf);
    while (static_cast<int>(centers.size()) < k) {
        const auto& last = centers.back();
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            d2[i] = std::min(d2[i], squared_distance(m.row(i), last));
            total += d2[i];
        }
        std::size_t pick = n - 1;
        if (total > 0.0) {
            const double target = rng.uniform() * total;
            double acc = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                acc += d2[i];
                if (acc > target && d2[i] > 0.0) {
                    pick = i;
                    break;
                }
            }
        } else {
            pick = rng.below(n);
        }
        centers.emplace_back(m.row(pick).begin(), m.row(pick).end());
    }
    return centers;
}

}  // namespace

std::string_view algorithm_name(Algorithm a) {
    switch (a) {
        case Algorithm::KMeans: return "kmeans";
        case Algorithm::Gmm: return "gmm";
        case Algorithm::Agglomerative: return "agglomerative";
        case Algorithm::Dbscan: return "dbscan";
    }
    return "?";
}

Algorithm parse_algorithm(std::string_view name) {
    for (auto a : {Algorithm::KMeans, Algorithm::Gmm, Algorithm::Agglomerative, Algorithm::Dbscan}) {
        if (algorithm_name(a) == name) return a;
    }
    throw Error(ErrorCode::InvalidArgument, "unknown algorithm '" + std::string(name) + "'");
}

std::string_view linkage_name(Linkage l) {
    switch (l) {
        case Linkage::Average: return "average";
        case Linkage::Complete: return "complete";
        case Linkage::Single: return "single";
    }
    return "?";
}

Linkage parse_linkage(std::string_view name) {
    for (auto l : {Linkage::Average, Linkage::Complete, Linkage::Single}) {
        if (linkage_name(l) == name) return l;
    }
    throw Error(ErrorCode::InvalidArgument, "unknown linkage '" + std::string(name) + "'");
}

int ClusterModel::cluster_count() const {
    int c = 0;
    for (int l : labels) c = std::max(c, l + 1);
    return c;
}

std::size_t ClusterModel::noise_count() const {
    return static_cast<std::size_t>(std::count(labels.begin(), labels.end(), kNoise));
}

std::vector<std::size_t> ClusterModel::cluster_sizes() const {
    std::vector<std::size_t> sizes(static_cast<std::size_t>(cluster_count()), 0);
    for (int l : labels) {
        if (l != kNoise) ++sizes[static_cast<std::size_t>(l)];
    }
    return sizes;
}

std::vector<std::size_t> ClusterModel::members(int label) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] == label) out.push_back(i);
    }
    return out;
}

std::optional<int> ClusterModel::label_of(std::string_view input_id) const {
    for (std::size_t i = 0; i < input_ids.size(); ++i) {
        if (input_ids[i] == input_id) return labels[i];
    }
    return std::nullopt;
}

double within_cluster_ss(const FeatureMatrix& m, const std::vector<int>& labels) {
    int c = 0;
    for (int l : labels) c = std::max(c, l + 1);
    std::vector<std::vector<double>> sums(static_cast<std::size_t>(c), std::vector<double>(m.cols, 0.0));
    std::vector<std::size_t> counts(static_cast<std::size_t>(c), 0);
    for (std::size_t i = 0; i < m.rows; ++i) {
        if (labels[i] == kNoise) continue;
        auto& s = sums[static_cast<std::size_t>(labels[i])];
        for (std::size_t j = 0; j < m.cols; ++j) s[j] += m.at(i, j);
        ++counts[static_cast<std::size_t>(labels[i])];
    }
    for (std::size_t l = 0; l < sums.size(); ++l) {
        for (auto& v : sums[l]) v /= static_cast<double>(std::max<std::size_t>(counts[l], 1));
    }
    double total = 0.0;
    for (std::size_t i = 0; i < m.rows; ++i) {
        if (labels[i] == kNoise) continue;
        total += squared_distance(m.row(i), sums[static_cast<std::size_t>(labels[i])]);
    }
    return total;
}

ClusterModel kmeans_fit(const FeatureMatrix& m, int k, std::uint64_t seed, int max_iter, double tol) {
    KMeansOptions opts;
    opts.seed = seed;
    opts.max_iter = max_iter;
    opts.tol = tol;
    return kmeans_fit(m, k, opts);
}

ClusterModel kmeans_fit(const FeatureMatrix& m, int k, const KMeansOptions& opts) {
    require_rows(m, k);
    if (opts.max_iter < 1) throw Error(ErrorCode::InvalidArgument, "max_iter must be >= 1");
    const std::size_t n = m.rows;
    const std::size_t kk = static_cast<std::size_t>(k);

    ClusterModel model = base_model(m, Algorithm::KMeans);
    model.seed = opts.seed;
    model.params.k = k;
    model.params.max_iter = opts.max_iter;
    model.params.tol = opts.tol;

    std::vector<std::vector<double>> centroids;
    if (!opts.initial_centroids.empty()) {
        if (opts.initial_centroids.size() != kk) {
            throw Error(ErrorCode::InvalidArgument, "initial centroid count != k");
        }
        centroids = opts.initial_centroids;
    } else {
        Rng rng(opts.seed);
        centroids = kmeanspp_seeds(m, k, rng);
    }

    std::vector<int> labels(n, 0);
    std::vector<double> d2(n, 0.0);
    std::vector<std::size_t> counts(kk, 0);
    for (int iter = 1; iter <= opts.max_iter; ++iter) {
        std::fill(counts.begin(), counts.end(), 0);
        for (std::size_t i = 0; i < n; ++i) {
            double best = kInf;
            int arg = 0;
            for (std::size_t c = 0; c < kk; ++c) {
                const double d = squared_distance(m.row(i), centroids[c]);
                if (d < best) {
                    best = d;
                    arg = static_cast<int>(c);
                }
            }
            labels[i] = arg;
            d2[i] = best;
            ++counts[static_cast<std::size_t>(arg)];
        }

        for (std::size_t c = 0; c < kk; ++c) {
            if (counts[c] != 0) continue;
            std::size_t far = n;
            for (std::size_t i = 0; i < n; ++i) {
                if (counts[static_cast<std::size_t>(labels[i])] < 2) continue;
                if (far == n || d2[i] > d2[far]) far = i;
            }
            --counts[static_cast<std::size_t>(labels[far])];
            labels[far] = static_cast<int>(c);
            d2[far] = 0.0;
            counts[c] = 1;
        }

        std::vector<std::vector<double>> next(kk, std::vector<double>(m.cols, 0.0));
        for (std::size_t i = 0; i < n; ++i) {
            auto& s = next[static_cast<std::size_t>(labels[i])];
            for (std::size_t j = 0; j < m.cols; ++j) s[j] += m.at(i, j);
        }
        double shift = 0.0;
        for (std::size_t c = 0; c < kk; ++c) {
            for (auto& v : next[c]) v /= static_cast<double>(counts[c]);
            shift = std::max(shift, squared_distance(next[c], centroids[c]));
        }
        centroids = std::move(next);

        double wcss = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            wcss += squared_distance(m.row(i), centroids[static_cast<std::size_t>(labels[i])]);
        }
        model.trace.push_back(wcss);
        model.iterations = iter;
        if (std::sqrt(shift) < opts.tol) break;
    }

    // A Lloyd fixed point can still have a point whose transfer lowers WCSS
    // once both means move, so finish with single-point transfers.
    for (int sweep = 0; k > 1 && sweep < opts.max_iter; ++sweep) {
        bool moved = false;
        for (std::size_t i = 0; i < n; ++i) {
            const auto from = static_cast<std::size_t>(labels[i]);
            if (counts[from] < 2) continue;
            const double nf = static_cast<double>(counts[from]);
            const double out_cost = nf / (nf - 1.0) * squared_distance(m.row(i), centroids[from]);
            double best = out_cost - 1e-12 * (1.0 + out_cost);
            std::size_t to = from;
            for (std::size_t c = 0; c < kk; ++c) {
                if (c == from) continue;
                const double nt = static_cast<double>(counts[c]);
                const double in_cost = nt / (nt + 1.0) * squared_distance(m.row(i), centroids[c]);
                if (in_cost < best) {
                    best = in_cost;
                    to = c;
                }
            }
            if (to == from) continue;
            const double nt = static_cast<double>(counts[to]);
            for (std::size_t j = 0; j < m.cols; ++j) {
                const double x = m.at(i, j);
                centroids[from][j] = (nf * centroids[from][j] - x) / (nf - 1.0);
                centroids[to][j] = (nt * centroids[to][j] + x) / (nt + 1.0);
            }
            --counts[from];
            ++counts[to];
            labels[i] = static_cast<int>(to);
            moved = true;
        }
        if (!moved) break;
        // Recompute the means exactly so incremental updates cannot drift.
        for (auto& c : centroids) std::fill(c.begin(), c.end(), 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            auto& s = centroids[static_cast<std::size_t>(labels[i])];
            for (std::size_t j = 0; j < m.cols; ++j) s[j] += m.at(i, j);
        }
        for (std::size_t c = 0; c < kk; ++c) {
            for (auto& v : centroids[c]) v /= static_cast<double>(counts[c]);
        }
        double wcss = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            wcss += squared_distance(m.row(i), centroids[static_cast<std::size_t>(labels[i])]);
        }
        model.trace.push_back(wcss);
    }

    model.wcss = model.trace.back();
    auto mapping = canonicalize(labels, k);
    model.centroids = remap_centroids(centroids, mapping);
    model.labels = std::move(labels);
    if (opts.compute_medoids) finish(model, m);
    return model;
}

ClusterModel dbscan_fit(const FeatureMatrix& m, double eps, int min_pts) {
    if (!(eps > 0.0)) throw Error(ErrorCode::InvalidArgument, "eps must be positive");
    if (min_pts < 1) throw Error(ErrorCode::InvalidArgument, "min_pts must be >= 1");
    const std::size_t n = m.rows;
    const double eps2 = eps * eps;
    constexpr int kUnvisited = -2;

    ClusterModel model = base_model(m, Algorithm::Dbscan);
    model.params.eps = eps;
    model.params.min_pts = min_pts;

    auto region = [&](std::size_t p) {
        std::vector<std::size_t> out;
        for (std::size_t q = 0; q < n; ++q) {
            if (squared_distance(m.row(p), m.row(q)) <= eps2) out.push_back(q);
        }
        return out;
    };

    std::vector<int> labels(n, kUnvisited);
    int cluster = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (labels[i] != kUnvisited) continue;
        auto seeds = region(i);
        if (seeds.size() < static_cast<std::size_t>(min_pts)) {
            labels[i] = kNoise;
            continue;
        }
        labels[i] = cluster;
        std::deque<std::size_t> queue(seeds.begin(), seeds.end());
        while (!queue.empty()) {
            const auto q = queue.front();
            queue.pop_front();
            if (labels[q] == kNoise) labels[q] = cluster;  // border point
            if (labels[q] != kUnvisited) continue;
            labels[q] = cluster;
            auto nb = region(q);
            if (nb.size() >= static_cast<std::size_t>(min_pts)) {
                queue.insert(queue.end(), nb.begin(), nb.end());
            }
        }
        ++cluster;
    }
    model.labels = std::move(labels);
    finish(model, m);
    return model;
}

ClusterModel gmm_fit(const FeatureMatrix& m, int k, std::uint64_t seed, int max_iter, double tol) {
    require_rows(m, k);
    if (max_iter < 1) throw Error(ErrorCode::InvalidArgument, "max_iter must be >= 1");
    const std::size_t n = m.rows;
    const std::size_t d = m.cols;
    const std::size_t kk = static_cast<std::size_t>(k);

    KMeansOptions init;
    init.seed = seed;
    init.compute_medoids = false;
    const auto km = kmeans_fit(m, k, init);

    std::vector<std::vector<double>> means = km.centroids;
    std::vector<std::vector<double>> vars(kk, std::vector<double>(d, 0.0));
    std::vector<double> weights(kk, 0.0);
    {
        std::vector<std::size_t> counts(kk, 0);
        for (std::size_t i = 0; i < n; ++i) {
            const auto c = static_cast<std::size_t>(km.labels[i]);
            ++counts[c];
            for (std::size_t j = 0; j < d; ++j) {
                const double diff = m.at(i, j) - means[c][j];
                vars[c][j] += diff * diff;
            }
        }
        for (std::size_t c = 0; c < kk; ++c) {
            weights[c] = static_cast<double>(counts[c]) / static_cast<double>(n);
            for (auto& v : vars[c]) v = std::max(kVarianceFloor, v / static_cast<double>(counts[c]));
        }
    }

    ClusterModel model = base_model(m, Algorithm::Gmm);
    model.seed = seed;
    model.params.k = k;
    model.params.max_iter = max_iter;
    model.params.tol = tol;

    const double log2pi = std::log(2.0 * std::numbers::pi);
    std::vector<double> resp(n * kk, 0.0);
    double prev = -kInf;
    for (int iter = 1; iter <= max_iter; ++iter) {
        // E-step
        double ll = 0.0;
        std::vector<double> log_norm(kk);
        for (std::size_t c = 0; c < kk; ++c) {
            double s = 0.0;
            for (std::size_t j = 0; j < d; ++j) s += log2pi + std::log(vars[c][j]);
            log_norm[c] = (weights[c] > 0.0 ? std::log(weights[c]) : -kInf) - 0.5 * s;
        }
        for (std::size_t i = 0; i < n; ++i) {
            double* r = &resp[i * kk];
            double top = -kInf;
            for (std::size_t c = 0; c < kk; ++c) {
                double q = 0.0;
                for (std::size_t j = 0; j < d; ++j) {
                    const double diff = m.at(i, j) - means[c][j];
                    q += diff * diff / vars[c][j];
                }
                r[c] = log_norm[c] - 0.5 * q;
                top = std::max(top, r[c]);
            }
            double sum = 0.0;
            for (std::size_t c = 0; c < kk; ++c) {
                r[c] = std::exp(r[c] - top);
                sum += r[c];
            }
            for (std::size_t c = 0; c < kk; ++c) r[c] /= sum;
            ll += top + std::log(sum);
        }
        model.trace.push_back(ll);
        model.iterations = iter;
        if (ll - prev < tol) break;
        prev = ll;
        if (iter == max_iter) break;

        // M-step
        for (std::size_t c = 0; c < kk; ++c) {
            double nk = 0.0;
            std::vector<double> mu(d, 0.0);
            for (std::size_t i = 0; i < n; ++i) {
                const double w = resp[i * kk + c];
                nk += w;
                for (std::size_t j = 0; j < d; ++j) mu[j] += w * m.at(i, j);
            }
            weights[c] = nk / static_cast<double>(n);
            if (!(nk > 1e-300)) continue;  // collapsed component keeps its shape
            for (auto& v : mu) v /= nk;
            std::vector<double> var(d, 0.0);
            for (std::size_t i = 0; i < n; ++i) {
                const double w = resp[i * kk + c];
                for (std::size_t j = 0; j < d; ++j) {
                    const double diff = m.at(i, j) - mu[j];
                    var[j] += w * diff * diff;
                }
            }
            for (auto& v : var) v = std::max(kVarianceFloor, v / nk);
            means[c] = std::move(mu);
            vars[c] = std::move(var);
        }
    }

    std::vector<int> labels(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        const double* r = &resp[i * kk];
        labels[i] = static_cast<int>(std::max_element(r, r + kk) - r);
    }
    model.log_likelihood = model.trace.back();
    auto mapping = canonicalize(labels, k);
    model.centroids = remap_centroids(means, mapping);
    model.labels = std::move(labels);
    finish(model, m);
    return model;
}

ClusterModel agglomerative_fit(const FeatureMatrix& m, int k, Linkage linkage) {
    require_rows(m, k);
    const std::size_t n = m.rows;
    ClusterModel model = base_model(m, Algorithm::Agglomerative);
    model.params.k = k;
    model.params.linkage = linkage;

    // condensed upper triangle, pair (i, j) with i < j
    auto idx = [n](std::size_t i, std::size_t j) { return i * n - i * (i + 1) / 2 + (j - i - 1); };
    std::vector<double> dist(n * (n - 1) / 2);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) dist[idx(i, j)] = distance(m.row(i), m.row(j));
    }
    auto get = [&](std::size_t a, std::size_t b) { return a < b ? dist[idx(a, b)] : dist[idx(b, a)]; };

    std::vector<bool> active(n, true);
    std::vector<std::size_t> size(n, 1);
    std::vector<std::vector<std::size_t>> members(n);
    for (std::size_t i = 0; i < n; ++i) members[i] = {i};

    // nearest active partner with a larger index; a cluster lives at its min member index
    constexpr std::size_t kNone = static_cast<std::size_t>(-1);
    std::vector<std::size_t> nn(n, kNone);
    auto rescan = [&](std::size_t i) {
        nn[i] = kNone;
        double best = kInf;
        for (std::size_t j = i + 1; j < n; ++j) {
            if (!active[j]) continue;
            const double v = dist[idx(i, j)];
            if (v < best) {
                best = v;
                nn[i] = j;
            }
        }
    };
    for (std::size_t i = 0; i < n; ++i) rescan(i);

    std::size_t clusters = n;
    while (clusters > static_cast<std::size_t>(k)) {
        std::size_t bi = kNone;
        double best = kInf;
        for (std::size_t i = 0; i < n; ++i) {
            if (!active[i] || nn[i] == kNone) continue;
            const double v = dist[idx(i, nn[i])];
            if (v < best) {  // strict: lowest i wins ties, and nn[i] is lowest j
                best = v;
                bi = i;
            }
        }
        const std::size_t i = bi;
        const std::size_t j = nn[bi];

        for (std::size_t o = 0; o < n; ++o) {
            if (!active[o] || o == i || o == j) continue;
            const double di = get(i, o);
            const double dj = get(j, o);
            double merged = 0.0;
            switch (linkage) {
                case Linkage::Single: merged = std::min(di, dj); break;
                case Linkage::Complete: merged = std::max(di, dj); break;
                case Linkage::Average:
                    merged = (static_cast<double>(size[i]) * di + static_cast<double>(size[j]) * dj) /
                             static_cast<double>(size[i] + size[j]);
                    break;
            }
            if (o < i) dist[idx(o, i)] = merged;
            else dist[idx(i, o)] = merged;
        }
        active[j] = false;
        size[i] += size[j];
        members[i].insert(members[i].end(), members[j].begin(), members[j].end());
        members[j].clear();
        --clusters;

        rescan(i);
        for (std::size_t o = 0; o < i; ++o) {
            if (!active[o]) continue;
            if (nn[o] == i || nn[o] == j) {
                rescan(o);
            } else if (nn[o] != kNone) {
                const double v = dist[idx(o, i)];
                const double cur = dist[idx(o, nn[o])];
                if (v < cur || (v == cur && i < nn[o])) nn[o] = i;
            } else {
                nn[o] = i;
            }
        }
        for (std::size_t o = i + 1; o < j; ++o) {
            if (active[o] && nn[o] == j) rescan(o);
        }
    }

    std::vector<int> labels(n, 0);
    int next = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (!active[i]) continue;
        for (auto p : members[i]) labels[p] = next;
        ++next;
    }
    model.labels = std::move(labels);
    finish(model, m);
    return model;
}

std::map<int, std::string> medoids(const ClusterModel& model, const FeatureMatrix& m) {
    const int c = model.cluster_count();
    if (c == 0) throw Error(ErrorCode::NoClusters, "every record is noise");
    if (model.labels.size() != m.rows) {
        throw Error(ErrorCode::InvalidArgument, "model and matrix row counts differ");
    }
    std::map<int, std::string> out;
    for (int label = 0; label < c; ++label) {
        const auto mem = model.members(label);
        std::vector<double> sums(mem.size(), 0.0);
        for (std::size_t a = 0; a < mem.size(); ++a) {
            for (std::size_t b = a + 1; b < mem.size(); ++b) {
                const double v = distance(m.row(mem[a]), m.row(mem[b]));
                sums[a] += v;
                sums[b] += v;
            }
        }
        std::size_t best = 0;
        for (std::size_t a = 1; a < mem.size(); ++a) {
            // near-equal sums count as ties so rounding cannot beat the index rule
            const double tol = 1e-12 * std::max(1.0, sums[best]);
            if (sums[a] < sums[best] - tol) best = a;
        }
        out[label] = m.ids[mem[best]];
    }
    return out;
}

std::vector<double> k_distances(const FeatureMatrix& m, int k) {
    if (k < 1 || static_cast<std::size_t>(k) >= m.rows) {
        throw Error(ErrorCode::InvalidArgument, "k must be in [1, rows - 1]");
    }
    std::vector<double> out;
    out.reserve(m.rows);
    std::vector<double> row(m.rows - 1);
    for (std::size_t i = 0; i < m.rows; ++i) {
        std::size_t w = 0;
        for (std::size_t j = 0; j < m.rows; ++j) {
            if (j != i) row[w++] = distance(m.row(i), m.row(j));
        }
        std::nth_element(row.begin(), row.begin() + (k - 1), row.end());
        out.push_back(row[static_cast<std::size_t>(k - 1)]);
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace perfgate
