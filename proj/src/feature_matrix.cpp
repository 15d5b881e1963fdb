#include "perfgate/feature_matrix.hpp"

#include <cmath>

#include "perfgate/error.hpp"

namespace perfgate {

FeatureMatrix FeatureMatrix::from_rows(const std::vector<std::vector<double>>& rows,
                                       std::vector<std::string> ids) {
    FeatureMatrix m;
    m.rows = rows.size();
    m.cols = rows.empty() ? 0 : rows.front().size();
    m.values.reserve(m.rows * m.cols);
    for (const auto& r : rows) {
        if (r.size() != m.cols) throw Error(ErrorCode::InvalidArgument, "ragged feature rows");
        m.values.insert(m.values.end(), r.begin(), r.end());
    }
    if (ids.empty()) {
        for (std::size_t i = 0; i < m.rows; ++i) ids.push_back("r" + std::to_string(i));
    }
    if (ids.size() != m.rows) throw Error(ErrorCode::InvalidArgument, "id count != row count");
    m.ids = std::move(ids);
    m.constant.assign(m.cols, false);
    return m;
}

FeatureMatrix raw_features(const CommitSnapshot& snapshot, const std::vector<Attribute>& features) {
    if (features.empty()) throw Error(ErrorCode::InvalidArgument, "no features selected");
    const CommitSnapshot agg =
        snapshot.has_test_cases() ? aggregate_by_input(snapshot) : snapshot;
    FeatureMatrix m;
    m.features = features;
    m.rows = agg.records.size();
    m.cols = features.size();
    m.values.reserve(m.rows * m.cols);
    for (const auto& r : agg.records) {
        m.ids.push_back(r.input_id);
        for (auto a : features) m.values.push_back(r.value(a));
    }
    m.constant.assign(m.cols, false);
    return m;
}

FeatureMatrix standardize(FeatureMatrix m) {
    if (m.rows < 2) {
        throw Error(ErrorCode::TooFewRecords,
                    "standardization needs >= 2 records, got " + std::to_string(m.rows));
    }
    m.constant.assign(m.cols, false);
    const double n = static_cast<double>(m.rows);
    for (std::size_t j = 0; j < m.cols; ++j) {
        double mean = 0.0;
        for (std::size_t i = 0; i < m.rows; ++i) mean += m.at(i, j);
        mean /= n;
        double ss = 0.0;
        for (std::size_t i = 0; i < m.rows; ++i) {
            const double d = m.at(i, j) - mean;
            ss += d * d;
        }
        const double sd = std::sqrt(ss / (n - 1.0));
        // relative test: a column of equal large values can leave rounding residue
        if (!(sd > 1e-12 * std::max(1.0, std::abs(mean)))) {
            m.constant[j] = true;
            for (std::size_t i = 0; i < m.rows; ++i) m.at(i, j) = 0.0;
            continue;
        }
        for (std::size_t i = 0; i < m.rows; ++i) m.at(i, j) = (m.at(i, j) - mean) / sd;
    }
    return m;
}

FeatureMatrix standardize(const CommitSnapshot& snapshot, const std::vector<Attribute>& features) {
    return standardize(raw_features(snapshot, features));
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

double distance(std::span<const double> a, std::span<const double> b) {
    return std::sqrt(squared_distance(a, b));
}

}  // namespace perfgate
