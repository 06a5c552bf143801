#include "mixkit/dataset.hpp"

#include <cmath>

#include "mixkit/errors.hpp"

namespace mixkit {

std::string kind_name(DataKind kind) {
    switch (kind) {
        case DataKind::UnivariateReal: return "univariate-real";
        case DataKind::UnivariateCount: return "univariate-count";
        case DataKind::MultinomialRows: return "multinomial-rows";
        case DataKind::BinaryMatrix: return "binary-matrix";
    }
    return "unknown";
}

std::size_t Dataset::size() const {
    switch (kind) {
        case DataKind::UnivariateReal: return reals.size();
        case DataKind::UnivariateCount: return counts.size();
        case DataKind::MultinomialRows:
        case DataKind::BinaryMatrix: return rows.size();
    }
    return 0;
}

std::vector<long long> Dataset::row_totals() const {
    std::vector<long long> totals;
    totals.reserve(rows.size());
    for (const auto& row : rows) {
        long long t = 0;
        for (long long c : row) t += c;
        totals.push_back(t);
    }
    return totals;
}

Dataset Dataset::univariate_real(std::vector<double> values) {
    Dataset d;
    d.kind = DataKind::UnivariateReal;
    d.reals = std::move(values);
    validate_dataset(d);
    return d;
}

Dataset Dataset::univariate_count(std::vector<long long> values) {
    Dataset d;
    d.kind = DataKind::UnivariateCount;
    d.counts = std::move(values);
    validate_dataset(d);
    return d;
}

Dataset Dataset::multinomial_rows(std::vector<std::vector<long long>> rows, int m) {
    Dataset d;
    d.kind = DataKind::MultinomialRows;
    d.rows = std::move(rows);
    d.columns = m;
    validate_dataset(d);
    return d;
}

Dataset Dataset::binary_matrix(std::vector<std::vector<long long>> rows, int d_vars) {
    Dataset d;
    d.kind = DataKind::BinaryMatrix;
    d.rows = std::move(rows);
    d.columns = d_vars;
    validate_dataset(d);
    return d;
}

void validate_dataset(const Dataset& data) {
    switch (data.kind) {
        case DataKind::UnivariateReal:
            for (double v : data.reals)
                if (!std::isfinite(v)) throw DataError("dataset: non-finite real observation");
            return;
        case DataKind::UnivariateCount:
            for (long long c : data.counts)
                if (c < 0) throw DataError("dataset: negative count observation");
            return;
        case DataKind::MultinomialRows:
            if (data.columns < 2) throw DataError("dataset: multinomial rows need >= 2 modalities");
            for (const auto& row : data.rows) {
                if (static_cast<int>(row.size()) != data.columns)
                    throw DataError("dataset: multinomial row arity mismatch");
                for (long long c : row)
                    if (c < 0) throw DataError("dataset: negative multinomial cell");
            }
            return;
        case DataKind::BinaryMatrix:
            if (data.columns < 1) throw DataError("dataset: binary matrix needs >= 1 variable");
            for (const auto& row : data.rows) {
                if (static_cast<int>(row.size()) != data.columns)
                    throw DataError("dataset: binary row arity mismatch");
                for (long long c : row)
                    if (c != 0 && c != 1) throw DataError("dataset: non-binary cell");
            }
            return;
    }
    throw DataError("dataset: unknown kind");
}

}  // namespace mixkit
