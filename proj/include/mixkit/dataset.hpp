#ifndef MIXKIT_DATASET_HPP
#define MIXKIT_DATASET_HPP

#include <string>
#include <vector>

namespace mixkit {

enum class DataKind { UnivariateReal, UnivariateCount, MultinomialRows, BinaryMatrix };

std::string kind_name(DataKind kind);

// Observations of one of the four supported shapes. Row-structured kinds
// (multinomial rows, binary matrices) use `rows`/`columns`; the univariate
// kinds use `reals` or `counts`.
struct Dataset {
    DataKind kind = DataKind::UnivariateReal;
    std::vector<double> reals;
    std::vector<long long> counts;
    std::vector<std::vector<long long>> rows;
    int columns = 0;

    std::size_t size() const;
    // Per-row totals d_i for multinomial rows.
    std::vector<long long> row_totals() const;

    static Dataset univariate_real(std::vector<double> values);
    static Dataset univariate_count(std::vector<long long> values);
    static Dataset multinomial_rows(std::vector<std::vector<long long>> rows, int m);
    static Dataset binary_matrix(std::vector<std::vector<long long>> rows, int d);
};

// Validates kind-consistency (nonnegative counts, binary cells, column
// arity); throws DataError otherwise.
void validate_dataset(const Dataset& data);

}  // namespace mixkit

#endif
