#ifndef MIXKIT_IO_HPP
#define MIXKIT_IO_HPP

#include <string>
#include <vector>

#include "mixkit/dataset.hpp"
#include "mixkit/mcmc.hpp"
#include "mixkit/model.hpp"

namespace mixkit {

// Text loaders. '#' lines and blank lines are skipped everywhere; parse
// failures carry 1-based line (and column, for matrices) positions. CRLF
// endings are accepted.

// One real number per line; `scale` multiplies every value on load.
Dataset load_univariate(const std::string& path, double scale = 1.0);

// One nonnegative integer per line.
Dataset load_counts(const std::string& path);

// CSV of 0/1 cells, `d` columns per row.
Dataset load_binary_matrix(const std::string& path, int d);

// CSV of nonnegative integer cells, `m` columns per row; row totals may differ.
Dataset load_multinomial_rows(const std::string& path, int m);

// Writes a dataset in the matching loader format (one value per line, or
// CSV rows); loading the result reproduces the dataset exactly.
void save_dataset(const std::string& path, const Dataset& data);

// FNV-1a 64-bit content hash, hex encoded.
std::string checksum_string(const std::string& content);
std::string file_checksum(const std::string& path);

struct DataManifest {
    std::string path;
    DataKind kind = DataKind::UnivariateReal;
    std::size_t n = 0;
    std::string checksum;
};

DataManifest manifest_for(const std::string& path, const Dataset& data);

// Per-component parameter column names, e.g. {"lambda.1"} or
// {"mu.2", "sigma2.2"}; the trace header is
// iter,p.1..p.J,<all component columns>,loglik.
std::vector<std::string> trace_column_names(const ComponentFamily& family, int J);

// Trace round trip. Metadata travels in leading '#' lines (family, J,
// relabeled flag); allocations and latent scales are not serialised.
void write_trace_csv(const std::string& path, const Trace& trace);
Trace read_trace_csv(const std::string& path);

// Key=value manifest lines (config echo, seed, data checksum).
void write_manifest(const std::string& path,
                    const std::vector<std::pair<std::string, std::string>>& entries);

// Shortest decimal form that parses back to the same double.
std::string format_double(double v);

}  // namespace mixkit

#endif
