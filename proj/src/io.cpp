#include "mixkit/io.hpp"

#include <charconv>
#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "mixkit/errors.hpp"

namespace mixkit {

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void strip_cr(std::string& line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
}

bool skippable(const std::string& line) {
    for (char c : line) {
        if (c == '#') return true;
        if (c != ' ' && c != '\t') return false;
    }
    return true;  // blank
}

std::vector<std::pair<std::size_t, std::string>> content_lines(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open file: " + path);
    std::vector<std::pair<std::size_t, std::string>> lines;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        strip_cr(line);
        if (skippable(line)) continue;
        lines.emplace_back(lineno, line);
    }
    return lines;
}

double parse_double(const std::string& token, const std::string& path, std::size_t lineno) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(token, &pos);
        while (pos < token.size() && (token[pos] == ' ' || token[pos] == '\t')) ++pos;
        if (pos != token.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (const std::exception&) {
        throw DataError(path + ":" + std::to_string(lineno) + ": unparsable number '" + token +
                        "'");
    }
}

long long parse_int(const std::string& token, const std::string& path, std::size_t lineno,
                    int column) {
    long long v = 0;
    const char* first = token.data();
    const char* last = token.data() + token.size();
    while (first < last && (*first == ' ' || *first == '\t')) ++first;
    while (last > first && (*(last - 1) == ' ' || *(last - 1) == '\t')) --last;
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last)
        throw DataError(path + ":" + std::to_string(lineno) + ": column " +
                        std::to_string(column) + ": unparsable integer '" + token + "'");
    return v;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    for (char c : line) {
        if (c == ',') {
            cells.push_back(cell);
            cell.clear();
        } else {
            cell.push_back(c);
        }
    }
    cells.push_back(cell);
    return cells;
}

}  // namespace

Dataset load_univariate(const std::string& path, double scale) {
    if (!(scale > 0.0)) throw ValidationError("load: scale must be positive");
    std::vector<double> values;
    for (const auto& [lineno, line] : content_lines(path))
        values.push_back(scale * parse_double(line, path, lineno));
    if (values.empty()) throw DataError(path + ": no observations");
    return Dataset::univariate_real(std::move(values));
}

Dataset load_counts(const std::string& path) {
    std::vector<long long> values;
    for (const auto& [lineno, line] : content_lines(path)) {
        const long long v = parse_int(line, path, lineno, 1);
        if (v < 0) throw DataError(path + ":" + std::to_string(lineno) + ": negative count");
        values.push_back(v);
    }
    if (values.empty()) throw DataError(path + ": no observations");
    return Dataset::univariate_count(std::move(values));
}

namespace {

std::vector<std::vector<long long>> load_integer_matrix(const std::string& path, int columns) {
    std::vector<std::vector<long long>> rows;
    for (const auto& [lineno, line] : content_lines(path)) {
        const auto cells = split_csv(line);
        if (static_cast<int>(cells.size()) != columns)
            throw DataError(path + ":" + std::to_string(lineno) + ": expected " +
                            std::to_string(columns) + " columns, found " +
                            std::to_string(cells.size()));
        std::vector<long long> row(columns);
        for (int c = 0; c < columns; ++c) row[c] = parse_int(cells[c], path, lineno, c + 1);
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw DataError(path + ": no observations");
    return rows;
}

}  // namespace

Dataset load_binary_matrix(const std::string& path, int d) {
    auto rows = load_integer_matrix(path, d);
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (int c = 0; c < d; ++c)
            if (rows[i][c] != 0 && rows[i][c] != 1)
                throw DataError(path + ": row " + std::to_string(i + 1) + ", column " +
                                std::to_string(c + 1) + ": cell is not 0/1");
    return Dataset::binary_matrix(std::move(rows), d);
}

Dataset load_multinomial_rows(const std::string& path, int m) {
    auto rows = load_integer_matrix(path, m);
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (int c = 0; c < m; ++c)
            if (rows[i][c] < 0)
                throw DataError(path + ": row " + std::to_string(i + 1) + ", column " +
                                std::to_string(c + 1) + ": negative cell");
    return Dataset::multinomial_rows(std::move(rows), m);
}

std::string format_double(double v) {
    char buf[64];
    // Shortest representation that round-trips a double.
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
        if (std::stod(buf) == v) break;
    }
    return buf;
}

void save_dataset(const std::string& path, const Dataset& data) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write file: " + path);
    switch (data.kind) {
        case DataKind::UnivariateReal:
            for (double v : data.reals) out << format_double(v) << "\n";
            break;
        case DataKind::UnivariateCount:
            for (long long v : data.counts) out << v << "\n";
            break;
        case DataKind::MultinomialRows:
        case DataKind::BinaryMatrix:
            for (const auto& row : data.rows) {
                for (std::size_t c = 0; c < row.size(); ++c)
                    out << (c ? "," : "") << row[c];
                out << "\n";
            }
            break;
    }
}

std::string checksum_string(const std::string& content) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : content) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016" PRIx64, h);
    return buf;
}

std::string file_checksum(const std::string& path) { return checksum_string(read_file(path)); }

DataManifest manifest_for(const std::string& path, const Dataset& data) {
    DataManifest m;
    m.path = path;
    m.kind = data.kind;
    m.n = data.size();
    m.checksum = file_checksum(path);
    return m;
}

std::vector<std::string> trace_column_names(const ComponentFamily& family, int J) {
    std::vector<std::string> names;
    for (int j = 1; j <= J; ++j) names.push_back("p." + std::to_string(j));
    for (int j = 1; j <= J; ++j) {
        const std::string s = std::to_string(j);
        switch (family.tag) {
            case FamilyTag::Poisson:
                names.push_back("lambda." + s);
                break;
            case FamilyTag::MultinomialProfile:
                for (int v = 1; v <= family.modalities; ++v)
                    names.push_back("q." + s + "." + std::to_string(v));
                break;
            case FamilyTag::BernoulliProduct:
                for (int v = 1; v <= family.variables; ++v)
                    names.push_back("q." + s + "." + std::to_string(v));
                break;
            case FamilyTag::Normal:
                names.push_back("mu." + s);
                names.push_back("sigma2." + s);
                break;
            case FamilyTag::StudentT:
                names.push_back("mu." + s);
                names.push_back("sigma2." + s);
                names.push_back("nu." + s);
                break;
        }
    }
    return names;
}

void write_trace_csv(const std::string& path, const Trace& trace) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write file: " + path);
    const int J = trace.draws.empty() ? 0 : trace.draws[0].component_count();
    out << "# family=" << trace.family.name() << " J=" << J;
    if (trace.family.tag == FamilyTag::MultinomialProfile)
        out << " modalities=" << trace.family.modalities;
    if (trace.family.tag == FamilyTag::BernoulliProduct)
        out << " variables=" << trace.family.variables;
    out << " relabeled=" << (trace.relabeled ? "true" : "false") << "\n";

    out << "iter";
    for (const auto& name : trace_column_names(trace.family, J)) out << "," << name;
    out << ",loglik\n";

    for (std::size_t t = 0; t < trace.size(); ++t) {
        out << (t + 1);
        for (double p : trace.draws[t].weights) out << "," << format_double(p);
        for (const auto& theta : trace.draws[t].components)
            for (double v : theta) out << "," << format_double(v);
        out << "," << format_double(trace.log_lik[t]) << "\n";
    }
}

Trace read_trace_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open file: " + path);
    std::string line;
    if (!std::getline(in, line)) throw DataError(path + ": empty trace file");
    strip_cr(line);
    if (line.rfind("# ", 0) != 0) throw DataError(path + ": missing trace metadata line");

    std::string family_name;
    int J = 0, modalities = 0, variables = 0;
    bool relabeled = false;
    {
        std::istringstream meta(line.substr(2));
        std::string kv;
        while (meta >> kv) {
            const auto eq = kv.find('=');
            if (eq == std::string::npos) continue;
            const std::string key = kv.substr(0, eq);
            const std::string val = kv.substr(eq + 1);
            if (key == "family") family_name = val;
            else if (key == "J") J = std::stoi(val);
            else if (key == "modalities") modalities = std::stoi(val);
            else if (key == "variables") variables = std::stoi(val);
            else if (key == "relabeled") relabeled = (val == "true");
        }
    }
    if (family_name.empty() || J < 1) throw DataError(path + ": incomplete trace metadata");

    Trace trace;
    trace.family = family_from_name(family_name, std::max(modalities, variables));
    trace.relabeled = relabeled;

    if (!std::getline(in, line)) throw DataError(path + ": missing trace header");
    const int dim = J + J * trace.family.param_dim();

    std::size_t lineno = 2;
    while (std::getline(in, line)) {
        ++lineno;
        strip_cr(line);
        if (skippable(line)) continue;
        const auto cells = split_csv(line);
        if (static_cast<int>(cells.size()) != dim + 2)
            throw DataError(path + ":" + std::to_string(lineno) + ": wrong trace row arity");
        MixtureParams params;
        int c = 1;
        for (int j = 0; j < J; ++j) params.weights.push_back(parse_double(cells[c++], path, lineno));
        for (int j = 0; j < J; ++j) {
            std::vector<double> theta(trace.family.param_dim());
            for (double& v : theta) v = parse_double(cells[c++], path, lineno);
            params.components.push_back(std::move(theta));
        }
        trace.draws.push_back(std::move(params));
        trace.log_lik.push_back(parse_double(cells[c], path, lineno));
    }
    return trace;
}

void write_manifest(const std::string& path,
                    const std::vector<std::pair<std::string, std::string>>& entries) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write file: " + path);
    for (const auto& [key, value] : entries) out << key << "=" << value << "\n";
}

}  // namespace mixkit
