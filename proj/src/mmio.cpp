#include "cosep/mmio.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cosep/error.hpp"

namespace cosep {

namespace {

std::string lower(std::string s)
{
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

bool blank(const std::string& line)
{
    return std::all_of(line.begin(), line.end(), [](unsigned char c) { return std::isspace(c); });
}

std::vector<std::string> tokens(const std::string& line)
{
    std::istringstream ss(line);
    std::vector<std::string> out;
    std::string t;
    while (ss >> t) out.push_back(t);
    return out;
}

double parse_real(const std::string& tok, std::size_t line)
{
    double v = 0.0;
    const char* first = tok.data();
    const char* last = tok.data() + tok.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last) throw ParseError("invalid number '" + tok + "'", line);
    return v;
}

long long parse_int(const std::string& tok, std::size_t line)
{
    long long v = 0;
    const char* first = tok.data();
    const char* last = tok.data() + tok.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last) throw ParseError("invalid integer '" + tok + "'", line);
    return v;
}

} // namespace

Matrix read_matrix_market(std::istream& in)
{
    std::string line;
    std::size_t lineno = 0;

    if (!std::getline(in, line)) throw ParseError("empty input", 1);
    ++lineno;
    const auto header = tokens(lower(line));
    if (header.size() != 5 || header[0] != "%%matrixmarket" || header[1] != "matrix") {
        throw ParseError("missing %%MatrixMarket matrix header", lineno);
    }
    const bool coordinate = header[2] == "coordinate";
    if (!coordinate && header[2] != "array") throw ParseError("unsupported format '" + header[2] + "'", lineno);
    if (header[3] != "real" && header[3] != "integer") {
        throw ParseError("unsupported field '" + header[3] + "'", lineno);
    }
    if (header[4] != "general") throw ParseError("unsupported symmetry '" + header[4] + "'", lineno);

    // size line
    std::vector<std::string> size_tok;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '%' || blank(line)) continue;
        size_tok = tokens(line);
        break;
    }
    if (size_tok.empty()) throw ParseError("missing size line", lineno + 1);
    if (size_tok.size() != (coordinate ? 3u : 2u)) throw ParseError("malformed size line", lineno);
    const long long rows = parse_int(size_tok[0], lineno);
    const long long cols = parse_int(size_tok[1], lineno);
    if (rows <= 0 || cols <= 0) throw ParseError("dimensions must be positive", lineno);
    const long long count = coordinate ? parse_int(size_tok[2], lineno) : rows * cols;
    if (count < 0) throw ParseError("negative entry count", lineno);

    Matrix M = Matrix::Zero(rows, cols);
    long long seen = 0;
    while (seen < count && std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '%' || blank(line)) continue;
        const auto t = tokens(line);
        if (coordinate) {
            if (t.size() != 3) throw ParseError("expected 'row col value'", lineno);
            const long long i = parse_int(t[0], lineno);
            const long long j = parse_int(t[1], lineno);
            if (i < 1 || i > rows || j < 1 || j > cols) throw ParseError("entry index out of range", lineno);
            M(i - 1, j - 1) += parse_real(t[2], lineno);
        } else {
            if (t.size() != 1) throw ParseError("expected a single value", lineno);
            const long long i = seen % rows;
            const long long j = seen / rows;
            M(i, j) = parse_real(t[0], lineno);
        }
        ++seen;
    }
    if (seen < count) {
        throw ParseError("expected " + std::to_string(count) + " entries, found " + std::to_string(seen), lineno + 1);
    }
    while (std::getline(in, line)) {
        ++lineno;
        if (!(line.empty() || line[0] == '%' || blank(line))) throw ParseError("trailing data after entries", lineno);
    }
    return M;
}

Matrix read_matrix_market(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path.string());
    try {
        return read_matrix_market(in);
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.what(), e.line());
    }
}

void write_matrix_market(std::ostream& out, const Matrix& M)
{
    out << "%%MatrixMarket matrix array real general\n";
    out << M.rows() << ' ' << M.cols() << '\n';
    char buf[64];
    for (Index j = 0; j < M.cols(); ++j) {
        for (Index i = 0; i < M.rows(); ++i) {
            auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), M(i, j), std::chars_format::general, 17);
            (void)ec;
            out.write(buf, ptr - buf);
            out.put('\n');
        }
    }
}

void write_matrix_market(const std::filesystem::path& path, const Matrix& M)
{
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path.string());
    write_matrix_market(out, M);
    if (!out) throw Error("write failed for " + path.string());
}

} // namespace cosep
