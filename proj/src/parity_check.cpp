#include "ldpclp/parity_check.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace ldpclp {

int ParityCheckMatrix::num_edges() const {
    int e = 0;
    for (const auto& r : rows) e += static_cast<int>(r.size());
    return e;
}

int ParityCheckMatrix::max_row_degree() const {
    std::size_t d = 0;
    for (const auto& r : rows) d = std::max(d, r.size());
    return static_cast<int>(d);
}

int ParityCheckMatrix::max_col_degree() const {
    std::size_t d = 0;
    for (const auto& c : cols) d = std::max(d, c.size());
    return static_cast<int>(d);
}

ParityCheckMatrix make_parity_check_matrix(int num_bits, std::vector<std::vector<int>> rows) {
    if (num_bits <= 0) throw std::invalid_argument("parity check matrix: num_bits must be positive");
    if (rows.empty()) throw std::invalid_argument("parity check matrix: need at least one check");
    ParityCheckMatrix h;
    h.num_bits = num_bits;
    h.num_checks = static_cast<int>(rows.size());
    h.rows = std::move(rows);
    h.cols.assign(num_bits, {});
    for (int a = 0; a < h.num_checks; ++a) {
        auto& row = h.rows[a];
        std::sort(row.begin(), row.end());
        for (std::size_t k = 0; k < row.size(); ++k) {
            int i = row[k];
            if (i < 0 || i >= num_bits)
                throw std::invalid_argument("parity check matrix: bit index " + std::to_string(i) +
                                            " out of range in check " + std::to_string(a));
            if (k > 0 && row[k - 1] == i)
                throw std::invalid_argument("parity check matrix: repeated bit index " + std::to_string(i) +
                                            " in check " + std::to_string(a));
            h.cols[i].push_back(a);
        }
    }
    return h;
}

namespace {

[[noreturn]] void alist_error(int line, const std::string& what) {
    throw std::runtime_error("alist line " + std::to_string(line) + ": " + what);
}

// Splits the stream into lines of integers, tracking 1-based line numbers.
struct AlistLines {
    std::vector<std::vector<long>> tokens;
    std::vector<int> line_no;

    explicit AlistLines(std::istream& in) {
        std::string line;
        int no = 0;
        while (std::getline(in, line)) {
            ++no;
            std::vector<long> row;
            std::istringstream ls(line);
            std::string tok;
            while (ls >> tok) {
                try {
                    std::size_t pos = 0;
                    long v = std::stol(tok, &pos);
                    if (pos != tok.size()) throw std::invalid_argument(tok);
                    row.push_back(v);
                } catch (const std::exception&) {
                    alist_error(no, "not an integer: '" + tok + "'");
                }
            }
            if (!row.empty()) {
                tokens.push_back(std::move(row));
                line_no.push_back(no);
            }
        }
    }

    const std::vector<long>& at(std::size_t idx, const char* what) const {
        if (idx >= tokens.size()) {
            int last = line_no.empty() ? 1 : line_no.back();
            alist_error(last, std::string("unexpected end of file, missing ") + what);
        }
        return tokens[idx];
    }

    int line_of(std::size_t idx) const { return idx < line_no.size() ? line_no[idx] : (line_no.empty() ? 1 : line_no.back()); }
};

// Neighbor list line: zeros are padding and are dropped; the remaining entries
// must match the declared degree and stay within [1, limit].
std::vector<int> parse_neighbor_line(const std::vector<long>& toks, int line, long declared_degree, long max_degree,
                                     long limit, const char* kind) {
    if (static_cast<long>(toks.size()) > std::max(max_degree, declared_degree))
        alist_error(line, std::string(kind) + " list has " + std::to_string(toks.size()) +
                              " entries, more than the declared maximum degree " + std::to_string(max_degree));
    std::vector<int> out;
    for (long v : toks) {
        if (v == 0) continue;  // padding
        if (v < 1 || v > limit)
            alist_error(line, std::string(kind) + " neighbor index " + std::to_string(v) + " out of range [1, " +
                                  std::to_string(limit) + "]");
        out.push_back(static_cast<int>(v - 1));
    }
    if (static_cast<long>(out.size()) != declared_degree)
        alist_error(line, std::string(kind) + " list has " + std::to_string(out.size()) +
                              " neighbors but the declared degree is " + std::to_string(declared_degree));
    std::sort(out.begin(), out.end());
    for (std::size_t k = 1; k < out.size(); ++k)
        if (out[k] == out[k - 1]) alist_error(line, std::string(kind) + " list repeats index " + std::to_string(out[k] + 1));
    return out;
}

}  // namespace

ParityCheckMatrix parse_alist(std::istream& in) {
    AlistLines lines(in);

    const auto& header = lines.at(0, "header 'N M'");
    if (header.size() != 2) alist_error(lines.line_of(0), "malformed header, expected exactly 'N M'");
    long n = header[0], m = header[1];
    if (n <= 0 || m <= 0) alist_error(lines.line_of(0), "malformed header, N and M must be positive");

    const auto& maxdeg = lines.at(1, "header 'max_col_degree max_row_degree'");
    if (maxdeg.size() != 2) alist_error(lines.line_of(1), "malformed header, expected 'max_col_degree max_row_degree'");
    long max_col = maxdeg[0], max_row = maxdeg[1];
    if (max_col < 0 || max_col > m || max_row < 0 || max_row > n)
        alist_error(lines.line_of(1), "malformed header, maximum degrees out of range");

    const auto& col_deg = lines.at(2, "column degree list");
    if (static_cast<long>(col_deg.size()) != n)
        alist_error(lines.line_of(2), "expected " + std::to_string(n) + " column degrees, got " +
                                          std::to_string(col_deg.size()));
    const auto& row_deg = lines.at(3, "row degree list");
    if (static_cast<long>(row_deg.size()) != m)
        alist_error(lines.line_of(3), "expected " + std::to_string(m) + " row degrees, got " +
                                          std::to_string(row_deg.size()));
    for (long i = 0; i < n; ++i)
        if (col_deg[i] < 0 || col_deg[i] > max_col) alist_error(lines.line_of(2), "column degree out of range");
    for (long a = 0; a < m; ++a)
        if (row_deg[a] < 0 || row_deg[a] > max_row) alist_error(lines.line_of(3), "row degree out of range");

    std::size_t idx = 4;
    std::vector<std::vector<int>> cols(n), rows(m);
    for (long i = 0; i < n; ++i, ++idx) {
        if (col_deg[i] == 0) {
            // Unpadded files may omit the line entirely only at end of file; padded
            // files carry a line of zeros. Peek: if the next line is all zeros or we
            // are mid-file, consume it.
            if (idx < lines.tokens.size()) {
                const auto& toks = lines.tokens[idx];
                bool all_zero = std::all_of(toks.begin(), toks.end(), [](long v) { return v == 0; });
                if (!all_zero) {
                    --idx;  // line belongs to the next list
                    continue;
                }
            } else {
                --idx;
            }
            continue;
        }
        const auto& toks = lines.at(idx, "column neighbor list");
        cols[i] = parse_neighbor_line(toks, lines.line_of(idx), col_deg[i], max_col, m, "column");
    }
    for (long a = 0; a < m; ++a, ++idx) {
        if (row_deg[a] == 0) {
            if (idx < lines.tokens.size()) {
                const auto& toks = lines.tokens[idx];
                bool all_zero = std::all_of(toks.begin(), toks.end(), [](long v) { return v == 0; });
                if (!all_zero) {
                    --idx;
                    continue;
                }
            } else {
                --idx;
            }
            continue;
        }
        const auto& toks = lines.at(idx, "row neighbor list");
        rows[a] = parse_neighbor_line(toks, lines.line_of(idx), row_deg[a], max_row, n, "row");
    }
    if (idx < lines.tokens.size()) alist_error(lines.line_of(idx), "trailing content after the last neighbor list");

    // Cross-check that both adjacency sections describe the same incidence.
    std::vector<std::vector<int>> cols_from_rows(n);
    for (long a = 0; a < m; ++a)
        for (int i : rows[a]) cols_from_rows[i].push_back(static_cast<int>(a));
    for (long i = 0; i < n; ++i)
        if (cols_from_rows[i] != cols[i])
            throw std::runtime_error("alist: row and column sections disagree about bit " + std::to_string(i + 1));

    ParityCheckMatrix h;
    h.num_bits = static_cast<int>(n);
    h.num_checks = static_cast<int>(m);
    h.rows = std::move(rows);
    h.cols = std::move(cols);
    return h;
}

ParityCheckMatrix parse_alist(const std::string& text) {
    std::istringstream in(text);
    return parse_alist(in);
}

ParityCheckMatrix load_alist_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open alist file: " + path);
    return parse_alist(in);
}

std::string write_alist(const ParityCheckMatrix& h) {
    for (int a = 0; a < h.num_checks; ++a)
        if (h.rows[a].empty())
            throw std::invalid_argument("write_alist: check " + std::to_string(a) + " has no bits (degenerate code)");
    std::ostringstream out;
    out << h.num_bits << ' ' << h.num_checks << '\n';
    out << h.max_col_degree() << ' ' << h.max_row_degree() << '\n';
    for (int i = 0; i < h.num_bits; ++i) out << h.cols[i].size() << (i + 1 < h.num_bits ? ' ' : '\n');
    for (int a = 0; a < h.num_checks; ++a) out << h.rows[a].size() << (a + 1 < h.num_checks ? ' ' : '\n');
    for (int i = 0; i < h.num_bits; ++i) {
        for (std::size_t k = 0; k < h.cols[i].size(); ++k) out << h.cols[i][k] + 1 << (k + 1 < h.cols[i].size() ? " " : "");
        out << '\n';
    }
    for (int a = 0; a < h.num_checks; ++a) {
        for (std::size_t k = 0; k < h.rows[a].size(); ++k) out << h.rows[a][k] + 1 << (k + 1 < h.rows[a].size() ? " " : "");
        out << '\n';
    }
    return out.str();
}

void save_alist_file(const ParityCheckMatrix& h, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open file for writing: " + path);
    out << write_alist(h);
    if (!out) throw std::runtime_error("failed writing alist file: " + path);
}

std::vector<std::uint8_t> syndrome(const ParityCheckMatrix& h, const Codeword& v) {
    if (static_cast<int>(v.size()) != h.num_bits)
        throw std::invalid_argument("syndrome: vector length " + std::to_string(v.size()) + " != num_bits " +
                                    std::to_string(h.num_bits));
    std::vector<std::uint8_t> s(h.num_checks, 0);
    for (int a = 0; a < h.num_checks; ++a) {
        unsigned p = 0;
        for (int i : h.rows[a]) p ^= v[i];
        s[a] = static_cast<std::uint8_t>(p & 1u);
    }
    return s;
}

bool is_codeword(const ParityCheckMatrix& h, const Codeword& v) {
    auto s = syndrome(h, v);
    return std::all_of(s.begin(), s.end(), [](std::uint8_t b) { return b == 0; });
}

namespace {

constexpr int kBruteForceBitLimit = 24;

void check_bruteforce_guard(const ParityCheckMatrix& h, const char* op) {
    if (h.num_bits > kBruteForceBitLimit)
        throw std::invalid_argument(std::string(op) + ": num_bits " + std::to_string(h.num_bits) +
                                    " exceeds the brute-force guard of " + std::to_string(kBruteForceBitLimit));
}

std::vector<std::uint32_t> row_masks(const ParityCheckMatrix& h) {
    std::vector<std::uint32_t> masks(h.num_checks, 0);
    for (int a = 0; a < h.num_checks; ++a)
        for (int i : h.rows[a]) masks[a] |= (std::uint32_t{1} << i);
    return masks;
}

}  // namespace

std::vector<Codeword> enumerate_codewords(const ParityCheckMatrix& h) {
    check_bruteforce_guard(h, "enumerate_codewords");
    const auto masks = row_masks(h);
    std::vector<Codeword> out;
    const std::uint32_t end = std::uint32_t{1} << h.num_bits;
    for (std::uint32_t v = 0; v < end; ++v) {
        bool ok = true;
        for (std::uint32_t mask : masks) {
            if (std::popcount(v & mask) & 1) {
                ok = false;
                break;
            }
        }
        if (!ok) continue;
        Codeword w(h.num_bits, 0);
        for (int i = 0; i < h.num_bits; ++i) w[i] = static_cast<std::uint8_t>((v >> i) & 1u);
        out.push_back(std::move(w));
    }
    return out;
}

double codeword_objective(const Codeword& v, const std::vector<double>& h) {
    if (v.size() != h.size()) throw std::invalid_argument("codeword_objective: length mismatch");
    double obj = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i)
        if (v[i]) obj += h[i];
    return obj;
}

Codeword min_objective_codeword(const std::vector<Codeword>& codewords, const std::vector<double>& h) {
    if (codewords.empty()) throw std::invalid_argument("min_objective_codeword: empty codeword list");
    const Codeword* best = &codewords.front();
    double best_obj = codeword_objective(*best, h);
    for (const auto& c : codewords) {
        double obj = codeword_objective(c, h);
        if (obj < best_obj || (obj == best_obj && c < *best)) {
            best = &c;
            best_obj = obj;
        }
    }
    return *best;
}

Codeword map_decode_bruteforce(const ParityCheckMatrix& h, const std::vector<double>& llr) {
    check_bruteforce_guard(h, "map_decode_bruteforce");
    if (static_cast<int>(llr.size()) != h.num_bits) throw std::invalid_argument("map_decode_bruteforce: LLR length mismatch");
    return min_objective_codeword(enumerate_codewords(h), llr);
}

}  // namespace ldpclp
