#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace ldpclp {

using Codeword = std::vector<std::uint8_t>;

/// Sparse binary parity-check matrix, stored checks-by-bits (M rows, N columns).
/// Row and column adjacency lists are kept consistent and sorted.
struct ParityCheckMatrix {
    int num_bits = 0;                    // N
    int num_checks = 0;                  // M
    std::vector<std::vector<int>> rows;  // per check: sorted bit indices
    std::vector<std::vector<int>> cols;  // per bit: sorted check indices

    int num_edges() const;
    int max_row_degree() const;
    int max_col_degree() const;
};

// Builds the matrix from row adjacency only; derives columns and validates
// (indices in range, no duplicates within a row).
ParityCheckMatrix make_parity_check_matrix(int num_bits, std::vector<std::vector<int>> rows);

ParityCheckMatrix parse_alist(std::istream& in);
ParityCheckMatrix parse_alist(const std::string& text);
ParityCheckMatrix load_alist_file(const std::string& path);

std::string write_alist(const ParityCheckMatrix& h);
void save_alist_file(const ParityCheckMatrix& h, const std::string& path);

std::vector<std::uint8_t> syndrome(const ParityCheckMatrix& h, const Codeword& v);
bool is_codeword(const ParityCheckMatrix& h, const Codeword& v);

// Exhaustive codeword set, ascending as binary numbers with bit 0 least significant.
// Guarded at num_bits <= 24.
std::vector<Codeword> enumerate_codewords(const ParityCheckMatrix& h);

// Minimizes sum_i h_i v_i over a precomputed codeword list; ties broken by
// lexicographic order of the bit vector (bit 0 most significant).
Codeword min_objective_codeword(const std::vector<Codeword>& codewords, const std::vector<double>& h);

// Brute-force block-MAP decoding, same guard as enumerate_codewords.
Codeword map_decode_bruteforce(const ParityCheckMatrix& h, const std::vector<double>& llr);

double codeword_objective(const Codeword& v, const std::vector<double>& h);

}  // namespace ldpclp
