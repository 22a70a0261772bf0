#pragma once

#include <cstdint>
#include <vector>

#include "ldpclp/parity_check.hpp"

namespace ldpclp {

/// Result of replacing every check of degree q > 3 by a chain of degree-3
/// checks with q-3 punctured auxiliary bits. Original bits keep their indices;
/// auxiliary bits are appended in check order. Check slot a < M holds the head
/// of check a's chain (or the verbatim check when q <= 3); the remaining chain
/// checks are appended after slot M, again in check order.
struct DendroCode {
    ParityCheckMatrix matrix;
    std::vector<std::uint8_t> punctured;  // length N': 1 for auxiliary bits
    std::vector<int> origin_bits;         // original bit -> transformed bit (identity prefix)
    std::vector<int> check_provenance;    // transformed check -> original check

    int num_punctured() const;
};

DendroCode dendro_transform(const ParityCheckMatrix& h);

// Unique extension of an original codeword to the transformed code; each
// auxiliary bit carries the running prefix parity of its chain.
Codeword lift_codeword(const DendroCode& d, const Codeword& v);

// Restriction of a transformed-length vector to the original bit positions.
std::vector<double> project(const DendroCode& d, const std::vector<double>& w);
Codeword project_bits(const DendroCode& d, const Codeword& w);

}  // namespace ldpclp
