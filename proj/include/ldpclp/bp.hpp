#pragma once

#include <cstdint>
#include <vector>

#include "ldpclp/channel.hpp"
#include "ldpclp/parity_check.hpp"

namespace ldpclp {

struct BpOptions {
    int max_iters = 1024;
    double clamp = 50.0;  // message magnitude cap in LLR units
};

struct BpResult {
    Codeword hard;        // sign decision on posterior LLRs
    bool converged = false;
    int iterations = 0;   // iterations actually run
};

/// Sum-product decoding in the log domain with a flooding schedule; stops as
/// soon as the hard decision satisfies every check. Punctured bits simply
/// arrive with zero LLR.
BpResult bp_decode(const ParityCheckMatrix& h, const LlrVector& llr, const BpOptions& opts = {});

}  // namespace ldpclp
