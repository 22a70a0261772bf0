#include "ldpclp/dendro.hpp"

#include <numeric>
#include <stdexcept>

namespace ldpclp {

int DendroCode::num_punctured() const {
    int k = 0;
    for (auto p : punctured) k += p;
    return k;
}

DendroCode dendro_transform(const ParityCheckMatrix& h) {
    for (int a = 0; a < h.num_checks; ++a)
        if (h.rows[a].empty())
            throw std::invalid_argument("dendro_transform: check " + std::to_string(a) + " has degree 0");

    int extra = 0;
    for (int a = 0; a < h.num_checks; ++a) extra += std::max(static_cast<int>(h.rows[a].size()) - 3, 0);

    const int n2 = h.num_bits + extra;
    const int m2 = h.num_checks + extra;

    std::vector<std::vector<int>> rows(m2);
    std::vector<int> provenance(m2, -1);

    int next_aux_bit = h.num_bits;
    int next_aux_check = h.num_checks;
    for (int a = 0; a < h.num_checks; ++a) {
        const auto& bits = h.rows[a];
        const int q = static_cast<int>(bits.size());
        if (q <= 3) {
            rows[a] = bits;
            provenance[a] = a;
            continue;
        }
        // Chain: (b0,b1,t0), (t0,b2,t1), ..., (t_{q-4}, b_{q-2}, b_{q-1}),
        // with t_k carrying the parity of b0..b_{k+1}.
        int first_aux = next_aux_bit;
        next_aux_bit += q - 3;
        rows[a] = {bits[0], bits[1], first_aux};
        provenance[a] = a;
        for (int k = 1; k <= q - 3; ++k) {
            int t_prev = first_aux + k - 1;
            int check = next_aux_check++;
            provenance[check] = a;
            if (k < q - 3)
                rows[check] = {t_prev, bits[k + 1], t_prev + 1};
            else
                rows[check] = {t_prev, bits[q - 2], bits[q - 1]};
        }
    }

    DendroCode d;
    d.matrix = make_parity_check_matrix(n2, std::move(rows));
    d.punctured.assign(n2, 0);
    for (int i = h.num_bits; i < n2; ++i) d.punctured[i] = 1;
    d.origin_bits.resize(h.num_bits);
    std::iota(d.origin_bits.begin(), d.origin_bits.end(), 0);
    d.check_provenance = std::move(provenance);
    return d;
}

Codeword lift_codeword(const DendroCode& d, const Codeword& v) {
    const int n = static_cast<int>(d.origin_bits.size());
    if (static_cast<int>(v.size()) != n) throw std::invalid_argument("lift_codeword: length mismatch");

    const int n2 = d.matrix.num_bits;
    Codeword w(n2, 0);
    std::vector<std::uint8_t> known(n2, 0);
    for (int i = 0; i < n2; ++i) known[i] = !d.punctured[i];
    for (int i = 0; i < n; ++i) w[d.origin_bits[i]] = v[i];

    // Auxiliary bits sit on trees, so repeatedly resolving checks with a single
    // unknown bit fills them all; a contradiction or an unresolved bit means v
    // is not a codeword of the original code.
    bool progress = true;
    while (progress) {
        progress = false;
        for (int a = 0; a < d.matrix.num_checks; ++a) {
            int unknown = -1, unknown_count = 0;
            unsigned parity = 0;
            for (int i : d.matrix.rows[a]) {
                if (known[i])
                    parity ^= w[i];
                else {
                    unknown = i;
                    ++unknown_count;
                }
            }
            if (unknown_count == 1) {
                w[unknown] = static_cast<std::uint8_t>(parity & 1u);
                known[unknown] = 1;
                progress = true;
            } else if (unknown_count == 0 && (parity & 1u)) {
                throw std::invalid_argument("lift_codeword: input is not a codeword of the original code");
            }
        }
    }
    for (int i = 0; i < n2; ++i)
        if (!known[i]) throw std::logic_error("lift_codeword: unresolved auxiliary bit");
    if (!is_codeword(d.matrix, w))
        throw std::invalid_argument("lift_codeword: input is not a codeword of the original code");
    return w;
}

std::vector<double> project(const DendroCode& d, const std::vector<double>& w) {
    if (static_cast<int>(w.size()) != d.matrix.num_bits) throw std::invalid_argument("project: length mismatch");
    std::vector<double> out(d.origin_bits.size());
    for (std::size_t i = 0; i < d.origin_bits.size(); ++i) out[i] = w[d.origin_bits[i]];
    return out;
}

Codeword project_bits(const DendroCode& d, const Codeword& w) {
    if (static_cast<int>(w.size()) != d.matrix.num_bits) throw std::invalid_argument("project: length mismatch");
    Codeword out(d.origin_bits.size());
    for (std::size_t i = 0; i < d.origin_bits.size(); ++i) out[i] = w[d.origin_bits[i]];
    return out;
}

}  // namespace ldpclp
