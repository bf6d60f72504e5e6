#include "vorgp/sobol.hpp"

namespace vorgp {

namespace {

constexpr int kBits = 32;

// Primitive polynomial degrees and interior coefficient encodings for
// dimensions 2..16, Joe-Kuo ordering.  Dimension 1 is the van der Corput
// sequence and is handled separately.
struct DimSpec {
    int degree;
    std::uint32_t poly;      // interior coefficients a_1..a_{s-1}
    std::uint32_t m[6];      // free direction integers m_1..m_s (odd)
};

const DimSpec kDims[] = {
    {1, 0, {1}},
    {2, 1, {1, 3}},
    {3, 1, {1, 3, 1}},
    {3, 2, {1, 1, 1}},
    {4, 1, {1, 1, 3, 3}},
    {4, 4, {1, 3, 5, 13}},
    {5, 2, {1, 1, 5, 5, 17}},
    {5, 4, {1, 1, 5, 5, 5}},
    {5, 7, {1, 1, 7, 11, 19}},
    {5, 11, {1, 1, 5, 1, 1}},
    {5, 13, {1, 1, 1, 3, 11}},
    {5, 14, {1, 3, 5, 5, 31}},
    {6, 1, {1, 3, 3, 9, 7, 49}},
    {6, 13, {1, 1, 1, 15, 21, 21}},
    {6, 16, {1, 3, 1, 13, 27, 49}},
};

int lowest_zero_bit(std::uint32_t v) {
    int pos = 0;
    while (v & 1u) {
        v >>= 1;
        ++pos;
    }
    return pos;
}

}  // namespace

SobolSequence::SobolSequence(int dim) : dim_(dim) {
    if (dim < 1 || dim > max_dim) {
        throw ArgumentError("SobolSequence: dimension must be in [1, 16]");
    }
    state_.assign(dim, 0u);
    dirs_.assign(dim, std::vector<std::uint32_t>(kBits, 0u));

    // dimension 1: v_j = 2^(32-j)
    for (int j = 0; j < kBits; ++j) {
        dirs_[0][j] = 1u << (kBits - 1 - j);
    }
    for (int k = 1; k < dim; ++k) {
        const DimSpec& spec = kDims[k - 1];
        const int s = spec.degree;
        for (int j = 0; j < s && j < kBits; ++j) {
            dirs_[k][j] = spec.m[j] << (kBits - 1 - j);
        }
        for (int j = s; j < kBits; ++j) {
            std::uint32_t v = dirs_[k][j - s] ^ (dirs_[k][j - s] >> s);
            for (int l = 1; l < s; ++l) {
                if ((spec.poly >> (s - 1 - l)) & 1u) {
                    v ^= dirs_[k][j - l];
                }
            }
            dirs_[k][j] = v;
        }
    }
}

Vector SobolSequence::next() {
    // Gray-code update; count_ = 0 corresponds to the skipped zero point.
    const int bit = lowest_zero_bit(count_);
    ++count_;
    Vector out(dim_);
    const double scale = 1.0 / 4294967296.0;  // 2^-32
    for (int k = 0; k < dim_; ++k) {
        state_[k] ^= dirs_[k][bit];
        out[k] = static_cast<double>(state_[k]) * scale;
    }
    return out;
}

Matrix sobol_points(int n, int d) {
    if (n < 1) {
        throw ArgumentError("sobol_points: n must be >= 1");
    }
    SobolSequence seq(d);
    Matrix out(n, d);
    for (int i = 0; i < n; ++i) {
        out.row(i) = seq.next().transpose();
    }
    return out;
}

}  // namespace vorgp
