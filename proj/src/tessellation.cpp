#include "vorgp/tessellation.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <cstring>

namespace vorgp {

Tessellation::Tessellation(Matrix centres, std::vector<std::vector<int>> blocks)
    : centres_(std::move(centres)), blocks_(std::move(blocks)) {
    const int k = static_cast<int>(centres_.rows());
    if (k < 1) {
        throw ArgumentError("Tessellation: need at least one centre");
    }
    for (const auto& b : blocks_) {
        if (b.empty()) {
            throw ArgumentError("Tessellation: empty block");
        }
    }
    // canonicalise: members ascending, blocks by smallest member
    for (auto& b : blocks_) {
        std::sort(b.begin(), b.end());
    }
    std::sort(blocks_.begin(), blocks_.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });

    region_of_centre_.assign(k, -1);
    for (int r = 0; r < static_cast<int>(blocks_.size()); ++r) {
        for (int cell : blocks_[r]) {
            if (cell < 0 || cell >= k || region_of_centre_[cell] != -1) {
                throw ArgumentError("Tessellation: blocks must partition the centres");
            }
            region_of_centre_[cell] = r;
        }
    }
    for (int c = 0; c < k; ++c) {
        if (region_of_centre_[c] == -1) {
            throw ArgumentError("Tessellation: blocks must cover all centres");
        }
    }
}

Tessellation Tessellation::single_cell(int dim) {
    Matrix c(1, dim);
    c.setConstant(0.5);
    return Tessellation(std::move(c), {{0}});
}

bool Tessellation::operator==(const Tessellation& other) const {
    return blocks_ == other.blocks_ && centres_.rows() == other.centres_.rows() &&
           centres_.cols() == other.centres_.cols() && centres_ == other.centres_;
}

std::string Tessellation::signature() const {
    std::string sig;
    sig.reserve(static_cast<size_t>(centres_.size()) * sizeof(double) + blocks_.size() * 8);
    sig.append(reinterpret_cast<const char*>(centres_.data()),
               static_cast<size_t>(centres_.size()) * sizeof(double));
    for (const auto& b : blocks_) {
        sig.push_back('|');
        for (int cell : b) {
            char buf[8];
            int len = std::snprintf(buf, sizeof buf, "%d,", cell);
            sig.append(buf, static_cast<size_t>(len));
        }
    }
    return sig;
}

int assign_cell(const Vector& x, const Matrix& centres) {
    if (centres.rows() < 1) {
        throw ArgumentError("assign_cell: empty centre list");
    }
    if (x.size() != centres.cols()) {
        throw ArgumentError("assign_cell: dimension mismatch");
    }
    int best = 0;
    double best_d2 = (centres.row(0).transpose() - x).squaredNorm();
    for (int i = 1; i < centres.rows(); ++i) {
        const double d2 = (centres.row(i).transpose() - x).squaredNorm();
        if (d2 < best_d2) {
            best_d2 = d2;
            best = i;
        }
    }
    return best;
}

int assign_region(const Vector& x, const Tessellation& tess) {
    return tess.region_of_centre(assign_cell(x, tess.centres()));
}

std::uint64_t bell_number(int k) {
    if (k < 1 || k > 25) {
        throw ArgumentError("bell_number: k must be in [1, 25]");
    }
    // Bell triangle: row i starts with the previous row's last entry and
    // ends with b_i.
    std::vector<std::uint64_t> row{1};
    for (int i = 1; i < k; ++i) {
        std::vector<std::uint64_t> next;
        next.reserve(row.size() + 1);
        next.push_back(row.back());
        for (std::uint64_t v : row) {
            next.push_back(next.back() + v);
        }
        row = std::move(next);
    }
    return row.back();
}

double log_bell_number(int k) {
    if (k < 1 || k > 64) {
        throw ArgumentError("log_bell_number: k must be in [1, 64]");
    }
    static const std::vector<double> table = [] {
        std::vector<double> logs(65, 0.0);
        std::vector<double> row{1.0};
        logs[1] = 0.0;
        double scale = 0.0;  // log of the factor divided out to avoid overflow
        for (int i = 2; i <= 64; ++i) {
            std::vector<double> next;
            next.reserve(row.size() + 1);
            next.push_back(row.back());
            for (double v : row) {
                next.push_back(next.back() + v);
            }
            row = std::move(next);
            const double mx = *std::max_element(row.begin(), row.end());
            for (double& v : row) {
                v /= mx;
            }
            scale += std::log(mx);
            logs[i] = scale + std::log(row.back());
        }
        return logs;
    }();
    return table[k];
}

RegionAssignment partition_data(const TrainingSet& data, const Tessellation& tess) {
    RegionAssignment out;
    out.region_of_point.resize(data.n());
    out.counts.assign(tess.r(), 0);
    for (int i = 0; i < data.n(); ++i) {
        const int region = tess.region_of_centre(assign_cell(data.inputs.row(i).transpose(), tess.centres()));
        out.region_of_point[i] = region;
        ++out.counts[region];
    }
    return out;
}

}  // namespace vorgp
