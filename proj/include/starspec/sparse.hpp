#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace starspec {

// Symmetric matrix in triplet form. Only the upper triangle is stored after
// finalize(); mirrored and duplicate insertions are folded together there.
class SparseSymMatrix {
  public:
    struct Entry {
        int row;
        int col;
        double value;
    };

    SparseSymMatrix() = default;

    explicit SparseSymMatrix(std::size_t dimension) : dim_(dimension) {}

    std::size_t dimension() const { return dim_; }
    bool finalized() const { return finalized_; }

    void add(int row, int col, double value) {
        if (finalized_)
            throw Error("SparseSymMatrix: add() after finalize()");
        check_index(row);
        check_index(col);
        if (row > col)
            std::swap(row, col);
        raw_.push_back({row, col, value});
    }

    void finalize() {
        if (finalized_)
            return;
        std::sort(raw_.begin(), raw_.end(), [](const Entry& a, const Entry& b) {
            return a.row != b.row ? a.row < b.row : a.col < b.col;
        });
        entries_.clear();
        for (const auto& e : raw_) {
            if (!entries_.empty() && entries_.back().row == e.row &&
                entries_.back().col == e.col)
                entries_.back().value += e.value;
            else
                entries_.push_back(e);
        }
        entries_.erase(std::remove_if(entries_.begin(), entries_.end(),
                                      [](const Entry& e) { return e.value == 0.0; }),
                       entries_.end());
        for (const auto& e : entries_) {
            if (!std::isfinite(e.value))
                throw BadMatrix("SparseSymMatrix: non-finite entry at (" +
                                std::to_string(e.row) + "," + std::to_string(e.col) +
                                ")");
        }
        raw_.clear();
        raw_.shrink_to_fit();
        finalized_ = true;
    }

    const std::vector<Entry>& entries() const {
        require_finalized("entries()");
        return entries_;
    }

    std::vector<double> apply(const std::vector<double>& x) const {
        require_finalized("apply()");
        if (x.size() != dim_)
            throw ShapeError("SparseSymMatrix: apply() expected a vector of length " +
                             std::to_string(dim_) + ", got " + std::to_string(x.size()));
        std::vector<double> y(dim_, 0.0);
        for (const auto& e : entries_) {
            y[e.row] += e.value * x[e.col];
            if (e.row != e.col)
                y[e.col] += e.value * x[e.row];
        }
        return y;
    }

    std::vector<double> to_dense() const {
        require_finalized("to_dense()");
        std::vector<double> d(dim_ * dim_, 0.0);
        for (const auto& e : entries_) {
            d[static_cast<std::size_t>(e.row) * dim_ + e.col] = e.value;
            d[static_cast<std::size_t>(e.col) * dim_ + e.row] = e.value;
        }
        return d;
    }

    double frobenius_norm() const {
        require_finalized("frobenius_norm()");
        long double acc = 0.0L;
        for (const auto& e : entries_) {
            long double v = e.value;
            acc += (e.row == e.col ? 1.0L : 2.0L) * v * v;
        }
        return static_cast<double>(sqrtl(acc));
    }

  private:
    void check_index(int i) const {
        if (i < 0 || static_cast<std::size_t>(i) >= dim_)
            throw OutOfBounds("SparseSymMatrix: index " + std::to_string(i) +
                              " outside dimension " + std::to_string(dim_));
    }

    void require_finalized(const char* what) const {
        if (!finalized_)
            throw Error(std::string("SparseSymMatrix: ") + what +
                        " called before finalize()");
    }

    std::size_t dim_ = 0;
    std::vector<Entry> raw_;
    std::vector<Entry> entries_;
    bool finalized_ = false;
};

}  // namespace starspec
