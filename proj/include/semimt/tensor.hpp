#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "semimt/errors.hpp"

namespace semimt {

// Dense row-major tensor of doubles. Everything in this codebase is rank 0
// (scalar), 1 (vector) or 2 (matrix).
class Tensor {
public:
    Tensor() = default;

    static Tensor scalar(double v) {
        Tensor t;
        t.rank_ = 0;
        t.v_.assign(1, v);
        return t;
    }

    static Tensor zeros(int n) {
        if (n <= 0) fail_data("tensor extent must be positive, got " + std::to_string(n));
        Tensor t;
        t.rank_ = 1;
        t.d0_ = n;
        t.v_.assign(static_cast<size_t>(n), 0.0);
        return t;
    }

    static Tensor zeros(int rows, int cols) {
        if (rows <= 0 || cols <= 0) fail_data("tensor extents must be positive");
        Tensor t;
        t.rank_ = 2;
        t.d0_ = rows;
        t.d1_ = cols;
        t.v_.assign(static_cast<size_t>(rows) * cols, 0.0);
        return t;
    }

    static Tensor from(std::vector<double> values) {
        Tensor t;
        t.rank_ = 1;
        t.d0_ = static_cast<int>(values.size());
        t.v_ = std::move(values);
        t.check_finite();
        return t;
    }

    static Tensor from(int rows, int cols, std::vector<double> values) {
        if (values.size() != static_cast<size_t>(rows) * cols)
            fail_data("tensor value count does not match shape");
        Tensor t;
        t.rank_ = 2;
        t.d0_ = rows;
        t.d1_ = cols;
        t.v_ = std::move(values);
        t.check_finite();
        return t;
    }

    int rank() const { return rank_; }
    int d0() const { return d0_; }
    int d1() const { return d1_; }
    size_t numel() const { return v_.size(); }

    std::vector<int> shape() const {
        if (rank_ == 0) return {};
        if (rank_ == 1) return {d0_};
        return {d0_, d1_};
    }

    bool same_shape(const Tensor& o) const {
        return rank_ == o.rank_ && d0_ == o.d0_ && d1_ == o.d1_;
    }

    double* data() { return v_.data(); }
    const double* data() const { return v_.data(); }

    double& operator[](size_t i) { return v_[i]; }
    double operator[](size_t i) const { return v_[i]; }

    double& at(int i, int j) { return v_[static_cast<size_t>(i) * d1_ + j]; }
    double at(int i, int j) const { return v_[static_cast<size_t>(i) * d1_ + j]; }

    void fill(double v) { std::fill(v_.begin(), v_.end(), v); }

    // Reshapes in place to the same element count; used only when a grad
    // buffer is recycled across nodes.
    void reset_like(const Tensor& o) {
        rank_ = o.rank_;
        d0_ = o.d0_;
        d1_ = o.d1_;
        v_.assign(o.v_.size(), 0.0);
    }

    bool finite() const {
        for (double x : v_)
            if (!std::isfinite(x)) return false;
        return true;
    }

    void check_finite() const {
        if (!finite()) fail_numeric("tensor contains a non-finite value");
    }

private:
    int rank_ = 0;
    int d0_ = 1;
    int d1_ = 1;
    std::vector<double> v_;
};

}  // namespace semimt
