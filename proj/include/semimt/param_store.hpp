#pragma once

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "semimt/errors.hpp"
#include "semimt/rng.hpp"
#include "semimt/tensor.hpp"

namespace semimt {

// Gradient accumulators shaped like a ParameterStore. Thread-private copies
// of this are what batch kernels write into before the ordered merge.
struct GradStore {
    std::vector<Tensor> g;

    void ensure_like(const std::vector<Tensor>& values) {
        if (g.size() == values.size()) return;
        g.clear();
        g.reserve(values.size());
        for (const Tensor& v : values) {
            Tensor t;
            t.reset_like(v);
            g.push_back(std::move(t));
        }
    }

    void ensure_like_of(const GradStore& other) { ensure_like(other.g); }

    void clear() {
        for (Tensor& t : g) t.fill(0.0);
    }

    void merge(const GradStore& other) {
        for (size_t p = 0; p < g.size(); ++p) {
            Tensor& dst = g[p];
            const Tensor& src = other.g[p];
            for (size_t i = 0; i < dst.numel(); ++i) dst[i] += src[i];
        }
    }
};

// Named parameter tensors plus one gradient accumulator per parameter.
class ParameterStore {
public:
    int add(const std::string& name, Tensor value) {
        if (index_.count(name)) fail_data("duplicate parameter name: " + name);
        value.check_finite();
        int idx = static_cast<int>(values_.size());
        index_[name] = idx;
        names_.push_back(name);
        Tensor g;
        g.reset_like(value);
        grads_.g.push_back(std::move(g));
        values_.push_back(std::move(value));
        return idx;
    }

    int find(const std::string& name) const {
        auto it = index_.find(name);
        if (it == index_.end()) fail_data("unknown parameter: " + name);
        return it->second;
    }

    bool contains(const std::string& name) const { return index_.count(name) != 0; }

    int size() const { return static_cast<int>(values_.size()); }
    const std::string& name(int i) const { return names_[i]; }

    Tensor& value(int i) { return values_[i]; }
    const Tensor& value(int i) const { return values_[i]; }
    Tensor& grad(int i) { return grads_.g[i]; }
    const Tensor& grad(int i) const { return grads_.g[i]; }

    const std::vector<Tensor>& values() const { return values_; }
    GradStore& grads() { return grads_; }
    const GradStore& grads() const { return grads_; }

    void zero_grads() { grads_.clear(); }

    void accumulate(const GradStore& other, double scale = 1.0) {
        for (size_t p = 0; p < grads_.g.size(); ++p) {
            Tensor& dst = grads_.g[p];
            const Tensor& src = other.g[p];
            for (size_t i = 0; i < dst.numel(); ++i) dst[i] += scale * src[i];
        }
    }

    double grad_sq_sum() const {
        double s = 0.0;
        for (const Tensor& t : grads_.g)
            for (size_t i = 0; i < t.numel(); ++i) s += t[i] * t[i];
        return s;
    }

    double grad_max_abs() const {
        double m = 0.0;
        for (const Tensor& t : grads_.g)
            for (size_t i = 0; i < t.numel(); ++i) m = std::max(m, std::fabs(t[i]));
        return m;
    }

    void init_uniform(Rng& rng, double lo, double hi) {
        for (Tensor& t : values_)
            for (size_t i = 0; i < t.numel(); ++i) t[i] = rng.uniform(lo, hi);
    }

private:
    std::map<std::string, int> index_;
    std::vector<std::string> names_;
    std::vector<Tensor> values_;
    GradStore grads_;
};

enum class ClipNorm { l2, linf };

struct StepResult {
    double grad_norm = 0.0;
    bool clipped = false;
};

// Rescales the whole gradient to `clip` when its global norm exceeds it,
// applies one SGD step, and zeroes the accumulators.
inline StepResult clip_and_step(ParameterStore& store, double lr, double clip,
                                ClipNorm norm = ClipNorm::l2) {
    if (!(lr > 0.0)) fail_data("learning rate must be positive");
    if (!(clip > 0.0)) fail_data("clip threshold must be positive");
    StepResult r;
    r.grad_norm = norm == ClipNorm::l2 ? std::sqrt(store.grad_sq_sum()) : store.grad_max_abs();
    if (!std::isfinite(r.grad_norm)) fail_numeric("non-finite gradient norm");
    double scale = 1.0;
    if (r.grad_norm > clip) {
        scale = clip / r.grad_norm;
        r.clipped = true;
    }
    for (int p = 0; p < store.size(); ++p) {
        Tensor& v = store.value(p);
        const Tensor& g = store.grad(p);
        for (size_t i = 0; i < v.numel(); ++i) v[i] -= lr * scale * g[i];
    }
    store.zero_grads();
    return r;
}

}  // namespace semimt
