#include "semimt/graph.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "semimt/errors.hpp"

namespace semimt {

namespace {

void require(bool cond, const std::string& msg) {
    if (!cond) fail_data(msg);
}

double stable_sigmoid(double x) {
    if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
    double e = std::exp(x);
    return e / (1.0 + e);
}

}  // namespace

int Graph::bind(const ParameterStore& store, GradStore& sink) {
    sink.ensure_like(store.values());
    Binding b;
    b.store = &store;
    b.sink = &sink;
    b.param_nodes.assign(store.size(), -1);
    bindings_.push_back(std::move(b));
    return static_cast<int>(bindings_.size()) - 1;
}

NodeRef Graph::push(Node n) {
    nodes_.push_back(std::move(n));
    return NodeRef{static_cast<int32_t>(nodes_.size()) - 1};
}

Tensor& Graph::grd(int32_t id) {
    Node& n = nodes_[id];
    if (!n.grad.same_shape(n.value) || n.grad.numel() != n.value.numel())
        n.grad.reset_like(n.value);
    return n.grad;
}

NodeRef Graph::constant(Tensor t) {
    t.check_finite();
    Node n;
    n.op = Op::constant;
    n.value = std::move(t);
    return push(std::move(n));
}

NodeRef Graph::scalar(double v) { return constant(Tensor::scalar(v)); }

NodeRef Graph::param(int slot, int param_index) {
    Binding& b = bindings_.at(slot);
    int32_t& cached = b.param_nodes.at(param_index);
    if (cached >= 0) return NodeRef{cached};
    Node n;
    n.op = Op::param;
    n.aux_i = slot;
    n.aux_j = param_index;
    n.value = b.store->value(param_index);
    NodeRef r = push(std::move(n));
    cached = r.id;
    return r;
}

void Graph::check_vector(NodeRef r, const char* who) const {
    require(r.valid() && val(r.id).rank() == 1, std::string(who) + ": vector operand expected");
}

NodeRef Graph::affine(NodeRef W, NodeRef x, NodeRef b) {
    const Tensor& w = val(W.id);
    const Tensor& xv = val(x.id);
    const Tensor& bv = val(b.id);
    require(w.rank() == 2 && xv.rank() == 1 && bv.rank() == 1, "affine: W[m,n], x[n], b[m]");
    require(w.d1() == xv.d0() && w.d0() == bv.d0(), "affine: shape mismatch");
    Node n;
    n.op = Op::affine;
    n.in0 = W.id;
    n.in1 = x.id;
    n.in2 = b.id;
    n.value = Tensor::zeros(w.d0());
    for (int i = 0; i < w.d0(); ++i) {
        const double* wrow = w.data() + static_cast<size_t>(i) * w.d1();
        double acc = bv[i];
        for (int j = 0; j < w.d1(); ++j) acc += wrow[j] * xv[j];
        n.value[i] = acc;
    }
    return push(std::move(n));
}

NodeRef Graph::matvec(NodeRef A, NodeRef x) {
    const Tensor& a = val(A.id);
    const Tensor& xv = val(x.id);
    require(a.rank() == 2 && xv.rank() == 1 && a.d1() == xv.d0(), "matvec: A[m,n], x[n]");
    Node n;
    n.op = Op::matvec;
    n.in0 = A.id;
    n.in1 = x.id;
    n.value = Tensor::zeros(a.d0());
    for (int i = 0; i < a.d0(); ++i) {
        const double* arow = a.data() + static_cast<size_t>(i) * a.d1();
        double acc = 0.0;
        for (int j = 0; j < a.d1(); ++j) acc += arow[j] * xv[j];
        n.value[i] = acc;
    }
    return push(std::move(n));
}

NodeRef Graph::matvec_t(NodeRef A, NodeRef x) {
    const Tensor& a = val(A.id);
    const Tensor& xv = val(x.id);
    require(a.rank() == 2 && xv.rank() == 1 && a.d0() == xv.d0(), "matvec_t: A[m,n], x[m]");
    Node n;
    n.op = Op::matvec_t;
    n.in0 = A.id;
    n.in1 = x.id;
    n.value = Tensor::zeros(a.d1());
    for (int i = 0; i < a.d0(); ++i) {
        const double* arow = a.data() + static_cast<size_t>(i) * a.d1();
        double xi = xv[i];
        for (int j = 0; j < a.d1(); ++j) n.value[j] += arow[j] * xi;
    }
    return push(std::move(n));
}

NodeRef Graph::embed(NodeRef E, int row) {
    const Tensor& e = val(E.id);
    require(e.rank() == 2, "embed: E[V,d] expected");
    require(row >= 0 && row < e.d0(), "embed: row index out of range");
    Node n;
    n.op = Op::embed;
    n.in0 = E.id;
    n.aux_i = row;
    n.value = Tensor::zeros(e.d1());
    const double* src = e.data() + static_cast<size_t>(row) * e.d1();
    std::copy(src, src + e.d1(), n.value.data());
    return push(std::move(n));
}

NodeRef Graph::tanh(NodeRef x) {
    Node n;
    n.op = Op::tanh_fn;
    n.in0 = x.id;
    n.value = val(x.id);
    for (size_t i = 0; i < n.value.numel(); ++i) n.value[i] = std::tanh(n.value[i]);
    return push(std::move(n));
}

NodeRef Graph::sigmoid(NodeRef x) {
    Node n;
    n.op = Op::sigmoid_fn;
    n.in0 = x.id;
    n.value = val(x.id);
    for (size_t i = 0; i < n.value.numel(); ++i) n.value[i] = stable_sigmoid(n.value[i]);
    return push(std::move(n));
}

NodeRef Graph::add(NodeRef a, NodeRef b) {
    const Tensor& av = val(a.id);
    const Tensor& bv = val(b.id);
    require(av.same_shape(bv), "add: shape mismatch");
    Node n;
    n.op = Op::add;
    n.in0 = a.id;
    n.in1 = b.id;
    n.value = av;
    for (size_t i = 0; i < n.value.numel(); ++i) n.value[i] += bv[i];
    return push(std::move(n));
}

NodeRef Graph::mul(NodeRef a, NodeRef b) {
    const Tensor& av = val(a.id);
    const Tensor& bv = val(b.id);
    require(av.same_shape(bv), "mul: shape mismatch");
    Node n;
    n.op = Op::mul;
    n.in0 = a.id;
    n.in1 = b.id;
    n.value = av;
    for (size_t i = 0; i < n.value.numel(); ++i) n.value[i] *= bv[i];
    return push(std::move(n));
}

NodeRef Graph::scale_shift(NodeRef x, double alpha, double beta) {
    Node n;
    n.op = Op::scale_shift;
    n.in0 = x.id;
    n.alpha = alpha;
    n.beta = beta;
    n.value = val(x.id);
    for (size_t i = 0; i < n.value.numel(); ++i) n.value[i] = alpha * n.value[i] + beta;
    return push(std::move(n));
}

NodeRef Graph::concat(NodeRef a, NodeRef b) {
    check_vector(a, "concat");
    check_vector(b, "concat");
    const Tensor& av = val(a.id);
    const Tensor& bv = val(b.id);
    Node n;
    n.op = Op::concat;
    n.in0 = a.id;
    n.in1 = b.id;
    n.value = Tensor::zeros(av.d0() + bv.d0());
    std::copy(av.data(), av.data() + av.d0(), n.value.data());
    std::copy(bv.data(), bv.data() + bv.d0(), n.value.data() + av.d0());
    return push(std::move(n));
}

NodeRef Graph::add_rowvec(NodeRef M, NodeRef r) {
    const Tensor& m = val(M.id);
    const Tensor& rv = val(r.id);
    require(m.rank() == 2 && rv.rank() == 1 && m.d1() == rv.d0(), "add_rowvec: M[t,d], r[d]");
    Node n;
    n.op = Op::add_rowvec;
    n.in0 = M.id;
    n.in1 = r.id;
    n.value = m;
    for (int i = 0; i < m.d0(); ++i)
        for (int j = 0; j < m.d1(); ++j) n.value.at(i, j) += rv[j];
    return push(std::move(n));
}

NodeRef Graph::stack_rows(std::span<const NodeRef> rows) {
    require(!rows.empty(), "stack_rows: needs at least one row");
    int d = val(rows[0].id).d0();
    for (NodeRef r : rows) {
        check_vector(r, "stack_rows");
        require(val(r.id).d0() == d, "stack_rows: row length mismatch");
    }
    Node n;
    n.op = Op::stack_rows;
    n.vin_off = static_cast<int32_t>(vin_.size());
    n.vin_len = static_cast<int32_t>(rows.size());
    for (NodeRef r : rows) vin_.push_back(r.id);
    n.value = Tensor::zeros(static_cast<int>(rows.size()), d);
    for (size_t i = 0; i < rows.size(); ++i) {
        const Tensor& rv = val(rows[i].id);
        std::copy(rv.data(), rv.data() + d, n.value.data() + i * d);
    }
    return push(std::move(n));
}

NodeRef Graph::softmax(NodeRef x) {
    check_vector(x, "softmax");
    const Tensor& xv = val(x.id);
    Node n;
    n.op = Op::softmax;
    n.in0 = x.id;
    n.value = xv;
    double m = n.value[0];
    for (size_t i = 1; i < n.value.numel(); ++i) m = std::max(m, n.value[i]);
    double s = 0.0;
    for (size_t i = 0; i < n.value.numel(); ++i) {
        n.value[i] = std::exp(n.value[i] - m);
        s += n.value[i];
    }
    for (size_t i = 0; i < n.value.numel(); ++i) n.value[i] /= s;
    return push(std::move(n));
}

NodeRef Graph::log_softmax(NodeRef x) {
    check_vector(x, "log_softmax");
    const Tensor& xv = val(x.id);
    Node n;
    n.op = Op::log_softmax;
    n.in0 = x.id;
    n.value = xv;
    double m = n.value[0];
    for (size_t i = 1; i < n.value.numel(); ++i) m = std::max(m, n.value[i]);
    double s = 0.0;
    for (size_t i = 0; i < n.value.numel(); ++i) s += std::exp(n.value[i] - m);
    double lse = m + std::log(s);
    for (size_t i = 0; i < n.value.numel(); ++i) n.value[i] -= lse;
    return push(std::move(n));
}

NodeRef Graph::cross_entropy(NodeRef logits, int index) {
    check_vector(logits, "cross_entropy");
    const Tensor& xv = val(logits.id);
    require(index >= 0 && index < xv.d0(), "cross_entropy: target index out of range");
    Node n;
    n.op = Op::cross_entropy;
    n.in0 = logits.id;
    n.aux_i = index;
    Tensor probs = xv;
    double m = probs[0];
    for (size_t i = 1; i < probs.numel(); ++i) m = std::max(m, probs[i]);
    double s = 0.0;
    for (size_t i = 0; i < probs.numel(); ++i) {
        probs[i] = std::exp(probs[i] - m);
        s += probs[i];
    }
    for (size_t i = 0; i < probs.numel(); ++i) probs[i] /= s;
    n.value = Tensor::scalar(-(xv[index] - m - std::log(s)));
    n.cache.push_back(std::move(probs));
    return push(std::move(n));
}

NodeRef Graph::pick(NodeRef x, int index) {
    check_vector(x, "pick");
    const Tensor& xv = val(x.id);
    require(index >= 0 && index < xv.d0(), "pick: index out of range");
    Node n;
    n.op = Op::pick;
    n.in0 = x.id;
    n.aux_i = index;
    n.value = Tensor::scalar(xv[index]);
    return push(std::move(n));
}

NodeRef Graph::sum(NodeRef x) {
    Node n;
    n.op = Op::sum;
    n.in0 = x.id;
    double s = 0.0;
    const Tensor& xv = val(x.id);
    for (size_t i = 0; i < xv.numel(); ++i) s += xv[i];
    n.value = Tensor::scalar(s);
    return push(std::move(n));
}

NodeRef Graph::gru_cell(NodeRef x, NodeRef h, NodeRef Wz, NodeRef Uz, NodeRef bz, NodeRef Wr,
                        NodeRef Ur, NodeRef br, NodeRef Wc, NodeRef Uc, NodeRef bc) {
    const Tensor& xv = val(x.id);
    const Tensor& hv = val(h.id);
    require(xv.rank() == 1 && hv.rank() == 1, "gru_cell: vector inputs expected");
    const int I = xv.d0();
    const int H = hv.d0();
    auto check_gate = [&](NodeRef W, NodeRef U, NodeRef b) {
        const Tensor& w = val(W.id);
        const Tensor& u = val(U.id);
        const Tensor& bb = val(b.id);
        require(w.rank() == 2 && w.d0() == H && w.d1() == I, "gru_cell: W[H,I] expected");
        require(u.rank() == 2 && u.d0() == H && u.d1() == H, "gru_cell: U[H,H] expected");
        require(bb.rank() == 1 && bb.d0() == H, "gru_cell: b[H] expected");
    };
    check_gate(Wz, Uz, bz);
    check_gate(Wr, Ur, br);
    check_gate(Wc, Uc, bc);

    Node n;
    n.op = Op::gru_cell;
    n.vin_off = static_cast<int32_t>(vin_.size());
    n.vin_len = 11;
    for (NodeRef r : {x, h, Wz, Uz, bz, Wr, Ur, br, Wc, Uc, bc}) vin_.push_back(r.id);

    auto gate_pre = [&](NodeRef W, NodeRef U, NodeRef b, const Tensor& hin) {
        const Tensor& w = val(W.id);
        const Tensor& u = val(U.id);
        const Tensor& bb = val(b.id);
        Tensor out = Tensor::zeros(H);
        for (int i = 0; i < H; ++i) {
            const double* wrow = w.data() + static_cast<size_t>(i) * I;
            const double* urow = u.data() + static_cast<size_t>(i) * H;
            double acc = bb[i];
            for (int j = 0; j < I; ++j) acc += wrow[j] * xv[j];
            for (int j = 0; j < H; ++j) acc += urow[j] * hin[j];
            out[i] = acc;
        }
        return out;
    };

    Tensor z = gate_pre(Wz, Uz, bz, hv);
    Tensor r = gate_pre(Wr, Ur, br, hv);
    for (int i = 0; i < H; ++i) {
        z[i] = stable_sigmoid(z[i]);
        r[i] = stable_sigmoid(r[i]);
    }
    Tensor rh = Tensor::zeros(H);
    for (int i = 0; i < H; ++i) rh[i] = r[i] * hv[i];
    Tensor hbar = gate_pre(Wc, Uc, bc, rh);
    for (int i = 0; i < H; ++i) hbar[i] = std::tanh(hbar[i]);

    n.value = Tensor::zeros(H);
    for (int i = 0; i < H; ++i) n.value[i] = (1.0 - z[i]) * hv[i] + z[i] * hbar[i];
    n.cache.reserve(4);
    n.cache.push_back(std::move(z));
    n.cache.push_back(std::move(r));
    n.cache.push_back(std::move(hbar));
    n.cache.push_back(std::move(rh));
    return push(std::move(n));
}

NodeRef Graph::logsumexp(std::span<const NodeRef> terms) {
    require(!terms.empty(), "logsumexp: needs at least one term");
    for (NodeRef t : terms) require(val(t.id).numel() == 1, "logsumexp: scalar terms expected");
    Node n;
    n.op = Op::logsumexp;
    n.vin_off = static_cast<int32_t>(vin_.size());
    n.vin_len = static_cast<int32_t>(terms.size());
    double m = val(terms[0].id)[0];
    for (NodeRef t : terms) {
        m = std::max(m, val(t.id)[0]);
        vin_.push_back(t.id);
    }
    double s = 0.0;
    for (NodeRef t : terms) s += std::exp(val(t.id)[0] - m);
    n.value = Tensor::scalar(m + std::log(s));
    return push(std::move(n));
}

NodeRef Graph::lincomb(std::span<const NodeRef> terms, std::span<const double> coeffs) {
    require(!terms.empty() && terms.size() == coeffs.size(), "lincomb: term/coeff count mismatch");
    for (NodeRef t : terms) require(val(t.id).numel() == 1, "lincomb: scalar terms expected");
    Node n;
    n.op = Op::lincomb;
    n.vin_off = static_cast<int32_t>(vin_.size());
    n.vin_len = static_cast<int32_t>(terms.size());
    double s = 0.0;
    for (size_t i = 0; i < terms.size(); ++i) {
        vin_.push_back(terms[i].id);
        s += coeffs[i] * val(terms[i].id)[0];
    }
    n.coeffs.assign(coeffs.begin(), coeffs.end());
    n.value = Tensor::scalar(s);
    return push(std::move(n));
}

double Graph::scalar_value(NodeRef n) const {
    require(n.valid() && val(n.id).numel() == 1, "scalar_value: scalar node expected");
    return val(n.id)[0];
}

void Graph::backward(NodeRef loss) {
    if (nodes_.empty() || !loss.valid() || loss.id >= static_cast<int32_t>(nodes_.size()))
        fail_data("backward called before a forward pass was recorded");
    if (nodes_[loss.id].value.numel() != 1) fail_data("backward: loss must be scalar");

    // Node-local grads are zeroed per call; parameter sinks accumulate.
    for (int32_t i = 0; i <= loss.id; ++i) {
        Node& n = nodes_[i];
        n.grad.reset_like(n.value);
    }
    nodes_[loss.id].grad[0] = 1.0;
    grads_ready_ = true;

    for (int32_t i = loss.id; i >= 0; --i) backward_node(i);

    for (Binding& b : bindings_) {
        for (int p = 0; p < b.store->size(); ++p) {
            int32_t nid = b.param_nodes[p];
            if (nid < 0 || nid > loss.id) continue;
            const Tensor& g = nodes_[nid].grad;
            Tensor& dst = b.sink->g[p];
            for (size_t k = 0; k < dst.numel(); ++k) dst[k] += g[k];
        }
    }
}

void Graph::backward_node(int32_t id) {
    Node& n = nodes_[id];
    const Tensor& g = n.grad;
    switch (n.op) {
        case Op::constant:
        case Op::param:
            break;
        case Op::affine: {
            const Tensor& w = val(n.in0);
            const Tensor& xv = val(n.in1);
            Tensor& dW = grd(n.in0);
            Tensor& dx = grd(n.in1);
            Tensor& db = grd(n.in2);
            for (int i = 0; i < w.d0(); ++i) {
                double gi = g[i];
                db[i] += gi;
                double* dwrow = dW.data() + static_cast<size_t>(i) * w.d1();
                const double* wrow = w.data() + static_cast<size_t>(i) * w.d1();
                for (int j = 0; j < w.d1(); ++j) {
                    dwrow[j] += gi * xv[j];
                    dx[j] += wrow[j] * gi;
                }
            }
            break;
        }
        case Op::matvec: {
            const Tensor& a = val(n.in0);
            const Tensor& xv = val(n.in1);
            Tensor& dA = grd(n.in0);
            Tensor& dx = grd(n.in1);
            for (int i = 0; i < a.d0(); ++i) {
                double gi = g[i];
                double* darow = dA.data() + static_cast<size_t>(i) * a.d1();
                const double* arow = a.data() + static_cast<size_t>(i) * a.d1();
                for (int j = 0; j < a.d1(); ++j) {
                    darow[j] += gi * xv[j];
                    dx[j] += arow[j] * gi;
                }
            }
            break;
        }
        case Op::matvec_t: {
            const Tensor& a = val(n.in0);
            const Tensor& xv = val(n.in1);
            Tensor& dA = grd(n.in0);
            Tensor& dx = grd(n.in1);
            for (int i = 0; i < a.d0(); ++i) {
                double xi = xv[i];
                double acc = 0.0;
                double* darow = dA.data() + static_cast<size_t>(i) * a.d1();
                const double* arow = a.data() + static_cast<size_t>(i) * a.d1();
                for (int j = 0; j < a.d1(); ++j) {
                    darow[j] += xi * g[j];
                    acc += arow[j] * g[j];
                }
                dx[i] += acc;
            }
            break;
        }
        case Op::embed: {
            Tensor& dE = grd(n.in0);
            double* row = dE.data() + static_cast<size_t>(n.aux_i) * dE.d1();
            for (int j = 0; j < dE.d1(); ++j) row[j] += g[j];
            break;
        }
        case Op::tanh_fn: {
            Tensor& dx = grd(n.in0);
            for (size_t i = 0; i < g.numel(); ++i) dx[i] += g[i] * (1.0 - n.value[i] * n.value[i]);
            break;
        }
        case Op::sigmoid_fn: {
            Tensor& dx = grd(n.in0);
            for (size_t i = 0; i < g.numel(); ++i) dx[i] += g[i] * n.value[i] * (1.0 - n.value[i]);
            break;
        }
        case Op::add: {
            Tensor& da = grd(n.in0);
            Tensor& db = grd(n.in1);
            for (size_t i = 0; i < g.numel(); ++i) {
                da[i] += g[i];
                db[i] += g[i];
            }
            break;
        }
        case Op::mul: {
            const Tensor& av = val(n.in0);
            const Tensor& bv = val(n.in1);
            Tensor& da = grd(n.in0);
            Tensor& db = grd(n.in1);
            for (size_t i = 0; i < g.numel(); ++i) {
                da[i] += g[i] * bv[i];
                db[i] += g[i] * av[i];
            }
            break;
        }
        case Op::scale_shift: {
            Tensor& dx = grd(n.in0);
            for (size_t i = 0; i < g.numel(); ++i) dx[i] += n.alpha * g[i];
            break;
        }
        case Op::concat: {
            Tensor& da = grd(n.in0);
            Tensor& db = grd(n.in1);
            size_t na = da.numel();
            for (size_t i = 0; i < na; ++i) da[i] += g[i];
            for (size_t i = 0; i < db.numel(); ++i) db[i] += g[na + i];
            break;
        }
        case Op::add_rowvec: {
            Tensor& dM = grd(n.in0);
            Tensor& dr = grd(n.in1);
            const Tensor& m = val(n.in0);
            for (int i = 0; i < m.d0(); ++i)
                for (int j = 0; j < m.d1(); ++j) {
                    double gij = g[static_cast<size_t>(i) * m.d1() + j];
                    dM.at(i, j) += gij;
                    dr[j] += gij;
                }
            break;
        }
        case Op::stack_rows: {
            int d = n.value.d1();
            for (int32_t r = 0; r < n.vin_len; ++r) {
                Tensor& drow = grd(vin_[n.vin_off + r]);
                const double* gs = g.data() + static_cast<size_t>(r) * d;
                for (int j = 0; j < d; ++j) drow[j] += gs[j];
            }
            break;
        }
        case Op::softmax: {
            Tensor& dx = grd(n.in0);
            double dot = 0.0;
            for (size_t i = 0; i < g.numel(); ++i) dot += g[i] * n.value[i];
            for (size_t i = 0; i < g.numel(); ++i) dx[i] += n.value[i] * (g[i] - dot);
            break;
        }
        case Op::log_softmax: {
            Tensor& dx = grd(n.in0);
            double gs = 0.0;
            for (size_t i = 0; i < g.numel(); ++i) gs += g[i];
            for (size_t i = 0; i < g.numel(); ++i) dx[i] += g[i] - std::exp(n.value[i]) * gs;
            break;
        }
        case Op::cross_entropy: {
            Tensor& dx = grd(n.in0);
            const Tensor& probs = n.cache[0];
            double g0 = g[0];
            for (size_t i = 0; i < dx.numel(); ++i) dx[i] += g0 * probs[i];
            dx[n.aux_i] -= g0;
            break;
        }
        case Op::pick: {
            grd(n.in0)[n.aux_i] += g[0];
            break;
        }
        case Op::sum: {
            Tensor& dx = grd(n.in0);
            double g0 = g[0];
            for (size_t i = 0; i < dx.numel(); ++i) dx[i] += g0;
            break;
        }
        case Op::gru_cell: {
            const int32_t* in = vin_.data() + n.vin_off;
            const Tensor& xv = val(in[0]);
            const Tensor& hv = val(in[1]);
            const Tensor& z = n.cache[0];
            const Tensor& r = n.cache[1];
            const Tensor& hbar = n.cache[2];
            const Tensor& rh = n.cache[3];
            const int I = xv.d0();
            const int H = hv.d0();

            Tensor& dx = grd(in[0]);
            Tensor& dh = grd(in[1]);

            // Local pre-activation grads.
            std::vector<double> daz(H), dar(H), dac(H), drh(H);
            for (int i = 0; i < H; ++i) {
                double gi = g[i];
                double dz = gi * (hbar[i] - hv[i]);
                double dhbar = gi * z[i];
                dh[i] += gi * (1.0 - z[i]);
                dac[i] = dhbar * (1.0 - hbar[i] * hbar[i]);
                daz[i] = dz * z[i] * (1.0 - z[i]);
            }
            // Candidate gate first: produces drh, which feeds the reset gate.
            {
                const Tensor& Wc = val(in[8]);
                const Tensor& Uc = val(in[9]);
                Tensor& dWc = grd(in[8]);
                Tensor& dUc = grd(in[9]);
                Tensor& dbc = grd(in[10]);
                for (int i = 0; i < H; ++i) {
                    double d = dac[i];
                    dbc[i] += d;
                    double* dwrow = dWc.data() + static_cast<size_t>(i) * I;
                    const double* wrow = Wc.data() + static_cast<size_t>(i) * I;
                    for (int j = 0; j < I; ++j) {
                        dwrow[j] += d * xv[j];
                        dx[j] += wrow[j] * d;
                    }
                    double* durow = dUc.data() + static_cast<size_t>(i) * H;
                    const double* urow = Uc.data() + static_cast<size_t>(i) * H;
                    for (int j = 0; j < H; ++j) {
                        durow[j] += d * rh[j];
                        drh[j] += urow[j] * d;
                    }
                }
            }
            for (int i = 0; i < H; ++i) {
                double dr = drh[i] * hv[i];
                dh[i] += drh[i] * r[i];
                dar[i] = dr * r[i] * (1.0 - r[i]);
            }
            auto gate_backward = [&](int wi, int ui, int bi, const std::vector<double>& da) {
                const Tensor& W = val(in[wi]);
                const Tensor& U = val(in[ui]);
                Tensor& dW = grd(in[wi]);
                Tensor& dU = grd(in[ui]);
                Tensor& db = grd(in[bi]);
                for (int i = 0; i < H; ++i) {
                    double d = da[i];
                    db[i] += d;
                    double* dwrow = dW.data() + static_cast<size_t>(i) * I;
                    const double* wrow = W.data() + static_cast<size_t>(i) * I;
                    for (int j = 0; j < I; ++j) {
                        dwrow[j] += d * xv[j];
                        dx[j] += wrow[j] * d;
                    }
                    double* durow = dU.data() + static_cast<size_t>(i) * H;
                    const double* urow = U.data() + static_cast<size_t>(i) * H;
                    for (int j = 0; j < H; ++j) {
                        durow[j] += d * hv[j];
                        dh[j] += urow[j] * d;
                    }
                }
            };
            gate_backward(2, 3, 4, daz);
            gate_backward(5, 6, 7, dar);
            break;
        }
        case Op::logsumexp: {
            double v = n.value[0];
            double g0 = g[0];
            for (int32_t i = 0; i < n.vin_len; ++i) {
                int32_t tid = vin_[n.vin_off + i];
                grd(tid)[0] += g0 * std::exp(val(tid)[0] - v);
            }
            break;
        }
        case Op::lincomb: {
            double g0 = g[0];
            for (int32_t i = 0; i < n.vin_len; ++i)
                grd(vin_[n.vin_off + i])[0] += g0 * n.coeffs[i];
            break;
        }
    }
}

}  // namespace semimt
