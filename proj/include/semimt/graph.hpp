#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "semimt/param_store.hpp"
#include "semimt/tensor.hpp"

namespace semimt {

// Handle into a Graph's tape.
struct NodeRef {
    int32_t id = -1;
    bool valid() const { return id >= 0; }
};

// Reverse-mode tape over tensor operations. A Graph records one forward
// computation; backward() walks the tape once and flushes parameter
// gradients into the bound GradStore sinks. Tape order is topological by
// construction (an op only consumes earlier nodes).
//
// The operation set: affine map (and its matvec specializations), embedding
// lookup, tanh, sigmoid, elementwise add/mul, scale-and-shift by constants,
// concatenation (vectors and row stacking), broadcast row addition, softmax,
// log-softmax, cross-entropy against a token index, plus fused kernels for
// the GRU cell, log-sum-exp and linear combination of scalars.
class Graph {
public:
    // Binds a parameter store; gradients flush into `sink` (pass the store's
    // own accumulators for in-place training, or a private buffer for
    // parallel batch items). Returns a slot for param().
    int bind(const ParameterStore& store, GradStore& sink);

    NodeRef constant(Tensor t);
    NodeRef scalar(double v);
    NodeRef param(int slot, int param_index);

    // affine: W[m,n] * x[n] + b[m]
    NodeRef affine(NodeRef W, NodeRef x, NodeRef b);
    // matvec: A[m,n] * x[n] -> [m]
    NodeRef matvec(NodeRef A, NodeRef x);
    // matvec_t: A^T * x, A[m,n], x[m] -> [n]
    NodeRef matvec_t(NodeRef A, NodeRef x);
    // embedding row lookup: E[V,d] -> [d]
    NodeRef embed(NodeRef E, int row);

    NodeRef tanh(NodeRef x);
    NodeRef sigmoid(NodeRef x);
    NodeRef add(NodeRef a, NodeRef b);
    NodeRef mul(NodeRef a, NodeRef b);
    // alpha * x + beta, elementwise with scalar constants
    NodeRef scale_shift(NodeRef x, double alpha, double beta);
    NodeRef concat(NodeRef a, NodeRef b);
    // M[t,d] + broadcast row r[d]
    NodeRef add_rowvec(NodeRef M, NodeRef r);
    // stacks equal-length vectors into a [t,d] matrix
    NodeRef stack_rows(std::span<const NodeRef> rows);

    NodeRef softmax(NodeRef x);
    NodeRef log_softmax(NodeRef x);
    // -log softmax(logits)[index], scalar
    NodeRef cross_entropy(NodeRef logits, int index);
    // x[index], scalar
    NodeRef pick(NodeRef x, int index);
    NodeRef sum(NodeRef x);

    // Fused GRU cell: h' = (1-z)*h + z*hbar with
    //   z = sigmoid(Wz x + Uz h + bz), r = sigmoid(Wr x + Ur h + br),
    //   hbar = tanh(Wc x + Uc (r*h) + bc).
    NodeRef gru_cell(NodeRef x, NodeRef h, NodeRef Wz, NodeRef Uz, NodeRef bz, NodeRef Wr,
                     NodeRef Ur, NodeRef br, NodeRef Wc, NodeRef Uc, NodeRef bc);

    // log sum_i exp(s_i) over scalar nodes
    NodeRef logsumexp(std::span<const NodeRef> terms);
    // sum_i c_i * s_i over scalar nodes
    NodeRef lincomb(std::span<const NodeRef> terms, std::span<const double> coeffs);

    const Tensor& value(NodeRef n) const { return nodes_[n.id].value; }
    double scalar_value(NodeRef n) const;

    // Accumulates dLoss/dParam into every bound sink. Repeated calls add.
    void backward(NodeRef loss);

    size_t size() const { return nodes_.size(); }
    void reserve(size_t n) { nodes_.reserve(n); }

private:
    enum class Op : uint8_t {
        constant,
        param,
        affine,
        matvec,
        matvec_t,
        embed,
        tanh_fn,
        sigmoid_fn,
        add,
        mul,
        scale_shift,
        concat,
        add_rowvec,
        stack_rows,
        softmax,
        log_softmax,
        cross_entropy,
        pick,
        sum,
        gru_cell,
        logsumexp,
        lincomb,
    };

    struct Node {
        Op op;
        int32_t in0 = -1, in1 = -1, in2 = -1;
        int32_t vin_off = 0, vin_len = 0;  // variadic inputs in vin_
        int32_t aux_i = -1;                // token/row index, or param slot
        int32_t aux_j = -1;                // param index within slot
        double alpha = 0.0, beta = 0.0;
        Tensor value;
        Tensor grad;
        std::vector<Tensor> cache;          // forward intermediates needed by backward
        std::vector<double> coeffs;         // lincomb weights
    };

    struct Binding {
        const ParameterStore* store;
        GradStore* sink;
        std::vector<int32_t> param_nodes;  // cache: param index -> node id
    };

    NodeRef push(Node n);
    Node& at(NodeRef r) { return nodes_[r.id]; }
    const Tensor& val(int32_t id) const { return nodes_[id].value; }
    Tensor& grd(int32_t id);
    void backward_node(int32_t id);
    void check_vector(NodeRef r, const char* who) const;

    std::vector<Node> nodes_;
    std::vector<int32_t> vin_;
    std::vector<Binding> bindings_;
    bool grads_ready_ = false;
};

}  // namespace semimt
