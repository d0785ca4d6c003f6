#include "confsim/outer.hpp"

#include <cmath>
#include <stdexcept>

namespace confsim {

namespace {
enum OpCode { kConst = 0, kVar, kAdd, kMul, kTanh };
}

struct Expr::Node {
    int op = kConst;
    double value = 0;  // Const
    int index = 0;     // Var
    std::vector<Expr> kids;
};

Expr Expr::make(int op, double value, int index, std::vector<Expr> kids) {
    auto n = std::make_shared<Node>();
    n->op = op;
    n->value = value;
    n->index = index;
    n->kids = std::move(kids);
    return Expr(std::move(n));
}

Expr Expr::constant(double c) { return make(kConst, c, 0, {}); }

Expr Expr::var(int index) {
    if (index < 0) throw std::invalid_argument("Expr::var: negative index");
    return make(kVar, 0, index, {});
}

double Expr::eval(const std::vector<double>& args) const {
    if (!node_) return 0;
    switch (node_->op) {
        case kConst: return node_->value;
        case kVar:
            if (static_cast<size_t>(node_->index) >= args.size())
                throw std::out_of_range("Expr::eval: missing argument");
            return args[static_cast<size_t>(node_->index)];
        case kAdd: {
            double s = 0;
            for (const auto& k : node_->kids) s += k.eval(args);
            return s;
        }
        case kMul: {
            double p = 1;
            for (const auto& k : node_->kids) p *= k.eval(args);
            return p;
        }
        case kTanh: return std::tanh(node_->kids[0].eval(args));
    }
    return 0;
}

Expr Expr::diff(int index) const {
    if (!node_) return constant(0);
    switch (node_->op) {
        case kConst: return constant(0);
        case kVar: return constant(node_->index == index ? 1.0 : 0.0);
        case kAdd: {
            std::vector<Expr> kids;
            kids.reserve(node_->kids.size());
            for (const auto& k : node_->kids) kids.push_back(k.diff(index));
            return make(kAdd, 0, 0, std::move(kids));
        }
        case kMul: {
            std::vector<Expr> terms;
            for (size_t i = 0; i < node_->kids.size(); ++i) {
                std::vector<Expr> factors;
                for (size_t j = 0; j < node_->kids.size(); ++j)
                    factors.push_back(i == j ? node_->kids[j].diff(index) : node_->kids[j]);
                terms.push_back(make(kMul, 0, 0, std::move(factors)));
            }
            return make(kAdd, 0, 0, std::move(terms));
        }
        case kTanh: {
            // d tanh(u) = (1 - tanh(u)^2) u'
            Expr t = make(kTanh, 0, 0, {node_->kids[0]});
            Expr sech2 = constant(1.0) - t * t;
            return sech2 * node_->kids[0].diff(index);
        }
    }
    return constant(0);
}

int Expr::arity() const {
    if (!node_) return 0;
    switch (node_->op) {
        case kConst: return 0;
        case kVar: return node_->index + 1;
        default: {
            int m = 0;
            for (const auto& k : node_->kids) m = std::max(m, k.arity());
            return m;
        }
    }
}

Expr Expr::compose(const std::vector<Expr>& inner) const {
    if (!node_) return constant(0);
    switch (node_->op) {
        case kConst: return constant(node_->value);
        case kVar:
            if (static_cast<size_t>(node_->index) >= inner.size())
                throw std::out_of_range("Expr::compose: missing inner expression");
            return inner[static_cast<size_t>(node_->index)];
        case kAdd:
        case kMul: {
            std::vector<Expr> kids;
            kids.reserve(node_->kids.size());
            for (const auto& k : node_->kids) kids.push_back(k.compose(inner));
            return make(node_->op, 0, 0, std::move(kids));
        }
        case kTanh: return make(kTanh, 0, 0, {node_->kids[0].compose(inner)});
    }
    return constant(0);
}

Expr operator+(const Expr& a, const Expr& b) { return Expr::make(kAdd, 0, 0, {a, b}); }
Expr operator-(const Expr& a, const Expr& b) { return Expr::make(kAdd, 0, 0, {a, Expr::constant(-1.0) * b}); }
Expr operator*(const Expr& a, const Expr& b) { return Expr::make(kMul, 0, 0, {a, b}); }
Expr operator*(double s, const Expr& a) { return Expr::constant(s) * a; }
Expr operator+(const Expr& a, double c) { return a + Expr::constant(c); }
Expr operator-(double c, const Expr& a) { return Expr::constant(c) - a; }

Expr tanh(const Expr& a) { return Expr::make(kTanh, 0, 0, {a}); }

Expr pow_int(const Expr& a, int k) {
    if (k < 0) throw std::invalid_argument("pow_int: negative exponent");
    if (k == 0) return Expr::constant(1.0);
    Expr r = a;
    for (int i = 1; i < k; ++i) r = r * a;
    return r;
}

}  // namespace confsim
