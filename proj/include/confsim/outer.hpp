#pragma once

#include <memory>
#include <vector>

namespace confsim {

// Closed algebra of outer functions g : R^N -> R for cylinder functions:
// polynomials and tanh-compositions, with exact symbolic derivatives. Keeping
// derivatives symbolic (rather than numeric) is what lets the second-order
// identities hold to 1e-10.
class Expr {
public:
    static Expr constant(double c);
    static Expr var(int index);

    Expr() = default;

    double eval(const std::vector<double>& args) const;
    Expr diff(int index) const;

    // Highest variable index referenced, plus one.
    int arity() const;

    friend Expr operator+(const Expr& a, const Expr& b);
    friend Expr operator-(const Expr& a, const Expr& b);
    friend Expr operator*(const Expr& a, const Expr& b);
    friend Expr operator*(double s, const Expr& a);
    friend Expr operator+(const Expr& a, double c);
    friend Expr operator-(double c, const Expr& a);

    friend Expr tanh(const Expr& a);
    friend Expr pow_int(const Expr& a, int k);

    // g(h_1, ..., h_M): substitute expressions for the variables.
    Expr compose(const std::vector<Expr>& inner) const;

    struct Node;

private:
    std::shared_ptr<const Node> node_;
    explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    static Expr make(int op, double value, int index, std::vector<Expr> kids);
};

}  // namespace confsim
