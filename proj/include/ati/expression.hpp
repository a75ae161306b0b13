#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "ati/trajectory.hpp"

namespace ati {

/// Closed arithmetic expression over state variables x1..xn and inputs u1..um.
///
/// Supported nodes are constants, variables, +, -, * and nonnegative integer
/// powers. Expressions are immutable and cheap to copy.
class Expr {
public:
    enum class Kind { Constant, State, Input, Add, Sub, Mul, Neg, Pow };

    struct Node;

    static Expr constant(double v);
    static Expr state(int index);
    static Expr input(int index);
    static Expr pow(const Expr& base, int exponent);

    friend Expr operator+(const Expr& a, const Expr& b);
    friend Expr operator-(const Expr& a, const Expr& b);
    friend Expr operator*(const Expr& a, const Expr& b);
    friend Expr operator-(const Expr& a);

    /// Parses infix text such as "x1^2 - 3*u1 + 0.5".
    static Expr parse(std::string_view text);

    double evaluate(const Vector& x, const Vector& u) const;

    /// Value and derivative with respect to one variable (State or Input kind).
    struct Dual {
        double value;
        double slope;
    };
    Dual differentiate(const Vector& x, const Vector& u, Kind wrt, int index) const;

    Kind kind() const;
    /// Constant value, variable index (1-based) or exponent, depending on kind().
    double constantValue() const;
    int index() const;
    int exponent() const;
    const std::vector<Expr>& children() const;

    /// Highest variable index referenced per kind; 0 when unused.
    int maxStateIndex() const;
    int maxInputIndex() const;

    std::string toString() const;

private:
    explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) { }

    std::shared_ptr<const Node> node_;
};

/// x(t+1) = f(x(t), u(t)), y(t) = h(x(t), u(t)).
struct NonlinearPlant {
    int n = 0;
    int m = 0;
    std::vector<Expr> f;
    std::vector<Expr> h;

    int p() const noexcept { return static_cast<int>(h.size()); }
    /// Throws DimensionMismatch when f has the wrong length or an expression
    /// references a variable outside x1..xn, u1..um.
    void validate() const;

    Vector evalF(const Vector& x, const Vector& u) const;
    Vector evalH(const Vector& x, const Vector& u) const;
};

} // namespace ati
